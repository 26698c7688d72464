#include "modular/lm.hpp"

#include <doctest.h>

#include <cmath>

using modular::Lm_closed;
using modular::Lm_quad;

TEST_CASE("closed form special values") {
    for (double u : {0.2, 0.5, 2.0, 7.0}) CHECK(Lm_closed(0, u) == doctest::Approx(std::log(u) / (u - 1)).epsilon(1e-14));
    for (int m = 0; m <= 4; ++m) CHECK(Lm_closed(m, 1.0) == doctest::Approx(1.0 / (m + 1)).epsilon(1e-15));
    CHECK(Lm_closed(1, 2.0) == doctest::Approx(-(std::log(2.0) - 1)).epsilon(1e-14));
}

TEST_CASE("quadrature oracle") {
    CHECK(Lm_quad(0, 1.0, 1e-13) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(Lm_quad(1, 1.0, 1e-13) == doctest::Approx(0.5).epsilon(1e-12));
    for (int m = 0; m <= 3; ++m)
        for (double u : {1e-3, 0.3, 0.95, 1.0, 1.04, 3.0, 50.0}) {
            INFO("m=" << m << " u=" << u);
            CHECK(std::abs(Lm_closed(m, u) - Lm_quad(m, u, 1e-13)) < 1e-10);
        }
}

TEST_CASE("series and closed form agree where both are accurate") {
    for (int m = 0; m <= 3; ++m)
        for (double u : {0.92, 0.97, 1.03, 1.08}) CHECK(std::abs(modular::Lm_series(m, u) - Lm_quad(m, u, 1e-13)) < 1e-12);
}

TEST_CASE("closed form is continuous across the series boundary") {
    for (int m = 0; m <= 3; ++m) {
        const double a = 1 + modular::kSeriesRadius;
        CHECK(std::abs(Lm_closed(m, a * (1 - 1e-12)) - Lm_closed(m, a * (1 + 1e-12))) < 1e-10);
    }
}

TEST_CASE("matrix function on the identity and on a diagonal") {
    const modular::Matrix I = modular::Matrix::Identity(4, 4);
    for (int m = 0; m <= 3; ++m) CHECK((modular::matrix_Lm(m, I) - I / double(m + 1)).norm() < 1e-12);
    modular::Matrix D = modular::Matrix::Zero(3, 3);
    D(0, 0) = 0.5;
    D(1, 1) = 2.0;
    D(2, 2) = 4.0;
    const auto L = modular::matrix_Lm(0, D);
    for (int j = 0; j < 3; ++j) {
        const double u = D(j, j).real();
        CHECK(std::abs(L(j, j) - std::log(u) / (u - 1)) < 1e-12);
    }
}

TEST_CASE("matrix function on a non-normal matrix with positive spectrum") {
    modular::Matrix S(2, 2), Dg = modular::Matrix::Zero(2, 2);
    S << 1.0, 0.4, 0.2, 1.0;
    Dg(0, 0) = 0.3;
    Dg(1, 1) = 3.0;
    const modular::Matrix A = S * Dg * S.inverse();
    modular::Matrix Ld = modular::Matrix::Zero(2, 2);
    Ld(0, 0) = Lm_closed(2, 0.3);
    Ld(1, 1) = Lm_closed(2, 3.0);
    CHECK((modular::matrix_Lm(2, A) - S * Ld * S.inverse()).norm() < 1e-12);
}

TEST_CASE("negative spectrum is rejected") {
    modular::Matrix D = modular::Matrix::Identity(2, 2);
    D(1, 1) = -1.0;
    CHECK_THROWS(modular::matrix_Lm(0, D));
}

#include "../support.hpp"
#include "heat/pipeline.hpp"
#include "modular/lm.hpp"
#include "ncalg/leading.hpp"
#include "nctorus/radial.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

using namespace nctorus;
using testing_support::random_interior;

namespace {
TorusParams params(int N) {
    TorusParams p;
    p.N = N;
    return p;
}
double dist(const NCElement& a, const NCElement& b) { return (a - b).sup_norm(); }
}  // namespace

TEST_CASE("commutation relation and unit") {
    const auto p = params(3);
    const auto U = NCElement::monomial(p, 1, 0), V = NCElement::monomial(p, 0, 1);
    const cplx q = std::polar(1.0, 2 * M_PI * p.theta);
    CHECK(dist(nc_mul(V, U), q * nc_mul(U, V)) < 1e-15);
    std::mt19937_64 g(3);
    const auto a = random_interior(p, g, 2);
    CHECK(dist(nc_mul(NCElement::unit(p), a), a) < 1e-15);
}

TEST_CASE("parallel and serial products are identical") {
    const auto p = params(6);
    std::mt19937_64 g(4);
    const auto a = random_interior(p, g, 6), b = random_interior(p, g, 6);
    CHECK(nc_mul(a, b).coeffs() == nc_mul_serial(a, b).coeffs());
    CHECK(left_mult_matrix(a) == left_mult_matrix_serial(a));
}

TEST_CASE("multiplication matrices") {
    const auto p = params(4);
    std::mt19937_64 g(5);
    const auto a = random_interior(p, g, 2), b = random_interior(p, g, 2);
    CHECK(dist(nctorus::apply(left_mult_matrix(a), b), nc_mul(a, b)) < 1e-12);
    CHECK(dist(nctorus::apply(right_mult_matrix(b), a), nc_mul(a, b)) < 1e-12);
}

TEST_CASE("derivations") {
    const auto p = params(3);
    const auto U = NCElement::monomial(p, 1, 0), V = NCElement::monomial(p, 0, 1);
    CHECK(dist(nc_delta(1, U), U) < 1e-15);
    CHECK(dist(nc_delta(2, nc_mul(U, V)), nc_mul(U, V)) < 1e-15);
    std::mt19937_64 g(6);
    const auto a = random_interior(p, g, 3);
    CHECK(std::abs(nc_trace(nc_delta(1, a))) == 0.0);
    CHECK(std::abs(nc_trace(nc_delta(2, a))) == 0.0);
    CHECK(dist(nc_delta(1, nc_delta(2, a)), nc_delta(2, nc_delta(1, a))) < 1e-14);
}

TEST_CASE("exponential") {
    const auto p = params(12);
    CHECK(dist(nc_exp(NCElement(p)), NCElement::unit(p)) < 1e-15);
    // small enough that exp(±h) is negligible outside the window
    const auto h = random_selfadjoint(p, 7, 0.1);
    CHECK(dist(nc_mul(nc_exp(h), nc_exp(-1.0 * h)), NCElement::unit(p)) < 1e-10);
    const auto half = nc_exp(0.5 * h);
    CHECK(dist(nc_mul(half, half), nc_exp(h)) < 1e-10);
}

TEST_CASE("json round trip of elements") {
    const auto p = params(2);
    const auto h = random_selfadjoint(p, 8, 1.0);
    const auto back = element_from_json(nlohmann::json::parse(to_json(h).dump()));
    CHECK(back.N() == 2);
    CHECK(dist(back, h) == 0.0);
    CHECK_THROWS(element_from_json(nlohmann::json{{"N", 1}}));
}

TEST_CASE("Rieffel element") {
    const auto e = rieffel_element(params(16));
    CHECK(std::abs(nc_trace(e) - cplx(params(16).theta)) < 1e-6);
    CHECK(dist(e, nc_adjoint(e)) < 1e-12);
    CHECK(chern_number(e) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(chern_number(NCElement::unit(params(4)))) == 0.0);
    CHECK_THROWS_WITH(rieffel_projection(params(8)), doctest::Contains("certification failed"));
    TorusParams rat = params(8);
    rat.theta = 0.5;
    CHECK_THROWS(rieffel_element(rat));
}

TEST_CASE("modular superoperator") {
    const auto p = params(3);
    CHECK((modular_superop(NCElement(p)) - Matrix::Identity(p.dim(), p.dim())).norm() < 1e-14);
}

TEST_CASE("operator model identities") {
    const auto b = testing_support::small_binding(11, 3);
    const Matrix& E = b.E();
    CHECK((E * E - E).norm() < 1e-12);
    CHECK((E - E.adjoint()).norm() < 1e-12);
    CHECK(std::abs(b.e_fraction() - b.tau(E).real()) < 1e-12);
    const Matrix k = b.kpow(1);
    CHECK((b.twist(2, k) - k).norm() < 1e-10);
    CHECK((b.kpow(2) - k * k).norm() < 1e-10);
    CHECK((b.kpow(-1) * k - Matrix::Identity(b.dim(), b.dim())).norm() < 1e-10);
    // σ(e) = k⁻¹ek
    CHECK(testing_support::rel_diff(eval_expr(ncalg::sigma_e(), b), b.kpow(-1) * E * k) < 1e-10);
    // δ₁δ₂ = δ₂δ₁ and Leibniz
    const Matrix X = eval_expr(ncalg::sigma_e() * ncalg::Kp(2), b);
    CHECK((b.delta(1, b.delta(2, X)) - b.delta(2, b.delta(1, X))).norm() < 1e-10);
    CHECK((b.delta(1, E * k) - b.delta(1, E) * k - E * b.delta(1, k)).norm() < 1e-10);
    CHECK(std::abs(b.tau(b.delta(1, X))) < 1e-12);
}

TEST_CASE("h = 0 gives k = 1 and Dm acts as 1/(m+1)") {
    const auto p = params(2);
    const Binding b = Binding::flat(rieffel_element(p));
    const Matrix I = Matrix::Identity(b.dim(), b.dim());
    CHECK((b.kpow(1) - I).norm() < 1e-14);
    const Matrix X = b.E() * b.delta(1, b.E());
    for (int m = 0; m <= 2; ++m) CHECK((b.Dm(m, X) - X / double(m + 1)).norm() < 1e-12);
}

TEST_CASE("Dm against its defining integral") {
    // Dₘ(X) = ∫₀^∞ xᵐ/(x+1)^{m+1} (xΔ+1)⁻¹(X) dx with Δ(X) = k⁻²Xk²
    const auto b = testing_support::small_binding(12, 1, 0.3);
    const int n = b.dim();
    const Matrix X = eval_expr(ncalg::d(1, ncalg::sigma_e()), b);
    const Matrix km2 = b.kpow(-2), k2 = b.kpow(2);
    const Matrix Id = Matrix::Identity(n * n, n * n);
    // Δ as a superoperator on column-major vec(X): vec(AXB) = (Bᵀ ⊗ A) vec X
    Matrix S(n * n, n * n);
    for (int i = 0; i < n * n; ++i) {
        Matrix Ei = Matrix::Zero(n, n);
        Ei(i % n, i / n) = 1;
        const Matrix col = km2 * Ei * k2;
        S.col(i) = Eigen::Map<const Eigen::VectorXcd>(col.data(), n * n);
    }
    const Eigen::VectorXcd vx = Eigen::Map<const Eigen::VectorXcd>(X.data(), n * n);
    for (int m = 0; m <= 2; ++m) {
        auto f = [&](double x) -> Matrix {
            const Eigen::VectorXcd v = (x * S + Id).partialPivLu().solve(vx);
            return Eigen::Map<const Matrix>(v.data(), n, n) * (std::pow(x, m) / std::pow(x + 1, m + 1));
        };
        const auto q = integrate_half_line(f, 1e-12);
        CHECK(testing_support::rel_diff(q.value, b.Dm(m, X)) < 1e-8);
    }
}

TEST_CASE("matrix quadrature") {
    auto f = [](double x) -> Matrix {
        Matrix m(1, 1);
        m(0, 0) = std::exp(-x) * std::cos(x);
        return m;
    };
    const auto q = integrate_matrix(f, 0, 3, 1e-13);
    CHECK(std::abs(q.value(0, 0) - 0.5 * (1 + std::exp(-3.0) * (std::sin(3.0) - std::cos(3.0)))) < 1e-12);
    auto g = [](double u) -> Matrix { return Matrix::Constant(1, 1, 1.0 / ((u + 1) * (u + 1))); };
    CHECK(std::abs(integrate_half_line(g, 1e-12).value(0, 0) - 1.0) < 1e-9);
    auto h = [](double u) -> Matrix { return Matrix::Constant(1, 1, 1.0 / (u + 1)); };
    CHECK_THROWS_WITH(integrate_half_line(h, 1e-10), doctest::Contains("non-convergent"));
}

TEST_CASE("rearrangement lemma holds when e = 1") {
    // with e = 1 the leading factor is k² and the lemma is the classical one
    const auto p = params(1);
    const Binding b(NCElement::unit(p), random_selfadjoint(p, 13, 0.4));
    const Matrix rho = left_mult_matrix(random_selfadjoint(p, 14, 1.0));
    for (int m = 0; m <= 2; ++m)
        for (int side : {ncalg::kLMinus, ncalg::kLPlus})
            CHECK(testing_support::rel_diff(lemma_lhs(m, rho, b, side), lemma_rhs(m, rho, b, side)) < 1e-8);
}

TEST_CASE("resolvent basis diagonalizes the leading factor") {
    const auto b = testing_support::small_binding(15, 2);
    for (int side : {ncalg::kLMinus, ncalg::kLPlus}) {
        const auto rb = resolvent_basis(b, side);
        const Matrix F = rb.W * rb.f.cast<cplx>().asDiagonal() * rb.Winv;
        CHECK(testing_support::rel_diff(F, b.leading(side)) < 1e-9);
        CHECK(rb.f.minCoeff() >= 0.0);
    }
}

TEST_CASE("resolvent block at r") {
    const auto b = testing_support::small_binding(16, 1);
    const double r = 0.7;
    const Matrix F = b.leading(ncalg::kLMinus);
    const Matrix I = Matrix::Identity(b.dim(), b.dim());
    const Matrix b0 = b.b0(ncalg::kLMinus, 1, 0, r);
    CHECK(testing_support::rel_diff(b0 * (F * r * r + I), I) < 1e-10);
    CHECK(testing_support::rel_diff(b.b0(ncalg::kLMinus, 2, 1, r), b0 * b0 * F) < 1e-10);
}

TEST_CASE("cutoff expansion against quadrature") {
    using boost::math::quadrature::gauss_kronrod;
    struct Case { int a, P; double al; int Q; double be; };
    for (const Case c : {Case{1, 2, 0.7, 2, 1.9}, Case{0, 3, 1.3, 1, 0.0}, Case{3, 2, 0.0, 2, 0.8}, Case{2, 1, 0.5, 1, 0.0},
                         Case{0, 1, 0.0, 1, 0.0}}) {
        const double U = 1e4;
        auto f = [&](double u) { return std::pow(u, c.a) * std::pow(c.al * u + 1, -c.P) * std::pow(c.be * u + 1, -c.Q); };
        const double q = gauss_kronrod<double, 61>::integrate(f, 0.0, U, 30, 1e-14);
        const auto ex = cutoff_integral(c.a, c.P, c.al, c.Q, c.be);
        double v = ex.finite + ex.log * std::log(U);
        for (std::size_t k = 1; k < ex.pow.size(); ++k) v += ex.pow[k] * std::pow(U, double(k));
        INFO("a=" << c.a << " P=" << c.P << " Q=" << c.Q);
        CHECK(std::abs(v - q) < 1e-6 * std::max(1.0, std::abs(q)));
    }
}

TEST_CASE("radial trace of a convergent integrand") {
    // ∫₀^∞ τ(b₀²) r dr with F = k² (e = 1) is τ(F⁻¹)/2
    const auto p = params(1);
    const Binding b(NCElement::unit(p), random_selfadjoint(p, 17, 0.3));
    heat::RadialIntegrand t;
    t.side = ncalg::kLMinus;
    ncalg::B0Node blk;
    blk.side = ncalg::kLMinus;
    blk.power = 2;
    t.add(0, ncalg::Expr(ncalg::Word({blk})));
    const auto r = radial_trace(t, b);
    CHECK(r.convergent());
    CHECK(std::abs(r.value - 0.5 * b.tau(b.leading(ncalg::kLMinus).inverse())) < 1e-10);
}

TEST_CASE("McKean-Singer at e = 1 vanishes") {
    const auto p = params(3);
    const Binding b = Binding::flat(NCElement::unit(p));
    const auto r = mckean_singer_index(b, {0.1, 0.5});
    for (double v : r.value) CHECK(std::abs(v) < 1e-8);
}

#include <cstdio>
#include "modular/lm.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace modular {

double Lm_series(int m, double u) {
    const double t = 1.0 - u;
    double s = 0.0, p = 1.0;
    for (int j = 0; j < 200; ++j) {
        const double term = p / (m + j + 1);
        s += term;
        if (std::abs(term) < 1e-18 * std::abs(s)) break;
        p *= t;
    }
    return s;
}

double Lm_closed(int m, double u) {
    if (!(u > 0.0)) throw std::domain_error("domain: Lm needs u > 0");
    if (m < 0) throw std::domain_error("domain: Lm needs m >= 0");
    if (std::abs(u - 1.0) < kSeriesRadius) return Lm_series(m, u);
    const double t = u - 1.0;
    double s = std::log(u);
    double p = 1.0;
    for (int j = 1; j <= m; ++j) {
        p *= t;
        s -= ((j % 2) ? 1.0 : -1.0) * p / j;
    }
    return ((m % 2) ? -1.0 : 1.0) * s / std::pow(t, m + 1);
}

double Lm_quad(int m, double u, double tol) {
    if (!(u > 0.0)) throw std::domain_error("domain: Lm needs u > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    // t = log(1+x): the integrand (x/(x+1))ᵐ/(xu+1) is smooth in t and decays like e^{−t}/u
    // past t = log(1/u); the rest of the range beyond T is below e^{−40}/u.
    auto f = [m, u](double t) {
        const double x = std::expm1(t);
        return std::pow(-std::expm1(-t), m) / (x * u + 1.0);
    };
    const double T = std::max(0.0, -std::log(u)) + 40.0;
    // a relative target below ~1e-13 only refines roundoff into the error sum
    constexpr double kRel = 1e-13;
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double v = 0.0, err = 0.0;
    for (double a = 0.0; a < T; a += 4.0) {
        double e = 0.0;
        v += GK::integrate(f, a, std::min(a + 4.0, T), 15, kRel, &e);
        err += e;
    }
    err += std::exp(-T) / u;
    if (!(err <= tol) || !std::isfinite(v)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3g", err);
        throw std::runtime_error(std::string("non-convergent: error estimate ") + buf);
    }
    return v;
}

Matrix matrix_Lm(int m, const Matrix& delta, double tol) {
    Eigen::ComplexEigenSolver<Matrix> es(delta);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectrum not positive-real: eigensolver failed");
    const auto& ev = es.eigenvalues();
    Eigen::VectorXcd f(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev[i].imag()) > tol * std::max(1.0, std::abs(ev[i])) || ev[i].real() <= 0.0)
            throw std::runtime_error("spectrum not positive-real");
        f[i] = Lm_closed(m, ev[i].real());
    }
    const Matrix& V = es.eigenvectors();
    return V * f.asDiagonal() * V.partialPivLu().solve(Matrix::Identity(V.rows(), V.cols()));
}

}  // namespace modular

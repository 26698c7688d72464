#include "nctorus/element.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nctorus {

namespace {

void check_same(const NCElement& a, const NCElement& b) {
    if (a.N() != b.N() || a.params().theta != b.params().theta) throw std::invalid_argument("mismatched torus parameters");
}

cplx phase(double theta, long n, long p) {
    const double x = 2.0 * std::numbers::pi * theta * static_cast<double>(n * p);
    return {std::cos(x), std::sin(x)};
}

// One output row m of the twisted convolution. Both kernels call this, so
// the parallel and serial results are identical.
void mul_row(const NCElement& a, const NCElement& b, NCElement& c, int m) {
    const int N = a.N();
    const double th = a.params().theta;
    for (int m1 = -N; m1 <= N; ++m1) {
        const int p = m - m1;
        if (std::abs(p) > N) continue;
        for (int n1 = -N; n1 <= N; ++n1) {
            const cplx x = a.at(m1, n1);
            if (x == cplx(0)) continue;
            const cplx xp = x * phase(th, n1, p);
            for (int q = -N; q <= N; ++q) {
                const int n = n1 + q;
                if (std::abs(n) > N) continue;
                const cplx y = b.at(p, q);
                if (y == cplx(0)) continue;
                c.at(m, n) += xp * y;
            }
        }
    }
}

}  // namespace

NCElement NCElement::unit(const TorusParams& p) {
    NCElement r(p);
    r.at(0, 0) = 1.0;
    return r;
}

NCElement NCElement::monomial(const TorusParams& p, int m, int n, cplx c) {
    NCElement r(p);
    if (r.in_window(m, n)) r.at(m, n) = c;
    return r;
}

NCElement& NCElement::operator+=(const NCElement& o) {
    check_same(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

NCElement& NCElement::operator-=(const NCElement& o) {
    check_same(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

NCElement& NCElement::operator*=(cplx s) {
    for (auto& x : c_) x *= s;
    return *this;
}

double NCElement::sup_norm() const {
    double s = 0;
    for (const auto& x : c_) s = std::max(s, std::abs(x));
    return s;
}

double NCElement::l1_norm() const {
    double s = 0;
    for (const auto& x : c_) s += std::abs(x);
    return s;
}

NCElement nc_mul(const NCElement& a, const NCElement& b) {
    check_same(a, b);
    NCElement c(a.params());
    const int N = a.N();
#pragma omp parallel for schedule(dynamic)
    for (int m = -N; m <= N; ++m) mul_row(a, b, c, m);
    return c;
}

NCElement nc_mul_serial(const NCElement& a, const NCElement& b) {
    check_same(a, b);
    NCElement c(a.params());
    for (int m = -a.N(); m <= a.N(); ++m) mul_row(a, b, c, m);
    return c;
}

NCElement nc_delta(int i, const NCElement& a) {
    if (i != 1 && i != 2) throw std::invalid_argument("derivation index must be 1 or 2");
    NCElement r = a;
    for (int m = -a.N(); m <= a.N(); ++m)
        for (int n = -a.N(); n <= a.N(); ++n) r.at(m, n) *= static_cast<double>(i == 1 ? m : n);
    return r;
}

NCElement nc_adjoint(const NCElement& a) {
    // (UᵐVⁿ)* = V⁻ⁿU⁻ᵐ = e^{2πiθmn} U⁻ᵐV⁻ⁿ
    NCElement r(a.params());
    const double th = a.params().theta;
    for (int m = -a.N(); m <= a.N(); ++m)
        for (int n = -a.N(); n <= a.N(); ++n) r.at(-m, -n) = std::conj(a.at(m, n)) * phase(th, m, n);
    return r;
}

cplx nc_trace(const NCElement& a) { return a.at(0, 0); }

NCElement nc_exp(const NCElement& a) {
    // scaling and squaring; ‖·‖₁ is submultiplicative for the twisted convolution
    const double nrm = a.l1_norm();
    int s = 0;
    while (nrm / std::ldexp(1.0, s) > 0.5) ++s;
    NCElement x = a;
    x *= std::ldexp(1.0, -s);
    const double xn = nrm * std::ldexp(1.0, -s);
    NCElement sum = NCElement::unit(a.params());
    NCElement term = sum;
    double tn = 1.0;
    bool ok = false;
    for (int j = 1; j <= 40; ++j) {
        term = nc_mul(term, x);
        term *= 1.0 / j;
        sum += term;
        tn *= xn / j;
        // remainder ≤ Σ_{i>j} xnⁱ/i! ≤ tn·xn/(j+1)·2 for xn ≤ 1/2
        if (2.0 * tn * xn / (j + 1) < 1e-17) {
            ok = true;
            break;
        }
    }
    if (!ok) throw std::runtime_error("non-convergent: exponential series");
    for (int i = 0; i < s; ++i) sum = nc_mul(sum, sum);
    return sum;
}

nlohmann::json to_json(const NCElement& a) {
    nlohmann::json c = nlohmann::json::array();
    for (int m = -a.N(); m <= a.N(); ++m)
        for (int n = -a.N(); n <= a.N(); ++n) {
            auto v = a.at(m, n);
            if (v != cplx(0)) c.push_back({m, n, v.real(), v.imag()});
        }
    return {{"N", a.N()}, {"theta", a.params().theta}, {"coeffs", c}};
}

NCElement element_from_json(const nlohmann::json& j) {
    TorusParams p;
    p.N = j.at("N").get<int>();
    p.theta = j.at("theta").get<double>();
    if (p.N <= 0) throw std::invalid_argument("N must be positive");
    NCElement a(p);
    for (const auto& e : j.at("coeffs")) {
        int m = e.at(0), n = e.at(1);
        if (!a.in_window(m, n)) throw std::invalid_argument("coefficient outside the window");
        a.at(m, n) = cplx(e.at(2).get<double>(), e.at(3).get<double>());
    }
    return a;
}

namespace {

double step(double t, const RieffelProfile& pr) {
    if (t <= 0) return 0;
    if (t >= 1) return 1;
    const double A = std::exp(-pr.c / std::pow(t, pr.a));
    const double B = std::exp(-pr.c / std::pow(1 - t, pr.a));
    return A / (A + B);
}

void check_theta(double th) {
    if (!(th > 0 && th < 1)) throw std::invalid_argument("theta must lie in (0,1)");
    for (int q = 1; q <= 6; ++q)
        for (int p = 0; p <= q; ++p)
            if (std::abs(th - static_cast<double>(p) / q) < 1e-6)
                throw std::invalid_argument("theta too close to a rational with small denominator");
}

}  // namespace

NCElement rieffel_element(const TorusParams& par, const RieffelProfile& pr) {
    check_theta(par.theta);
    const double th = par.theta, eps = pr.eps;
    if (!(eps > 0 && eps <= th && th + eps <= 1.0)) throw std::invalid_argument("profile width incompatible with theta");
    const int M = pr.grid;
    std::vector<double> f(M), g(M);
    for (int i = 0; i < M; ++i) {
        const double x = static_cast<double>(i) / M;
        double fv = 0, gv = 0;
        if (x < eps) {
            const double s = std::sin(std::numbers::pi / 2 * step(x / eps, pr));
            fv = s * s;
        } else if (x < th) {
            fv = 1;
        } else if (x < th + eps) {
            const double s = std::sin(std::numbers::pi / 2 * step((x - th) / eps, pr));
            const double ph = s * s;
            fv = 1 - ph;
            gv = std::sqrt(std::max(ph * (1 - ph), 0.0));
        }
        f[i] = fv;
        g[i] = gv;
    }
    NCElement e(par);
    for (int m = -par.N; m <= par.N; ++m) {
        cplx fh = 0, gh = 0;
        for (int i = 0; i < M; ++i) {
            const double x = 2.0 * std::numbers::pi * m * static_cast<double>(i) / M;
            const cplx w(std::cos(x), -std::sin(x));
            fh += f[i] * w;
            gh += g[i] * w;
        }
        fh /= static_cast<double>(M);
        gh /= static_cast<double>(M);
        e.at(m, 0) += fh;
        e.at(m, 1) += gh * phase(th, 1, m);
        e.at(m, -1) += gh;
    }
    return e;
}

NCElement rieffel_projection(const TorusParams& p, const RieffelProfile& prof) {
    NCElement e = rieffel_element(p, prof);
    const double idem = (nc_mul(e, e) - e).sup_norm();
    const double herm = (nc_adjoint(e) - e).sup_norm();
    if (!(idem < 1e-8) || !(herm < 1e-12))
        throw std::runtime_error("certification failed: |e^2-e| = " + std::to_string(idem) +
                                 ", |e-e*| = " + std::to_string(herm));
    return e;
}

cplx chern_number_complex(const NCElement& e) {
    NCElement d1 = nc_delta(1, e), d2 = nc_delta(2, e);
    NCElement a = nc_mul(nc_mul(e, d1), d2);
    NCElement b = nc_mul(nc_mul(e, d2), d1);
    return cplx(0, 2.0 * std::numbers::pi) * nc_trace(a - b);
}

double chern_number(const NCElement& e) { return chern_number_complex(e).real(); }

namespace {

template <bool Left>
Matrix mult_matrix(const NCElement& x, bool parallel) {
    const auto& p = x.params();
    const int N = p.N, W = p.width();
    Matrix M = Matrix::Zero(p.dim(), p.dim());
    auto column = [&](int col) {
        const int pm = col / W - N, pn = col % W - N;
        for (int m = -N; m <= N; ++m)
            for (int n = -N; n <= N; ++n) {
                const cplx c = x.at(m, n);
                if (c == cplx(0)) continue;
                // Left: x·U^{pm}V^{pn}; Right: U^{pm}V^{pn}·x
                const int rm = m + pm, rn = n + pn;
                if (std::abs(rm) > N || std::abs(rn) > N) continue;
                const cplx ph = Left ? phase(p.theta, n, pm) : phase(p.theta, pn, m);
                M(x.index(rm, rn), col) += c * ph;
            }
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int col = 0; col < p.dim(); ++col) column(col);
    } else {
        for (int col = 0; col < p.dim(); ++col) column(col);
    }
    return M;
}

}  // namespace

Matrix left_mult_matrix(const NCElement& x) { return mult_matrix<true>(x, true); }
Matrix left_mult_matrix_serial(const NCElement& x) { return mult_matrix<true>(x, false); }
Matrix right_mult_matrix(const NCElement& x) { return mult_matrix<false>(x, true); }

NCElement apply(const Matrix& op, const NCElement& a) {
    Eigen::Map<const Eigen::VectorXcd> v(a.coeffs().data(), a.params().dim());
    Eigen::VectorXcd r = op * v;
    NCElement out(a.params());
    for (int i = 0; i < a.params().dim(); ++i) out.coeffs()[i] = r[i];
    return out;
}

Matrix modular_superop(const NCElement& h) {
    NCElement kinv2 = nc_exp(-1.0 * h);
    NCElement k2 = nc_exp(h);
    return left_mult_matrix(kinv2) * right_mult_matrix(k2);
}

}  // namespace nctorus

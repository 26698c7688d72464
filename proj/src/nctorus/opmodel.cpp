#include "nctorus/opmodel.hpp"

#include "modular/lm.hpp"
#include "ncalg/leading.hpp"
#include "ncalg/io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nctorus {

using ncalg::Atom;
using ncalg::B0Node;
using ncalg::Base;
using ncalg::DmNode;
using ncalg::Word;

namespace {

Matrix hermitian_part(const Matrix& A) { return (A + A.adjoint()) / 2.0; }

}  // namespace

Binding::Binding(const NCElement& e, const NCElement& h) : p_(e.params()) {
    if (h.N() != p_.N || h.params().theta != p_.theta) throw std::invalid_argument("mismatched torus parameters");
    if ((nc_adjoint(e) - e).sup_norm() > 1e-12) throw std::invalid_argument("e is not self-adjoint");
    if ((nc_adjoint(h) - h).sup_norm() > 1e-12) throw std::invalid_argument("h is not self-adjoint");
    Eigen::SelfAdjointEigenSolver<Matrix> se(hermitian_part(left_mult_matrix(e)));
    const auto& w = se.eigenvalues();
    Matrix P = Matrix::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i)
        if (w[i] > 0.5) P += se.eigenvectors().col(i) * se.eigenvectors().col(i).adjoint();
    E_ = P;
    Eigen::SelfAdjointEigenSolver<Matrix> sh(hermitian_part(left_mult_matrix(h)));
    V_ = sh.eigenvectors();
    kappa_ = (sh.eigenvalues() / 2.0).array().exp();
    d1_.resize(dim());
    d2_.resize(dim());
    const int W = p_.width();
    for (int i = 0; i < dim(); ++i) {
        d1_[i] = i / W - p_.N;
        d2_[i] = i % W - p_.N;
    }
}

double Binding::e_fraction() const { return E_.trace().real() / dim(); }

const Matrix& Binding::kpow(int n) const {
    const Matrix* out = nullptr;
#pragma omp critical(nctorus_binding_cache)
    {
        auto it = kpow_cache_.find(n);
        if (it == kpow_cache_.end()) {
            Eigen::VectorXd d = kappa_.array().pow(n);
            it = kpow_cache_.emplace(n, V_ * d.cast<cplx>().asDiagonal() * V_.adjoint()).first;
        }
        out = &it->second;
    }
    return *out;
}

Matrix Binding::twist(int s, const Matrix& X) const {
    if (s == 0) return X;
    return kpow(-s) * X * kpow(s);
}

Matrix Binding::delta(int i, const Matrix& X) const {
    const auto& d = Ddiag(i);
    Matrix R = X;
    for (int r = 0; r < dim(); ++r)
        for (int c = 0; c < dim(); ++c) R(r, c) *= d[r] - d[c];
    return R;
}

Matrix Binding::Dm(int m, const Matrix& X) const {
    Matrix Y = V_.adjoint() * X * V_;
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) {
            const double u = kappa_[j] * kappa_[j] / (kappa_[i] * kappa_[i]);
            Y(i, j) *= modular::Lm_closed(m, u);
        }
    return V_ * Y * V_.adjoint();
}

const Matrix& Binding::leading(int side) const {
    {
        const Matrix* out = nullptr;
#pragma omp critical(nctorus_binding_cache)
        {
            auto it = lead_cache_.find(side);
            if (it != lead_cache_.end()) out = &it->second;
        }
        if (out) return *out;
    }
    Matrix F = eval_word(ncalg::leading_factor(side), *this);
    const Matrix* out = nullptr;
#pragma omp critical(nctorus_binding_cache)
    out = &lead_cache_.emplace(side, std::move(F)).first->second;
    return *out;
}

Matrix Binding::b0(int side, int power, int fpow, double r) const {
    const Matrix F = leading(side);
    const Matrix I = Matrix::Identity(dim(), dim());
    const Matrix B = (F * (r * r) + I).partialPivLu().solve(I);
    Matrix out = I;
    for (int j = 0; j < power; ++j) out = out * B;
    for (int j = 0; j < fpow; ++j) out = out * F;
    return out;
}

cplx coefficient_value(const ncalg::Coefficient& c) {
    cplx v(c.val.re.to_double(), c.val.im.to_double());
    return v * std::pow(std::numbers::pi, c.pi_pow);
}

double coefficient_value_re(const ncalg::Coefficient& c) { return coefficient_value(c).real(); }

namespace {

Matrix eval_atom(const Atom& a, const Binding& b) {
    Matrix X;
    switch (a.base) {
        case Base::E: X = b.twist(a.twist, b.E()); break;
        case Base::K: X = b.kpow(a.kexp); break;
        case Base::Lead: X = b.leading(a.side); break;
    }
    for (int j = 0; j < a.d1; ++j) X = b.delta(1, X);
    for (int j = 0; j < a.d2; ++j) X = b.delta(2, X);
    return X;
}

// Memoizes atoms and resolvent blocks; filled serially, read concurrently.
struct Cache {
    const Binding& b;
    std::optional<double> r;
    std::map<Atom, Matrix> atoms;
    std::map<B0Node, Matrix> blocks;

    void fill(const Word& w) {
        for (const auto& x : w.f) {
            if (auto* a = std::get_if<Atom>(&x)) {
                if (!atoms.count(*a)) atoms.emplace(*a, eval_atom(*a, b));
            } else if (auto* d = std::get_if<DmNode>(&x)) {
                fill(*d->arg);
            } else {
                const auto& n = std::get<B0Node>(x);
                if (blocks.count(n)) continue;
                if (!n.lam_m1) throw std::invalid_argument("unresolvable atom: resolvent block at general lambda");
                if (!r) throw std::invalid_argument("unresolvable atom: resolvent block needs |xi|");
                blocks.emplace(n, b.b0(n.side, n.power, n.fpow, *r));
            }
        }
    }

    Matrix word(const Word& w) const {
        Matrix X = Matrix::Identity(b.dim(), b.dim());
        for (const auto& x : w.f) {
            if (auto* a = std::get_if<Atom>(&x)) X = X * atoms.at(*a);
            else if (auto* d = std::get_if<DmNode>(&x)) X = X * b.Dm(d->m, word(*d->arg));
            else X = X * blocks.at(std::get<B0Node>(x));
        }
        return X;
    }
};

}  // namespace

Matrix eval_word(const Word& w, const Binding& b, std::optional<double> r) {
    Cache c{b, r, {}, {}};
    c.fill(w);
    return c.word(w);
}

Matrix eval_expr_serial(const ncalg::Expr& a, const Binding& b, std::optional<double> r) {
    Cache c{b, r, {}, {}};
    for (const auto& t : a.term_list()) c.fill(t.word);
    Matrix S = Matrix::Zero(b.dim(), b.dim());
    for (const auto& t : a.term_list()) S += coefficient_value(t.coef) * c.word(t.word);
    return S;
}

Matrix eval_expr(const ncalg::Expr& a, const Binding& b, std::optional<double> r) {
    Cache c{b, r, {}, {}};
    const auto& terms = a.term_list();
    for (const auto& t : terms) c.fill(t.word);
    std::vector<Matrix> parts(terms.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < terms.size(); ++i) parts[i] = coefficient_value(terms[i].coef) * c.word(terms[i].word);
    // summed in term order so the result does not depend on the thread count
    Matrix S = Matrix::Zero(b.dim(), b.dim());
    for (const auto& P : parts) S += P;
    return S;
}

cplx tau_expr(const ncalg::Expr& a, const Binding& b, std::optional<double> r) { return b.tau(eval_expr(a, b, r)); }

NCElement element_of(const Matrix& X, const TorusParams& p) {
    NCElement out(p);
    const int c = out.index(0, 0);
    for (int i = 0; i < p.dim(); ++i) out.coeffs()[i] = X(i, c);
    return out;
}

namespace {

// 15-point Kronrod nodes and weights with the embedded 7-point Gauss weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<Matrix(double)>& f, double a, double b, Matrix& K, double& err) {
    const double c = (a + b) / 2, h = (b - a) / 2;
    Matrix fc = f(c);
    K = fc * kWgk[7];
    Matrix G = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        Matrix s = f(c - h * kXgk[j]) + f(c + h * kXgk[j]);
        K += s * kWgk[j];
        if (j % 2 == 1) G += s * kWg[j / 2];
    }
    K *= h;
    G *= h;
    err = (K - G).norm();
}

void adapt(const std::function<Matrix(double)>& f, double a, double b, double tol, int depth, QuadResult& q) {
    Matrix K;
    double err;
    gk15(f, a, b, K, err);
    q.evals += 15;
    if (err <= tol || depth == 0) {
        if (q.value.size() == 0) q.value = K;
        else q.value += K;
        q.error += err;
        return;
    }
    const double m = (a + b) / 2;
    adapt(f, a, m, tol / 2, depth - 1, q);
    adapt(f, m, b, tol / 2, depth - 1, q);
}

}  // namespace

QuadResult integrate_matrix(const std::function<Matrix(double)>& f, double a, double b, double tol, int max_depth) {
    QuadResult q;
    adapt(f, a, b, tol, max_depth, q);
    return q;
}

QuadResult integrate_half_line(const std::function<Matrix(double)>& f, double tol, double U) {
    const Matrix fu = f(U);
    const double fU = U * fu.norm(), f10U = 10 * U * f(10 * U).norm();
    if (f10U > 0.5 * fU && fU > tol)
        throw std::runtime_error("non-convergent: u*|f(u)| = " + std::to_string(fU) + " at u = " + std::to_string(U) +
                                 ", " + std::to_string(f10U) + " at 10u");
    auto g = [&](double s) -> Matrix { return f(std::expm1(s)) * std::exp(s); };
    QuadResult q = integrate_matrix(g, 0.0, std::log1p(U), tol);
    // tail beyond U from f ≈ A/u² + B/u³ fitted at U and 2U
    const Matrix f2u = f(2 * U);
    const Matrix B = 2 * U * U * U * (fu - 4.0 * f2u);
    const Matrix A = U * U * fu - B / U;
    q.value += A / U + B / (2 * U * U);
    q.error += B.norm() / (U * U);
    return q;
}

Matrix lemma_lhs(int m, const Matrix& rho, const Binding& b, int side, double tol) {
    if (side != 0 && side != 1) throw std::invalid_argument("lemma needs side 0 or 1");
    const Matrix F = b.leading(side);
    const Matrix P = side == 0 ? b.twist(1, b.E()) : b.twist(2, b.E());
    const Matrix I = Matrix::Identity(b.dim(), b.dim());
    const Matrix Prho = P * rho;
    auto f = [&](double u) -> Matrix {
        auto lu = (F * u + I).partialPivLu();
        // range(P) is F-invariant, so P·left = left; projecting after every solve keeps
        // roundoff out of directions where the resolvent does not decay (uᵐ would amplify it)
        Matrix left = P * lu.solve(Prho);
        for (int j = 0; j < m; ++j) left = P * lu.solve(left);
        left *= std::pow(u, m);
        // right division by (Fu+1): X(Fu+1)⁻¹ = ((Fu+1)*⁻¹X*)*
        Matrix right = (F * u + I).adjoint().partialPivLu().solve(left.adjoint()).adjoint();
        return right;
    };
    return integrate_half_line(f, tol * std::max(1.0, rho.norm())).value;
}

Matrix lemma_rhs(int m, const Matrix& rho, const Binding& b, int side) {
    if (side != 0 && side != 1) throw std::invalid_argument("lemma needs side 0 or 1");
    const Matrix P = side == 0 ? b.twist(1, b.E()) : b.twist(2, b.E());
    Matrix X = P * b.Dm(m, b.kpow(-(2 * m + 2)) * P * rho * P);
    return side == 0 ? X : Matrix(X * P);
}

double McKeanSinger::spread() const {
    if (value.empty()) return 0;
    auto [lo, hi] = std::minmax_element(value.begin(), value.end());
    return *hi - *lo;
}

McKeanSinger mckean_singer_index(const Binding& b, const std::vector<double>& t_grid, double radius_fraction) {
    const int n = b.dim();
    Eigen::VectorXcd dz(n);
    Eigen::VectorXd chi(n);
    const double R = radius_fraction * b.params().N;
    for (int i = 0; i < n; ++i) {
        const double m = b.Ddiag(1)[i], q = b.Ddiag(2)[i];
        dz[i] = cplx(m, q);
        chi[i] = std::hypot(m, q) <= R ? 1.0 : 0.0;
    }
    const Matrix K = b.kpow(1), Ki = b.kpow(-1);
    const Matrix sE = Ki * b.E() * K;
    const Matrix D = dz.asDiagonal(), Db = dz.conjugate().asDiagonal();
    const Matrix Lp = Ki * sE * K * K * D * sE * Db * K;
    const Matrix Lm = sE * Db * sE * K * K * D;
    const Matrix Qp = Ki * sE * K, Qm = sE;
    const Matrix C = chi.cast<cplx>().asDiagonal();
    auto heat = [&](const Matrix& L, const Matrix& Q) {
        Eigen::ComplexEigenSolver<Matrix> es(L);
        if (es.info() != Eigen::Success) throw std::runtime_error("truncation unreliable: eigensolver failed");
        const Matrix& V = es.eigenvectors();
        const Matrix Vi = V.partialPivLu().inverse();
        // Tr(C Q V e^{-tλ} V⁻¹ Q) = Σ_j e^{-tλ_j} (V⁻¹ Q C Q V)_jj
        const Matrix W = Vi * Q * C * Q * V;
        std::vector<cplx> out;
        for (double t : t_grid) {
            cplx s = 0;
            for (int j = 0; j < n; ++j) s += std::exp(-t * es.eigenvalues()[j]) * W(j, j);
            out.push_back(s);
        }
        return out;
    };
    auto hp = heat(Lp, Qp), hm = heat(Lm, Qm);
    McKeanSinger r;
    r.t = t_grid;
    for (std::size_t i = 0; i < t_grid.size(); ++i) r.value.push_back((hp[i] - hm[i]).real());
    if (r.spread() > 0.1) throw std::runtime_error("truncation unreliable: spread " + std::to_string(r.spread()));
    return r;
}

}  // namespace nctorus

#include "nctorus/radial.hpp"

#include "ncalg/leading.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace nctorus {

using ncalg::B0Node;
using ncalg::Word;

ResolventBasis resolvent_basis(const Binding& b, int side) {
    const int n = b.dim();
    ResolventBasis r;
    if (side == ncalg::kFlat) {
        r.W = r.Winv = Matrix::Identity(n, n);
        r.f = Eigen::VectorXd::Ones(n);
        return r;
    }
    if (side != ncalg::kLMinus && side != ncalg::kLPlus) throw std::invalid_argument("no resolvent basis for this side");
    Eigen::SelfAdjointEigenSolver<Matrix> se(b.E());
    Matrix Qe, Qp;
    {
        std::vector<int> in, out;
        for (int i = 0; i < n; ++i) (se.eigenvalues()[i] > 0.5 ? in : out).push_back(i);
        Qe.resize(n, in.size());
        Qp.resize(n, out.size());
        for (std::size_t j = 0; j < in.size(); ++j) Qe.col(j) = se.eigenvectors().col(in[j]);
        for (std::size_t j = 0; j < out.size(); ++j) Qp.col(j) = se.eigenvectors().col(out[j]);
    }
    const Matrix k2 = b.kpow(2);
    const Matrix A = Qe.adjoint() * k2 * Qe;
    Eigen::SelfAdjointEigenSolver<Matrix> sa((A + A.adjoint()) / 2.0);
    const Matrix& U = sa.eigenvectors();
    const int re = static_cast<int>(Qe.cols()), rp = n - re;
    // T = [Qe Qp]·[[U, X],[0, 1]] with X = −A⁻¹B, B = Qeᴴk²Qp, so T⁻¹(ek²)T = diag(a, 0)
    Matrix X = Matrix::Zero(re, rp);
    if (side == ncalg::kLMinus) X = -A.ldlt().solve(Qe.adjoint() * k2 * Qp);
    Matrix T(n, n), Tinv(n, n);
    T << Qe * U, Qe * X + Qp;
    // T⁻¹ = [[Uᴴ, −UᴴX],[0, 1]]·[Qe Qp]ᴴ
    Matrix top = U.adjoint() * (Qe.adjoint() - X * Qp.adjoint());
    Tinv << top, Qp.adjoint();
    r.f = Eigen::VectorXd::Zero(n);
    r.f.head(re) = sa.eigenvalues();
    const int s = side == ncalg::kLMinus ? 1 : 2;
    r.W = b.kpow(-s) * T;
    r.Winv = Tinv * b.kpow(s);
    return r;
}

namespace {

// Expansion of ∫₀^V vᵃ(1+v)^{−Q} dv in powers of V and log V.
CutoffExpansion unit_expansion(int a, int Q) {
    using boost::math::binomial_coefficient;
    CutoffExpansion e;
    e.pow.assign(a + 2, 0.0);
    // vᵃ/(1+v)^Q = Σ_l C(a,l)(−1)^{a−l} w^{l−Q}, w = 1+v from 1 to 1+V
    for (int l = 0; l <= a; ++l) {
        const double c = binomial_coefficient<double>(a, l) * (((a - l) % 2) ? -1.0 : 1.0);
        const int p = l - Q;
        if (p == -1) {
            e.log += c;
        } else if (p < -1) {
            e.finite += -c / (p + 1);
        } else {
            for (int s = 1; s <= p + 1; ++s) e.pow[s] += c * binomial_coefficient<double>(p + 1, s) / (p + 1);
        }
    }
    return e;
}

}  // namespace

CutoffExpansion cutoff_integral(int a, int P, double alpha, int Q, double beta) {
    if (alpha < 0 || beta < 0) throw std::invalid_argument("negative resolvent eigenvalue");
    CutoffExpansion e;
    if (alpha == 0 && beta == 0) {
        e.pow.assign(a + 2, 0.0);
        e.pow[a + 1] = 1.0 / (a + 1);
        return e;
    }
    if (alpha == 0 || beta == 0) {
        const double g = alpha == 0 ? beta : alpha;
        const int R = alpha == 0 ? Q : P;
        // ∫₀^U uᵃ(gu+1)^{−R} du = g^{−a−1} ∫₀^{gU} vᵃ(1+v)^{−R} dv
        CutoffExpansion v = unit_expansion(a, R);
        const double s = std::pow(g, -a - 1);
        e.finite = s * (v.finite + v.log * std::log(g));
        e.log = s * v.log;
        e.pow.assign(v.pow.size(), 0.0);
        for (std::size_t k = 1; k < v.pow.size(); ++k) e.pow[k] = s * v.pow[k] * std::pow(g, static_cast<double>(k));
        return e;
    }
    if (a >= P + Q - 1) throw std::invalid_argument("divergent radial integral with invertible resolvents");
    auto f = [&](double s) {
        if (s >= 1.0) return 0.0;
        const double u = s / (1.0 - s);
        return std::pow(u, a) * std::pow(alpha * u + 1, -P) * std::pow(beta * u + 1, -Q) / ((1.0 - s) * (1.0 - s));
    };
    e.finite = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14);
    return e;
}

namespace {

std::vector<std::size_t> blocks_of(const Word& w) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < w.f.size(); ++i)
        if (std::holds_alternative<B0Node>(w.f[i])) pos.push_back(i);
    return pos;
}

Word piece(const Word& w, std::size_t a, std::size_t b) {
    return Word(std::vector<ncalg::Factor>(w.f.begin() + a, w.f.begin() + b));
}

struct Acc {
    cplx finite = 0, log = 0;
    std::map<int, cplx> pow;
    void add(cplx w, const CutoffExpansion& e) {
        finite += w * e.finite;
        log += w * e.log;
        for (std::size_t k = 1; k < e.pow.size(); ++k)
            if (e.pow[k] != 0) pow[static_cast<int>(k)] += w * e.pow[k];
    }
};

}  // namespace

RadialTrace radial_trace(const heat::RadialIntegrand& t, const Binding& b) {
    const ResolventBasis rb = resolvent_basis(b, t.side);
    const int n = b.dim();
    const double inv_n = 1.0 / n;
    const auto& f = rb.f;
    // one cutoff table per block shape (a, P, Q)
    std::map<std::tuple<int, int, int>, std::vector<CutoffExpansion>> tables;
    auto table = [&](int a, int P, int Q) -> const std::vector<CutoffExpansion>& {
        auto key = std::make_tuple(a, P, Q);
        auto it = tables.find(key);
        if (it != tables.end()) return it->second;
        std::vector<CutoffExpansion> v(static_cast<std::size_t>(n) * n);
        std::map<std::pair<double, double>, CutoffExpansion> memo;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                auto mk = std::make_pair(f[i], Q ? f[j] : 0.0);
                auto m = memo.find(mk);
                if (m == memo.end()) m = memo.emplace(mk, cutoff_integral(a, P, f[i], Q, Q ? f[j] : 0.0)).first;
                v[static_cast<std::size_t>(i) * n + j] = m->second;
            }
        return tables.emplace(key, std::move(v)).first->second;
    };
    Acc acc;
    for (const auto& [rp, e] : t.by_rpow) {
        if (rp % 2) throw std::invalid_argument("odd power of |xi| in a radial integrand");
        const int a = rp / 2;
        for (const auto& term : e.term_list()) {
            const Word& w = term.word;
            const cplx c = coefficient_value(term.coef) * 0.5;  // r dr = du/2
            auto pos = blocks_of(w);
            if (pos.empty() || pos.size() > 2) throw std::invalid_argument("radial_trace needs one or two resolvent blocks");
            auto fp = [&](const B0Node& x, int i) { return x.fpow ? std::pow(f[i], x.fpow) : 1.0; };
            if (pos.size() == 1) {
                const auto B = std::get<B0Node>(w.f[pos[0]]);
                if (B.side != t.side) throw std::invalid_argument("resolvent block of a different side");
                Word rest = ncalg::concat(piece(w, pos[0] + 1, w.f.size()), piece(w, 0, pos[0]));
                Matrix M = rb.Winv * eval_word(rest, b) * rb.W;
                const auto& tab = table(a, B.power, 0);
                for (int i = 0; i < n; ++i) acc.add(c * inv_n * M(i, i) * fp(B, i), tab[static_cast<std::size_t>(i) * n]);
                continue;
            }
            const auto B1 = std::get<B0Node>(w.f[pos[0]]), B2 = std::get<B0Node>(w.f[pos[1]]);
            if (B1.side != t.side || B2.side != t.side) throw std::invalid_argument("resolvent block of a different side");
            Matrix M = rb.Winv * eval_word(piece(w, pos[0] + 1, pos[1]), b) * rb.W;
            Word tail = ncalg::concat(piece(w, pos[1] + 1, w.f.size()), piece(w, 0, pos[0]));
            Matrix Nn = rb.Winv * eval_word(tail, b) * rb.W;
            const auto& tab = table(a, B1.power, B2.power);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const cplx wgt = M(i, j) * Nn(j, i);
                    if (wgt == cplx(0)) continue;
                    acc.add(c * inv_n * wgt * fp(B1, i) * fp(B2, j), tab[static_cast<std::size_t>(i) * n + j]);
                }
        }
    }
    RadialTrace r;
    r.value = acc.finite;
    r.divergent = std::abs(acc.log);
    for (const auto& [k, v] : acc.pow) r.divergent = std::max(r.divergent, std::abs(v));
    return r;
}

}  // namespace nctorus

// Random inputs shared by the unit, property and acceptance tests.
#pragma once
#include "ncalg/expr.hpp"
#include "nctorus/element.hpp"
#include "nctorus/opmodel.hpp"
#include "nctorus/stages.hpp"

#include <random>

namespace testing_support {

using namespace ncalg;

inline Atom random_atom(std::mt19937_64& g, bool allow_deltas = true) {
    std::uniform_int_distribution<int> kind(0, 3), tw(-2, 2), kx(-3, 3), dl(0, 2);
    Atom a;
    if (kind(g) < 2) {
        a = Atom::e(tw(g));
    } else {
        a = Atom::k(kx(g));
        if (a.kexp == 0) a.kexp = 1;
    }
    // only k¹ carries deltas
    if (allow_deltas && (a.base == Base::E || a.kexp == 1) && dl(g) == 0) {
        a.d1 = dl(g) == 1;
        a.d2 = dl(g) == 2;
    }
    return a;
}

inline Word random_word(std::mt19937_64& g, int max_len = 4, bool with_dm = true) {
    std::uniform_int_distribution<int> len(1, max_len), coin(0, 5), mm(0, 2);
    std::vector<Factor> f;
    const int n = len(g);
    for (int i = 0; i < n; ++i) {
        if (with_dm && coin(g) == 0) {
            DmNode d;
            d.m = mm(g);
            Word arg;
            // Dₘ(1) is the scalar 1/(m+1), not a word
            while (arg.empty()) arg = normalize_word(random_word(g, 2, false));
            d.arg = std::make_shared<const Word>(arg);
            f.push_back(d);
        } else {
            f.push_back(random_atom(g));
        }
    }
    return Word(f);
}

inline Coefficient random_coef(std::mt19937_64& g, bool with_pi = true) {
    std::uniform_int_distribution<int> num(-6, 6), den(1, 4), pp(-1, 1);
    int re = num(g), im = num(g);
    if (re == 0 && im == 0) re = 1;
    return Coefficient(Gauss(Rational(re, den(g)), Rational(im, den(g))), with_pi ? pp(g) : 0);
}

inline Expr random_expr(std::mt19937_64& g, int max_terms = 3, int max_len = 4, bool with_dm = true, bool with_pi = true) {
    std::uniform_int_distribution<int> nt(1, max_terms);
    Expr a;
    const int n = nt(g);
    for (int i = 0; i < n; ++i) a += Expr(random_word(g, max_len, with_dm), random_coef(g, with_pi));
    return a;
}

// Small binding: Rieffel element, mildly curved k.
inline nctorus::Binding small_binding(std::uint64_t seed, int N = 2, double amp = 0.2) {
    nctorus::TorusParams p;
    p.N = N;
    return nctorus::Binding(nctorus::rieffel_element(p), nctorus::random_selfadjoint(p, seed, amp));
}

// Coefficients on |m|,|n| ≤ r, so products of two such stay inside the window when 2r ≤ N.
inline nctorus::NCElement random_interior(const nctorus::TorusParams& p, std::mt19937_64& g, int r) {
    std::normal_distribution<double> nd;
    nctorus::NCElement a(p);
    for (int m = -r; m <= r; ++m)
        for (int n = -r; n <= r; ++n) a.at(m, n) = {nd(g), nd(g)};
    return a;
}

inline double rel_diff(const nctorus::Matrix& a, const nctorus::Matrix& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace testing_support

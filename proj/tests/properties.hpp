// Randomized algebra properties, run by the unit suite and by acceptance 8.
#pragma once
#include "frontend/parse.hpp"
#include "heat/pipeline.hpp"
#include "ncalg/io.hpp"
#include "support.hpp"

#include <string>

namespace properties {

using namespace ncalg;
using namespace testing_support;

struct Result {
    std::string name;
    int cases = 0, failures = 0;
    std::string first_failure;
    bool ok() const { return cases > 0 && failures == 0; }
    void record(bool pass, const std::string& what) {
        ++cases;
        if (!pass && failures++ == 0) first_failure = what;
    }
};

// δᵢ(ab) = δᵢ(a)b + aδᵢ(b) and symbolic δᵢ = [Dᵢ,·], both as operators. The symbolic sides are
// not compared word for word: e·e collapses to e, and δ(e) = δ(e)e + eδ(e) only holds modulo e² = e.
inline Result leibniz(int cases, std::uint64_t seed = 1) {
    Result r{"leibniz"};
    std::mt19937_64 g(seed);
    const auto b = small_binding(seed, 1);
    for (int c = 0; c < cases; ++c) {
        const Expr x = random_expr(g, 2, 3, false), y = random_expr(g, 2, 3, false);
        const int i = 1 + c % 2;
        const auto lhs = nctorus::eval_expr(d(i, x * y), b);
        const double rule = rel_diff(lhs, nctorus::eval_expr(d(i, x) * y + x * d(i, y), b));
        const double comm = rel_diff(lhs, b.delta(i, nctorus::eval_expr(x * y, b)));
        r.record(rule < 1e-9 && comm < 1e-9, to_text(x) + " | " + to_text(y));
    }
    return r;
}

// (ab)c = a(bc) symbolically; twisted convolution is associative on interior elements.
inline Result associativity(int cases, std::uint64_t seed = 2) {
    Result r{"associativity"};
    std::mt19937_64 g(seed);
    nctorus::TorusParams p;
    p.N = 6;
    for (int c = 0; c < cases; ++c) {
        const Expr x = random_expr(g), y = random_expr(g), z = random_expr(g);
        const bool sym = (x * y) * z == x * (y * z);
        const auto a = random_interior(p, g, 2), b = random_interior(p, g, 2), e = random_interior(p, g, 2);
        const double num = (nctorus::nc_mul(nctorus::nc_mul(a, b), e) - nctorus::nc_mul(a, nctorus::nc_mul(b, e))).sup_norm();
        r.record(sym && num < 1e-10, to_text(x) + " | " + to_text(y) + " | " + to_text(z));
    }
    return r;
}

// τ(ab) = τ(ba) for interior elements and in the operator model; cyclic canonical forms agree.
inline Result trace_cyclicity(int cases, std::uint64_t seed = 3) {
    Result r{"trace cyclicity"};
    std::mt19937_64 g(seed);
    const auto b = small_binding(seed, 1);
    nctorus::TorusParams p;
    p.N = 6;
    for (int c = 0; c < cases; ++c) {
        const Expr x = random_expr(g, 2, 3), y = random_expr(g, 2, 3);
        const bool sym = heat::cyclic_canonicalize(x * y) == heat::cyclic_canonicalize(y * x);
        const nctorus::cplx t1 = nctorus::tau_expr(x * y, b), t2 = nctorus::tau_expr(y * x, b);
        const nctorus::cplx t3 = nctorus::tau_expr(heat::cyclic_canonicalize(x * y), b);
        const double scale = std::max(1.0, std::abs(t1));
        const auto a = random_interior(p, g, 3), e = random_interior(p, g, 3);
        const double el = std::abs(nctorus::nc_trace(nctorus::nc_mul(a, e)) - nctorus::nc_trace(nctorus::nc_mul(e, a)));
        r.record(sym && std::abs(t1 - t2) < 1e-10 * scale && std::abs(t1 - t3) < 1e-10 * scale && el < 1e-12,
                 to_text(x) + " | " + to_text(y));
    }
    return r;
}

// Normalization (e² = e, kᵃkᵇ = k^{a+b}, twist folding) does not change the operator.
inline Result idempotent_collapse(int cases, std::uint64_t seed = 4) {
    Result r{"idempotent collapse"};
    std::mt19937_64 g(seed);
    std::uniform_int_distribution<int> tw(-1, 1), rep(2, 3), kx(-2, 2);
    const auto b = small_binding(seed, 1);
    for (int c = 0; c < cases; ++c) {
        // raw word with runs of the same projection and adjacent k powers
        std::vector<Factor> f;
        const Word base = random_word(g, 3, c % 3 == 0);
        for (const auto& x : base.f) {
            f.push_back(x);
            if (auto* a = std::get_if<Atom>(&x); a && a->base == Base::E && !a->has_deltas())
                for (int j = rep(g); j > 1; --j) f.push_back(*a);
        }
        const Atom e = Atom::e(tw(g));
        f.insert(f.begin(), {e, e});
        f.push_back(Atom::k(kx(g) == 0 ? 1 : 2));
        f.push_back(Atom::k(-1));
        const Word raw(f);
        nctorus::Matrix prod = nctorus::Matrix::Identity(b.dim(), b.dim());
        for (const auto& x : raw.f) prod = prod * nctorus::eval_word(Word({x}), b);
        const Word norm = normalize_word(raw);
        const bool shorter = norm.size() < raw.size();
        r.record(shorter && rel_diff(nctorus::eval_word(norm, b), prod) < 1e-9, to_text(raw));
    }
    return r;
}

// parse(emit(x)) = x for the text and the display emitters.
inline Result parser_round_trip(int cases, std::uint64_t seed = 5) {
    Result r{"parser round trip"};
    std::mt19937_64 g(seed);
    for (int c = 0; c < cases; ++c) {
        const Expr x = random_expr(g, 4, 5);
        bool ok = false;
        try {
            ok = frontend::parse_expr(to_text(x)) == x && frontend::parse_latex(to_latex(x)) == x;
        } catch (const std::exception&) {
        }
        r.record(ok, to_text(x));
    }
    return r;
}

}  // namespace properties

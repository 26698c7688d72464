#include "ncalg/leading.hpp"
#include "symcalc/symbol.hpp"

#include <doctest.h>

using namespace ncalg;
using namespace symcalc;

namespace {
const Mono X1{1, 0, 0}, X2{0, 1, 0}, X11{2, 0, 0}, X22{0, 2, 0};

Expr coef(const Symbol& s, const Mono& m) {
    auto it = s.coeffs().find(m);
    return it == s.coeffs().end() ? Expr() : it->second;
}
}  // namespace

TEST_CASE("composition with constant coefficients") {
    const Symbol p = compose(Symbol::xi(1), Symbol::xi(1), 2);
    CHECK(p == Symbol(X11, Expr::one()));
}

TEST_CASE("composition picks up one Leibniz correction") {
    const Symbol q = mult_symbol(Kp(1)) * Symbol::xi(1);
    const Symbol p = compose(Symbol::xi(1), q, 1);
    Symbol want(X11, Kp(1));
    want.add(X1, d(1, Kp(1)));
    CHECK(p == want);
}

TEST_CASE("symbol of L minus") {
    const auto L = symbol_L_minus();
    CHECK(coef(L.p2, X11) == sigma_e() * Kp(2));
    CHECK(coef(L.p2, X22) == sigma_e() * Kp(2));
    CHECK(coef(L.p2, X1 ).is_zero());
    CHECK(L.p0.is_zero());
    CHECK(!L.p1.is_zero());
}

TEST_CASE("symbol of L plus") {
    const auto L = symbol_L_plus();
    const Expr lead = Kp(-1) * sigma_e() * Kp(2) * sigma_e() * Kp(1);
    CHECK(coef(L.p2, X11) == lead);
    CHECK(coef(L.p2, X22) == lead);
    const Expr p1 = Kp(-1) * sigma_e() * Kp(2) *
                    (R(2) * sigma_e() * d(1, Kp(1)) + d(1, sigma_e()) * Kp(1) + I() * d(2, sigma_e()) * Kp(1));
    CHECK(coef(L.p1, X1) == p1);
    // p⁺₀ carries i(δ₂(σ(e))δ₁(k) − δ₁(σ(e))δ₂(k)) behind the k⁻¹σ(e)k² prefactor
    const Expr p0 = coef(L.p0, Mono{});
    const Expr probe = Kp(-1) * sigma_e() * Kp(2) * I() * (d(2, sigma_e()) * d(1, Kp(1)) - d(1, sigma_e()) * d(2, Kp(1)));
    for (const auto& t : probe.term_list()) {
        CHECK(p0.terms().count({t.word, t.coef.pi_pow}) == 1);
    }
}

TEST_CASE("display form of the L plus leading factor is the same operator") {
    const auto a = symbol_L_plus_display();
    CHECK(coef(a.p2, X11) == delta_e() * Kp(2) * delta_e());
}

TEST_CASE("parametrix b0 is the resolvent block") {
    const auto b = parametrix(symbol_L_minus(), 0);
    REQUIRE(b.size() == 1);
    REQUIRE(b[0].coeffs().size() == 1);
    const auto& [m, e] = *b[0].coeffs().begin();
    CHECK(m == Mono{});
    REQUIRE(e.size() == 1);
    const auto& w = e.terms().begin()->first.first;
    REQUIRE(w.size() == 1);
    const auto* node = std::get_if<B0Node>(&w.f[0]);
    REQUIRE(node);
    CHECK(node->side == kLMinus);
    CHECK(node->power == 1);
    CHECK(node->lam_m1);
    CHECK(leading_word(symbol_L_minus().p2) == leading_factor(kLMinus));

    const auto flat = parametrix(symbol_flat_laplacian(), 0);
    const auto* fn = std::get_if<B0Node>(&flat[0].coeffs().begin()->second.terms().begin()->first.first.f[0]);
    REQUIRE(fn);
    CHECK(fn->side == kFlat);
}

TEST_CASE("xi derivative of the resolvent block") {
    const auto b = parametrix(symbol_L_minus(), 0)[0];
    const Symbol db = xi_derivative(1, b);
    // ∂₁b₀ = −2ξ₁ F b₀²
    REQUIRE(db.coeffs().size() == 1);
    CHECK(db.coeffs().begin()->first == X1);
    const auto& e = db.coeffs().begin()->second;
    REQUIRE(e.size() == 1);
    const auto* node = std::get_if<B0Node>(&e.terms().begin()->first.first.f[0]);
    REQUIRE(node);
    CHECK(node->power == 2);
    CHECK(node->fpow == 1);
    CHECK(e.terms().begin()->second == Gauss(Rational(-2)));
}

TEST_CASE("parametrix orders have the parity of n in xi") {
    const auto b = parametrix(symbol_L_minus(), 2);
    REQUIRE(b.size() == 3);
    for (int n = 1; n <= 2; ++n) {
        CHECK(!b[n].is_zero());
        for (const auto& [m, e] : b[n].coeffs()) CHECK((m.a + m.b) % 2 == n % 2);
    }
}

TEST_CASE("unsupported leading symbol") {
    Symbol p2(X11, Kp(2));
    p2.add(X22, Kp(4));
    CHECK_THROWS(leading_word(p2));
}

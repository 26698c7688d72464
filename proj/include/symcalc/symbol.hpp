#pragma once

#include "ncalg/expr.hpp"

#include <compare>
#include <map>
#include <vector>

namespace symcalc {

using ncalg::Expr;

// ξ₁^a ξ₂^b λ^c; λ carries weight 2.
struct Mono {
    int a = 0, b = 0, c = 0;
    int degree() const { return a + b + 2 * c; }
    auto operator<=>(const Mono&) const = default;
};

class Symbol {
public:
    Symbol() = default;
    Symbol(const Mono& m, const Expr& e) { add(m, e); }
    static Symbol constant(const Expr& e) { return Symbol(Mono{}, e); }
    static Symbol xi(int i) { return Symbol(i == 1 ? Mono{1, 0, 0} : Mono{0, 1, 0}, Expr::one()); }

    void add(const Mono& m, const Expr& e);
    const std::map<Mono, Expr>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    // Part with a + b + 2c = k.
    Symbol homogeneous(int k) const;
    // Terms summed over monomials (distinct (monomial, word) pairs).
    std::size_t term_count() const;

    int declared_order = 0;

    Symbol& operator+=(const Symbol& o);
    Symbol& operator-=(const Symbol& o);
    friend Symbol operator+(Symbol a, const Symbol& b) { a += b; return a; }
    friend Symbol operator-(Symbol a, const Symbol& b) { a -= b; return a; }
    friend Symbol operator*(const Symbol& a, const Symbol& b);
    friend Symbol operator*(const ncalg::Coefficient& c, const Symbol& a);
    friend bool operator==(const Symbol& a, const Symbol& b) { return a.coeffs_ == b.coeffs_; }

private:
    std::map<Mono, Expr> coeffs_;
};

// ∂/∂ξᵢ; resolvent blocks differentiate by ∂ᵢ(b₀^p F^j) = −2p ξᵢ b₀^{p+1} F^{j+1}.
Symbol xi_derivative(int i, const Symbol& p);
// δᵢ on coefficients; on resolvent blocks δᵢ(b₀) = −b₀ δᵢ(F)|ξ|² b₀.
Symbol symbol_delta(int i, const Symbol& p);

Symbol compose(const Symbol& p, const Symbol& q, int max_order_drop);

// Homogeneous parts of a second-order symbol.
struct OperatorSymbol {
    Symbol p2, p1, p0;
    Symbol total() const { return p2 + p1 + p0; }
};

OperatorSymbol symbol_L_plus();
OperatorSymbol symbol_L_minus();
// Printed alternative leading coefficients: k⁻²ek²ek² (L⁺) and k⁻¹ek³ (L⁻).
Expr alt_leading_L_plus();
Expr alt_leading_L_minus();
// L⁺ with its leading factor written Δ(e)k²Δ(e) (equal to the printed one).
OperatorSymbol symbol_L_plus_display();
// Symbol of the flat Laplacian ξ₁² + ξ₂².
OperatorSymbol symbol_flat_laplacian();
// Versions whose leading factor is an opaque letter, so that δ(σ(e)k²)
// stays unexpanded (used for the term-count diagnostics).
OperatorSymbol symbol_L_minus_opaque();
OperatorSymbol symbol_L_plus_opaque();

struct Parametrix {
    std::vector<Symbol> b;         // b₀ … b_n
    std::vector<Symbol> stripped;  // S_n with b_n = −S_n·b₀ (index 0 unused)
    int side = 0;
};

// b₀ = (p₂ − λ)⁻¹ as an opaque block; λ = −1 when lambda_minus_one.
Parametrix parametrix_detailed(const OperatorSymbol& p, int n_max, bool lambda_minus_one = true);
std::vector<Symbol> parametrix(const OperatorSymbol& p, int n_max, bool lambda_minus_one = true);

// Extracts F from p₂ = F(ξ₁²+ξ₂²); throws "unsupported leading symbol".
ncalg::Word leading_word(const Symbol& p2);

// Operator symbols of multiplication by a, ∂ = δ₁+iδ₂ and ∂̄ = δ₁−iδ₂.
Symbol mult_symbol(const Expr& a);
Symbol del_symbol();
Symbol delbar_symbol();

}  // namespace symcalc

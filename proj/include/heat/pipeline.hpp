#pragma once

#include "ncalg/expr.hpp"
#include "symcalc/symbol.hpp"

#include <map>
#include <string>
#include <vector>

namespace heat {

using ncalg::Expr;

// Σₙ ∫₀^∞ rⁿ Wₙ(r) r dr; the words of Wₙ carry resolvent blocks evaluated at |ξ| = r.
struct RadialIntegrand {
    int side = 0;
    std::map<int, Expr> by_rpow;
    int rotations = 0;  // cyclic rotations applied so far

    std::size_t term_count() const;
    void add(int rpow, const Expr& e);
};

// θ-moments: ∫₀^{2π} cos^a sin^b dθ as a coefficient (π kept symbolic).
ncalg::Coefficient angular_moment(int a, int b);

RadialIntegrand angular_integrate(const symcalc::Symbol& b2, int side);
RadialIntegrand leftmost_b0_normalize(const RadialIntegrand& t);
RadialIntegrand ibp_reduce(const RadialIntegrand& t);
Expr rearrange(const RadialIntegrand& t);
Expr cyclic_canonicalize(const Expr& a);

// Word-level helpers exposed for tests.
ncalg::Word min_rotation(const ncalg::Word& w);
// Projection letter expected right of the leftmost block (σ(e), Δ(e)); empty for the flat side.
ncalg::Word side_projection(int side);

struct PipelineTrace {
    symcalc::Parametrix par;
    RadialIntegrand angular, normalized, reduced;
    Expr rearranged, canonical;
    std::size_t b2_raw = 0, b2_stripped = 0, angular_stripped = 0;
};

// Symbol used by the pipeline for a side: L⁻, L⁺ (leading factor Δ(e)k²Δ(e)) or flat.
symcalc::OperatorSymbol pipeline_symbol(int side);
PipelineTrace run_a2(int side);

// Sign relating a₂ to ∫ b₂(ξ, −1) dξ, fixed by the orientation of the Cauchy contour.
inline constexpr int kContourSign = +1;

// τ(a₂(L)) = kContourSign·∫ b₂(ξ, −1) dξ in Dₘ normal form.
Expr a2_trace(int side);
Expr index_expression();

// k → 1: k-letters → 1, δ(k) → 0, σˢ(e) → e, Dₘ(X) → X/(m+1).
Expr flat_reduce(const Expr& a);
// Reduces an order-2 trace expression in e, δᵢ(e), δᵢδⱼ(e) to the basis
// X_ab = τ(e δ_a(e) δ_b(e)); returned as an Expr in those words.
Expr flat_trace_normal_form(const Expr& a);
// 2πi(eδ₁(e)δ₂(e) − eδ₂(e)δ₁(e)).
Expr connes_chern_expr();

// Term counts in the convention where the leading factor stays an opaque letter.
struct CountReport {
    std::size_t b2_stripped_opaque = 0, b2_raw_opaque = 0, angular_opaque = 0;
    std::size_t b2_stripped_full = 0, b2_raw_full = 0, angular_full = 0;
};
CountReport term_counts(int side);

// Canonical form for comparing hand-written displays with pipeline output:
// leading letters expanded, k-powers pushed right past plain twisted e,
// k-powers pulled out of Dₘ, minimal cyclic rotation.
Expr strong_canonicalize(const Expr& a);

}  // namespace heat

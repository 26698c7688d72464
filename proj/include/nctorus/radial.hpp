#pragma once

#include "heat/pipeline.hpp"
#include "nctorus/opmodel.hpp"

namespace nctorus {

// F = W diag(f) W⁻¹ for the leading factor of a side, built from its block
// structure: σ(e)k² = k⁻¹(ek²)k and Δ(e)k²Δ(e) = k⁻²(ek²e)k², with ek² similar to
// diag(ek²e|_{eH}, 0). The spectrum is real and non-negative.
struct ResolventBasis {
    Matrix W, Winv;
    Eigen::VectorXd f;  // zeros are exact
};
ResolventBasis resolvent_basis(const Binding& b, int side);

// Cutoff expansion of ∫₀^U uᵃ (αu+1)^{−P} (βu+1)^{−Q} du for U → ∞:
// finite + Σ_k pow[k]·Uᵏ + log·log U + o(1).
struct CutoffExpansion {
    double finite = 0, log = 0;
    std::vector<double> pow;  // index k ≥ 1
};
CutoffExpansion cutoff_integral(int a, int P, double alpha, int Q, double beta);

// τ-value of Σₙ ∫₀^∞ rⁿ τ(Wₙ(r)) r dr, computed per term in the eigenbasis of F
// (words with one or two resolvent blocks). The divergent coefficients of all
// terms are summed; the integral exists only when they cancel.
struct RadialTrace {
    cplx value = 0;
    double divergent = 0;  // largest |Σ coefficient| of a Uᵏ or log U term
    bool convergent(double tol = 1e-8) const { return divergent <= tol * std::max(1.0, std::abs(value)); }
};
RadialTrace radial_trace(const heat::RadialIntegrand& t, const Binding& b);

}  // namespace nctorus

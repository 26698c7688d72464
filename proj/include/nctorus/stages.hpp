#pragma once

#include "heat/pipeline.hpp"
#include "nctorus/opmodel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nctorus {

// Self-adjoint element with Gaussian coefficients on |m|,|n| ≤ radius.
NCElement random_selfadjoint(const TorusParams& p, std::uint64_t seed, double amplitude, int radius = 1);

struct StageCheck {
    std::string stage;
    cplx before = 0, after = 0;
    double rel = 0;
    bool ok = false;
    std::string note;
};

// τ before and after every pipeline stage on one binding:
//   angular      ∫₀^{2π} τ(b₂(r,θ)) dθ by a 64-point trapezoid vs the angular output, at each radius
//   normalize    angular vs normalized output, at each radius
//   ibp          radial integrals (finite parts in the eigenbasis of F) of normalized vs reduced
//   rearrange    radial integral of reduced vs τ of the Dₘ form
//   canonicalize τ(±rearranged) vs τ(canonical)
std::vector<StageCheck> stage_invariance(const heat::PipelineTrace& tr, const Binding& b, double tol,
                                         const std::vector<double>& radii = {0.5, 1.0, 2.0});

}  // namespace nctorus

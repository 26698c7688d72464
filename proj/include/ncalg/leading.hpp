#pragma once

#include "ncalg/expr.hpp"

#include <string>

namespace ncalg {

// Leading factors F of resolvents b₀ = (F|ξ|² − λ)⁻¹, indexed by side id.
enum Side : int { kLMinus = 0, kLPlus = 1, kFlat = 2 };

// σ(e)k², Δ(e)k²Δ(e) and 1 are preregistered as sides 0, 1, 2.
const Word& leading_factor(int side);
int register_leading(const Word& F);
std::string side_name(int side);
int side_from_name(const std::string& s);

// Replaces every Lead atom δ^α(F) by the Leibniz expansion of δ^α applied to F.
Expr expand_leads(const Expr& a);

// Word of a resolvent block with the leading factors spelled out: b₀^p F^j.
Word spell_block(const B0Node& b);

}  // namespace ncalg

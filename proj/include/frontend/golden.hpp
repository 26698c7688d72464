#pragma once

#include "ncalg/expr.hpp"

#include <string>

namespace frontend {

// NCINDEX_GOLDEN_DIR if set, else the directory the build was configured with.
std::string default_golden_dir();

// Hand-copied display (.tex) and its second, independent reading (.json);
// both hold (1/(−2π))·τ(a₂(L)) for side Lminus or Lplus.
ncalg::Expr load_golden_tex(const std::string& dir, int side);
ncalg::Expr load_golden_json(const std::string& dir, int side);

struct GoldenDiff {
    std::size_t ours = 0, golden = 0;     // canonical term counts
    std::size_t common = 0;               // words present in both
    std::size_t equal = 0;                // words with identical coefficients
    std::size_t only_ours = 0, only_golden = 0;
    ncalg::Expr difference;               // ours − golden, canonical
    bool match() const { return difference.is_zero(); }
};

// Both sides are brought to heat::strong_canonicalize form; `ours` is τ(a₂) and is
// scaled by 1/(−2π) to the display normalization first.
GoldenDiff diff_against_golden(const ncalg::Expr& ours_a2, const ncalg::Expr& golden_display);
ncalg::Expr display_normalization(const ncalg::Expr& a2);

}  // namespace frontend

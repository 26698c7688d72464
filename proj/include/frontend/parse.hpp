#pragma once

#include "ncalg/expr.hpp"

#include <stdexcept>
#include <string>

namespace frontend {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& what, int l, int c)
        : std::runtime_error(what + " at " + std::to_string(l) + ":" + std::to_string(c)), line(l), col(c) {}
};

// Text grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (['*'] factor)*
//   factor := primary ['^' int]
//   primary:= int ['/' int] | 'i' | 'pi' | '(' expr ')' | 'e' | 'k' | 's(' expr ')' | 's^' int '(' expr ')'
//           | 'D(' expr ')' | 'd1(' expr ')' | 'd2(' expr ')' | 'Dm[' int '](' expr ')' | 'F[' int ']'
//           | 'b0[' side ',' power ',' fpow ']' | 'b0l[' … ']'
// `^` on e/k/primaries means a power; k^-4 is accepted.
ncalg::Expr parse_expr(const std::string& src);

// Display notation: \sigma(..), \Delta(..), \delta_1(..), \delta_1^2(..), \delta_1\delta_2(..),
// k^{-4}, \frac{1}{k}, \frac{a}{b}, i, D_m\left(..\right), \left(..\right), \tau\Big(..\Big), \pi.
ncalg::Expr parse_latex(const std::string& src);

}  // namespace frontend

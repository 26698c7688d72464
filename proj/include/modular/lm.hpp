#pragma once

#include <Eigen/Dense>

namespace modular {

// 𝓛ₘ(u) = ∫₀^∞ xᵐ/(x+1)^{m+1} · 1/(xu+1) dx
//       = (−1)ᵐ(u−1)^{−(m+1)}(log u − Σ_{j=1}^m (−1)^{j+1}(u−1)ʲ/j).
// Near u = 1 the series Σⱼ (1−u)ʲ/(m+j+1) is used instead.
double Lm_closed(int m, double u);
double Lm_series(int m, double u);
// Adaptive Gauss–Kronrod on the defining integral; throws "non-convergent".
double Lm_quad(int m, double u, double tol);

// Radius of the series branch in |u − 1|.
inline constexpr double kSeriesRadius = 0.1;

using Matrix = Eigen::MatrixXcd;

// 𝓛ₘ applied spectrally to a diagonalizable operator with positive spectrum.
Matrix matrix_Lm(int m, const Matrix& delta, double tol = 1e-8);

}  // namespace modular

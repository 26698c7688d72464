#pragma once

#include "ncalg/expr.hpp"
#include "nctorus/element.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace nctorus {

// Compressed left-regular representation on the (2N+1)² coefficient space.
// e ↦ spectral projection χ_{>1/2} of the compressed L_e (an exact projection),
// k ↦ exp(L_h/2) of the compressed L_h, δᵢ ↦ [Dᵢ,·] with D₁ = diag(m), D₂ = diag(n),
// τ ↦ Tr/(2N+1)². All algebraic identities hold to roundoff in this model.
class Binding {
public:
    Binding(const NCElement& e, const NCElement& h);
    static Binding flat(const NCElement& e) { return Binding(e, NCElement(e.params())); }

    const TorusParams& params() const { return p_; }
    int dim() const { return p_.dim(); }
    const Matrix& E() const { return E_; }
    // rank of E divided by the dimension; ≈ τ(e)
    double e_fraction() const;
    const Matrix& kpow(int n) const;
    Matrix twist(int s, const Matrix& X) const;  // σˢ(X) = k⁻ˢXkˢ
    Matrix delta(int i, const Matrix& X) const;
    Matrix Dm(int m, const Matrix& X) const;     // 𝓛ₘ(Δ) via the eigenbasis of k
    // b₀^P F^J at |ξ| = r, λ = −1, F the leading factor of the side.
    Matrix b0(int side, int power, int fpow, double r) const;
    const Matrix& leading(int side) const;
    cplx tau(const Matrix& X) const { return X.trace() / static_cast<double>(dim()); }
    const Eigen::VectorXd& kappa() const { return kappa_; }
    const Matrix& kbasis() const { return V_; }
    const Eigen::VectorXd& Ddiag(int i) const { return i == 1 ? d1_ : d2_; }

private:
    TorusParams p_;
    Matrix E_, V_;
    Eigen::VectorXd kappa_, d1_, d2_;
    // filled lazily; guarded by a critical section
    mutable std::map<int, Matrix> kpow_cache_, lead_cache_;
};

// Numeric value of a word or expression; r is needed only when resolvent blocks occur.
Matrix eval_word(const ncalg::Word& w, const Binding& b, std::optional<double> r = std::nullopt);
Matrix eval_expr(const ncalg::Expr& a, const Binding& b, std::optional<double> r = std::nullopt);
Matrix eval_expr_serial(const ncalg::Expr& a, const Binding& b, std::optional<double> r = std::nullopt);
cplx tau_expr(const ncalg::Expr& a, const Binding& b, std::optional<double> r = std::nullopt);
double coefficient_value_re(const ncalg::Coefficient& c);
cplx coefficient_value(const ncalg::Coefficient& c);
// Element of the algebra represented by an operator (its image of the unit).
NCElement element_of(const Matrix& X, const TorusParams& p);

// Adaptive Gauss–Kronrod (7/15) for matrix-valued integrands on [a,b].
struct QuadResult {
    Matrix value;
    double error = 0;
    int evals = 0;
};
QuadResult integrate_matrix(const std::function<Matrix(double)>& f, double a, double b, double tol, int max_depth = 40);

// ∫₀^∞ f(u) du with u = eˢ − 1, s ∈ [0, log(1+U)], followed by a tail test: the
// integral is declared non-convergent when U·‖f(U)‖ does not decay between U and 10U.
// The part beyond U is added from the fit f ≈ A/u² + B/u³ at U and 2U.
QuadResult integrate_half_line(const std::function<Matrix(double)>& f, double tol, double U = 1e6);

// ∫₀^∞ (Fu+1)^{−(m+1)} uᵐ P ρ (Fu+1)^{−1} du with F the leading factor of the side
// and P = σ(e) (side 0) or Δ(e) (side 1). Throws "non-convergent" on a failed tail test.
Matrix lemma_lhs(int m, const Matrix& rho, const Binding& b, int side, double tol = 1e-10);
// σ(e)Dₘ(k^{−(2m+2)}σ(e)ρσ(e)), resp. Δ(e)Dₘ(k^{−(2m+2)}Δ(e)ρΔ(e))Δ(e).
Matrix lemma_rhs(int m, const Matrix& rho, const Binding& b, int side);

// Localized supertrace Tr(χ Q₊e^{−tL⁺}Q₊) − Tr(χ Q₋e^{−tL⁻}Q₋), χ the Fourier cutoff |ξ| ≤ R.
struct McKeanSinger {
    std::vector<double> t;
    std::vector<double> value;
    double spread() const;
};
McKeanSinger mckean_singer_index(const Binding& b, const std::vector<double>& t_grid, double radius_fraction = 2.0 / 3.0);

}  // namespace nctorus

#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <complex>
#include <vector>

namespace nctorus {

using cplx = std::complex<double>;

struct TorusParams {
    double theta = 0.70710678118654752;  // 1/√2
    int N = 8;
    int width() const { return 2 * N + 1; }
    int dim() const { return width() * width(); }
};

// Σ a_{m,n} UᵐVⁿ truncated to [−N,N]²; (UᵐVⁿ)(UᵖV^q) = e^{2πiθnp} U^{m+p}V^{n+q}.
class NCElement {
public:
    NCElement() = default;
    explicit NCElement(const TorusParams& p) : p_(p), c_(p.dim(), cplx(0)) {}
    static NCElement unit(const TorusParams& p);
    static NCElement monomial(const TorusParams& p, int m, int n, cplx c = 1.0);

    const TorusParams& params() const { return p_; }
    int N() const { return p_.N; }
    int index(int m, int n) const { return (m + p_.N) * p_.width() + (n + p_.N); }
    bool in_window(int m, int n) const { return std::abs(m) <= p_.N && std::abs(n) <= p_.N; }
    cplx& at(int m, int n) { return c_[index(m, n)]; }
    cplx at(int m, int n) const { return c_[index(m, n)]; }
    const std::vector<cplx>& coeffs() const { return c_; }
    std::vector<cplx>& coeffs() { return c_; }

    NCElement& operator+=(const NCElement& o);
    NCElement& operator-=(const NCElement& o);
    NCElement& operator*=(cplx s);
    friend NCElement operator+(NCElement a, const NCElement& b) { a += b; return a; }
    friend NCElement operator-(NCElement a, const NCElement& b) { a -= b; return a; }
    friend NCElement operator*(cplx s, NCElement a) { a *= s; return a; }

    double sup_norm() const;
    double l1_norm() const;

private:
    TorusParams p_;
    std::vector<cplx> c_;
};

// Twisted convolution truncated to the window. nc_mul is the OpenMP kernel,
// nc_mul_serial the single-threaded reference; results agree bit for bit.
NCElement nc_mul(const NCElement& a, const NCElement& b);
NCElement nc_mul_serial(const NCElement& a, const NCElement& b);
NCElement nc_delta(int i, const NCElement& a);
NCElement nc_adjoint(const NCElement& a);
NCElement nc_exp(const NCElement& a);
cplx nc_trace(const NCElement& a);

nlohmann::json to_json(const NCElement& a);
NCElement element_from_json(const nlohmann::json& j);

// Smooth step profile ψ(t) = A/(A+B), A = exp(−c/tᵃ), B = exp(−c/(1−t)ᵃ).
struct RieffelProfile {
    double eps = 0.29;
    double c = 1.0, a = 1.0;
    int grid = 1 << 15;
};

// Coefficients of f(U) + g(U)·(V-terms) without certification.
NCElement rieffel_element(const TorusParams& p, const RieffelProfile& prof = {});
// As above, certified ‖e²−e‖ < 1e−8 and ‖e−e*‖ < 1e−12; throws "certification failed".
NCElement rieffel_projection(const TorusParams& p, const RieffelProfile& prof = {});

// c₁(e) = 2πi τ(eδ₁(e)δ₂(e) − eδ₂(e)δ₁(e)) (real part; the imaginary part is roundoff).
double chern_number(const NCElement& e);
cplx chern_number_complex(const NCElement& e);

using Matrix = Eigen::MatrixXcd;

// Matrices of a ↦ x·a and a ↦ a·x on the coefficient space (truncated).
Matrix left_mult_matrix(const NCElement& x);
Matrix left_mult_matrix_serial(const NCElement& x);
Matrix right_mult_matrix(const NCElement& x);
NCElement apply(const Matrix& op, const NCElement& a);

// Dense matrix of a ↦ k⁻²ak² with k = exp(h/2).
Matrix modular_superop(const NCElement& h);

}  // namespace nctorus

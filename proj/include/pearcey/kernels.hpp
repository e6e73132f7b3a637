#ifndef PEARCEY_KERNELS_HPP
#define PEARCEY_KERNELS_HPP

#include <Eigen/Dense>
#include <memory>
#include <utility>
#include <vector>

#include "pearcey/contour.hpp"
#include "pearcey/special_functions.hpp"

namespace pearcey {

/// Strictly increasing times tau_1 < ... < tau_m. Strictness keeps every
/// upper-triangular Gaussian block E_ij nonsingular.
struct TauGrid {
    std::vector<double> taus;

    TauGrid() = default;
    TauGrid(std::initializer_list<double> t) : taus(t) { validate(); }
    explicit TauGrid(std::vector<double> t) : taus(std::move(t)) { validate(); }

    void validate() const;
    int size() const { return static_cast<int>(taus.size()); }
    double operator[](int k) const { return taus[k]; }
};

/// Which rescaling of the limiting kernel is evaluated.
///  CanonicalQuartic: prefactor -1/4pi^2, exponents t^4/4, tau t^2/2, x t;
///    Gaussian part (2 pi dtau)^{-1/2} exp(-(x-y)^2 / 2 dtau).
///  HigherOrder: prefactor -1/pi^2, exponents (-1)^{R+1} t^{2R+2}/(R+1)!,
///    4 tau t^2, 4 x t; Gaussian part (pi dtau)^{-1/2} exp(-(x-y)^2/dtau).
///    R = 1 gives the alternative quartic normalization; the two forms are
///    related by a linear substitution, not separate formulas.
enum class KernelForm { CanonicalQuartic, HigherOrder };

struct QuadratureConfig {
    double radius = 0.0;  // 0 = choose from the exponential decay
    int panels = 12;
    int nodes_per_panel = 24;
    double grading = 0.5;
};

struct KernelSpec {
    TauGrid tau_grid;
    int order_R = 1;
    KernelForm form = KernelForm::CanonicalQuartic;
    QuadratureConfig quad;

    void validate() const;
};

/// Abstract m x m matrix kernel K_ij(x,y) with partial derivatives.
/// Indices are 0-based; slice i owns time tau_i.
class MatrixKernel {
public:
    virtual ~MatrixKernel() = default;
    virtual int slices() const = 0;
    virtual double tau(int i) const = 0;
    virtual double entry(int i, int j, double x, double y, int dx = 0, int dy = 0) const = 0;

    /// Evaluates K^{(dx,dy)}_ij on xs x ys for every requested (dx,dy);
    /// out[c](p,q) corresponds to combos[c] at (xs[p], ys[q]).
    virtual void eval_block(int i, int j, const std::vector<double>& xs,
                            const std::vector<double>& ys,
                            const std::vector<std::pair<int, int>>& combos,
                            std::vector<Eigen::MatrixXd>& out) const;

    /// phi/psi of the associated integrable structure, when the kernel has one.
    virtual bool has_phi_psi() const { return false; }
    virtual double phi_component(int i, double x, int deriv = 0) const;
    virtual double psi_component(int j, double y, int deriv = 0) const;
    /// c in (d/dx + d/dy) K = -c phi (x) psi(y).
    virtual double commutator_coefficient() const { return 1.0; }
};

/// The extended Pearcey kernel K = H - E and its order-R analogues.
/// H_ij is the double contour integral over the X-shaped t-contour and the
/// imaginary s-axis with 1/(s-t) coupling; E is the upper-triangular
/// Gaussian semigroup part. All evaluations are pure and reentrant.
class ExtendedPearceyKernel : public MatrixKernel {
public:
    explicit ExtendedPearceyKernel(KernelSpec spec);

    int slices() const override { return spec_.tau_grid.size(); }
    double tau(int i) const override { return spec_.tau_grid[i]; }
    const KernelSpec& spec() const { return spec_; }

    /// H part, derivative by monomial insertion t^dx (-s)^dy (times the
    /// linear-coefficient scale of the form).
    double h(int i, int j, double x, double y, int dx = 0, int dy = 0) const;
    /// Gaussian part; exactly zero when i >= j.
    double e(int i, int j, double x, double y, int dx = 0, int dy = 0) const;
    /// K = H - E.
    double entry(int i, int j, double x, double y, int dx = 0, int dy = 0) const override;

    void eval_block(int i, int j, const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<std::pair<int, int>>& combos,
                    std::vector<Eigen::MatrixXd>& out) const override;

    /// H-only block evaluation (same batching).
    void eval_block_h(int i, int j, const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::vector<std::pair<int, int>>& combos,
                      std::vector<Eigen::MatrixXd>& out) const;

    bool has_phi_psi() const override { return true; }
    double phi_component(int i, double x, int deriv = 0) const override;
    double psi_component(int j, double y, int deriv = 0) const override;
    double commutator_coefficient() const override;

private:
    KernelSpec spec_;
    double lead_t_, lead_s_;  // coefficients of t^{2R+2}, s^{2R+2}
    double quad_scale_;       // tau multiplier on t^2 (sign per side)
    double lin_scale_;        // x multiplier on t
    double prefactor_;
    QuadratureRule trule_, srule_;
    Eigen::MatrixXcd inv_smt_;               // 1/(s_b - t_a), N_t x N_s
    std::vector<Eigen::VectorXcd> tbase_;    // per slice i: w_a exp(g_t(t_a))
    std::vector<Eigen::VectorXcd> sbase_;    // per slice j: w_b exp(g_s(s_b))
    // Quadrature defect of the universal integral 1/(s-t) over the truncated
    // contour pair, measured against a deeply graded reference rule. Its
    // integrand is the (0,0) integrand at the origin, so adding
    // prefactor * defect to underived entries cancels the near-origin error.
    Complex origin_defect_ = 0.0;

    Eigen::MatrixXcd amatrix(int i, const std::vector<double>& xs, int dx) const;
    Eigen::MatrixXcd bmatrix(int j, const std::vector<double>& ys, int dy) const;
    PearceyParams params_for(int slice) const;
};

/// K~_ij(x,y) = K_ji(y,x), with the phi/psi roles swapped. Used for the
/// transpose-duality checks (P of K equals Q of K-transpose, transposed).
class TransposedKernel : public MatrixKernel {
public:
    explicit TransposedKernel(const MatrixKernel& base) : base_(base) {}
    int slices() const override { return base_.slices(); }
    double tau(int i) const override { return base_.tau(i); }
    double entry(int i, int j, double x, double y, int dx = 0, int dy = 0) const override {
        return base_.entry(j, i, y, x, dy, dx);
    }
    void eval_block(int i, int j, const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<std::pair<int, int>>& combos,
                    std::vector<Eigen::MatrixXd>& out) const override;
    bool has_phi_psi() const override { return base_.has_phi_psi(); }
    double phi_component(int i, double x, int deriv = 0) const override {
        return base_.psi_component(i, x, deriv);
    }
    double psi_component(int j, double y, int deriv = 0) const override {
        return base_.phi_component(j, y, deriv);
    }
    double commutator_coefficient() const override { return base_.commutator_coefficient(); }

private:
    const MatrixKernel& base_;
};

/// Finite-rank-over-(x-y) form of the one-time kernel:
/// [phi''(x) psi(y) - phi'(x) psi'(y) + phi(x) psi''(y) - tau phi(x) psi(y)] / (x - y),
/// with the removable singularity at x = y filled by the first-order
/// expansion of the numerator.
double integrable_entry(double x, double y, double tau);

/// Derivatives of the normalized Gaussian (2 pi v)^{-1/2} exp(-u^2/2v).
double gaussian_kernel_deriv(double u, double variance, int order);

} // namespace pearcey

#endif

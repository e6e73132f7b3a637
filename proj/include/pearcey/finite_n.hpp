#ifndef PEARCEY_FINITE_N_HPP
#define PEARCEY_FINITE_N_HPP

#include <Eigen/Dense>
#include <vector>

#include "pearcey/kernels.hpp"

namespace pearcey {

/// n nonintersecting Brownian paths from starts a_i at time 0 to distinct
/// ends b_j at time 1, observed at times in (0,1). The heat kernel convention
/// is P(x,y,sigma) = (pi sigma)^{-1/2} exp(-(x-y)^2/sigma) (variance sigma/2).
struct PathModel {
    int n = 1;
    std::vector<double> starts;  // may be all zero
    std::vector<double> ends;    // pairwise distinct
    std::vector<double> times;   // strictly increasing, inside (0,1)
    /// Constant multiplying the H formulas; fixed by the trace identity
    /// int K_kk(x,x) dx = n, which lands on sqrt(pi).
    double normalization = 1.7724538509055160273;  // sqrt(pi)

    void validate() const;
    int slices() const { return static_cast<int>(times.size()); }
    bool zero_start() const;
    /// sigma_k = tau_{k+1} - tau_k with tau_0 = 0, tau_{m+1} = 1.
    double sigma(int k) const;
};

/// Transition density P(x,y,sigma).
double heat_p(double x, double y, double sigma);

/// d^j/da^j P(a,y,sigma) at a = 0 (recursion on the quadratic exponent).
double heat_p_da(double y, double sigma, int j);

/// H_kl(x,y) for general distinct starts, via the e^{2 a_i b_j} linear solve.
/// Throws degeneracy_error for coincident starts (use h_zero_start).
double h_general_a(const PathModel& model, int k, int l, double x, double y);

enum class ZeroStartMethod { Sum, Contour };

/// H_kl(x,y) when all paths start at 0. Sum: Vandermonde-residue
/// coefficients against Hermite-type a-derivatives (n <= 12). Contour:
/// double integral with the t-circle enclosing every b_r and the s-line to
/// its right.
double h_zero_start(const PathModel& model, int k, int l, double x, double y,
                    ZeroStartMethod method);

/// Gaussian part P(x, y, tau_l - tau_k) for k < l, else 0.
double finite_n_e(const PathModel& model, int k, int l, double x, double y);

/// int K_kk(x,x) dx at slice k (equals n when the normalization is right).
double trace_integral(const PathModel& model, int k);

/// Normalization constant that makes the slice-0 trace equal n.
double calibrate_normalization(const PathModel& model);

/// MatrixKernel adapter so the Fredholm layer can form det(I - K chi) for
/// the finite-n process. Only underived entries are defined.
class FiniteNBrownianKernel : public MatrixKernel {
public:
    explicit FiniteNBrownianKernel(PathModel model,
                                   ZeroStartMethod method = ZeroStartMethod::Sum);
    int slices() const override { return model_.slices(); }
    double tau(int i) const override { return model_.times[i]; }
    double entry(int i, int j, double x, double y, int dx = 0, int dy = 0) const override;
    const PathModel& model() const { return model_; }

private:
    PathModel model_;
    ZeroStartMethod method_;
    bool zero_start_;
    Eigen::PartialPivLU<Eigen::MatrixXd> blu_;   // e^{2 a_i b_j} factor
    std::vector<double> eb2_;                    // e^{b_i^2}
};

/// The finite-n kernel H_{n,ij}(x,y) under the critical scaling: times
/// 1/2 + tau n^{-1/2}, space n^{-1/4}, with 2n paths ending at +-sqrt(n).
/// The t-contour is the X contour rotated toward the real axis so the
/// (1 - t^2/sqrt(n))^n factor decays. First derivatives follow the product
/// rule over the x- and y-dependent prefactors.
class ScaledBrownianKernel {
public:
    ScaledBrownianKernel(int n, TauGrid taus, double rotation = 0.15);

    int paths_parameter() const { return n_; }
    double h(int i, int j, double x, double y, int dx = 0, int dy = 0) const;
    Eigen::MatrixXd h_grid(int i, int j, const std::vector<double>& xs,
                           const std::vector<double>& ys, int dx = 0, int dy = 0) const;

private:
    int n_;
    TauGrid taus_;
    double rotation_;
    QuadratureRule trule_, srule_;
    Eigen::MatrixXcd inv_smt_;
    Complex origin_defect_ = 0.0;
    std::vector<Eigen::VectorXcd> tbase_, sbase_;

    Eigen::MatrixXcd raw_grid(int i, int j, const std::vector<double>& xs,
                              const std::vector<double>& ys, int tpow, int spow) const;
};

/// Sup-norm distances between the scaled kernel and its limit on a box grid,
/// with least-squares log-log slopes (expected near -1/2).
struct ConvergenceScan {
    std::vector<int> ns;
    std::vector<double> sup_err;      // underived entries
    std::vector<double> sup_err_dx;   // first x-derivative
    double slope = 0.0;
    double slope_dx = 0.0;
};

ConvergenceScan convergence_scan(const std::vector<int>& ns, double box_lo, double box_hi,
                                 int grid_points, const TauGrid& taus,
                                 double rotation = 0.15);

} // namespace pearcey

#endif

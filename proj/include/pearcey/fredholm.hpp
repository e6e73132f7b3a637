#ifndef PEARCEY_FREDHOLM_HPP
#define PEARCEY_FREDHOLM_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "pearcey/kernels.hpp"

namespace pearcey {

struct Interval {
    double lo = 0.0, hi = 0.0;
};

/// The sets X_1..X_m, one finite union of intervals per time slice. Flattened
/// endpoints xi_{k,w} carry the alternating signs (-1)^{w+1} (w is 1-based:
/// left ends +, right ends -). Adjacent intervals may share an endpoint (the
/// indicator is unchanged); overlaps are rejected.
struct RegionFamily {
    std::vector<std::vector<Interval>> slices;

    struct Endpoint {
        int slice = 0;   // 0-based time slice
        int w = 1;       // 1-based position within the slice
        double xi = 0.0;
        int sign = 1;    // (-1)^{w+1}
    };

    void validate(int expected_slices) const;
    bool empty() const;
    std::vector<Endpoint> endpoints() const;
    int interval_count() const;
};

/// Block Nystrom discretization of I - K chi with Gauss-Legendre nodes per
/// interval. Immutable after construction; all queries are const and safe to
/// run concurrently.
class NystromSystem {
public:
    NystromSystem(const MatrixKernel& kernel, RegionFamily regions, int nodes_per_interval);

    const MatrixKernel& kernel() const { return *kernel_; }
    const RegionFamily& regions() const { return regions_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<int>& node_slice() const { return node_slice_; }

    /// det(I - K chi) of the discretized operator.
    double determinant() const { return det_; }

    /// Nystrom-extended resolvent R = (I - K chi)^{-1} K and its partial
    /// derivatives: R^{(dx,dy)}(x,y) = K^{(dx,dy)}(x,y)
    ///   + sum_b d_x^dx R(x,u_b) w_b d_y^dy K(u_b,y),
    /// with node values from the factorization.
    double resolvent(int i, double x, int j, double y, int dx = 0, int dy = 0) const;

    void resolvent_block(int i, const std::vector<double>& xs, int j,
                         const std::vector<double>& ys,
                         const std::vector<std::pair<int, int>>& combos,
                         std::vector<Eigen::MatrixXd>& out) const;

    /// Q = (I - K chi)^{-1} phi and P = psi (I - chi K)^{-1}, extended off
    /// the nodes, with derivatives up to 3 by differentiating the extension.
    std::pair<double, double> qp(int i, double x, int deriv = 0) const;

    void q_block(int i, const std::vector<double>& xs, const std::vector<int>& derivs,
                 std::vector<Eigen::VectorXd>& out) const;
    void p_block(int j, const std::vector<double>& ys, const std::vector<int>& derivs,
                 std::vector<Eigen::VectorXd>& out) const;

    /// K^{(dx,0)}(xs x nodes) for slice i against every node (block row).
    void kernel_rows(int i, const std::vector<double>& xs, const std::vector<int>& dxs,
                     std::vector<Eigen::MatrixXd>& out) const;
    /// K^{(0,dy)}(nodes x ys).
    void kernel_cols(int j, const std::vector<double>& ys, const std::vector<int>& dys,
                     std::vector<Eigen::MatrixXd>& out) const;

    const Eigen::MatrixXd& r_node_matrix() const { return r_node_; }
    const Eigen::VectorXd& q_node_vector() const;
    const Eigen::VectorXd& p_node_vector() const;

private:
    const MatrixKernel* kernel_;
    RegionFamily regions_;
    int nodes_per_interval_;
    std::vector<double> nodes_, weights_;
    std::vector<int> node_slice_;
    std::vector<std::pair<int, int>> slice_ranges_;  // [begin,end) into nodes_ per slice
    Eigen::MatrixXd M_;                              // K(u_a,u_b) w_b
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_, lut_;  // I-M and its transpose
    double det_ = 1.0;
    Eigen::MatrixXd r_node_;                         // R(u_a,u_b)
    bool has_qp_ = false;
    Eigen::VectorXd q_node_, p_node_;
};

/// det(I - K chi); values outside [-1e-8, 1 + 1e-8] raise a diagnostic.
double gap_probability(const NystromSystem& system);

/// Correlation density det[K_{k_a k_b}(x_a, x_b)] over a point list.
double correlation_density(const MatrixKernel& kernel,
                           const std::vector<std::pair<int, double>>& points);

} // namespace pearcey

#endif

#ifndef PEARCEY_PDE_SYSTEM_HPP
#define PEARCEY_PDE_SYSTEM_HPP

#include <array>
#include <string>

#include "pearcey/fredholm.hpp"

namespace pearcey {

/// Unknowns of the endpoint differential system, evaluated at the flattened
/// endpoint set {(k,w)}: Q and P with two derivatives, and the resolvent
/// matrices r, r_x, r_y over endpoint pairs.
struct PdeState {
    std::vector<RegionFamily::Endpoint> endpoints;
    std::vector<double> tau;  // tau of each endpoint's slice
    Eigen::VectorXd q, q1, q2;
    Eigen::VectorXd p, p1, p2;
    Eigen::MatrixXd r, rx, ry;

    int size() const { return static_cast<int>(endpoints.size()); }
    bool empty() const { return endpoints.empty(); }
};

/// Evaluates the full state through a Nystrom system.
PdeState assemble_state(const MatrixKernel& kernel, const RegionFamily& regions,
                        int nodes_per_interval = 32);

/// Central-difference verification of the nine endpoint differential
/// relations (dr, dr_x, dr_y, dq, dp, dq', dp', dq'', dp''). For each
/// endpoint the whole state is recomputed at xi +- h and the directional
/// derivative is compared against the right side assembled from the center
/// state; second-derivative resolvent combinations are evaluated directly.
struct DifferentialReport {
    static constexpr int kEquations = 9;
    std::array<double, kEquations> residual_h{};           // plain central differences
    std::array<double, kEquations> residual_richardson{};  // (4 D_{h/2} - D_h)/3
    double step = 0.0;

    static const char* equation_name(int idx);
    double max_residual() const;
    double max_residual_richardson() const;
};

DifferentialReport differential_residuals(const MatrixKernel& kernel,
                                          const RegionFamily& regions, double h,
                                          int nodes_per_interval = 32);

/// Pointwise residuals of the closure identities at endpoint pairs and at
/// off-node probe points, with the composition convention: left D = +d/dx,
/// right D = -d/dy, and delta = sum over endpoints of (-1)^{w+1} point
/// evaluations.
struct ClosureReport {
    double first_order = 0.0;         // R_x+R_y = -QP + R delta R
    double second_order_left = 0.0;   // R_xx+R_xy = -Q'P + R_x delta R
    double second_order_right = 0.0;  // R_xy+R_yy = -QP' + R delta R_y
    double third_order = 0.0;         // d^3 identity with Q'',P'' terms
    double full_third_order = 0.0;    // tau- and (x-y)-dressed third order
    double known_combo_diag = 0.0;    // endpoint-pair (b)-combinations
    double off_diagonal_times = 0.0;  // tau_i R_xx + tau_j R_xy, i != j

    double max_residual() const;
};

ClosureReport closure_identities(const MatrixKernel& kernel, const RegionFamily& regions,
                                 int nodes_per_interval = 32);

} // namespace pearcey

#endif

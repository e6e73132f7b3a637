#ifndef PEARCEY_SPECIAL_FUNCTIONS_HPP
#define PEARCEY_SPECIAL_FUNCTIONS_HPP

#include "pearcey/contour.hpp"

namespace pearcey {

/// Parameters of the Pearcey-type functions phi and psi.
///
/// order_R = 1 with higher_order_form = false selects the quartic pair
///   phi(x) = (1/2 pi i) Int_C exp(t^4/4 - tau t^2/2 + x t) dt,
///   psi(y) = (1/2 pi i) Int_{-i inf}^{i inf} exp(-s^4/4 + tau s^2/2 - y s) ds.
/// higher_order_form selects the order-R scaling (also meaningful at R = 1,
/// kept as a separate object for the reduction checks):
///   phi(x) = (1/pi i) Int_{C_R} exp((-1)^{R+1} t^{2R+2}/(R+1)! - 4 tau t^2 + 4 x t) dt,
///   psi(y) = (1/pi i) Int exp((-1)^R s^{2R+2}/(R+1)! + 4 tau s^2 - 4 y s) ds,
/// satisfying c_R phi^(2R+1) - 2 tau phi' + 4 x phi = 0 and
/// c_R psi^(2R+1) - 2 tau psi' - 4 y psi = 0.
struct PearceyParams {
    double tau = 0.0;
    int order_R = 1;
    bool higher_order_form = false;

    PearceyParams() = default;
    PearceyParams(double tau_, int order_R_ = 1)
        : tau(tau_), order_R(order_R_), higher_order_form(order_R_ >= 2) {}

    /// c_R = 2 (-1)^{R+1} / (4^{2R+1} R!), assembled from exact integers.
    double c_R() const;
};

/// deriv-th x-derivative of phi (monomial insertion in the integrand).
/// Throws numeric_error if the rule refinement check or the imaginary-residue
/// check fails. deriv must be <= 4.
double phi(double x, const PearceyParams& params, int deriv = 0);

/// deriv-th y-derivative of psi; contour is the imaginary axis.
double psi(double y, const PearceyParams& params, int deriv = 0);

/// |lhs| of the ODE satisfied by phi, using quadrature-evaluated derivatives
/// (up to order 2R+1 for the higher-order form).
double ode_residual_phi(double x, const PearceyParams& params);

/// Same for psi.
double ode_residual_psi(double y, const PearceyParams& params);

namespace detail {
/// Unconstrained-order derivative used internally by the ODE residuals.
double phi_raw(double x, const PearceyParams& params, int deriv);
double psi_raw(double y, const PearceyParams& params, int deriv);
} // namespace detail

} // namespace pearcey

#endif

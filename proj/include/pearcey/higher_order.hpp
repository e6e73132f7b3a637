#ifndef PEARCEY_HIGHER_ORDER_HPP
#define PEARCEY_HIGHER_ORDER_HPP

#include <complex>
#include <vector>

#include "pearcey/contour.hpp"

namespace pearcey {

/// Roots a_r of a^R - a^{R-1} + a^{R-2}/2! - ... + (-1)^R/R! = 0, the end
/// point data of the fictitious Brownian model behind the order-R kernels.
/// Newton's identities force sum a_r = 1, sum a_r^k = 0 for 2 <= k <= R and
/// sum a_r^{R+1} = (-1)^{R+1}/R!; the residuals certify the computed roots.
struct RootSystem {
    int order_R = 1;
    std::vector<Complex> roots;
    double scaling_exponent = 0.5;  // R/(R+1)
    double power_sum_residual = 0.0;

    /// sum of a_r^k over the roots.
    Complex power_sum(int k) const;
};

/// Companion-matrix roots with Newton polish, 1 <= order_R <= 8.
RootSystem singularity_roots(int order_R);

/// Product over roots of ((b_r^2 - s^2/n)/(b_r^2 - t^2/n))^n with
/// b_r^2 = 1/a_r; the finite-n integrand factor of the order-R model.
Complex higher_finite_n_product(const RootSystem& roots, Complex s, Complex t, int n);

} // namespace pearcey

#endif

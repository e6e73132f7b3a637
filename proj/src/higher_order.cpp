#include "pearcey/higher_order.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "pearcey/errors.hpp"

namespace pearcey {

Complex RootSystem::power_sum(int k) const {
    Complex sum = 0.0;
    for (Complex a : roots) sum += std::pow(a, k);
    return sum;
}

RootSystem singularity_roots(int order_R) {
    if (order_R < 1 || order_R > 8)
        throw std::domain_error("singularity_roots: order_R must lie in [1,8]");
    const int R = order_R;
    RootSystem out;
    out.order_R = R;
    out.scaling_exponent = static_cast<double>(R) / (R + 1);

    // Monic coefficients: a^R + sum_{k=1..R} (-1)^k / k! a^{R-k}.
    std::vector<double> coeff(R);  // coeff[j] multiplies a^j
    double kfac = 1.0;
    for (int k = 1; k <= R; ++k) {
        kfac *= k;
        coeff[R - k] = ((k % 2 == 0) ? 1.0 : -1.0) / kfac;
    }

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(R, R);
    for (int r = 1; r < R; ++r) companion(r, r - 1) = 1.0;
    for (int r = 0; r < R; ++r) companion(r, R - 1) = -coeff[r];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
    out.roots.resize(R);
    for (int r = 0; r < R; ++r) out.roots[r] = solver.eigenvalues()(r);

    // Newton polish on the exact polynomial.
    auto poly = [&](Complex a) {
        Complex v = 1.0;
        for (int j = R - 1; j >= 0; --j) v = v * a + coeff[j];
        return v;
    };
    auto dpoly = [&](Complex a) {
        Complex v = static_cast<double>(R);
        for (int j = R - 1; j >= 1; --j) v = v * a + static_cast<double>(j) * coeff[j];
        return v;
    };
    for (Complex& a : out.roots)
        for (int iter = 0; iter < 4; ++iter) a -= poly(a) / dpoly(a);

    double resid = std::abs(out.power_sum(1) - 1.0);
    for (int k = 2; k <= R; ++k) resid = std::max(resid, std::abs(out.power_sum(k)));
    double rfac = 1.0;
    for (int k = 2; k <= R; ++k) rfac *= k;
    double target = ((R + 1) % 2 == 0) ? 1.0 / rfac : -1.0 / rfac;
    resid = std::max(resid, std::abs(out.power_sum(R + 1) - target));
    out.power_sum_residual = resid;
    if (resid > 1e-12)
        throw numeric_error("singularity_roots: power-sum certification failed", resid);
    return out;
}

Complex higher_finite_n_product(const RootSystem& roots, Complex s, Complex t, int n) {
    if (n < 1) throw std::domain_error("higher_finite_n_product: n must be >= 1");
    Complex prod = 1.0;
    for (Complex a : roots.roots) {
        Complex b2 = 1.0 / a;
        Complex denom = b2 - t * t / static_cast<double>(n);
        if (std::abs(denom) < 1e-12)
            throw numeric_error("higher_finite_n_product: t too close to a pole",
                                std::abs(denom));
        Complex ratio = (b2 - s * s / static_cast<double>(n)) / denom;
        prod *= std::pow(ratio, n);
    }
    return prod;
}

} // namespace pearcey

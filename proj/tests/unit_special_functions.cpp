#include "doctest.h"

#include <cmath>
#include <complex>

#include "pearcey/contour.hpp"
#include "pearcey/special_functions.hpp"
#include "test_util.hpp"

using namespace pearcey;

namespace {

// Brute-force oracle: same contour definition, fresh quadrature at much
// higher resolution and radius, no shared code path with phi().
double phi_oracle(double x, double tau, int deriv = 0) {
    QuadratureRule rule = build_rule(pearcey_t_contour(0.0), 12.0, 40, 40);
    Complex v = rule.integrate([&](Complex t) {
        Complex val = std::exp(t * t * t * t / 4.0 - 0.5 * tau * t * t + x * t);
        for (int k = 0; k < deriv; ++k) val *= t;
        return val;
    });
    return (v / Complex(0.0, 2.0 * M_PI)).real();
}

// Frozen from the Gamma(1/4) reduction of the imaginary-axis integral.
const double kPsiZero = 0.40802446954913149054;  // 4^{-3/4} Gamma(1/4) / pi

} // namespace

TEST_CASE("phi special values and parity") {
    PearceyParams p0(0.0);
    CHECK_CLOSE(phi(0.0, p0, 0), 0.0, 1e-12);

    // Realness is asserted inside phi(); spot-check a grid runs clean.
    for (double x : {-1.5, -0.3, 0.9, 2.0})
        for (double tau : {-1.0, 0.2, 1.0}) {
            PearceyParams p(tau);
            CHECK(std::isfinite(phi(x, p, 0)));
        }

    // Parity under t -> -t: the contour is negation-invariant with
    // orientation, so the dt sign makes phi odd in x and phi' even.
    for (double x : {0.4, 1.7}) {
        PearceyParams p(0.6);
        CHECK_CLOSE(phi(-x, p, 0), -phi(x, p, 0), 1e-10);
        CHECK_CLOSE(phi(-x, p, 1), phi(x, p, 1), 1e-10);
        // psi: axis negation reverses orientation, two signs cancel: even.
        CHECK_CLOSE(psi(-x, p, 0), psi(x, p, 0), 1e-10);
        CHECK_CLOSE(psi(-x, p, 1), -psi(x, p, 1), 1e-10);
    }
}

TEST_CASE("phi against a 4x-resolution oracle") {
    PearceyParams p(1.0);
    double frozen = -0.50852733710061686371;  // phi(1, tau=1) from the oracle
    CHECK_CLOSE(phi(1.0, p, 0), frozen, 1e-9);
    CHECK_CLOSE(phi_oracle(1.0, 1.0), frozen, 1e-9);

    PearceyParams q(-0.3);
    double frozen2 = -0.27209796644587435279;  // phi(0.5, tau=-0.3)
    CHECK_CLOSE(phi(0.5, q, 0), frozen2, 1e-9);
    CHECK_CLOSE(phi_oracle(0.5, -0.3), frozen2, 1e-9);
}

TEST_CASE("psi special values") {
    PearceyParams p0(0.0);
    CHECK_CLOSE(psi(0.0, p0, 0), kPsiZero, 1e-10);
    CHECK_CLOSE(psi(0.0, p0, 1), 0.0, 1e-12);

    for (double y : {-1.2, 0.7})
        for (double tau : {-0.8, 0.5}) {
            PearceyParams p(tau);
            CHECK(std::isfinite(psi(y, p, 0)));
        }
}

TEST_CASE("quartic ODE residuals on a grid") {
    // phi''' - tau phi' + x phi = 0 and psi''' - tau psi' - y psi = 0.
    for (int ix = 0; ix < 5; ++ix)
        for (int it = 0; it < 5; ++it) {
            double x = -2.0 + ix * 1.0;
            double tau = -1.0 + it * 0.5;
            PearceyParams p(tau);
            CHECK(ode_residual_phi(x, p) < 1e-8);
            CHECK(ode_residual_psi(x, p) < 1e-8);
        }
    PearceyParams p1(0.3);
    CHECK(ode_residual_phi(0.7, p1) < 1e-8);
    PearceyParams p2(-1.0);
    CHECK(ode_residual_phi(2.0, p2) < 1e-8);
}

TEST_CASE("higher-order ODE residual at R=2") {
    PearceyParams p(0.2, 2);
    REQUIRE(p.higher_order_form);
    CHECK_CLOSE(p.c_R(), -2.0 / (std::pow(4.0, 5) * 2.0), 1e-18);
    CHECK(ode_residual_phi(0.5, p) < 1e-7);
    CHECK(ode_residual_psi(0.5, p) < 1e-7);
}

TEST_CASE("deriv bound and c_R sign") {
    PearceyParams p(0.0);
    CHECK_THROWS_AS(phi(0.0, p, 5), std::domain_error);
    CHECK_CLOSE(PearceyParams(0.0, 1).c_R(), 2.0 / 64.0, 1e-18);
    CHECK_CLOSE(PearceyParams(0.0, 3).c_R(), 2.0 / (std::pow(4.0, 7) * 6.0), 1e-18);
}

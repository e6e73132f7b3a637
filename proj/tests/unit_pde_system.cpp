#include "doctest.h"

#include <cmath>

#include "pearcey/pde_system.hpp"
#include "test_util.hpp"

using namespace pearcey;

namespace {

ExtendedPearceyKernel& kernel_tau0() {
    static ExtendedPearceyKernel k = [] {
        KernelSpec spec;
        spec.tau_grid = TauGrid{0.0};
        return ExtendedPearceyKernel(spec);
    }();
    return k;
}

RegionFamily one_interval(double lo, double hi) {
    RegionFamily r;
    r.slices = {{Interval{lo, hi}}};
    return r;
}

} // namespace

TEST_CASE("assembled state layout and signs") {
    PdeState s = assemble_state(kernel_tau0(), one_interval(-1.0, 1.0));
    REQUIRE(s.size() == 2);
    CHECK(s.endpoints[0].sign == 1);
    CHECK(s.endpoints[1].sign == -1);
    CHECK(s.endpoints[0].xi == -1.0);
    CHECK(s.tau[0] == 0.0);

    NystromSystem sys(kernel_tau0(), one_interval(-1.0, 1.0), 32);
    CHECK_CLOSE(s.q(0), sys.qp(0, -1.0, 0).first, 1e-13);
    CHECK_CLOSE(s.p2(1), sys.qp(0, 1.0, 2).second, 1e-13);
    CHECK_CLOSE(s.rx(0, 1), sys.resolvent(0, -1.0, 0, 1.0, 1, 0), 1e-13);
}

TEST_CASE("empty regions give an empty state") {
    RegionFamily r;
    r.slices = {{}};
    PdeState s = assemble_state(kernel_tau0(), r);
    CHECK(s.empty());
}

TEST_CASE("state assembly is deterministic (phantom variation changes nothing)") {
    PdeState a = assemble_state(kernel_tau0(), one_interval(-1.0, 1.0));
    PdeState b = assemble_state(kernel_tau0(), one_interval(-1.0, 1.0));
    CHECK((a.r - b.r).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.q2 - b.q2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.p1 - b.p1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("shrinking interval: r approaches the kernel values") {
    double delta = 1e-3;
    PdeState s = assemble_state(kernel_tau0(), one_interval(-delta, delta), 8);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double k = kernel_tau0().entry(0, 0, s.endpoints[a].xi, s.endpoints[b].xi);
            CHECK_CLOSE(s.r(a, b), k, 10.0 * delta);
        }
}

TEST_CASE("duality: p entries equal q entries of the transposed kernel") {
    KernelSpec spec;
    spec.tau_grid = TauGrid{-0.5, 0.5};
    ExtendedPearceyKernel K(spec);
    TransposedKernel Kt(K);
    RegionFamily r;
    r.slices = {{Interval{-0.9, 0.2}}, {Interval{-0.1, 0.8}}};
    PdeState s = assemble_state(K, r);
    PdeState st = assemble_state(Kt, r);
    for (int a = 0; a < s.size(); ++a) {
        CHECK_CLOSE(s.p(a), st.q(a), 1e-9);
        CHECK_CLOSE(s.p1(a), st.q1(a), 1e-9);
        CHECK_CLOSE(s.p2(a), st.q2(a), 1e-9);
    }
}

TEST_CASE("nine differential relations hold under central differences") {
    DifferentialReport rep = differential_residuals(kernel_tau0(), one_interval(-1.0, 1.0), 1e-3);
    for (int eq = 0; eq < DifferentialReport::kEquations; ++eq) {
        CHECK_MESSAGE(rep.residual_h[eq] < 5e-5, DifferentialReport::equation_name(eq),
                      " residual ", rep.residual_h[eq]);
        CHECK_MESSAGE(rep.residual_richardson[eq] < 1e-9,
                      DifferentialReport::equation_name(eq), " richardson ",
                      rep.residual_richardson[eq]);
    }
    CHECK_THROWS_AS(differential_residuals(kernel_tau0(), one_interval(-1.0, 1.0), 0.1),
                    std::domain_error);
}

TEST_CASE("integrating the log-det gradient reproduces the determinant change") {
    // Move one endpoint by a small step; the midpoint-rule integral of the
    // signed diagonal resolvent matches the log-det change to O(step^3).
    double step = 1e-2;
    RegionFamily base = one_interval(-1.0, 1.0);
    RegionFamily mid = one_interval(-1.0, 1.0 + 0.5 * step);
    RegionFamily moved = one_interval(-1.0, 1.0 + step);
    NystromSystem s0(kernel_tau0(), base, 32);
    NystromSystem sm(kernel_tau0(), mid, 32);
    NystromSystem s1(kernel_tau0(), moved, 32);
    double change = std::log(s1.determinant()) - std::log(s0.determinant());
    double xi_mid = 1.0 + 0.5 * step;
    double grad_mid = -sm.resolvent(0, xi_mid, 0, xi_mid);  // right endpoint, w = 2
    CHECK_CLOSE(change, step * grad_mid, 5.0 * step * step * step);
}

TEST_CASE("closure identities for one interval at tau = 0") {
    ClosureReport rep = closure_identities(kernel_tau0(), one_interval(-1.0, 1.0));
    CHECK_MESSAGE(rep.first_order < 1e-7, "first order ", rep.first_order);
    CHECK_MESSAGE(rep.second_order_left < 1e-5, "second order left ", rep.second_order_left);
    CHECK_MESSAGE(rep.second_order_right < 1e-5, "second order right ", rep.second_order_right);
    CHECK_MESSAGE(rep.third_order < 1e-5, "third order ", rep.third_order);
    CHECK_MESSAGE(rep.full_third_order < 1e-5, "full third order ", rep.full_third_order);
    CHECK_MESSAGE(rep.known_combo_diag < 1e-5, "known combinations ", rep.known_combo_diag);
}

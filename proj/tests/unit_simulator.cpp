#include "doctest.h"

#include <cmath>

#include "pearcey/finite_n.hpp"
#include "pearcey/gauss.hpp"
#include "pearcey/parallel.hpp"
#include "pearcey/simulator.hpp"
#include "test_util.hpp"

using namespace pearcey;

namespace {

RegionFamily one_region(double lo, double hi) {
    RegionFamily r;
    r.slices = {{Interval{lo, hi}}};
    return r;
}

} // namespace

TEST_CASE("crossing probability closed form") {
    CHECK_CLOSE(bridge_crossing_probability(1.0, 1.0, 1.0), std::exp(-2.0), 1e-15);
    CHECK_CLOSE(bridge_crossing_probability(0.5, 2.0, 0.25), std::exp(-8.0), 1e-15);
    CHECK_THROWS_AS(bridge_crossing_probability(-0.1, 1.0, 1.0), std::domain_error);
}

TEST_CASE("config validation") {
    McConfig c;
    c.n = 2;
    c.starts = {0.2, -0.2};  // not increasing
    c.ends = {-1.0, 1.0};
    c.obs_times = {0.5};
    CHECK_THROWS_AS(c.validate(), std::domain_error);
    c.starts = {-0.2, 0.2};
    c.target_accepted = 10;
    CHECK_THROWS_AS(c.validate(), std::domain_error);
}

TEST_CASE("single bridge avoidance matches the closed-form density") {
    McConfig c;
    c.n = 1;
    c.starts = {0.0};
    c.ends = {0.0};
    c.obs_times = {0.5};
    c.target_accepted = 40000;
    c.seed = 777;
    McResult res = sample_avoidance(c, one_region(0.5, 1.0));
    CHECK(res.acceptance_rate == 1.0);

    // 1 - int_X bridge-density with the diffusion-1/2 heat kernel.
    const GaussRule& g = gauss_legendre(32);
    double mass = 0.0;
    for (int i = 0; i < 32; ++i) {
        double x = 0.75 + 0.25 * g.nodes[i];
        mass += 0.25 * g.weights[i] * heat_p(0.0, x, 0.5) * heat_p(x, 0.0, 0.5) /
                heat_p(0.0, 0.0, 1.0);
    }
    double expected = 1.0 - mass;
    CHECK_MESSAGE(std::abs(res.estimate - expected) < 3.0 * res.standard_error,
                  "estimate ", res.estimate, " expected ", expected, " stderr ",
                  res.standard_error);
}

TEST_CASE("two bridges against the finite-n determinant") {
    McConfig c;
    c.n = 2;
    c.starts = {-0.2, 0.2};
    c.ends = {-1.0, 1.0};
    c.obs_times = {0.5};
    c.target_accepted = 20000;
    c.seed = 20250809;
    RegionFamily region = one_region(-0.1, 0.1);
    McResult res = sample_avoidance(c, region);
    CHECK(res.acceptance_rate > 0.5);

    PathModel model;
    model.n = 2;
    model.starts = {-0.2, 0.2};
    model.ends = {-1.0, 1.0};
    model.times = {0.5};
    FiniteNBrownianKernel kernel(model);
    NystromSystem system(kernel, region, 32);
    double det = gap_probability(system);
    CHECK_MESSAGE(std::abs(res.estimate - det) < 3.0 * res.standard_error,
                  "estimate ", res.estimate, " determinant ", det, " stderr ",
                  res.standard_error);
}

TEST_CASE("seeded runs are reproducible and thread-count independent") {
    McConfig c;
    c.n = 2;
    c.starts = {-0.3, 0.3};
    c.ends = {-1.0, 1.0};
    c.obs_times = {0.4};
    c.target_accepted = 5000;
    c.seed = 42;
    RegionFamily region = one_region(-0.05, 0.05);
    McResult a = sample_avoidance(c, region);
    McResult b = sample_avoidance(c, region);
    CHECK(a.estimate == b.estimate);
    CHECK(a.accepted == b.accepted);

    int saved = max_threads();
    set_max_threads(3);
    McResult threaded = sample_avoidance(c, region);
    set_max_threads(saved);
    CHECK(threaded.estimate == a.estimate);
    CHECK(threaded.trials == a.trials);
}

TEST_CASE("grid refinement stays within one standard error") {
    McConfig c;
    c.n = 2;
    c.starts = {-0.2, 0.2};
    c.ends = {-1.0, 1.0};
    c.obs_times = {0.5};
    c.target_accepted = 20000;
    c.seed = 5;
    c.grid_steps = 16;
    RegionFamily region = one_region(-0.1, 0.1);
    McResult coarse = sample_avoidance(c, region);
    c.grid_steps = 32;
    McResult fine = sample_avoidance(c, region);
    CHECK_MESSAGE(std::abs(coarse.estimate - fine.estimate) <
                      std::max(coarse.standard_error, fine.standard_error),
                  "coarse ", coarse.estimate, " fine ", fine.estimate);
}

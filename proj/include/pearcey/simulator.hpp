#ifndef PEARCEY_SIMULATOR_HPP
#define PEARCEY_SIMULATOR_HPP

#include <cstdint>
#include <vector>

#include "pearcey/fredholm.hpp"

namespace pearcey {

/// Monte Carlo configuration for n nonintersecting Brownian bridges with
/// diffusion coefficient 1/2 (variance sigma/2 over a time span sigma),
/// matching the heat kernel convention of the finite-n module.
struct McConfig {
    int n = 1;
    std::vector<double> starts;     // strictly increasing
    std::vector<double> ends;       // strictly increasing
    std::vector<double> obs_times;  // observation times in (0,1)
    int grid_steps = 32;            // uniform discretization; obs times merged in
    long long target_accepted = 100000;
    std::uint64_t seed = 1;

    void validate() const;
};

struct McResult {
    double estimate = 0.0;         // conditional avoidance frequency
    double standard_error = 0.0;   // binomial
    double acceptance_rate = 0.0;  // nonintersection acceptance
    long long accepted = 0;
    long long trials = 0;
};

/// Probability that a Brownian bridge with end gaps d0, d1 > 0 and variance
/// dt over the step touches zero in between: exp(-2 d0 d1 / dt).
double bridge_crossing_probability(double d0, double d1, double dt);

/// Rejection sampling of independent bridges; nonintersection is enforced on
/// the grid plus the exact pairwise crossing correction per step. Returns
/// the conditional frequency of avoiding every X_k at its observation time.
/// Counter-based RNG streams make the tallies independent of threading.
McResult sample_avoidance(const McConfig& config, const RegionFamily& regions);

} // namespace pearcey

#endif

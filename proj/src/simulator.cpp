#include "pearcey/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "pearcey/errors.hpp"
#include "pearcey/parallel.hpp"

namespace pearcey {

void McConfig::validate() const {
    if (n < 1) throw std::domain_error("McConfig: n must be >= 1");
    if (static_cast<int>(starts.size()) != n || static_cast<int>(ends.size()) != n)
        throw std::domain_error("McConfig: starts/ends must have n entries");
    for (int i = 1; i < n; ++i)
        if (!(starts[i - 1] < starts[i]) || !(ends[i - 1] < ends[i]))
            throw std::domain_error("McConfig: starts and ends must be strictly increasing");
    if (obs_times.empty()) throw std::domain_error("McConfig: need observation times");
    for (double t : obs_times)
        if (!(t > 0.0 && t < 1.0)) throw std::domain_error("McConfig: times must lie in (0,1)");
    if (grid_steps < 2) throw std::domain_error("McConfig: grid_steps must be >= 2");
    if (target_accepted < 1000)
        throw std::domain_error("McConfig: sample budget must be at least 1e3");
}

double bridge_crossing_probability(double d0, double d1, double dt) {
    if (!(d0 > 0.0 && d1 > 0.0 && dt > 0.0))
        throw std::domain_error("bridge_crossing_probability: gaps and step must be > 0");
    return std::exp(-2.0 * d0 * d1 / dt);
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stateless uniform in (0,1): one value per (seed, trial, draw) counter.
inline double counter_u01(std::uint64_t seed, std::uint64_t trial, std::uint64_t draw) {
    std::uint64_t h =
        splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ (draw * 0xd1342543de82ef95ULL));
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

inline double counter_normal(std::uint64_t seed, std::uint64_t trial, std::uint64_t draw) {
    double u1 = counter_u01(seed, trial, 2 * draw);
    double u2 = counter_u01(seed, trial, 2 * draw + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace

McResult sample_avoidance(const McConfig& config, const RegionFamily& regions) {
    config.validate();
    const int m = static_cast<int>(config.obs_times.size());
    regions.validate(m);

    // Discretization grid: uniform steps with the observation times merged.
    std::vector<double> grid;
    for (int k = 0; k <= config.grid_steps; ++k)
        grid.push_back(static_cast<double>(k) / config.grid_steps);
    grid.insert(grid.end(), config.obs_times.begin(), config.obs_times.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-14; }),
               grid.end());
    std::vector<int> obs_index(m);
    for (int k = 0; k < m; ++k) {
        auto it = std::min_element(grid.begin(), grid.end(), [&](double a, double b) {
            return std::abs(a - config.obs_times[k]) < std::abs(b - config.obs_times[k]);
        });
        obs_index[k] = static_cast<int>(it - grid.begin());
    }
    const int steps = static_cast<int>(grid.size()) - 1;
    const int n = config.n;

    // One trial: sample every bridge on the grid, reject on any ordering
    // violation, then apply the product of per-step pairwise crossing
    // corrections through a single uniform draw.
    auto run_trial = [&](std::uint64_t trial) -> std::pair<bool, bool> {
        std::vector<double> pos(n);
        std::vector<double> prev(config.starts);
        std::vector<std::vector<double>> at_obs(m, std::vector<double>(n));
        double log_survival = 0.0;
        for (int k = 1; k <= steps; ++k) {
            double t0 = grid[k - 1], t1 = grid[k];
            double dt = t1 - t0;
            for (int i = 0; i < n; ++i) {
                double z = counter_normal(config.seed, trial,
                                          static_cast<std::uint64_t>(k - 1) * n + i);
                double pull = prev[i] + (config.ends[i] - prev[i]) * dt / (1.0 - t0);
                double var = 0.5 * dt * (1.0 - t1) / (1.0 - t0);
                pos[i] = (t1 >= 1.0) ? config.ends[i] : pull + std::sqrt(var) * z;
            }
            for (int i = 0; i + 1 < n; ++i)
                if (!(pos[i] < pos[i + 1])) return {false, false};
            for (int i = 0; i + 1 < n; ++i) {
                double d0 = prev[i + 1] - prev[i];
                double d1 = pos[i + 1] - pos[i];
                log_survival += std::log1p(-bridge_crossing_probability(d0, d1, dt));
            }
            for (int q = 0; q < m; ++q)
                if (obs_index[q] == k) at_obs[q] = pos;
            prev = pos;
        }
        double u = counter_u01(config.seed, trial,
                               2 * (static_cast<std::uint64_t>(steps) * n + 8));
        if (std::log(u) >= log_survival) return {false, false};

        bool avoided = true;
        for (int q = 0; q < m && avoided; ++q)
            for (const Interval& iv : regions.slices[q]) {
                for (int i = 0; i < n; ++i)
                    if (at_obs[q][i] >= iv.lo && at_obs[q][i] <= iv.hi) {
                        avoided = false;
                        break;
                    }
                if (!avoided) break;
            }
        return {true, avoided};
    };

    // Integer tallies over disjoint trial indices commute, so the result is
    // independent of the thread count; the stop rule advances whole blocks.
    const long long block = 8192;
    std::atomic<long long> accepted{0}, avoided{0};
    long long trials = 0;
    while (accepted.load() < config.target_accepted) {
        parallel_for(block, [&](std::int64_t q) {
            auto [acc, avd] = run_trial(static_cast<std::uint64_t>(trials + q));
            if (acc) {
                accepted.fetch_add(1);
                if (avd) avoided.fetch_add(1);
            }
        });
        trials += block;
        if (trials >= 262144 && accepted.load() < trials / 10000)
            throw numeric_error(
                "nonintersection acceptance rate below 1e-4; widen the endpoint separation",
                static_cast<double>(accepted.load()) / static_cast<double>(trials));
    }

    McResult out;
    out.accepted = accepted.load();
    out.trials = trials;
    out.acceptance_rate = static_cast<double>(out.accepted) / static_cast<double>(out.trials);
    double p = static_cast<double>(avoided.load()) / static_cast<double>(out.accepted);
    out.estimate = p;
    out.standard_error = std::sqrt(std::max(p * (1.0 - p), 1e-12) / out.accepted);
    return out;
}

} // namespace pearcey

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cso/distribution.hpp"
#include "cso/simplex.hpp"

namespace cso {

struct TrajectoryRecord {
    Vec3 initial;
    SeedSpec seed;
    std::size_t steps_taken;
    Vec3 final;
    FixedPointLabel verdict;  // Undecided when no ball captured the orbit
    // Downsampled states (initial included), kept at or under 1024 entries
    // by doubling the sampling stride whenever the buffer fills. Empty
    // unless recording was requested.
    std::vector<Vec3> history;
};

// Runs the random orbit from x0, drawing one parameter per step from the
// stream identified by `seed`. The verdict is the label of the fixed point
// whose eps_conv-ball has contained the orbit for `dwell` consecutive
// steps; Undecided if no ball does so within max_steps. A simplex
// violation mid-orbit is rethrown as std::runtime_error since it signals
// an internal bug, not bad input.
TrajectoryRecord iterate(const ThetaDistribution& dist, const Vec3& x0, SeedSpec seed,
                         std::size_t max_steps = 100000, double eps_conv = 1e-6,
                         std::size_t dwell = 20, bool record_history = false);

struct BasinEstimate {
    Vec3 initial;
    std::size_t trials;
    // Verdict counts indexed by FixedPointLabel, Undecided included.
    std::array<std::uint64_t, kLabelCount> hits;

    double fraction(FixedPointLabel label) const {
        return static_cast<double>(hits[static_cast<int>(label)]) /
               static_cast<double>(trials);
    }
};

// Runs `trials` independent trajectories from x0; trial i draws from
// stream_index = stream_base + i, so counts are a pure function of the
// inputs and master seed no matter how many threads run them.
BasinEstimate estimate_basin(const ThetaDistribution& dist, const Vec3& x0,
                             std::size_t trials, std::uint64_t master_seed,
                             std::size_t max_steps = 100000, double eps_conv = 1e-6,
                             std::size_t dwell = 20, unsigned n_threads = 1,
                             std::uint64_t stream_base = 0);

// Barycentric lattice of the open fundamental sector at resolution n >= 3:
// points (i*e1 + j*c + k*C)/n over i+j+k = n with i,j,k >= 1, where e1, c,
// C are the sector's corner fixed points. All (n-1)(n-2)/2 points are
// strictly interior; order is lexicographic in (i, j).
std::vector<Vec3> sector_grid(std::size_t resolution);

struct EscapeResult {
    std::size_t trials;
    std::size_t escaped;   // trials whose orbit left the eps-ball at least once
    double fraction;       // escaped / trials
    double median_steps;   // median first-exit step over escaped trials; NaN if none
};

// Start point for an escape run: distance `start_distance` from the target
// fixed point toward the barycenter of the fundamental sector, which keeps
// the point interior for every small distance.
Vec3 escape_start_point(FixedPointLabel target, double start_distance);

// Fraction of trials that exit the eps-ball around the target within
// max_steps, starting at escape_start_point(target, start_distance).
// Requires 0 < start_distance < eps <= 0.05 and target in {E1, C12, Center}.
EscapeResult escape_experiment(const ThetaDistribution& dist, FixedPointLabel target,
                               double start_distance, double eps, std::size_t trials,
                               std::size_t max_steps, std::uint64_t master_seed,
                               unsigned n_threads = 1);

}  // namespace cso

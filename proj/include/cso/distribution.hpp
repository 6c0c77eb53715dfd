#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace cso {

// Law of the i.i.d. parameter sequence: a finite mixture of point masses
// and uniform intervals on [0,1]. Restricting to this family keeps every
// expectation we need available in closed form.
struct ThetaAtom {
    double weight;
    double theta;
};

struct ThetaInterval {
    double weight;
    double lo;  // strictly below hi
    double hi;
};

struct ThetaDistribution {
    std::vector<ThetaAtom> atoms;
    std::vector<ThetaInterval> intervals;
};

// Constructors normalize weights to sum 1 and validate supports against
// [0,1]; they throw std::invalid_argument on bad input.
ThetaDistribution dirac_dist(double theta);
ThetaDistribution uniform_dist(double lo, double hi);
ThetaDistribution mixture(std::vector<ThetaAtom> atoms, std::vector<ThetaInterval> intervals);

void validate_distribution(const ThetaDistribution& dist);

// Decimal literal or exact fraction like 2/3; used for every number the
// CLI accepts so excluded or irrational-looking parameters can be written
// without rounding surprises.
double parse_real(std::string_view text);

// Text form used by the CLI and config files:
//   dirac:0.9
//   uniform:0.5,0.8
//   mix:0.5*dirac:0.57+0.5*dirac:0.77
// Numbers are decimal literals or exact fractions like 2/3; no whitespace.
ThetaDistribution parse_distribution(const std::string& text);
std::string format_distribution(const ThetaDistribution& dist);

double mean(const ThetaDistribution& dist);

// Seeding contract: every independent draw sequence is identified by a
// (master_seed, stream_index) pair, so parallel trajectories can use
// stream_index = trajectory number and stay schedule-independent.
struct SeedSpec {
    std::uint64_t master_seed;
    std::uint64_t stream_index;
};

// Mixes master and stream into a generator seed (splitmix64 finalizer),
// decorrelating streams that share a master seed.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index);

// One seeded draw sequence. Each sample() consumes one uniform variate to
// pick the mixture component plus one more when the component is an
// interval; the draw count per sample is therefore data-dependent but
// deterministic given the seed.
class RandomStream {
public:
    explicit RandomStream(SeedSpec seed);

    // Uniform on [0,1) with 53 random bits.
    double uniform01();

    double sample(const ThetaDistribution& dist);

private:
    std::mt19937_64 gen_;
};

// n i.i.d. draws from the distribution, deterministic given the seed.
std::vector<double> sample(const ThetaDistribution& dist, SeedSpec seed, std::size_t n);

// The four linearization gains whose log-expectations decide stability:
// E1: 3(1-θ), SaddleIn: (3/2)θ, SaddleOut: 2-(3/2)θ, Center: 1/3+θ.
enum class LogIntegrand { E1, SaddleIn, SaddleOut, Center };

double integrand_value(LogIntegrand g, double theta);

// Exact E[log g(Θ)]. Atoms contribute weight*log g(θ); intervals use the
// antiderivative u -> u log u - u of log, which absorbs the integrable
// endpoint zeros (θ=1 for E1, θ=0 for SaddleIn). Returns -infinity when
// an atom sits exactly on a zero of g.
double expect_log(const ThetaDistribution& dist, LogIntegrand g);

}  // namespace cso

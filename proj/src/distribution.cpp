#include "cso/distribution.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "cso/format.hpp"

namespace cso {

namespace {

double parse_plain_number(std::string_view s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("bad number '" + std::string(s) + "' in distribution");
    return v;
}

void parse_component(std::string_view s, double weight,
                     std::vector<ThetaAtom>& atoms, std::vector<ThetaInterval>& intervals) {
    constexpr std::string_view kDirac = "dirac:";
    constexpr std::string_view kUniform = "uniform:";
    if (s.substr(0, kDirac.size()) == kDirac) {
        atoms.push_back({weight, parse_real(s.substr(kDirac.size()))});
    } else if (s.substr(0, kUniform.size()) == kUniform) {
        const auto body = s.substr(kUniform.size());
        const auto comma = body.find(',');
        if (comma == std::string_view::npos)
            throw std::invalid_argument("uniform component needs two endpoints: '" +
                                        std::string(s) + "'");
        intervals.push_back({weight, parse_real(body.substr(0, comma)),
                             parse_real(body.substr(comma + 1))});
    } else {
        throw std::invalid_argument("unknown distribution component '" + std::string(s) +
                                    "'; expected dirac:... or uniform:...");
    }
}

}  // namespace

double parse_real(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_plain_number(text);
    const double num = parse_plain_number(text.substr(0, slash));
    const double den = parse_plain_number(text.substr(slash + 1));
    if (den == 0.0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return num / den;
}

ThetaDistribution dirac_dist(double theta) {
    return mixture({{1.0, theta}}, {});
}

ThetaDistribution uniform_dist(double lo, double hi) {
    return mixture({}, {{1.0, lo, hi}});
}

ThetaDistribution mixture(std::vector<ThetaAtom> atoms, std::vector<ThetaInterval> intervals) {
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.weight > 0.0) || !std::isfinite(a.weight))
            throw std::invalid_argument("mixture weights must be positive");
        if (!(a.theta >= 0.0 && a.theta <= 1.0))
            throw std::invalid_argument("atom location must lie in [0,1]");
        total += a.weight;
    }
    for (const auto& iv : intervals) {
        if (!(iv.weight > 0.0) || !std::isfinite(iv.weight))
            throw std::invalid_argument("mixture weights must be positive");
        if (!(iv.lo >= 0.0 && iv.lo < iv.hi && iv.hi <= 1.0))
            throw std::invalid_argument("uniform interval must satisfy 0 <= lo < hi <= 1");
        total += iv.weight;
    }
    if (total <= 0.0)
        throw std::invalid_argument("distribution has no components");
    for (auto& a : atoms) a.weight /= total;
    for (auto& iv : intervals) iv.weight /= total;
    return {std::move(atoms), std::move(intervals)};
}

void validate_distribution(const ThetaDistribution& dist) {
    double total = 0.0;
    for (const auto& a : dist.atoms) {
        if (!(a.weight > 0.0) || !(a.theta >= 0.0 && a.theta <= 1.0))
            throw std::invalid_argument("invalid atom in distribution");
        total += a.weight;
    }
    for (const auto& iv : dist.intervals) {
        if (!(iv.weight > 0.0) || !(iv.lo >= 0.0 && iv.lo < iv.hi && iv.hi <= 1.0))
            throw std::invalid_argument("invalid interval in distribution");
        total += iv.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("distribution weights must sum to 1");
}

ThetaDistribution parse_distribution(const std::string& text) {
    std::string_view s = text;
    std::vector<ThetaAtom> atoms;
    std::vector<ThetaInterval> intervals;
    constexpr std::string_view kMix = "mix:";
    if (s.substr(0, kMix.size()) == kMix) {
        std::string_view rest = s.substr(kMix.size());
        while (!rest.empty()) {
            auto plus = rest.find('+');
            const auto part = rest.substr(0, plus);
            rest = (plus == std::string_view::npos) ? std::string_view{}
                                                    : rest.substr(plus + 1);
            const auto star = part.find('*');
            if (star == std::string_view::npos)
                throw std::invalid_argument("mixture component needs weight*component: '" +
                                            std::string(part) + "'");
            parse_component(part.substr(star + 1), parse_real(part.substr(0, star)),
                            atoms, intervals);
        }
        if (atoms.empty() && intervals.empty())
            throw std::invalid_argument("empty mixture: '" + text + "'");
    } else {
        parse_component(s, 1.0, atoms, intervals);
    }
    return mixture(std::move(atoms), std::move(intervals));
}

std::string format_distribution(const ThetaDistribution& dist) {
    if (dist.atoms.size() == 1 && dist.intervals.empty())
        return "dirac:" + format_double(dist.atoms[0].theta);
    if (dist.atoms.empty() && dist.intervals.size() == 1)
        return "uniform:" + format_double(dist.intervals[0].lo) + "," +
               format_double(dist.intervals[0].hi);
    std::string out = "mix:";
    bool first = true;
    for (const auto& a : dist.atoms) {
        if (!first) out += '+';
        first = false;
        out += format_double(a.weight) + "*dirac:" + format_double(a.theta);
    }
    for (const auto& iv : dist.intervals) {
        if (!first) out += '+';
        first = false;
        out += format_double(iv.weight) + "*uniform:" + format_double(iv.lo) + "," +
               format_double(iv.hi);
    }
    return out;
}

double mean(const ThetaDistribution& dist) {
    validate_distribution(dist);
    double m = 0.0;
    for (const auto& a : dist.atoms) m += a.weight * a.theta;
    for (const auto& iv : dist.intervals) m += iv.weight * 0.5 * (iv.lo + iv.hi);
    return m;
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
    // splitmix64 finalizer over master + golden-ratio stride; adjacent
    // stream indices land far apart in generator-seed space.
    std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RandomStream::RandomStream(SeedSpec seed)
    : gen_(stream_seed(seed.master_seed, seed.stream_index)) {}

double RandomStream::uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RandomStream::sample(const ThetaDistribution& dist) {
    const double u = uniform01();
    double acc = 0.0;
    for (const auto& a : dist.atoms) {
        acc += a.weight;
        if (u < acc) return a.theta;
    }
    for (const auto& iv : dist.intervals) {
        acc += iv.weight;
        if (u < acc) return iv.lo + (iv.hi - iv.lo) * uniform01();
    }
    // u can exceed the accumulated weights by a rounding whisker; fall back
    // to the last component.
    if (!dist.intervals.empty()) {
        const auto& iv = dist.intervals.back();
        return iv.lo + (iv.hi - iv.lo) * uniform01();
    }
    return dist.atoms.back().theta;
}

std::vector<double> sample(const ThetaDistribution& dist, SeedSpec seed, std::size_t n) {
    validate_distribution(dist);
    RandomStream stream(seed);
    std::vector<double> draws(n);
    for (auto& d : draws) d = stream.sample(dist);
    return draws;
}

double integrand_value(LogIntegrand g, double theta) {
    switch (g) {
        case LogIntegrand::E1: return 3.0 * (1.0 - theta);
        case LogIntegrand::SaddleIn: return 1.5 * theta;
        case LogIntegrand::SaddleOut: return 2.0 - 1.5 * theta;
        case LogIntegrand::Center: return 1.0 / 3.0 + theta;
    }
    throw std::invalid_argument("unknown integrand");
}

namespace {

// Slope of each affine gain g(θ); the intercept is g(0).
double integrand_slope(LogIntegrand g) {
    switch (g) {
        case LogIntegrand::E1: return -3.0;
        case LogIntegrand::SaddleIn: return 1.5;
        case LogIntegrand::SaddleOut: return -1.5;
        case LogIntegrand::Center: return 1.0;
    }
    throw std::invalid_argument("unknown integrand");
}

// Antiderivative of log, G(u) = u log u - u, continued by its limit 0 at
// u = 0 so endpoint zeros of the gain integrate cleanly.
double log_antiderivative(double u) {
    if (u < 1e-300) return 0.0;
    return u * std::log(u) - u;
}

}  // namespace

double expect_log(const ThetaDistribution& dist, LogIntegrand g) {
    validate_distribution(dist);
    const double slope = integrand_slope(g);
    double total = 0.0;
    for (const auto& a : dist.atoms) {
        const double v = integrand_value(g, a.theta);
        if (v <= 0.0) return -std::numeric_limits<double>::infinity();
        total += a.weight * std::log(v);
    }
    for (const auto& iv : dist.intervals) {
        const double glo = integrand_value(g, iv.lo);
        const double ghi = integrand_value(g, iv.hi);
        // Mean of log g over [lo,hi]: substitute u = g(θ), then
        // ∫ log u du / (slope (hi-lo)).
        total += iv.weight * (log_antiderivative(ghi) - log_antiderivative(glo)) /
                 (slope * (iv.hi - iv.lo));
    }
    return total;
}

}  // namespace cso

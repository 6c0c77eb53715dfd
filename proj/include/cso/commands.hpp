#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cso/simplex.hpp"

namespace cso {

// Each subcommand takes a flat config mirroring its CLI flags and writes a
// CSV artifact to a stream. Header comment lines (prefixed with #) echo
// every input that influences the bytes that follow, so any artifact can
// be regenerated from itself; thread count and output location are
// deliberately not echoed because they must not influence content.

struct SimulateConfig {
    std::string dist = "uniform:0,1";
    std::string x0 = "0.5,0.3,0.2";
    std::uint64_t seed = 0;
    std::size_t steps = 100000;
    double eps = 1e-6;  // convergence ball radius
    std::size_t dwell = 20;
};

struct ClassifyConfig {
    std::string dist = "uniform:0,1";
};

struct ScanConfig {
    double from = 0.567;
    double to = 0.767;
    double step = 1e-3;
    double offset = 0.1;  // two-point mixture half-spread
};

struct BasinConfig {
    std::string dist = "uniform:0,1";
    std::size_t grid = 10;  // barycentric resolution of the sector lattice
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::size_t steps = 100000;
    double eps = 1e-6;
    std::size_t dwell = 20;
    unsigned threads = 1;
};

struct EscapeConfig {
    std::string dist = "dirac:0.4";
    std::string target = "E1";
    double start = 1e-3;  // initial distance from the target
    double eps = 1e-2;    // escape ball radius
    std::size_t trials = 100;
    std::size_t steps = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct NormalFormCheckConfig {
    std::uint64_t seed = 0;  // seeds the randomized probes only
};

// "x1,x2,x3" with decimal or fractional components, validated onto the simplex.
Vec3 parse_point(const std::string& text);

// Semicolon-joined label names, e.g. "E1;Center"; empty string for the empty set.
std::string join_labels(const std::vector<FixedPointLabel>& labels);

// Config errors surface as std::invalid_argument / std::domain_error;
// internal invariant violations as std::runtime_error. The CLI maps these
// to exit codes 2 and 3 respectively.
void run_simulate(const SimulateConfig& cfg, std::ostream& csv);
void run_classify(const ClassifyConfig& cfg, std::ostream& csv, std::ostream& report);
void run_scan(const ScanConfig& cfg, std::ostream& csv);
void run_basin(const BasinConfig& cfg, std::ostream& csv);
void run_escape(const EscapeConfig& cfg, std::ostream& csv);

// Emits one row per invariant with pass/fail/flag status and returns the
// number of failures (flag rows never count).
int run_normalform_check(const NormalFormCheckConfig& cfg, std::ostream& csv);

}  // namespace cso

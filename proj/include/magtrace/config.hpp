#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "magtrace/verify.hpp"

namespace mag {

using json = nlohmann::ordered_json;

// Acceptance thresholds applied by the verify/full-report pipelines.
struct Tolerances {
    double c0_rel = 1e-3;
    double c1_frac = 0.02;
    double c2_rel = 0.15;
    double dual_route = 1e-6;
    double trace_kernel = 1e-9;
    double kernel_order = 2.5;
    double cert_shift = 1e-8;
    double hs_imag_rel = 1e-8;
};

struct RunConfig {
    Problem problem;
    LadderSettings ladder;
    std::vector<int> fit_orders{0, 1, 2, 3};
    bool kernel_enabled = false;
    KernelCheckSettings kernel;
    GaugeCheckSettings gauge;
    ExpandCheckSettings expand;
    HsCheckSettings hs_check;
    Tolerances tol;
    std::string out_dir = "magtrace-out";
    std::uint64_t seed = 0;
    int threads = 1;
};

// Parses and validates; throws std::invalid_argument with a field path on
// schema violations (nonzero flux is reported with a "flux" diagnostic).
RunConfig config_from_json(const json& doc);
RunConfig parse_config(const std::string& path);

// Fully resolved document (defaults included). Serializing a parsed config
// and parsing it again yields the same document byte for byte.
json config_to_json(const RunConfig& cfg);
std::string config_snapshot(const RunConfig& cfg);  // dump(2) + newline

std::uint64_t fnv1a_hash(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

}  // namespace mag

// Batch runs: configuration, execution of the selected checks over a
// z-grid and a set of sample points, and report serialization.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfk/identities.hpp"

namespace sfk {

inline constexpr const char* kEngineVersion = "sfk 0.1.0";

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ZGrid {
    double min = -3.0, max = -0.5;
    int count = 5;

    std::vector<double> values() const;
    bool operator==(const ZGrid&) const = default;
};

struct OutputSpec {
    std::string format;  // table | csv | json
    std::string path;    // "-" for stdout
    bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
    std::string family = "lebrun_instanton";
    std::map<std::string, std::string> params;
    ZGrid grid;
    int samples = 10;
    std::uint64_t seed = 1;
    // Empty selects every check that applies to the family.
    std::vector<std::string> checks;
    Tolerances tol;
    std::vector<OutputSpec> outputs;

    bool operator==(const RunConfig&) const = default;
};

// Names accepted in RunConfig::checks, in execution order.
const std::vector<std::string>& check_names();

// INI file with sections [family], [grid], [samples], [checks],
// [tolerances], [output]. Missing keys keep their defaults.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

// key=value tolerance override; key is a Tolerances field name.
void set_tolerance(Tolerances& tol, const std::string& key, double value);

// Throws ConfigError for an empty grid, unknown checks or a grid point
// outside the family's regular range.
void validate(const RunConfig& cfg, const GeometryBundle& b);

struct ZInvariants {
    double z = 0.0;
    double vol2 = 0.0, chi_g = 0.0, e_g = 0.0;
    bool operator==(const ZInvariants&) const = default;
};

struct Report {
    RunConfig config;
    std::string family_label;
    std::vector<IdentityCheck> checks;
    std::vector<ZInvariants> invariants;
    int passed = 0, failed = 0;
    // Not serialized to csv or json, which stay byte-reproducible.
    double wall_seconds = 0.0;
    std::string version = kEngineVersion;

    bool all_passed() const { return failed == 0 && !checks.empty(); }
};

Report run(const RunConfig& cfg);

// format: table | csv | json
std::string emit(const Report& r, const std::string& format);
Report report_from_json(const std::string& text);

// Writes every configured output; "-" goes to stdout.
void write_outputs(const Report& r);

// The built-in golden suite: the flat Hopf example and the instanton
// tables for k = 1, 2, 3 and m = 0.5, 1.
std::vector<RunConfig> self_test_configs();

}  // namespace sfk

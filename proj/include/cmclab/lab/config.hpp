#pragma once

#include <cmclab/generators.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cmclab::lab {

enum class Scenario { RigidityCurve, BubblingSweep, MonotonicityAudit, MinimalSphereCheck, DensityScan, SingleReport };

std::string to_string(Scenario s);

/// Scenario parameters shared by all scenarios; each reads what it needs.
struct ScenarioParams
{
    double gamma = 0.1;        // non-concentration level, (0, 1/2)
    double delta = 0.5;        // monotonicity delta > 0
    double epsilon = 0.05;     // deficit level > 0
    std::optional<double> w;   // Willmore bound; defaults to the mesh value
    std::vector<double> amplitudes{0.01, 0.02, 0.04, 0.08};
    std::vector<double> necks{0.3, 0.1, 0.05, 0.02};
    std::vector<double> radii{0.05, 0.1, 0.2, 0.4, 0.8};
    int samples = 500;          // monotonicity samples
    std::uint64_t seed = 1;     // monotonicity sample seed
    double a_min = 0.01;        // outer monotonicity radius range
    double a_max = 1.0;
    int neck_samples = 32;      // BubblingSweep basepoints on the neck
    double r_max = 1.0;         // cap for r^D searches
    double theta_radius = 0.25; // Theta radius reported at the neck
    double willmore_tolerance = 0.1; // BubblingSweep: last willmore_raw within this of 32 pi
    double rd_ratio = 5.0;           // BubblingSweep: min r^D must drop by this factor
    int basepoints = 4;              // DensityScan
    int torus_grid = 128;            // MinimalSphereCheck
    double c_tolerance = 0.03;       // MinimalSphereCheck relative |c - expected|
    double j_bound = 0.5;            // MinimalSphereCheck J upper bound
};

struct ExperimentConfig
{
    Scenario scenario = Scenario::SingleReport;
    std::optional<GeneratorSpec> generator;
    std::optional<std::filesystem::path> input_mesh;
    ScenarioParams params;
    std::filesystem::path output_dir = "lab_out";
};

///
/// Line-oriented format:
///
///     scenario = RigidityCurve
///     output_dir = out/rigidity
///     [generator]
///     kind = PerturbedSphere
///     subdiv = 4
///     [params]
///     amplitudes = 0.01, 0.02, 0.04, 0.08
///
/// `#` starts a comment. Unknown sections or keys, duplicate keys, values
/// out of range and missing input files raise ConfigError with the key path
/// and line. Relative paths resolve against `base_dir`.
///
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = ".");

/// A generator given either as a config file with a [generator] section or
/// inline as "kind=Icosphere,subdiv=3".
GeneratorSpec parse_generator_spec(const std::string& file_or_inline);

/// Canonical text with every key, reparsable by parse_config_text.
std::string resolved_config(const ExperimentConfig& config);

/// Documentation of every key and its default.
std::string config_help();

} // namespace cmclab::lab

#pragma once

#include <cmclab/errors.hpp>
#include <cmclab/lab/config.hpp>
#include <cmclab/lab/report.hpp>

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace cmclab::lab {

/// One checked inequality or trend with both sides.
struct CheckResult
{
    std::string name;
    double lhs = 0.0;
    std::string relation; // "<=", ">=", "<", ">"
    double rhs = 0.0;
    bool passed = false;

    std::string line() const;
};

CheckResult make_check(std::string name, double lhs, std::string relation, double rhs);

struct ExperimentResult
{
    Scenario scenario = Scenario::SingleReport;
    std::vector<std::pair<std::string, CsvTable>> tables; // file stem -> rows
    std::vector<std::filesystem::path> artifacts;
    std::vector<CheckResult> summary;

    bool all_passed() const;
    std::string summary_text() const;
};

/// A module error raised inside a scenario, prefixed with the scenario name.
class ScenarioFailure : public Error {
public:
    ScenarioFailure(Scenario s, const std::string& what) : Error(to_string(s) + ": " + what) {}
};

/// Runs the scenario, writes every table, plot and the resolved config into
/// output_dir (created if needed) and lists them in `artifacts`.
ExperimentResult run(const ExperimentConfig& config);

/// Report of a single surface as used by SingleReport and `lab report`.
struct SingleReport
{
    KeyValueReport report;
    std::vector<CheckResult> checks;
};

SingleReport single_report(const SurfaceMesh& mesh, const ScenarioParams& params);

/// Worker count: LAB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned lab_threads();

/// Calls fn(i) for i in [0, count) on up to lab_threads() threads. The first
/// exception by index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace cmclab::lab

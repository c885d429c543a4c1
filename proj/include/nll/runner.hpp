#pragma once

#include <map>
#include <string>
#include <vector>

#include "nll/config.hpp"

namespace nll {

struct CheckResult {
    std::string name;
    std::string status;  // pass | fail | degenerate | exploratory
    std::string details;
};

struct PlotTable {
    std::string name;                        // becomes <name>.csv
    std::string header;
    std::vector<std::vector<double>> rows;
};

struct RunReport {
    std::string schema = "nll-report/1";
    std::string version;
    std::string scenario;
    std::string config_echo;                 // canonical JSON of the config
    std::vector<CheckResult> checks;
    std::vector<std::string> artifacts;      // paths written under out_dir
    std::vector<std::pair<std::string, double>> stage_seconds;
    std::vector<PlotTable> plots;
};

// Declared number of checks per scenario; the report must carry exactly
// this many status entries.
int scenario_check_count(const std::string& scenario);

// Executes the scenario, writes CSV artifacts and report.json under
// config.out_dir, and returns the report. Per-check computational errors are
// captured as failed checks without aborting sibling checks.
RunReport run(const RunConfig& config);

// Writes the plot-ready CSVs accumulated in the report. Returns the paths.
std::vector<std::string> emit_plot_data(const RunReport& report,
                                        const std::string& out_dir);

// true iff no check failed (degenerate and exploratory do not fail a run).
bool run_passed(const RunReport& report);

void write_report_json(const RunReport& report, const std::string& path);

}  // namespace nll

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "patchdyn/config.hpp"
#include "patchdyn/cpi.hpp"
#include "patchdyn/problems.hpp"

namespace patchdyn::cli {

struct RunArtifacts {
    std::string dir;
    std::vector<std::string> files;
    double max_pct_err = 0.0;
    cpi::RunResult result;
};

// Executes the run and writes the report files (probes, error tables, snapshots,
// optional contours, summary). Output bytes are deterministic for a given config.
RunArtifacts run_and_report(const RunConfig& cfg, std::ostream& log);

// Resolved-parameter dump used by `validate` (dry run; touches no files).
void print_resolved(const RunConfig& cfg, std::ostream& os);

// Lossless snapshot serialization (17 significant digits).
void save_snapshot(const std::string& path, const problems::Snapshot& s);
problems::Snapshot load_snapshot(const std::string& path);
problems::Trajectory load_run_snapshots(const std::string& run_dir);

struct CompareReport {
    double max_rate_pct = 0.0;
    bool grid_independent = false; // against the 0.1% threshold
    int shared_snapshots = 0;
};

CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b);

// Multi-run table builders.
void table_probes(const RunConfig& cfg, std::ostream& os, std::ostream& log);
void table_lambda_sweep(const std::vector<RunConfig>& cfgs, std::ostream& os, std::ostream& log);
void table_annulus_ladder(const std::vector<RunConfig>& cfgs, std::ostream& os, std::ostream& log);

} // namespace patchdyn::cli

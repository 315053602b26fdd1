#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "patchdyn/gaptooth.hpp"
#include "patchdyn/problems.hpp"
#include "patchdyn/scheme_config.hpp"

namespace patchdyn::cpi {

// (U_{k+1} - U_k)/tau at interior nodes; boundary entries are zero.
Field2D estimate_derivative(const gaptooth::CoarseField& Uk, const gaptooth::CoarseField& Uk1,
                            double tau);

// One forward-Euler projective step of length dt: k+1 gap-tooth substeps, the
// derivative estimate, extrapolation, and a boundary refresh at t+dt.
gaptooth::CoarseField projective_step(const gaptooth::GapToothEngine& engine,
                                      const gaptooth::CoarseField& U, double t);

struct RunOptions {
    std::vector<double> snapshot_times;            // snapshots at the nearest macro step
    std::vector<std::pair<int, int>> probe_nodes;  // recorded every macro step
    int progress_every = 0;                        // 0 = silent
    std::function<void(int, double, double)> progress; // (step, t, running max % err)
};

struct ProbeSeries {
    int i = 0, j = 0;
    std::vector<double> values;
};

struct RunResult {
    std::vector<double> times;             // time after each macro step
    std::vector<double> step_max_pct_err;  // per step; empty without an exact solution
    double max_pct_err = 0.0;              // over interior nodes and all steps
    std::vector<problems::Snapshot> snapshots;
    std::vector<ProbeSeries> probes;
    gaptooth::CoarseField final_field;
};

// Runs Nt projective steps from the problem's initial data, recording snapshots,
// probes and error metrics. Aborts with MacroInstability when the field diverges.
RunResult run(const gaptooth::GapToothEngine& engine, const RunOptions& opts = {});

// Max percentage error of U against the problem's exact solution at time t over
// interior nodes, excluding nodes where |exact| < 1e-12.
double max_percent_error(const gaptooth::GapToothEngine& engine,
                         const gaptooth::CoarseField& U, double t);

} // namespace patchdyn::cpi

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "patchdyn/problems.hpp"
#include "patchdyn/scheme_config.hpp"

namespace patchdyn::cli {

// One fully resolved run: problem selection + scheme parameters + output options.
// Config files are flat key = value text under [section] headers; unknown keys
// are rejected. Omitted keys take per-problem defaults.
struct RunConfig {
    std::string problem = "cdr-const";
    double lambda = 0.0;
    cpi::SchemeConfig scheme;

    std::string out_dir = "out/run";
    bool emit_csv = true;
    bool emit_json = true;
    bool emit_contour = false;
    std::vector<double> snapshot_times;
    std::vector<std::pair<double, double>> probes; // computational coordinates
    int progress_every = 0;

    problems::ProblemSpec make_problem() const;
};

RunConfig parse_config_text(const std::string& text, const std::string& origin);

// Reads, resolves defaults and validates; throws ParseError / ValidationError.
RunConfig load_config(const std::string& path);

// Output root override applied to relative out_dir values.
extern const char* kOutRootEnvVar;

} // namespace patchdyn::cli

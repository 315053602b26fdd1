#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "patchdyn/config.hpp"
#include "patchdyn/errors.hpp"
#include "patchdyn/report.hpp"

namespace {

// Exit codes: 0 success, 2 configuration, 3 numerical failure, 4 I/O.
enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

void emit_error(const std::string& type, const std::string& message) {
    nlohmann::ordered_json j;
    j["error"] = {{"type", type}, {"message", message}};
    std::cerr << j.dump() << "\n";
}

int classify_and_report(const std::exception& e) {
    using namespace patchdyn;
    if (dynamic_cast<const ParseError*>(&e)) { emit_error("parse", e.what()); return kConfigError; }
    if (dynamic_cast<const ValidationError*>(&e)) { emit_error("validation", e.what()); return kConfigError; }
    if (dynamic_cast<const InvalidStretch*>(&e)) { emit_error("validation", e.what()); return kConfigError; }
    if (dynamic_cast<const GridMismatch*>(&e)) { emit_error("grid-mismatch", e.what()); return kConfigError; }
    if (dynamic_cast<const IndexOutOfRange*>(&e)) { emit_error("index", e.what()); return kConfigError; }
    if (dynamic_cast<const ShapeMismatch*>(&e)) { emit_error("shape", e.what()); return kConfigError; }
    if (dynamic_cast<const IOError*>(&e)) { emit_error("io", e.what()); return kIoError; }
    if (dynamic_cast<const patchdyn::Error*>(&e)) { emit_error("numerical", e.what()); return kNumericalError; }
    emit_error("internal", e.what());
    return kNumericalError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-dimensional patch dynamics scheme on curvilinear coordinates"};
    app.require_subcommand(1);

    std::string run_config;
    bool dry_run = false;
    CLI::App* cmd_run = app.add_subcommand("run", "Execute a run and write its report files");
    cmd_run->add_option("config", run_config, "config file")->required();
    cmd_run->add_flag("--dry-run", dry_run, "validate and print resolved parameters only");

    std::string val_config;
    CLI::App* cmd_val = app.add_subcommand("validate", "Validate a config and print resolved parameters");
    cmd_val->add_option("config", val_config, "config file")->required();

    std::string cmp_a, cmp_b;
    CLI::App* cmd_cmp = app.add_subcommand("compare", "Grid-independence report for two saved runs");
    cmd_cmp->add_option("run_a", cmp_a, "coarser run directory")->required();
    cmd_cmp->add_option("run_b", cmp_b, "2x-refined run directory")->required();

    std::string table_name, table_out;
    std::vector<std::string> table_configs;
    CLI::App* cmd_table = app.add_subcommand("table", "Multi-run table builder");
    cmd_table->add_option("name", table_name, "probes | lambda-sweep | annulus-ladder")->required();
    cmd_table->add_option("configs", table_configs, "config files")->required()->expected(-1);
    cmd_table->add_option("--out", table_out, "write the table to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (cmd_run->parsed()) {
            const patchdyn::cli::RunConfig cfg = patchdyn::cli::load_config(run_config);
            if (dry_run) {
                patchdyn::cli::print_resolved(cfg, std::cout);
                return kOk;
            }
            const patchdyn::cli::RunArtifacts art = patchdyn::cli::run_and_report(cfg, std::cerr);
            std::cout << "output " << art.dir << "\n";
            for (const std::string& f : art.files) std::cout << "  " << f << "\n";
            if (!art.result.step_max_pct_err.empty())
                std::cout << "max percent error " << art.max_pct_err << "\n";
            return kOk;
        }
        if (cmd_val->parsed()) {
            const patchdyn::cli::RunConfig cfg = patchdyn::cli::load_config(val_config);
            patchdyn::cli::print_resolved(cfg, std::cout);
            return kOk;
        }
        if (cmd_cmp->parsed()) {
            const patchdyn::cli::CompareReport rep = patchdyn::cli::compare_runs(cmp_a, cmp_b);
            std::cout << "shared snapshots  " << rep.shared_snapshots << "\n";
            std::cout << "max rate of change " << rep.max_rate_pct << "%\n";
            std::cout << (rep.grid_independent ? "PASS" : "FAIL")
                      << " (grid-independence threshold 0.1%)\n";
            return kOk;
        }
        if (cmd_table->parsed()) {
            std::vector<patchdyn::cli::RunConfig> cfgs;
            for (const std::string& c : table_configs) cfgs.push_back(patchdyn::cli::load_config(c));
            std::ofstream fout;
            std::ostream* os = &std::cout;
            if (!table_out.empty()) {
                fout.open(table_out);
                if (!fout) throw patchdyn::IOError("cannot write '" + table_out + "'");
                os = &fout;
            }
            if (table_name == "probes") {
                if (cfgs.size() != 1)
                    throw patchdyn::ValidationError("table probes expects exactly one config");
                patchdyn::cli::table_probes(cfgs[0], *os, std::cerr);
            } else if (table_name == "lambda-sweep") {
                patchdyn::cli::table_lambda_sweep(cfgs, *os, std::cerr);
            } else if (table_name == "annulus-ladder") {
                patchdyn::cli::table_annulus_ladder(cfgs, *os, std::cerr);
            } else {
                throw patchdyn::ValidationError("unknown table '" + table_name +
                                                "' (probes, lambda-sweep, annulus-ladder)");
            }
            return kOk;
        }
    } catch (const std::exception& e) {
        return classify_and_report(e);
    }
    return kOk;
}

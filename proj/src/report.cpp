#include "patchdyn/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "patchdyn/errors.hpp"

namespace fs = std::filesystem;

namespace patchdyn::cli {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(double v, const char* f) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw IOError("cannot write '" + p.string() + "'");
    return f;
}

int snap_node(double coord, double lo, double delta) {
    return static_cast<int>(std::lround((coord - lo) / delta));
}

const char* solver_name(cpi::SchemeConfig::Solver s) {
    return s == cpi::SchemeConfig::Solver::ADI ? "adi" : "explicit";
}

const char* upwind_name(microsim::UpwindOrder o) {
    switch (o) {
        case microsim::UpwindOrder::Two: return "two";
        case microsim::UpwindOrder::Three: return "three";
        default: return "four";
    }
}

const char* bc_name(cpi::SchemeConfig::BCType b) {
    switch (b) {
        case cpi::SchemeConfig::BCType::Neumann: return "neumann";
        case cpi::SchemeConfig::BCType::Dirichlet: return "dirichlet";
        default: return "robin";
    }
}

// Half-boundary-method comparison values for the uniform-grid probe table:
// external reference (not recomputed). Also shipped as data/hbm_table1_reference.csv.
struct HbmRow {
    const char* grid;
    int time_levels;
    double v[4];
    double pct[4];
};
constexpr HbmRow kHbmReference[] = {
    {"11x11", 101, {3.9471, 5.7618, 8.5360, 12.8699}, {2.67, 4.76, 5.42, 4.41}},
    {"16x16", 101, {3.9797, 5.8479, 8.6858, 13.0682}, {1.86, 3.33, 3.76, 2.94}},
    {"21x21", 101, {3.9969, 5.8933, 8.7625, 13.1613}, {1.44, 2.58, 2.91, 2.25}},
    {"26x26", 101, {4.0075, 5.9213, 8.8094, 13.2163}, {1.18, 2.12, 2.39, 1.84}},
};

} // namespace

namespace {

// Table layout with the external HBM reference rows, the patch-dynamics row and
// the exact values; shared by `table probes` and the per-run report.
void write_probe_table(const RunConfig& c, const cpi::RunResult& result, std::ostream& os) {
    const problems::ProblemSpec prob = c.make_problem();
    const gaptooth::CoarseGrid g{prob.a, prob.b, prob.c, prob.d, c.scheme.N_xi, c.scheme.N_eta};
    os << "method,grid,time_levels";
    for (auto [px, py] : c.probes) os << ",(" << fmt(px, "%.1f") << " " << fmt(py, "%.1f") << ")";
    os << "\n";
    for (const HbmRow& r : kHbmReference) {
        os << "hbm-reference," << r.grid << ',' << r.time_levels;
        for (int p = 0; p < 4; ++p)
            os << ',' << fmt(r.v[p], "%.4f") << " (" << fmt(r.pct[p], "%.4g") << "%)";
        os << "\n";
    }
    os << "patch-dynamics," << c.scheme.N_xi + 1 << "x" << c.scheme.N_eta + 1 << ','
       << c.scheme.Nt;
    std::vector<std::pair<int, int>> nodes;
    for (auto [px, py] : c.probes)
        nodes.emplace_back(std::clamp(snap_node(px, g.a, g.dxi()), 0, g.Nxi),
                           std::clamp(snap_node(py, g.c, g.deta()), 0, g.Neta));
    for (auto [i, j] : nodes) {
        const double v = result.final_field.at(i, j);
        os << ',' << fmt(v, "%.4f");
        if (prob.has_exact()) {
            const double ex = prob.exact(g.xi(i), g.eta(j), c.scheme.T);
            os << " (" << fmt(std::abs(v - ex) / std::abs(ex) * 100.0, "%.4g") << "%)";
        }
    }
    os << "\n";
    if (prob.has_exact()) {
        os << "exact,,";
        for (auto [i, j] : nodes) os << ',' << fmt(prob.exact(g.xi(i), g.eta(j), c.scheme.T), "%.4f");
        os << "\n";
    }
}

} // namespace

void print_resolved(const RunConfig& cfg, std::ostream& os) {
    const cpi::SchemeConfig& s = cfg.scheme;
    os << "problem        " << cfg.problem << "\n";
    os << "lambda         " << fmt17(cfg.lambda) << "\n";
    os << "coarse grid    " << s.N_xi + 1 << "x" << s.N_eta + 1 << " nodes (N_xi=" << s.N_xi
       << ", N_eta=" << s.N_eta << ")\n";
    os << "macro steps    Nt=" << s.Nt << "  T=" << fmt17(s.T) << "  dt=" << fmt17(s.dt()) << "\n";
    os << "horizon        tau=" << fmt17(s.tau) << "  k=" << s.k << "\n";
    os << "patch          h_xi=" << fmt17(s.h_xi) << "  h_eta=" << fmt17(s.h_eta) << "\n";
    os << "micro          nx=" << s.nx << " ny=" << s.ny << " nt=" << s.nt << "\n";
    os << "solver         " << solver_name(s.solver) << "  upwind=" << upwind_name(s.upwind.order)
       << "  bc=" << bc_name(s.bc_type) << "\n";
    os << "restriction    "
       << (s.quadrature == cpi::SchemeConfig::Quadrature::Trapezoid ? "trapezoid" : "simpson")
       << "\n";
    os << "output dir     " << cfg.out_dir << "\n";
    // transport diagnostic on a 20x20 sample of the domain
    const problems::PecletField pf = problems::peclet_field(cfg.make_problem(), 20, 20);
    int dominated = 0;
    for (int flag : pf.convection_dominated) dominated += flag;
    os << "peclet         max " << fmt(pf.max_pe, "%.4g") << ", convection-dominated "
       << fmt(100.0 * dominated / static_cast<double>(pf.pe.size()), "%.1f") << "% of samples\n";
}

// ---------------------------------------------------------------------------
// Snapshot I/O
// ---------------------------------------------------------------------------

void save_snapshot(const std::string& path, const problems::Snapshot& s) {
    std::ofstream f = open_out(path);
    f << "patchdyn-snapshot 1\n";
    f << "t " << fmt17(s.t) << "\n";
    f << "n_xi " << s.Nxi << "\n";
    f << "n_eta " << s.Neta << "\n";
    for (int i = 0; i <= s.Nxi; ++i) {
        for (int j = 0; j <= s.Neta; ++j) {
            if (j) f << ' ';
            f << fmt17(s.U[static_cast<std::size_t>(i) * (s.Neta + 1) + j]);
        }
        f << '\n';
    }
}

problems::Snapshot load_snapshot(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IOError("cannot open snapshot '" + path + "'");
    std::string magic;
    int version = 0;
    f >> magic >> version;
    if (magic != "patchdyn-snapshot" || version != 1)
        throw IOError("'" + path + "' is not a patchdyn snapshot");
    problems::Snapshot s;
    std::string key;
    f >> key >> s.t >> key >> s.Nxi >> key >> s.Neta;
    const std::size_t total = static_cast<std::size_t>(s.Nxi + 1) * (s.Neta + 1);
    s.U.resize(total);
    for (std::size_t k = 0; k < total; ++k) {
        if (!(f >> s.U[k])) throw IOError("snapshot '" + path + "' is truncated");
    }
    return s;
}

problems::Trajectory load_run_snapshots(const std::string& run_dir) {
    const fs::path dir = fs::path(run_dir) / "snapshots";
    if (!fs::is_directory(dir)) throw IOError("no snapshots directory under '" + run_dir + "'");
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".snap") names.push_back(e.path().string());
    std::sort(names.begin(), names.end());
    problems::Trajectory traj;
    for (const std::string& n : names) traj.push_back(load_snapshot(n));
    std::sort(traj.begin(), traj.end(),
              [](const problems::Snapshot& a, const problems::Snapshot& b) { return a.t < b.t; });
    if (traj.empty()) throw IOError("no snapshots found under '" + run_dir + "'");
    return traj;
}

CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b) {
    problems::Trajectory a = load_run_snapshots(dir_a);
    problems::Trajectory b = load_run_snapshots(dir_b);
    CompareReport rep;
    for (const auto& sa : a)
        for (const auto& sb : b)
            if (std::abs(sa.t - sb.t) < 1e-9) ++rep.shared_snapshots;
    rep.max_rate_pct = problems::grid_independence(a, b);
    rep.grid_independent = rep.max_rate_pct < 0.1;
    return rep;
}

// ---------------------------------------------------------------------------
// run + report
// ---------------------------------------------------------------------------

RunArtifacts run_and_report(const RunConfig& cfg, std::ostream& log) {
    const problems::ProblemSpec prob = cfg.make_problem();
    const gaptooth::GapToothEngine engine(prob, cfg.scheme);

    cpi::RunOptions opts;
    opts.snapshot_times = cfg.snapshot_times;
    if (std::find_if(opts.snapshot_times.begin(), opts.snapshot_times.end(), [&](double t) {
            return std::abs(t - cfg.scheme.T) < 1e-12;
        }) == opts.snapshot_times.end())
        opts.snapshot_times.push_back(cfg.scheme.T);

    const gaptooth::CoarseGrid& g = engine.grid();
    for (auto [px, py] : cfg.probes) {
        const int i = std::clamp(snap_node(px, g.a, g.dxi()), 0, g.Nxi);
        const int j = std::clamp(snap_node(py, g.c, g.deta()), 0, g.Neta);
        opts.probe_nodes.emplace_back(i, j);
    }
    if (cfg.progress_every > 0) {
        opts.progress_every = cfg.progress_every;
        opts.progress = [&log](int step, double t, double err) {
            log << "  step " << step << "  t=" << fmt(t, "%.6g") << "  max%err=" << fmt(err, "%.6g")
                << "\n";
        };
    }

    RunArtifacts art;
    art.result = cpi::run(engine, opts);
    art.max_pct_err = art.result.max_pct_err;
    art.dir = cfg.out_dir;

    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir / "snapshots");
    std::vector<std::string> rel_files;
    auto add = [&](const fs::path& p) {
        art.files.push_back(p.string());
        rel_files.push_back(fs::relative(p, dir).generic_string());
    };

    // snapshots (always written; compare_runs depends on them)
    for (const problems::Snapshot& s : art.result.snapshots) {
        std::ostringstream name;
        name << "t_" << fmt(s.t, "%.6f") << ".snap";
        const fs::path p = dir / "snapshots" / name.str();
        save_snapshot(p.string(), s);
        add(p);
    }

    const bool has_exact = prob.has_exact();

    if (cfg.emit_csv) {
        // per-step error series
        if (has_exact) {
            std::ofstream f = open_out(dir / "errors_over_time.csv");
            f << "step,t,max_pct_err\n";
            for (std::size_t n = 0; n < art.result.times.size(); ++n)
                f << n + 1 << ',' << fmt17(art.result.times[n]) << ','
                  << fmt17(art.result.step_max_pct_err[n]) << '\n';
            add(dir / "errors_over_time.csv");
        }
        // probe table at final time
        if (!opts.probe_nodes.empty()) {
            std::ofstream f = open_out(dir / "probes.csv");
            f << "xi,eta,x,y,i,j,value" << (has_exact ? ",exact,pct_err" : "") << "\n";
            for (std::size_t p = 0; p < opts.probe_nodes.size(); ++p) {
                const auto [i, j] = opts.probe_nodes[p];
                const double xi = g.xi(i), eta = g.eta(j);
                const auto xy = prob.mapping.forward(xi, eta);
                const double v = art.result.final_field.at(i, j);
                f << fmt17(xi) << ',' << fmt17(eta) << ',' << fmt17(xy.x) << ',' << fmt17(xy.y)
                  << ',' << i << ',' << j << ',' << fmt17(v);
                if (has_exact) {
                    const double ex = prob.exact(xi, eta, cfg.scheme.T);
                    const double pct =
                        std::abs(ex) > 1e-12 ? std::abs(v - ex) / std::abs(ex) * 100.0 : 0.0;
                    f << ',' << fmt17(ex) << ',' << fmt17(pct);
                }
                f << '\n';
            }
            add(dir / "probes.csv");
            // comparison table against the external reference values
            if (cfg.probes.size() == 4 && cfg.problem == "cdr-const") {
                std::ofstream f = open_out(dir / "probes_table.csv");
                write_probe_table(cfg, art.result, f);
                add(dir / "probes_table.csv");
            }
        }
        // snapshot-time error summary
        if (has_exact) {
            std::ofstream f = open_out(dir / "errors_at_snapshots.csv");
            f << "t,max_pct_err\n";
            for (const problems::Snapshot& s : art.result.snapshots) {
                if (s.t == 0.0) continue;
                const int n = static_cast<int>(std::lround(s.t / cfg.scheme.dt()));
                if (n >= 1 && n <= static_cast<int>(art.result.step_max_pct_err.size()))
                    f << fmt17(s.t) << ',' << fmt17(art.result.step_max_pct_err[n - 1]) << '\n';
            }
            add(dir / "errors_at_snapshots.csv");
        }
    }

    if (cfg.emit_contour) {
        for (const problems::Snapshot& s : art.result.snapshots) {
            std::ostringstream name;
            name << "contour_t_" << fmt(s.t, "%.6f") << ".csv";
            std::ofstream f = open_out(dir / name.str());
            f << "x,y,value\n";
            for (int i = 0; i <= s.Nxi; ++i) {
                for (int j = 0; j <= s.Neta; ++j) {
                    const auto xy = prob.mapping.forward(g.xi(i), g.eta(j));
                    f << fmt17(xy.x) << ',' << fmt17(xy.y) << ','
                      << fmt17(s.U[static_cast<std::size_t>(i) * (s.Neta + 1) + j]) << '\n';
                }
            }
            add(dir / name.str());
        }
    }

    if (cfg.emit_json) {
        nlohmann::ordered_json j;
        j["problem"] = cfg.problem;
        j["lambda"] = cfg.lambda;
        j["scheme"] = {{"n_xi", cfg.scheme.N_xi},
                       {"n_eta", cfg.scheme.N_eta},
                       {"nt_macro", cfg.scheme.Nt},
                       {"T", cfg.scheme.T},
                       {"tau", cfg.scheme.tau},
                       {"k", cfg.scheme.k},
                       {"h_xi", cfg.scheme.h_xi},
                       {"h_eta", cfg.scheme.h_eta},
                       {"nx", cfg.scheme.nx},
                       {"ny", cfg.scheme.ny},
                       {"nt", cfg.scheme.nt},
                       {"solver", solver_name(cfg.scheme.solver)},
                       {"upwind", upwind_name(cfg.scheme.upwind.order)},
                       {"bc_type", bc_name(cfg.scheme.bc_type)},
                       {"fast_path", engine.fast_path_active()}};
        if (has_exact) {
            j["max_pct_err"] = art.max_pct_err;
            nlohmann::ordered_json snaps = nlohmann::ordered_json::array();
            for (const problems::Snapshot& s : art.result.snapshots) {
                if (s.t == 0.0) continue;
                const int n = static_cast<int>(std::lround(s.t / cfg.scheme.dt()));
                if (n >= 1 && n <= static_cast<int>(art.result.step_max_pct_err.size()))
                    snaps.push_back({{"t", s.t}, {"max_pct_err", art.result.step_max_pct_err[n - 1]}});
            }
            j["errors_at_snapshots"] = snaps;
        }
        j["files"] = rel_files;
        std::ofstream f = open_out(dir / "summary.json");
        f << j.dump(2) << '\n';
        add(dir / "summary.json");
    }

    log << "run " << cfg.problem << " lambda=" << cfg.lambda << " grid " << cfg.scheme.N_xi + 1
        << "x" << cfg.scheme.N_eta + 1 << " Nt=" << cfg.scheme.Nt;
    if (has_exact) log << "  max%err=" << fmt(art.max_pct_err, "%.6g");
    log << "\n";
    return art;
}

// ---------------------------------------------------------------------------
// tables
// ---------------------------------------------------------------------------

void table_probes(const RunConfig& cfg, std::ostream& os, std::ostream& log) {
    RunConfig c = cfg;
    if (c.probes.empty()) {
        c.probes = {{0.2, 0.2}, {0.4, 0.4}, {0.6, 0.6}, {0.8, 0.8}};
    }
    const RunArtifacts art = run_and_report(c, log);
    write_probe_table(c, art.result, os);
}

void table_lambda_sweep(const std::vector<RunConfig>& cfgs, std::ostream& os, std::ostream& log) {
    os << "lambda,grid,nt_macro,max_pct_err\n";
    for (const RunConfig& cfg : cfgs) {
        const RunArtifacts art = run_and_report(cfg, log);
        os << fmt(cfg.lambda, "%.3g") << ',' << cfg.scheme.N_xi + 1 << "x" << cfg.scheme.N_eta + 1
           << ',' << cfg.scheme.Nt << ',' << fmt(art.max_pct_err, "%.4f") << "\n";
    }
}

void table_annulus_ladder(const std::vector<RunConfig>& cfgs, std::ostream& os, std::ostream& log) {
    // error columns at the configured snapshot times (defaults to 0.25..1)
    std::vector<double> times = cfgs.empty() ? std::vector<double>{} : cfgs.front().snapshot_times;
    if (times.empty()) times = {0.25, 0.5, 0.75, 1.0};
    os << "n_xi,n_eta,nt_macro";
    for (double t : times) os << ",err_t" << fmt(t, "%.2f");
    os << "\n";
    for (RunConfig cfg : cfgs) {
        cfg.snapshot_times = times;
        const RunArtifacts art = run_and_report(cfg, log);
        os << cfg.scheme.N_xi << ',' << cfg.scheme.N_eta << ',' << cfg.scheme.Nt;
        for (double ts : times) {
            const int n = static_cast<int>(std::lround(ts / cfg.scheme.dt()));
            double e = 0.0;
            if (n >= 1 && n <= static_cast<int>(art.result.step_max_pct_err.size()))
                e = art.result.step_max_pct_err[n - 1];
            os << ',' << fmt(e, "%.4f");
        }
        os << "\n";
    }
}

} // namespace patchdyn::cli

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "patchdyn/config.hpp"
#include "patchdyn/errors.hpp"
#include "patchdyn/report.hpp"

using namespace patchdyn;
using namespace patchdyn::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("minimal configs pick up the per-problem defaults") {
    const RunConfig c = parse_config_text("[problem]\nname = cdr-const\n", "test");
    CHECK(c.scheme.h_xi == doctest::Approx(1e-3));
    CHECK(c.scheme.h_eta == doctest::Approx(1e-3));
    CHECK(c.scheme.tau == doctest::Approx(1e-6));
    CHECK(c.scheme.nx == 10);
    CHECK(c.scheme.ny == 10);
    CHECK(c.scheme.nt == 2);
    CHECK(c.scheme.k == 0);
    CHECK(c.scheme.N_xi == 10);
    CHECK(c.scheme.Nt == 1001);
    CHECK(c.scheme.solver == cpi::SchemeConfig::Solver::ADI);

    const RunConfig a = parse_config_text("[problem]\nname = annulus\n", "test");
    CHECK(a.scheme.nx == 20);
    CHECK(a.scheme.ny == 20);
    CHECK(a.scheme.nt == 1500);
    CHECK(a.scheme.N_xi == 16);
    CHECK(a.scheme.N_eta == 10);
    CHECK(a.scheme.Nt == 500);
    CHECK(a.scheme.solver == cpi::SchemeConfig::Solver::Explicit);
}

TEST_CASE("config parsing fails closed") {
    CHECK_THROWS_AS(parse_config_text("[problem]\nname = cdr-const\nbogus = 1\n", "t"),
                    ParseError);
    CHECK_THROWS_AS(parse_config_text("[scheme]\nn_xi = ten\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_config_text("[problem]\nname = nosuch\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_config_text("no equals sign here\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_config_text("[scheme]\nn_xi = 4\nn_xi = 5\n", "t"), ParseError);
    // overlapping patches violate a scheme invariant
    CHECK_THROWS_AS(
        parse_config_text("[problem]\nname = cdr-const\n[scheme]\nh_xi = 0.5\n", "t"),
        ValidationError);
    // probes outside the computational domain
    CHECK_THROWS_AS(parse_config_text(
                        "[problem]\nname = cdr-const\n[output]\nprobes = 1.5 0.5\n", "t"),
                    ValidationError);
    CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), IOError);
}

TEST_CASE("snapshot serialization round-trips exactly") {
    TempDir tmp("patchdyn_snap_test");
    problems::Snapshot s;
    s.t = 0.12345678901234567;
    s.Nxi = 5;
    s.Neta = 3;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-10, 10);
    s.U.resize(24);
    for (double& v : s.U) v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 7) - 3);
    const std::string p = (tmp.path / "a.snap").string();
    save_snapshot(p, s);
    const problems::Snapshot r = load_snapshot(p);
    CHECK(r.t == s.t);
    CHECK(r.Nxi == s.Nxi);
    CHECK(r.Neta == s.Neta);
    for (std::size_t k = 0; k < s.U.size(); ++k) CHECK(r.U[k] == s.U[k]);
}

TEST_CASE("run_and_report produces byte-identical outputs across invocations") {
    TempDir tmp("patchdyn_determinism");
    auto make_cfg = [&](const std::string& sub) {
        std::ostringstream cfg;
        cfg << "[problem]\nname = cdr-const\n"
            << "[scheme]\nn_xi = 4\nn_eta = 4\nnt_macro = 100\n"
            << "[micro]\nnx = 4\nny = 4\n"
            << "[output]\ndir = " << (tmp.path / sub).string() << "\n"
            << "snapshot_times = 0.5, 1.0\n"
            << "probes = 0.25 0.25, 0.75 0.75\n"
            << "emit_contour = true\n";
        return parse_config_text(cfg.str(), "det-test");
    };
    std::ostringstream sink;
    const RunArtifacts a = run_and_report(make_cfg("run_a"), sink);
    const RunArtifacts b = run_and_report(make_cfg("run_b"), sink);
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t k = 0; k < a.files.size(); ++k) {
        CHECK(slurp(a.files[k]) == slurp(b.files[k]));
    }
    CHECK(a.max_pct_err == b.max_pct_err);
}

TEST_CASE("compare_runs: identical runs pass, perturbed refinements fail") {
    TempDir tmp("patchdyn_compare");
    auto write_run = [&](const std::string& name, int N, double perturb) {
        const fs::path dir = tmp.path / name / "snapshots";
        fs::create_directories(dir);
        for (double t : {0.5, 1.0}) {
            problems::Snapshot s;
            s.t = t;
            s.Nxi = s.Neta = N;
            s.U.assign(static_cast<std::size_t>(N + 1) * (N + 1), 0.0);
            for (int i = 0; i <= N; ++i)
                for (int j = 0; j <= N; ++j)
                    s.U[static_cast<std::size_t>(i) * (N + 1) + j] =
                        1.0 + std::sin(3.0 * i / N) * std::cos(2.0 * j / N) + t;
            if (perturb != 0.0) s.U[static_cast<std::size_t>(N / 2) * (N + 1) + N / 2] *= 1.0 + perturb;
            std::ostringstream nm;
            nm << "t_" << t << ".snap";
            save_snapshot((dir / nm.str()).string(), s);
        }
        return (tmp.path / name).string();
    };
    const std::string ca = write_run("coarse", 4, 0.0);
    const std::string fa = write_run("fine", 8, 0.0);
    const CompareReport ok = compare_runs(ca, fa);
    CHECK(ok.max_rate_pct == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ok.grid_independent);
    CHECK(ok.shared_snapshots == 2);

    const std::string fb = write_run("fine_perturbed", 8, 0.01);
    const CompareReport badrep = compare_runs(ca, fb);
    CHECK(badrep.max_rate_pct >= 0.9);
    CHECK_FALSE(badrep.grid_independent);

    const std::string wrong = write_run("not_refined", 6, 0.0);
    CHECK_THROWS_AS(compare_runs(ca, wrong), GridMismatch);
}

TEST_CASE("output root environment override") {
    setenv(kOutRootEnvVar, "/tmp/patchdyn_root_xyz", 1);
    const RunConfig c = parse_config_text(
        "[problem]\nname = cdr-const\n[output]\ndir = rel/run\n", "env-test");
    CHECK(c.out_dir == std::string("/tmp/patchdyn_root_xyz/rel/run"));
    unsetenv(kOutRootEnvVar);
    const RunConfig d = parse_config_text(
        "[problem]\nname = cdr-const\n[output]\ndir = rel/run\n", "env-test");
    CHECK(d.out_dir == std::string("rel/run"));
}

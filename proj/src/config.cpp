#include "patchdyn/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "patchdyn/errors.hpp"

namespace patchdyn::cli {

const char* kOutRootEnvVar = "PATCHDYN_OUT_ROOT";

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

struct KeyValue {
    std::string value;
    int line;
};

double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        std::ostringstream os;
        os << "line " << line << ": key '" << key << "' expects a number, got '" << v << "'";
        throw ParseError(os.str());
    }
}

int parse_int(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return static_cast<int>(d);
    } catch (const std::exception&) {
        std::ostringstream os;
        os << "line " << line << ": key '" << key << "' expects an integer, got '" << v << "'";
        throw ParseError(os.str());
    }
}

bool parse_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    std::ostringstream os;
    os << "line " << line << ": key '" << key << "' expects true/false, got '" << v << "'";
    throw ParseError(os.str());
}

} // namespace

problems::ProblemSpec RunConfig::make_problem() const {
    return problems::by_name(problem, lambda);
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::map<std::string, KeyValue> kv;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                std::ostringstream os;
                os << origin << " line " << lineno << ": malformed section header '" << raw << "'";
                throw ParseError(os.str());
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << origin << " line " << lineno << ": expected key = value, got '" << raw << "'";
            throw ParseError(os.str());
        }
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (kv.count(key)) {
            std::ostringstream os;
            os << origin << " line " << lineno << ": duplicate key '" << key << "'";
            throw ParseError(os.str());
        }
        kv[key] = {val, lineno};
    }

    RunConfig cfg;
    auto take = [&](const std::string& key) -> std::optional<KeyValue> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        KeyValue v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("problem.name")) cfg.problem = v->value;
    if (cfg.problem != "cdr-const" && cfg.problem != "cdr-var" && cfg.problem != "annulus") {
        throw ParseError(origin + ": unknown problem name '" + cfg.problem + "'");
    }
    if (auto v = take("problem.lambda")) cfg.lambda = parse_double(v->value, "lambda", v->line);

    // per-problem defaults
    cpi::SchemeConfig& s = cfg.scheme;
    const bool annulus = cfg.problem == "annulus";
    if (annulus) {
        s.N_xi = 16;
        s.N_eta = 10;
        s.Nt = 500;
        s.nx = 20;
        s.ny = 20;
        s.nt = 1500;
        s.solver = cpi::SchemeConfig::Solver::Explicit;
    } else {
        s.N_xi = 10;
        s.N_eta = 10;
        s.Nt = 1001;
        s.nx = 10;
        s.ny = 10;
        s.nt = 2;
        s.solver = cpi::SchemeConfig::Solver::ADI;
    }
    s.T = 1.0;
    s.tau = 1e-6;
    s.k = 0;
    s.h_xi = s.h_eta = 1e-3;

    if (auto v = take("scheme.n_xi")) s.N_xi = parse_int(v->value, "n_xi", v->line);
    if (auto v = take("scheme.n_eta")) s.N_eta = parse_int(v->value, "n_eta", v->line);
    if (auto v = take("scheme.nt_macro")) s.Nt = parse_int(v->value, "nt_macro", v->line);
    if (auto v = take("scheme.T")) s.T = parse_double(v->value, "T", v->line);
    if (auto v = take("scheme.tau")) s.tau = parse_double(v->value, "tau", v->line);
    if (auto v = take("scheme.k")) s.k = parse_int(v->value, "k", v->line);
    if (auto v = take("scheme.h_xi")) s.h_xi = parse_double(v->value, "h_xi", v->line);
    if (auto v = take("scheme.h_eta")) s.h_eta = parse_double(v->value, "h_eta", v->line);

    if (auto v = take("micro.nx")) s.nx = parse_int(v->value, "nx", v->line);
    if (auto v = take("micro.ny")) s.ny = parse_int(v->value, "ny", v->line);
    if (auto v = take("micro.nt")) s.nt = parse_int(v->value, "nt", v->line);
    if (auto v = take("micro.solver")) {
        if (v->value == "adi") s.solver = cpi::SchemeConfig::Solver::ADI;
        else if (v->value == "explicit") s.solver = cpi::SchemeConfig::Solver::Explicit;
        else throw ParseError(origin + ": solver must be adi or explicit, got '" + v->value + "'");
    }
    if (auto v = take("micro.upwind")) {
        if (v->value == "two") s.upwind.order = microsim::UpwindOrder::Two;
        else if (v->value == "three") s.upwind.order = microsim::UpwindOrder::Three;
        else if (v->value == "four") s.upwind.order = microsim::UpwindOrder::Four;
        else throw ParseError(origin + ": upwind must be two, three or four, got '" + v->value + "'");
    }
    if (auto v = take("micro.upwind_r")) s.upwind.r = parse_double(v->value, "upwind_r", v->line);
    if (auto v = take("micro.bc_type")) {
        if (v->value == "neumann") s.bc_type = cpi::SchemeConfig::BCType::Neumann;
        else if (v->value == "dirichlet") s.bc_type = cpi::SchemeConfig::BCType::Dirichlet;
        else if (v->value == "robin") s.bc_type = cpi::SchemeConfig::BCType::Robin;
        else
            throw ParseError(origin + ": bc_type must be neumann, dirichlet or robin, got '" +
                             v->value + "'");
    }
    if (auto v = take("micro.robin_w1")) s.robin_w1 = parse_double(v->value, "robin_w1", v->line);
    if (auto v = take("micro.robin_w2")) s.robin_w2 = parse_double(v->value, "robin_w2", v->line);
    if (auto v = take("micro.quadrature")) {
        if (v->value == "trapezoid") s.quadrature = cpi::SchemeConfig::Quadrature::Trapezoid;
        else if (v->value == "simpson") s.quadrature = cpi::SchemeConfig::Quadrature::Simpson;
        else
            throw ParseError(origin + ": quadrature must be trapezoid or simpson, got '" +
                             v->value + "'");
    }
    if (auto v = take("micro.linear_cache")) {
        if (v->value == "auto") s.linear_cache = cpi::SchemeConfig::LinearCache::Auto;
        else if (v->value == "on") s.linear_cache = cpi::SchemeConfig::LinearCache::On;
        else if (v->value == "off") s.linear_cache = cpi::SchemeConfig::LinearCache::Off;
        else
            throw ParseError(origin + ": linear_cache must be auto, on or off, got '" + v->value +
                             "'");
    }

    if (auto v = take("output.dir")) cfg.out_dir = v->value;
    if (auto v = take("output.formats")) {
        cfg.emit_csv = cfg.emit_json = false;
        for (const std::string& f : split(v->value, ',')) {
            if (f == "csv") cfg.emit_csv = true;
            else if (f == "json") cfg.emit_json = true;
            else throw ParseError(origin + ": formats must list csv and/or json, got '" + f + "'");
        }
    }
    if (auto v = take("output.emit_contour"))
        cfg.emit_contour = parse_bool(v->value, "emit_contour", v->line);
    if (auto v = take("output.snapshot_times")) {
        for (const std::string& f : split(v->value, ','))
            if (!f.empty()) cfg.snapshot_times.push_back(parse_double(f, "snapshot_times", v->line));
    }
    if (auto v = take("output.probes")) {
        for (const std::string& pair : split(v->value, ',')) {
            if (pair.empty()) continue;
            std::istringstream ps(pair);
            double a, b;
            if (!(ps >> a >> b)) {
                std::ostringstream os;
                os << origin << " line " << v->line
                   << ": probes expects comma-separated 'xi eta' pairs, got '" << pair << "'";
                throw ParseError(os.str());
            }
            cfg.probes.emplace_back(a, b);
        }
    }
    if (auto v = take("output.progress_every"))
        cfg.progress_every = parse_int(v->value, "progress_every", v->line);

    if (!kv.empty()) {
        const auto& first = *kv.begin();
        std::ostringstream os;
        os << origin << " line " << first.second.line << ": unknown key '" << first.first << "'";
        throw ParseError(os.str());
    }

    // output root override
    if (const char* root = std::getenv(kOutRootEnvVar)) {
        std::filesystem::path p(cfg.out_dir);
        if (p.is_relative()) cfg.out_dir = (std::filesystem::path(root) / p).string();
    }

    // full validation against the problem domain
    const problems::ProblemSpec prob = cfg.make_problem();
    cfg.scheme.validate(prob.b - prob.a, prob.d - prob.c);
    for (double ts : cfg.snapshot_times) {
        if (ts < 0.0 || ts > cfg.scheme.T + 1e-12)
            throw ValidationError("snapshot time outside [0, T]");
    }
    for (auto [px, py] : cfg.probes) {
        if (px < prob.a - 1e-12 || px > prob.b + 1e-12 || py < prob.c - 1e-12 ||
            py > prob.d + 1e-12)
            throw ValidationError("probe point outside the computational domain");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IOError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str(), path);
}

} // namespace patchdyn::cli

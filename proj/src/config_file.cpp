#include "acns/config_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "acns/errors.hpp"

namespace acns {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& origin, int line, const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) fail(origin, line, "trailing characters in number '" + s + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail(origin, line, "cannot parse number '" + s + "'");
    }
}

long parse_int(const std::string& origin, int line, const std::string& s) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) fail(origin, line, "trailing characters in integer '" + s + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail(origin, line, "cannot parse integer '" + s + "'");
    }
}

bool parse_bool(const std::string& origin, int line, const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    fail(origin, line, "expected true/false, got '" + s + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ResolvedConfig parse_config_text(const std::string& text, const std::string& origin) {
    ResolvedConfig cfg;
    bool sweep_seen = false;
    std::istringstream in(text);
    std::string raw, section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, lineno, "malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "geometry" && section != "solver" && section != "initial_data" &&
                section != "sweep" && section != "output")
                fail(origin, lineno, "unknown section [" + section + "]");
            if (section == "sweep") sweep_seen = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) fail(origin, lineno, "key outside any [section]");
        auto toks = split_ws(value);

        if (section == "geometry") {
            auto& g = cfg.sim.geometry;
            if (key == "dim") {
                g.dim = int(parse_int(origin, lineno, value));
            } else if (key == "box") {
                if (int(toks.size()) != g.dim && toks.size() != 2 && toks.size() != 3)
                    fail(origin, lineno, "box needs one extent per axis");
                for (std::size_t a = 0; a < toks.size(); ++a)
                    g.extent[a] = parse_double(origin, lineno, toks[a]);
            } else if (key == "cells") {
                for (std::size_t a = 0; a < toks.size(); ++a)
                    g.cells[a] = int(parse_int(origin, lineno, toks[a]));
                if (toks.size() == 2) g.cells[2] = 1;
            } else if (key == "obstacle") {
                if (toks.empty()) fail(origin, lineno, "empty obstacle spec");
                if (toks[0] == "none") {
                    g.obstacle.kind = Obstacle::Kind::None;
                } else if (toks[0] == "disk") {
                    if (toks.size() != std::size_t(g.dim) + 2)
                        fail(origin, lineno, "disk needs center coordinates and radius");
                    g.obstacle.kind = Obstacle::Kind::Disk;
                    for (int a = 0; a < g.dim; ++a)
                        g.obstacle.center[a] = parse_double(origin, lineno, toks[a + 1]);
                    g.obstacle.radius = parse_double(origin, lineno, toks[g.dim + 1]);
                } else if (toks[0] == "rect") {
                    if (toks.size() != 2 * std::size_t(g.dim) + 1)
                        fail(origin, lineno, "rect needs center and half-extents");
                    g.obstacle.kind = Obstacle::Kind::Rect;
                    for (int a = 0; a < g.dim; ++a)
                        g.obstacle.center[a] = parse_double(origin, lineno, toks[a + 1]);
                    for (int a = 0; a < g.dim; ++a)
                        g.obstacle.half_extent[a] =
                            parse_double(origin, lineno, toks[g.dim + a + 1]);
                } else {
                    fail(origin, lineno, "obstacle kind must be none/disk/rect");
                }
            } else if (key == "periodic") {
                g.periodic = parse_bool(origin, lineno, value);
            } else {
                fail(origin, lineno, "unknown key '" + key + "' in [geometry]");
            }
        } else if (section == "solver") {
            auto& s = cfg.sim;
            if (key == "epsilon")
                s.epsilon = parse_double(origin, lineno, value);
            else if (key == "mu")
                s.mu = parse_double(origin, lineno, value);
            else if (key == "dt")
                s.dt = value == "auto" ? 0.0 : parse_double(origin, lineno, value);
            else if (key == "t_end")
                s.t_end = parse_double(origin, lineno, value);
            else if (key == "cfl_safety")
                s.cfl_safety = parse_double(origin, lineno, value);
            else if (key == "snapshot_cadence")
                s.snapshot_cadence = int(parse_int(origin, lineno, value));
            else if (key == "tol_elliptic")
                s.tol_elliptic = parse_double(origin, lineno, value);
            else if (key == "basis_rank")
                s.basis_rank = int(parse_int(origin, lineno, value));
            else
                fail(origin, lineno, "unknown key '" + key + "' in [solver]");
        } else if (section == "initial_data") {
            auto& d = cfg.sim.initial;
            if (key == "kind") {
                if (value == "zero")
                    d.kind = InitialDataSpec::Kind::Zero;
                else if (value == "taylor_green_like")
                    d.kind = InitialDataSpec::Kind::TaylorGreenLike;
                else if (value == "random_solenoidal")
                    d.kind = InitialDataSpec::Kind::RandomSolenoidal;
                else if (value == "file")
                    d.kind = InitialDataSpec::Kind::File;
                else
                    fail(origin, lineno, "unknown initial data kind '" + value + "'");
            } else if (key == "amplitude") {
                d.amplitude = parse_double(origin, lineno, value);
            } else if (key == "seed") {
                d.seed = std::uint64_t(parse_int(origin, lineno, value));
            } else if (key == "max_mode") {
                d.max_mode = int(parse_int(origin, lineno, value));
            } else if (key == "spectral_decay") {
                d.spectral_decay = parse_double(origin, lineno, value);
            } else if (key == "file") {
                d.path = value;
            } else {
                fail(origin, lineno, "unknown key '" + key + "' in [initial_data]");
            }
        } else if (section == "sweep") {
            if (key == "epsilons") {
                cfg.sweep_epsilons.clear();
                for (const auto& t : toks)
                    cfg.sweep_epsilons.push_back(parse_double(origin, lineno, t));
            } else if (key == "workers") {
                cfg.workers = int(parse_int(origin, lineno, value));
            } else if (key == "q_exponents") {
                cfg.q_exponents.clear();
                for (const auto& t : toks)
                    cfg.q_exponents.push_back(parse_double(origin, lineno, t));
            } else if (key == "modulus_multiples") {
                cfg.modulus_multiples.clear();
                for (const auto& t : toks)
                    cfg.modulus_multiples.push_back(int(parse_int(origin, lineno, t)));
            } else {
                fail(origin, lineno, "unknown key '" + key + "' in [sweep]");
            }
        } else if (section == "output") {
            if (key == "dir")
                cfg.output_dir = value;
            else if (key == "write_snapshots")
                cfg.write_snapshots = parse_bool(origin, lineno, value);
            else
                fail(origin, lineno, "unknown key '" + key + "' in [output]");
        }
    }
    if (sweep_seen && cfg.sweep_epsilons.empty())
        throw ConfigError(origin + ": [sweep] section without epsilons");
    return cfg;
}

ResolvedConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

std::string config_echo(const ResolvedConfig& cfg, double resolved_dt) {
    std::ostringstream out;
    const auto& g = cfg.sim.geometry;
    out << "[geometry]\n";
    out << "dim = " << g.dim << "\n";
    out << "box =";
    for (int a = 0; a < g.dim; ++a) out << " " << fmt(g.extent[a]);
    out << "\ncells =";
    for (int a = 0; a < g.dim; ++a) out << " " << g.cells[a];
    out << "\nobstacle = ";
    if (g.obstacle.kind == Obstacle::Kind::None) {
        out << "none";
    } else if (g.obstacle.kind == Obstacle::Kind::Disk) {
        out << "disk";
        for (int a = 0; a < g.dim; ++a) out << " " << fmt(g.obstacle.center[a]);
        out << " " << fmt(g.obstacle.radius);
    } else {
        out << "rect";
        for (int a = 0; a < g.dim; ++a) out << " " << fmt(g.obstacle.center[a]);
        for (int a = 0; a < g.dim; ++a) out << " " << fmt(g.obstacle.half_extent[a]);
    }
    out << "\nperiodic = " << (g.periodic ? "true" : "false") << "\n";

    out << "\n[solver]\n";
    out << "epsilon = " << fmt(cfg.sim.epsilon) << "\n";
    out << "mu = " << fmt(cfg.sim.mu) << "\n";
    out << "dt = " << fmt(resolved_dt > 0 ? resolved_dt : cfg.sim.dt) << "\n";
    out << "t_end = " << fmt(cfg.sim.t_end) << "\n";
    out << "cfl_safety = " << fmt(cfg.sim.cfl_safety) << "\n";
    out << "snapshot_cadence = " << cfg.sim.snapshot_cadence << "\n";
    out << "tol_elliptic = " << fmt(cfg.sim.tol_elliptic) << "\n";
    out << "basis_rank = " << cfg.sim.basis_rank << "\n";

    out << "\n[initial_data]\n";
    const auto& d = cfg.sim.initial;
    out << "kind = ";
    switch (d.kind) {
        case InitialDataSpec::Kind::Zero: out << "zero"; break;
        case InitialDataSpec::Kind::TaylorGreenLike: out << "taylor_green_like"; break;
        case InitialDataSpec::Kind::RandomSolenoidal: out << "random_solenoidal"; break;
        case InitialDataSpec::Kind::File: out << "file"; break;
    }
    out << "\namplitude = " << fmt(d.amplitude) << "\n";
    out << "seed = " << d.seed << "\n";
    out << "max_mode = " << d.max_mode << "\n";
    out << "spectral_decay = " << fmt(d.spectral_decay) << "\n";
    if (d.kind == InitialDataSpec::Kind::File) out << "file = " << d.path << "\n";

    if (!cfg.sweep_epsilons.empty()) {
        out << "\n[sweep]\n";
        out << "epsilons =";
        for (double e : cfg.sweep_epsilons) out << " " << fmt(e);
        out << "\nworkers = " << cfg.workers << "\n";
        out << "q_exponents =";
        for (double q : cfg.q_exponents) out << " " << fmt(q);
        out << "\nmodulus_multiples =";
        for (int m : cfg.modulus_multiples) out << " " << m;
        out << "\n";
    }

    out << "\n[output]\n";
    out << "dir = " << cfg.output_dir << "\n";
    out << "write_snapshots = " << (cfg.write_snapshots ? "true" : "false") << "\n";
    return out.str();
}

SweepScenario make_scenario(const ResolvedConfig& cfg, const std::string& id) {
    SweepScenario sc;
    sc.id = id;
    sc.base = cfg.sim;
    sc.epsilons = cfg.sweep_epsilons;
    sc.q_exponents = cfg.q_exponents;
    sc.modulus_multiples = cfg.modulus_multiples;
    sc.workers = cfg.workers;
    return sc;
}

}  // namespace acns

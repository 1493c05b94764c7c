#include "osclab/config.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace osclab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& path,
                       const std::string& msg) {
    throw ConfigError(origin + ": " + path + ": " + msg);
}

double want_number(const json& j, const std::string& origin, const std::string& path) {
    if (!j.is_number())
        fail(origin, path, "expected a number");
    return j.get<double>();
}

int want_int(const json& j, const std::string& origin, const std::string& path) {
    if (!j.is_number_integer())
        fail(origin, path, "expected an integer");
    return j.get<int>();
}

std::string want_string(const json& j, const std::string& origin, const std::string& path) {
    if (!j.is_string())
        fail(origin, path, "expected a string");
    return j.get<std::string>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& origin, const std::string& prefix) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            fail(origin, prefix.empty() ? item.key() : prefix + "." + item.key(),
                 "unknown key");
}

void parse_tolerances(const json& j, const std::string& origin, Tolerances& tol) {
    if (!j.is_object())
        fail(origin, "tolerances", "expected an object");
    reject_unknown(j,
                   {"analytic", "fd", "quadrature", "node_doubling", "invariance", "exact"},
                   origin, "tolerances");
    if (j.contains("analytic"))
        tol.analytic = want_number(j["analytic"], origin, "tolerances.analytic");
    if (j.contains("fd"))
        tol.fd = want_number(j["fd"], origin, "tolerances.fd");
    if (j.contains("quadrature"))
        tol.quadrature = want_number(j["quadrature"], origin, "tolerances.quadrature");
    if (j.contains("node_doubling"))
        tol.node_doubling = want_number(j["node_doubling"], origin, "tolerances.node_doubling");
    if (j.contains("invariance"))
        tol.invariance = want_number(j["invariance"], origin, "tolerances.invariance");
    if (j.contains("exact"))
        tol.exact = want_number(j["exact"], origin, "tolerances.exact");
}

} // namespace

LabConfig parse_config_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0,
                                                       text.size());
        for (std::size_t k = 0; k < stop; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": malformed JSON: " + e.what());
    }
    if (!j.is_object())
        throw ConfigError(origin + ": top level must be an object");

    reject_unknown(j,
                   {"masses", "omega_big", "qn_min", "qn_max", "level_cap", "sample_count",
                    "seed", "boosts", "engine", "fd_step", "fd_order", "tolerances",
                    "quad_nodes", "nonrel_masses", "report_path"},
                   origin, "");

    LabConfig out;
    SuiteConfig& cfg = out.suite;

    double m1 = cfg.spec.m1, m2 = cfg.spec.m2, omega = cfg.spec.omega_big;
    if (j.contains("masses")) {
        const json& m = j["masses"];
        if (!m.is_array() || m.size() != 2)
            fail(origin, "masses", "expected an array of two numbers");
        m1 = want_number(m[0], origin, "masses[0]");
        m2 = want_number(m[1], origin, "masses[1]");
    }
    if (j.contains("omega_big"))
        omega = want_number(j["omega_big"], origin, "omega_big");
    try {
        cfg.spec = OscillatorSpec(m1, m2, omega);
    } catch (const std::domain_error& e) {
        fail(origin, "masses/omega_big", e.what());
    }

    if (j.contains("qn_min"))
        cfg.grid.qn_min = want_int(j["qn_min"], origin, "qn_min");
    if (j.contains("qn_max"))
        cfg.grid.qn_max = want_int(j["qn_max"], origin, "qn_max");
    if (j.contains("level_cap"))
        cfg.grid.level_cap = want_int(j["level_cap"], origin, "level_cap");
    if (j.contains("sample_count"))
        cfg.grid.sample_count = want_int(j["sample_count"], origin, "sample_count");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            fail(origin, "seed", "expected an unsigned integer");
        cfg.grid.seed = j["seed"].get<std::uint64_t>();
    }

    if (j.contains("boosts")) {
        const json& b = j["boosts"];
        if (!b.is_array())
            fail(origin, "boosts", "expected an array of three-component velocities");
        cfg.grid.boosts.clear();
        for (std::size_t k = 0; k < b.size(); ++k) {
            const std::string path = "boosts[" + std::to_string(k) + "]";
            const json& row = b[k];
            if (!row.is_array() || row.size() != 3)
                fail(origin, path, "expected an array of three numbers");
            const double v1 = want_number(row[0], origin, path + "[0]");
            const double v2 = want_number(row[1], origin, path + "[1]");
            const double v3 = want_number(row[2], origin, path + "[2]");
            try {
                cfg.grid.boosts.emplace_back(v1, v2, v3);
            } catch (const std::domain_error& e) {
                fail(origin, path, e.what());
            }
        }
    }

    if (j.contains("engine")) {
        const std::string name = want_string(j["engine"], origin, "engine");
        if (name == "analytic")
            cfg.engine = EngineChoice::analytic;
        else if (name == "fd")
            cfg.engine = EngineChoice::fd;
        else if (name == "both")
            cfg.engine = EngineChoice::both;
        else
            fail(origin, "engine", "expected one of analytic, fd, both; got '" + name + "'");
    }

    if (j.contains("fd_step"))
        cfg.fd_step = want_number(j["fd_step"], origin, "fd_step");
    if (j.contains("fd_order"))
        cfg.fd_order = want_int(j["fd_order"], origin, "fd_order");
    if (j.contains("tolerances"))
        parse_tolerances(j["tolerances"], origin, cfg.tol);
    if (j.contains("quad_nodes"))
        cfg.quad_nodes = want_int(j["quad_nodes"], origin, "quad_nodes");

    if (j.contains("nonrel_masses")) {
        const json& nm = j["nonrel_masses"];
        if (!nm.is_array())
            fail(origin, "nonrel_masses", "expected an array of numbers");
        cfg.nonrel_masses.clear();
        for (std::size_t k = 0; k < nm.size(); ++k)
            cfg.nonrel_masses.push_back(
                want_number(nm[k], origin, "nonrel_masses[" + std::to_string(k) + "]"));
    }

    if (j.contains("report_path"))
        out.report_path = want_string(j["report_path"], origin, "report_path");

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return out;
}

LabConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void apply_env_seed(SuiteConfig& cfg) {
    const char* env = std::getenv("OSC_LAB_SEED");
    if (!env)
        return;
    const char* end = env + std::strlen(env);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc{} || ptr != end || env == end)
        throw ConfigError("OSC_LAB_SEED: expected an unsigned integer, got '" +
                          std::string(env) + "'");
    cfg.grid.seed = value;
}

} // namespace osclab

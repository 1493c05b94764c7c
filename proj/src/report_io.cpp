#include "osclab/report_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "json.hpp"

namespace osclab {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json config_echo(const LabConfig& cfg) {
    const SuiteConfig& s = cfg.suite;
    json boosts = json::array();
    for (const BoostVelocity& v : s.grid.boosts)
        boosts.push_back({v.vec()(0), v.vec()(1), v.vec()(2)});
    json tol;
    tol["analytic"] = s.tol.analytic;
    tol["fd"] = s.tol.fd;
    tol["quadrature"] = s.tol.quadrature;
    tol["node_doubling"] = s.tol.node_doubling;
    tol["invariance"] = s.tol.invariance;
    tol["exact"] = s.tol.exact;

    json out;
    out["masses"] = {s.spec.m1, s.spec.m2};
    out["omega_big"] = s.spec.omega_big;
    out["qn_min"] = s.grid.qn_min;
    out["qn_max"] = s.grid.qn_max;
    out["level_cap"] = s.grid.level_cap;
    out["sample_count"] = s.grid.sample_count;
    out["seed"] = s.grid.seed;
    out["boosts"] = boosts;
    out["engine"] = std::string(to_string(s.engine));
    out["fd_step"] = s.fd_step;
    out["fd_order"] = s.fd_order;
    out["tolerances"] = tol;
    out["quad_nodes"] = s.quad_nodes;
    out["nonrel_masses"] = s.nonrel_masses;
    out["report_path"] = cfg.report_path;
    return out;
}

double family_max(const std::vector<CheckResult>& results, std::string_view prefix) {
    double worst = 0.0;
    for (const CheckResult& r : results)
        if (r.check_id.rfind(prefix, 0) == 0)
            worst = std::max(worst, r.max_residual);
    return worst;
}

} // namespace

std::string report_to_json(const Report& report, const LabConfig& cfg,
                           bool include_wall_time) {
    json checks = json::array();
    for (const CheckResult& c : report.checks) {
        json row;
        row["check_id"] = c.check_id;
        row["engine"] = c.engine;
        row["equation_tag"] = c.equation_tag;
        row["max_residual"] = c.max_residual;
        row["notes"] = c.notes;
        row["passed"] = c.passed;
        row["samples"] = c.samples;
        row["tolerance"] = c.tolerance;
        checks.push_back(std::move(row));
    }
    json audits = json::array();
    for (const AuditRecord& a : report.audits) {
        json row;
        row["id"] = a.id;
        row["m1"] = a.m1;
        row["m2"] = a.m2;
        row["sigma"] = a.sigma;
        row["scalar_discrepancy"] = a.scalar_discrepancy;
        row["ratio_to_state_mean"] = a.ratio_to_state_mean;
        row["ratio_to_state_min"] = a.ratio_to_state_min;
        row["ratio_to_state_max"] = a.ratio_to_state_max;
        row["ratio_imag_max"] = a.ratio_imag_max;
        row["fitted_ratio_re"] = a.fitted_ratio.real();
        row["fitted_ratio_im"] = a.fitted_ratio.imag();
        row["fitted_ratio_defined"] = a.fitted_ratio_defined;
        row["com_residual_scale"] = a.com_residual_scale;
        row["samples"] = a.samples;
        row["notes"] = a.notes;
        audits.push_back(std::move(row));
    }

    json root;
    root["all_passed"] = report.all_passed;
    root["artifact_version"] = report.artifact_version;
    root["audits"] = std::move(audits);
    root["checks"] = std::move(checks);
    root["config"] = config_echo(cfg);
    root["schema_version"] = report.schema_version;
    if (include_wall_time)
        root["wall_time_seconds"] = report.wall_time_seconds;
    return root.dump(2) + "\n";
}

void write_text_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    std::error_code ec;
    if (target.has_parent_path())
        fs::create_directories(target.parent_path(), ec);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ConfigError("cannot write: " + tmp.string());
        out << text;
        out.flush();
        if (!out)
            throw ConfigError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec)
        throw ConfigError("cannot move " + tmp.string() + " to " + path + ": " +
                          ec.message());
}

std::string render_csv(const ScanTable& table) {
    auto cell = [](const std::string& s) -> std::string {
        if (s.find_first_of(",\"\r\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"')
                q += '"';
            q += c;
        }
        q += '"';
        return q;
    };
    auto row = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k)
                line += ',';
            line += cell(cells[k]);
        }
        return line + "\r\n";
    };
    std::string out = "# " + table.comment + "\r\n";
    out += row(table.header);
    for (const auto& r : table.rows)
        out += row(r);
    return out;
}

ScanTable scan_boost(const LabConfig& cfg) {
    ScanTable t;
    t.comment = "worst residual per family at each boost, analytic engine";
    t.header = {"vx",          "vy",          "vz",
                "speed",       "gamma",       "res_ladder",
                "res_constraint", "res_invariance", "norm_deviation"};
    for (const BoostVelocity& v : cfg.suite.grid.boost_list()) {
        SuiteConfig one = cfg.suite;
        one.engine = EngineChoice::analytic;
        one.grid.boosts = {v};
        const auto ladder = check_ladder_relations(one);
        const auto constraint = check_constraint_suite(one);
        const auto invariance = check_lorentz_invariance(one);
        const auto norm = check_normalization(one);
        t.rows.push_back({fmt(v.vec()(0)), fmt(v.vec()(1)), fmt(v.vec()(2)), fmt(v.speed()),
                          fmt(v.gamma()), fmt(family_max(ladder, "ladder.")),
                          fmt(family_max(constraint, "constraint.")),
                          fmt(family_max(invariance, "invariance.")),
                          fmt(family_max(norm, "norm.hypersurface"))});
    }
    return t;
}

ScanTable scan_level(const LabConfig& cfg) {
    ScanTable t;
    t.comment = "spectrum values and worst residuals per total excitation level";
    t.header = {"n",    "sigma",      "m0",          "eps1",
                "eps2", "res_ladder", "res_constraint", "norm_deviation"};
    const OscillatorSpec& spec = cfg.suite.spec;
    for (int n = cfg.suite.grid.qn_min; n <= cfg.suite.grid.qn_max; ++n) {
        SuiteConfig one = cfg.suite;
        one.engine = EngineChoice::analytic;
        one.grid.qn_min = n;
        one.grid.qn_max = n;
        const double sigma = sigma_of_n(spec.omega_big, n);
        const double m0 = rest_mass(spec.m1, spec.m2, sigma);
        const EpsilonPair eps = epsilon_params(spec.m1, spec.m2, m0);
        const auto ladder = check_ladder_relations(one);
        const auto constraint = check_constraint_suite(one);
        const auto norm = check_normalization(one);
        t.rows.push_back({std::to_string(n), fmt(sigma), fmt(m0), fmt(eps.e1), fmt(eps.e2),
                          fmt(family_max(ladder, "ladder.")),
                          fmt(family_max(constraint, "constraint.")),
                          fmt(family_max(norm, "norm.hypersurface"))});
    }
    return t;
}

ScanTable scan_mass_ratio(const LabConfig& cfg) {
    ScanTable t;
    t.comment = "spectrum and constraint behavior across mass ratios at fixed total mass";
    t.header = {"m1",   "m2",   "ratio", "m0",
                "eps1", "eps2", "kt_scalar_discrepancy", "res_constraint"};
    const double total = cfg.suite.spec.combined_mass();
    const double omega = cfg.suite.spec.omega_big;
    const double sigma0 = sigma_of_n(omega, 0);
    for (double ratio : {1.0, 1.5, 2.0, 3.0, 5.0}) {
        const double m1 = total * ratio / (1.0 + ratio);
        const double m2 = total / (1.0 + ratio);
        SuiteConfig one = cfg.suite;
        one.engine = EngineChoice::analytic;
        one.spec = OscillatorSpec(m1, m2, omega);
        const double m0 = rest_mass(m1, m2, sigma0);
        const EpsilonPair eps = epsilon_params(m1, m2, m0);
        const double kt_scalar = total * total + 8.0 * sigma0 - m0 * m0;
        const auto constraint = check_constraint_suite(one);
        t.rows.push_back({fmt(m1), fmt(m2), fmt(ratio), fmt(m0), fmt(eps.e1), fmt(eps.e2),
                          fmt(kt_scalar), fmt(family_max(constraint, "constraint."))});
    }
    return t;
}

} // namespace osclab

#include "osclab/cli.hpp"

#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "osclab/config.hpp"
#include "osclab/report_io.hpp"
#include "osclab/verifier.hpp"

namespace osclab {

namespace {

void print_check(const CheckResult& c) {
    std::printf("%s  %-34s %-10s residual %9.3e  tol %7.1e  samples %ld\n",
                c.passed ? "PASS" : "FAIL", c.check_id.c_str(), c.engine.c_str(),
                c.max_residual, c.tolerance, c.samples);
    if (!c.passed && !c.notes.empty())
        std::printf("      %s\n", c.notes.c_str());
}

void print_audit(const AuditRecord& a) {
    std::printf("AUDIT %s  m1 %.6g  m2 %.6g  sigma %.6g  scalar_discrepancy %.12g\n",
                a.id.c_str(), a.m1, a.m2, a.sigma, a.scalar_discrepancy);
    std::printf("      ratio to state: mean %.6g in [%.6g, %.6g]; %s\n",
                a.ratio_to_state_mean, a.ratio_to_state_min, a.ratio_to_state_max,
                a.notes.c_str());
}

int run_verify(const std::string& config_path, const std::string& engine_flag,
               const std::string& out_flag) {
    LabConfig lab = load_config(config_path);
    if (engine_flag == "analytic")
        lab.suite.engine = EngineChoice::analytic;
    else if (engine_flag == "fd")
        lab.suite.engine = EngineChoice::fd;
    else if (engine_flag == "both")
        lab.suite.engine = EngineChoice::both;
    apply_env_seed(lab.suite);

    const Report report = run_suite(lab.suite);
    int passed = 0;
    for (const CheckResult& c : report.checks) {
        print_check(c);
        passed += c.passed ? 1 : 0;
    }
    for (const AuditRecord& a : report.audits)
        print_audit(a);
    std::printf("summary: %d/%zu checks passed, %zu audits recorded, wall %.2f s\n", passed,
                report.checks.size(), report.audits.size(), report.wall_time_seconds);

    const std::string path = out_flag.empty() ? lab.report_path : out_flag;
    if (!path.empty()) {
        write_text_atomic(path, report_to_json(report, lab, true));
        std::printf("report written to %s\n", path.c_str());
    }
    return report.all_passed ? 0 : 1;
}

int run_scan(const std::string& config_path, const std::string& axis,
             const std::string& out_path) {
    LabConfig lab = load_config(config_path);
    apply_env_seed(lab.suite);
    ScanTable table;
    if (axis == "boost")
        table = scan_boost(lab);
    else if (axis == "level")
        table = scan_level(lab);
    else
        table = scan_mass_ratio(lab);
    write_text_atomic(out_path, render_csv(table));
    std::printf("wrote %zu rows to %s\n", table.rows.size(), out_path.c_str());
    return 0;
}

int run_explain(const std::string& id) {
    const CheckInfo* info = find_check(id);
    if (!info) {
        std::string hint;
        for (const std::string& s : suggest_check_ids(id)) {
            if (!hint.empty())
                hint += ", ";
            hint += s;
        }
        std::fprintf(stderr, "unknown check id '%s'; closest matches: %s\n", id.c_str(),
                     hint.c_str());
        return 2;
    }
    std::printf("%s\n", std::string(info->id).c_str());
    std::printf("  relation:    %s\n", std::string(info->relation).c_str());
    std::printf("  description: %s\n", std::string(info->description).c_str());
    std::printf("  family tag:  %s\n", std::string(info->equation_tag).c_str());
    std::printf("  tolerance:   %s\n", std::string(info->tolerance_key).c_str());
    std::printf("  gating:      %s\n", info->gating ? "yes" : "no (informational)");
    return 0;
}

} // namespace

int cli_run(int argc, const char* const* argv) {
    CLI::App app{"osclab: numerical verification of the relativistic two-particle "
                 "harmonic oscillator"};
    app.require_subcommand(1);

    std::string verify_config, verify_engine, verify_out;
    CLI::App* verify = app.add_subcommand("verify", "Run every check family and report");
    verify->add_option("--config", verify_config, "JSON config file")->required();
    verify->add_option("--engine", verify_engine, "Override the derivative engine")
        ->check(CLI::IsMember({"analytic", "fd", "both"}));
    verify->add_option("--out", verify_out, "Report path (overrides config report_path)");

    std::string scan_config, scan_axis, scan_out;
    CLI::App* scan = app.add_subcommand("scan", "Sweep one axis, write a CSV table");
    scan->add_option("--config", scan_config, "JSON config file")->required();
    scan->add_option("--axis", scan_axis, "Sweep axis")
        ->required()
        ->check(CLI::IsMember({"boost", "level", "mass-ratio"}));
    scan->add_option("--out", scan_out, "CSV output path")->required();

    std::string explain_id;
    CLI::App* explain = app.add_subcommand("explain", "Describe one check id");
    explain->add_option("id", explain_id, "Check id, e.g. constraint.ks")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed())
            return run_verify(verify_config, verify_engine, verify_out);
        if (scan->parsed())
            return run_scan(scan_config, scan_axis, scan_out);
        return run_explain(explain_id);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
}

} // namespace osclab

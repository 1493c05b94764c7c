#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "osclab/operators.hpp"
#include "osclab/oscillator.hpp"

namespace osclab {

enum class EngineChoice { analytic, fd, both };

std::string_view to_string(EngineChoice e);

/** Pass thresholds per residual family. */
struct Tolerances {
    double analytic = 1e-9;
    double fd = 1e-6;
    double quadrature = 1e-8;
    double node_doubling = 1e-10;
    double invariance = 1e-12;
    double exact = 1e-12;
};

/**
 * Which states get checked: every quantum-number triple with
 * qn_min <= l1+l2+l3 <= qn_max (levels individually capped), at every boost
 * in the list.  An empty boost list means the rest frame only.
 */
struct GridSpec {
    int qn_min = 0;
    int qn_max = 4;
    int level_cap = 12;
    std::vector<BoostVelocity> boosts;
    int sample_count = 64;
    std::uint64_t seed = 20260818ULL;

    std::vector<BoostVelocity> boost_list() const {
        return boosts.empty() ? std::vector<BoostVelocity>{BoostVelocity{}} : boosts;
    }
    std::vector<QuantumNumbers> level_list() const;
};

struct SuiteConfig {
    OscillatorSpec spec{1.0, 1.0, 1.0};
    GridSpec grid;
    EngineChoice engine = EngineChoice::both;
    double fd_step = 2e-3;
    int fd_order = 4;
    Tolerances tol;
    int quad_nodes = 24;
    std::vector<double> nonrel_masses{10.0, 100.0};

    DiffEngine fd_engine() const { return DiffEngine::finite_difference(fd_step, fd_order); }
    std::vector<DiffEngine> engines() const;
    void validate() const;
};

/** One verified identity: residual against tolerance. */
struct CheckResult {
    std::string check_id;
    std::string engine;
    std::string equation_tag;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    long samples = 0;
    std::string notes;
};

struct Report {
    std::string artifact_version;
    std::string schema_version;
    std::vector<CheckResult> checks;
    std::vector<AuditRecord> audits;
    double wall_time_seconds = 0.0;
    bool all_passed = false;
};

std::vector<CheckResult> check_ladder_relations(const SuiteConfig& cfg);
std::vector<CheckResult> check_constraint_suite(const SuiteConfig& cfg);
std::vector<CheckResult> check_spectrum(const SuiteConfig& cfg);
std::vector<CheckResult> check_normalization(const SuiteConfig& cfg);
std::vector<CheckResult> check_lorentz_invariance(const SuiteConfig& cfg);
std::vector<CheckResult> check_nonrel_limit(const SuiteConfig& cfg);
std::vector<CheckResult> check_algebra(const SuiteConfig& cfg);
std::vector<CheckResult> check_engine_agreement(const SuiteConfig& cfg);
std::vector<AuditRecord> run_audits(const SuiteConfig& cfg);

/** Every check family, sorted results, totals, audits. */
Report run_suite(const SuiteConfig& cfg);

/** Catalog entry describing one check for reporting and the explain command. */
struct CheckInfo {
    std::string_view id;
    std::string_view equation_tag;
    std::string_view relation;
    std::string_view description;
    std::string_view tolerance_key;
    bool gating;
};

std::span<const CheckInfo> check_catalog();
const CheckInfo* find_check(std::string_view id);
std::vector<std::string> suggest_check_ids(std::string_view query, std::size_t count = 3);

} // namespace osclab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "osclab/fields.hpp"
#include "osclab/four_vector.hpp"
#include "osclab/operators.hpp"
#include "osclab/oscillator.hpp"
#include "osclab/sampling.hpp"

using namespace osclab;

namespace {

const std::complex<double> kI{0.0, 1.0};

/** Largest pointwise gap between two fields, relative to the scale of b. */
double field_gap(const ScalarField& a, const ScalarField& b,
                 const std::vector<FourVector>& points) {
    double diff = 0.0, scale = 0.0;
    for (const FourVector& x : points) {
        const std::complex<double> bv = b(x);
        diff = std::max(diff, std::abs(a(x) - bv));
        scale = std::max(scale, std::abs(bv));
    }
    return diff / (scale + 1e-8);
}

/** Largest |a(x)| relative to the largest |ref(x)| over the points. */
double null_gap(const ScalarField& a, const ScalarField& ref,
                const std::vector<FourVector>& points) {
    double diff = 0.0, scale = 0.0;
    for (const FourVector& x : points) {
        diff = std::max(diff, std::abs(a(x)));
        scale = std::max(scale, std::abs(ref(x)));
    }
    return diff / (scale + 1e-8);
}

const DiffEngine kEngines[] = {DiffEngine::analytic(), DiffEngine::finite_difference()};

double engine_tol(const DiffEngine& eng) {
    return eng.mode == DiffEngine::Mode::analytic ? 1e-12 : 1e-6;
}

} // namespace

TEST_CASE("finite-difference momentum reproduces plane-wave eigenvalues") {
    const FourVector k(0.3, -0.2, 0.5, 0.7);
    const ScalarField wave([k](const FourVector& x) { return std::exp(kI * minkowski_dot(k, x)); });
    const std::vector<FourVector> points = {
        FourVector(0.1, -0.4, 0.7, 0.2),
        FourVector(-1.3, 0.5, 0.0, -0.8),
        FourVector(2.0, 1.1, -0.6, 1.5),
    };

    const DiffEngine fd4 = DiffEngine::finite_difference();
    for (int mu = 0; mu < 4; ++mu) {
        const ScalarField pf = apply_p(wave, mu, fd4);
        for (const FourVector& x : points)
            CHECK(std::abs(pf(x) - k[mu] * wave(x)) < 1e-9);
    }

    // The second-order stencil converges too, just more slowly.
    const DiffEngine fd2 = DiffEngine::finite_difference(2e-3, 2);
    const ScalarField pf = apply_p(wave, 3, fd2);
    for (const FourVector& x : points)
        CHECK(std::abs(pf(x) - k[3] * wave(x)) < 1e-6);
}

TEST_CASE("eigenstate fields agree with the direct evaluators") {
    const OscillatorState state(OscillatorSpec(1.0, 1.0, 1.0), QuantumNumbers(1, 0, 2),
                                BoostVelocity(0.6, 0.0, 0.0));
    const ScalarField f = ScalarField::eigenstate(state);
    const BiScalarField psi = BiScalarField::eigenstate(state);
    const std::vector<FourVector> rel = sample_rel_events(state, 16, 11u);
    const std::vector<FourVector> com = sample_com_events(state, 4, 12u);

    REQUIRE(f.has_closed_form());
    for (const FourVector& x : rel) {
        CHECK(std::abs(f(x) - phi_boosted(x, state)) < 1e-14);
        CHECK(std::abs(f.closed_form().value(x) - phi_boosted(x, state)) < 1e-14);
        for (const FourVector& bigx : com)
            CHECK(std::abs(psi(x, bigx) - psi_full(x, bigx, state)) < 1e-14);
    }
}

TEST_CASE("hermite fields multiply and differentiate in the frame variables") {
    const OscillatorState state(OscillatorSpec(1.0, 1.0, 1.0), QuantumNumbers(2, 1, 0),
                                BoostVelocity(0.0, 0.0, 0.6));
    const HermiteField h = HermiteField::eigenstate(state);
    const FrameGeometry& g = h.geometry();
    const std::vector<FourVector> points = sample_rel_events(state, 12, 21u);

    LinearForm xi1;
    xi1.cxi(0) = 1.0;
    const HermiteField hx = h.multiplied(xi1);
    LinearForm tmul;
    tmul.ct = 1.0;
    const HermiteField ht = h.multiplied(tmul);
    for (const FourVector& x : points) {
        const Eigen::Vector3d xi = g.xi_of(x);
        CHECK(std::abs(hx.value(x) - xi(0) * h.value(x)) < 1e-13);
        CHECK(std::abs(ht.value(x) - x.time() * h.value(x)) < 1e-13);
    }

    // d/dxi_2 against a central difference taken along the xi_2 axis.
    DiffForm d2;
    d2.a(1) = 1.0;
    const HermiteField hd = h.differentiated(d2);
    const double step = 1e-5;
    for (const FourVector& x : points) {
        const Eigen::Vector3d xi = g.xi_of(x);
        Eigen::Vector3d up = xi, dn = xi;
        up(1) += step;
        dn(1) -= step;
        const double num =
            (h.value(g.event_of(up, x.time())).real() - h.value(g.event_of(dn, x.time())).real()) /
            (2.0 * step);
        CHECK(std::abs(hd.value(x).real() - num) < 1e-8);
    }
}

TEST_CASE("primed ladders step the quantum numbers with sqrt factors") {
    const OscillatorSpec spec(1.0, 1.0, 1.0);
    const BoostVelocity boosts[] = {BoostVelocity{}, BoostVelocity(0.6, 0.0, 0.0)};
    const QuantumNumbers levels[] = {QuantumNumbers(1, 0, 0), QuantumNumbers(0, 1, 2)};

    for (const BoostVelocity& v : boosts) {
        for (const QuantumNumbers& qns : levels) {
            const OscillatorState state(spec, qns, v);
            const ScalarField f = ScalarField::eigenstate(state);
            const std::vector<FourVector> points = sample_rel_events(state, 20, 31u);

            for (const DiffEngine& eng : kEngines) {
                const double tol = engine_tol(eng);
                for (int axis = 0; axis < 3; ++axis) {
                    const ScalarField low =
                        apply_ladder_primed(f, {LadderDir::lower, axis}, state, eng);
                    if (qns.level(axis) == 0) {
                        CHECK(null_gap(low, f, points) < tol);
                    } else {
                        const OscillatorState down(spec, qns.shifted(axis, -1), v);
                        const ScalarField target =
                            std::complex<double>(std::sqrt(double(qns.level(axis)))) *
                            ScalarField::eigenstate(down);
                        CHECK(field_gap(low, target, points) < tol);
                    }

                    const ScalarField up =
                        apply_ladder_primed(f, {LadderDir::raise, axis}, state, eng);
                    const OscillatorState upstate(spec, qns.shifted(axis, 1), v);
                    const ScalarField uptarget =
                        std::complex<double>(std::sqrt(double(qns.level(axis) + 1))) *
                        ScalarField::eigenstate(upstate);
                    CHECK(field_gap(up, uptarget, points) < tol);
                }
            }
        }
    }
}

TEST_CASE("number operator counts quanta and matches the primed composition") {
    const OscillatorSpec spec(1.0, 1.0, 1.0);
    const QuantumNumbers qns(1, 2, 0);
    const OscillatorState state(spec, qns, BoostVelocity(0.6, 0.0, 0.0));
    const ScalarField f = ScalarField::eigenstate(state);
    const std::vector<FourVector> points = sample_rel_events(state, 20, 41u);

    for (const DiffEngine& eng : kEngines) {
        const double tol = engine_tol(eng) * (eng.mode == DiffEngine::Mode::analytic ? 1.0 : 10.0);
        const ScalarField counted = apply_number_operator(f, state, eng);
        const ScalarField target = std::complex<double>(double(qns.n())) * f;
        CHECK(field_gap(counted, target, points) < tol);

        ScalarField primed;
        for (int axis = 0; axis < 3; ++axis) {
            const ScalarField low = apply_ladder_primed(f, {LadderDir::lower, axis}, state, eng);
            const ScalarField both = apply_ladder_primed(low, {LadderDir::raise, axis}, state, eng);
            primed = primed ? primed + both : both;
        }
        CHECK(field_gap(primed, counted, points) < tol);
    }
}

TEST_CASE("constraint operators annihilate or rescale the moving eigenstate") {
    const OscillatorSpec spec(1.5, 0.5, 0.8);
    const QuantumNumbers qns(1, 1, 0);
    const OscillatorState state(spec, qns, BoostVelocity(0.0, 0.0, 0.9));
    const ScalarField f = ScalarField::eigenstate(state);
    const std::vector<FourVector> points = sample_rel_events(state, 24, 51u);

    for (const DiffEngine& eng : kEngines) {
        const double tol = engine_tol(eng);
        CHECK(null_gap(apply_KS(f, state, eng), f, points) < tol);
        CHECK(null_gap(apply_P_dot_ladder(f, LadderDir::lower, state, eng), f, points) < tol);
        CHECK(null_gap(apply_P_dot_ladder(f, LadderDir::raise, state, eng), f, points) < tol);

        const ScalarField ho = apply_internal_HO(f, state, eng);
        const ScalarField target = std::complex<double>(2.0 * state.sigma()) * f;
        CHECK(field_gap(ho, target, points) < tol * 10.0);
    }
}

TEST_CASE("lowering the ground state gives zero on every axis") {
    const OscillatorState state(OscillatorSpec(1.0, 1.0, 1.0), QuantumNumbers(0, 0, 0),
                                BoostVelocity(0.6, 0.0, 0.0));
    const ScalarField f = ScalarField::eigenstate(state);
    const std::vector<FourVector> points = sample_rel_events(state, 16, 61u);

    for (const DiffEngine& eng : kEngines) {
        const double tol = engine_tol(eng);
        for (int axis = 0; axis < 3; ++axis)
            CHECK(null_gap(apply_ladder_primed(f, {LadderDir::lower, axis}, state, eng), f,
                           points) < tol);
    }
}

TEST_CASE("engines agree on a generic closed-form field") {
    const OscillatorState state(OscillatorSpec(1.0, 1.0, 1.0), QuantumNumbers(1, 0, 1),
                                BoostVelocity(0.6, 0.0, 0.0));
    HermiteField::TermMap terms;
    terms[HermiteField::key_of(0, 0, 0, 0)] = {1.0, 0.5};
    terms[HermiteField::key_of(1, 1, 0, 2)] = {0.3, -0.2};
    terms[HermiteField::key_of(2, 2, 1, 0)] = {-0.7, 0.1};
    const HermiteField base(HermiteField::eigenstate(state).geometry_ptr(), terms);
    const ScalarField f{HermiteField(base)};
    const std::vector<FourVector> points = sample_rel_events(state, 12, 71u);

    const DiffEngine an = DiffEngine::analytic();
    const DiffEngine fd = DiffEngine::finite_difference();
    const auto agree = [&](const ScalarField& a, const ScalarField& b) {
        return field_gap(a, b, points) < 1e-6;
    };
    CHECK(agree(apply_p(f, 1, fd), apply_p(f, 1, an)));
    CHECK(agree(apply_ladder_cov(f, {LadderDir::lower, 3}, state, fd),
                apply_ladder_cov(f, {LadderDir::lower, 3}, state, an)));
    CHECK(agree(apply_ladder_primed(f, {LadderDir::raise, 1}, state, fd),
                apply_ladder_primed(f, {LadderDir::raise, 1}, state, an)));
    CHECK(agree(apply_internal_HO(f, state, fd), apply_internal_HO(f, state, an)));
    CHECK(agree(apply_KS(f, state, fd), apply_KS(f, state, an)));
}

TEST_CASE("operator engine rejects mismatched inputs") {
    const OscillatorSpec spec(1.0, 1.0, 1.0);
    const QuantumNumbers qns(0, 0, 0);
    const OscillatorState rest(spec, qns, BoostVelocity{});
    const OscillatorState moving(spec, qns, BoostVelocity(0.6, 0.0, 0.0));
    const OscillatorState stiffer(OscillatorSpec(1.0, 1.0, 2.0), qns, BoostVelocity{});
    const ScalarField f = ScalarField::eigenstate(rest);
    const DiffEngine an = DiffEngine::analytic();

    CHECK_THROWS_AS(apply_ladder_cov(f, {LadderDir::lower, 0}, moving, an),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_ladder_primed(f, {LadderDir::lower, 0}, stiffer, an),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_ladder_cov(f, {LadderDir::lower, 4}, rest, an), std::out_of_range);
    CHECK_THROWS_AS(apply_ladder_primed(f, {LadderDir::lower, 3}, rest, an), std::out_of_range);
    CHECK_THROWS_AS(apply_p(f, -1, an), std::out_of_range);

    // Lambda-only fields carry no closed form for the analytic engine.
    const ScalarField bare([](const FourVector& x) {
        return std::complex<double>(std::exp(-x.spatial().squaredNorm()), 0.0);
    });
    CHECK_THROWS_AS(apply_p(bare, 0, an), std::logic_error);

    CHECK_THROWS_AS(DiffEngine::finite_difference(0.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DiffEngine::finite_difference(-1e-3).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DiffEngine::finite_difference(1e-3, 3).validate(), std::invalid_argument);

    // A step too small to move the coordinate is caught at evaluation time.
    const ScalarField frozen = apply_p(bare, 0, DiffEngine::finite_difference(1e-300));
    CHECK_THROWS_AS(frozen(FourVector(1.0, 0.0, 0.0, 0.0)), std::invalid_argument);

    const BiScalarField wave = BiScalarField::plane_wave(FourVector(0.1, 0.0, 0.0, 0.0),
                                                         FourVector(0.0, 0.0, 0.0, 2.0));
    CHECK_THROWS_AS(apply_KT_com(wave, rest, an), std::invalid_argument);
    const BiScalarField bare2([](const FourVector&, const FourVector&) {
        return std::complex<double>(1.0, 0.0);
    });
    CHECK_THROWS_AS(apply_KT_individual(bare2, 1.0, 1.0, 1.0, EpsilonPair{1.0, 1.0},
                                        rest.momentum(), an),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_KT_individual(wave, 1.0, 1.0, -1.0, EpsilonPair{1.0, 1.0},
                                        rest.momentum(), an),
                    std::domain_error);
}

TEST_CASE("free on-shell plane waves satisfy the summed mass-shell operator") {
    const double m1 = 1.3, m2 = 0.7, q = 0.9;
    const double e1 = std::sqrt(m1 * m1 + q * q);
    const double e2 = std::sqrt(m2 * m2 + q * q);
    const double m0 = e1 + e2;
    const Eigen::Vector3d dir = Eigen::Vector3d(1.0, 2.0, -0.5).normalized();

    FourVector p1r, p2r;
    p1r.set_spatial(q * dir);
    p1r[3] = e1;
    p2r.set_spatial(-q * dir);
    p2r[3] = e2;

    // Back-to-back rest momenta reproduce the rest-frame energy weights.
    const EpsilonPair eps = epsilon_params(m1, m2, m0);
    CHECK(eps.e1 == doctest::Approx(e1).epsilon(1e-14));
    CHECK(eps.e2 == doctest::Approx(e2).epsilon(1e-14));

    const BoostVelocity boosts[] = {BoostVelocity{}, BoostVelocity(0.6, 0.0, 0.0),
                                    BoostVelocity(0.3, -0.4, 0.5)};
    const std::vector<FourVector> rel = {FourVector(0.2, -0.5, 0.9, 0.1),
                                         FourVector(-1.0, 0.3, 0.4, -0.7)};
    const std::vector<FourVector> com = {FourVector(0.0, 0.0, 0.0, 0.0),
                                         FourVector(0.6, -0.2, 1.1, 0.9)};

    for (const BoostVelocity& v : boosts) {
        const FourVector p1 = boost_coordinates(p1r, v.reversed());
        const FourVector p2 = boost_coordinates(p2r, v.reversed());
        const ComSplit split = com_split(FourVector{}, FourVector{}, p1, p2, eps, m0);
        CHECK(std::abs(minkowski_dot(split.p_total, split.p_total) + m0 * m0) < 1e-12 * m0 * m0);
        CHECK(std::abs(minkowski_dot(split.p_total, split.p_rel)) < 1e-12 * m0 * m0);

        const BiScalarField wave = BiScalarField::plane_wave(split.p_rel, split.p_total);
        const FrameMomentum frame(m0, v);
        for (const DiffEngine& eng : kEngines) {
            const BiScalarField out =
                apply_KT_individual(wave, m1, m2, 0.0, eps, frame, eng);
            const double tol =
                (eng.mode == DiffEngine::Mode::analytic ? 1e-12 : 1e-8) * m0 * m0;
            for (const FourVector& x : rel)
                for (const FourVector& bigx : com)
                    CHECK(std::abs(out(x, bigx)) < tol);
        }
    }
}

TEST_CASE("the audit pins down the scalar discrepancy of the individual form") {
    const OscillatorState state(OscillatorSpec(2.0, 1.0, 2.0 / 3.0), QuantumNumbers(0, 0, 0),
                                BoostVelocity{});
    const std::vector<FourVector> points = sample_rel_events(state, 32, 123u);
    const FourVector com = sample_com_events(state, 1, 5u)[0];

    const AuditRecord rec =
        audit_KT_individual(state, DiffEngine::analytic(), points, com);
    const double expected = 8.0 - 6.0 * std::sqrt(2.0);
    CHECK(rec.scalar_discrepancy == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rec.samples == 32);
    CHECK(rec.fitted_ratio_defined);
    CHECK(rec.ratio_to_state_max > rec.ratio_to_state_min);
    CHECK(rec.com_residual_scale ==
          doctest::Approx(std::abs(expected)).epsilon(1e-10));
    CHECK(rec.notes.find("unequal masses") != std::string::npos);

    const OscillatorState equal(OscillatorSpec(1.0, 1.0, 1.0), QuantumNumbers(0, 0, 0),
                                BoostVelocity{});
    const std::vector<FourVector> points2 = sample_rel_events(equal, 32, 124u);
    const AuditRecord rec2 =
        audit_KT_individual(equal, DiffEngine::analytic(), points2, com);
    CHECK(rec2.scalar_discrepancy == 0.0);
    CHECK_FALSE(rec2.fitted_ratio_defined);
    CHECK(rec2.notes.find("equal masses") != std::string::npos);
}

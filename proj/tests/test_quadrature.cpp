#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "osclab/hermite.hpp"
#include "osclab/quadrature.hpp"

using namespace osclab;

namespace {
const double kSqrtPi = std::sqrt(M_PI);
}

TEST_CASE("the five-node rule matches the tabulated nodes and weights") {
    const GaussHermite gh = GaussHermite::make(5);
    REQUIRE(gh.nodes.size() == 5);
    REQUIRE(gh.weights.size() == 5);

    const double nodes[5] = {-2.0201828704560856, -0.95857246461381851, 0.0,
                             0.95857246461381851, 2.0201828704560856};
    const double weights[5] = {0.019953242059045917, 0.39361932315224107, 0.94530872048294179,
                               0.39361932315224107, 0.019953242059045917};
    for (int i = 0; i < 5; ++i) {
        CHECK(gh.nodes(i) == doctest::Approx(nodes[i]).epsilon(1e-14));
        CHECK(gh.weights(i) == doctest::Approx(weights[i]).epsilon(1e-14));
    }
}

TEST_CASE("weights sum to sqrt(pi) and nodes come out symmetric") {
    for (int n : {1, 2, 8, 64}) {
        const GaussHermite gh = GaussHermite::make(n);
        CHECK(gh.weights.sum() == doctest::Approx(kSqrtPi).epsilon(1e-14));
        for (int i = 0; i + 1 < n; ++i)
            CHECK(gh.nodes(i) < gh.nodes(i + 1));
        for (int i = 0; i < n; ++i) {
            CHECK(gh.nodes(i) == doctest::Approx(-gh.nodes(n - 1 - i)).epsilon(1e-13));
            CHECK(gh.weights(i) == doctest::Approx(gh.weights(n - 1 - i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("low moments of the Gaussian weight are integrated exactly") {
    const GaussHermite gh = GaussHermite::make(8);
    double m2 = 0.0, m4 = 0.0, m6 = 0.0;
    for (int i = 0; i < gh.nodes.size(); ++i) {
        const double x = gh.nodes(i), w = gh.weights(i);
        m2 += w * x * x;
        m4 += w * x * x * x * x;
        m6 += w * std::pow(x, 6);
    }
    CHECK(m2 == doctest::Approx(kSqrtPi / 2.0).epsilon(1e-14));
    CHECK(m4 == doctest::Approx(3.0 * kSqrtPi / 4.0).epsilon(1e-14));
    CHECK(m6 == doctest::Approx(15.0 * kSqrtPi / 8.0).epsilon(1e-14));
}

TEST_CASE("the rule resolves Hermite orthogonality up to its degree") {
    const GaussHermite gh = GaussHermite::make(12);
    for (int l = 0; l <= 6; ++l) {
        for (int k = 0; k <= 6; ++k) {
            double acc = 0.0;
            for (int i = 0; i < gh.nodes.size(); ++i) {
                const double x = gh.nodes(i);
                acc += gh.weights(i) * hermite_phi(l, x) * hermite_phi(k, x) *
                       std::exp(x * x);
            }
            const double expected = (l == k) ? kSqrtPi : 0.0;
            CHECK(std::abs(acc - expected) < 1e-12);
        }
    }
}

TEST_CASE("node counts outside the supported range are rejected") {
    CHECK_THROWS_AS(GaussHermite::make(0), std::domain_error);
    CHECK_THROWS_AS(GaussHermite::make(-3), std::domain_error);
    CHECK_THROWS_AS(GaussHermite::make(300), std::domain_error);
}

TEST_CASE("moving eigenstates stay unit-normalized on their slice") {
    const OscillatorState states[] = {
        OscillatorState(OscillatorSpec(1.0, 1.0, 1.0), QuantumNumbers(0, 0, 0), BoostVelocity{}),
        OscillatorState(OscillatorSpec(1.0, 1.0, 1.0), QuantumNumbers(2, 1, 0),
                        BoostVelocity(0.6, 0.0, 0.0)),
        OscillatorState(OscillatorSpec(2.0, 1.0, 2.0 / 3.0), QuantumNumbers(1, 1, 1),
                        BoostVelocity(0.3, -0.4, 0.5)),
    };
    for (const OscillatorState& state : states) {
        const double n16 = norm_hypersurface(state, 16);
        const double n32 = norm_hypersurface(state, 32);
        CHECK(n16 == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(n32 - n16) < 1e-12);
    }
}

TEST_CASE("under-resolved rules miss the norm of excited states") {
    const OscillatorState state(OscillatorSpec(1.0, 1.0, 1.0), QuantumNumbers(6, 0, 0),
                                BoostVelocity{});
    CHECK(std::abs(norm_hypersurface(state, 3) - 1.0) > 1e-3);
    CHECK(norm_hypersurface(state, 8) == doctest::Approx(1.0).epsilon(1e-12));
}

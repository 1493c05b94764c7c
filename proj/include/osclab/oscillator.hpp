#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include "osclab/four_vector.hpp"

namespace osclab {

/** Static parameters of the two-particle oscillator: masses and coupling. */
struct OscillatorSpec {
    double m1;
    double m2;
    double omega_big; // Omega, the covariant spring frequency

    OscillatorSpec(double m1_, double m2_, double omega) : m1(m1_), m2(m2_), omega_big(omega) {
        if (!(m1 > 0.0) || !(m2 > 0.0))
            throw std::domain_error("OscillatorSpec: masses must be > 0");
        if (!(omega > 0.0))
            throw std::domain_error("OscillatorSpec: omega_big must be > 0, got " +
                                    std::to_string(omega));
    }

    double combined_mass() const { return m1 + m2; }
    double reduced_mass() const { return m1 * m2 / (m1 + m2); }
    bool equal_masses() const { return m1 == m2; }
};

/** Excitation numbers (l1, l2, l3) of the three transverse axes. */
struct QuantumNumbers {
    int l1;
    int l2;
    int l3;

    QuantumNumbers(int a, int b, int c) : l1(a), l2(b), l3(c) {
        if (a < 0 || b < 0 || c < 0)
            throw std::domain_error("QuantumNumbers: levels must be >= 0");
    }

    int n() const { return l1 + l2 + l3; }

    int level(int axis) const {
        switch (axis) {
        case 0: return l1;
        case 1: return l2;
        case 2: return l3;
        default: throw std::out_of_range("QuantumNumbers::level: axis must be 0..2");
        }
    }

    /** Copy with one axis shifted; throws if the shift would go negative. */
    QuantumNumbers shifted(int axis, int delta) const {
        QuantumNumbers out = *this;
        switch (axis) {
        case 0: out.l1 += delta; break;
        case 1: out.l2 += delta; break;
        case 2: out.l3 += delta; break;
        default: throw std::out_of_range("QuantumNumbers::shifted: axis must be 0..2");
        }
        if (out.l1 < 0 || out.l2 < 0 || out.l3 < 0)
            throw std::domain_error("QuantumNumbers::shifted: level would become negative");
        return out;
    }

    bool operator==(const QuantumNumbers&) const = default;
};

/** Internal eigenvalue sigma = Omega (n + 3/2). */
inline double sigma_of_n(double omega_big, int n) {
    if (!(omega_big > 0.0))
        throw std::domain_error("sigma_of_n: omega_big must be > 0");
    if (n < 0)
        throw std::domain_error("sigma_of_n: n must be >= 0");
    return omega_big * (n + 1.5);
}

/**
 * Composite rest mass from the constraint spectrum,
 *
 *   M0^2 = m1^2 + m2^2 + 4 sigma + sqrt( (m1^2 + m2^2 + 4 sigma)^2 - (m1^2 - m2^2)^2 ),
 *
 * the branch that reduces to M0 = 2 sqrt(m^2 + 2 sigma) at equal masses and
 * to m1 + m2 + sigma/m_r in the weak-coupling limit.
 */
inline double rest_mass(double m1, double m2, double sigma) {
    if (!(m1 > 0.0) || !(m2 > 0.0))
        throw std::domain_error("rest_mass: masses must be > 0");
    if (!(sigma >= 0.0))
        throw std::domain_error("rest_mass: sigma must be >= 0");
    const double s = m1 * m1 + m2 * m2 + 4.0 * sigma;
    const double d = m1 * m1 - m2 * m2;
    const double disc = s * s - d * d;
    if (!(disc >= 0.0))
        throw std::domain_error("rest_mass: discriminant negative");
    return std::sqrt(s + std::sqrt(disc));
}

/** Weak-coupling mass m1 + m2 + sigma / m_r, the nonrelativistic spectrum. */
inline double nonrel_mass_approx(const OscillatorSpec& spec, double sigma) {
    return spec.combined_mass() + sigma / spec.reduced_mass();
}

/**
 * One eigenstate of the internal oscillator, carried by a frame moving with
 * the given boost velocity.  Caches sigma, M0 and the on-shell total
 * momentum; everything downstream (fields, operators, checks) reads its
 * geometry from here.
 */
class OscillatorState {
public:
    OscillatorState(const OscillatorSpec& spec, const QuantumNumbers& qns,
                    const BoostVelocity& boost)
        : spec_(spec), qns_(qns), boost_(boost), sigma_(sigma_of_n(spec.omega_big, qns.n())),
          momentum_(osclab::rest_mass(spec.m1, spec.m2, sigma_), boost) {}

    const OscillatorSpec& spec() const { return spec_; }
    const QuantumNumbers& qns() const { return qns_; }
    const BoostVelocity& boost() const { return boost_; }
    double sigma() const { return sigma_; }
    double rest_mass() const { return momentum_.rest_mass(); }
    double energy() const { return momentum_.energy(); }
    const FrameMomentum& momentum() const { return momentum_; }
    EpsilonPair epsilons() const {
        return epsilon_params(spec_.m1, spec_.m2, momentum_.rest_mass());
    }

private:
    OscillatorSpec spec_;
    QuantumNumbers qns_;
    BoostVelocity boost_;
    double sigma_;
    FrameMomentum momentum_;
};

/**
 * Dimensionless oscillator arguments of the moving state,
 *
 *   xi_i = sqrt(Omega) [ x_i + (P_i / M0) ( (P.x) / (M0 + E) - t ) ],
 *
 * with P.x the spatial 3-dot.  These equal sqrt(Omega) times the rest-frame
 * spatial coordinates of the event, expressed through lab data.
 */
inline Eigen::Vector3d xi_arguments(const FourVector& x, const FrameMomentum& frame,
                                    double omega_big) {
    const Eigen::Vector3d pvec = frame.spatial();
    const double m0 = frame.rest_mass();
    const double e = frame.energy();
    const double pdotx = pvec.dot(x.spatial());
    const double root = std::sqrt(omega_big);
    return root * (x.spatial() + (pvec / m0) * (pdotx / (m0 + e) - x.time()));
}

/**
 * Real transverse profile of the moving eigenstate at lab event x:
 * the rest-frame Hermite-Gaussian evaluated on the boosted coordinates,
 *
 *   Phi(x) = (Omega/pi)^{3/4} prod_i phi_{l_i}(xi_i(x)) ,
 *
 * with phi_l the normalized Hermite functions.  The prefactor makes the
 * rest-frame ground state unit-normalized over its spatial slice.
 */
double phi_boosted(const FourVector& x, const OscillatorState& state);

/**
 * Full two-particle wavefunction Psi(x, X) = Phi(x) e^{i P.X} with P.X the
 * Minkowski product (P.X = P_s.X_s - E T), evaluated at relative event x and
 * center-of-momentum event X.
 */
std::complex<double> psi_full(const FourVector& x_rel, const FourVector& x_com,
                              const OscillatorState& state);

} // namespace osclab

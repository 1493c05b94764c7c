#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <type_traits>

#include <Eigen/Dense>

namespace osclab {

/**
 * Four-vector with metric signature (+, +, +, -).
 *
 * Components are stored in the lower (covariant) position: indices 0..2 are
 * spatial, index 3 is the time component, so for a position vector
 * v[3] == t and for a momentum vector v[3] == E.  Raising an index flips
 * only the sign of the time component.
 */
template <typename Scalar>
class FourVec {
public:
    using Storage = Eigen::Matrix<Scalar, 4, 1>;

    FourVec() : c_(Storage::Zero()) {}
    FourVec(Scalar c1, Scalar c2, Scalar c3, Scalar c4) { c_ << c1, c2, c3, c4; }
    explicit FourVec(const Storage& c) : c_(c) {}

    Scalar& operator[](int mu) { return c_(mu); }
    const Scalar& operator[](int mu) const { return c_(mu); }

    /** Time component (index 3). */
    Scalar time() const { return c_(3); }

    Eigen::Matrix<Scalar, 3, 1> spatial() const { return c_.template head<3>(); }
    void set_spatial(const Eigen::Matrix<Scalar, 3, 1>& s) { c_.template head<3>() = s; }

    const Storage& raw() const { return c_; }
    Storage& raw() { return c_; }

    FourVec operator+(const FourVec& o) const { return FourVec(Storage(c_ + o.c_)); }
    FourVec operator-(const FourVec& o) const { return FourVec(Storage(c_ - o.c_)); }
    FourVec operator-() const { return FourVec(Storage(-c_)); }
    FourVec operator*(Scalar s) const { return FourVec(Storage(c_ * s)); }
    FourVec& operator+=(const FourVec& o) { c_ += o.c_; return *this; }

    friend FourVec operator*(Scalar s, const FourVec& v) { return v * s; }

    bool operator==(const FourVec& o) const { return c_ == o.c_; }

private:
    Storage c_;
};

using FourVector = FourVec<double>;
using FourVectorC = FourVec<std::complex<double>>;

/**
 * Minkowski inner product of two lower-index vectors,
 * a.b = a1 b1 + a2 b2 + a3 b3 - a4 b4.
 *
 * The product is bilinear (no complex conjugation), so it applies unchanged
 * to complex-valued vectors.
 */
template <typename S1, typename S2>
auto minkowski_dot(const FourVec<S1>& a, const FourVec<S2>& b) {
    using R = std::common_type_t<S1, S2>;
    R out = R(a[0]) * R(b[0]) + R(a[1]) * R(b[1]) + R(a[2]) * R(b[2]);
    out -= R(a[3]) * R(b[3]);
    return out;
}

/** Raise the index: flips the sign of the time component only. */
template <typename Scalar>
FourVec<Scalar> raise_index(const FourVec<Scalar>& v) {
    FourVec<Scalar> out = v;
    out[3] = -out[3];
    return out;
}

/** Lower the index; the involution partner of raise_index. */
template <typename Scalar>
FourVec<Scalar> lower_index(const FourVec<Scalar>& v) {
    return raise_index(v);
}

/**
 * Boost velocity with cached Lorentz factor.
 *
 * Speeds at or above 1 - 1e-12 are rejected: gamma loses all significant
 * digits there and every downstream quantity would be garbage.
 */
class BoostVelocity {
public:
    BoostVelocity() : v_(Eigen::Vector3d::Zero()), gamma_(1.0) {}

    explicit BoostVelocity(const Eigen::Vector3d& v) : v_(v) {
        const double speed = v_.norm();
        if (!(speed < 1.0 - 1e-12))
            throw std::domain_error("BoostVelocity: |v| must be < 1 - 1e-12, got " +
                                    std::to_string(speed));
        gamma_ = 1.0 / std::sqrt(1.0 - v_.squaredNorm());
    }

    BoostVelocity(double v1, double v2, double v3)
        : BoostVelocity(Eigen::Vector3d(v1, v2, v3)) {}

    const Eigen::Vector3d& vec() const { return v_; }
    double gamma() const { return gamma_; }
    double speed() const { return v_.norm(); }
    bool is_rest() const { return v_.isZero(0.0); }

    BoostVelocity reversed() const {
        BoostVelocity out;
        out.v_ = -v_;
        out.gamma_ = gamma_;
        return out;
    }

private:
    Eigen::Vector3d v_;
    double gamma_;
};

/**
 * Map lab-frame coordinates of an event to the frame moving with velocity v,
 *
 *   x'_i = x_i + gamma v_i ( gamma (v.x) / (1 + gamma) - t ),
 *   t'   = gamma ( t - v.x ).
 *
 * A state at rest in the primed frame appears boosted by +v in the lab, so
 * evaluating a rest-frame profile at boost_coordinates(x, v) produces the
 * moving state.
 */
inline FourVector boost_coordinates(const FourVector& x, const BoostVelocity& v) {
    const double g = v.gamma();
    const Eigen::Vector3d vv = v.vec();
    const double vdotx = vv.dot(x.spatial());
    const double t = x.time();
    FourVector out;
    out.set_spatial(x.spatial() + g * vv * (g * vdotx / (1.0 + g) - t));
    out[3] = g * (t - vdotx);
    return out;
}

/**
 * On-shell total momentum of a composite of rest mass M0 moving with
 * velocity v.  Stored in the lower position: P = (gamma M0 v_i, gamma M0),
 * so P[3] == E and minkowski_dot(P, P) == -M0^2.
 */
class FrameMomentum {
public:
    FrameMomentum(double rest_mass, const BoostVelocity& v) : m0_(rest_mass) {
        if (!(rest_mass > 0.0))
            throw std::domain_error("FrameMomentum: rest mass must be > 0, got " +
                                    std::to_string(rest_mass));
        const double e = v.gamma() * rest_mass;
        p_.set_spatial(e * v.vec());
        p_[3] = e;
    }

    const FourVector& p() const { return p_; }
    double rest_mass() const { return m0_; }
    double energy() const { return p_[3]; }
    Eigen::Vector3d spatial() const { return p_.spatial(); }

private:
    FourVector p_;
    double m0_;
};

inline FrameMomentum momentum_from_boost(double rest_mass, const BoostVelocity& v) {
    return FrameMomentum(rest_mass, v);
}

/**
 * Project x onto the hyperplane Minkowski-orthogonal to P:
 *
 *   xperp_mu = x_mu + P_mu (P.x) / M0^2,
 *
 * with M0^2 = -P.P > 0.  Satisfies minkowski_dot(P, xperp) == 0 and is
 * idempotent.  At rest the spatial part is untouched and the time component
 * is projected away.
 */
template <typename Scalar>
FourVec<Scalar> perp_project(const FourVec<Scalar>& x, const FrameMomentum& frame) {
    const FourVector& p = frame.p();
    const double m0sq = frame.rest_mass() * frame.rest_mass();
    Scalar pdotx = Scalar(p[0]) * x[0] + Scalar(p[1]) * x[1] + Scalar(p[2]) * x[2];
    pdotx -= Scalar(p[3]) * x[3];
    FourVec<Scalar> out = x;
    for (int mu = 0; mu < 4; ++mu)
        out[mu] += Scalar(p[mu]) * (pdotx / m0sq);
    return out;
}

/** Constituent energy weights in the composite rest frame. */
struct EpsilonPair {
    double e1;
    double e2;
};

/**
 * Rest-frame energies of the two constituents,
 *
 *   eps1 = (M0^2 + m1^2 - m2^2) / (2 M0),
 *   eps2 = (M0^2 + m2^2 - m1^2) / (2 M0),
 *
 * with eps1 + eps2 == M0.
 */
inline EpsilonPair epsilon_params(double m1, double m2, double m0) {
    if (!(m0 > 0.0))
        throw std::domain_error("epsilon_params: M0 must be > 0, got " + std::to_string(m0));
    if (m1 < 0.0 || m2 < 0.0)
        throw std::domain_error("epsilon_params: constituent masses must be >= 0");
    const double m1sq = m1 * m1, m2sq = m2 * m2, m0sq = m0 * m0;
    return EpsilonPair{(m0sq + m1sq - m2sq) / (2.0 * m0), (m0sq + m2sq - m1sq) / (2.0 * m0)};
}

/** Center-of-momentum / relative decomposition of a two-particle system. */
struct ComSplit {
    FourVector x_com;   // X = (eps1 x1 + eps2 x2) / M0
    FourVector p_total; // P = p1 + p2
    FourVector x_rel;   // x = x1 - x2
    FourVector p_rel;   // p = (eps2 p1 - eps1 p2) / M0
};

inline ComSplit com_split(const FourVector& x1, const FourVector& x2, const FourVector& p1,
                          const FourVector& p2, const EpsilonPair& eps, double m0) {
    if (!(m0 > 0.0))
        throw std::domain_error("com_split: M0 must be > 0");
    ComSplit out;
    out.x_com = (eps.e1 / m0) * x1 + (eps.e2 / m0) * x2;
    out.p_total = p1 + p2;
    out.x_rel = x1 - x2;
    out.p_rel = (eps.e2 / m0) * p1 - (eps.e1 / m0) * p2;
    return out;
}

/** Individual coordinates and momenta recovered from a ComSplit. */
struct ComMerge {
    FourVector x1;
    FourVector x2;
    FourVector p1;
    FourVector p2;
};

inline ComMerge com_merge(const ComSplit& s, const EpsilonPair& eps, double m0) {
    if (!(m0 > 0.0))
        throw std::domain_error("com_merge: M0 must be > 0");
    ComMerge out;
    out.x1 = s.x_com + (eps.e2 / m0) * s.x_rel;
    out.x2 = s.x_com - (eps.e1 / m0) * s.x_rel;
    out.p1 = (eps.e1 / m0) * s.p_total + s.p_rel;
    out.p2 = (eps.e2 / m0) * s.p_total - s.p_rel;
    return out;
}

} // namespace osclab

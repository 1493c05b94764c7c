#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <variant>

#include "osclab/four_vector.hpp"
#include "osclab/oscillator.hpp"

namespace osclab {

/**
 * Frame-dependent geometry shared by every field built from one
 * OscillatorState: the on-shell momentum plus the linear maps between lab
 * coordinates (x, t) and the dimensionless oscillator arguments xi.
 *
 * dxi_dx(j, i) = d xi_j / d x_i,  dxi_dt(j) = d xi_j / d t, and the inverse
 * map x_i = sum_j x_coef(i, j) xi_j + x_tcoef(i) t, which together let any
 * coordinate-space operator be rewritten in xi variables by the chain rule.
 */
struct FrameGeometry {
    FrameMomentum frame;
    double omega_big;
    double sqrt_omega;
    Eigen::Matrix3d dxi_dx;
    Eigen::Vector3d dxi_dt;
    Eigen::Matrix3d x_coef;
    Eigen::Vector3d x_tcoef;

    FrameGeometry(const FrameMomentum& f, double omega);

    /** Oscillator arguments of a lab event; delegates to xi_arguments. */
    Eigen::Vector3d xi_of(const FourVector& x) const;

    /** Lab event with the given oscillator arguments and lab time. */
    FourVector event_of(const Eigen::Vector3d& xi, double t) const;

    bool same_frame(const FrameGeometry& o) const;
};

/** Complex linear form c0 + cxi . xi + ct t over the frame variables. */
struct LinearForm {
    std::complex<double> c0{0.0, 0.0};
    Eigen::Vector3cd cxi = Eigen::Vector3cd::Zero();
    std::complex<double> ct{0.0, 0.0};

    LinearForm& operator+=(const LinearForm& o) {
        c0 += o.c0;
        cxi += o.cxi;
        ct += o.ct;
        return *this;
    }
    friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
    friend LinearForm operator*(std::complex<double> s, LinearForm f) {
        f.c0 *= s;
        f.cxi *= s;
        f.ct *= s;
        return f;
    }
};

/** Complex first-order operator a . d/dxi + b d/dt (explicit t only). */
struct DiffForm {
    Eigen::Vector3cd a = Eigen::Vector3cd::Zero();
    std::complex<double> b{0.0, 0.0};

    DiffForm& operator+=(const DiffForm& o) {
        a += o.a;
        b += o.b;
        return *this;
    }
    friend DiffForm operator+(DiffForm x, const DiffForm& y) { return x += y; }
    friend DiffForm operator*(std::complex<double> s, DiffForm d) {
        d.a *= s;
        d.b *= s;
        return d;
    }
};

/**
 * Closed-form field over one frame: a finite sum
 *
 *   sum_k  c_k  t^{k_t}  phi_{k_1}(xi_1) phi_{k_2}(xi_2) phi_{k_3}(xi_3)
 *
 * with phi_l the normalized Hermite functions.  The family is closed under
 * multiplication by any LinearForm and application of any DiffForm (both
 * shift Hermite levels by one and t powers by one at most), which is what
 * makes exact operator application possible: physical operators are
 * compiled to these primitives by the chain rule and then act term by term
 * through the Hermite recurrences
 *
 *   xi phi_l      = ( sqrt(l) phi_{l-1} + sqrt(l+1) phi_{l+1} ) / sqrt(2),
 *   d/dxi phi_l   = ( sqrt(l) phi_{l-1} - sqrt(l+1) phi_{l+1} ) / sqrt(2).
 */
class HermiteField {
public:
    using Key = std::uint32_t;
    using TermMap = std::map<Key, std::complex<double>>;

    HermiteField(std::shared_ptr<const FrameGeometry> geom, TermMap terms);

    static Key key_of(int tpow, int l1, int l2, int l3);
    static std::array<int, 4> unpack(Key k);

    /** The eigenstate profile Phi_L(x) = (Omega/pi)^{3/4} prod phi_{l_i}. */
    static HermiteField eigenstate(const OscillatorState& state);

    const FrameGeometry& geometry() const { return *geom_; }
    const std::shared_ptr<const FrameGeometry>& geometry_ptr() const { return geom_; }
    const TermMap& terms() const { return terms_; }

    std::complex<double> value(const FourVector& x) const;

    HermiteField scaled(std::complex<double> c) const;
    HermiteField plus(const HermiteField& o) const;
    HermiteField multiplied(const LinearForm& m) const;
    HermiteField differentiated(const DiffForm& d) const;

    int max_level(int axis) const;
    int max_tpow() const;

private:
    std::shared_ptr<const FrameGeometry> geom_;
    TermMap terms_;
};

/**
 * Complex scalar field over lab events.  Always evaluable; fields built
 * from an OscillatorState additionally carry the closed-form HermiteField
 * payload, which is what the analytic operator engine consumes.  Generic
 * lambda fields work with the finite-difference engine only.
 */
class ScalarField {
public:
    using Eval = std::function<std::complex<double>(const FourVector&)>;

    ScalarField() = default;
    explicit ScalarField(Eval eval, std::shared_ptr<const FrameGeometry> frame_hint = nullptr);
    explicit ScalarField(HermiteField closed_form);

    static ScalarField eigenstate(const OscillatorState& state);

    std::complex<double> operator()(const FourVector& x) const { return eval_(x); }
    explicit operator bool() const { return static_cast<bool>(eval_); }

    bool has_closed_form() const { return sym_ != nullptr; }
    const HermiteField& closed_form() const;
    const std::shared_ptr<const FrameGeometry>& frame() const { return geom_; }

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(std::complex<double> c, const ScalarField& f);

private:
    Eval eval_;
    std::shared_ptr<const HermiteField> sym_;
    std::shared_ptr<const FrameGeometry> geom_;
};

/**
 * Field of both the relative event x and the center-of-momentum event X.
 * The two closed-form payloads cover the states the constraint checks act
 * on: a Hermite profile times the plane wave e^{i P.X}, and a pure product
 * plane wave e^{i (k.x + P.X)}.
 */
class BiScalarField {
public:
    using Eval = std::function<std::complex<double>(const FourVector& x_rel,
                                                    const FourVector& x_com)>;

    struct SeparableHermite {
        std::shared_ptr<const HermiteField> rel;
        FourVector p_com;
    };
    struct SeparablePlaneWave {
        FourVector k_rel;
        FourVector p_com;
        std::complex<double> scale{1.0, 0.0};
    };
    using Payload = std::variant<std::monostate, SeparableHermite, SeparablePlaneWave>;

    BiScalarField() = default;
    explicit BiScalarField(Eval eval, std::shared_ptr<const FrameGeometry> frame_hint = nullptr);

    /** Psi(x, X) = Phi(x) e^{i P.X}. */
    static BiScalarField eigenstate(const OscillatorState& state);
    static BiScalarField plane_wave(const FourVector& k_rel, const FourVector& p_com,
                                    std::complex<double> scale = {1.0, 0.0});
    static BiScalarField from_hermite(HermiteField rel, const FourVector& p_com);

    std::complex<double> operator()(const FourVector& x_rel, const FourVector& x_com) const {
        return eval_(x_rel, x_com);
    }
    explicit operator bool() const { return static_cast<bool>(eval_); }

    const Payload& payload() const { return payload_; }
    const std::shared_ptr<const FrameGeometry>& frame() const { return geom_; }

    friend BiScalarField operator+(const BiScalarField& a, const BiScalarField& b);
    friend BiScalarField operator*(std::complex<double> c, const BiScalarField& f);

private:
    Eval eval_;
    Payload payload_;
    std::shared_ptr<const FrameGeometry> geom_;
};

} // namespace osclab

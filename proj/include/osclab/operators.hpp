#pragma once

#include <complex>
#include <span>
#include <string>

#include "osclab/fields.hpp"
#include "osclab/four_vector.hpp"
#include "osclab/oscillator.hpp"

namespace osclab {

/**
 * How derivatives are taken.  The analytic engine rewrites each operator in
 * the oscillator arguments by the chain rule and acts exactly through the
 * Hermite recurrences; it requires fields carrying a closed form.  The
 * finite-difference engine applies central stencils (order 2 or 4) to the
 * raw coordinate-space definition of each operator and works on any field;
 * second-order operators nest the first-order stencil.
 *
 * The step is dimensionless: the actual spacing is step / sqrt(Omega) when
 * the field knows its frame, step itself otherwise.
 */
struct DiffEngine {
    enum class Mode { analytic, fd };

    Mode mode = Mode::analytic;
    double step = 2e-3;
    int stencil_order = 4;

    static DiffEngine analytic() { return DiffEngine{Mode::analytic, 0.0, 0}; }
    static DiffEngine finite_difference(double step = 2e-3, int order = 4) {
        DiffEngine e{Mode::fd, step, order};
        e.validate();
        return e;
    }

    void validate() const;
    double spacing(const std::shared_ptr<const FrameGeometry>& frame) const;
};

enum class LadderDir { lower, raise };

/**
 * One ladder operator: direction plus component.  Covariant ladders take
 * components 0..3 (3 = time, upper index); primed ladders are spatial only,
 * 0..2.
 */
struct LadderIndex {
    LadderDir dir;
    int component;
};

/** The momentum component p_mu = (1/i) d/dx^mu (lower index, mu = 0..3). */
ScalarField apply_p(const ScalarField& f, int mu, const DiffEngine& engine);

/**
 * Covariant ladder a^{mu,+-} = (2 Omega)^{-1/2} ( -+ i p^mu + Omega xperp^mu ),
 * upper index, built on the transverse projector of the state's momentum.
 */
ScalarField apply_ladder_cov(const ScalarField& f, const LadderIndex& idx,
                             const OscillatorState& state, const DiffEngine& engine);

/**
 * Primed ladder a_i^{+-'} = (2 Omega)^{-1/2} ( -+ D_i + Omega s_i ), with the
 * frame-dragged derivative and shift
 *
 *   D_i = d/dx_i + (P_i / (E + M0)) d/dt,
 *   s_i = x_i + (P_i / M0) ( (P.x) / (M0 + E) - t ),
 *
 * which lower and raise the quantum numbers of the moving eigenstates one
 * axis at a time.
 */
ScalarField apply_ladder_primed(const ScalarField& f, const LadderIndex& idx,
                                const OscillatorState& state, const DiffEngine& engine);

/** Metric contraction a^+_mu a^{mu,-} composed from apply_ladder_cov. */
ScalarField apply_number_operator(const ScalarField& f, const OscillatorState& state,
                                  const DiffEngine& engine);

/** The first-class constraint K_S = P_mu p^mu. */
ScalarField apply_KS(const ScalarField& f, const OscillatorState& state,
                     const DiffEngine& engine);

/** Internal oscillator p^2 + Omega^2 xperp^2; eigenvalue 2 sigma on states. */
ScalarField apply_internal_HO(const ScalarField& f, const OscillatorState& state,
                              const DiffEngine& engine);

/** Contraction P_mu a^{mu,+-}; vanishes on the eigenstates. */
ScalarField apply_P_dot_ladder(const ScalarField& f, LadderDir dir,
                               const OscillatorState& state, const DiffEngine& engine);

/**
 * Total constraint in center-of-momentum variables,
 * K_T = P^2 + (m1 + m2)^2 + 4 ( p^2 + Omega^2 xperp^2 ),
 * acting on fields of (x, X).
 */
BiScalarField apply_KT_com(const BiScalarField& psi, const OscillatorState& state,
                           const DiffEngine& engine);

/**
 * Sum of the individual-coordinate constraint forms,
 * p1^2 + p2^2 + m1^2 + m2^2 + 4 Omega^2 xperp^2, rewritten in (x, X)
 * variables through the canonical split
 *
 *   p1^2 + p2^2 = ((eps1^2 + eps2^2)/M0^2) P^2 + 2 p^2 + (2 (eps1 - eps2)/M0) P.p .
 *
 * Omega may be zero (free two-particle case).
 */
BiScalarField apply_KT_individual(const BiScalarField& psi, double m1, double m2,
                                  double omega_big, const EpsilonPair& eps,
                                  const FrameMomentum& frame, const DiffEngine& engine);

/**
 * Comparison record for the two total-constraint forms on one eigenstate.
 * Reports the pointwise ratio of the individual-coordinate form to the
 * state and to the center-of-momentum form; asserts nothing.
 */
struct AuditRecord {
    std::string id;
    double m1 = 0.0;
    double m2 = 0.0;
    double sigma = 0.0;
    double scalar_discrepancy = 0.0; // (m1+m2)^2 + 8 sigma - M0^2
    double ratio_to_state_mean = 0.0;
    double ratio_to_state_min = 0.0;
    double ratio_to_state_max = 0.0;
    double ratio_imag_max = 0.0;
    std::complex<double> fitted_ratio{0.0, 0.0}; // least squares A ~ c B
    bool fitted_ratio_defined = false;
    double com_residual_scale = 0.0; // max |B| / max |state|
    long samples = 0;
    std::string notes;
};

AuditRecord audit_KT_individual(const OscillatorState& state, const DiffEngine& engine,
                                std::span<const FourVector> rel_points,
                                const FourVector& com_point);

} // namespace osclab

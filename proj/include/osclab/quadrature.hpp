#pragma once

#include <Eigen/Dense>

#include "osclab/oscillator.hpp"

namespace osclab {

/**
 * Gauss-Hermite rule: integral f(x) e^{-x^2} dx ~ sum w_k f(x_k).
 * Nodes and weights come from the eigen-decomposition of the Jacobi matrix
 * of the Hermite recurrence (Golub-Welsch); nodes ascend, the rule is
 * symmetric, and sum w_k = sqrt(pi).
 */
struct GaussHermite {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    static GaussHermite make(int n);
};

/**
 * Norm of the moving eigenstate over its simultaneity slice, by tensorized
 * Gauss-Hermite quadrature in the oscillator arguments.  Exactly 1 for
 * every state when the node count resolves the integrand (>= n + 1 per
 * axis); the evaluation goes through phi_boosted on mapped lab events, not
 * through any closed-form shortcut.
 */
double norm_hypersurface(const OscillatorState& state, int nodes);

} // namespace osclab

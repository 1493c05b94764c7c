#include "osclab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace osclab {

GaussHermite GaussHermite::make(int n) {
    if (n < 1 || n > 256)
        throw std::domain_error("GaussHermite: node count must be in 1..256");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double off = std::sqrt(0.5 * k);
        jacobi(k, k - 1) = off;
        jacobi(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("GaussHermite: eigensolver failed");
    GaussHermite out;
    out.nodes = solver.eigenvalues();
    out.weights.resize(n);
    const double total = std::sqrt(M_PI);
    for (int k = 0; k < n; ++k) {
        const double v0 = solver.eigenvectors()(0, k);
        out.weights(k) = total * v0 * v0;
    }
    return out;
}

double norm_hypersurface(const OscillatorState& state, int nodes) {
    const GaussHermite rule = GaussHermite::make(nodes);
    const double omega = state.spec().omega_big;
    const double root = std::sqrt(omega);
    const FrameMomentum& frame = state.momentum();
    const Eigen::Vector3d pvec = frame.spatial();
    const double m0 = frame.rest_mass();
    const double e = frame.energy();

    // Lab position on the slice with the given oscillator arguments; the
    // slice itself is t = P.x / E, simultaneity in the moving frame.
    const Eigen::Matrix3d slice_map =
        (Eigen::Matrix3d::Identity() + pvec * pvec.transpose() / (m0 * (m0 + e))) / root;

    const double jacobian = e / m0;      // det(dx/dxi) * Omega^{3/2}
    const double slice_weight = m0 / e;  // the delta-function weight on the slice

    double total = 0.0;
    for (int i = 0; i < nodes; ++i) {
        for (int j = 0; j < nodes; ++j) {
            for (int k = 0; k < nodes; ++k) {
                const Eigen::Vector3d xi(rule.nodes(i), rule.nodes(j), rule.nodes(k));
                FourVector x;
                x.set_spatial(slice_map * xi);
                x[3] = pvec.dot(x.spatial()) / e;
                // balanced integrand: phi_boosted carries e^{-|xi|^2/2}, the
                // Gauss-Hermite weight supplies e^{-|xi|^2}
                const double y = phi_boosted(x, state) * std::exp(0.5 * xi.squaredNorm());
                total += rule.weights(i) * rule.weights(j) * rule.weights(k) * y * y;
            }
        }
    }
    return total * jacobian * slice_weight / (omega * root);
}

} // namespace osclab

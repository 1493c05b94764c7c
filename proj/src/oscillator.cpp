#include "osclab/oscillator.hpp"

#include <cmath>

#include "osclab/hermite.hpp"

namespace osclab {

double phi_boosted(const FourVector& x, const OscillatorState& state) {
    const Eigen::Vector3d xi = xi_arguments(x, state.momentum(), state.spec().omega_big);
    const QuantumNumbers& q = state.qns();
    const double pref = std::pow(state.spec().omega_big / M_PI, 0.75);
    return pref * hermite_phi(q.l1, xi(0)) * hermite_phi(q.l2, xi(1)) *
           hermite_phi(q.l3, xi(2));
}

std::complex<double> psi_full(const FourVector& x_rel, const FourVector& x_com,
                              const OscillatorState& state) {
    const std::complex<double> phase =
        std::exp(std::complex<double>{0.0, minkowski_dot(state.momentum().p(), x_com)});
    return phi_boosted(x_rel, state) * phase;
}

} // namespace osclab

#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace osclab {

/**
 * Physicists' Hermite polynomial H_l(xi) by the three-term recurrence
 * H_{l+1} = 2 xi H_l - 2 l H_{l-1}, H_0 = 1, H_1 = 2 xi.
 */
inline double hermite_eval(int l, double xi) {
    if (l < 0)
        throw std::domain_error("hermite_eval: order must be >= 0");
    double hm = 1.0;
    if (l == 0)
        return hm;
    double h = 2.0 * xi;
    for (int k = 1; k < l; ++k) {
        const double hp = 2.0 * xi * h - 2.0 * k * hm;
        hm = h;
        h = hp;
    }
    return h;
}

/**
 * Fill out[0..lmax] with the Gaussian-weighted Hermite functions
 *
 *   phi_l(xi) = H_l(xi) e^{-xi^2/2} / sqrt(2^l l!),
 *
 * so that integral phi_l phi_k dxi = sqrt(pi) delta_lk.  Computed by the
 * stable normalized recurrence
 *
 *   phi_0 = e^{-xi^2/2},
 *   phi_{l+1} = xi sqrt(2/(l+1)) phi_l - sqrt(l/(l+1)) phi_{l-1},
 *
 * which keeps every entry O(1) instead of letting H_l overflow.
 */
inline void hermite_phi_fill(double xi, std::span<double> out) {
    if (out.empty())
        return;
    out[0] = std::exp(-0.5 * xi * xi);
    if (out.size() == 1)
        return;
    out[1] = xi * std::sqrt(2.0) * out[0];
    for (std::size_t l = 1; l + 1 < out.size(); ++l)
        out[l + 1] = xi * std::sqrt(2.0 / double(l + 1)) * out[l] -
                     std::sqrt(double(l) / double(l + 1)) * out[l - 1];
}

/** Single normalized Hermite function phi_l(xi); see hermite_phi_fill. */
inline double hermite_phi(int l, double xi) {
    if (l < 0)
        throw std::domain_error("hermite_phi: order must be >= 0");
    double pm = std::exp(-0.5 * xi * xi);
    if (l == 0)
        return pm;
    double p = xi * std::sqrt(2.0) * pm;
    for (int k = 1; k < l; ++k) {
        const double pp = xi * std::sqrt(2.0 / double(k + 1)) * p -
                          std::sqrt(double(k) / double(k + 1)) * pm;
        pm = p;
        p = pp;
    }
    return p;
}

/** sqrt(2^l l!), the ratio H_l e^{-xi^2/2} / phi_l. */
inline double hermite_norm_ratio(int l) {
    double r = 1.0;
    for (int k = 1; k <= l; ++k)
        r *= 2.0 * k;
    return std::sqrt(r);
}

} // namespace osclab

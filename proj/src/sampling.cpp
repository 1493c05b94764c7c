#include "osclab/sampling.hpp"

#include <cmath>
#include <random>

namespace osclab {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t hash_label(const char* label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char* p = label; *p; ++p) {
        h ^= std::uint64_t(static_cast<unsigned char>(*p));
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

Eigen::Vector3d truncated_gaussian(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::Vector3d xi;
    for (int a = 0; a < 3; ++a) {
        double v = normal(rng);
        while (std::abs(v) > 3.0)
            v = normal(rng);
        xi(a) = v;
    }
    return xi;
}

Eigen::Vector3d tail_direction(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::Vector3d dir;
    do {
        dir = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
    } while (dir.norm() < 1e-8);
    return dir.normalized();
}

} // namespace

std::vector<FourVector> sample_rel_events(const OscillatorState& state, int count,
                                          std::uint64_t seed) {
    if (count < 1)
        throw std::domain_error("sample_rel_events: count must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> tdist(-2.0, 2.0);
    const FrameGeometry geom(state.momentum(), state.spec().omega_big);

    std::vector<FourVector> out;
    out.reserve(std::size_t(count));
    for (int k = 0; k < count; ++k) {
        const Eigen::Vector3d xi =
            (k % 8 == 7) ? Eigen::Vector3d(5.0 * tail_direction(rng)) : truncated_gaussian(rng);
        const double t = tdist(rng) / geom.sqrt_omega;
        out.push_back(geom.event_of(xi, t));
    }
    return out;
}

std::vector<FourVector> sample_com_events(const OscillatorState& state, int count,
                                          std::uint64_t seed) {
    if (count < 1)
        throw std::domain_error("sample_com_events: count must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> span(-2.0, 2.0);
    const double scale = 1.0 / std::sqrt(state.spec().omega_big);

    std::vector<FourVector> out;
    out.reserve(std::size_t(count));
    for (int k = 0; k < count; ++k) {
        FourVector x;
        for (int mu = 0; mu < 4; ++mu)
            x[mu] = scale * span(rng);
        out.push_back(x);
    }
    return out;
}

} // namespace osclab

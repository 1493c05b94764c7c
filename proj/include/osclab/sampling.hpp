#pragma once

#include <cstdint>
#include <vector>

#include "osclab/fields.hpp"
#include "osclab/four_vector.hpp"
#include "osclab/oscillator.hpp"

namespace osclab {

/** Deterministic seed mixing (splitmix64 over a running hash). */
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);
std::uint64_t hash_label(const char* label);

/**
 * Deterministic sample events for one state: oscillator arguments drawn
 * from a Gaussian truncated to |xi_a| <= 3, every eighth point pushed to
 * the |xi| = 5 tail, lab time within two oscillator periods of the slice.
 * Mapped to lab coordinates through the state's frame geometry.
 */
std::vector<FourVector> sample_rel_events(const OscillatorState& state, int count,
                                          std::uint64_t seed);

/** Sample center-of-momentum events on the scale 1/sqrt(Omega). */
std::vector<FourVector> sample_com_events(const OscillatorState& state, int count,
                                          std::uint64_t seed);

} // namespace osclab

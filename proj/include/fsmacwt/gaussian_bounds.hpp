#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "fsmacwt/channel_models.hpp"
#include "fsmacwt/markov_state.hpp"
#include "fsmacwt/power.hpp"
#include "fsmacwt/region_geometry.hpp"

namespace fsmacwt {

/**
 * Gaussian bound families.
 *
 *  SIn      inner bound without feedback
 *  SOut     outer bound without feedback
 *  SfIn     inner bound with output feedback (secret-key term)
 *  SfOut    outer bound with output feedback
 *  CapNoEve no-eavesdropper stand-in: SfIn individual caps, sum without penalty or key
 */
enum class BoundKind { SIn, SOut, SfIn, SfOut, CapNoEve };

inline constexpr std::array<BoundKind, 5> kAllBoundKinds = {BoundKind::SIn, BoundKind::SOut, BoundKind::SfIn,
                                                            BoundKind::SfOut, BoundKind::CapNoEve};

std::string to_string(BoundKind kind);
/// Case-sensitive inverse of to_string; throws ConfigError on unknown names.
BoundKind parse_bound_kind(std::string_view name);

/// True for the kinds carrying an eavesdropper penalty.
bool is_secrecy_kind(BoundKind kind);

/**
 * Unclamped caps in bits. `sum_alt` is the second argument of the outer
 * min for SfOut and the sum without the secret-key term for SfIn; for the
 * other kinds it equals `sum`.
 */
struct RateTriple {
  double r1 = 0.0;
  double r2 = 0.0;
  double sum = 0.0;
  double sum_alt = 0.0;
};

/// Per-state integrand at delayed states (t1, t2) and current state s.
RateTriple per_state_terms(const GaussianFadingChannel& channel, const PowerAllocation& alloc, std::size_t t1,
                           std::size_t t2, std::size_t s, BoundKind kind);

/// Expectation of the per-state integrands under `law`, before clamping and before the SfOut min.
RateTriple expected_terms(const GaussianFadingChannel& channel, const DelayedJointLaw& law,
                          const PowerAllocation& alloc, BoundKind kind);

/// Clamped caps: SfOut takes the min of its two expectations; every component is then floored at 0.
RegionBounds expected_bounds(const GaussianFadingChannel& channel, const DelayedJointLaw& law,
                             const PowerAllocation& alloc, BoundKind kind);

RegionBounds expected_bounds(const GaussianFadingChannel& channel, const MarkovChain& chain, std::int64_t d1,
                             std::int64_t d2, const PowerAllocation& alloc, BoundKind kind);

/// Folds an expectation into final caps (SfOut min, then clamp at 0).
RegionBounds finalize(const RateTriple& expected, BoundKind kind);

}  // namespace fsmacwt

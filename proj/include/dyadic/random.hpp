#pragma once

#include <cstdint>

#include "dyadic/node_id.hpp"

namespace dyadic {

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Sub-seed for Monte Carlo sample k, independent of traversal order.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t k);

/// Map 64 bits to the open interval (0,1), symmetric around 0.5.
double unit_open(std::uint64_t bits);

/// Inverse of the standard normal CDF (Wichura's AS 241 rational
/// approximations, double-precision branch).
double inverse_normal_cdf(double p);

/// Standard normal draw keyed by (seed, node); identical on every call.
double node_gaussian(std::uint64_t seed, NodeId node);

}  // namespace dyadic

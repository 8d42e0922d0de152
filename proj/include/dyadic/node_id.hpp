#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace dyadic {

// Depth cap keeping cell indices and serialized values exact in 64-bit
// integers and doubles.
inline constexpr int kMaxDepth = 52;

/// Address of a set in the binary set system: scale = distance from the
/// root, index = left-to-right position in [0, 2^scale).
struct NodeId {
    std::uint32_t scale = 0;
    std::uint64_t index = 0;

    friend auto operator<=>(const NodeId&, const NodeId&) = default;

    NodeId left() const { return {scale + 1, 2 * index}; }
    NodeId right() const { return {scale + 1, 2 * index + 1}; }
    NodeId parent() const { return {scale - 1, index / 2}; }
    bool is_left_child() const { return (index & 1u) == 0; }
    bool is_root() const { return scale == 0; }

    bool valid() const {
        return scale <= kMaxDepth && index < (std::uint64_t{1} << scale);
    }

    std::string str() const {
        return "(" + std::to_string(scale) + "," + std::to_string(index) + ")";
    }
};

inline std::uint64_t cells_at(int scale) { return std::uint64_t{1} << scale; }

}  // namespace dyadic

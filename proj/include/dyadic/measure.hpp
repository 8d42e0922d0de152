#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <vector>

#include "dyadic/errors.hpp"
#include "dyadic/node_id.hpp"

namespace dyadic {

// Dense reconstruction cap: 2^28 doubles = 2 GiB is already past desk scale.
inline constexpr int kMaxDenseDepth = 28;

/// Non-negative masses on all 2^depth cells at scale `depth`, left to right.
/// A finite-scale dyadic measure is exactly this plus nothing else.
struct LeafMeasure {
    int depth = 0;
    Eigen::ArrayXd masses;  // size 2^depth

    double total() const { return masses.sum(); }
};

/// Sparse leaf masses: only nonzero cells stored, absent = 0.
struct SparseLeafMeasure {
    int depth = 0;
    std::map<std::uint64_t, double> cells;  // cell index at scale `depth` -> mass

    double total() const {
        double t = 0.0;
        for (const auto& [i, m] : cells) t += m;
        return t;
    }

    LeafMeasure dense() const {
        if (depth > kMaxDenseDepth) throw ShapeError("sparse measure too deep to densify");
        LeafMeasure out;
        out.depth = depth;
        out.masses = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(cells_at(depth)));
        for (const auto& [i, m] : cells) out.masses[static_cast<Eigen::Index>(i)] = m;
        return out;
    }
};

/// Total mass mu(X) plus product coefficient a_S for every non-leaf node of
/// the measure's support (scales 0..depth-1). Absent nodes carry 0, which by
/// the zero-measure convention is exact for zero-mass subtrees.
struct CoefficientTree {
    int depth = 0;
    double total_mass = 0.0;
    std::map<NodeId, double> coeffs;

    double coeff(NodeId n) const {
        auto it = coeffs.find(n);
        return it == coeffs.end() ? 0.0 : it->second;
    }
};

/// Product coefficients x_1..x_n for a node with n children; sum is 0.
struct NaryCoefficients {
    std::vector<double> values;
};

enum class ViolationKind { CoefficientBound, ZeroConvention, NonPositiveTotal, BadNode };

struct Violation {
    ViolationKind kind;
    NodeId node;
    std::string detail;
};

}  // namespace dyadic

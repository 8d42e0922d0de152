#include "dyadic/transforms.hpp"

#include <cmath>
#include <string>

namespace dyadic {

namespace {

void check_depth(int depth) {
    if (depth < 0 || depth > kMaxDepth)
        throw DomainError("depth must be in [0, " + std::to_string(kMaxDepth) + "], got " +
                          std::to_string(depth));
}

}  // namespace

double coefficient_from_masses(double mass_left, double mass_right) {
    if (mass_left < 0.0 || mass_right < 0.0 || std::isnan(mass_left) || std::isnan(mass_right))
        throw DomainError("cell masses must be non-negative");
    const double total = mass_left + mass_right;
    if (total == 0.0) return 0.0;
    return (mass_left - mass_right) / total;
}

CoefficientTree coefficients_from_leaves(const LeafMeasure& leaves) {
    check_depth(leaves.depth);
    if (leaves.masses.size() != static_cast<Eigen::Index>(cells_at(leaves.depth)))
        throw ShapeError("leaf vector size does not match 2^depth");
    if ((leaves.masses < 0.0).any()) throw DomainError("leaf masses must be non-negative");

    CoefficientTree tree;
    tree.depth = leaves.depth;

    // Node masses bottom-up, one scale at a time.
    Eigen::ArrayXd level = leaves.masses;
    for (int s = leaves.depth - 1; s >= 0; --s) {
        const Eigen::Index n = static_cast<Eigen::Index>(cells_at(s));
        Eigen::ArrayXd up(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double left = level[2 * i];
            const double right = level[2 * i + 1];
            up[i] = left + right;
            if (up[i] > 0.0)
                tree.coeffs.emplace(NodeId{static_cast<std::uint32_t>(s),
                                           static_cast<std::uint64_t>(i)},
                                    (left - right) / up[i]);
        }
        level.swap(up);
    }
    tree.total_mass = level[0];
    if (!(tree.total_mass > 0.0)) throw MeasureError("measure has zero total mass");
    return tree;
}

CoefficientTree coefficients_from_leaves(const SparseLeafMeasure& leaves) {
    check_depth(leaves.depth);
    for (const auto& [i, m] : leaves.cells) {
        if (i >= cells_at(leaves.depth)) throw ShapeError("cell index out of range");
        if (m < 0.0 || std::isnan(m)) throw DomainError("leaf masses must be non-negative");
    }

    CoefficientTree tree;
    tree.depth = leaves.depth;

    std::map<std::uint64_t, double> level;
    for (const auto& [i, m] : leaves.cells)
        if (m > 0.0) level.emplace(i, m);

    for (int s = leaves.depth - 1; s >= 0; --s) {
        std::map<std::uint64_t, double> up;
        for (auto it = level.begin(); it != level.end();) {
            const std::uint64_t parent = it->first / 2;
            double left = 0.0, right = 0.0;
            if (it->first == 2 * parent) {
                left = it->second;
                ++it;
                if (it != level.end() && it->first == 2 * parent + 1) {
                    right = it->second;
                    ++it;
                }
            } else {
                right = it->second;
                ++it;
            }
            const double mass = left + right;
            up.emplace(parent, mass);
            tree.coeffs.emplace(NodeId{static_cast<std::uint32_t>(s), parent},
                                (left - right) / mass);
        }
        level.swap(up);
    }
    tree.total_mass = level.empty() ? 0.0 : level.begin()->second;
    if (!(tree.total_mass > 0.0)) throw MeasureError("measure has zero total mass");
    return tree;
}

LeafMeasure reconstruct_leaves(const CoefficientTree& tree, int target_depth) {
    check_depth(tree.depth);
    if (target_depth < 0 || target_depth > tree.depth)
        throw ShapeError("target depth " + std::to_string(target_depth) +
                         " exceeds tree depth " + std::to_string(tree.depth));
    if (target_depth > kMaxDenseDepth) throw ShapeError("target depth too large for dense output");
    if (!(tree.total_mass > 0.0)) throw MeasureError("tree has non-positive total mass");

    Eigen::ArrayXd level(1);
    level[0] = tree.total_mass;
    for (int s = 0; s < target_depth; ++s) {
        const Eigen::Index n = static_cast<Eigen::Index>(cells_at(s));
        Eigen::ArrayXd down(2 * n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = tree.coeff({static_cast<std::uint32_t>(s),
                                         static_cast<std::uint64_t>(i)});
            if (std::abs(a) > 1.0)
                throw DomainError("coefficient out of [-1,1] at (" + std::to_string(s) + "," +
                                  std::to_string(i) + ")");
            down[2 * i] = 0.5 * (1.0 + a) * level[i];
            down[2 * i + 1] = 0.5 * (1.0 - a) * level[i];
        }
        level.swap(down);
    }

    LeafMeasure out;
    out.depth = target_depth;
    out.masses = std::move(level);
    return out;
}

double node_mass(const CoefficientTree& tree, NodeId node) {
    if (!node.valid() || static_cast<int>(node.scale) > tree.depth)
        throw DomainError("node " + node.str() + " outside tree of depth " +
                          std::to_string(tree.depth));
    double mass = tree.total_mass;
    // Walk the path root -> node, branching by the bits of node.index.
    for (std::uint32_t s = 0; s < node.scale; ++s) {
        const std::uint64_t prefix = node.index >> (node.scale - s);
        const bool go_right = (node.index >> (node.scale - s - 1)) & 1u;
        const double a = tree.coeff({s, prefix});
        mass *= 0.5 * (go_right ? (1.0 - a) : (1.0 + a));
    }
    return mass;
}

CoefficientTree dirac_coefficients(double x, int depth) {
    check_depth(depth);
    if (!(x >= 0.0 && x < 1.0)) throw DomainError("dirac position must lie in [0,1)");

    CoefficientTree tree;
    tree.depth = depth;
    tree.total_mass = 1.0;

    // Peel binary digits of x; y stays the fractional part of 2^s x exactly.
    double y = x;
    std::uint64_t index = 0;
    for (int s = 0; s < depth; ++s) {
        const bool right = y >= 0.5;
        tree.coeffs.emplace(NodeId{static_cast<std::uint32_t>(s), index}, right ? -1.0 : 1.0);
        y = 2.0 * y - (right ? 1.0 : 0.0);
        index = 2 * index + (right ? 1 : 0);
    }
    return tree;
}

NaryCoefficients nary_coefficients(std::span<const double> child_masses) {
    const std::size_t n = child_masses.size();
    if (n < 2) throw DomainError("n-ary coefficients need at least 2 children");
    double total = 0.0;
    for (double m : child_masses) {
        if (m < 0.0 || std::isnan(m)) throw DomainError("child masses must be non-negative");
        total += m;
    }
    NaryCoefficients out;
    out.values.assign(n, 0.0);
    if (total == 0.0) return out;  // convention extended from the binary case
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = static_cast<double>(n) * child_masses[i] / total - 1.0;
    return out;
}

std::vector<Violation> validate(const CoefficientTree& tree) {
    std::vector<Violation> out;
    if (!(tree.total_mass > 0.0))
        out.push_back({ViolationKind::NonPositiveTotal, NodeId{},
                       "total mass must be positive, got " + std::to_string(tree.total_mass)});
    for (const auto& [node, a] : tree.coeffs) {
        if (!node.valid() || static_cast<int>(node.scale) >= tree.depth) {
            out.push_back({ViolationKind::BadNode, node, "node outside tree"});
            continue;
        }
        if (std::abs(a) > 1.0 || std::isnan(a)) {
            out.push_back({ViolationKind::CoefficientBound, node,
                           "coefficient " + std::to_string(a) + " outside [-1,1]"});
            continue;
        }
        if (a != 0.0 && tree.total_mass > 0.0 && node_mass(tree, node) == 0.0)
            out.push_back({ViolationKind::ZeroConvention, node,
                           "nonzero coefficient below a zero-mass node"});
    }
    return out;
}

}  // namespace dyadic

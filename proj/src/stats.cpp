#include "dyadic/stats.hpp"

#include <cmath>
#include <string>

namespace dyadic {

ScaleWeightedNorm variance_degree2(const CoefficientTree& tree) {
    ScaleWeightedNorm out;
    out.per_scale_terms.assign(static_cast<std::size_t>(std::max(tree.depth, 0)), 0.0);
    for (const auto& [node, a] : tree.coeffs) {
        if (static_cast<int>(node.scale) >= tree.depth)
            throw ShapeError("coefficient at " + node.str() + " outside tree of depth " +
                             std::to_string(tree.depth));
        out.per_scale_terms[node.scale] += a * a;
    }
    for (std::size_t s = 0; s < out.per_scale_terms.size(); ++s) {
        out.per_scale_terms[s] = std::ldexp(out.per_scale_terms[s], -static_cast<int>(s));
        out.value += out.per_scale_terms[s];
    }
    return out;
}

double single_scale_variance(double a, int scale) {
    if (std::abs(a) > 1.0 || std::isnan(a)) throw DomainError("coefficient outside [-1,1]");
    if (scale < 0) throw DomainError("scale must be non-negative");
    return std::ldexp(a * a, -scale);
}

double norm_distance(const CoefficientTree& a, const CoefficientTree& b) {
    if (a.depth != b.depth)
        throw ShapeError("depth mismatch: " + std::to_string(a.depth) + " vs " +
                         std::to_string(b.depth));
    double sum = 0.0;
    auto ia = a.coeffs.begin();
    auto ib = b.coeffs.begin();
    // Merge walk over the two sparse supports; absent entries are 0.
    while (ia != a.coeffs.end() || ib != b.coeffs.end()) {
        NodeId node;
        double va = 0.0, vb = 0.0;
        if (ib == b.coeffs.end() || (ia != a.coeffs.end() && ia->first < ib->first)) {
            node = ia->first;
            va = ia->second;
            ++ia;
        } else if (ia == a.coeffs.end() || ib->first < ia->first) {
            node = ib->first;
            vb = ib->second;
            ++ib;
        } else {
            node = ia->first;
            va = ia->second;
            vb = ib->second;
            ++ia;
            ++ib;
        }
        const double d = va - vb;
        sum += std::ldexp(d * d, -static_cast<int>(node.scale));
    }
    return std::sqrt(sum);
}

CoefficientTree average_coefficients(std::span<const CoefficientTree> trees) {
    if (trees.empty()) throw DomainError("cannot average an empty list of trees");
    const int depth = trees.front().depth;
    for (const auto& t : trees)
        if (t.depth != depth) throw ShapeError("averaging trees of unequal depth");

    CoefficientTree out;
    out.depth = depth;
    const double n = static_cast<double>(trees.size());
    for (const auto& t : trees) {
        out.total_mass += t.total_mass / n;
        for (const auto& [node, a] : t.coeffs) out.coeffs[node] += a / n;
    }
    return out;
}

Eigen::VectorXd weighted_feature_vector(const CoefficientTree& tree, int max_scale) {
    if (max_scale < 0 || max_scale > tree.depth - 1)
        throw ShapeError("max scale " + std::to_string(max_scale) + " exceeds tree depth " +
                         std::to_string(tree.depth) + " - 1");
    const Eigen::Index len = static_cast<Eigen::Index>((std::uint64_t{2} << max_scale) - 1);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(len);
    for (const auto& [node, a] : tree.coeffs) {
        if (static_cast<int>(node.scale) > max_scale) continue;
        const Eigen::Index offset = static_cast<Eigen::Index>(cells_at(node.scale)) - 1;
        v[offset + static_cast<Eigen::Index>(node.index)] =
            a * std::sqrt(std::ldexp(1.0, -static_cast<int>(node.scale)));
    }
    return v;
}

}  // namespace dyadic

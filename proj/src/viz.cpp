#include "dyadic/viz.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dyadic {

namespace {
// 2^21+1 knots / sectors is already far beyond what an SVG can show.
constexpr int kMaxRenderScale = 20;
}  // namespace

std::string to_string(KnotCategory c) {
    switch (c) {
        case KnotCategory::Unlabeled: return "unlabeled";
        case KnotCategory::OnlyA: return "onlyA";
        case KnotCategory::OnlyB: return "onlyB";
        case KnotCategory::Mixed: return "mixed";
        case KnotCategory::Empty: return "empty";
        case KnotCategory::Endpoint: return "endpoint";
    }
    return "?";
}

WeldCurve pseudo_welding_curve(const CoefficientTree& tree, int max_scale,
                               const std::map<NodeId, KnotCategory>* labels) {
    if (max_scale < 0 || max_scale > tree.depth - 1)
        throw ShapeError("max scale " + std::to_string(max_scale) + " exceeds tree depth " +
                         std::to_string(tree.depth) + " - 1");
    if (max_scale > kMaxRenderScale) throw DomainError("max scale too large to render");

    auto label_of = [&](NodeId n) {
        if (!labels) return KnotCategory::Unlabeled;
        auto it = labels->find(n);
        return it == labels->end() ? KnotCategory::Empty : it->second;
    };

    WeldCurve curve;
    curve.knots.push_back({0.0, 0.0, NodeId{0, 0}, KnotCategory::Endpoint});
    curve.knots.push_back({1.0, 0.0, NodeId{0, 0}, KnotCategory::Endpoint});

    for (int s = 0; s <= max_scale; ++s) {
        const double weight = std::ldexp(1.0, -s);
        std::vector<WeldKnot> next;
        next.reserve(2 * curve.knots.size());
        // Segment j at stage s corresponds to node (s, j), left to right.
        for (std::size_t j = 0; j + 1 < curve.knots.size(); ++j) {
            const WeldKnot& p = curve.knots[j];
            const WeldKnot& q = curve.knots[j + 1];
            const NodeId node{static_cast<std::uint32_t>(s), static_cast<std::uint64_t>(j)};
            const double a = tree.coeff(node);

            const double dx = q.x - p.x;
            const double dy = q.y - p.y;
            const double len = std::hypot(dx, dy);
            // Left normal of the segment direction, unit length.
            const double nx = -dy / len;
            const double ny = dx / len;
            const double disp = a * weight * 0.5 * len;

            WeldKnot mid;
            mid.x = 0.5 * (p.x + q.x) + disp * nx;
            mid.y = 0.5 * (p.y + q.y) + disp * ny;
            mid.node = node;
            mid.category = label_of(node);

            next.push_back(p);
            next.push_back(mid);
        }
        next.push_back(curve.knots.back());
        curve.knots.swap(next);
    }
    return curve;
}

std::map<NodeId, KnotCategory> knot_labels(const LabeledSparseLeafMeasure& cells) {
    std::map<NodeId, KnotCategory> out;
    // Aggregate two-class counts bottom-up from the leaf cells.
    std::map<std::uint64_t, std::array<std::int64_t, 2>> level = cells.counts;
    for (int s = cells.depth; s >= 0; --s) {
        for (const auto& [index, c] : level) {
            KnotCategory cat;
            if (c[0] > 0 && c[1] > 0)
                cat = KnotCategory::Mixed;
            else if (c[0] > 0)
                cat = KnotCategory::OnlyA;
            else if (c[1] > 0)
                cat = KnotCategory::OnlyB;
            else
                cat = KnotCategory::Empty;
            out.emplace(NodeId{static_cast<std::uint32_t>(s), index}, cat);
        }
        if (s == 0) break;
        std::map<std::uint64_t, std::array<std::int64_t, 2>> up;
        for (const auto& [index, c] : level) {
            auto& parent = up[index / 2];
            parent[0] += c[0];
            parent[1] += c[1];
        }
        level.swap(up);
    }
    return out;
}

DayWheel day_wheel(const CoefficientTree& tree, int max_scale) {
    if (max_scale < 0 || max_scale > tree.depth - 1)
        throw ShapeError("max scale " + std::to_string(max_scale) + " exceeds tree depth " +
                         std::to_string(tree.depth) + " - 1");
    if (max_scale > kMaxRenderScale) throw DomainError("max scale too large to render");
    DayWheel wheel;
    wheel.max_scale = max_scale;
    wheel.sectors.resize(static_cast<std::size_t>(max_scale) + 1);
    for (int s = 0; s <= max_scale; ++s) {
        auto& ring = wheel.sectors[static_cast<std::size_t>(s)];
        ring.assign(static_cast<std::size_t>(cells_at(s)), 0.0);
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const double a = tree.coeff({static_cast<std::uint32_t>(s), i});
            ring[i] = std::clamp(a, -1.0, 1.0);
        }
    }
    return wheel;
}

}  // namespace dyadic

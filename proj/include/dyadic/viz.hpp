#pragma once

#include <map>
#include <string>
#include <vector>

#include "dyadic/ingest.hpp"
#include "dyadic/measure.hpp"

namespace dyadic {

enum class KnotCategory { Unlabeled, OnlyA, OnlyB, Mixed, Empty, Endpoint };

std::string to_string(KnotCategory c);

struct WeldKnot {
    double x = 0.0, y = 0.0;
    NodeId node;
    KnotCategory category = KnotCategory::Unlabeled;
};

/// Piecewise linear pseudo-welding curve between (0,0) and (1,0); after
/// stage s there are 2^(s+1)+1 knots.
struct WeldCurve {
    std::vector<WeldKnot> knots;
};

/// Snowflake-style construction: at stage s the segment of node S is split
/// at its midpoint, displaced along the segment's left normal by
/// a_S * 2^-s * |segment|/2.
WeldCurve pseudo_welding_curve(const CoefficientTree& tree, int max_scale,
                               const std::map<NodeId, KnotCategory>* labels = nullptr);

/// Node categories from two-class cell counts: OnlyA / OnlyB / Mixed / Empty
/// for every node with points; absent nodes are Empty.
std::map<NodeId, KnotCategory> knot_labels(const LabeledSparseLeafMeasure& cells);

/// Annular coefficient display: ring s carries 2^s equal sectors colored by
/// the scale-s coefficients, scale 0 in the center.
struct DayWheel {
    int max_scale = 0;
    std::vector<std::vector<double>> sectors;  // sectors[s][i], clamped to [-1,1]
};

DayWheel day_wheel(const CoefficientTree& tree, int max_scale);

}  // namespace dyadic

#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dyadic/measure.hpp"

namespace dyadic {

/// Binary set system on a d-dimensional box: cells are produced by
/// successively halving along dim_order (cycled), depth halvings in total.
struct HypercubeSystem {
    int dim = 1;
    std::vector<std::pair<double, double>> bounds;  // per-dim (min, max)
    std::vector<int> dim_order;                     // 0-based, cycled
    int depth = 0;

    void check() const;
    /// 0, 1, ..., d-1 cycling.
    static HypercubeSystem unit_cube(int dim, int depth);
};

/// Axis-aligned bounds of one cell, in the system's original coordinates.
/// Cells are half-open [lo, hi) per dimension except at the outer maximum,
/// where they are closed.
struct CellBounds {
    Eigen::ArrayXd lo, hi;
    std::vector<bool> closed_top;  // hi touches the outer bound in this dim
};

CellBounds cell_bounds(const HypercubeSystem& system, int scale, std::uint64_t index);
bool cell_contains(const CellBounds& cell, Eigen::Ref<const Eigen::VectorXd> point);

/// Leaf cell index of a point after `system.depth` halvings.
std::uint64_t locate_cell(const HypercubeSystem& system, Eigen::Ref<const Eigen::VectorXd> point,
                          std::size_t point_index = 0);

/// Non-negative step-function masses on the 2^depth cells of [0,1].
/// Shorter inputs are resampled (piecewise constant, mass preserving),
/// longer ones aggregated by summing within cells.
LeafMeasure series_to_measure(std::span<const double> values, int depth);

/// Counting measure: each point adds mass 1 to the cell containing it.
/// Rows of `points` are points, columns are dimensions.
SparseLeafMeasure points_to_measure(const Eigen::MatrixXd& points, const HypercubeSystem& system);

/// Counting measure plus two-class point counts per cell.
struct LabeledSparseLeafMeasure {
    int depth = 0;
    std::map<std::uint64_t, std::array<std::int64_t, 2>> counts;  // cell -> (class 0, class 1)
    std::array<std::string, 2> class_names;

    SparseLeafMeasure measure() const;
};

LabeledSparseLeafMeasure labeled_points_to_measure(const Eigen::MatrixXd& points,
                                                   std::span<const std::string> labels,
                                                   const HypercubeSystem& system);

/// Bounds fit to one dataset (per-dim min/max, degenerate dims padded).
HypercubeSystem fit_bounds(const Eigen::MatrixXd& points, int depth,
                           std::span<const int> dim_order = {});

/// Bounds for several datasets ingested together: per-dataset translation,
/// common per-dim scale. With median_align the per-dim medians of every
/// dataset are sent to the same location and the common scale is the largest
/// one keeping all datasets inside the cube.
std::vector<HypercubeSystem> fit_common_systems(std::span<const Eigen::MatrixXd> datasets,
                                                int depth, std::span<const int> dim_order,
                                                bool median_align);

enum class Comparator { Lt, Le, Gt, Ge, Eq, Ne };

Comparator comparator_from_string(const std::string& s);
std::string to_string(Comparator c);

struct FeaturePredicate {
    std::string name;
    std::function<bool(Eigen::Ref<const Eigen::VectorXd>)> test;
};

/// point[column] <cmp> value; throws inside test() if column is out of range.
FeaturePredicate threshold_predicate(std::string name, int column, Comparator cmp, double value);

/// Ordered predicates F_1, F_2, ...; level-i nodes split by F_{i+1}
/// (left = F intersect S). A predicate and its complement may not both
/// be listed.
struct FeatureSystem {
    std::vector<FeaturePredicate> predicates;
    // Set for threshold predicates so complement pairs can be rejected.
    struct ThresholdSpec {
        int column;
        Comparator cmp;
        double value;
    };
    std::vector<std::optional<ThresholdSpec>> specs;

    void check() const;
};

CoefficientTree feature_system_measure(const Eigen::MatrixXd& points, const FeatureSystem& system);

}  // namespace dyadic

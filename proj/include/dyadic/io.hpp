#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dyadic/ingest.hpp"
#include "dyadic/measure.hpp"
#include "dyadic/noise.hpp"
#include "dyadic/viz.hpp"

namespace dyadic {

/// Shortest-exact decimal with up to 17 significant digits; parsing it back
/// recovers the identical double.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// {"depth": d, "totalMass": m, "coeffs": [[scale, index, a], ...]} with
/// coefficients in lexicographic order. `provenance` is emitted as an extra
/// object when non-empty and ignored on read.
std::string coefficient_tree_to_json(const CoefficientTree& tree,
                                     const std::string& provenance = {});
CoefficientTree coefficient_tree_from_json(const std::string& text,
                                           const std::string& context = "json");

std::string leaf_measure_to_csv(const LeafMeasure& leaves, const std::string& header_comment = {});
std::string leaf_measure_to_json(const LeafMeasure& leaves);

/// One value per line; blank lines and '#' comments skipped. Errors carry
/// `context:line`.
std::vector<double> read_series_csv(const std::string& text, const std::string& context = "csv");

struct PointCloud {
    Eigen::MatrixXd points;            // rows = points, cols = numeric columns
    std::vector<std::string> labels;   // empty when no label column was requested
};

/// Comma-separated numeric columns; `label_column` (1-based) is extracted as
/// the label and excluded from the coordinates.
PointCloud read_points_csv(const std::string& text, int label_column = 0,
                           const std::string& context = "csv");

std::string noise_params_to_json(const NoiseParams& params);
NoiseParams noise_params_from_json(const std::string& text, const std::string& context = "json");

/// {"predicates": [{"name": ..., "column": 1-based, "op": "le", "value": x}, ...]}
FeatureSystem feature_system_from_json(const std::string& text,
                                       const std::string& context = "json");

std::string node_stats_to_csv(std::span<const NodeStat> stats,
                              const std::string& header_comment = {});

/// One vector per row, columns in lexicographic (scale, index) coefficient
/// order; the ordering is documented in the header comment.
std::string feature_vectors_to_csv(std::span<const Eigen::VectorXd> vectors, int max_scale,
                                   const std::string& header_comment = {});

std::string knots_to_csv(const WeldCurve& curve, const std::string& header_comment = {});

}  // namespace dyadic

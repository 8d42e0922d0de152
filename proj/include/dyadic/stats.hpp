#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "dyadic/measure.hpp"

namespace dyadic {

/// ||mu||^2 = sum_s 2^-s sum_{scale(S)=s} a_S^2 with the per-scale breakdown.
struct ScaleWeightedNorm {
    double value = 0.0;
    std::vector<double> per_scale_terms;  // term s = 2^-s * sum of a^2 at scale s
};

/// Degree-2 variance approximation of the partial product measure; same
/// formula as the multi-scale variance norm.
ScaleWeightedNorm variance_degree2(const CoefficientTree& tree);

/// var((1 + a h_S) dy) = a^2 / 2^scale.
double single_scale_variance(double a, int scale);

/// sqrt(sum_s 2^-s sum_S (a_S - b_S)^2). Depths must match; total masses are
/// not compared here (callers warn on mismatch), the distance is on
/// coefficient vectors only.
double norm_distance(const CoefficientTree& a, const CoefficientTree& b);

/// Coefficient-wise arithmetic mean; total mass is the mean of the inputs'.
CoefficientTree average_coefficients(std::span<const CoefficientTree> trees);

/// Coefficients for scales 0..max_scale flattened in lexicographic order,
/// scale s weighted by 2^(-s/2); Euclidean norm equals the truncated
/// multi-scale variance norm.
Eigen::VectorXd weighted_feature_vector(const CoefficientTree& tree, int max_scale);

}  // namespace dyadic

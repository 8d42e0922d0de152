#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "dyadic/measure.hpp"

namespace dyadic {

/// Noise parameters sigma_S. depth = leaf scale: Gaussian draws happen at
/// the non-leaf scales 0..depth-1 and the sampled field is piecewise
/// constant on the 2^depth scale-depth cells. Absent entries mean sigma = 0.
struct NoiseParams {
    enum class Mode { PerScale, PerNode };

    Mode mode = Mode::PerScale;
    int depth = 0;
    std::map<int, double> scale_sigmas;      // PerScale: scale -> sigma
    std::map<NodeId, double> node_sigmas;    // PerNode: node -> sigma

    double sigma(NodeId node) const;
    double sup_sigma_squared() const;

    static NoiseParams per_scale_uniform(int depth, double sigma);
};

struct KahaneCheck {
    bool ok = false;            // sup sigma^2 strictly below 2 ln 2
    double margin = 0.0;        // 2 ln 2 - sup sigma^2
    double sup_sigma_squared = 0.0;
};

/// Theorem condition 1: sup sigma^2 < 2 log 2.
KahaneCheck check_kahane(const NoiseParams& params);

/// Theorem condition 2: every |a_S| <= 1 - epsilon and every sigma^2 < epsilon/2.
bool check_perturbation(const CoefficientTree& tree, const NoiseParams& params, double epsilon);

/// One sampled multiscale noise field: per leaf cell the accumulated
/// sum over ancestors of (b_S h_S - sigma_S^2/2), plus E = integral of
/// exp(...) against dy (cell weight 2^-depth).
struct NoiseField {
    int depth = 0;
    Eigen::ArrayXd log_multipliers;  // size 2^depth
    double normalization = 0.0;      // E = sum_i exp(lm_i) * 2^-depth

    /// Probability measure exp(lm) dy / E as leaf masses.
    LeafMeasure normalized_measure() const;
};

/// Test seam: supplies Z_S per node; the seeded overload uses the
/// counter-based generator from random.hpp.
using GaussianSource = std::function<double(NodeId)>;

NoiseField sample_noise_field(const NoiseParams& params, const GaussianSource& gaussians);
NoiseField sample_noise_field(const NoiseParams& params, std::uint64_t seed);

/// Multiply the reconstructed leaf measure by the sampled field and re-derive
/// coefficients; the output keeps the input's total mass exactly. Theorem
/// condition violations are the caller's concern (check_* are advisory).
CoefficientTree apply_noise(const CoefficientTree& tree, const NoiseParams& params,
                            std::uint64_t seed);

struct NodeStat {
    NodeId node;
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
    double std_error = 0.0; // sqrt(variance / n)
};

/// Monte Carlo over sample streams derived from (seed, k): per-node mean and
/// variance of the noisy coefficients across n_samples realizations, for
/// every node stored in the input tree.
std::vector<NodeStat> noisy_coefficient_stats(const CoefficientTree& tree,
                                              const NoiseParams& params, int n_samples,
                                              std::uint64_t seed);

}  // namespace dyadic

#pragma once

#include <span>
#include <vector>

#include "dyadic/measure.hpp"

namespace dyadic {

/// a = (L - R)/(L + R); 0 when both masses are 0 (zero-measure convention).
double coefficient_from_masses(double mass_left, double mass_right);

/// Bottom-up transform: sum children to get node masses, solve for each a_S.
/// Stores a coefficient for every non-leaf node with positive mass.
CoefficientTree coefficients_from_leaves(const LeafMeasure& leaves);
CoefficientTree coefficients_from_leaves(const SparseLeafMeasure& leaves);

/// Top-down partial product: mass(L) = (1+a)/2 * mass(S), mass(R) = (1-a)/2 * mass(S).
LeafMeasure reconstruct_leaves(const CoefficientTree& tree, int target_depth);

/// Partial evaluation of the product along one root-to-node path.
double node_mass(const CoefficientTree& tree, NodeId node);

/// Dirac measure at x: +-1 on the dyadic path containing x, sign
/// (-1)^floor(2^(n+1) x), absent (0) elsewhere.
CoefficientTree dirac_coefficients(double x, int depth);

/// n-ary coefficients: x_i = n*mu(C_i)/mu(S) - 1, all x_i = 0 when mu(S) = 0.
NaryCoefficients nary_coefficients(std::span<const double> child_masses);

/// Diagnostic: coefficient bounds, zero-measure convention, positive total.
std::vector<Violation> validate(const CoefficientTree& tree);

}  // namespace dyadic

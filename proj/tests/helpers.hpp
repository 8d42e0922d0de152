#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dyadic/measure.hpp"
#include "dyadic/transforms.hpp"

namespace testutil {

inline bool close_rel(double a, double b, double tol = 1e-12) {
    const double diff = std::abs(a - b);
    const double mag = std::max(std::abs(a), std::abs(b));
    return diff <= tol * std::max(1.0, mag);
}

/// Random positive leaf measure; zero_prob cells are exactly 0.
inline dyadic::LeafMeasure random_leaves(int depth, std::mt19937_64& rng, double zero_prob = 0.0) {
    dyadic::LeafMeasure m;
    m.depth = depth;
    m.masses.resize(static_cast<Eigen::Index>(dyadic::cells_at(depth)));
    std::uniform_real_distribution<double> mass(0.0, 10.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool any = false;
    for (Eigen::Index i = 0; i < m.masses.size(); ++i) {
        if (u(rng) < zero_prob) {
            m.masses[i] = 0.0;
        } else {
            m.masses[i] = mass(rng);
            any = true;
        }
    }
    if (!any) m.masses[0] = 1.0;  // keep the measure positive
    return m;
}

/// Random dense coefficient tree with |a| <= amax.
inline dyadic::CoefficientTree random_tree(int depth, std::mt19937_64& rng, double amax = 1.0) {
    dyadic::CoefficientTree t;
    t.depth = depth;
    t.total_mass = 1.0;
    std::uniform_real_distribution<double> coeff(-amax, amax);
    for (int s = 0; s < depth; ++s)
        for (std::uint64_t i = 0; i < dyadic::cells_at(s); ++i)
            t.coeffs[{static_cast<std::uint32_t>(s), i}] = coeff(rng);
    return t;
}

/// Independent oracle for product coefficients: node masses summed directly
/// over leaf ranges (a different route than the implementation's pairwise
/// bottom-up pass).
inline dyadic::CoefficientTree oracle_coefficients(const dyadic::LeafMeasure& leaves) {
    dyadic::CoefficientTree t;
    t.depth = leaves.depth;
    auto range_mass = [&](int scale, std::uint64_t index) {
        const std::uint64_t width = dyadic::cells_at(leaves.depth - scale);
        double sum = 0.0;
        for (std::uint64_t i = index * width; i < (index + 1) * width; ++i)
            sum += leaves.masses[static_cast<Eigen::Index>(i)];
        return sum;
    };
    t.total_mass = range_mass(0, 0);
    for (int s = 0; s < leaves.depth; ++s) {
        for (std::uint64_t i = 0; i < dyadic::cells_at(s); ++i) {
            const double parent = range_mass(s, i);
            if (parent <= 0.0) continue;
            const double left = range_mass(s + 1, 2 * i);
            const double right = range_mass(s + 1, 2 * i + 1);
            t.coeffs[{static_cast<std::uint32_t>(s), i}] = (left - right) / parent;
        }
    }
    return t;
}

}  // namespace testutil

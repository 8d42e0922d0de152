#include "dyadic/noise.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "dyadic/random.hpp"
#include "dyadic/transforms.hpp"

namespace dyadic {

namespace {

constexpr double kKahaneBound = 2.0 * std::numbers::ln2;

void check_params(const NoiseParams& p) {
    if (p.depth < 0 || p.depth > kMaxDenseDepth)
        throw DomainError("noise depth must be in [0, " + std::to_string(kMaxDenseDepth) + "]");
    for (const auto& [s, sig] : p.scale_sigmas)
        if (sig < 0.0 || std::isnan(sig)) throw DomainError("sigma must be non-negative");
    for (const auto& [n, sig] : p.node_sigmas)
        if (sig < 0.0 || std::isnan(sig)) throw DomainError("sigma must be non-negative");
}

}  // namespace

double NoiseParams::sigma(NodeId node) const {
    if (mode == Mode::PerScale) {
        auto it = scale_sigmas.find(static_cast<int>(node.scale));
        return it == scale_sigmas.end() ? 0.0 : it->second;
    }
    auto it = node_sigmas.find(node);
    return it == node_sigmas.end() ? 0.0 : it->second;
}

double NoiseParams::sup_sigma_squared() const {
    double sup = 0.0;
    if (mode == Mode::PerScale) {
        for (const auto& [s, sig] : scale_sigmas)
            if (s >= 0 && s < depth) sup = std::max(sup, sig * sig);
    } else {
        for (const auto& [n, sig] : node_sigmas)
            if (static_cast<int>(n.scale) < depth) sup = std::max(sup, sig * sig);
    }
    return sup;
}

NoiseParams NoiseParams::per_scale_uniform(int depth, double sigma) {
    NoiseParams p;
    p.mode = Mode::PerScale;
    p.depth = depth;
    for (int s = 0; s < depth; ++s) p.scale_sigmas[s] = sigma;
    return p;
}

KahaneCheck check_kahane(const NoiseParams& params) {
    check_params(params);
    KahaneCheck out;
    out.sup_sigma_squared = params.sup_sigma_squared();
    out.margin = kKahaneBound - out.sup_sigma_squared;
    out.ok = out.sup_sigma_squared < kKahaneBound;
    return out;
}

bool check_perturbation(const CoefficientTree& tree, const NoiseParams& params, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in (0, 1]");
    check_params(params);
    for (const auto& [node, a] : tree.coeffs)
        if (std::abs(a) > 1.0 - epsilon) return false;
    return params.sup_sigma_squared() < 0.5 * epsilon;
}

NoiseField sample_noise_field(const NoiseParams& params, const GaussianSource& gaussians) {
    check_params(params);
    NoiseField field;
    field.depth = params.depth;

    // Walk scales top-down; each node contributes b h - sigma^2/2 to both
    // children, with h = +1 left, -1 right.
    Eigen::ArrayXd level = Eigen::ArrayXd::Zero(1);
    for (int s = 0; s < params.depth; ++s) {
        const Eigen::Index n = static_cast<Eigen::Index>(cells_at(s));
        Eigen::ArrayXd down(2 * n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const NodeId node{static_cast<std::uint32_t>(s), static_cast<std::uint64_t>(i)};
            const double sig = params.sigma(node);
            const double b = sig * gaussians(node);
            const double drift = 0.5 * sig * sig;
            down[2 * i] = level[i] + b - drift;
            down[2 * i + 1] = level[i] - b - drift;
        }
        level.swap(down);
    }
    field.log_multipliers = std::move(level);
    const double cell_weight = std::ldexp(1.0, -params.depth);
    field.normalization = (field.log_multipliers.exp() * cell_weight).sum();
    return field;
}

NoiseField sample_noise_field(const NoiseParams& params, std::uint64_t seed) {
    return sample_noise_field(params, [seed](NodeId n) { return node_gaussian(seed, n); });
}

LeafMeasure NoiseField::normalized_measure() const {
    LeafMeasure out;
    out.depth = depth;
    const double cell_weight = std::ldexp(1.0, -depth);
    out.masses = log_multipliers.exp() * (cell_weight / normalization);
    return out;
}

CoefficientTree apply_noise(const CoefficientTree& tree, const NoiseParams& params,
                            std::uint64_t seed) {
    if (params.depth != tree.depth)
        throw ShapeError("noise depth " + std::to_string(params.depth) +
                         " does not match tree depth " + std::to_string(tree.depth));
    const NoiseField field = sample_noise_field(params, seed);
    LeafMeasure leaves = reconstruct_leaves(tree, tree.depth);
    leaves.masses *= field.log_multipliers.exp();
    CoefficientTree noisy = coefficients_from_leaves(leaves);
    // Coefficients are scale-invariant; pin the total mass exactly.
    noisy.total_mass = tree.total_mass;
    return noisy;
}

std::vector<NodeStat> noisy_coefficient_stats(const CoefficientTree& tree,
                                              const NoiseParams& params, int n_samples,
                                              std::uint64_t seed) {
    if (n_samples < 2) throw DomainError("need at least 2 Monte Carlo samples");

    // Samples are embarrassingly parallel: stream k depends only on
    // (seed, k). Accumulation is Welford per fixed sample chunk, chunks
    // merged in index order, so the result is bit-identical for any thread
    // count (and exactly zero variance in the sigma = 0 case).
    const std::size_t n_nodes = tree.coeffs.size();
    const Eigen::Index nn = static_cast<Eigen::Index>(n_nodes);

    struct Chunk {
        double count = 0.0;
        Eigen::ArrayXd mean, m2;
    };
    const int n_chunks = std::min(64, n_samples);
    std::vector<Chunk> chunks(static_cast<std::size_t>(n_chunks));
    const int per_chunk = (n_samples + n_chunks - 1) / n_chunks;

    auto run_chunk = [&](int c) {
        Chunk& ch = chunks[static_cast<std::size_t>(c)];
        ch.mean = Eigen::ArrayXd::Zero(nn);
        ch.m2 = Eigen::ArrayXd::Zero(nn);
        const int lo = c * per_chunk;
        const int hi = std::min(n_samples, lo + per_chunk);
        for (int k = lo; k < hi; ++k) {
            const CoefficientTree noisy = apply_noise(tree, params, derive_stream(seed, k));
            ch.count += 1.0;
            Eigen::Index j = 0;
            for (const auto& [node, a0] : tree.coeffs) {
                const double a = noisy.coeff(node);
                const double delta = a - ch.mean[j];
                ch.mean[j] += delta / ch.count;
                ch.m2[j] += delta * (a - ch.mean[j]);
                ++j;
            }
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int n_threads = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(n_chunks)));
    if (n_threads <= 1 || n_samples < 256) {
        for (int c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (int c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }

    // Chan's pairwise merge, strictly in chunk order.
    Chunk total = std::move(chunks[0]);
    for (int c = 1; c < n_chunks; ++c) {
        const Chunk& ch = chunks[static_cast<std::size_t>(c)];
        if (ch.count == 0.0) continue;
        const double merged = total.count + ch.count;
        for (Eigen::Index j = 0; j < nn; ++j) {
            const double delta = ch.mean[j] - total.mean[j];
            total.m2[j] += ch.m2[j] + delta * delta * total.count * ch.count / merged;
            total.mean[j] += delta * ch.count / merged;
        }
        total.count = merged;
    }

    std::vector<NodeStat> out;
    out.reserve(n_nodes);
    const double n = static_cast<double>(n_samples);
    Eigen::Index j = 0;
    for (const auto& [node, a0] : tree.coeffs) {
        NodeStat st;
        st.node = node;
        st.mean = total.mean[j];
        st.variance = total.m2[j] / (n - 1.0);
        st.std_error = std::sqrt(st.variance / n);
        out.push_back(st);
        ++j;
    }
    return out;
}

}  // namespace dyadic

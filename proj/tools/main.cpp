#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "dyadic/io.hpp"
#include "dyadic/noise.hpp"
#include "dyadic/random.hpp"
#include "dyadic/stats.hpp"
#include "dyadic/svg.hpp"
#include "dyadic/transforms.hpp"
#include "dyadic/viz.hpp"

namespace {

constexpr const char* kTool = "dyadic 0.1.0";

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

// Provenance string: tool version plus a hash of the effective config, so
// outputs are reproducible and traceable without timestamps.
std::string provenance(const std::string& config) {
    return std::string(kTool) + " config=" + hex64(fnv1a(config));
}

std::vector<int> parse_dim_order(const std::string& text, int dim) {
    std::vector<int> order;
    if (text.empty()) return order;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto c = text.find(',', pos);
        const std::string tok = text.substr(pos, c == std::string::npos ? std::string::npos : c - pos);
        const int k = std::stoi(tok);  // 1-based on the command line
        if (k < 1 || k > dim) throw dyadic::DomainError("--dim-order entry out of [1," + std::to_string(dim) + "]");
        order.push_back(k - 1);
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    return order;
}

void warn_desk_limit(int depth) {
    if (depth >= 24)
        std::cerr << "dyadic: warning: 2^" << depth
                  << " leaves exceeds the documented 10^7 desk-scale limit; expect heavy memory use\n";
}

// "lo1,hi1,lo2,hi2,..." overrides the fitted bounds.
void apply_bounds(dyadic::HypercubeSystem& system, const std::string& spec) {
    if (spec.empty()) return;
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const auto c = spec.find(',', pos);
        vals.push_back(std::stod(spec.substr(pos, c == std::string::npos ? std::string::npos : c - pos)));
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    if (vals.size() != 2 * static_cast<std::size_t>(system.dim))
        throw dyadic::DomainError("--bounds needs 2*dim comma-separated values");
    for (int k = 0; k < system.dim; ++k) system.bounds[k] = {vals[2 * k], vals[2 * k + 1]};
    system.check();
}

struct CoeffsArgs {
    std::string input, output, features, bounds, dim_order;
    int depth = -1;
    int label_column = 0;
    std::string labels_out;
    bool points = false;
};

int run_coeffs(const CoeffsArgs& a) {
    const std::string text = dyadic::read_text_file(a.input);
    const std::string config = "coeffs|in=" + a.input + "|depth=" + std::to_string(a.depth) +
                               "|points=" + std::to_string(a.points) + "|features=" + a.features +
                               "|bounds=" + a.bounds + "|dim-order=" + a.dim_order +
                               "|label-column=" + std::to_string(a.label_column);

    dyadic::CoefficientTree tree;
    std::string labels_csv;

    if (!a.features.empty()) {
        const auto sys = dyadic::feature_system_from_json(dyadic::read_text_file(a.features),
                                                          a.features);
        const auto cloud = dyadic::read_points_csv(text, 0, a.input);
        tree = dyadic::feature_system_measure(cloud.points, sys);
    } else if (a.points) {
        if (a.depth < 0) throw dyadic::DomainError("--depth is required for point clouds");
        const auto cloud = dyadic::read_points_csv(text, a.label_column, a.input);
        auto system = dyadic::fit_bounds(cloud.points, a.depth,
                                         parse_dim_order(a.dim_order,
                                                         static_cast<int>(cloud.points.cols())));
        apply_bounds(system, a.bounds);
        if (a.label_column > 0) {
            const auto labeled = dyadic::labeled_points_to_measure(cloud.points, cloud.labels, system);
            tree = dyadic::coefficients_from_leaves(labeled.measure());
            if (!a.labels_out.empty()) {
                std::string s = "# " + provenance(config) + "\n";
                s += "# classes: A=" + labeled.class_names[0] + " B=" + labeled.class_names[1] + "\n";
                s += "scale,index,category\n";
                for (const auto& [node, cat] : dyadic::knot_labels(labeled))
                    s += std::to_string(node.scale) + "," + std::to_string(node.index) + "," +
                         dyadic::to_string(cat) + "\n";
                dyadic::write_text_file(a.labels_out, s);
            }
        } else {
            tree = dyadic::coefficients_from_leaves(dyadic::points_to_measure(cloud.points, system));
        }
    } else {
        if (a.depth < 0) throw dyadic::DomainError("--depth is required for series input");
        warn_desk_limit(a.depth);
        const auto values = dyadic::read_series_csv(text, a.input);
        tree = dyadic::coefficients_from_leaves(dyadic::series_to_measure(values, a.depth));
    }

    const std::string out = dyadic::coefficient_tree_to_json(tree, provenance(config));
    if (a.output.empty())
        std::cout << out;
    else
        dyadic::write_text_file(a.output, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Product-coefficient representation, statistics, noise simulation and "
                 "visualization for measures on binary-tree set systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kTool));
    // Values from a config file are defaults; explicit flags win.
    app.set_config("--config", "", "Read option defaults from an INI/TOML file");

    // coeffs
    CoeffsArgs ca;
    auto* coeffs = app.add_subcommand("coeffs", "Compute product coefficients from raw data");
    coeffs->add_option("input", ca.input, "CSV input (series, or points with --points)")->required();
    coeffs->add_option("-o,--output", ca.output, "Output coefficient JSON (stdout if omitted)");
    coeffs->add_option("-d,--depth", ca.depth, "Tree depth (leaf scale)");
    coeffs->add_flag("--points", ca.points, "Treat input as a point cloud (one point per line)");
    coeffs->add_option("--features", ca.features, "Feature-system JSON config (threshold predicates)");
    coeffs->add_option("--bounds", ca.bounds, "Box bounds lo1,hi1,lo2,hi2,... (default: min/max fit)");
    coeffs->add_option("--dim-order", ca.dim_order, "Halving order of dimensions, 1-based, cycled");
    coeffs->add_option("--label-column", ca.label_column, "1-based label column for two-class data");
    coeffs->add_option("--labels-out", ca.labels_out, "Write per-node label categories CSV here");

    // reconstruct
    std::string rc_in, rc_out, rc_format = "csv";
    int rc_depth = -1;
    auto* reconstruct = app.add_subcommand("reconstruct", "Leaf masses from a coefficient tree");
    reconstruct->add_option("input", rc_in, "Coefficient JSON")->required();
    reconstruct->add_option("-o,--output", rc_out, "Output file (stdout if omitted)");
    reconstruct->add_option("-d,--depth", rc_depth, "Target depth (default: stored depth)");
    reconstruct->add_option("--format", rc_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // distance
    std::string d_a, d_b, d_out;
    auto* distance = app.add_subcommand("distance", "Multi-scale variance norm distance");
    distance->add_option("a", d_a, "Coefficient JSON")->required();
    distance->add_option("b", d_b, "Coefficient JSON")->required();
    distance->add_option("-o,--output", d_out, "Output file (stdout if omitted)");

    // infer
    std::vector<std::string> inf_in;
    std::string inf_out;
    auto* infer = app.add_subcommand("infer", "Average coefficient trees (measure inference)");
    infer->add_option("inputs", inf_in, "Coefficient JSON files")->required()->expected(-1);
    infer->add_option("-o,--output", inf_out, "Output coefficient JSON (stdout if omitted)");

    // noise
    std::string n_in, n_params, n_dir;
    std::uint64_t n_seed = 0;
    int n_samples = 1000, n_emit = 1;
    auto* noise = app.add_subcommand("noise", "Multiscale Gaussian noise simulation");
    noise->add_option("input", n_in, "Coefficient JSON")->required();
    noise->add_option("--params", n_params, "Noise parameter JSON")->required();
    noise->add_option("--seed", n_seed, "Master seed");
    noise->add_option("--samples", n_samples, "Monte Carlo samples");
    noise->add_option("--emit-trees", n_emit, "How many noisy trees to write");
    noise->add_option("-o,--outdir", n_dir, "Output directory")->required();

    // weld
    std::string w_in, w_out, w_points, w_bounds, w_dim_order, w_knots, w_cmap = "bwr";
    int w_depth = -1, w_max_scale = -1, w_label_column = 0, w_size = 800;
    auto* weld = app.add_subcommand("weld", "Pseudo-welding curve SVG");
    weld->add_option("input", w_in, "Coefficient JSON (or use --points)");
    weld->add_option("-o,--output", w_out, "Output SVG")->required();
    weld->add_option("--points", w_points, "Point-cloud CSV to ingest instead of a tree");
    weld->add_option("-d,--depth", w_depth, "Tree depth when ingesting points");
    weld->add_option("--label-column", w_label_column, "1-based label column for knot coloring");
    weld->add_option("--bounds", w_bounds, "Box bounds lo1,hi1,... for --points");
    weld->add_option("--dim-order", w_dim_order, "Halving order, 1-based, for --points");
    weld->add_option("--max-scale", w_max_scale, "Deepest displaced scale (default: depth-1)");
    weld->add_option("--colormap", w_cmap, "bwr or jet")->check(CLI::IsMember({"bwr", "jet"}));
    weld->add_option("--size", w_size, "Canvas size in px");
    weld->add_option("--knots-csv", w_knots, "Also dump knots as CSV here");

    // wheel
    std::string h_in, h_out, h_cmap = "bwr";
    int h_max_scale = -1, h_size = 800;
    bool h_ccw = false;
    auto* wheel = app.add_subcommand("wheel", "Day-wheel (annular coefficient) SVG");
    wheel->add_option("input", h_in, "Coefficient JSON")->required();
    wheel->add_option("-o,--output", h_out, "Output SVG")->required();
    wheel->add_option("--max-scale", h_max_scale, "Outermost ring scale (default: min(depth-1, 5))");
    wheel->add_option("--colormap", h_cmap, "bwr or jet")->check(CLI::IsMember({"bwr", "jet"}));
    wheel->add_option("--size", h_size, "Canvas size in px");
    wheel->add_flag("--counterclockwise", h_ccw, "Run sectors counterclockwise from 12 o'clock");

    // dirac
    double x_pos = 0.0;
    int x_depth = -1;
    std::string x_out;
    auto* dirac = app.add_subcommand("dirac", "Closed-form Dirac coefficient tree");
    dirac->add_option("-x,--x", x_pos, "Unit-mass position in [0,1)")->required();
    dirac->add_option("-d,--depth", x_depth, "Tree depth")->required();
    dirac->add_option("-o,--output", x_out, "Output coefficient JSON (stdout if omitted)");

    // featvec
    std::vector<std::string> fv_in;
    std::string fv_out;
    int fv_max_scale = -1;
    auto* featvec = app.add_subcommand("featvec", "Weighted coefficient feature vectors as CSV");
    featvec->add_option("inputs", fv_in, "Coefficient JSON files")->required()->expected(-1);
    featvec->add_option("--max-scale", fv_max_scale, "Deepest included scale (default: depth-1)");
    featvec->add_option("-o,--output", fv_out, "Output CSV (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*coeffs) return run_coeffs(ca);

        if (*reconstruct) {
            const auto tree = dyadic::coefficient_tree_from_json(dyadic::read_text_file(rc_in), rc_in);
            const int depth = rc_depth < 0 ? tree.depth : rc_depth;
            warn_desk_limit(depth);
            const auto leaves = dyadic::reconstruct_leaves(tree, depth);
            const std::string config = "reconstruct|in=" + rc_in + "|depth=" + std::to_string(depth) +
                                       "|format=" + rc_format;
            const std::string out = rc_format == "json"
                                        ? dyadic::leaf_measure_to_json(leaves)
                                        : dyadic::leaf_measure_to_csv(leaves, provenance(config));
            if (rc_out.empty())
                std::cout << out;
            else
                dyadic::write_text_file(rc_out, out);
            return 0;
        }

        if (*distance) {
            const auto ta = dyadic::coefficient_tree_from_json(dyadic::read_text_file(d_a), d_a);
            const auto tb = dyadic::coefficient_tree_from_json(dyadic::read_text_file(d_b), d_b);
            if (ta.total_mass != tb.total_mass)
                std::cerr << "dyadic: warning: total masses differ ("
                          << dyadic::format_double(ta.total_mass) << " vs "
                          << dyadic::format_double(tb.total_mass)
                          << "); distance uses coefficients only\n";
            const double d = dyadic::norm_distance(ta, tb);
            const std::string out = dyadic::format_double(d) + "\n";
            if (d_out.empty())
                std::cout << out;
            else
                dyadic::write_text_file(d_out, out);
            return 0;
        }

        if (*infer) {
            std::vector<dyadic::CoefficientTree> trees;
            for (const auto& f : inf_in)
                trees.push_back(dyadic::coefficient_tree_from_json(dyadic::read_text_file(f), f));
            const auto avg = dyadic::average_coefficients(trees);
            std::string config = "infer";
            for (const auto& f : inf_in) config += "|in=" + f;
            const std::string out = dyadic::coefficient_tree_to_json(avg, provenance(config));
            if (inf_out.empty())
                std::cout << out;
            else
                dyadic::write_text_file(inf_out, out);
            return 0;
        }

        if (*noise) {
            const auto tree = dyadic::coefficient_tree_from_json(dyadic::read_text_file(n_in), n_in);
            const auto params =
                dyadic::noise_params_from_json(dyadic::read_text_file(n_params), n_params);
            const auto kahane = dyadic::check_kahane(params);
            if (!kahane.ok)
                std::cerr << "dyadic: warning: sup(sigma^2) = "
                          << dyadic::format_double(kahane.sup_sigma_squared)
                          << " >= 2 ln 2; the infinite-depth noise limit may degenerate\n";
            double max_abs_a = 0.0;
            for (const auto& [node, a] : tree.coeffs) max_abs_a = std::max(max_abs_a, std::abs(a));
            const double eps = 1.0 - max_abs_a;
            if (!(eps > 0.0) || !dyadic::check_perturbation(tree, params, std::min(1.0, eps)))
                std::cerr << "dyadic: warning: perturbation condition |a| <= 1-eps, sigma^2 < eps/2 "
                             "not met; finite-depth simulation proceeds anyway\n";

            std::filesystem::create_directories(n_dir);
            const std::string config = "noise|in=" + n_in + "|params=" + n_params + "|seed=" +
                                       std::to_string(n_seed) + "|samples=" + std::to_string(n_samples);
            const auto stats = dyadic::noisy_coefficient_stats(tree, params, n_samples, n_seed);
            dyadic::write_text_file(
                (std::filesystem::path(n_dir) / "stats.csv").string(),
                dyadic::node_stats_to_csv(stats, provenance(config)));
            for (int k = 0; k < std::min(n_emit, n_samples); ++k) {
                const auto noisy = dyadic::apply_noise(tree, params, dyadic::derive_stream(n_seed, k));
                dyadic::write_text_file(
                    (std::filesystem::path(n_dir) / ("noisy_" + std::to_string(k) + ".json")).string(),
                    dyadic::coefficient_tree_to_json(noisy, provenance(config + "|k=" + std::to_string(k))));
            }
            return 0;
        }

        if (*weld) {
            dyadic::CoefficientTree tree;
            std::map<dyadic::NodeId, dyadic::KnotCategory> labels;
            bool have_labels = false;
            const std::string config = "weld|in=" + w_in + "|points=" + w_points + "|depth=" +
                                       std::to_string(w_depth) + "|max-scale=" +
                                       std::to_string(w_max_scale) + "|colormap=" + w_cmap +
                                       "|size=" + std::to_string(w_size);
            if (!w_points.empty()) {
                if (w_depth < 0) throw dyadic::DomainError("--depth is required with --points");
                const auto cloud = dyadic::read_points_csv(dyadic::read_text_file(w_points),
                                                           w_label_column, w_points);
                auto system = dyadic::fit_bounds(
                    cloud.points, w_depth,
                    parse_dim_order(w_dim_order, static_cast<int>(cloud.points.cols())));
                apply_bounds(system, w_bounds);
                if (w_label_column > 0) {
                    const auto labeled =
                        dyadic::labeled_points_to_measure(cloud.points, cloud.labels, system);
                    tree = dyadic::coefficients_from_leaves(labeled.measure());
                    labels = dyadic::knot_labels(labeled);
                    have_labels = true;
                } else {
                    tree = dyadic::coefficients_from_leaves(
                        dyadic::points_to_measure(cloud.points, system));
                }
            } else {
                if (w_in.empty())
                    throw dyadic::DomainError("weld needs a coefficient JSON or --points");
                tree = dyadic::coefficient_tree_from_json(dyadic::read_text_file(w_in), w_in);
            }
            const int max_scale = w_max_scale < 0 ? std::min(tree.depth - 1, 12) : w_max_scale;
            const auto curve =
                dyadic::pseudo_welding_curve(tree, max_scale, have_labels ? &labels : nullptr);
            dyadic::SvgOptions opt;
            opt.size = w_size;
            opt.colormap = dyadic::colormap_from_string(w_cmap);
            opt.comment = provenance(config);
            dyadic::write_text_file(w_out, dyadic::render_svg(curve, opt));
            if (!w_knots.empty())
                dyadic::write_text_file(w_knots, dyadic::knots_to_csv(curve, provenance(config)));
            return 0;
        }

        if (*wheel) {
            const auto tree = dyadic::coefficient_tree_from_json(dyadic::read_text_file(h_in), h_in);
            const int max_scale = h_max_scale < 0 ? std::min(tree.depth - 1, 5) : h_max_scale;
            const std::string config = "wheel|in=" + h_in + "|max-scale=" + std::to_string(max_scale) +
                                       "|colormap=" + h_cmap + "|size=" + std::to_string(h_size) +
                                       "|ccw=" + std::to_string(h_ccw);
            dyadic::SvgOptions opt;
            opt.size = h_size;
            opt.colormap = dyadic::colormap_from_string(h_cmap);
            opt.counterclockwise = h_ccw;
            opt.comment = provenance(config);
            dyadic::write_text_file(h_out, dyadic::render_svg(dyadic::day_wheel(tree, max_scale), opt));
            return 0;
        }

        if (*dirac) {
            const auto tree = dyadic::dirac_coefficients(x_pos, x_depth);
            const std::string config = "dirac|x=" + dyadic::format_double(x_pos) + "|depth=" +
                                       std::to_string(x_depth);
            const std::string out = dyadic::coefficient_tree_to_json(tree, provenance(config));
            if (x_out.empty())
                std::cout << out;
            else
                dyadic::write_text_file(x_out, out);
            return 0;
        }

        if (*featvec) {
            std::vector<dyadic::CoefficientTree> trees;
            for (const auto& f : fv_in)
                trees.push_back(dyadic::coefficient_tree_from_json(dyadic::read_text_file(f), f));
            const int max_scale = fv_max_scale < 0 ? trees.front().depth - 1 : fv_max_scale;
            std::vector<Eigen::VectorXd> vectors;
            for (const auto& t : trees)
                vectors.push_back(dyadic::weighted_feature_vector(t, max_scale));
            std::string config = "featvec|max-scale=" + std::to_string(max_scale);
            for (const auto& f : fv_in) config += "|in=" + f;
            const std::string out =
                dyadic::feature_vectors_to_csv(vectors, max_scale, provenance(config));
            if (fv_out.empty())
                std::cout << out;
            else
                dyadic::write_text_file(fv_out, out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "dyadic: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

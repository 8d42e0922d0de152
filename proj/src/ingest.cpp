#include "dyadic/ingest.hpp"

#include <algorithm>
#include <cmath>

#include "dyadic/transforms.hpp"

namespace dyadic {

void HypercubeSystem::check() const {
    if (dim < 1) throw DomainError("hypercube dimension must be positive");
    if (static_cast<int>(bounds.size()) != dim) throw ShapeError("bounds size must equal dim");
    for (const auto& [lo, hi] : bounds)
        if (!(lo < hi)) throw DomainError("each bound must satisfy min < max");
    if (dim_order.empty()) throw DomainError("dim order must be non-empty");
    for (int k : dim_order)
        if (k < 0 || k >= dim) throw DomainError("dim order entry out of range");
    if (depth < 0 || depth > kMaxDepth) throw DomainError("depth out of range");
}

HypercubeSystem HypercubeSystem::unit_cube(int dim, int depth) {
    HypercubeSystem s;
    s.dim = dim;
    s.bounds.assign(dim, {0.0, 1.0});
    s.dim_order.resize(dim);
    for (int k = 0; k < dim; ++k) s.dim_order[k] = k;
    s.depth = depth;
    s.check();
    return s;
}

namespace {

// Normalized coordinate in [0,1]; outside -> IngestError naming the point.
double normalize_coord(const HypercubeSystem& system, int k, double x, std::size_t point_index) {
    const auto [lo, hi] = system.bounds[k];
    const double t = (x - lo) / (hi - lo);
    if (!(t >= 0.0 && t <= 1.0))
        throw IngestError("point " + std::to_string(point_index) + " outside bounds in dimension " +
                          std::to_string(k + 1));
    return t;
}

}  // namespace

std::uint64_t locate_cell(const HypercubeSystem& system, Eigen::Ref<const Eigen::VectorXd> point,
                          std::size_t point_index) {
    if (point.size() != system.dim) throw ShapeError("point dimension mismatch");
    Eigen::ArrayXd t(system.dim);
    for (int k = 0; k < system.dim; ++k) t[k] = normalize_coord(system, k, point[k], point_index);

    // Repeated exact doubling; t == 1.0 stays 1.0, which keeps the point in
    // the topmost (closed) cell at every scale.
    std::uint64_t index = 0;
    for (int step = 0; step < system.depth; ++step) {
        const int k = system.dim_order[step % system.dim_order.size()];
        const bool right = t[k] >= 0.5;
        index = 2 * index + (right ? 1 : 0);
        t[k] = 2.0 * t[k] - (right ? 1.0 : 0.0);
    }
    return index;
}

CellBounds cell_bounds(const HypercubeSystem& system, int scale, std::uint64_t index) {
    system.check();
    if (scale < 0 || scale > system.depth || index >= cells_at(scale))
        throw DomainError("cell (" + std::to_string(scale) + "," + std::to_string(index) +
                          ") outside system");
    Eigen::ArrayXd lo = Eigen::ArrayXd::Zero(system.dim);
    Eigen::ArrayXd hi = Eigen::ArrayXd::Ones(system.dim);
    for (int step = 0; step < scale; ++step) {
        const int k = system.dim_order[step % system.dim_order.size()];
        const bool right = (index >> (scale - step - 1)) & 1u;
        const double mid = 0.5 * (lo[k] + hi[k]);
        if (right)
            lo[k] = mid;
        else
            hi[k] = mid;
    }
    CellBounds cell;
    cell.lo.resize(system.dim);
    cell.hi.resize(system.dim);
    cell.closed_top.resize(system.dim);
    for (int k = 0; k < system.dim; ++k) {
        const auto [blo, bhi] = system.bounds[k];
        const double w = bhi - blo;
        cell.closed_top[k] = hi[k] == 1.0;
        cell.lo[k] = blo + lo[k] * w;
        cell.hi[k] = blo + hi[k] * w;
    }
    return cell;
}

bool cell_contains(const CellBounds& cell, Eigen::Ref<const Eigen::VectorXd> point) {
    for (Eigen::Index k = 0; k < point.size(); ++k) {
        const double x = point[k];
        if (x < cell.lo[k]) return false;
        if (x > cell.hi[k]) return false;
        if (x == cell.hi[k] && !cell.closed_top[static_cast<std::size_t>(k)]) return false;
    }
    return true;
}

LeafMeasure series_to_measure(std::span<const double> values, int depth) {
    if (depth < 0 || depth > kMaxDenseDepth) throw DomainError("depth out of range");
    if (values.empty()) throw MeasureError("empty series");
    double total = 0.0;
    for (double v : values) {
        if (v < 0.0 || std::isnan(v)) throw DomainError("series values must be non-negative");
        total += v;
    }
    if (!(total > 0.0)) throw MeasureError("series has zero total mass");

    const std::size_t n_in = values.size();
    const std::size_t n_out = static_cast<std::size_t>(cells_at(depth));
    LeafMeasure out;
    out.depth = depth;
    out.masses = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(n_out));

    if (n_in == n_out) {
        for (std::size_t i = 0; i < n_in; ++i) out.masses[static_cast<Eigen::Index>(i)] = values[i];
        return out;
    }

    // Mass-preserving overlap resampling between the n_in input intervals
    // and the n_out output cells on a common axis. When n_out divides n_in
    // this reduces to summing within cells; when n_in divides n_out, to
    // piecewise-constant splitting.
    for (std::size_t i = 0; i < n_in; ++i) {
        const double src_lo = static_cast<double>(i) * static_cast<double>(n_out);
        const double src_hi = static_cast<double>(i + 1) * static_cast<double>(n_out);
        // Source interval i covers [src_lo, src_hi) in units of 1/(n_in*n_out);
        // output cell j covers [j*n_in, (j+1)*n_in).
        std::size_t j = static_cast<std::size_t>(src_lo / static_cast<double>(n_in));
        for (; j < n_out; ++j) {
            const double cell_lo = static_cast<double>(j) * static_cast<double>(n_in);
            const double cell_hi = static_cast<double>(j + 1) * static_cast<double>(n_in);
            if (cell_lo >= src_hi) break;
            const double overlap = std::min(src_hi, cell_hi) - std::max(src_lo, cell_lo);
            if (overlap > 0.0)
                out.masses[static_cast<Eigen::Index>(j)] +=
                    values[i] * (overlap / static_cast<double>(n_out));
        }
    }
    return out;
}

SparseLeafMeasure points_to_measure(const Eigen::MatrixXd& points, const HypercubeSystem& system) {
    system.check();
    if (points.rows() == 0) throw IngestError("no points to ingest");
    if (points.cols() != system.dim) throw ShapeError("point dimension does not match system");
    SparseLeafMeasure out;
    out.depth = system.depth;
    for (Eigen::Index p = 0; p < points.rows(); ++p)
        out.cells[locate_cell(system, points.row(p).transpose(), static_cast<std::size_t>(p))] += 1.0;
    return out;
}

SparseLeafMeasure LabeledSparseLeafMeasure::measure() const {
    SparseLeafMeasure out;
    out.depth = depth;
    for (const auto& [cell, c] : counts)
        out.cells[cell] = static_cast<double>(c[0] + c[1]);
    return out;
}

LabeledSparseLeafMeasure labeled_points_to_measure(const Eigen::MatrixXd& points,
                                                   std::span<const std::string> labels,
                                                   const HypercubeSystem& system) {
    system.check();
    if (points.rows() == 0) throw IngestError("no points to ingest");
    if (static_cast<Eigen::Index>(labels.size()) != points.rows())
        throw ShapeError("label count does not match point count");
    if (points.cols() != system.dim) throw ShapeError("point dimension does not match system");

    // Two classes, ordered lexicographically.
    std::vector<std::string> classes;
    for (const auto& l : labels)
        if (std::find(classes.begin(), classes.end(), l) == classes.end()) classes.push_back(l);
    if (classes.size() > 2)
        throw IngestError("knot coloring needs at most two point classes, got " +
                          std::to_string(classes.size()));
    std::sort(classes.begin(), classes.end());

    LabeledSparseLeafMeasure out;
    out.depth = system.depth;
    out.class_names = {classes.empty() ? std::string{} : classes[0],
                       classes.size() > 1 ? classes[1] : std::string{}};
    for (Eigen::Index p = 0; p < points.rows(); ++p) {
        const std::uint64_t cell =
            locate_cell(system, points.row(p).transpose(), static_cast<std::size_t>(p));
        const int cls = labels[static_cast<std::size_t>(p)] == out.class_names[0] ? 0 : 1;
        out.counts[cell][static_cast<std::size_t>(cls)] += 1;
    }
    return out;
}

HypercubeSystem fit_bounds(const Eigen::MatrixXd& points, int depth,
                           std::span<const int> dim_order) {
    if (points.rows() == 0) throw IngestError("cannot fit bounds to an empty dataset");
    HypercubeSystem s;
    s.dim = static_cast<int>(points.cols());
    s.depth = depth;
    if (dim_order.empty()) {
        s.dim_order.resize(s.dim);
        for (int k = 0; k < s.dim; ++k) s.dim_order[k] = k;
    } else {
        s.dim_order.assign(dim_order.begin(), dim_order.end());
    }
    s.bounds.resize(s.dim);
    for (int k = 0; k < s.dim; ++k) {
        double lo = points.col(k).minCoeff();
        double hi = points.col(k).maxCoeff();
        if (lo == hi) {  // degenerate dimension: pad to a unit-width box
            lo -= 0.5;
            hi += 0.5;
        }
        s.bounds[k] = {lo, hi};
    }
    s.check();
    return s;
}

std::vector<HypercubeSystem> fit_common_systems(std::span<const Eigen::MatrixXd> datasets,
                                                int depth, std::span<const int> dim_order,
                                                bool median_align) {
    if (datasets.empty()) throw IngestError("no datasets");
    const int dim = static_cast<int>(datasets.front().cols());
    for (const auto& d : datasets) {
        if (d.rows() == 0) throw IngestError("cannot fit bounds to an empty dataset");
        if (static_cast<int>(d.cols()) != dim) throw ShapeError("datasets of unequal dimension");
    }

    auto column_median = [](const Eigen::MatrixXd& m, int k) {
        std::vector<double> v(m.col(k).data(), m.col(k).data() + m.rows());
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };

    std::vector<HypercubeSystem> out;
    out.reserve(datasets.size());

    if (!median_align) {
        // Per-dataset translation, common per-dim scale = widest range.
        Eigen::ArrayXd width = Eigen::ArrayXd::Zero(dim);
        for (const auto& d : datasets)
            for (int k = 0; k < dim; ++k)
                width[k] = std::max(width[k], d.col(k).maxCoeff() - d.col(k).minCoeff());
        for (int k = 0; k < dim; ++k)
            if (width[k] == 0.0) width[k] = 1.0;
        for (const auto& d : datasets) {
            HypercubeSystem s = fit_bounds(d, depth, dim_order);
            for (int k = 0; k < dim; ++k) {
                const double lo = d.col(k).minCoeff();
                s.bounds[k] = {lo, lo + width[k]};
            }
            s.check();
            out.push_back(std::move(s));
        }
        return out;
    }

    // Median alignment: common per-dim scale chosen as large as possible so
    // that, with every dataset's median sent to the same location, all
    // datasets fit in the unit cube.
    Eigen::ArrayXd span_low = Eigen::ArrayXd::Zero(dim);
    Eigen::ArrayXd span_high = Eigen::ArrayXd::Zero(dim);
    std::vector<Eigen::ArrayXd> medians;
    for (const auto& d : datasets) {
        Eigen::ArrayXd med(dim);
        for (int k = 0; k < dim; ++k) {
            med[k] = column_median(d, k);
            span_low[k] = std::max(span_low[k], med[k] - d.col(k).minCoeff());
            span_high[k] = std::max(span_high[k], d.col(k).maxCoeff() - med[k]);
        }
        medians.push_back(std::move(med));
    }
    Eigen::ArrayXd width = span_low + span_high;
    for (int k = 0; k < dim; ++k)
        if (width[k] == 0.0) width[k] = 1.0;

    for (std::size_t j = 0; j < datasets.size(); ++j) {
        HypercubeSystem s = fit_bounds(datasets[j], depth, dim_order);
        for (int k = 0; k < dim; ++k) {
            // Normalized target median sits at span_low/width in every dataset.
            const double lo = medians[j][k] - span_low[k];
            s.bounds[k] = {lo, lo + width[k]};
        }
        s.check();
        out.push_back(std::move(s));
    }
    return out;
}

Comparator comparator_from_string(const std::string& s) {
    if (s == "lt" || s == "<") return Comparator::Lt;
    if (s == "le" || s == "<=") return Comparator::Le;
    if (s == "gt" || s == ">") return Comparator::Gt;
    if (s == "ge" || s == ">=") return Comparator::Ge;
    if (s == "eq" || s == "==") return Comparator::Eq;
    if (s == "ne" || s == "!=") return Comparator::Ne;
    throw ParseError("unknown comparator '" + s + "'");
}

std::string to_string(Comparator c) {
    switch (c) {
        case Comparator::Lt: return "lt";
        case Comparator::Le: return "le";
        case Comparator::Gt: return "gt";
        case Comparator::Ge: return "ge";
        case Comparator::Eq: return "eq";
        case Comparator::Ne: return "ne";
    }
    return "?";
}

namespace {

Comparator complement_of(Comparator c) {
    switch (c) {
        case Comparator::Lt: return Comparator::Ge;
        case Comparator::Le: return Comparator::Gt;
        case Comparator::Gt: return Comparator::Le;
        case Comparator::Ge: return Comparator::Lt;
        case Comparator::Eq: return Comparator::Ne;
        case Comparator::Ne: return Comparator::Eq;
    }
    return c;
}

}  // namespace

FeaturePredicate threshold_predicate(std::string name, int column, Comparator cmp, double value) {
    FeaturePredicate p;
    p.name = std::move(name);
    p.test = [column, cmp, value](Eigen::Ref<const Eigen::VectorXd> point) {
        if (column < 0 || column >= point.size())
            throw DomainError("column " + std::to_string(column) + " out of range");
        const double x = point[column];
        switch (cmp) {
            case Comparator::Lt: return x < value;
            case Comparator::Le: return x <= value;
            case Comparator::Gt: return x > value;
            case Comparator::Ge: return x >= value;
            case Comparator::Eq: return x == value;
            case Comparator::Ne: return x != value;
        }
        return false;
    };
    return p;
}

void FeatureSystem::check() const {
    if (predicates.empty()) throw DomainError("feature system needs at least one predicate");
    if (!specs.empty() && specs.size() != predicates.size())
        throw ShapeError("specs/predicates size mismatch");
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!specs[i]) continue;
        for (std::size_t j = i + 1; j < specs.size(); ++j) {
            if (!specs[j]) continue;
            if (specs[i]->column == specs[j]->column && specs[i]->value == specs[j]->value &&
                specs[j]->cmp == complement_of(specs[i]->cmp))
                throw DomainError("feature '" + predicates[j].name + "' is the complement of '" +
                                  predicates[i].name + "'");
        }
    }
}

CoefficientTree feature_system_measure(const Eigen::MatrixXd& points, const FeatureSystem& system) {
    system.check();
    if (points.rows() == 0) throw IngestError("no points to ingest");
    const int depth = static_cast<int>(system.predicates.size());
    if (depth > kMaxDepth) throw DomainError("too many predicates");

    SparseLeafMeasure leaves;
    leaves.depth = depth;
    for (Eigen::Index p = 0; p < points.rows(); ++p) {
        std::uint64_t index = 0;
        for (int i = 0; i < depth; ++i) {
            bool in;
            try {
                in = system.predicates[static_cast<std::size_t>(i)].test(points.row(p).transpose());
            } catch (const std::exception& e) {
                throw IngestError("predicate '" + system.predicates[static_cast<std::size_t>(i)].name +
                                  "' failed on point " + std::to_string(p) + ": " + e.what());
            }
            index = 2 * index + (in ? 0 : 1);  // left child is F intersect S
        }
        leaves.cells[index] += 1.0;
    }
    return coefficients_from_leaves(leaves);
}

}  // namespace dyadic

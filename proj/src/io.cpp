#include "dyadic/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dyadic {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, const std::string& where) {
    const std::string t = trim(token);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw ParseError(where + ": not a number '" + t + "'");
    return v;
}

json parse_json(const std::string& text, const std::string& context) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(context + ": malformed JSON");
    return j;
}

// Iterate lines, calling fn(line_number, trimmed_line) for non-blank,
// non-comment lines.
template <typename Fn>
void for_data_lines(const std::string& text, Fn&& fn) {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string raw =
            text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        ++lineno;
        const std::string line = trim(raw);
        if (!line.empty() && line[0] != '#') fn(lineno, line);
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error("I/O error while reading '" + path + "'");
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("I/O error while writing '" + path + "'");
}

std::string coefficient_tree_to_json(const CoefficientTree& tree, const std::string& provenance) {
    std::string s = "{\n";
    s += "  \"depth\": " + std::to_string(tree.depth) + ",\n";
    s += "  \"totalMass\": " + format_double(tree.total_mass) + ",\n";
    s += "  \"coeffs\": [";
    bool first = true;
    for (const auto& [node, a] : tree.coeffs) {  // std::map iterates lexicographically
        s += first ? "\n" : ",\n";
        first = false;
        s += "    [" + std::to_string(node.scale) + ", " + std::to_string(node.index) + ", " +
             format_double(a) + "]";
    }
    s += first ? "]" : "\n  ]";
    if (!provenance.empty()) s += ",\n  \"provenance\": " + json(provenance).dump();
    s += "\n}\n";
    return s;
}

CoefficientTree coefficient_tree_from_json(const std::string& text, const std::string& context) {
    const json j = parse_json(text, context);
    if (!j.is_object() || !j.contains("depth") || !j.contains("totalMass") ||
        !j.contains("coeffs"))
        throw ParseError(context + ": expected {depth, totalMass, coeffs}");
    CoefficientTree tree;
    try {
        tree.depth = j.at("depth").get<int>();
        tree.total_mass = j.at("totalMass").get<double>();
        for (const auto& entry : j.at("coeffs")) {
            if (!entry.is_array() || entry.size() != 3)
                throw ParseError(context + ": coeff entries must be [scale, index, a]");
            NodeId node{entry[0].get<std::uint32_t>(), entry[1].get<std::uint64_t>()};
            if (!node.valid())
                throw ParseError(context + ": invalid node " + node.str());
            tree.coeffs[node] = entry[2].get<double>();
        }
    } catch (const json::exception& e) {
        throw ParseError(context + ": " + e.what());
    }
    if (tree.depth < 0 || tree.depth > kMaxDepth)
        throw ParseError(context + ": depth out of range");
    return tree;
}

std::string leaf_measure_to_csv(const LeafMeasure& leaves, const std::string& header_comment) {
    std::string s;
    if (!header_comment.empty()) s += "# " + header_comment + "\n";
    for (Eigen::Index i = 0; i < leaves.masses.size(); ++i)
        s += format_double(leaves.masses[i]) + "\n";
    return s;
}

std::string leaf_measure_to_json(const LeafMeasure& leaves) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < leaves.masses.size(); ++i) {
        if (i) s += ", ";
        s += format_double(leaves.masses[i]);
    }
    s += "]\n";
    return s;
}

std::vector<double> read_series_csv(const std::string& text, const std::string& context) {
    std::vector<double> out;
    for_data_lines(text, [&](std::size_t lineno, const std::string& line) {
        out.push_back(parse_double(line, context + ":" + std::to_string(lineno)));
    });
    return out;
}

PointCloud read_points_csv(const std::string& text, int label_column, const std::string& context) {
    PointCloud cloud;
    std::vector<std::vector<double>> rows;
    std::size_t n_cols = 0;
    for_data_lines(text, [&](std::size_t lineno, const std::string& line) {
        const std::string where = context + ":" + std::to_string(lineno);
        std::vector<std::string> tokens;
        std::size_t pos = 0;
        while (true) {
            const auto c = line.find(',', pos);
            tokens.push_back(line.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
            if (c == std::string::npos) break;
            pos = c + 1;
        }
        if (label_column > static_cast<int>(tokens.size()))
            throw ParseError(where + ": label column " + std::to_string(label_column) +
                             " beyond " + std::to_string(tokens.size()) + " columns");
        std::vector<double> row;
        for (std::size_t k = 0; k < tokens.size(); ++k) {
            if (static_cast<int>(k) + 1 == label_column) {
                cloud.labels.push_back(trim(tokens[k]));
                continue;
            }
            row.push_back(parse_double(tokens[k], where));
        }
        if (row.empty()) throw ParseError(where + ": no numeric columns");
        if (n_cols == 0) n_cols = row.size();
        if (row.size() != n_cols)
            throw ParseError(where + ": expected " + std::to_string(n_cols) + " columns, got " +
                             std::to_string(row.size()));
        rows.push_back(std::move(row));
    });
    if (rows.empty()) throw ParseError(context + ": no data rows");
    cloud.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_cols));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < n_cols; ++c)
            cloud.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return cloud;
}

std::string noise_params_to_json(const NoiseParams& params) {
    std::string s = "{\n";
    s += std::string("  \"mode\": \"") +
         (params.mode == NoiseParams::Mode::PerScale ? "per-scale" : "per-node") + "\",\n";
    s += "  \"depth\": " + std::to_string(params.depth) + ",\n";
    s += "  \"sigmas\": {";
    bool first = true;
    if (params.mode == NoiseParams::Mode::PerScale) {
        for (const auto& [scale, sig] : params.scale_sigmas) {
            s += first ? "\n" : ",\n";
            first = false;
            s += "    \"" + std::to_string(scale) + "\": " + format_double(sig);
        }
    } else {
        for (const auto& [node, sig] : params.node_sigmas) {
            s += first ? "\n" : ",\n";
            first = false;
            s += "    \"" + std::to_string(node.scale) + ":" + std::to_string(node.index) +
                 "\": " + format_double(sig);
        }
    }
    s += first ? "}" : "\n  }";
    s += "\n}\n";
    return s;
}

NoiseParams noise_params_from_json(const std::string& text, const std::string& context) {
    const json j = parse_json(text, context);
    if (!j.is_object() || !j.contains("depth") || !j.contains("sigmas"))
        throw ParseError(context + ": expected {mode, depth, sigmas}");
    NoiseParams p;
    try {
        const std::string mode = j.value("mode", "per-scale");
        if (mode == "per-scale")
            p.mode = NoiseParams::Mode::PerScale;
        else if (mode == "per-node")
            p.mode = NoiseParams::Mode::PerNode;
        else
            throw ParseError(context + ": mode must be per-scale or per-node");
        p.depth = j.at("depth").get<int>();
        const auto& sig = j.at("sigmas");
        if (sig.is_number()) {  // uniform shorthand
            const double v = sig.get<double>();
            for (int s = 0; s < p.depth; ++s) p.scale_sigmas[s] = v;
            if (p.mode == NoiseParams::Mode::PerNode)
                throw ParseError(context + ": uniform sigma shorthand needs per-scale mode");
            return p;
        }
        if (!sig.is_object()) throw ParseError(context + ": sigmas must be an object or number");
        for (auto it = sig.begin(); it != sig.end(); ++it) {
            const double v = it.value().get<double>();
            if (p.mode == NoiseParams::Mode::PerScale) {
                p.scale_sigmas[std::stoi(it.key())] = v;
            } else {
                const auto colon = it.key().find(':');
                if (colon == std::string::npos)
                    throw ParseError(context + ": per-node keys look like \"scale:index\"");
                NodeId node{static_cast<std::uint32_t>(std::stoul(it.key().substr(0, colon))),
                            std::stoull(it.key().substr(colon + 1))};
                if (!node.valid()) throw ParseError(context + ": invalid node key " + it.key());
                p.node_sigmas[node] = v;
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(context + ": " + e.what());
    } catch (const std::invalid_argument&) {
        throw ParseError(context + ": malformed sigma key");
    } catch (const std::out_of_range&) {
        throw ParseError(context + ": sigma key out of range");
    }
    return p;
}

FeatureSystem feature_system_from_json(const std::string& text, const std::string& context) {
    const json j = parse_json(text, context);
    if (!j.is_object() || !j.contains("predicates"))
        throw ParseError(context + ": expected {predicates: [...]}");
    FeatureSystem sys;
    try {
        for (const auto& p : j.at("predicates")) {
            const std::string name = p.value("name", "F" + std::to_string(sys.predicates.size() + 1));
            const int column = p.at("column").get<int>();  // 1-based
            if (column < 1) throw ParseError(context + ": columns are 1-based");
            const Comparator cmp = comparator_from_string(p.at("op").get<std::string>());
            const double value = p.at("value").get<double>();
            sys.predicates.push_back(threshold_predicate(name, column - 1, cmp, value));
            sys.specs.push_back(FeatureSystem::ThresholdSpec{column - 1, cmp, value});
        }
    } catch (const json::exception& e) {
        throw ParseError(context + ": " + e.what());
    }
    sys.check();
    return sys;
}

std::string node_stats_to_csv(std::span<const NodeStat> stats,
                              const std::string& header_comment) {
    std::string s;
    if (!header_comment.empty()) s += "# " + header_comment + "\n";
    s += "node,scale,index,mean,variance,stderr\n";
    for (const auto& st : stats) {
        s += std::to_string(st.node.scale) + ":" + std::to_string(st.node.index) + "," +
             std::to_string(st.node.scale) + "," + std::to_string(st.node.index) + "," +
             format_double(st.mean) + "," + format_double(st.variance) + "," +
             format_double(st.std_error) + "\n";
    }
    return s;
}

std::string feature_vectors_to_csv(std::span<const Eigen::VectorXd> vectors, int max_scale,
                                   const std::string& header_comment) {
    std::string s;
    if (!header_comment.empty()) s += "# " + header_comment + "\n";
    s += "# columns: coefficients for scales 0.." + std::to_string(max_scale) +
         " in lexicographic (scale, index) order; scale s entries weighted by 2^(-s/2)\n";
    for (const auto& v : vectors) {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += format_double(v[i]);
        }
        s += "\n";
    }
    return s;
}

std::string knots_to_csv(const WeldCurve& curve, const std::string& header_comment) {
    std::string s;
    if (!header_comment.empty()) s += "# " + header_comment + "\n";
    s += "x,y,scale,index,category\n";
    for (const auto& k : curve.knots) {
        s += format_double(k.x) + "," + format_double(k.y) + "," + std::to_string(k.node.scale) +
             "," + std::to_string(k.node.index) + "," + to_string(k.category) + "\n";
    }
    return s;
}

}  // namespace dyadic

#include "dyadic/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "dyadic/errors.hpp"

namespace dyadic {

namespace {

// Locale-independent fixed-point formatting keeps the output byte-stable.
std::string fmt(double v, int precision = 3) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
    return std::string(buf, res.ptr);
}

std::string hex2(int v) {
    static const char* digits = "0123456789abcdef";
    std::string s(2, '0');
    s[0] = digits[(v >> 4) & 0xf];
    s[1] = digits[v & 0xf];
    return s;
}

std::string rgb(double r, double g, double b) {
    auto chan = [](double x) {
        return static_cast<int>(std::lround(255.0 * std::clamp(x, 0.0, 1.0)));
    };
    return "#" + hex2(chan(r)) + hex2(chan(g)) + hex2(chan(b));
}

const char* category_color(KnotCategory c) {
    switch (c) {
        case KnotCategory::OnlyA: return "#d62728";
        case KnotCategory::OnlyB: return "#2ca02c";
        case KnotCategory::Mixed: return "#1f77b4";
        case KnotCategory::Empty: return "#000000";
        case KnotCategory::Endpoint: return "#666666";
        case KnotCategory::Unlabeled: return "#666666";
    }
    return "#666666";
}

std::string svg_open(int w, int h, const std::string& comment) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
                    "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) +
                    " " + std::to_string(h) + "\">\n";
    if (!comment.empty()) s += "<!-- " + comment + " -->\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    return s;
}

std::string colorbar_legend(Colormap map, double x, double y, double w, double h) {
    std::string s = "<g class=\"legend\">\n";
    const int steps = 32;
    for (int i = 0; i < steps; ++i) {
        // top = +1, bottom = -1
        const double v = 1.0 - 2.0 * (i + 0.5) / steps;
        s += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y + h * i / steps) + "\" width=\"" + fmt(w) +
             "\" height=\"" + fmt(h / steps + 0.5) + "\" fill=\"" + colormap_color(map, v) +
             "\"/>\n";
    }
    s += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) + "\" height=\"" +
         fmt(h) + "\" fill=\"none\" stroke=\"#333333\"/>\n";
    auto text = [&](double ty, const char* label) {
        return "<text x=\"" + fmt(x + w + 4) + "\" y=\"" + fmt(ty) +
               "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">" + label +
               "</text>\n";
    };
    s += text(y + 5, "+1");
    s += text(y + h / 2 + 4, "0");
    s += text(y + h + 3, "-1");
    s += "</g>\n";
    return s;
}

}  // namespace

Colormap colormap_from_string(const std::string& s) {
    if (s == "bwr" || s == "blue-white-red") return Colormap::BlueWhiteRed;
    if (s == "jet") return Colormap::Jet;
    throw ParseError("unknown colormap '" + s + "' (expected bwr or jet)");
}

std::string colormap_color(Colormap map, double value) {
    const double v = std::clamp(value, -1.0, 1.0);
    if (map == Colormap::BlueWhiteRed) {
        if (v < 0.0) return rgb(1.0 + v, 1.0 + v, 1.0);  // blue..white
        return rgb(1.0, 1.0 - v, 1.0 - v);               // white..red
    }
    // jet over t in [0,1]
    const double t = 0.5 * (v + 1.0);
    const double r = std::clamp(1.5 - std::abs(4.0 * t - 3.0), 0.0, 1.0);
    const double g = std::clamp(1.5 - std::abs(4.0 * t - 2.0), 0.0, 1.0);
    const double b = std::clamp(1.5 - std::abs(4.0 * t - 1.0), 0.0, 1.0);
    return rgb(r, g, b);
}

std::string render_svg(const WeldCurve& curve, const SvgOptions& options) {
    if (curve.knots.size() < 2) throw DomainError("curve needs at least 2 knots");
    const int W = options.size;
    const int H = std::max(200, (3 * options.size) / 4);

    double xmin = curve.knots.front().x, xmax = xmin;
    double ymin = curve.knots.front().y, ymax = ymin;
    for (const auto& k : curve.knots) {
        xmin = std::min(xmin, k.x);
        xmax = std::max(xmax, k.x);
        ymin = std::min(ymin, k.y);
        ymax = std::max(ymax, k.y);
    }
    const double spanx = std::max(xmax - xmin, 1e-9);
    const double spany = std::max(ymax - ymin, 1e-9);
    const double margin = 0.06 * std::min(W, H);
    const double scale = std::min((W - 2 * margin) / spanx, (H - 2 * margin) / spany);
    const double ox = 0.5 * (W - scale * (xmin + xmax));
    // SVG y grows downward; flip so positive displacement is "raised".
    const double oy = 0.5 * (H + scale * (ymin + ymax));
    auto px = [&](double x) { return ox + scale * x; };
    auto py = [&](double y) { return oy - scale * y; };

    std::string s = svg_open(W, H, options.comment);
    s += "<polyline fill=\"none\" stroke=\"#444444\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < curve.knots.size(); ++i) {
        if (i) s += " ";
        s += fmt(px(curve.knots[i].x)) + "," + fmt(py(curve.knots[i].y));
    }
    s += "\"/>\n";

    const double r = std::max(1.5, 0.004 * std::min(W, H));
    for (const auto& k : curve.knots) {
        s += "<circle class=\"knot\" cx=\"" + fmt(px(k.x)) + "\" cy=\"" + fmt(py(k.y)) +
             "\" r=\"" + fmt(r) + "\" fill=\"" + category_color(k.category) + "\"/>\n";
    }

    if (options.legend) {
        bool present[6] = {};
        for (const auto& k : curve.knots) present[static_cast<int>(k.category)] = true;
        double ty = 18.0;
        s += "<g class=\"legend\">\n";
        for (int c = 0; c < 6; ++c) {
            if (!present[c]) continue;
            const auto cat = static_cast<KnotCategory>(c);
            s += "<circle cx=\"14\" cy=\"" + fmt(ty - 4) + "\" r=\"5\" fill=\"" +
                 std::string(category_color(cat)) + "\"/>\n";
            s += "<text x=\"24\" y=\"" + fmt(ty) +
                 "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">" +
                 to_string(cat) + "</text>\n";
            ty += 16.0;
        }
        s += "</g>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string render_svg(const DayWheel& wheel, const SvgOptions& options) {
    const int W = options.size;
    const int H = options.size;
    const double cx = 0.5 * W;
    const double cy = 0.5 * H;
    const double R = 0.42 * std::min(W, H);
    const int rings = wheel.max_scale + 1;
    const double step = R / rings;

    // Angle measured from 12 o'clock; clockwise by default.
    auto point = [&](double radius, double turns) {
        const double th = 2.0 * std::numbers::pi * turns;
        const double sx = options.counterclockwise ? -std::sin(th) : std::sin(th);
        return std::pair{cx + radius * sx, cy - radius * std::cos(th)};
    };

    std::string s = svg_open(W, H, options.comment);
    const int sweep = options.counterclockwise ? 0 : 1;
    for (int sc = 0; sc <= wheel.max_scale; ++sc) {
        const auto& ring = wheel.sectors[static_cast<std::size_t>(sc)];
        const double r_in = step * sc;
        const double r_out = step * (sc + 1);
        const std::size_t n = ring.size();
        for (std::size_t i = 0; i < n; ++i) {
            const std::string fill = colormap_color(options.colormap, ring[i]);
            if (sc == 0) {
                // Center disk: full circle as two arcs.
                const auto [x0, y0] = point(r_out, 0.0);
                const auto [x1, y1] = point(r_out, 0.5);
                s += "<path class=\"sector\" d=\"M " + fmt(x0) + " " + fmt(y0) + " A " +
                     fmt(r_out) + " " + fmt(r_out) + " 0 1 " + std::to_string(sweep) + " " +
                     fmt(x1) + " " + fmt(y1) + " A " + fmt(r_out) + " " + fmt(r_out) + " 0 1 " +
                     std::to_string(sweep) + " " + fmt(x0) + " " + fmt(y0) + " Z\" fill=\"" +
                     fill + "\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
                continue;
            }
            const double t0 = static_cast<double>(i) / static_cast<double>(n);
            const double t1 = static_cast<double>(i + 1) / static_cast<double>(n);
            const auto [ax, ay] = point(r_out, t0);
            const auto [bx, by] = point(r_out, t1);
            const auto [cx2, cy2] = point(r_in, t1);
            const auto [dx2, dy2] = point(r_in, t0);
            const int large = (t1 - t0) > 0.5 ? 1 : 0;
            s += "<path class=\"sector\" d=\"M " + fmt(ax) + " " + fmt(ay) + " A " + fmt(r_out) +
                 " " + fmt(r_out) + " 0 " + std::to_string(large) + " " + std::to_string(sweep) +
                 " " + fmt(bx) + " " + fmt(by) + " L " + fmt(cx2) + " " + fmt(cy2) + " A " +
                 fmt(r_in) + " " + fmt(r_in) + " 0 " + std::to_string(large) + " " +
                 std::to_string(1 - sweep) + " " + fmt(dx2) + " " + fmt(dy2) + " Z\" fill=\"" +
                 fill + "\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
        }
    }
    if (options.legend)
        s += colorbar_legend(options.colormap, W - 46.0, 0.12 * H, 14.0, 0.5 * H);
    s += "</svg>\n";
    return s;
}

}  // namespace dyadic

#pragma once

#include <string>

#include "dyadic/viz.hpp"

namespace dyadic {

enum class Colormap { BlueWhiteRed, Jet };

Colormap colormap_from_string(const std::string& s);

/// Diverging color for a value in [-1, 1], as "#rrggbb".
std::string colormap_color(Colormap map, double value);

struct SvgOptions {
    int size = 800;                   // canvas long side in px
    Colormap colormap = Colormap::BlueWhiteRed;
    bool counterclockwise = false;    // wheel runs clockwise from 12 o'clock by default
    bool legend = true;
    std::string comment;              // emitted verbatim inside <!-- -->
};

/// Deterministic renderers: identical input gives byte-identical output.
std::string render_svg(const WeldCurve& curve, const SvgOptions& options = {});
std::string render_svg(const DayWheel& wheel, const SvgOptions& options = {});

}  // namespace dyadic

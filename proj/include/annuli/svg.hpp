#pragma once

#include <algorithm>
#include <fstream>
#include <string>

#include "annuli/grid.hpp"
#include "annuli/io.hpp"

namespace annuli {

struct FigureOptions {
    int rings = 0;  // 0 = n_radial / 8
    int rays = 0;   // 0 = n_angular / 16
    int size_px = 800;
};

/// Render the image of a polar coordinate grid under the map: a selection of
/// image rings (rows) and rays (columns), plus the two target circles for
/// reference. Squeezed bands show up as rings collapsing onto the unit
/// circle.
inline void write_figure_svg(const std::string& path, const DiscreteMap& m,
                             const FigureOptions& opt = {}) {
    const int nr = m.grid.n_radial;
    const int nt = m.grid.n_angular;
    const int rings = std::clamp(opt.rings > 0 ? opt.rings : nr / 8, 2, nr);
    const int rays = std::clamp(opt.rays > 0 ? opt.rays : nt / 16, 2, nt);

    const double R = m.target_R;
    const double margin = 0.08 * R;
    const double lo = -(R + margin);
    const double extent = 2.0 * (R + margin);
    const int px = opt.size_px;
    auto sx = [&](double x) { return (x - lo) / extent * px; };
    auto sy = [&](double y) { return (1.0 - (y - lo) / extent) * px; };

    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px << "\" height=\"" << px
        << "\" viewBox=\"0 0 " << px << ' ' << px << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Target circles.
    for (double rad : {1.0, R}) {
        out << "<circle cx=\"" << sx(0) << "\" cy=\"" << sy(0) << "\" r=\""
            << rad / extent * px << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\" "
            << "stroke-dasharray=\"4 4\"/>\n";
    }

    // Image rings: each selected row traversed once around (closed).
    for (int s = 0; s < rings; ++s) {
        const int i = (rings == 1) ? 0 : s * (nr - 1) / (rings - 1);
        out << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1\" points=\"";
        for (int k = 0; k <= nt; ++k) {
            const Complex w = m.at(i, k % nt);
            out << sx(w.real()) << ',' << sy(w.imag()) << ' ';
        }
        out << "\"/>\n";
    }

    // Image rays: each selected column from the inner to the outer row.
    for (int s = 0; s < rays; ++s) {
        const int k = s * nt / rays;
        out << "<polyline fill=\"none\" stroke=\"#999999\" stroke-width=\"0.8\" points=\"";
        for (int i = 0; i < nr; ++i) {
            const Complex w = m.at(i, k);
            out << sx(w.real()) << ',' << sy(w.imag()) << ' ';
        }
        out << "\"/>\n";
    }

    out << "</svg>\n";
}

}  // namespace annuli

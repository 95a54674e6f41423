#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"
#include "tethersim/trace_io.hpp"

namespace tethersim {

namespace plot_detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline const char* level_color(int level) {
    switch (level) {
        case 0: return "#2ca02c";  // tether only
        case 1: return "#1f77b4";  // pull (weighting or active avoidance)
        default: return "#9467bd"; // yank
    }
}

struct Mapper {
    double scale, margin, tank_w;
    double x(double wx) const { return margin + wx * scale; }
    // World +y is left of +x; SVG y grows downward, so flip.
    double y(double wy) const { return margin + (tank_w - wy) * scale; }
};

}  // namespace plot_detail

/// Renders a top-down SVG of one run: tank outline, obstacles, both
/// trajectories in gray, and the ASV path re-traced in segments colored by the
/// implicit-communication level active at each step.
inline std::string render_trace_svg(const LoadedTrace& trace, const nlohmann::json& meta) {
    using namespace plot_detail;
    const auto& world = meta.at("scenario").at("world");
    const double tank_l = world.at("tank_length_x_m").get<double>();
    const double tank_w = world.at("tank_width_y_m").get<double>();
    const double scale = 160.0;
    const double margin = 40.0;
    const Mapper m{scale, margin, tank_w};
    const double svg_w = tank_l * scale + 2 * margin;
    const double svg_h = tank_w * scale + 2 * margin;

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(svg_w) + "\" height=\"" +
         fmt(svg_h) + "\" viewBox=\"0 0 " + fmt(svg_w) + " " + fmt(svg_h) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    s += "<rect x=\"" + fmt(m.x(0)) + "\" y=\"" + fmt(m.y(tank_w)) + "\" width=\"" +
         fmt(tank_l * scale) + "\" height=\"" + fmt(tank_w * scale) +
         "\" fill=\"#eef6fb\" stroke=\"#333333\" stroke-width=\"2\"/>\n";

    for (const auto& jo : world.at("obstacles")) {
        if (jo.at("shape").get<std::string>() == "circle") {
            s += "<circle class=\"obstacle\" cx=\"" + fmt(m.x(jo.at("center_x_m").get<double>())) +
                 "\" cy=\"" + fmt(m.y(jo.at("center_y_m").get<double>())) + "\" r=\"" +
                 fmt(jo.at("radius_m").get<double>() * scale) +
                 "\" fill=\"#c9c9c9\" stroke=\"#555555\"/>\n";
        } else {
            const double x0 = jo.at("min_x_m").get<double>();
            const double y0 = jo.at("min_y_m").get<double>();
            const double x1 = jo.at("max_x_m").get<double>();
            const double y1 = jo.at("max_y_m").get<double>();
            s += "<rect class=\"obstacle\" x=\"" + fmt(m.x(x0)) + "\" y=\"" + fmt(m.y(y1)) +
                 "\" width=\"" + fmt((x1 - x0) * scale) + "\" height=\"" + fmt((y1 - y0) * scale) +
                 "\" fill=\"#c9c9c9\" stroke=\"#555555\"/>\n";
        }
    }

    const std::size_t c_ax = trace.column_index("asv_x_m");
    const std::size_t c_ay = trace.column_index("asv_y_m");
    const std::size_t c_ux = trace.column_index("auv_x_m");
    const std::size_t c_uy = trace.column_index("auv_y_m");
    const std::size_t c_level = trace.column_index("level");

    auto polyline = [&](std::size_t cx, std::size_t cy, const char* stroke, const char* width) {
        std::string p = "<polyline fill=\"none\" stroke=\"";
        p += stroke;
        p += "\" stroke-width=\"";
        p += width;
        p += "\" points=\"";
        for (std::size_t i = 0; i < trace.rows.size(); ++i) {
            p += fmt(m.x(trace.num(i, cx))) + "," + fmt(m.y(trace.num(i, cy)));
            if (i + 1 < trace.rows.size()) p += " ";
        }
        p += "\"/>\n";
        return p;
    };
    s += polyline(c_ax, c_ay, "#aaaaaa", "1.5");
    s += polyline(c_ux, c_uy, "#aaaaaa", "1.5");

    // Maximal constant-level runs of the ASV path, drawn as colored strokes.
    std::size_t i = 0;
    while (i < trace.rows.size()) {
        const int level = static_cast<int>(trace.num(i, c_level));
        std::size_t j = i;
        while (j + 1 < trace.rows.size() && static_cast<int>(trace.num(j + 1, c_level)) == level) {
            ++j;
        }
        std::string p = "<path fill=\"none\" stroke=\"";
        p += level_color(level);
        p += "\" stroke-width=\"3\" d=\"M ";
        const std::size_t seg_start = (i > 0) ? i - 1 : i;  // join to previous sample
        for (std::size_t k = seg_start; k <= j; ++k) {
            p += fmt(m.x(trace.num(k, c_ax))) + " " + fmt(m.y(trace.num(k, c_ay)));
            if (k < j) p += " L ";
        }
        p += "\"/>\n";
        s += p;
        i = j + 1;
    }

    const double sx = world.at("asv_start_x_m").get<double>();
    const double sy = world.at("asv_start_y_m").get<double>();
    const double tx = world.at("asv_target_x_m").get<double>();
    const double ty = world.at("asv_target_y_m").get<double>();
    s += "<circle cx=\"" + fmt(m.x(sx)) + "\" cy=\"" + fmt(m.y(sy)) +
         "\" r=\"6\" fill=\"#000000\"/>\n";
    s += "<circle cx=\"" + fmt(m.x(tx)) + "\" cy=\"" + fmt(m.y(ty)) +
         "\" r=\"8\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"3\"/>\n";
    s += "<text x=\"" + fmt(margin) + "\" y=\"" + fmt(margin - 12) +
         "\" font-family=\"sans-serif\" font-size=\"16\">" +
         meta.at("scenario").at("name").get<std::string>() + " (" +
         meta.at("status").get<std::string>() + ", " +
         fmt(meta.at("final_time_s").get<double>()) + " s)</text>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace tethersim

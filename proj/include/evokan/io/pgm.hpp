#pragma once

#include <algorithm>
#include <fstream>
#include <string>
#include <vector>

#include "evokan/grid.hpp"
#include "evokan/io/csv.hpp"

namespace evokan {

// 8-bit binary portable graymap with the value range recorded in a sidecar
// text file. Degenerate (constant) fields map to mid-gray.
inline void write_pgm(const std::string& path, const std::vector<double>& values, int width,
                      int height) {
    if (static_cast<long>(values.size()) != static_cast<long>(width) * height)
        throw invalid_argument("write_pgm: value count does not match dimensions");
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double mn = *mn_it, mx = *mx_it;
    const double span = mx - mn;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os << "P5\n" << width << " " << height << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(width));
    for (int j = 0; j < height; ++j) {
        for (int i = 0; i < width; ++i) {
            const double v = values[static_cast<std::size_t>(j) * width + i];
            const double t = span > 0 ? (v - mn) / span : 0.5;
            row[static_cast<std::size_t>(i)] =
                static_cast<unsigned char>(std::clamp(t * 255.0 + 0.5, 0.0, 255.0));
        }
        os.write(reinterpret_cast<const char*>(row.data()), width);
    }
    if (!os) throw io_error("write failed: " + path);
    std::ofstream side(path + ".range.txt");
    if (!side) throw io_error("cannot open range sidecar for " + path);
    side << "min " << format_double(mn) << "\nmax " << format_double(mx) << "\n";
}

// One heatmap per component; rows run top-to-bottom with increasing y.
inline std::vector<std::string> render_snapshot(const std::string& base,
                                                const FieldSnapshot& snap) {
    std::vector<std::string> files;
    for (int c = 0; c < snap.components; ++c) {
        const std::string path =
            snap.components == 1 ? base + ".pgm" : base + "_c" + std::to_string(c) + ".pgm";
        std::vector<double> vals(snap.component(c), snap.component(c) + snap.cells());
        write_pgm(path, vals, snap.nx, snap.ny);
        files.push_back(path);
    }
    return files;
}

// Space-time strip for a 1D trajectory: one image row per snapshot.
inline std::string render_strip(const std::string& base,
                                const std::vector<FieldSnapshot>& traj, int component = 0) {
    if (traj.empty()) throw invalid_argument("render_strip: empty trajectory");
    const int nx = traj.front().nx;
    std::vector<double> img;
    img.reserve(traj.size() * static_cast<std::size_t>(nx));
    for (const auto& s : traj) {
        if (s.nx != nx || s.ny != 1)
            throw invalid_argument("render_strip: snapshots must share a 1D grid");
        img.insert(img.end(), s.component(component), s.component(component) + nx);
    }
    const std::string path = base + ".pgm";
    write_pgm(path, img, nx, static_cast<int>(traj.size()));
    return path;
}

}  // namespace evokan

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "evokan/grid.hpp"
#include "evokan/network.hpp"

namespace evokan {

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts unsupported");

namespace detail {

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw io_error("unexpected end of file");
    return v;
}

}  // namespace detail

// EVKN: network structure plus its flat parameter vector.
inline void save_network(const std::string& path, const Network& net, const ParamVector& p) {
    net.check_params(p);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os.write("EVKN", 4);
    detail::put<std::uint32_t>(os, 1);  // format version
    detail::put<std::uint8_t>(os, net.backend() == Backend::Kan ? 0 : 1);
    detail::put<std::uint8_t>(os, net.embedding() == Embedding::Identity ? 0 : 1);
    detail::put<double>(os, net.half_period());
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(net.widths().size()));
    for (int w : net.widths()) detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(w));
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(net.knots().order));
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(net.knots().grid));
    detail::put<double>(os, net.knots().lo);
    detail::put<double>(os, net.knots().hi);
    detail::put<std::uint8_t>(os, net.trainable_scales() ? 1 : 0);
    detail::put<std::uint64_t>(os, static_cast<std::uint64_t>(p.size()));
    os.write(reinterpret_cast<const char*>(p.data()),
             static_cast<std::streamsize>(sizeof(double)) * p.size());
    if (!os) throw io_error("write failed: " + path);
}

inline std::pair<Network, ParamVector> load_network(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "EVKN", 4) != 0) throw io_error(path + ": not an EVKN file");
    const auto version = detail::get<std::uint32_t>(is);
    if (version != 1) throw io_error(path + ": unsupported EVKN version");
    const auto backend = detail::get<std::uint8_t>(is);
    const auto emb = detail::get<std::uint8_t>(is);
    const double half_period = detail::get<double>(is);
    const auto nw = detail::get<std::uint32_t>(is);
    std::vector<int> widths(nw);
    for (auto& w : widths) w = static_cast<int>(detail::get<std::uint32_t>(is));
    const auto order = static_cast<int>(detail::get<std::uint32_t>(is));
    const auto grid = static_cast<int>(detail::get<std::uint32_t>(is));
    detail::get<double>(is);  // knot lo = -hi
    const double knot_hi = detail::get<double>(is);
    const auto scales = detail::get<std::uint8_t>(is);
    const Embedding embedding = emb == 0 ? Embedding::Identity : Embedding::PeriodicSinCos;
    Network net = backend == 0
                      ? Network::kan(widths, order, grid, embedding, half_period, knot_hi)
                      : Network::mlp(widths, embedding, half_period);
    if (!scales) net.set_trainable_scales(false);
    const auto count = detail::get<std::uint64_t>(is);
    if (static_cast<long>(count) != net.param_count())
        throw io_error(path + ": parameter count does not match network layout");
    ParamVector p(static_cast<long>(count));
    is.read(reinterpret_cast<char*>(p.data()),
            static_cast<std::streamsize>(sizeof(double) * count));
    if (!is) throw io_error(path + ": truncated parameter block");
    return {net, p};
}

// EVKS: magic, version, dims, component count, timestamp, then values as
// little-endian f64 row-major per component. Domain is [-1,1]^d.
inline void save_snapshot(const std::string& path, const FieldSnapshot& s) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os.write("EVKS", 4);
    detail::put<std::uint32_t>(os, 1);
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(s.nx));
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(s.ny));
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(s.components));
    detail::put<double>(os, s.time);
    os.write(reinterpret_cast<const char*>(s.values.data()),
             static_cast<std::streamsize>(sizeof(double) * s.values.size()));
    if (!os) throw io_error("write failed: " + path);
}

inline FieldSnapshot load_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "EVKS", 4) != 0) throw io_error(path + ": not an EVKS file");
    const auto version = detail::get<std::uint32_t>(is);
    if (version != 1) throw io_error(path + ": unsupported EVKS version");
    const auto nx = static_cast<int>(detail::get<std::uint32_t>(is));
    const auto ny = static_cast<int>(detail::get<std::uint32_t>(is));
    const auto nc = static_cast<int>(detail::get<std::uint32_t>(is));
    const double t = detail::get<double>(is);
    FieldSnapshot s = make_snapshot(nx, ny, nc, t);
    is.read(reinterpret_cast<char*>(s.values.data()),
            static_cast<std::streamsize>(sizeof(double) * s.values.size()));
    if (!is) throw io_error(path + ": truncated value block");
    return s;
}

}  // namespace evokan

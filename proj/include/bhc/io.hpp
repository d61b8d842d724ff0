#pragma once

// File formats:
//   GridFunction binary (.grdf): magic "GRDF", u32 version = 1, u8 d, u64 n,
//     f64 box length, then n^d complex samples as little-endian f64 pairs,
//     row-major.
//   SphereDensity JSON: {"d": int, "kind": "point"|"smooth"|"harmonic",
//     "nodes": [{"xi": [..], "c": [re, im]}, ..],
//     "coeffs": [[m, re, im], ..] (d=2) or [[l, m, re, im], ..] (d=3),
//     "profile": name, "params": [..] (smooth registry)}.
//   Matrix text: m followed by m*m whitespace-separated reals, row-major.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include "bhc/errors.hpp"
#include "bhc/multiplier.hpp"
#include "bhc/sphere.hpp"

namespace bhc::io {

using json = nlohmann::json;

// Locale-independent shortest round-trip formatting ('.' decimal point).
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

template <class T>
void write_le(std::ostream& os, T v) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes.begin(), bytes.end());
    os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T read_le(std::istream& is) {
    std::array<unsigned char, sizeof(T)> bytes;
    is.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
    if (!is) throw ParseError("grid file: truncated");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
}

} // namespace detail

// ---------------------------------------------------------------------------
// GridFunction binary format
// ---------------------------------------------------------------------------

inline void save_grid(const multiplier::GridFunction& u, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ParseError("save_grid: cannot open '" + path + "'");
    os.write("GRDF", 4);
    detail::write_le<std::uint32_t>(os, 1u);
    detail::write_le<std::uint8_t>(os, static_cast<std::uint8_t>(u.dims()));
    detail::write_le<std::uint64_t>(os, static_cast<std::uint64_t>(u.n()));
    detail::write_le<double>(os, u.box());
    for (const auto& v : u.values()) {
        detail::write_le<double>(os, v.real());
        detail::write_le<double>(os, v.imag());
    }
    if (!os) throw ParseError("save_grid: write failed for '" + path + "'");
}

inline multiplier::GridFunction load_grid(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParseError("load_grid: cannot open '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "GRDF", 4) != 0)
        throw ParseError("load_grid: bad magic");
    const auto version = detail::read_le<std::uint32_t>(is);
    if (version != 1u) throw ParseError("load_grid: unsupported version");
    const int d = static_cast<int>(detail::read_le<std::uint8_t>(is));
    const auto n = static_cast<std::size_t>(detail::read_le<std::uint64_t>(is));
    const double box = detail::read_le<double>(is);
    multiplier::GridFunction u(d, n, box);
    for (auto& v : u.values()) {
        const double re = detail::read_le<double>(is);
        const double im = detail::read_le<double>(is);
        v = {re, im};
    }
    return u;
}

// ---------------------------------------------------------------------------
// SphereDensity JSON
// ---------------------------------------------------------------------------

namespace detail {

inline sphere::cplx complex_from(const json& j) {
    if (j.is_number()) return sphere::cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2)
        return sphere::cplx(j[0].get<double>(), j[1].get<double>());
    throw ParseError("density json: complex values are numbers or [re, im]");
}

// Registry of named smooth profiles: arbitrary callables cannot live in a
// file, so "smooth" densities name one of these.
inline std::function<sphere::cplx(const Point&)> smooth_profile(
    const std::string& name, const std::vector<double>& params) {
    if (name == "uniform") {
        const double re = params.size() > 0 ? params[0] : 1.0;
        const double im = params.size() > 1 ? params[1] : 0.0;
        return [re, im](const Point&) { return sphere::cplx(re, im); };
    }
    if (name == "linear") {
        // c0 + c1 xi_1 + c2 xi_2 + c3 xi_3
        std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < params.size() && i < 4; ++i) c[i] = params[i];
        return [c](const Point& xi) {
            return sphere::cplx(c[0] + c[1] * xi[0] + c[2] * xi[1] + c[3] * xi[2], 0.0);
        };
    }
    throw ParseError("density json: unknown smooth profile '" + name + "'");
}

} // namespace detail

inline sphere::SphereDensity density_from_json(const json& j) {
    if (!j.is_object() || !j.contains("d") || !j.contains("kind"))
        throw ParseError("density json: need object with 'd' and 'kind'");
    const int d = j.at("d").get<int>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "point") {
        std::vector<std::pair<Point, sphere::cplx>> masses;
        for (const auto& node : j.value("nodes", json::array())) {
            const auto& xi = node.at("xi");
            Point p{0.0, 0.0, 0.0};
            for (std::size_t a = 0; a < xi.size() && a < 3; ++a)
                p[a] = xi[a].get<double>();
            masses.emplace_back(p, detail::complex_from(node.at("c")));
        }
        return sphere::SphereDensity::point_masses(d, std::move(masses));
    }
    if (kind == "smooth") {
        const std::string profile = j.value("profile", std::string("uniform"));
        std::vector<double> params;
        for (const auto& p : j.value("params", json::array()))
            params.push_back(p.get<double>());
        return sphere::SphereDensity::smooth(d, detail::smooth_profile(profile, params));
    }
    if (kind == "harmonic") {
        const auto& coeffs = j.at("coeffs");
        int order = j.value("order", -1);
        if (order < 0) {
            for (const auto& row : coeffs)
                order = std::max(order, static_cast<int>(row.at(0).get<double>()));
            order = std::max(order, 0);
        }
        if (d == 2) {
            std::vector<sphere::cplx> c(static_cast<std::size_t>(2 * order + 1), 0.0);
            for (const auto& row : coeffs) {
                const int m = static_cast<int>(row.at(0).get<double>());
                if (std::abs(m) > order) throw ParseError("density json: |m| > order");
                c[static_cast<std::size_t>(m + order)] =
                    sphere::cplx(row.at(1).get<double>(),
                                 row.size() > 2 ? row.at(2).get<double>() : 0.0);
            }
            return sphere::SphereDensity::harmonic(2, order, std::move(c));
        }
        std::vector<sphere::cplx> c(
            static_cast<std::size_t>((order + 1) * (order + 1)), 0.0);
        for (const auto& row : coeffs) {
            const int l = static_cast<int>(row.at(0).get<double>());
            const int m = static_cast<int>(row.at(1).get<double>());
            if (l < 0 || l > order || std::abs(m) > l)
                throw ParseError("density json: bad (l, m) pair");
            c[static_cast<std::size_t>(l * (l + 1) + m)] =
                sphere::cplx(row.at(2).get<double>(),
                             row.size() > 3 ? row.at(3).get<double>() : 0.0);
        }
        return sphere::SphereDensity::harmonic(3, order, std::move(c));
    }
    throw ParseError("density json: kind must be point, smooth or harmonic");
}

inline sphere::SphereDensity load_density(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("load_density: cannot open '" + path + "'");
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("load_density: ") + e.what());
    }
    return density_from_json(j);
}

// ---------------------------------------------------------------------------
// Matrix text format
// ---------------------------------------------------------------------------

inline Eigen::MatrixXd load_matrix(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("load_matrix: cannot open '" + path + "'");
    Eigen::Index m = 0;
    if (!(is >> m) || m <= 0) throw ParseError("load_matrix: bad dimension");
    Eigen::MatrixXd a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            if (!(is >> a(i, j)))
                throw ParseError("load_matrix: expected " + std::to_string(m * m) +
                                 " entries");
    return a;
}

inline void save_matrix(const Eigen::MatrixXd& a, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ParseError("save_matrix: cannot open '" + path + "'");
    os << a.rows() << "\n";
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            os << (j ? " " : "") << format_double(a(i, j));
        os << "\n";
    }
}

} // namespace bhc::io

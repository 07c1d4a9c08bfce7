#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "zerocurve/errors.hpp"

namespace zerocurve {

/// Real function sampled on a uniform grid.
struct GridFunction {
    double x0 = 0.0;
    double dx = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double x_end() const { return values.empty() ? x0 : x(values.size() - 1); }

    static GridFunction sample(double x0, double dx, std::size_t n,
                               const std::function<double(double)>& fn) {
        GridFunction g{x0, dx, {}};
        g.values.reserve(n);
        for (std::size_t i = 0; i < n; ++i) g.values.push_back(fn(g.x(i)));
        return g;
    }
};

/// Sampled 2x2 symmetric Hamiltonian [[f, g], [g, h]] on a uniform grid.
struct HamiltonianGrid {
    double x0 = 0.0;
    double dx = 1.0;
    std::vector<double> f, g, h;

    std::size_t size() const { return f.size(); }
    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double x_end() const { return f.empty() ? x0 : x(f.size() - 1); }
    double delta(std::size_t i) const { return f[i] * h[i] - g[i] * g[i]; }

    static HamiltonianGrid sample(double x0, double dx, std::size_t n,
                                  const std::function<double(double)>& ff,
                                  const std::function<double(double)>& gf,
                                  const std::function<double(double)>& hf) {
        HamiltonianGrid out{x0, dx, {}, {}, {}};
        out.f.reserve(n);
        out.g.reserve(n);
        out.h.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double x = x0 + static_cast<double>(i) * dx;
            out.f.push_back(ff(x));
            out.g.push_back(gf(x));
            out.h.push_back(hf(x));
        }
        return out;
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        std::size_t b = cell.find_first_not_of(" \t\r");
        std::size_t e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return out;
}

inline void check_uniform(const std::vector<double>& xs, const std::string& path) {
    if (xs.size() < 2) throw ParseError(path + ": need at least two rows");
    double dx = xs[1] - xs[0];
    if (!(dx > 0)) throw ParseError(path + ": x column must be strictly increasing");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        double expect = xs[0] + static_cast<double>(i) * dx;
        if (std::abs(xs[i] - expect) > 1e-9 * (1.0 + std::abs(expect)))
            throw ParseError(path + ": non-uniform spacing near row " + std::to_string(i));
    }
}

} // namespace detail

/// CSV with header `x,value`.
inline GridFunction read_grid_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string line;
    std::getline(in, line); // header
    std::vector<double> xs, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() < 2) throw ParseError(path + ": expected 2 columns");
        xs.push_back(std::stod(cells[0]));
        vs.push_back(std::stod(cells[1]));
    }
    detail::check_uniform(xs, path);
    return GridFunction{xs[0], xs[1] - xs[0], std::move(vs)};
}

inline void write_grid_function(const std::string& path, const GridFunction& g) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out.precision(17);
    out << "x,value\n";
    for (std::size_t i = 0; i < g.size(); ++i) out << g.x(i) << "," << g.values[i] << "\n";
}

/// CSV with header `x,f,g,h`.
inline HamiltonianGrid read_hamiltonian_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string line;
    std::getline(in, line);
    std::vector<double> xs;
    HamiltonianGrid out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() < 4) throw ParseError(path + ": expected 4 columns");
        xs.push_back(std::stod(cells[0]));
        out.f.push_back(std::stod(cells[1]));
        out.g.push_back(std::stod(cells[2]));
        out.h.push_back(std::stod(cells[3]));
    }
    detail::check_uniform(xs, path);
    out.x0 = xs[0];
    out.dx = xs[1] - xs[0];
    return out;
}

inline void write_hamiltonian_grid(const std::string& path, const HamiltonianGrid& hg) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out.precision(17);
    out << "x,f,g,h\n";
    for (std::size_t i = 0; i < hg.size(); ++i)
        out << hg.x(i) << "," << hg.f[i] << "," << hg.g[i] << "," << hg.h[i] << "\n";
}

/// Second-order first derivative: central inside, one-sided at the ends.
inline std::vector<double> fd_derivative(const std::vector<double>& v, double dx) {
    std::size_t n = v.size();
    std::vector<double> out(n, 0.0);
    if (n < 3) return out;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (v[i + 1] - v[i - 1]) / (2 * dx);
    out[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * dx);
    out[n - 1] = (3 * v[n - 1] - 4 * v[n - 2] + v[n - 3]) / (2 * dx);
    return out;
}

/// Cubic (4-point) interpolation of grid samples at an arbitrary point;
/// the stencil is clamped at the window ends. Fourth-order accurate.
inline double interpolate(const GridFunction& g, double x) {
    if (g.size() < 4) {
        // fall back to linear on tiny grids
        double s = (x - g.x0) / g.dx;
        auto i = static_cast<std::ptrdiff_t>(std::floor(s));
        i = std::max<std::ptrdiff_t>(0, std::min<std::ptrdiff_t>(i, static_cast<std::ptrdiff_t>(g.size()) - 2));
        double t = s - static_cast<double>(i);
        return g.values[static_cast<std::size_t>(i)] * (1 - t) +
               g.values[static_cast<std::size_t>(i) + 1] * t;
    }
    double s = (x - g.x0) / g.dx;
    auto i = static_cast<std::ptrdiff_t>(std::floor(s)) - 1;
    i = std::max<std::ptrdiff_t>(0, std::min<std::ptrdiff_t>(i, static_cast<std::ptrdiff_t>(g.size()) - 4));
    double t = s - static_cast<double>(i + 1);
    const double* p = g.values.data() + i;
    double a = -t * (t - 1) * (t - 2) / 6;
    double b = (t + 1) * (t - 1) * (t - 2) / 2;
    double c = -(t + 1) * t * (t - 2) / 2;
    double d = (t + 1) * t * (t - 1) / 6;
    return a * p[0] + b * p[1] + c * p[2] + d * p[3];
}

} // namespace zerocurve

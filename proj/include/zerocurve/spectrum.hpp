#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "zerocurve/grid.hpp"

namespace zerocurve {

struct BoundStates {
    std::vector<double> eigenvalues;       // lowest `count`, ascending
    std::vector<double> refinement_error;  // Richardson estimate per eigenvalue
};

namespace detail {

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x,
/// by the standard Sturm / LDL^T negativity count.
inline int sturm_count(const std::vector<double>& diag, double off, double x) {
    int count = 0;
    double d = 1.0;
    bool first = true;
    const double tiny = 1e-300;
    for (double a : diag) {
        d = a - x - (first ? 0.0 : off * off / d);
        first = false;
        if (std::abs(d) < tiny) d = -tiny;
        if (d < 0.0) ++count;
    }
    return count;
}

/// k-th (0-based) eigenvalue by bisection on the Sturm count.
inline double sturm_eigenvalue(const std::vector<double>& diag, double off, int k) {
    double lo = diag[0], hi = diag[0];
    for (double a : diag) {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    lo -= 2.0 * std::abs(off) + 1.0;
    hi += 2.0 * std::abs(off) + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (sturm_count(diag, off, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// A few shifted inverse-iteration sweeps to recover an eigenvector.
inline std::vector<double> tridiag_eigenvector(const std::vector<double>& diag,
                                               double off, double lambda) {
    std::size_t n = diag.size();
    std::vector<double> y(n, 1.0), c(n), dvec(n);
    for (int sweep = 0; sweep < 3; ++sweep) {
        // Thomas algorithm for (T - lambda - eps) y_next = y
        double shift = lambda + 1e-12;
        dvec[0] = diag[0] - shift;
        if (std::abs(dvec[0]) < 1e-300) dvec[0] = 1e-300;
        c[0] = off / dvec[0];
        y[0] = y[0] / dvec[0];
        for (std::size_t i = 1; i < n; ++i) {
            dvec[i] = diag[i] - shift - off * c[i - 1];
            if (std::abs(dvec[i]) < 1e-300) dvec[i] = 1e-300;
            c[i] = off / dvec[i];
            y[i] = (y[i] - off * y[i - 1]) / dvec[i];
        }
        for (std::size_t i = n - 1; i-- > 0;) y[i] -= c[i] * y[i + 1];
        double norm = 0.0;
        for (double t : y) norm = std::max(norm, std::abs(t));
        for (double& t : y) t /= norm;
    }
    return y;
}

inline std::vector<double> dirichlet_eigenvalues(const GridFunction& v, int count,
                                                 std::size_t stride) {
    // interior nodes only, optionally subsampled by `stride` (the last
    // stride-aligned index plays the right Dirichlet wall)
    double h = v.dx * static_cast<double>(stride);
    std::size_t last = ((v.size() - 1) / stride) * stride;
    std::vector<double> diag;
    for (std::size_t i = stride; i < last; i += stride)
        diag.push_back(2.0 / (h * h) + v.values[i]);
    double off = -1.0 / (h * h);
    std::vector<double> out;
    for (int k = 0; k < count; ++k) out.push_back(sturm_eigenvalue(diag, off, k));
    return out;
}

} // namespace detail

/// Lowest `count` eigenvalues of -y'' + V y = E y with Dirichlet walls at the
/// window ends (symmetric second-order finite differences). The error
/// estimate comes from comparing against the half-resolution grid. Throws
/// WindowTooSmall when the ground-state eigenfunction carries visible mass at
/// the walls.
inline BoundStates bound_states(const GridFunction& v, int count,
                                double boundary_mass_tol = 1e-3) {
    if (v.size() < 32) throw WindowTooSmall("need at least 32 grid points");
    BoundStates out;
    out.eigenvalues = detail::dirichlet_eigenvalues(v, count, 1);
    auto coarse = detail::dirichlet_eigenvalues(v, count, 2);
    for (int k = 0; k < count; ++k) {
        // second-order scheme: error ~ (E_h - E_2h) / 3
        out.refinement_error.push_back(
            std::abs(out.eigenvalues[static_cast<std::size_t>(k)] -
                     coarse[static_cast<std::size_t>(k)]) /
            3.0);
    }

    std::vector<double> diag;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        diag.push_back(2.0 / (v.dx * v.dx) + v.values[i]);
    double off = -1.0 / (v.dx * v.dx);
    for (int k = 0; k < count; ++k) {
        if (out.eigenvalues[static_cast<std::size_t>(k)] >= 0.0) continue;
        auto y = detail::tridiag_eigenvector(diag, off,
                                             out.eigenvalues[static_cast<std::size_t>(k)]);
        std::size_t edge = std::max<std::size_t>(3, y.size() / 50);
        double mass = 0.0;
        for (std::size_t i = 0; i < edge; ++i)
            mass = std::max({mass, std::abs(y[i]), std::abs(y[y.size() - 1 - i])});
        if (mass > boundary_mass_tol)
            throw WindowTooSmall("bound state " + std::to_string(k) +
                                 " reaches the window edge (mass " +
                                 std::to_string(mass) + ")");
    }
    return out;
}

} // namespace zerocurve

#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "zerocurve/grid.hpp"

namespace zerocurve {

using Complex = std::complex<double>;

/// 2x2 complex matrix; the evolution object for both x- and t-shifts.
struct Mat2c {
    Complex a{0.0}, b{0.0}, c{0.0}, d{0.0}; // [[a, b], [c, d]]

    static Mat2c identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Complex det() const { return a * d - b * c; }
    Complex trace() const { return a + d; }

    friend Mat2c operator*(const Mat2c& x, const Mat2c& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend Mat2c operator+(const Mat2c& x, const Mat2c& y) {
        return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
    }
    friend Mat2c operator-(const Mat2c& x, const Mat2c& y) {
        return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
    }
    friend Mat2c operator*(Complex s, const Mat2c& x) {
        return {s * x.a, s * x.b, s * x.c, s * x.d};
    }

    double max_norm() const {
        return std::max(std::max(std::abs(a), std::abs(b)),
                        std::max(std::abs(c), std::abs(d)));
    }
};

inline double mat_distance(const Mat2c& x, const Mat2c& y) { return (x - y).max_norm(); }

namespace detail {

/// Classic RK4 for T' = G(s) T from s=0 to s=length (length may be negative),
/// with T(0) = I.
inline Mat2c rk4_matrix(const std::function<Mat2c(double)>& generator, double length,
                        double step_hint) {
    Mat2c t = Mat2c::identity();
    if (length == 0.0) return t;
    if (!(step_hint > 0.0)) throw StepUnderflow("non-positive step size");
    double n_real = std::ceil(std::abs(length) / step_hint);
    if (!(n_real < 1e9)) throw StepUnderflow("step size underflows the interval");
    auto n = static_cast<long>(n_real);
    double h = length / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
        double s = static_cast<double>(i) * h;
        Mat2c k1 = generator(s) * t;
        Mat2c k2 = generator(s + h / 2) * (t + (h / 2) * k1);
        Mat2c k3 = generator(s + h / 2) * (t + (h / 2) * k2);
        Mat2c k4 = generator(s + h) * (t + h * k3);
        t = t + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return t;
}

} // namespace detail

/// Transfer matrix of -y'' + V y = z y from x = `from` to x = `from + w`:
/// T' = [[0, 1], [V - z, 0]] T with T = I at the base point. V is sampled;
/// midpoint values come from cubic interpolation.
inline Mat2c transfer_schrodinger(const GridFunction& v, Complex z, double w,
                                  double from = 0.0) {
    double lo = std::min(from, from + w), hi = std::max(from, from + w);
    if (lo < v.x0 - 1e-12 || hi > v.x_end() + 1e-12)
        throw OutOfWindow("transfer path leaves the sampled window");
    auto gen = [&](double s) {
        double pot = interpolate(v, from + s);
        return Mat2c{0.0, 1.0, pot - z, 0.0};
    };
    return detail::rk4_matrix(gen, w, v.dx);
}

/// Transfer matrix of the canonical system J u' = z H u from `from` to
/// `from + w`: T' = z [[g, h], [-f, -g]] T.
inline Mat2c transfer_canonical(const HamiltonianGrid& ham, Complex z, double w,
                                double from = 0.0) {
    double lo = std::min(from, from + w), hi = std::max(from, from + w);
    if (lo < ham.x0 - 1e-12 || hi > ham.x_end() + 1e-12)
        throw OutOfWindow("transfer path leaves the sampled window");
    GridFunction fg{ham.x0, ham.dx, ham.f};
    GridFunction gg{ham.x0, ham.dx, ham.g};
    GridFunction hg{ham.x0, ham.dx, ham.h};
    auto gen = [&](double s) {
        double x = from + s;
        double f = interpolate(fg, x), g = interpolate(gg, x), h = interpolate(hg, x);
        return Mat2c{z * g, z * h, -z * f, -z * g};
    };
    return detail::rk4_matrix(gen, w, ham.dx);
}

/// Time evolution T' = B(t) T, T(0) = I. B must be trace-free (within 1e-12)
/// along the whole path; determinant is then preserved.
inline Mat2c evolve_time(const std::function<Mat2c(double)>& b_eval, double t,
                         double step = 1e-3) {
    auto gen = [&](double s) {
        Mat2c b = b_eval(s);
        if (std::abs(b.trace()) > 1e-12)
            throw NonZeroTrace("time generator has nonzero trace at t = " +
                               std::to_string(s));
        return b;
    };
    return detail::rk4_matrix(gen, t, step);
}

/// A family of time generators indexed by how far the underlying operator has
/// already been evolved: family(shift) is t -> B((shift + t) . L).
using BFamily = std::function<Mat2c(double shift, double t)>;

/// Max-norm defect of T(t1 + t2; L) = T(t1; t2.L) T(t2; L).
inline double cocycle_residual(const BFamily& family, double t1, double t2,
                               double step = 1e-3) {
    auto at_shift = [&](double shift) {
        return [&family, shift](double t) { return family(shift, t); };
    };
    Mat2c whole = evolve_time(at_shift(0.0), t1 + t2, step);
    Mat2c second = evolve_time(at_shift(t2), t1, step);
    Mat2c first = evolve_time(at_shift(0.0), t2, step);
    return mat_distance(whole, second * first);
}

struct GroupElement {
    double x = 0.0;
    double t = 0.0;
    friend GroupElement operator+(GroupElement a, GroupElement b) {
        return {a.x + b.x, a.t + b.t};
    }
};

/// B along x-shifted copies of a (statically sampled) Hamiltonian:
/// field(x_shift, t) = B((x_shift, t) . H).
using CsBField = std::function<Mat2c(double x_shift, double t)>;

/// Joint transfer T((x,t); s.H) = T_time(t; (s+x).H) * T_space(x; s.H) and the
/// max-norm defect of T(g1 + g2; H) = T(g1; g2.H) T(g2; H). The x-transfer is
/// taken from the sampled grid, which is held fixed in time; the supplied B
/// field carries whatever t-dependence the family has.
inline double joint_cocycle_residual(const HamiltonianGrid& ham, Complex z,
                                     const CsBField& field, GroupElement g1,
                                     GroupElement g2, double step = 1e-3) {
    auto joint = [&](GroupElement e, GroupElement base) {
        Mat2c space = transfer_canonical(ham, z, e.x, base.x);
        auto b = [&field, &e, &base](double t) {
            return field(base.x + e.x, base.t + t);
        };
        Mat2c time = evolve_time(b, e.t, step);
        return time * space;
    };
    Mat2c whole = joint(g1 + g2, GroupElement{});
    Mat2c right = joint(g2, GroupElement{});
    Mat2c left = joint(g1, g2);
    return mat_distance(whole, left * right);
}

} // namespace zerocurve

#pragma once

#include <cmath>
#include <complex>

#include "zerocurve/transfer.hpp"

namespace zerocurve {

/// Point of the Riemann sphere C u {inf}.
struct RiemannPoint {
    Complex value{0.0};
    bool infinite = false;

    static RiemannPoint inf() { return {Complex{0.0}, true}; }
    /*implicit*/ RiemannPoint(Complex v) : value(v) {}
    RiemannPoint(Complex v, bool i) : value(v), infinite(i) {}
    RiemannPoint() = default;
};

/// Moebius action [[a, b], [c, d]] . z = (a z + b) / (c z + d), completed
/// projectively: poles map to inf and inf maps to a / c.
inline RiemannPoint lft_apply(const Mat2c& t, const RiemannPoint& p) {
    Complex num, den;
    if (p.infinite) {
        num = t.a;
        den = t.c;
    } else {
        num = t.a * p.value + t.b;
        den = t.c * p.value + t.d;
    }
    if (den == Complex{0.0}) return RiemannPoint::inf();
    return RiemannPoint{num / den};
}

/// Chordal metric on the sphere; the natural way to compare LFT outputs near
/// poles: d(p, q) = |p - q| / (sqrt(1+|p|^2) sqrt(1+|q|^2)), d(p, inf) =
/// 1 / sqrt(1+|p|^2).
inline double chordal_distance(const RiemannPoint& p, const RiemannPoint& q) {
    if (p.infinite && q.infinite) return 0.0;
    if (p.infinite) return 1.0 / std::sqrt(1.0 + std::norm(q.value));
    if (q.infinite) return 1.0 / std::sqrt(1.0 + std::norm(p.value));
    return std::abs(p.value - q.value) /
           (std::sqrt(1.0 + std::norm(p.value)) * std::sqrt(1.0 + std::norm(q.value)));
}

} // namespace zerocurve

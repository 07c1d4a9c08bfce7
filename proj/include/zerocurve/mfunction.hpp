#pragma once

#include <cmath>
#include <complex>

#include "zerocurve/transfer.hpp"

namespace zerocurve {

/// Weyl m-functions sampled at one spectral point. Conventions (one fixed
/// sign per equation type, both Herglotz):
///   Schroedinger: m_+ = y'_+(0)/y_+(0), m_- = -y'_-(0)/y_-(0), where y_+/-
///     decays at +/- infinity (free case: m_+/- = i sqrt(z)).
///   Canonical:    m_+ = -u_{1,+}(0)/u_{2,+}(0), m_- = u_{1,-}(0)/u_{2,-}(0).
struct MFunctionSample {
    Complex z;
    Complex m_plus;
    Complex m_minus;
};

namespace detail {

/// sqrt with a branch cut on [0, inf): for Im z > 0 the result has positive
/// imaginary part, so exp(i sqrt(z) x) decays as x -> +inf.
inline Complex upper_sqrt(Complex z) {
    Complex r = std::sqrt(z);
    if (r.imag() < 0.0) r = -r;
    return r;
}

inline Complex m_plus_schrodinger_at(const GridFunction& v, Complex z, double base,
                                     double cutoff) {
    // impose the decaying free solution e^{i sqrt(z) x} at base + cutoff and
    // transfer it back to the base point
    Complex k = upper_sqrt(z);
    Mat2c back = transfer_schrodinger(v, z, -cutoff, base + cutoff);
    Complex y = back.a * 1.0 + back.b * (Complex{0.0, 1.0} * k);
    Complex yp = back.c * 1.0 + back.d * (Complex{0.0, 1.0} * k);
    return yp / y;
}

inline Complex m_minus_schrodinger_at(const GridFunction& v, Complex z, double base,
                                      double cutoff) {
    Complex k = upper_sqrt(z);
    Mat2c back = transfer_schrodinger(v, z, cutoff, base - cutoff);
    Complex y = back.a * 1.0 + back.b * (-Complex{0.0, 1.0} * k);
    Complex yp = back.c * 1.0 + back.d * (-Complex{0.0, 1.0} * k);
    return -yp / y;
}

} // namespace detail

/// m-functions of -y'' + V y = z y at the point `base` (default 0), imposing
/// free decaying data at distance `cutoff` and transferring inward. Doubling
/// the cutoff (up to the window) must move the values by less than
/// `stability_tol`, otherwise CutoffTooSmall.
inline MFunctionSample m_function_schrodinger(const GridFunction& v, Complex z,
                                              double cutoff, double base = 0.0,
                                              double stability_tol = 1e-6) {
    if (!(z.imag() > 0.0))
        throw ParseError("m-function sampling requires Im z > 0");
    if (base - cutoff < v.x0 - 1e-12 || base + cutoff > v.x_end() + 1e-12)
        throw OutOfWindow("cutoff exceeds the sampled window");

    double wider = std::min({2.0 * cutoff, base - v.x0, v.x_end() - base});
    MFunctionSample out;
    out.z = z;
    out.m_plus = detail::m_plus_schrodinger_at(v, z, base, wider);
    out.m_minus = detail::m_minus_schrodinger_at(v, z, base, wider);
    Complex mp = detail::m_plus_schrodinger_at(v, z, base, cutoff);
    Complex mm = detail::m_minus_schrodinger_at(v, z, base, cutoff);
    if (std::abs(mp - out.m_plus) > stability_tol ||
        std::abs(mm - out.m_minus) > stability_tol)
        throw CutoffTooSmall("m-function moves by more than tolerance when the "
                             "cutoff doubles");
    return out;
}

/// m-functions of the canonical system J u' = z H u, imposing the decaying
/// eigensolution of the (locally constant) Hamiltonian at the cutoff.
inline MFunctionSample m_function_canonical(const HamiltonianGrid& ham, Complex z,
                                            double cutoff, double base = 0.0,
                                            double stability_tol = 1e-6) {
    if (!(z.imag() > 0.0))
        throw ParseError("m-function sampling requires Im z > 0");
    if (base - cutoff < ham.x0 - 1e-12 || base + cutoff > ham.x_end() + 1e-12)
        throw OutOfWindow("cutoff exceeds the sampled window");

    auto edge_state = [&](double x, bool plus) {
        // decaying eigenvector of z[[g, h], [-f, -g]]: eigenvalue z*lambda with
        // lambda = +/- i sqrt(Delta); Re(z lambda) < 0 picks the ell^2 branch
        auto i = static_cast<std::size_t>(
            std::max(0L, std::lround((x - ham.x0) / ham.dx)));
        i = std::min(i, ham.size() - 1);
        double delta = ham.delta(i);
        Complex lambda = Complex{0.0, plus ? 1.0 : -1.0} * std::sqrt(std::max(delta, 0.0));
        return std::pair<Complex, Complex>{ham.h[i], lambda - ham.g[i]};
    };
    auto m_at = [&](double c, bool plus) {
        double from = plus ? base + c : base - c;
        auto [u1, u2] = edge_state(from, plus);
        Mat2c back = transfer_canonical(ham, z, plus ? -c : c, from);
        Complex a = back.a * u1 + back.b * u2;
        Complex b = back.c * u1 + back.d * u2;
        Complex ratio = a / b;
        return plus ? -ratio : ratio;
    };

    double wider = std::min({2.0 * cutoff, base - ham.x0, ham.x_end() - base});
    MFunctionSample out;
    out.z = z;
    out.m_plus = m_at(wider, true);
    out.m_minus = m_at(wider, false);
    if (std::abs(m_at(cutoff, true) - out.m_plus) > stability_tol ||
        std::abs(m_at(cutoff, false) - out.m_minus) > stability_tol)
        throw CutoffTooSmall("m-function moves by more than tolerance when the "
                             "cutoff doubles");
    return out;
}

/// The x-shift property: 1/m_+ transforms under the transfer matrix by the
/// linear fractional action. Returns the defect between the LFT-shifted
/// m_+ and the one recomputed directly at the shifted base point.
inline double m_shift_defect(const GridFunction& v, Complex z, double cutoff,
                             double shift) {
    Complex m0 = detail::m_plus_schrodinger_at(v, z, 0.0, cutoff);
    Complex m_direct = detail::m_plus_schrodinger_at(v, z, shift, cutoff);
    Mat2c t = transfer_schrodinger(v, z, shift, 0.0);
    // y(shift)/y'(shift) = T . (y(0)/y'(0)) entrywise in homogeneous form
    Complex inv_shifted = (t.a * (1.0 / m0) + t.b) / (t.c * (1.0 / m0) + t.d);
    return std::abs(1.0 / inv_shifted - m_direct);
}

} // namespace zerocurve

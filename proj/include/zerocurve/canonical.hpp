#pragma once

#include <array>
#include <string>

#include "zerocurve/kdv.hpp"
#include "zerocurve/zpoly.hpp"

namespace zerocurve::canonical {

inline Symbol entry_f() { return Symbol::field("f", SymbolContext::Canonical); }
inline Symbol entry_g() { return Symbol::field("g", SymbolContext::Canonical); }
inline Symbol entry_h() { return Symbol::field("h", SymbolContext::Canonical); }

/// Hamiltonian [[f, g], [g, h]] with symbolic entries; delta() is its
/// determinant f h - g^2, always formed from the stored entries.
struct SymbolicHamiltonian {
    DiffPoly f, g, h;

    static SymbolicHamiltonian generic() {
        return SymbolicHamiltonian{DiffPoly(entry_f()), DiffPoly(entry_g()),
                                   DiffPoly(entry_h())};
    }

    DiffPoly delta() const { return f * h - g * g; }
};

/// Trace-free time generator [[A, C], [-D, -A]] for the canonical system.
struct CsBMatrix {
    ZDiffPoly A, C, D;
};

using Mat2Z = kdv::Mat2Z;

/// Space generator z [[g, h], [-f, -g]] (= -z J H).
inline Mat2Z cs_m_matrix(const SymbolicHamiltonian& ham = SymbolicHamiltonian::generic()) {
    ZDiffPoly z = ZDiffPoly::z();
    return Mat2Z{{{z * ham.g, z * ham.h}, {-(z * ham.f), -(z * ham.g)}}};
}

/// Left-minus-right residuals of the three component equations
///   z h_t - C_x = 2 z h A - 2 z g C
///  -z f_t + D_x = 2 z f A - 2 z g D
///   z g_t - A_x = -z f C + z h D
/// All three vanish exactly when the zero-curvature equation holds.
inline std::array<ZDiffPoly, 3> cs_three_residuals(
    const CsBMatrix& b, const FlowRule& flow,
    const SymbolicHamiltonian& ham = SymbolicHamiltonian::generic()) {
    ZDiffPoly z = ZDiffPoly::z();
    ZDiffPoly f{ham.f}, g{ham.g}, h{ham.h};
    ZDiffPoly ft{dt(ham.f, flow)}, gt{dt(ham.g, flow)}, ht{dt(ham.h, flow)};
    ZDiffPoly r1 = z * ht - zdx(b.C) - 2 * (z * h * b.A) + 2 * (z * g * b.C);
    ZDiffPoly r2 = -(z * ft) + zdx(b.D) - 2 * (z * f * b.A) + 2 * (z * g * b.D);
    ZDiffPoly r3 = z * gt - zdx(b.A) + z * f * b.C - z * h * b.D;
    return {r1, r2, r3};
}

/// The z-stripped coefficient matrix [[2h, -2g, 0], [2f, 0, -2g], [0, -f, h]]
/// of the component system read as a linear system in (A, C, D). Singular for
/// every Hamiltonian.
inline std::array<std::array<DiffPoly, 3>, 3> coefficient_matrix(
    const SymbolicHamiltonian& ham = SymbolicHamiltonian::generic()) {
    DiffPoly zero;
    return {{{2 * ham.h, Rational(-2) * ham.g, zero},
             {2 * ham.f, zero, Rational(-2) * ham.g},
             {zero, -ham.f, ham.h}}};
}

inline DiffPoly coefficient_matrix_det(const std::array<std::array<DiffPoly, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// (f, -h, -2g) annihilates the coefficient matrix from the left; returns the
/// three dot products with its columns.
inline std::array<DiffPoly, 3> left_kernel_contraction(
    const SymbolicHamiltonian& ham = SymbolicHamiltonian::generic()) {
    auto m = coefficient_matrix(ham);
    std::array<DiffPoly, 3> kernel{ham.f, -ham.h, Rational(-2) * ham.g};
    std::array<DiffPoly, 3> out;
    for (int j = 0; j < 3; ++j) {
        DiffPoly acc;
        for (int i = 0; i < 3; ++i) acc += kernel[static_cast<std::size_t>(i)] * m[i][j];
        out[static_cast<std::size_t>(j)] = acc;
    }
    return out;
}

/// z Delta_t - (f C_x + h D_x - 2 g A_x): the consistency condition the
/// component system forces on the determinant. Identical to contracting the
/// full matrix equation with the left kernel vector.
inline ZDiffPoly consistency_residual(
    const CsBMatrix& b, const FlowRule& flow,
    const SymbolicHamiltonian& ham = SymbolicHamiltonian::generic()) {
    ZDiffPoly z = ZDiffPoly::z();
    ZDiffPoly delta_t{dt(ham.delta(), flow)};
    ZDiffPoly rhs = ZDiffPoly(ham.f) * zdx(b.C) + ZDiffPoly(ham.h) * zdx(b.D) -
                    2 * (ZDiffPoly(ham.g) * zdx(b.A));
    return z * delta_t - rhs;
}

/// Coefficient-level consequence of the consistency condition:
/// f C_{k,x} + h D_{k,x} - 2 g A_{k,x}, which must vanish for 2 <= k <= n.
inline DiffPoly consistency_coefficient(
    const CsBMatrix& b, int k,
    const SymbolicHamiltonian& ham = SymbolicHamiltonian::generic()) {
    return ham.f * dx(b.C.coeff(k)) + ham.h * dx(b.D.coeff(k)) -
           Rational(2) * ham.g * dx(b.A.coeff(k));
}

/// The formal scalar K used to solve the top-coefficient system.
inline Symbol k_symbol() { return Symbol::field("K", SymbolContext::Auxiliary); }

struct TopCoefficientIdentities {
    int degree;
    /// h A_n - g C_n, f A_n - g D_n, f C_n - h D_n with formal A_n, C_n, D_n.
    std::array<DiffPoly, 3> identities;
    /// The same after substituting A_n = g K, C_n = h K, D_n = f K.
    std::array<DiffPoly, 3> substituted;
    bool solved_by_k_form() const {
        return substituted[0].is_zero() && substituted[1].is_zero() &&
               substituted[2].is_zero();
    }
};

/// Compares the z^{n+1} coefficients of the component system: the top
/// coefficients must satisfy h A_n = g C_n, f A_n = g D_n, f C_n = h D_n,
/// solved identically by A_n = g K, C_n = h K, D_n = f K.
inline TopCoefficientIdentities top_coefficient_forcing(
    int n, const SymbolicHamiltonian& ham = SymbolicHamiltonian::generic()) {
    if (n < 2) throw DegreeTooLow(n);
    std::string suffix = std::to_string(n);
    Symbol an = Symbol::field("A" + suffix, SymbolContext::Auxiliary);
    Symbol cn = Symbol::field("C" + suffix, SymbolContext::Auxiliary);
    Symbol dn = Symbol::field("D" + suffix, SymbolContext::Auxiliary);

    TopCoefficientIdentities out;
    out.degree = n;
    out.identities = {ham.h * DiffPoly(an) - ham.g * DiffPoly(cn),
                      ham.f * DiffPoly(an) - ham.g * DiffPoly(dn),
                      ham.f * DiffPoly(cn) - ham.h * DiffPoly(dn)};

    DiffPoly k{k_symbol()};
    std::map<Symbol, DiffPoly> sub{{an, ham.g * k}, {cn, ham.h * k}, {dn, ham.f * k}};
    for (std::size_t i = 0; i < 3; ++i)
        out.substituted[i] = substitute(out.identities[i], sub);
    return out;
}

/// f (h K)_x + h (f K)_x - 2 g (g K)_x: the k = n consistency coefficient
/// after the K-substitution. Algebraically equal to Delta_x K + 2 Delta K_x.
inline DiffPoly k_ode_residual(
    const DiffPoly& k, const SymbolicHamiltonian& ham = SymbolicHamiltonian::generic()) {
    return ham.f * dx(ham.h * k) + ham.h * dx(ham.f * k) -
           Rational(2) * ham.g * dx(ham.g * k);
}

/// Delta_x K + 2 Delta K_x, the closed form of the same ODE.
inline DiffPoly k_ode_canonical_form(
    const DiffPoly& k, const SymbolicHamiltonian& ham = SymbolicHamiltonian::generic()) {
    DiffPoly delta = ham.delta();
    return dx(delta) * k + Rational(2) * delta * dx(k);
}

} // namespace zerocurve::canonical

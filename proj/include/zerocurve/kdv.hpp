#pragma once

#include <array>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "zerocurve/zpoly.hpp"

namespace zerocurve::kdv {

/// The Schroedinger potential symbol V.
inline Symbol potential() { return Symbol::field("V", SymbolContext::Kdv); }

/// Trace-free time generator [[A, C], [-D, -A]] with z-polynomial entries.
struct BMatrix {
    ZDiffPoly A, C, D;
};

using Mat2Z = std::array<std::array<ZDiffPoly, 2>, 2>;

inline Mat2Z to_matrix(const BMatrix& b) {
    return Mat2Z{{{b.A, b.C}, {-b.D, -b.A}}};
}

/// Space generator [[0, 1], [V - z, 0]] of the Schroedinger transfer matrix.
inline Mat2Z m_matrix() {
    ZDiffPoly v_minus_z = ZDiffPoly(potential()) - ZDiffPoly::z();
    return Mat2Z{{{ZDiffPoly{}, ZDiffPoly(1)}, {v_minus_z, ZDiffPoly{}}}};
}

inline Mat2Z mat_mul(const Mat2Z& a, const Mat2Z& b) {
    Mat2Z out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return out;
}

inline Mat2Z mat_sub(const Mat2Z& a, const Mat2Z& b) {
    Mat2Z out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[i][j] = a[i][j] - b[i][j];
    return out;
}

inline bool mat_is_zero(const Mat2Z& a) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!a[i][j].is_zero()) return false;
    return true;
}

/// Right-hand side of the hierarchy in terms of the generator C:
/// V_t = -1/2 C_xxx + 2 (V - z) C_x + V_x C, returned as a full z-polynomial.
/// For a valid hierarchy member every z^k coefficient with k >= 1 vanishes.
inline ZDiffPoly hierarchy_rhs(const ZDiffPoly& c) {
    Symbol v = potential();
    ZDiffPoly v_minus_z = ZDiffPoly(v) - ZDiffPoly::z();
    ZDiffPoly vx{DiffPoly(Deriv{v, 1})};
    return Rational(-1, 2) * DiffPoly(1) * zdx(c, 3) + 2 * v_minus_z * zdx(c) + vx * c;
}

/// A = -1/2 C_x and D = -A_x - (V - z) C, from the first two zero-curvature
/// component equations.
inline std::pair<ZDiffPoly, ZDiffPoly> derive_AD(const ZDiffPoly& c) {
    ZDiffPoly a = Rational(-1, 2) * DiffPoly(1) * zdx(c);
    ZDiffPoly v_minus_z = ZDiffPoly(potential()) - ZDiffPoly::z();
    ZDiffPoly d = -zdx(a) - v_minus_z * c;
    return {a, d};
}

/// Name of the integration constant introduced at z-level `level` when
/// building a degree-`degree` member. The leading constant is C<degree>; the
/// single lower constant of the degree-1 member keeps the name Cstar.
inline std::string constant_name(int level, int degree) {
    if (level == degree) return "C" + std::to_string(degree);
    if (degree == 1) return "Cstar";
    return "Cstar" + std::to_string(level);
}

struct HierarchyMember {
    int degree = 0;
    ZDiffPoly C, A, D;
    DiffPoly flow_rhs; // the z-independent value of V_t
    std::vector<std::pair<std::string, Rational>> constants;

    BMatrix b() const { return BMatrix{A, C, D}; }
    FlowRule flow() const {
        FlowRule f;
        f.assign(potential(), flow_rhs);
        return f;
    }
};

/// Builds the degree-n member by the recursion
/// C_{k-1,x} = -1/4 C_{k,xxx} + V C_{k,x} + 1/2 V_x C_k, integrating at each
/// level and injecting one named integration constant. Unspecified constants
/// default to 0 except the leading one, which defaults to 1. With
/// `symbolic_constants` the constants stay as formal constant symbols.
inline HierarchyMember build_hierarchy(int n,
                                       const std::map<std::string, Rational>& constants = {},
                                       bool symbolic_constants = false) {
    struct CacheKey {
        int n;
        std::vector<std::pair<std::string, Rational>> consts;
        bool symbolic;
        bool operator<(const CacheKey& o) const {
            return std::tie(n, consts, symbolic) < std::tie(o.n, o.consts, o.symbolic);
        }
    };
    static std::map<CacheKey, HierarchyMember> cache;
    static std::mutex cache_mutex;

    CacheKey key{n, {constants.begin(), constants.end()}, symbolic_constants};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    if (n < 0) throw std::invalid_argument("hierarchy degree must be >= 0");
    Symbol v = potential();
    DiffPoly vx{Deriv{v, 1}};

    HierarchyMember out;
    out.degree = n;

    auto constant_value = [&](int level) -> DiffPoly {
        std::string name = constant_name(level, n);
        if (symbolic_constants) {
            out.constants.emplace_back(name, Rational(0));
            return DiffPoly(Symbol::constant(name, SymbolContext::Kdv));
        }
        Rational value = level == n ? Rational(1) : Rational(0);
        if (auto it = constants.find(name); it != constants.end()) value = it->second;
        out.constants.emplace_back(name, value);
        return DiffPoly(value);
    };

    std::vector<DiffPoly> levels(static_cast<std::size_t>(n) + 1);
    levels[static_cast<std::size_t>(n)] = constant_value(n);
    for (int k = n; k >= 1; --k) {
        const DiffPoly& ck = levels[static_cast<std::size_t>(k)];
        DiffPoly rhs = Rational(-1, 4) * dx(ck, 3) + DiffPoly(v) * dx(ck) +
                       Rational(1, 2) * vx * ck;
        // The recursion always lands on an exact derivative; a throw here
        // means the recursion itself is broken.
        levels[static_cast<std::size_t>(k - 1)] = integrate_x(rhs) + constant_value(k - 1);
    }

    std::vector<DiffPoly> zc(levels.begin(), levels.end());
    out.C = ZDiffPoly::from_coeffs(std::move(zc));
    auto [a, d] = derive_AD(out.C);
    out.A = std::move(a);
    out.D = std::move(d);
    out.flow_rhs = hierarchy_rhs(out.C).coeff(0);

    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(std::move(key), out);
    return out;
}

/// d_t M - d_x B + (M B - B M), entrywise; the zero matrix exactly when the
/// zero-curvature equation holds for this B and flow.
inline Mat2Z zero_curvature_residual(const BMatrix& b, const FlowRule& flow) {
    Mat2Z m = m_matrix();
    Mat2Z bm = to_matrix(b);
    Mat2Z out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[i][j] = zdt(m[i][j], flow) - zdx(bm[i][j]);
    Mat2Z comm = mat_sub(mat_mul(m, bm), mat_mul(bm, m));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[i][j] += comm[i][j];
    return out;
}

/// V_t + D_x - (V - z) C_x: the row left over after Gauss-eliminating the
/// component system; vanishes for every valid hierarchy member.
inline ZDiffPoly kdv_prototype_residual(const BMatrix& b, const FlowRule& flow) {
    ZDiffPoly v_minus_z = ZDiffPoly(potential()) - ZDiffPoly::z();
    ZDiffPoly vt{dt(DiffPoly(potential()), flow)};
    return vt + zdx(b.D) - v_minus_z * zdx(b.C);
}

} // namespace zerocurve::kdv

#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "zerocurve/errors.hpp"
#include "zerocurve/rational.hpp"
#include "zerocurve/symbol.hpp"

namespace zerocurve {

/// Product of symbol derivatives with positive integer exponents, kept as a
/// sorted factor list so equality is syntactic.
class DMonomial {
public:
    using Factor = std::pair<Deriv, int>;

    DMonomial() = default;

    explicit DMonomial(const Deriv& d, int exponent = 1) {
        if (exponent > 0) factors_.emplace_back(d, exponent);
    }

    static DMonomial one() { return DMonomial{}; }

    const std::vector<Factor>& factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }

    bool has_field_factor() const {
        return std::any_of(factors_.begin(), factors_.end(),
                           [](const Factor& f) { return !f.first.is_constant(); });
    }

    int exponent_of(const Deriv& d) const {
        for (const auto& [fd, e] : factors_)
            if (fd == d) return e;
        return 0;
    }

    int max_order(const Symbol& s) const {
        int m = -1;
        for (const auto& [fd, e] : factors_)
            if (fd.symbol == s) m = std::max(m, fd.order);
        return m;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [fd, e] : factors_) d += e;
        return d;
    }

    DMonomial times(const DMonomial& other) const {
        DMonomial out;
        auto a = factors_.begin(), b = other.factors_.begin();
        while (a != factors_.end() || b != other.factors_.end()) {
            if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
                out.factors_.push_back(*a++);
            } else if (a == factors_.end() || b->first < a->first) {
                out.factors_.push_back(*b++);
            } else {
                out.factors_.emplace_back(a->first, a->second + b->second);
                ++a;
                ++b;
            }
        }
        return out;
    }

    /// This monomial with the exponent of `d` lowered by one.
    DMonomial divided_by(const Deriv& d) const {
        DMonomial out;
        out.factors_.reserve(factors_.size());
        for (const auto& f : factors_) {
            if (f.first == d) {
                if (f.second > 1) out.factors_.emplace_back(f.first, f.second - 1);
            } else {
                out.factors_.push_back(f);
            }
        }
        return out;
    }

    /// Largest factor (the ranking integrate_x reduces by); monomial must not be 1.
    const Factor& top_factor() const { return factors_.back(); }

    friend bool operator==(const DMonomial& a, const DMonomial& b) {
        return a.factors_ == b.factors_;
    }

    /// Multiset order induced by the factor ranking: compare the descending
    /// factor words lexicographically, a word extending a common prefix wins.
    /// Total derivatives are strictly monotone for this order, which is what
    /// makes the antiderivative reduction terminate.
    friend bool operator<(const DMonomial& a, const DMonomial& b) {
        auto ia = a.factors_.rbegin(), ib = b.factors_.rbegin();
        int ra = 0, rb = 0;
        while (true) {
            if (ra == 0) {
                if (ia == a.factors_.rend()) return ib != b.factors_.rend() || rb > 0;
                ra = ia->second;
            }
            if (rb == 0) {
                if (ib == b.factors_.rend()) return false;
                rb = ib->second;
            }
            if (ia->first != ib->first) return ia->first < ib->first;
            int c = std::min(ra, rb);
            ra -= c;
            rb -= c;
            if (ra == 0) ++ia;
            if (rb == 0) ++ib;
        }
    }

private:
    std::vector<Factor> factors_; // sorted ascending, exponents >= 1
};

class FlowRule;

/// Exact polynomial over the rationals in field symbols, their x-derivatives
/// and constant symbols. Immutable value type; all operations are pure.
class DiffPoly {
public:
    DiffPoly() = default;

    /*implicit*/ DiffPoly(const Rational& c) {
        if (c != 0) terms_[DMonomial::one()] = c;
    }
    /*implicit*/ DiffPoly(int c) : DiffPoly(Rational(c)) {}

    /*implicit*/ DiffPoly(const Symbol& s) : DiffPoly(Deriv{s, 0}) {}
    /*implicit*/ DiffPoly(const Deriv& d) { terms_[DMonomial(d)] = 1; }

    static DiffPoly monomial(const DMonomial& m, const Rational& c) {
        DiffPoly p;
        if (c != 0) p.terms_[m] = c;
        return p;
    }

    const std::map<DMonomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant_only() const {
        return std::none_of(terms_.begin(), terms_.end(),
                            [](const auto& t) { return t.first.has_field_factor(); });
    }

    Rational coefficient(const DMonomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// The part of the polynomial with no field-symbol factor at all.
    DiffPoly constant_part() const {
        DiffPoly out;
        for (const auto& [m, c] : terms_)
            if (!m.has_field_factor()) out.terms_[m] = c;
        return out;
    }

    std::set<Symbol> field_symbols() const {
        std::set<Symbol> out;
        for (const auto& [m, c] : terms_)
            for (const auto& [d, e] : m.factors())
                if (!d.is_constant()) out.insert(d.symbol);
        return out;
    }

    int max_order(const Symbol& s) const {
        int mo = -1;
        for (const auto& [m, c] : terms_) mo = std::max(mo, m.max_order(s));
        return mo;
    }

    void add_term(const DMonomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    DiffPoly& operator+=(const DiffPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    DiffPoly& operator-=(const DiffPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }

    friend DiffPoly operator-(const DiffPoly& a) {
        DiffPoly out;
        for (const auto& [m, c] : a.terms_) out.terms_[m] = -c;
        return out;
    }

    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(ma.times(mb), ca * cb);
        return out;
    }
    DiffPoly& operator*=(const DiffPoly& o) { return *this = *this * o; }

    friend bool operator==(const DiffPoly& a, const DiffPoly& b) {
        return a.terms_ == b.terms_;
    }

private:
    std::map<DMonomial, Rational> terms_; // no zero coefficients stored
};

/// Assigns a t-derivative expression to each base field symbol; this is what
/// turns the algebra into a flow.
class FlowRule {
public:
    FlowRule() = default;
    FlowRule(std::initializer_list<std::pair<Symbol, DiffPoly>> init) {
        for (auto& [s, p] : init) assignments_.emplace(s, p);
    }

    FlowRule& assign(const Symbol& s, DiffPoly rhs) {
        assignments_[s] = std::move(rhs);
        return *this;
    }

    static FlowRule zero_for(std::initializer_list<Symbol> symbols) {
        FlowRule f;
        for (const auto& s : symbols) f.assign(s, DiffPoly{});
        return f;
    }

    bool has(const Symbol& s) const { return assignments_.count(s) != 0; }

    const DiffPoly& at(const Symbol& s) const {
        auto it = assignments_.find(s);
        if (it == assignments_.end()) throw MissingFlowAssignment(s.name);
        return it->second;
    }

private:
    std::map<Symbol, DiffPoly> assignments_;
};

/// Total x-derivative: Leibniz over monomials, (s, k) -> (s, k+1), constants
/// to zero.
inline DiffPoly dx(const DiffPoly& p) {
    DiffPoly out;
    for (const auto& [m, c] : p.terms()) {
        for (const auto& [d, e] : m.factors()) {
            if (d.is_constant()) continue;
            DMonomial rest = m.divided_by(d);
            out.add_term(rest.times(DMonomial(Deriv{d.symbol, d.order + 1})), c * e);
        }
    }
    return out;
}

inline DiffPoly dx(const DiffPoly& p, int times) {
    DiffPoly out = p;
    for (int i = 0; i < times; ++i) out = dx(out);
    return out;
}

/// Flow-induced time derivative: dt(s^(k)) = dx^k(flow(s)), extended by
/// Leibniz and linearity. Commutes with dx.
inline DiffPoly dt(const DiffPoly& p, const FlowRule& flow) {
    DiffPoly out;
    for (const auto& [m, c] : p.terms()) {
        for (const auto& [d, e] : m.factors()) {
            if (d.is_constant()) continue;
            DiffPoly factor_dt = dx(flow.at(d.symbol), d.order);
            if (factor_dt.is_zero()) continue;
            DiffPoly rest = DiffPoly::monomial(m.divided_by(d), c * e);
            out += rest * factor_dt;
        }
    }
    return out;
}

/// Formal partial derivative with respect to one derivative coordinate.
inline DiffPoly partial(const DiffPoly& p, const Deriv& d) {
    DiffPoly out;
    for (const auto& [m, c] : p.terms()) {
        int e = m.exponent_of(d);
        if (e > 0) out.add_term(m.divided_by(d), c * e);
    }
    return out;
}

/// Euler (variational) operator with respect to field symbol `s`:
/// sum_k (-1)^k dx^k (dp/ds^(k)). Vanishes exactly on total x-derivatives.
inline DiffPoly euler_operator(const DiffPoly& p, const Symbol& s) {
    DiffPoly out;
    int top = p.max_order(s);
    for (int k = 0; k <= top; ++k) {
        DiffPoly term = dx(partial(p, Deriv{s, k}), k);
        if (k % 2 == 1) term = -term;
        out += term;
    }
    return out;
}

/// Antiderivative in the free differential algebra. Exactness is decided by
/// the Euler operator; the antiderivative is then built by repeatedly
/// clearing the largest monomial through its top derivative factor. The
/// result has zero constant part; integration constants are the caller's.
inline DiffPoly integrate_x(const DiffPoly& q) {
    for (const auto& s : q.field_symbols()) {
        if (!euler_operator(q, s).is_zero())
            throw NotExactDerivative("variational derivative w.r.t. '" + s.name +
                                     "' does not vanish");
    }
    if (!q.constant_part().is_zero())
        throw NotExactDerivative("nonzero field-free part cannot be integrated");

    DiffPoly rest = q;
    DiffPoly result;
    while (!rest.is_zero()) {
        const auto& [mono, coeff] = *rest.terms().rbegin();
        const auto& [top, exp] = mono.top_factor();
        // For an exact polynomial the top factor of the largest monomial is a
        // first-or-higher derivative appearing to the first power.
        if (top.is_constant() || top.order < 1 || exp != 1)
            throw NotExactDerivative("reduction reached a non-integrable leading term");
        Deriv lowered{top.symbol, top.order - 1};
        DMonomial stripped = mono.divided_by(top);
        int m = stripped.exponent_of(lowered);
        DiffPoly piece =
            DiffPoly::monomial(stripped.times(DMonomial(lowered)), coeff / (m + 1));
        result += piece;
        rest -= dx(piece);
    }
    return result;
}

/// Replaces base symbols by expressions; s^(k) becomes dx^k(replacement).
inline DiffPoly substitute(const DiffPoly& p, const std::map<Symbol, DiffPoly>& map) {
    DiffPoly out;
    for (const auto& [m, c] : p.terms()) {
        DiffPoly term = DiffPoly(c);
        for (const auto& [d, e] : m.factors()) {
            auto it = map.find(d.symbol);
            DiffPoly base =
                it == map.end() ? DiffPoly(d) : dx(it->second, d.order);
            for (int i = 0; i < e; ++i) term *= base;
        }
        out += term;
    }
    return out;
}

/// Rewrites every occurrence of s^(k) with k >= order as dx^(k-order) of
/// `replacement`, repeating until no such factor remains. The replacement must
/// only involve derivatives of `s` below `order` or the rewrite cannot settle.
inline DiffPoly reduce_derivatives(const DiffPoly& p, const Symbol& s, int order,
                                   const DiffPoly& replacement) {
    DiffPoly cur = p;
    while (cur.max_order(s) >= order) {
        DiffPoly next;
        for (const auto& [m, c] : cur.terms()) {
            DiffPoly term = DiffPoly(c);
            for (const auto& [d, e] : m.factors()) {
                DiffPoly base = (d.symbol == s && d.order >= order)
                                    ? dx(replacement, d.order - order)
                                    : DiffPoly(d);
                for (int i = 0; i < e; ++i) term *= base;
            }
            next += term;
        }
        cur = next;
    }
    return cur;
}

/// Numeric evaluation; `value(d)` supplies the value of each derivative
/// coordinate (and of each constant symbol).
inline std::complex<double> evaluate(
    const DiffPoly& p, const std::function<std::complex<double>(const Deriv&)>& value) {
    std::complex<double> acc = 0.0;
    for (const auto& [m, c] : p.terms()) {
        std::complex<double> term = to_double(c);
        for (const auto& [d, e] : m.factors())
            for (int i = 0; i < e; ++i) term *= value(d);
        acc += term;
    }
    return acc;
}

} // namespace zerocurve

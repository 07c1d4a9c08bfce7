#pragma once

#include <complex>
#include <vector>

#include "zerocurve/diffpoly.hpp"

namespace zerocurve {

/// Polynomial in the spectral parameter z with DiffPoly coefficients.
/// Normalized so the leading stored coefficient is nonzero; the zero
/// polynomial stores nothing and reports degree -1.
class ZDiffPoly {
public:
    ZDiffPoly() = default;
    /*implicit*/ ZDiffPoly(DiffPoly c0) {
        coeffs_.push_back(std::move(c0));
        trim();
    }
    /*implicit*/ ZDiffPoly(const Rational& c) : ZDiffPoly(DiffPoly(c)) {}
    /*implicit*/ ZDiffPoly(int c) : ZDiffPoly(DiffPoly(c)) {}
    /*implicit*/ ZDiffPoly(const Symbol& s) : ZDiffPoly(DiffPoly(s)) {}

    static ZDiffPoly z(int power = 1) {
        ZDiffPoly p;
        p.coeffs_.assign(static_cast<std::size_t>(power) + 1, DiffPoly{});
        p.coeffs_.back() = DiffPoly(1);
        return p;
    }

    static ZDiffPoly from_coeffs(std::vector<DiffPoly> coeffs) {
        ZDiffPoly p;
        p.coeffs_ = std::move(coeffs);
        p.trim();
        return p;
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    /// z^k coefficient; the zero polynomial beyond the degree.
    DiffPoly coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(coeffs_.size())) return DiffPoly{};
        return coeffs_[static_cast<std::size_t>(k)];
    }

    ZDiffPoly& operator+=(const ZDiffPoly& o) {
        if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
        trim();
        return *this;
    }
    ZDiffPoly& operator-=(const ZDiffPoly& o) {
        if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
        trim();
        return *this;
    }

    friend ZDiffPoly operator+(ZDiffPoly a, const ZDiffPoly& b) { return a += b; }
    friend ZDiffPoly operator-(ZDiffPoly a, const ZDiffPoly& b) { return a -= b; }

    friend ZDiffPoly operator-(const ZDiffPoly& a) {
        ZDiffPoly out;
        out.coeffs_.reserve(a.coeffs_.size());
        for (const auto& c : a.coeffs_) out.coeffs_.push_back(-c);
        return out;
    }

    friend ZDiffPoly operator*(const ZDiffPoly& a, const ZDiffPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        ZDiffPoly out;
        out.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, DiffPoly{});
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
        out.trim();
        return out;
    }
    ZDiffPoly& operator*=(const ZDiffPoly& o) { return *this = *this * o; }

    friend bool operator==(const ZDiffPoly& a, const ZDiffPoly& b) {
        return a.coeffs_ == b.coeffs_;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<DiffPoly> coeffs_;
};

inline ZDiffPoly zdx(const ZDiffPoly& p) {
    std::vector<DiffPoly> out;
    out.reserve(static_cast<std::size_t>(p.degree() + 1));
    for (int k = 0; k <= p.degree(); ++k) out.push_back(dx(p.coeff(k)));
    return ZDiffPoly::from_coeffs(std::move(out));
}

inline ZDiffPoly zdx(const ZDiffPoly& p, int times) {
    ZDiffPoly out = p;
    for (int i = 0; i < times; ++i) out = zdx(out);
    return out;
}

inline ZDiffPoly zdt(const ZDiffPoly& p, const FlowRule& flow) {
    std::vector<DiffPoly> out;
    out.reserve(static_cast<std::size_t>(p.degree() + 1));
    for (int k = 0; k <= p.degree(); ++k) out.push_back(dt(p.coeff(k), flow));
    return ZDiffPoly::from_coeffs(std::move(out));
}

inline ZDiffPoly zadd(const ZDiffPoly& a, const ZDiffPoly& b) { return a + b; }
inline ZDiffPoly zmul(const ZDiffPoly& a, const ZDiffPoly& b) { return a * b; }
inline DiffPoly zcoeff(const ZDiffPoly& p, int k) { return p.coeff(k); }

/// Horner evaluation at a numeric z with a valuation for the coefficients.
inline std::complex<double> evaluate(
    const ZDiffPoly& p, std::complex<double> z,
    const std::function<std::complex<double>(const Deriv&)>& value) {
    std::complex<double> acc = 0.0;
    for (int k = p.degree(); k >= 0; --k) acc = acc * z + evaluate(p.coeff(k), value);
    return acc;
}

} // namespace zerocurve

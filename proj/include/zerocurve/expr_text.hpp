#pragma once

#include <cctype>
#include <map>
#include <string>

#include "zerocurve/diffpoly.hpp"
#include "zerocurve/zpoly.hpp"

namespace zerocurve {

/// Canonical text form: terms in descending monomial order, rational
/// coefficients, `*` products, `^` powers, derivative suffix `_xx...`.
/// Example: `-1/4*V_xxx + 3/2*V*V_x`.
inline std::string to_string(const DiffPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) out += "-";
            first = false;
        } else {
            out += c < 0 ? " - " : " + ";
        }
        bool coeff_shown = !(mag == 1) || m.is_one();
        if (coeff_shown) out += rational_to_string(mag);
        bool need_star = coeff_shown;
        for (const auto& [d, e] : m.factors()) {
            if (need_star) out += "*";
            out += deriv_name(d);
            if (e > 1) out += "^" + std::to_string(e);
            need_star = true;
        }
    }
    return out;
}

/// Symbol resolution for parsing. Names listed in `fields` parse as field
/// symbols; everything else parses as a constant symbol.
struct SymbolTable {
    std::map<std::string, Symbol> named;

    SymbolTable& add(const Symbol& s) {
        named.emplace(s.name, s);
        return *this;
    }

    Symbol resolve(const std::string& name) const {
        auto it = named.find(name);
        if (it != named.end()) return it->second;
        return Symbol::constant(name);
    }
};

namespace detail {

class ExprParser {
public:
    ExprParser(const std::string& text, const SymbolTable& table)
        : text_(text), table_(table) {}

    DiffPoly parse() {
        DiffPoly p = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected trailing input at '" + text_.substr(pos_) + "'");
        return p;
    }

private:
    DiffPoly parse_sum() {
        skip_ws();
        bool neg = accept('-');
        if (!neg) accept('+');
        DiffPoly acc = parse_product();
        if (neg) acc = -acc;
        while (true) {
            skip_ws();
            if (accept('+')) {
                acc += parse_product();
            } else if (accept('-')) {
                acc -= parse_product();
            } else {
                return acc;
            }
        }
    }

    DiffPoly parse_product() {
        DiffPoly acc = parse_power();
        while (true) {
            skip_ws();
            if (!accept('*')) return acc;
            acc *= parse_power();
        }
    }

    DiffPoly parse_power() {
        DiffPoly base = parse_atom();
        skip_ws();
        if (!accept('^')) return base;
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_) throw ParseError("expected integer exponent");
        int e = std::stoi(text_.substr(start, pos_ - start));
        DiffPoly out = 1;
        for (int i = 0; i < e; ++i) out *= base;
        return out;
    }

    DiffPoly parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            DiffPoly inner = parse_sum();
            skip_ws();
            if (!accept(')')) throw ParseError("missing ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return DiffPoly(parse_number());
        if (std::isalpha(static_cast<unsigned char>(c))) return DiffPoly(parse_deriv());
        throw ParseError(std::string("unexpected character '") + c + "'");
    }

    Rational parse_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        std::string digits = text_.substr(start, pos_ - start);
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '/') {
            std::size_t save = pos_;
            ++pos_;
            skip_ws();
            std::size_t dstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (dstart == pos_) {
                pos_ = save; // not a fraction after all
                return parse_rational(digits);
            }
            return parse_rational(digits + "/" + text_.substr(dstart, pos_ - dstart));
        }
        return parse_rational(digits);
    }

    Deriv parse_deriv() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        // A trailing underscore group of only x's is a derivative suffix.
        int order = 0;
        auto us = name.rfind('_');
        if (us != std::string::npos && us + 1 < name.size()) {
            std::string suffix = name.substr(us + 1);
            if (suffix.find_first_not_of('x') == std::string::npos) {
                order = static_cast<int>(suffix.size());
                name = name.substr(0, us);
            }
        }
        Symbol s = table_.resolve(name);
        if (s.is_constant() && order > 0)
            throw ParseError("constant symbol '" + name + "' cannot carry derivatives");
        return Deriv{s, order};
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    const std::string& text_;
    const SymbolTable& table_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline DiffPoly parse_diffpoly(const std::string& text, const SymbolTable& table) {
    return detail::ExprParser(text, table).parse();
}

} // namespace zerocurve

#pragma once

#include <compare>
#include <string>
#include <utility>

namespace zerocurve {

enum class SymbolKind { Field, Constant };

/// Where a symbol comes from; informational only, never affects algebra.
enum class SymbolContext { Kdv, Canonical, Auxiliary };

/// A generator of the differential algebra. A symbol is identified by its
/// name: reusing a name with a different kind inside one computation is a
/// caller error (names are unique within an algebra instance).
struct Symbol {
    std::string name;
    SymbolKind kind = SymbolKind::Field;
    SymbolContext context = SymbolContext::Auxiliary;

    static Symbol field(std::string n, SymbolContext ctx = SymbolContext::Auxiliary) {
        return Symbol{std::move(n), SymbolKind::Field, ctx};
    }
    static Symbol constant(std::string n, SymbolContext ctx = SymbolContext::Auxiliary) {
        return Symbol{std::move(n), SymbolKind::Constant, ctx};
    }

    bool is_constant() const { return kind == SymbolKind::Constant; }

    friend bool operator==(const Symbol& a, const Symbol& b) { return a.name == b.name; }
    friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
        return a.name <=> b.name;
    }
};

/// A symbol differentiated `order` times in x. Constants only ever appear
/// with order zero (their derivative is dropped, not stored).
struct Deriv {
    Symbol symbol;
    int order = 0;

    bool is_constant() const { return symbol.is_constant(); }

    friend bool operator==(const Deriv& a, const Deriv& b) {
        return a.order == b.order && a.symbol == b.symbol;
    }
    // Constants rank below every field derivative; fields by (order, name).
    // integrate_x leans on this ranking when it picks the factor to reduce.
    friend std::strong_ordering operator<=>(const Deriv& a, const Deriv& b) {
        bool ca = a.is_constant(), cb = b.is_constant();
        if (ca != cb) return ca ? std::strong_ordering::less : std::strong_ordering::greater;
        if (!ca) {
            if (auto c = a.order <=> b.order; c != 0) return c;
        }
        return a.symbol <=> b.symbol;
    }
};

/// Renders `V`, `V_x`, `V_xxx`, ... (derivative order as repeated x suffix).
inline std::string deriv_name(const Deriv& d) {
    if (d.order == 0) return d.symbol.name;
    std::string s = d.symbol.name + "_";
    s.append(static_cast<std::size_t>(d.order), 'x');
    return s;
}

} // namespace zerocurve

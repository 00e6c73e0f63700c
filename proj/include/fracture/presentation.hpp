#pragma once

// Line-oriented text format for monomial presentations:
//
//   prime <p>
//   gen <name> <i> <j> [inv]
//   rel <p^k>·<monomial>        coefficient * monomial = 0
//   span <p^k>·<monomial>       generator of the submodule of interest
//   window <imin> <imax> <jmin> <jmax>
//   # comment
//
// A monomial is `1` or factors `name` / `name^e` joined by `*`. The
// coefficient is a power of p written as an integer (`4`) or as `2^2`; the
// separator may be `·`, `.` or `*`.
//
// The module described is the Z_p-span, inside the ambient ring
// Z_p[gens, inv gens inverted] / (relations), of all products
//     span_1^{n_1} * ... * span_r^{n_r} * (monomial in the free gens),  n != 0,
// where a generator is free when no span monomial mentions it.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracture/monomial.hpp"

namespace fracture {

struct GeneratorDecl {
    std::string name;
    BiDegree degree;
    bool invertible = false;

    bool operator==(const GeneratorDecl&) const = default;
};

/// p^p_power * (monomial with the given exponents, in declaration order).
struct Term {
    int p_power = 0;
    std::vector<int> exponents;

    bool is_constant() const {
        return std::all_of(exponents.begin(), exponents.end(), [](int e) { return e == 0; });
    }
    bool operator==(const Term&) const = default;
};

struct RingPresentation {
    long prime = 0;
    std::vector<GeneratorDecl> generators;
    std::vector<Term> relations;
    std::vector<Term> spans;
    std::optional<Window> window;

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t k = 0; k < generators.size(); ++k)
            if (generators[k].name == name) return k;
        return std::nullopt;
    }

    bool operator==(const RingPresentation&) const = default;
};

enum class ParseErrorKind { syntax, unknown_name, negative_exponent, duplicate_generator, invalid_value };

class ParseError : public std::runtime_error {
  public:
    ParseError(ParseErrorKind kind, int line, int column, const std::string& message,
               std::vector<std::string> expected = {})
        : std::runtime_error(format(line, column, message, expected)),
          kind_(kind),
          line_(line),
          column_(column),
          expected_(std::move(expected)) {}

    ParseErrorKind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }
    const std::vector<std::string>& expected() const { return expected_; }

  private:
    static std::string format(int line, int column, const std::string& message,
                              const std::vector<std::string>& expected) {
        std::ostringstream os;
        os << line << ':' << column << ": " << message;
        if (!expected.empty()) {
            os << " (expected ";
            for (std::size_t k = 0; k < expected.size(); ++k) os << (k ? ", " : "") << expected[k];
            os << ')';
        }
        return os.str();
    }

    ParseErrorKind kind_;
    int line_;
    int column_;
    std::vector<std::string> expected_;
};

namespace detail {

inline constexpr std::string_view kMiddleDot = "\xC2\xB7";

/// Character cursor over one line; columns count UTF-8 code points from 1.
class LineCursor {
  public:
    LineCursor(std::string_view text, int line) : s_(text), line_(line) {}

    void skip_space() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= s_.size();
    }
    int column() const {
        int col = 1;
        for (std::size_t k = 0; k < pos_; ++k)
            if ((static_cast<unsigned char>(s_[k]) & 0xC0) != 0x80) ++col;
        return col;
    }
    int line() const { return line_; }
    std::size_t pos() const { return pos_; }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    bool starts_with(std::string_view t) const { return s_.substr(pos_).substr(0, t.size()) == t; }
    void advance(std::size_t n) { pos_ += n; }

    [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {},
                           ParseErrorKind kind = ParseErrorKind::syntax) const {
        throw ParseError(kind, line_, column(), msg, std::move(expected));
    }

    std::string word() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    std::optional<std::string> identifier() {
        skip_space();
        if (pos_ >= s_.size()) return std::nullopt;
        const char c = s_[pos_];
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) return std::nullopt;
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    std::optional<long> integer() {
        skip_space();
        std::size_t k = pos_;
        if (k < s_.size() && (s_[k] == '-' || s_[k] == '+')) ++k;
        const std::size_t digits = k;
        while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
        if (k == digits) return std::nullopt;
        if (k - digits > 12) fail("integer literal too large");
        const long v = std::strtol(std::string(s_.substr(pos_, k - pos_)).c_str(), nullptr, 10);
        pos_ = k;
        return v;
    }

    long expect_integer(const std::string& what) {
        auto v = integer();
        if (!v) fail("expected " + what, {"integer"});
        return *v;
    }

  private:
    std::string_view s_;
    int line_;
    std::size_t pos_ = 0;
};

inline int power_of(long value, long p) {
    if (value < 1) return -1;
    int k = 0;
    while (value % p == 0) {
        value /= p;
        ++k;
    }
    return value == 1 ? k : -1;
}

inline Term parse_term(LineCursor& cur, const RingPresentation& pres) {
    cur.skip_space();
    const int coef_col = cur.column();
    auto base = cur.integer();
    if (!base) cur.fail("expected coefficient", {"power of p such as 1, " + std::to_string(pres.prime)});
    Term t;
    if (cur.peek() == '^') {
        cur.advance(1);
        auto k = cur.integer();
        if (!k || *k < 0) cur.fail("expected exponent after '^'", {"nonnegative integer"});
        if (*base != pres.prime)
            throw ParseError(ParseErrorKind::invalid_value, cur.line(), coef_col,
                             "coefficient base must be the prime " + std::to_string(pres.prime));
        t.p_power = static_cast<int>(*k);
    } else {
        const int k = power_of(*base, pres.prime);
        if (k < 0)
            throw ParseError(ParseErrorKind::invalid_value, cur.line(), coef_col,
                             "coefficient " + std::to_string(*base) + " is not a power of " +
                                 std::to_string(pres.prime));
        t.p_power = k;
    }
    if (cur.starts_with(kMiddleDot))
        cur.advance(kMiddleDot.size());
    else if (cur.peek() == '.' || cur.peek() == '*')
        cur.advance(1);
    else
        cur.fail("expected separator after coefficient", {"'\xC2\xB7'", "'.'", "'*'"});

    t.exponents.assign(pres.generators.size(), 0);
    cur.skip_space();
    if (cur.peek() == '1') {
        cur.advance(1);
    } else {
        while (true) {
            const int col = cur.column() + 0;
            auto name = cur.identifier();
            if (!name) cur.fail("expected monomial factor", {"generator name", "'1'"});
            auto idx = pres.index_of(*name);
            if (!idx) throw ParseError(ParseErrorKind::unknown_name, cur.line(), col, "unknown generator '" + *name + "'");
            long e = 1;
            if (cur.peek() == '^') {
                cur.advance(1);
                auto v = cur.integer();
                if (!v) cur.fail("expected exponent after '^'", {"integer"});
                e = *v;
            }
            if (e < 0 && !pres.generators[*idx].invertible)
                throw ParseError(ParseErrorKind::negative_exponent, cur.line(), col,
                                 "negative exponent on non-invertible generator '" + *name + "'");
            t.exponents[*idx] += static_cast<int>(e);
            if (cur.peek() == '*') {
                cur.advance(1);
                continue;
            }
            break;
        }
    }
    if (!cur.at_end()) cur.fail("unexpected text after monomial", {"end of line", "'*'"});
    return t;
}

}  // namespace detail

/// Parse the presentation format. Throws ParseError with line/column.
inline RingPresentation parse_presentation(std::string_view text) {
    RingPresentation pres;
    int line_no = 0;
    std::size_t start = 0;
    bool have_prime = false;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        start = end + 1;

        detail::LineCursor cur(line, line_no);
        if (cur.at_end()) {
            if (end == text.size()) break;
            continue;
        }
        const int kw_col = cur.column();
        const std::string kw = cur.word();
        if (kw == "prime") {
            if (have_prime) throw ParseError(ParseErrorKind::invalid_value, line_no, kw_col, "prime declared twice");
            const long p = cur.expect_integer("prime");
            if (!is_prime(p)) throw ParseError(ParseErrorKind::invalid_value, line_no, kw_col, std::to_string(p) + " is not prime");
            pres.prime = p;
            have_prime = true;
        } else if (kw == "gen") {
            const int name_col = (cur.skip_space(), cur.column());
            auto name = cur.identifier();
            if (!name) cur.fail("expected generator name", {"identifier"});
            if (pres.index_of(*name))
                throw ParseError(ParseErrorKind::duplicate_generator, line_no, name_col, "duplicate generator '" + *name + "'");
            GeneratorDecl g;
            g.name = *name;
            g.degree.i = static_cast<int>(cur.expect_integer("topological degree i"));
            g.degree.j = static_cast<int>(cur.expect_integer("motivic weight j"));
            if (!cur.at_end()) {
                const std::string opt = cur.word();
                if (opt != "inv") cur.fail("unexpected '" + opt + "'", {"inv", "end of line"});
                g.invertible = true;
            }
            pres.generators.push_back(g);
            for (auto* terms : {&pres.relations, &pres.spans})
                for (auto& t : *terms) t.exponents.push_back(0);
        } else if (kw == "rel" || kw == "span") {
            if (!have_prime) cur.fail("'" + kw + "' before 'prime'", {"prime <p>"});
            Term t = detail::parse_term(cur, pres);
            (kw == "rel" ? pres.relations : pres.spans).push_back(std::move(t));
            continue;
        } else if (kw == "window") {
            Window w;
            w.imin = static_cast<int>(cur.expect_integer("imin"));
            w.imax = static_cast<int>(cur.expect_integer("imax"));
            w.jmin = static_cast<int>(cur.expect_integer("jmin"));
            w.jmax = static_cast<int>(cur.expect_integer("jmax"));
            if (w.empty()) throw ParseError(ParseErrorKind::invalid_value, line_no, kw_col, "empty window");
            pres.window = w;
        } else {
            throw ParseError(ParseErrorKind::syntax, line_no, kw_col, "unknown directive '" + kw + "'",
                             {"prime", "gen", "rel", "span", "window"});
        }
        if (!cur.at_end()) cur.fail("unexpected trailing text", {"end of line"});
    }
    if (!have_prime) throw ParseError(ParseErrorKind::syntax, line_no, 1, "missing 'prime' declaration", {"prime <p>"});
    return pres;
}

inline std::string print_monomial(const RingPresentation& pres, const std::vector<int>& exponents) {
    std::string out;
    for (std::size_t k = 0; k < exponents.size(); ++k) {
        if (exponents[k] == 0) continue;
        if (!out.empty()) out += '*';
        out += pres.generators[k].name;
        if (exponents[k] != 1) out += "^" + std::to_string(exponents[k]);
    }
    return out.empty() ? "1" : out;
}

inline std::string print_term(const RingPresentation& pres, const Term& t) {
    return prime_power(pres.prime, t.p_power).get_str() + std::string(detail::kMiddleDot) +
           print_monomial(pres, t.exponents);
}

/// Canonical text; parse_presentation(print_presentation(p)) == p.
inline std::string print_presentation(const RingPresentation& pres) {
    std::ostringstream os;
    os << "prime " << pres.prime << '\n';
    for (const auto& g : pres.generators)
        os << "gen " << g.name << ' ' << g.degree.i << ' ' << g.degree.j << (g.invertible ? " inv" : "") << '\n';
    for (const auto& r : pres.relations) os << "rel " << print_term(pres, r) << '\n';
    for (const auto& s : pres.spans) os << "span " << print_term(pres, s) << '\n';
    if (pres.window)
        os << "window " << pres.window->imin << ' ' << pres.window->imax << ' ' << pres.window->jmin << ' '
           << pres.window->jmax << '\n';
    return os.str();
}

/// Maximum number of cells an expansion may touch; FRACTURE_CELL_BUDGET overrides.
inline std::int64_t default_cell_budget() {
    if (const char* env = std::getenv("FRACTURE_CELL_BUDGET")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && v > 0) return v;
    }
    return 100000;
}

class ExpansionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct PseudoGenerator {
    std::vector<int> exponents;
    BiDegree degree;
    int cost = 0;
    bool invertible = false;
    bool is_span = false;
};

inline long phi(std::pair<int, int> f, BiDegree d) { return static_cast<long>(f.first) * d.i + static_cast<long>(f.second) * d.j; }

/// Multipliers of the expanded module: free generators, then unit-coefficient
/// span monomials (named by their printed monomial).
inline std::vector<Multiplier> presentation_multipliers(const RingPresentation& pres, std::vector<std::vector<int>>* shifts) {
    std::vector<bool> in_span(pres.generators.size(), false);
    for (const auto& s : pres.spans)
        for (std::size_t k = 0; k < s.exponents.size(); ++k)
            if (s.exponents[k] != 0) in_span[k] = true;
    std::vector<Multiplier> out;
    for (std::size_t k = 0; k < pres.generators.size(); ++k) {
        if (in_span[k]) continue;
        out.push_back({pres.generators[k].name, pres.generators[k].degree});
        if (shifts) {
            std::vector<int> e(pres.generators.size(), 0);
            e[k] = 1;
            shifts->push_back(e);
        }
    }
    for (const auto& s : pres.spans) {
        if (s.p_power != 0 || s.is_constant()) continue;
        const std::string name = print_monomial(pres, s.exponents);
        if (std::any_of(out.begin(), out.end(), [&](const Multiplier& m) { return m.name == name; })) continue;
        BiDegree deg;
        for (std::size_t k = 0; k < s.exponents.size(); ++k) deg += pres.generators[k].degree * s.exponents[k];
        out.push_back({name, deg});
        if (shifts) shifts->push_back(s.exponents);
    }
    return out;
}

}  // namespace detail

/// Degreewise expansion of a presentation on a window.
inline BigradedModule expand(const RingPresentation& pres, const Window& window,
                             std::int64_t cell_budget = default_cell_budget()) {
    if (!is_prime(pres.prime)) throw ExpansionError("presentation has no valid prime");
    if (window.empty()) throw ExpansionError("empty window");
    if (window.cell_count() > cell_budget)
        throw ExpansionError("window has " + std::to_string(window.cell_count()) + " cells, over the budget of " +
                             std::to_string(cell_budget));
    const std::size_t n = pres.generators.size();
    for (const auto& g : pres.generators)
        if (g.degree.is_zero()) throw ExpansionError("generator '" + g.name + "' has degree (0,0); enumeration would not terminate");

    std::vector<std::vector<int>> shifts;
    const std::vector<Multiplier> multipliers = detail::presentation_multipliers(pres, &shifts);

    std::optional<int> constant_cost;
    std::vector<detail::PseudoGenerator> pseudo;
    {
        std::vector<bool> in_span(n, false);
        for (const auto& s : pres.spans)
            for (std::size_t k = 0; k < n; ++k)
                if (s.exponents[k] != 0) in_span[k] = true;
        for (std::size_t k = 0; k < n; ++k) {
            if (in_span[k]) continue;
            std::vector<int> e(n, 0);
            e[k] = 1;
            pseudo.push_back({e, pres.generators[k].degree, 0, pres.generators[k].invertible, false});
        }
        for (const auto& s : pres.spans) {
            if (s.is_constant()) {
                constant_cost = constant_cost ? std::min(*constant_cost, s.p_power) : s.p_power;
                continue;
            }
            BiDegree deg;
            for (std::size_t k = 0; k < n; ++k) deg += pres.generators[k].degree * s.exponents[k];
            if (deg.is_zero())
                throw ExpansionError("span " + print_term(pres, s) + " has degree (0,0); enumeration would not terminate");
            pseudo.push_back({s.exponents, deg, s.p_power, false, true});
        }
    }
    if (pres.spans.empty()) return ModuleBuilder(pres.prime, window, multipliers).build();

    // A grading functional vanishing on invertible directions and negative on
    // the rest bounds the exponents that can land in any given bidegree.
    std::vector<std::size_t> inv_idx, fin_idx;
    for (std::size_t k = 0; k < pseudo.size(); ++k) (pseudo[k].invertible ? inv_idx : fin_idx).push_back(k);
    auto independent = [&](BiDegree a, BiDegree b) { return static_cast<long>(a.i) * b.j - static_cast<long>(a.j) * b.i != 0; };
    if (inv_idx.size() > 2 || (inv_idx.size() == 2 && !independent(pseudo[inv_idx[0]].degree, pseudo[inv_idx[1]].degree)))
        throw ExpansionError("invertible generators have dependent degrees; enumeration would not terminate");

    std::optional<std::pair<int, int>> functional;
    for (int radius = 0; radius <= 64 && !functional; ++radius)
        for (int a = -radius; a <= radius && !functional; ++a)
            for (int b : {-(radius - std::abs(a)), radius - std::abs(a)}) {
                const std::pair<int, int> f{a, b};
                bool ok = true;
                for (auto k : inv_idx) ok = ok && detail::phi(f, pseudo[k].degree) == 0;
                for (auto k : fin_idx) ok = ok && detail::phi(f, pseudo[k].degree) < 0;
                if (ok) {
                    functional = f;
                    break;
                }
            }
    if (!functional)
        throw ExpansionError("no grading bounds the generator exponents; enumeration would not terminate");

    // Solve for up to two pseudo-generators with independent degrees; enumerate the rest.
    std::vector<std::size_t> solved = inv_idx;
    std::vector<std::size_t> enumerated;
    for (auto k : fin_idx) {
        if (solved.empty() || (solved.size() == 1 && independent(pseudo[solved[0]].degree, pseudo[k].degree)))
            solved.push_back(k);
        else
            enumerated.push_back(k);
    }

    std::map<std::vector<int>, int> best_cost;
    std::map<std::vector<int>, BiDegree> degree_of;
    std::vector<long> counts(pseudo.size(), 0);

    auto record = [&](BiDegree d) {
        std::vector<int> m(n, 0);
        int cost = 0;
        bool used_span = false;
        for (std::size_t k = 0; k < pseudo.size(); ++k) {
            if (counts[k] == 0) continue;
            for (std::size_t g = 0; g < n; ++g) m[g] += static_cast<int>(counts[k]) * pseudo[k].exponents[g];
            cost += static_cast<int>(counts[k]) * pseudo[k].cost;
            used_span = used_span || pseudo[k].is_span;
        }
        if (!used_span) {
            if (!constant_cost) return;
            cost += *constant_cost;
        }
        auto it = best_cost.find(m);
        if (it == best_cost.end() || cost < it->second) best_cost[m] = cost;
        degree_of[m] = d;
    };

    auto solve_rest = [&](BiDegree d, BiDegree rem) {
        for (auto k : solved) counts[k] = 0;
        if (solved.empty()) {
            if (rem.is_zero()) record(d);
            return;
        }
        if (solved.size() == 1) {
            const BiDegree g = pseudo[solved[0]].degree;
            long t;
            if (g.i != 0) {
                if (rem.i % g.i != 0) return;
                t = rem.i / g.i;
            } else {
                if (rem.j % g.j != 0) return;
                t = rem.j / g.j;
            }
            if (!(g * static_cast<int>(t) == rem)) return;
            if (t < 0 && !pseudo[solved[0]].invertible) return;
            counts[solved[0]] = t;
            record(d);
            return;
        }
        const BiDegree a = pseudo[solved[0]].degree, b = pseudo[solved[1]].degree;
        const long det = static_cast<long>(a.i) * b.j - static_cast<long>(a.j) * b.i;
        const long na = static_cast<long>(rem.i) * b.j - static_cast<long>(rem.j) * b.i;
        const long nb = static_cast<long>(a.i) * rem.j - static_cast<long>(a.j) * rem.i;
        if (na % det != 0 || nb % det != 0) return;
        const long ta = na / det, tb = nb / det;
        if (ta < 0 && !pseudo[solved[0]].invertible) return;
        if (tb < 0 && !pseudo[solved[1]].invertible) return;
        counts[solved[0]] = ta;
        counts[solved[1]] = tb;
        record(d);
    };

    for (const BiDegree d : window.cells()) {
        const long budget = -detail::phi(*functional, d);
        if (budget < 0) continue;
        // Depth-first over the enumerated pseudo-generators within the budget.
        std::function<void(std::size_t, long, BiDegree)> walk = [&](std::size_t idx, long left, BiDegree rem) {
            if (idx == enumerated.size()) {
                solve_rest(d, rem);
                return;
            }
            const auto k = enumerated[idx];
            const long step = -detail::phi(*functional, pseudo[k].degree);
            for (long c = 0; c * step <= left; ++c) {
                counts[k] = c;
                walk(idx + 1, left - c * step, rem - pseudo[k].degree * static_cast<int>(c));
            }
            counts[k] = 0;
        };
        walk(0, budget, d);
    }

    // Relations: the coefficient ideal of monomial m is generated by p^k over
    // relations p^k * mu with mu | m on the non-invertible coordinates.
    auto relation_order = [&](const std::vector<int>& m) {
        int c = kInfinity;
        for (const auto& r : pres.relations) {
            bool divides = true;
            for (std::size_t g = 0; g < n && divides; ++g)
                if (!pres.generators[g].invertible && r.exponents[g] > m[g]) divides = false;
            if (divides) c = std::min(c, r.p_power);
        }
        return c;
    };

    std::vector<BasisElement> elements;
    for (const auto& [m, a] : best_cost) {
        const int c = relation_order(m);
        if (c != kInfinity && a >= c) continue;
        BasisElement e;
        e.key = m;
        e.degree = degree_of.at(m);
        e.exponent = c == kInfinity ? kInfinity : c - a;
        e.coefficient_power = a;
        e.label = (a == 0 ? std::string{} : prime_power(pres.prime, a).get_str() + std::string(detail::kMiddleDot)) +
                  print_monomial(pres, m);
        elements.push_back(std::move(e));
    }

    MonomialShift shift = [&shifts](std::size_t xi, const std::vector<int>& key) -> std::optional<std::vector<int>> {
        std::vector<int> out = key;
        for (std::size_t g = 0; g < out.size(); ++g) out[g] += shifts[xi][g];
        return out;
    };
    return build_monomial_module(pres.prime, window, multipliers, std::move(elements), shift);
}

/// Expansion on the presentation's own `window` line.
inline BigradedModule expand(const RingPresentation& pres) {
    if (!pres.window) throw ExpansionError("presentation has no window line and none was given");
    return expand(pres, *pres.window);
}

}  // namespace fracture

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracture/bidegree.hpp"
#include "fracture/pgroup.hpp"
#include "fracture/snf.hpp"

namespace fracture {

/// Per-cell status bits. A cell with no bits set is `verified`.
enum class CellFlag : std::uint8_t {
    boundary_unverified = 1 << 0,    ///< value depends on bidegrees outside the window
    completion_degreewise = 1 << 1,  ///< degreewise completion; lim^1 not modelled
    ambiguous_extension = 1 << 2,    ///< assembled cell with a nontrivial extension problem
    cross_term_possible = 1 << 3,    ///< a kernel-to-boundary action term could be nonzero
};

class CellFlags {
  public:
    constexpr CellFlags() = default;
    constexpr CellFlags(CellFlag f) : bits_(static_cast<std::uint8_t>(f)) {}

    constexpr bool has(CellFlag f) const { return bits_ & static_cast<std::uint8_t>(f); }
    constexpr bool verified() const { return !has(CellFlag::boundary_unverified); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr CellFlags& operator|=(CellFlags o) {
        bits_ |= o.bits_;
        return *this;
    }
    constexpr CellFlags operator|(CellFlags o) const {
        CellFlags r = *this;
        r |= o;
        return r;
    }
    constexpr bool operator==(const CellFlags&) const = default;
    constexpr std::uint8_t bits() const { return bits_; }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.push_back(verified() ? "verified" : "boundary-unverified");
        if (has(CellFlag::completion_degreewise)) out.push_back("completion-degreewise");
        if (has(CellFlag::ambiguous_extension)) out.push_back("ambiguous-extension");
        if (has(CellFlag::cross_term_possible)) out.push_back("cross-term-possible");
        return out;
    }

    static std::optional<CellFlags> from_name(const std::string& name) {
        if (name == "verified") return CellFlags{};
        if (name == "boundary-unverified") return CellFlags{CellFlag::boundary_unverified};
        if (name == "completion-degreewise") return CellFlags{CellFlag::completion_degreewise};
        if (name == "ambiguous-extension") return CellFlags{CellFlag::ambiguous_extension};
        if (name == "cross-term-possible") return CellFlags{CellFlag::cross_term_possible};
        return std::nullopt;
    }

  private:
    std::uint8_t bits_ = 0;
};

class ModuleBuilder;

/// Degreewise description of a bigraded module over Z_p on a finite window:
/// one PGroup per bidegree (absent means zero) and one PHom per (multiplier,
/// bidegree) for each multiplier whose source and target lie in the window
/// (absent means the zero map).
///
/// Immutable once built; construct through ModuleBuilder.
class BigradedModule {
  public:
    using ActionKey = std::pair<std::string, BiDegree>;

    BigradedModule() = default;

    long prime() const { return prime_; }
    const Window& window() const { return window_; }
    const std::vector<Multiplier>& multipliers() const { return multipliers_; }
    const std::map<BiDegree, PGroup>& cells() const { return cells_; }
    const std::map<ActionKey, PHom>& actions() const { return actions_; }

    std::optional<Multiplier> multiplier(const std::string& name) const {
        for (const auto& m : multipliers_)
            if (m.name == name) return m;
        return std::nullopt;
    }

    /// Group at d. Throws std::out_of_range outside the window.
    PGroup cell(BiDegree d) const {
        if (!window_.contains(d)) throw std::out_of_range("BigradedModule::cell: " + to_string(d) + " outside window");
        auto it = cells_.find(d);
        return it == cells_.end() ? PGroup::zero(prime_) : it->second;
    }

    CellFlags flags(BiDegree d) const {
        auto it = flags_.find(d);
        return it == flags_.end() ? CellFlags{} : it->second;
    }
    const std::map<BiDegree, CellFlags>& all_flags() const { return flags_; }

    bool is_zero() const { return cells_.empty(); }

    /// Stored action of x from d to d + deg(x). Multiplication by the prime
    /// (degree (0,0), named by the prime) is answered directly.
    PHom act(const Multiplier& x, BiDegree d) const {
        const BiDegree e = d + x.degree;
        if (!window_.contains(d) || !window_.contains(e))
            throw std::out_of_range("act: " + x.name + " from " + to_string(d) + " leaves the window");
        const PGroup s = cell(d);
        if (x.degree.is_zero() && x.name == std::to_string(prime_))
            return PHom(s, s, Matrix::identity(s.generators()).scaled(Scalar(prime_)));
        auto known = multiplier(x.name);
        if (!known || known->degree != x.degree)
            throw std::invalid_argument("act: unknown multiplier " + x.name);
        auto it = actions_.find({x.name, d});
        if (it != actions_.end()) return it->second;
        return PHom::zero(s, cell(e));
    }

    PHom act(const std::string& name, BiDegree d) const {
        if (name == std::to_string(prime_)) return act(mult::scalar(prime_), d);
        auto x = multiplier(name);
        if (!x) throw std::invalid_argument("act: unknown multiplier " + name);
        return act(*x, d);
    }

    /// Restriction to a subwindow (cells, actions and flags inside it).
    BigradedModule restricted(const Window& w) const;

    /// Same data with additional flags on the given cells.
    BigradedModule with_flags(const std::map<BiDegree, CellFlags>& extra) const {
        BigradedModule out = *this;
        for (const auto& [d, f] : extra)
            if (window_.contains(d) && !f.empty()) out.flags_[d] |= f;
        return out;
    }

  private:
    friend class ModuleBuilder;

    long prime_ = 2;
    Window window_;
    std::vector<Multiplier> multipliers_;
    std::map<BiDegree, PGroup> cells_;
    std::map<ActionKey, PHom> actions_;
    std::map<BiDegree, CellFlags> flags_;
};

class ModuleBuilder {
  public:
    ModuleBuilder(long prime, Window window, std::vector<Multiplier> multipliers = {}) {
        if (!is_prime(prime)) throw std::invalid_argument("ModuleBuilder: prime expected");
        m_.prime_ = prime;
        m_.window_ = window;
        for (const auto& x : multipliers) add_multiplier(x);
    }

    ModuleBuilder& add_multiplier(const Multiplier& x) {
        for (const auto& y : m_.multipliers_) {
            if (y.name == x.name) {
                if (y.degree != x.degree)
                    throw std::invalid_argument("multiplier " + x.name + " declared with two degrees");
                return *this;
            }
        }
        m_.multipliers_.push_back(x);
        return *this;
    }

    /// Zero groups are not stored. Cells outside the window are rejected.
    ModuleBuilder& set_cell(BiDegree d, PGroup g) {
        if (!m_.window_.contains(d)) throw std::out_of_range("set_cell: " + to_string(d) + " outside window");
        if (g.prime() != m_.prime_) throw std::invalid_argument("set_cell: prime mismatch");
        if (g.is_zero())
            m_.cells_.erase(d);
        else
            m_.cells_.insert_or_assign(d, std::move(g));
        return *this;
    }

    /// Stores the action unless it is zero. The PHom's groups must match the
    /// cells at its source and target (checked by validate_module, not here).
    ModuleBuilder& set_action(const std::string& name, BiDegree d, PHom f) {
        auto x = m_.multiplier(name);
        if (!x) throw std::invalid_argument("set_action: undeclared multiplier " + name);
        if (!m_.window_.contains(d) || !m_.window_.contains(d + x->degree))
            throw std::out_of_range("set_action: " + name + " at " + to_string(d) + " leaves the window");
        if (f.is_zero())
            m_.actions_.erase({name, d});
        else
            m_.actions_.insert_or_assign({name, d}, std::move(f));
        return *this;
    }

    ModuleBuilder& flag(BiDegree d, CellFlags f) {
        if (!m_.window_.contains(d)) return *this;
        if (!f.empty()) m_.flags_[d] |= f;
        return *this;
    }

    PGroup cell(BiDegree d) const { return m_.cell(d); }
    const Window& window() const { return m_.window_; }

    BigradedModule build() const { return m_; }

  private:
    BigradedModule m_;
};

inline BigradedModule BigradedModule::restricted(const Window& w) const {
    if (!window_.contains(w)) throw std::invalid_argument("restricted: window is not a subwindow");
    ModuleBuilder b(prime_, w, multipliers_);
    for (const auto& [d, g] : cells_)
        if (w.contains(d)) b.set_cell(d, g);
    for (const auto& [key, f] : actions_) {
        auto x = multiplier(key.first);
        if (w.contains(key.second) && w.contains(key.second + x->degree)) b.set_action(key.first, key.second, f);
    }
    for (const auto& [d, f] : flags_) b.flag(d, f);
    return b.build();
}

/// Empty module with the given multipliers.
inline BigradedModule zero_module(long prime, Window window, std::vector<Multiplier> multipliers = {}) {
    return ModuleBuilder(prime, window, std::move(multipliers)).build();
}

/// One failed structural rule at one cell.
struct Violation {
    BiDegree cell;
    std::string rule;
    std::string detail;
};

/// Checks every BigradedModule invariant; empty result means valid.
inline std::vector<Violation> validate_module(const BigradedModule& m) {
    std::vector<Violation> out;
    const Window& w = m.window();
    for (const auto& [d, g] : m.cells()) {
        if (!w.contains(d)) out.push_back({d, "cell-in-window", "cell stored outside the window"});
        if (g.prime() != m.prime()) out.push_back({d, "prime", "cell prime differs from module prime"});
    }
    for (const auto& x : m.multipliers()) {
        BiDegree expected;
        if (standard_degree(x.name, expected) && expected != x.degree)
            out.push_back({BiDegree{}, "multiplier-degree", x.name + " must have degree " + to_string(expected)});
    }
    for (const auto& [key, f] : m.actions()) {
        const auto& [name, d] = key;
        auto x = m.multiplier(name);
        if (!x) {
            out.push_back({d, "multiplier-declared", "action by undeclared multiplier " + name});
            continue;
        }
        const BiDegree e = d + x->degree;
        if (!w.contains(d) || !w.contains(e)) {
            out.push_back({d, "action-in-window", name + " action leaves the window"});
            continue;
        }
        if (!f.source().same_structure(m.cell(d)))
            out.push_back({d, "action-source", name + " action source does not match the cell"});
        if (!f.target().same_structure(m.cell(e)))
            out.push_back({d, "action-target", name + " action target does not match cell " + to_string(e)});
        for (auto [r, c] : f.compatibility_violations())
            out.push_back({d, "torsion-compatibility",
                           name + " entry (" + std::to_string(r) + "," + std::to_string(c) + ") = " +
                               f.matrix()(r, c).get_str() + " is not divisible enough for the orders involved"});
    }
    if (!out.empty()) return out;

    // Commutativity of distinct multipliers on every square inside the window.
    const auto& xs = m.multipliers();
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); ++b) {
            const Multiplier& x = xs[a];
            const Multiplier& y = xs[b];
            for (const BiDegree d : w.cells()) {
                const BiDegree dx = d + x.degree, dy = d + y.degree, dxy = d + x.degree + y.degree;
                if (!w.contains(dx) || !w.contains(dy) || !w.contains(dxy)) continue;
                if (m.cell(d).is_zero() || m.cell(dxy).is_zero()) continue;
                const PHom xy = m.act(x, dy).after(m.act(y, d));
                const PHom yx = m.act(y, dx).after(m.act(x, d));
                if (!(xy == yx))
                    out.push_back({d, "commutativity", x.name + " and " + y.name + " do not commute"});
            }
        }
    return out;
}

/// Cellwise direct sum with block-diagonal actions.
inline BigradedModule direct_sum(const BigradedModule& a, const BigradedModule& b) {
    if (a.prime() != b.prime()) throw std::invalid_argument("direct_sum: prime mismatch");
    if (!(a.window() == b.window())) throw std::invalid_argument("direct_sum: window mismatch");
    {
        auto xs = a.multipliers(), ys = b.multipliers();
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        if (xs != ys) throw std::invalid_argument("direct_sum: multiplier sets differ");
    }
    ModuleBuilder out(a.prime(), a.window(), a.multipliers());
    for (const BiDegree d : a.window().cells()) {
        const PGroup ga = a.cell(d), gb = b.cell(d);
        if (!ga.is_zero() || !gb.is_zero()) out.set_cell(d, direct_sum(ga, gb).group);
        out.flag(d, a.flags(d) | b.flags(d));
    }
    for (const auto& x : a.multipliers())
        for (const BiDegree d : a.window().cells()) {
            const BiDegree e = d + x.degree;
            if (!a.window().contains(e)) continue;
            if (a.cell(d).is_zero() && b.cell(d).is_zero()) continue;
            out.set_action(x.name, d, direct_sum(a.act(x, d), b.act(x, d)));
        }
    return out.build();
}

/// Cellwise isomorphism type comparison; returns the cells that differ.
inline std::vector<BiDegree> structural_differences(const BigradedModule& a, const BigradedModule& b,
                                                    const Window& w) {
    std::vector<BiDegree> diff;
    for (const BiDegree d : w.cells())
        if (!a.cell(d).same_structure(b.cell(d))) diff.push_back(d);
    return diff;
}

}  // namespace fracture

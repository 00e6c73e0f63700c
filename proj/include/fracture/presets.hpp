#pragma once

// Built-in inputs (real motivic coefficient rings, as presentation text) and
// the expected equivariant answers, written out monomial by monomial.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracture/presentation.hpp"

namespace fracture {

enum class PresetKind { HF2_R, HZ2_R, KGL2_R, HFp_odd_R, HF2_C2, HZ2_C2, KR2_C2, HFp_odd_C2 };

struct PresetId {
    PresetKind kind = PresetKind::HF2_R;
    long prime = 2;

    bool is_input() const {
        return kind == PresetKind::HF2_R || kind == PresetKind::HZ2_R || kind == PresetKind::KGL2_R ||
               kind == PresetKind::HFp_odd_R;
    }
    bool operator==(const PresetId&) const = default;
};

class UnknownPreset : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

inline std::string preset_name(const PresetId& id) {
    switch (id.kind) {
        case PresetKind::HF2_R: return "HF2_R";
        case PresetKind::HZ2_R: return "HZ2_R";
        case PresetKind::KGL2_R: return "KGL2_R";
        case PresetKind::HFp_odd_R: return "HFp_odd_R(" + std::to_string(id.prime) + ")";
        case PresetKind::HF2_C2: return "HF2_C2";
        case PresetKind::HZ2_C2: return "HZ2_C2";
        case PresetKind::KR2_C2: return "KR2_C2";
        case PresetKind::HFp_odd_C2: return "HFp_odd_C2(" + std::to_string(id.prime) + ")";
    }
    return {};
}

/// Accepts short CLI names (hf2, hz2, kgl2, hfp, hf2-c2, ...) and the full
/// names (HF2_R, HFp_odd_R, ...). `odd_prime` fills in p for the odd-prime presets.
inline std::optional<PresetId> find_preset(std::string name, long odd_prime = 3) {
    std::string s;
    for (char c : name) s += static_cast<char>(c == '-' ? '_' : std::tolower(static_cast<unsigned char>(c)));
    struct Entry {
        const char* a;
        const char* b;
        PresetKind kind;
    };
    static const Entry table[] = {
        {"hf2", "hf2_r", PresetKind::HF2_R},           {"hz2", "hz2_r", PresetKind::HZ2_R},
        {"kgl2", "kgl2_r", PresetKind::KGL2_R},        {"hfp", "hfp_odd_r", PresetKind::HFp_odd_R},
        {"hf2_c2", "hf2_c2", PresetKind::HF2_C2},      {"hz2_c2", "hz2_c2", PresetKind::HZ2_C2},
        {"kr2_c2", "kr2", PresetKind::KR2_C2},         {"hfp_c2", "hfp_odd_c2", PresetKind::HFp_odd_C2},
    };
    for (const auto& e : table)
        if (s == e.a || s == e.b) {
            const bool odd = e.kind == PresetKind::HFp_odd_R || e.kind == PresetKind::HFp_odd_C2;
            if (odd && (odd_prime == 2 || !is_prime(odd_prime))) return std::nullopt;
            return PresetId{e.kind, odd ? odd_prime : 2};
        }
    return std::nullopt;
}

/// Presentation source of an input preset.
inline std::string preset_source(const PresetId& id) {
    switch (id.kind) {
        case PresetKind::HF2_R:
            return "# F_2[tau, rho]\n"
                   "prime 2\n"
                   "gen rho -1 -1\n"
                   "gen tau 0 -1\n"
                   "rel 2\xC2\xB7" "1\n"
                   "span 1\xC2\xB7" "1\n";
        case PresetKind::HZ2_R:
            return "# Z_2[rho, tau^2] / (2 rho)\n"
                   "prime 2\n"
                   "gen rho -1 -1\n"
                   "gen tau2 0 -2\n"
                   "rel 2\xC2\xB7rho\n"
                   "span 1\xC2\xB7" "1\n";
        case PresetKind::KGL2_R:
            return "# Z_2[rho, 2 tau^2, tau^4, v1] / (2 rho, v1 rho^3)\n"
                   "prime 2\n"
                   "gen rho -1 -1\n"
                   "gen tau2 0 -2\n"
                   "gen v1 2 1\n"
                   "rel 2\xC2\xB7rho\n"
                   "rel 1\xC2\xB7v1*rho^3\n"
                   "span 1\xC2\xB7" "1\n"
                   "span 2\xC2\xB7tau2\n"
                   "span 1\xC2\xB7tau2^2\n";
        case PresetKind::HFp_odd_R: {
            const std::string p = std::to_string(id.prime);
            return "# F_p[tau^2], rho acting by zero\n"
                   "prime " + p + "\n"
                   "gen rho -1 -1\n"
                   "gen tau2 0 -2\n"
                   "rel " + p + "\xC2\xB7" "1\n"
                   "rel 1\xC2\xB7rho\n"
                   "span 1\xC2\xB7" "1\n";
        }
        default:
            throw UnknownPreset(preset_name(id) + " is an expected answer, not a presentation");
    }
}

inline RingPresentation preset_presentation(const PresetId& id) { return parse_presentation(preset_source(id)); }

namespace detail {

inline int enumeration_bound(const Window& w) {
    return 2 * std::max({std::abs(w.imin), std::abs(w.imax), std::abs(w.jmin), std::abs(w.jmax)}) + 4;
}

/// Negative cone d rho^{-a} tau^{-b}, a, b >= 1, at (a-1, a + b*w); keys {1, a, b}.
inline void add_negative_cone(std::vector<BasisElement>& out, const Window& win, int w, const std::string& tau_name) {
    const int n = enumeration_bound(win);
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            const BiDegree d{a - 1, a + b * w};
            if (!win.contains(d)) continue;
            std::string label = "d rho^-" + std::to_string(a) + " " + tau_name + "^-" + std::to_string(b);
            out.push_back({{1, a, b}, d, 1, 0, label});
        }
}

/// Negative-cone shift: rho and the tau-power decrement, everything else kills.
inline std::optional<std::vector<int>> negative_cone_shift(bool is_rho, bool is_tau, const std::vector<int>& key) {
    if (is_rho) {
        if (key[1] == 1) return std::nullopt;
        return std::vector<int>{1, key[1] - 1, key[2]};
    }
    if (is_tau) {
        if (key[2] == 1) return std::nullopt;
        return std::vector<int>{1, key[1], key[2] - 1};
    }
    return std::nullopt;
}

inline std::string power_label(const std::string& name, int e) {
    if (e == 0) return {};
    return e == 1 ? name : name + "^" + std::to_string(e);
}

inline std::string join_labels(std::initializer_list<std::string> parts) {
    std::string out;
    for (const auto& p : parts) {
        if (p.empty()) continue;
        if (!out.empty()) out += ' ';
        out += p;
    }
    return out.empty() ? "1" : out;
}

inline BigradedModule hf2_c2(const Window& win) {
    const std::vector<Multiplier> xs{mult::rho(), mult::tau()};
    std::vector<BasisElement> el;
    const int n = enumeration_bound(win);
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) {
            const BiDegree d{-a, -a - b};
            if (win.contains(d)) el.push_back({{0, a, b}, d, 1, 0, join_labels({power_label("rho", a), power_label("tau", b)})});
        }
    add_negative_cone(el, win, 1, "tau");
    auto shift = [](std::size_t x, const std::vector<int>& k) -> std::optional<std::vector<int>> {
        if (k[0] == 1) return negative_cone_shift(x == 0, x == 1, k);
        return x == 0 ? std::vector<int>{0, k[1] + 1, k[2]} : std::vector<int>{0, k[1], k[2] + 1};
    };
    return build_monomial_module(2, win, xs, std::move(el), shift);
}

inline BigradedModule hz2_c2(const Window& win) {
    const std::vector<Multiplier> xs{mult::rho(), mult::tau2()};
    std::vector<BasisElement> el;
    const int n = enumeration_bound(win);
    for (int a = 0; a <= n; ++a)
        for (int t = -n; t <= n; ++t) {
            const BiDegree d{-a, -a - 2 * t};
            if (!win.contains(d)) continue;
            const std::string mono = join_labels({power_label("rho", a), power_label("tau2", t)});
            if (a >= 1) {
                if (t >= 0) el.push_back({{0, a, t}, d, 1, 0, mono});
            } else if (t >= 0) {
                el.push_back({{0, 0, t}, d, kInfinity, 0, mono});
            } else {
                el.push_back({{0, 0, t}, d, kInfinity, 1, "2 " + mono});
            }
        }
    add_negative_cone(el, win, 2, "tau2");
    auto shift = [](std::size_t x, const std::vector<int>& k) -> std::optional<std::vector<int>> {
        if (k[0] == 1) return negative_cone_shift(x == 0, x == 1, k);
        return x == 0 ? std::vector<int>{0, k[1] + 1, k[2]} : std::vector<int>{0, k[1], k[2] + 1};
    };
    return build_monomial_module(2, win, xs, std::move(el), shift);
}

/// Positive part: rho^a tau^{2n} v1^c with coefficient 1 or 2, subject to
/// 2 rho = 0 and v1 rho^3 = 0.
inline BigradedModule kr2_c2(const Window& win) {
    const std::vector<Multiplier> xs{mult::rho(), mult::v1(), Multiplier{"tau2^2", {0, -4}}};
    std::vector<BasisElement> el;
    const int n = enumeration_bound(win);
    for (int a = 0; a <= n; ++a)
        for (int c = 0; c <= n; ++c) {
            if (c >= 1 && a > 2) continue;
            for (int t = -n; t <= n; ++t) {
                const BiDegree d{2 * c - a, c - a - 2 * t};
                if (!win.contains(d)) continue;
                const bool unit = t % 2 == 0 && (t >= 0 || c >= 1);
                if (a >= 1 && !unit) continue;
                const std::string mono = join_labels({power_label("rho", a), power_label("tau2", t), power_label("v1", c)});
                el.push_back({{0, a, t, c}, d, a >= 1 ? 1 : kInfinity, unit ? 0 : 1, unit ? mono : "2 " + mono});
            }
        }
    add_negative_cone(el, win, 4, "tau4");
    auto shift = [](std::size_t x, const std::vector<int>& k) -> std::optional<std::vector<int>> {
        if (k[0] == 1) {
            auto s = negative_cone_shift(x == 0, x == 2, k);
            if (s) s->push_back(0);
            return s;
        }
        if (x == 0) return std::vector<int>{0, k[1] + 1, k[2], k[3]};
        if (x == 1) return std::vector<int>{0, k[1], k[2], k[3] + 1};
        return std::vector<int>{0, k[1], k[2] + 2, k[3]};
    };
    // Negative-cone keys get a trailing 0 so that they never collide with positive keys.
    for (auto& e : el)
        if (e.key[0] == 1) e.key.push_back(0);
    return build_monomial_module(2, win, xs, std::move(el), shift);
}

inline BigradedModule hfp_odd_c2(long p, const Window& win) {
    const std::vector<Multiplier> xs{mult::rho(), mult::tau2()};
    std::vector<BasisElement> el;
    const int n = enumeration_bound(win);
    for (int t = -n; t <= n; ++t) {
        const BiDegree d{0, -2 * t};
        if (win.contains(d)) el.push_back({{t}, d, 1, 0, power_label("tau2", t).empty() ? "1" : power_label("tau2", t)});
    }
    auto shift = [](std::size_t x, const std::vector<int>& k) -> std::optional<std::vector<int>> {
        if (x == 0) return std::nullopt;
        return std::vector<int>{k[0] + 1};
    };
    return build_monomial_module(p, win, xs, std::move(el), shift);
}

}  // namespace detail

/// The preset as a module on `window`: inputs are expanded from their
/// presentation, answers are built directly.
inline BigradedModule preset(const PresetId& id, const Window& window) {
    if (window.empty()) throw std::invalid_argument("preset: empty window");
    switch (id.kind) {
        case PresetKind::HF2_R:
        case PresetKind::HZ2_R:
        case PresetKind::KGL2_R:
        case PresetKind::HFp_odd_R: return expand(preset_presentation(id), window);
        case PresetKind::HF2_C2: return detail::hf2_c2(window);
        case PresetKind::HZ2_C2: return detail::hz2_c2(window);
        case PresetKind::KR2_C2: return detail::kr2_c2(window);
        case PresetKind::HFp_odd_C2: return detail::hfp_odd_c2(id.prime, window);
    }
    throw UnknownPreset("unknown preset");
}

inline BigradedModule preset(const std::string& name, const Window& window, long odd_prime = 3) {
    auto id = find_preset(name, odd_prime);
    if (!id) throw UnknownPreset("unknown preset '" + name + "'");
    return preset(*id, window);
}

/// The expected answer for an input preset.
inline PresetId expected_answer(const PresetId& input) {
    switch (input.kind) {
        case PresetKind::HF2_R: return {PresetKind::HF2_C2, 2};
        case PresetKind::HZ2_R: return {PresetKind::HZ2_C2, 2};
        case PresetKind::KGL2_R: return {PresetKind::KR2_C2, 2};
        case PresetKind::HFp_odd_R: return {PresetKind::HFp_odd_C2, input.prime};
        default: throw UnknownPreset(preset_name(input) + " is not an input preset");
    }
}

inline std::vector<PresetId> input_presets(long odd_prime = 3) {
    return {{PresetKind::HF2_R, 2}, {PresetKind::HZ2_R, 2}, {PresetKind::KGL2_R, 2}, {PresetKind::HFp_odd_R, odd_prime}};
}

}  // namespace fracture

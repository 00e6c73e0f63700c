#pragma once

// Inverting and completing at a multiplier, degreewise on a finite window.
//
// invert(M, x, K) replaces the cell at d by the stage M_{d + k deg x} of the
// x-telescope, with k = min(K, number of steps that stay in the window). A
// cell counts as verified when x is an isomorphism from that stage to the
// window edge.
// complete(M, x, K) replaces it by M_d / x^K M_{d - K deg x}, verified when
// the quotient no longer changes out to the window edge.

#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracture/module.hpp"
#include "fracture/snf.hpp"

namespace fracture {

/// x^k : M_d -> M_{d + k deg x}, composed from the stored actions.
inline PHom transport(const BigradedModule& m, const Multiplier& x, BiDegree d, int k) {
    PHom f = PHom::identity(m.cell(d));
    BiDegree at = d;
    for (int s = 0; s < k; ++s) {
        f = m.act(x, at).after(f);
        at += x.degree;
    }
    return f;
}

/// Default number of telescope stages for a window.
inline int default_steps(const Window& w) { return std::max(1, w.diameter()); }

namespace detail {

inline Multiplier require_multiplier(const BigradedModule& m, const Multiplier& x) {
    if (x.degree.is_zero()) throw std::invalid_argument("multiplier " + x.name + " has degree (0,0)");
    auto known = m.multiplier(x.name);
    if (!known) throw std::invalid_argument("module has no multiplier named " + x.name);
    if (known->degree != x.degree) throw std::invalid_argument("multiplier " + x.name + " has a different degree here");
    return *known;
}

inline bool iso_cached(std::map<BiDegree, bool>& cache, const BigradedModule& m, const Multiplier& x, BiDegree d) {
    auto it = cache.find(d);
    if (it != cache.end()) return it->second;
    const PHom f = m.act(x, d);
    const bool iso = f.source().is_zero() && f.target().is_zero() ? true : is_isomorphism(f);
    return cache[d] = iso;
}

/// x is an isomorphism at d and at every later cell of the ray that stays in the window.
inline bool tail_iso(std::map<BiDegree, bool>& iso, std::map<BiDegree, bool>& tail, const BigradedModule& m,
                     const Multiplier& x, BiDegree d) {
    std::vector<BiDegree> ray;
    for (BiDegree at = d; m.window().contains(at + x.degree) && !tail.count(at); at += x.degree) ray.push_back(at);
    for (auto it = ray.rbegin(); it != ray.rend(); ++it) {
        const BiDegree next = *it + x.degree;
        auto known = tail.find(next);
        const bool rest = known == tail.end() ? true : known->second;
        tail[*it] = rest && iso_cached(iso, m, x, *it);
    }
    auto it = tail.find(d);
    return it == tail.end() ? true : it->second;
}

}  // namespace detail

/// Telescope stage chosen for each cell by invert().
inline int invert_stage(const Window& w, BiDegree d, const Multiplier& x, int steps) {
    return w.ray_length(d, x.degree, steps);
}

inline BigradedModule invert(const BigradedModule& m, const Multiplier& x_in, int steps) {
    if (steps < 1) throw std::invalid_argument("invert: steps must be >= 1");
    const Multiplier x = detail::require_multiplier(m, x_in);
    const Window& w = m.window();
    ModuleBuilder b(m.prime(), w, m.multipliers());

    std::map<BiDegree, int> stage;
    std::map<BiDegree, bool> iso, tail;
    for (const BiDegree d : w.cells()) {
        const int k = invert_stage(w, d, x, steps);
        stage[d] = k;
        const BiDegree s = d + x.degree * k;
        b.set_cell(d, m.cell(s));
        bool ok = k == steps && detail::tail_iso(iso, tail, m, x, d + x.degree * (k - 1));
        for (int t = 0; t <= k && ok; ++t) ok = m.flags(d + x.degree * t).verified();
        CellFlags f;
        if (!ok) f |= CellFlag::boundary_unverified;
        // Caveats other than verification carry over from the cell actually used.
        for (CellFlag extra : {CellFlag::completion_degreewise, CellFlag::ambiguous_extension, CellFlag::cross_term_possible})
            if (m.flags(s).has(extra)) f |= extra;
        if (!f.empty()) b.flag(d, f);
    }

    for (const auto& y : m.multipliers()) {
        for (const BiDegree d : w.cells()) {
            const BiDegree e = d + y.degree;
            if (!w.contains(e)) continue;
            const int kd = stage.at(d), ke = stage.at(e);
            const PGroup src = m.cell(d + x.degree * kd), tgt = m.cell(e + x.degree * ke);
            if (src.is_zero() || tgt.is_zero()) continue;
            PHom f;
            if (y.name == x.name) {
                // x shifts the telescope: stage kd at d is stage kd - 1 at d + deg x.
                const int kd1 = kd - 1;
                if (kd1 <= ke) {
                    f = transport(m, x, d + x.degree * kd, ke - kd1);
                } else {
                    auto back = inverse(transport(m, x, e + x.degree * ke, kd1 - ke));
                    if (!back) continue;
                    f = *back;
                }
            } else if (kd <= ke) {
                f = transport(m, x, e + x.degree * kd, ke - kd).after(m.act(y, d + x.degree * kd));
            } else {
                auto back = inverse(transport(m, x, d + x.degree * ke, kd - ke));
                if (!back) continue;
                f = m.act(y, d + x.degree * ke).after(*back);
            }
            b.set_action(y.name, d, f);
        }
    }
    return b.build();
}

inline BigradedModule invert(const BigradedModule& m, const Multiplier& x) {
    return invert(m, x, default_steps(m.window()));
}

/// Number of quotient stages complete() uses at d.
inline int complete_stage(const Window& w, BiDegree d, const Multiplier& x, int steps) {
    return w.ray_length(d, -x.degree, steps);
}

inline BigradedModule complete(const BigradedModule& m, const Multiplier& x_in, int steps) {
    if (steps < 1) throw std::invalid_argument("complete: steps must be >= 1");
    const Multiplier x = detail::require_multiplier(m, x_in);
    const Window& w = m.window();
    ModuleBuilder b(m.prime(), w, m.multipliers());

    std::map<BiDegree, Cokernel> quotient;
    std::map<BiDegree, int> stage;
    for (const BiDegree d : w.cells()) {
        const int k = complete_stage(w, d, x, steps);
        stage[d] = k;
        const BiDegree base = d - x.degree * k;
        bool ok = k == steps;
        // Cells before the window are unknown and read as zero, leaving M_d.
        Cokernel q(ok ? transport(m, x, base, k) : PHom::zero(PGroup::zero(m.prime()), m.cell(d)));
        b.set_cell(d, q.group());
        if (ok) {
            // Images only shrink along the ray, so agreement at the far end means the tower is flat from K on.
            const int far = w.ray_length(d, -x.degree, std::numeric_limits<int>::max());
            if (far > k) ok = Cokernel(transport(m, x, d - x.degree * far, far)).group().same_structure(q.group());
        }
        for (int t = 0; t <= k && ok; ++t) ok = m.flags(base + x.degree * t).verified();
        CellFlags f{CellFlag::completion_degreewise};
        if (!ok) f |= CellFlag::boundary_unverified;
        b.flag(d, f);
        quotient.emplace(d, std::move(q));
    }

    for (const auto& y : m.multipliers()) {
        for (const BiDegree d : w.cells()) {
            const BiDegree e = d + y.degree;
            if (!w.contains(e)) continue;
            const Cokernel& qs = quotient.at(d);
            const Cokernel& qt = quotient.at(e);
            if (qs.group().is_zero() || qt.group().is_zero()) continue;
            const Matrix mat = qt.projection().matrix() * m.act(y, d).matrix() * qs.section();
            PHom f(qs.group(), qt.group(), mat);
            // Near the boundary fewer quotient stages at the source can leave the map undefined.
            if (!f.is_well_defined()) continue;
            b.set_action(y.name, d, f);
        }
    }
    return b.build();
}

inline BigradedModule complete(const BigradedModule& m, const Multiplier& x) {
    return complete(m, x, default_steps(m.window()));
}

/// Cells where x^k M_{d - k deg x} -> M_d is still nonzero for the longest
/// ray inside the window, among cells whose ray has at least `min_ray` steps.
/// Over Z_p, M_d / N = M_d forces N = 0, so these are exactly the cells where
/// the completion tower visibly differs from M.
inline std::vector<BiDegree> completeness_failures(const BigradedModule& m, const Multiplier& x_in, int min_ray = 1) {
    const Multiplier x = detail::require_multiplier(m, x_in);
    const Window& w = m.window();
    std::vector<BiDegree> bad;
    for (const BiDegree d : w.cells()) {
        if (m.cell(d).is_zero()) continue;
        const int k = w.ray_length(d, -x.degree, std::numeric_limits<int>::max());
        if (k < std::max(1, min_ray)) continue;
        PHom g = PHom::identity(m.cell(d));
        for (int s = 1; s <= k && !g.is_zero(); ++s) g = g.after(m.act(x, d - x.degree * s));
        if (!g.is_zero()) bad.push_back(d);
    }
    return bad;
}

inline bool is_degreewise_complete(const BigradedModule& m, const Multiplier& x, int min_ray = 1) {
    return completeness_failures(m, x, min_ray).empty();
}

}  // namespace fracture

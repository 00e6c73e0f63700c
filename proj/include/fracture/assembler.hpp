#pragma once

// The square  M_h -> M_t <- M_Phi  and its Mayer-Vietoris splice
//   0 -> coker phi_{(i+1,j)} -> result_{(i,j)} -> ker phi_{(i,j)} -> 0,
// with phi = [h -> t | -(Phi -> t)].

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracture/localization.hpp"
#include "fracture/presentation.hpp"

namespace fracture {

/// Raised when the input is not (asserted, or checked to be) rho-complete.
class ContractError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline const char* rho_complete_contract() {
    return "the realization recipe applies only to rho-complete inputs (the homotopy completion is the "
           "tau-inverted rho-completion)";
}

/// The multipliers playing the roles of rho and of the inverted tau-power.
struct SquareMultipliers {
    Multiplier rho;
    Multiplier tau;
};

inline std::optional<SquareMultipliers> find_square_multipliers(const std::vector<Multiplier>& xs) {
    std::optional<Multiplier> rho, tau;
    for (const auto& x : xs)
        if (x.name == "rho") rho = x;
    if (!rho)
        for (const auto& x : xs)
            if (x.degree == BiDegree{-1, -1}) {
                rho = x;
                break;
            }
    for (const auto& x : xs)
        if (x.degree.i == 0 && x.degree.j < 0 && (!tau || x.degree.j > tau->degree.j)) tau = x;
    if (!rho || !tau) return std::nullopt;
    return SquareMultipliers{*rho, *tau};
}

inline SquareMultipliers require_square_multipliers(const BigradedModule& m) {
    auto s = find_square_multipliers(m.multipliers());
    if (!s) throw std::invalid_argument("module needs a rho multiplier of degree (-1,-1) and a tau-power of degree (0,-w)");
    return *s;
}

struct SquareCorners {
    SquareMultipliers multipliers;
    int steps = 1;
    BigradedModule input;
    BigradedModule h;
    BigradedModule phi;
    BigradedModule tate;
    std::map<BiDegree, PHom> map_h_t;
    std::map<BiDegree, PHom> map_phi_t;
};

/// Throws ContractError unless rho_complete is asserted and the input passes
/// the degreewise completeness check on cells with at least `min_ray` rho-steps.
inline void check_rho_complete(const BigradedModule& m, bool rho_complete, int min_ray = 1) {
    if (!rho_complete) throw ContractError(std::string("refusing to realize: rho-completeness not asserted; ") + rho_complete_contract());
    const auto s = require_square_multipliers(m);
    const auto bad = completeness_failures(m, s.rho, min_ray);
    if (!bad.empty())
        throw ContractError("refusing to realize: input is not degreewise rho-complete at " + to_string(bad.front()) +
                            " (" + std::to_string(bad.size()) + " cells); " + rho_complete_contract());
}

inline SquareCorners corners(const BigradedModule& m, bool rho_complete, int steps, int min_ray = 1) {
    check_rho_complete(m, rho_complete, min_ray);
    SquareCorners c;
    c.multipliers = require_square_multipliers(m);
    c.steps = steps;
    c.input = m;
    const Multiplier& rho = c.multipliers.rho;
    const Multiplier& tau = c.multipliers.tau;
    c.h = invert(m, tau, steps);
    c.phi = invert(m, rho, steps);
    c.tate = invert(c.h, rho, steps);

    const Window& w = m.window();
    for (const BiDegree d : w.cells()) {
        const int kt = invert_stage(w, d, rho, steps);
        if (!c.h.cell(d).is_zero() && !c.tate.cell(d).is_zero()) c.map_h_t.emplace(d, transport(c.h, rho, d, kt));
        if (c.phi.cell(d).is_zero() || c.tate.cell(d).is_zero()) continue;
        // phi_d = M_{d + kp rho}, tate_d = M_{d + kt rho + kh tau}.
        const int kp = invert_stage(w, d, rho, steps);
        const BiDegree at = d + rho.degree * kt;
        const int kh = invert_stage(w, at, tau, steps);
        PHom along_rho;
        if (kp <= kt) {
            along_rho = transport(m, rho, d + rho.degree * kp, kt - kp);
        } else {
            auto back = inverse(transport(m, rho, at, kp - kt));
            if (!back) continue;
            along_rho = *back;
        }
        c.map_phi_t.emplace(d, transport(m, tau, at, kh).after(along_rho));
    }
    return c;
}

inline SquareCorners corners(const BigradedModule& m, bool rho_complete) {
    return corners(m, rho_complete, default_steps(m.window()));
}

enum class ExtensionStatus { split, ambiguous };

struct CellProvenance {
    PGroup ker_part;    ///< ker phi_d
    PGroup coker_part;  ///< coker phi_{d+(1,0)}
    ExtensionStatus status = ExtensionStatus::split;
    bool certified = false;
};

struct AssemblyReport {
    BigradedModule result;
    std::map<BiDegree, CellProvenance> provenance;
    SquareCorners corners;

    /// Cells whose exactness certificate failed.
    std::vector<BiDegree> uncertified() const {
        std::vector<BiDegree> out;
        for (const auto& [d, p] : provenance)
            if (!p.certified) out.push_back(d);
        return out;
    }
    std::vector<BiDegree> ambiguous() const {
        std::vector<BiDegree> out;
        for (const auto& [d, p] : provenance)
            if (p.status == ExtensionStatus::ambiguous) out.push_back(d);
        return out;
    }
};

namespace detail {

/// phi_d : h_d (+) Phi_d -> t_d, together with the sum decomposition of the source.
struct SpliceMap {
    GroupSum source;
    PHom map;
};

inline SpliceMap splice_map(const SquareCorners& c, BiDegree d) {
    GroupSum s = direct_sum(c.h.cell(d), c.phi.cell(d));
    const PGroup t = c.tate.cell(d);
    Matrix m(t.generators(), s.group.generators());
    if (auto it = c.map_h_t.find(d); it != c.map_h_t.end()) m = m + it->second.matrix() * s.project_a;
    if (auto it = c.map_phi_t.find(d); it != c.map_phi_t.end()) m = m - it->second.matrix() * s.project_b;
    PHom f(s.group, t, std::move(m));
    return {std::move(s), std::move(f)};
}

inline int log_order(const PGroup& g) { return g.torsion_length(); }

/// Exactness bookkeeping for one splice: |ker| |im| = |source|, |coker| |im| = |target|,
/// with ranks in place of orders for the free parts.
inline bool splice_exact(const PHom& f, const PGroup& ker, const PGroup& coker) {
    const PGroup im = image(f);
    const PGroup& s = f.source();
    const PGroup& t = f.target();
    if (ker.rank() + im.rank() != s.rank() || coker.rank() + im.rank() != t.rank()) return false;
    if (s.is_finite() && log_order(ker) + log_order(im) != log_order(s)) return false;
    if (t.is_finite() && log_order(coker) + log_order(im) != log_order(t)) return false;
    return true;
}

}  // namespace detail

/// Splice the square on the cells of `out` (which must lie in the corners' window).
/// Cells whose right neighbour (i+1,j) is outside the corners' window are flagged unverified.
inline AssemblyReport assemble(const SquareCorners& c, const Window& out) {
    const Window& w = c.input.window();
    if (c.h.window() != w || c.phi.window() != w || c.tate.window() != w)
        throw std::invalid_argument("assemble: corners have different windows");
    if (c.h.prime() != c.phi.prime() || c.h.prime() != c.tate.prime())
        throw std::invalid_argument("assemble: corners have different primes");
    if (!w.contains(out)) throw std::invalid_argument("assemble: output window exceeds the corners' window");

    const BiDegree right{1, 0};
    Window need = out;
    need.imax = std::min(out.imax + 1, w.imax);

    std::map<BiDegree, detail::SpliceMap> splice;
    std::map<BiDegree, Kernel> kers;
    std::map<BiDegree, Cokernel> cokers;
    for (const BiDegree d : need.cells()) {
        auto s = detail::splice_map(c, d);
        kers.emplace(d, Kernel(s.map));
        cokers.emplace(d, Cokernel(s.map));
        splice.emplace(d, std::move(s));
    }

    const long p = c.input.prime();
    AssemblyReport rep;
    ModuleBuilder b(p, out, c.input.multipliers());
    std::map<BiDegree, GroupSum> sums;
    for (const BiDegree d : out.cells()) {
        const PGroup& kg = kers.at(d).group();
        const bool has_right = need.contains(d + right);
        const PGroup cg = has_right ? cokers.at(d + right).group() : PGroup::zero(p);
        GroupSum sum = direct_sum(kg, cg);
        b.set_cell(d, sum.group);

        CellProvenance prov;
        prov.ker_part = kg;
        prov.coker_part = cg;
        prov.status = (!kg.is_zero() && !cg.is_zero()) ? ExtensionStatus::ambiguous : ExtensionStatus::split;
        const PGroup& r = sum.group;
        bool cert = r.rank() == kg.rank() + cg.rank() && r.torsion_length() == kg.torsion_length() + cg.torsion_length();
        cert = cert && detail::splice_exact(splice.at(d).map, kg, cokers.at(d).group());
        if (has_right) cert = cert && detail::splice_exact(splice.at(d + right).map, kers.at(d + right).group(), cg);
        prov.certified = cert;

        CellFlags f;
        bool verified = has_right;
        for (const BiDegree e : {d, d + right}) {
            if (!need.contains(e)) continue;
            for (const BigradedModule* corner : {&c.h, &c.phi, &c.tate}) {
                verified = verified && corner->flags(e).verified();
                for (CellFlag extra : {CellFlag::completion_degreewise})
                    if (corner->flags(e).has(extra)) f |= extra;
            }
        }
        if (!verified) f |= CellFlag::boundary_unverified;
        if (prov.status == ExtensionStatus::ambiguous) f |= CellFlag::ambiguous_extension;
        if (!f.empty()) b.flag(d, f);
        rep.provenance.emplace(d, std::move(prov));
        sums.emplace(d, std::move(sum));
    }

    for (const auto& y : c.input.multipliers()) {
        for (const BiDegree d : out.cells()) {
            const BiDegree e = d + y.degree;
            if (!out.contains(e)) continue;
            const GroupSum& ss = sums.at(d);
            const GroupSum& ts = sums.at(e);
            if (ss.group.is_zero() || ts.group.is_zero()) continue;
            Matrix m(ts.group.generators(), ss.group.generators());

            // Kernel part: restrict y on h (+) Phi.
            const Kernel& ks = kers.at(d);
            const Kernel& kt = kers.at(e);
            if (!ks.group().is_zero() && !kt.group().is_zero()) {
                // Same basis order as the splice sources at d and e.
                const PHom yy = direct_sum(c.h.act(y, d), c.phi.act(y, d));
                const Matrix moved = yy.matrix() * ks.inclusion().matrix();
                if (auto coords = kt.coordinates(moved)) m = m + ts.inject_a * (*coords) * ss.project_a;
            }

            // Cokernel part: y on the Tate corner one column to the right.
            const BiDegree dr = d + right, er = e + right;
            if (need.contains(dr) && need.contains(er)) {
                const Cokernel& qs = cokers.at(dr);
                const Cokernel& qt = cokers.at(er);
                if (!qs.group().is_zero() && !qt.group().is_zero()) {
                    const Matrix moved = qt.projection().matrix() * c.tate.act(y, dr).matrix() * qs.section();
                    m = m + ts.inject_b * moved * ss.project_b;
                }
            }
            PHom f(ss.group, ts.group, std::move(m));
            if (!f.is_well_defined()) throw std::logic_error("assemble: induced action of " + y.name + " at " + to_string(d) + " is not well defined");
            b.set_action(y.name, d, f);

            if (!ks.group().is_zero() && !rep.provenance.at(e).coker_part.is_zero())
                b.flag(d, CellFlag::cross_term_possible);
        }
    }
    rep.result = b.build();
    rep.corners = c;
    return rep;
}

inline AssemblyReport assemble(const SquareCorners& c) { return assemble(c, c.input.window()); }

/// Realize a module as given: corners and splice on its own window.
inline AssemblyReport realize(const BigradedModule& m, bool rho_complete, int steps) {
    return assemble(corners(m, rho_complete, steps));
}

inline AssemblyReport realize(const BigradedModule& m, bool rho_complete) {
    return realize(m, rho_complete, default_steps(m.window()));
}

/// Window on which a presentation must be expanded so that every cell of
/// `w` is computed from full telescopes of `steps` stages, and every cell
/// used has at least `steps` rho-steps for the completeness check.
inline Window padded_window(const Window& w, int steps, int tau_weight) {
    return w.grown(steps, steps + 1, (tau_weight + 1) * steps, steps);
}

inline int tau_weight(const RingPresentation& pres) {
    auto s = find_square_multipliers(detail::presentation_multipliers(pres, nullptr));
    if (!s) throw std::invalid_argument("presentation needs generators playing rho (-1,-1) and a tau-power (0,-w)");
    return -s->tau.degree.j;
}

/// Realize a presentation on `w`: expand on a padded window, splice, restrict.
inline AssemblyReport realize(const RingPresentation& pres, const Window& w, bool rho_complete, int steps) {
    if (steps < 1) throw std::invalid_argument("realize: steps must be >= 1");
    const Window big = padded_window(w, steps, tau_weight(pres));
    const BigradedModule m = expand(pres, big);
    return assemble(corners(m, rho_complete, steps, steps), w);
}

inline AssemblyReport realize(const RingPresentation& pres, const Window& w, bool rho_complete) {
    return realize(pres, w, rho_complete, default_steps(w));
}

struct OddSplit {
    BigradedModule geometric;  ///< M[rho^-1]
    BigradedModule complete;   ///< (M completed at rho)[tau^-2]
};

/// Odd-prime splitting of a module given on its own window. The Tate corner
/// inverts rho on the completed side; it must vanish on verified cells.
inline OddSplit odd_split(const BigradedModule& m, int steps) {
    if (m.prime() == 2) throw std::invalid_argument("odd_split: the prime must be odd");
    const auto s = require_square_multipliers(m);
    OddSplit out{invert(m, s.rho, steps), invert(complete(m, s.rho, steps), s.tau, steps)};
    const BigradedModule tate = invert(out.complete, s.rho, steps);
    for (const auto& [d, g] : tate.cells())
        if (tate.flags(d).verified()) throw std::logic_error("odd_split: Tate corner is nonzero at " + to_string(d));
    return out;
}

/// Odd-prime splitting of a presentation on `w`, computed on the padded window and restricted.
inline OddSplit odd_split(const RingPresentation& pres, const Window& w, int steps) {
    if (pres.prime == 2) throw std::invalid_argument("odd_split: the prime must be odd");
    const Window big = padded_window(w, steps, tau_weight(pres));
    OddSplit s = odd_split(expand(pres, big), steps);
    return {s.geometric.restricted(w), s.complete.restricted(w)};
}

inline OddSplit odd_split(const RingPresentation& pres, const Window& w) { return odd_split(pres, w, default_steps(w)); }

}  // namespace fracture

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace fracture;

namespace {

struct RealizeRun {
    PresetId id;
    Window window;
};

std::vector<RealizeRun> realize_runs() {
    return {{{PresetKind::HF2_R, 2}, Window::square(-8, 8)},
            {{PresetKind::HZ2_R, 2}, Window::square(-10, 10)},
            {{PresetKind::KGL2_R, 2}, Window::square(-10, 10)},
            {{PresetKind::HFp_odd_R, 3}, Window::square(-8, 8)},
            {{PresetKind::HFp_odd_R, 5}, Window::square(-6, 6)}};
}

bool integral(const Matrix& m, long p) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (valuation(m(r, c), p) < 0) return false;
    return true;
}

bool divisible(const Matrix& m, long p, int e) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m(r, c) != 0 && valuation(m(r, c), p) < e) return false;
    return true;
}

/// A random monomial quotient of Z_p[rho, t] with t of degree (0,-w).
RingPresentation random_cone(std::mt19937& rng) {
    std::uniform_int_distribution<int> coin(0, 1), small(1, 3);
    const long p = coin(rng) ? 2 : 3;
    const int w = small(rng) == 3 ? 2 : 1;
    const std::string dot = "\xC2\xB7";
    std::string text = "prime " + std::to_string(p) + "\ngen rho -1 -1\ngen t 0 " + std::to_string(-w) + "\n";
    if (coin(rng)) text += "rel " + std::to_string(p == 2 ? (small(rng) == 1 ? 2 : 4) : 3) + dot + "1\n";
    if (coin(rng)) text += "rel " + std::to_string(p) + dot + "rho^" + std::to_string(small(rng)) + "\n";
    if (coin(rng)) text += "rel 1" + dot + "rho^" + std::to_string(small(rng) + 1) + "*t^" + std::to_string(small(rng)) + "\n";
    text += "span 1" + dot + "1\n";
    return parse_presentation(text);
}

}  // namespace

// (a) |result_d| = |ker_d| * |coker_{d+(1,0)}| on every cell of every realize run.
TEST(Properties, ExactnessCertificateOnEveryRealizeCell) {
    for (const auto& run : realize_runs()) {
        const auto rep = realize(preset_presentation(run.id), run.window, true);
        EXPECT_TRUE(rep.uncertified().empty()) << preset_name(run.id);
        for (const BiDegree d : run.window.cells()) {
            const auto& p = rep.provenance.at(d);
            const PGroup& g = rep.result.cell(d);
            EXPECT_EQ(g.rank(), p.ker_part.rank() + p.coker_part.rank()) << preset_name(run.id) << d;
            EXPECT_EQ(g.torsion_length(), p.ker_part.torsion_length() + p.coker_part.torsion_length()) << preset_name(run.id) << d;
            EXPECT_TRUE(p.certified) << preset_name(run.id) << d;
        }
    }
}

// (b) Smith normal form against brute force on 200 random matrices.
TEST(Properties, SmithFormAgreesWithBruteForce) {
    std::mt19937 rng(16);
    std::uniform_int_distribution<int> dim(1, 4);
    std::uniform_int_distribution<long> entry(-16, 16);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = dim(rng), n = dim(rng);
        std::vector<std::vector<long>> a(m, std::vector<long>(n));
        for (auto& row : a)
            for (auto& x : row) x = entry(rng);
        const Matrix am = Matrix::from_rows(a);
        const SnfResult s = smith_normal_form(am, 2, 16);
        ASSERT_TRUE(s.certified) << trial;
        EXPECT_TRUE(divisible(s.u * am * s.v - s.diagonal(), 2, 16)) << trial;
        EXPECT_TRUE(integral(s.u, 2) && integral(s.v, 2) && integral(s.u_inv, 2) && integral(s.v_inv, 2)) << trial;
        EXPECT_EQ(s.u * s.u_inv, Matrix::identity(static_cast<std::size_t>(m))) << trial;
        EXPECT_EQ(s.v * s.v_inv, Matrix::identity(static_cast<std::size_t>(n))) << trial;
        EXPECT_EQ(s.valuations, oracle::smith_valuations(a, 2)) << trial;
        std::uint64_t predicted = 1;
        for (int v : s.valuations)
            for (int k = v; k < 4; ++k) predicted *= 2;
        EXPECT_EQ(oracle::image_size_mod(a, 2, 4), predicted) << trial;
    }
}

// (c) Localization on random monomial cones: idempotent, and x acts invertibly on verified cells.
TEST(Properties, LocalizationOnRandomCones) {
    std::mt19937 rng(50);
    const Window w{-6, 5, -6, 5};
    int verified_total = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const RingPresentation pres = random_cone(rng);
        const BigradedModule m = expand(pres, w);
        ASSERT_TRUE(validate_module(m).empty()) << print_presentation(pres);
        for (const Multiplier& x : m.multipliers()) {
            const BigradedModule once = invert(m, x, 4);
            const BigradedModule twice = invert(once, x, 4);
            // Near the window edge the telescope can be cut short; only verified cells are promised.
            for (const auto& v : validate_module(once))
                if (once.flags(v.cell).verified()) ADD_FAILURE() << print_presentation(pres) << x.name << " " << v.rule << v.cell;
            for (const BiDegree d : w.cells()) {
                if (!once.flags(d).verified()) continue;
                ++verified_total;
                if (twice.flags(d).verified()) EXPECT_EQ(twice.cell(d), once.cell(d)) << print_presentation(pres) << x.name << d;
                const BiDegree e = d + x.degree;
                if (w.contains(e) && once.flags(e).verified())
                    EXPECT_TRUE(is_isomorphism(once.act(x, d))) << print_presentation(pres) << x.name << d;
            }
        }
        // Inverting rho and t in either order agrees where both are verified.
        const auto& xs = m.multipliers();
        const BigradedModule ab = invert(invert(m, xs[0], 3), xs[1], 3);
        const BigradedModule ba = invert(invert(m, xs[1], 3), xs[0], 3);
        for (const BiDegree d : w.cells())
            if (ab.flags(d).verified() && ba.flags(d).verified()) EXPECT_EQ(ab.cell(d), ba.cell(d)) << print_presentation(pres) << d;
    }
    EXPECT_GT(verified_total, 0);
}

// (d) Every pair of actions commutes on every expanded preset and every answer.
TEST(Properties, ActionsCommuteOnEveryPreset) {
    const Window w = Window::square(-8, 8);
    std::vector<PresetId> ids = input_presets(3);
    ids.push_back({PresetKind::HFp_odd_R, 5});
    for (const auto& id : std::vector<PresetId>(ids)) ids.push_back(expected_answer(id));
    for (const auto& id : ids) {
        const auto m = preset(id, w);
        for (const auto& v : validate_module(m)) ADD_FAILURE() << preset_name(id) << " " << v.rule << " at " << v.cell;
        const auto& xs = m.multipliers();
        for (std::size_t a = 0; a < xs.size(); ++a)
            for (std::size_t b = a + 1; b < xs.size(); ++b)
                for (const BiDegree d : w.cells()) {
                    const BiDegree e = d + xs[a].degree + xs[b].degree;
                    if (!w.contains(e) || !w.contains(d + xs[a].degree) || !w.contains(d + xs[b].degree)) continue;
                    const PHom ab = m.act(xs[b], d + xs[a].degree).after(m.act(xs[a], d));
                    const PHom ba = m.act(xs[a], d + xs[b].degree).after(m.act(xs[b], d));
                    EXPECT_EQ(ab, ba) << preset_name(id) << " " << xs[a].name << "," << xs[b].name << d;
                }
    }
}

// (e) parse(print(parse(source))) == parse(source), and printing is a fixed point.
TEST(Properties, PresetSourcesRoundTrip) {
    for (const auto& id : {PresetId{PresetKind::HF2_R, 2}, PresetId{PresetKind::HZ2_R, 2}, PresetId{PresetKind::KGL2_R, 2},
                           PresetId{PresetKind::HFp_odd_R, 3}, PresetId{PresetKind::HFp_odd_R, 7}}) {
        const RingPresentation p = parse_presentation(preset_source(id));
        const std::string printed = print_presentation(p);
        EXPECT_EQ(parse_presentation(printed), p) << preset_name(id);
        EXPECT_EQ(print_presentation(parse_presentation(printed)), printed) << preset_name(id);
    }
}

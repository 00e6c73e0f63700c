#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fracture/fracture.hpp"

using namespace fracture;

namespace {

const Window kSmall = Window::square(-4, 4);

RingPresentation from_file(const std::string& name) {
    std::ifstream in(std::string(FRACTURE_SOURCE_DIR) + "/presentations/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_presentation(ss.str());
}

RingPresentation odd_presentation(long p, bool periodic) {
    const std::string ps = std::to_string(p);
    return parse_presentation("prime " + ps + "\ngen rho -1 -1" + (periodic ? " inv" : "") +
                              "\ngen tau2 0 -2\nrel " + ps + "\xC2\xB7" "1\nspan 1\xC2\xB7" "1\n");
}

/// Orders of kernel and image: compares maps up to the choice of bases.
bool same_shape(const PHom& f, const PHom& g) {
    return kernel(f).first.same_structure(kernel(g).first) && image(f).same_structure(image(g));
}

}  // namespace

TEST(Corners, F2Square) {
    const auto m = preset("hf2", Window::square(-8, 8));
    const auto c = corners(m, true, 4);
    EXPECT_EQ(c.multipliers.rho.name, "rho");
    EXPECT_EQ(c.multipliers.tau.name, "tau");
    // h = F_2[tau^+-1, rho], Phi = F_2[tau, rho^+-1], t = F_2[tau^+-1, rho^+-1].
    EXPECT_EQ(c.h.cell({0, 3}), PGroup::cyclic(2, 1));
    EXPECT_TRUE(c.h.cell({1, 3}).is_zero());
    EXPECT_EQ(c.phi.cell({2, 1}), PGroup::cyclic(2, 1));
    EXPECT_TRUE(c.phi.cell({0, 1}).is_zero());
    EXPECT_EQ(c.tate.cell({1, 3}), PGroup::cyclic(2, 1));
}

TEST(Corners, SquareCommutes) {
    for (const std::string name : {"hf2", "hz2", "kgl2"}) {
        const auto m = preset(name, Window::square(-8, 8));
        const auto c = corners(m, true, 3, 3);
        const Window& w = m.window();
        int checked = 0;
        for (const BiDegree d : w.cells()) {
            auto ht = c.map_h_t.find(d);
            auto pt = c.map_phi_t.find(d);
            if (ht == c.map_h_t.end() || pt == c.map_phi_t.end()) continue;
            const PHom to_h = transport(m, c.multipliers.tau, d, invert_stage(w, d, c.multipliers.tau, 3));
            const PHom to_phi = transport(m, c.multipliers.rho, d, invert_stage(w, d, c.multipliers.rho, 3));
            EXPECT_EQ(ht->second.after(to_h), pt->second.after(to_phi)) << name << d;
            ++checked;
        }
        EXPECT_GT(checked, 0) << name;
    }
}

TEST(Assemble, F2NegativeConeComesFromTheCokernel) {
    const auto rep = realize(preset_presentation({PresetKind::HF2_R, 2}), kSmall, true);
    const auto& p = rep.provenance.at({0, 2});
    EXPECT_TRUE(p.ker_part.is_zero());
    EXPECT_EQ(p.coker_part, PGroup::cyclic(2, 1));
    EXPECT_EQ(p.status, ExtensionStatus::split);
    EXPECT_TRUE(p.certified);
    EXPECT_EQ(rep.result.cell({0, 2}), PGroup::cyclic(2, 1));
    EXPECT_TRUE(rep.result.cell({0, 1}).is_zero());
    EXPECT_TRUE(rep.uncertified().empty());
}

TEST(Assemble, IntegralBoxesComeFromTheKernel) {
    const auto rep = realize(preset_presentation({PresetKind::HZ2_R, 2}), kSmall, true);
    const auto& p = rep.provenance.at({0, -2});
    EXPECT_EQ(p.ker_part, PGroup::free(2));
    EXPECT_TRUE(p.coker_part.is_zero());
    EXPECT_EQ(rep.result.cell({0, 2}), PGroup::free(2));
    EXPECT_EQ(rep.result.cell({0, 3}), PGroup::cyclic(2, 1));
}

TEST(Assemble, F2KernelPartIsTheInput) {
    const auto pres = preset_presentation({PresetKind::HF2_R, 2});
    const auto rep = realize(pres, kSmall, true);
    const auto input = expand(pres, kSmall);
    for (const BiDegree d : kSmall.cells()) EXPECT_EQ(rep.provenance.at(d).ker_part, input.cell(d)) << d;
}

TEST(Assemble, InputEmbedsInTheKernelPart) {
    for (const auto& id : input_presets()) {
        const auto pres = preset_presentation(id);
        const auto rep = realize(pres, kSmall, true);
        const auto input = expand(pres, kSmall);
        for (const BiDegree d : kSmall.cells()) {
            const PGroup& k = rep.provenance.at(d).ker_part;
            EXPECT_GE(k.rank(), input.cell(d).rank()) << preset_name(id) << d;
            if (input.cell(d).rank() == 0) EXPECT_GE(k.generators(), input.cell(d).generators()) << preset_name(id) << d;
        }
    }
}

TEST(Assemble, ZeroCornersGiveZero) {
    const auto z = zero_module(2, kSmall, {mult::rho(), mult::tau()});
    const auto rep = realize(z, true);
    EXPECT_TRUE(rep.result.is_zero());
    EXPECT_TRUE(rep.uncertified().empty());
    EXPECT_TRUE(rep.ambiguous().empty());
}

TEST(Assemble, ActionsMatchTheAnswerUpToBasis) {
    for (const auto& id : input_presets()) {
        const auto rep = realize(preset_presentation(id), kSmall, true);
        const auto want = preset(expected_answer(id), kSmall);
        for (const auto& y : want.multipliers())
            for (const BiDegree d : kSmall.cells()) {
                if (!kSmall.contains(d + y.degree)) continue;
                EXPECT_TRUE(same_shape(rep.result.act(y, d), want.act(y, d))) << preset_name(id) << " " << y.name << d;
            }
    }
}

TEST(Assemble, KrAmbiguousCellsAreWhereBothPartsMeet) {
    const Window w = Window::square(-10, 10);
    const auto rep = realize(preset_presentation({PresetKind::KGL2_R, 2}), w, true);
    const std::vector<BiDegree> expected{{2, 7}, {4, 9}, {5, 10}};
    EXPECT_EQ(rep.ambiguous(), expected);
    for (const BiDegree d : expected) {
        EXPECT_TRUE(rep.result.flags(d).has(CellFlag::ambiguous_extension));
        const auto& p = rep.provenance.at(d);
        EXPECT_FALSE(p.ker_part.is_zero());
        EXPECT_FALSE(p.coker_part.is_zero());
    }
    // The v1-multiple 2 v1 tau^-8 sits over the negative-cone class at (2,7).
    EXPECT_EQ(rep.provenance.at({2, 7}).ker_part, PGroup::free(2));
}

TEST(Assemble, OutputWindowMustFit) {
    const auto c = corners(preset("hf2", kSmall), true, 2);
    EXPECT_THROW(assemble(c, Window::square(-5, 5)), std::invalid_argument);
    const auto rep = assemble(c, Window::square(-2, 2));
    EXPECT_EQ(rep.result.window(), Window::square(-2, 2));
}

TEST(Assemble, RightEdgeIsUnverified) {
    const auto rep = realize(preset("hf2", kSmall), true, 2);
    EXPECT_FALSE(rep.result.flags({4, 0}).verified());
}

TEST(Refusal, UnassertedInputIsRefused) {
    try {
        realize(preset_presentation({PresetKind::HF2_R, 2}), kSmall, false);
        FAIL() << "expected a ContractError";
    } catch (const ContractError& e) {
        EXPECT_NE(std::string(e.what()).find(rho_complete_contract()), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("not asserted"), std::string::npos);
    }
}

TEST(Refusal, RhoPeriodicInputIsRefusedEvenWhenAsserted) {
    try {
        realize(from_file("rho_periodic.fr"), kSmall, true);
        FAIL() << "expected a ContractError";
    } catch (const ContractError& e) {
        EXPECT_NE(std::string(e.what()).find(rho_complete_contract()), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("not degreewise rho-complete"), std::string::npos);
    }
}

TEST(Refusal, MissingMultipliers) {
    const auto m = zero_module(2, kSmall, {mult::rho()});
    EXPECT_THROW(realize(m, true), std::invalid_argument);
}

TEST(OddSplit, FpSplitsIntoZeroAndTheCompletion) {
    const Window w = Window::square(-6, 6);
    const auto pres = preset_presentation({PresetKind::HFp_odd_R, 3});
    const auto s = odd_split(pres, w);
    EXPECT_TRUE(s.geometric.is_zero());
    const auto want = preset({PresetKind::HFp_odd_C2, 3}, w);
    EXPECT_TRUE(structural_differences(s.complete, want, w).empty());
    const auto rep = realize(pres, w, true);
    EXPECT_TRUE(structural_differences(rep.result, s.complete, w).empty());
    EXPECT_TRUE(rep.corners.tate.restricted(w).is_zero());
}

TEST(OddSplit, ZeroModule) {
    const auto z = zero_module(3, kSmall, {mult::rho(), mult::tau2()});
    const auto s = odd_split(z, 3);
    EXPECT_TRUE(s.geometric.is_zero());
    EXPECT_TRUE(s.complete.is_zero());
}

TEST(OddSplit, FreeRhoActionIsAllGeometric) {
    const auto m = expand(odd_presentation(3, true), Window::square(-8, 8));
    const auto s = odd_split(m, 3);
    int verified = 0;
    for (const BiDegree d : m.window().cells()) {
        if (s.geometric.flags(d).verified()) {
            ++verified;
            EXPECT_EQ(s.geometric.cell(d), m.cell(d)) << d;
        }
        if (s.complete.flags(d).verified()) EXPECT_TRUE(s.complete.cell(d).is_zero()) << d;
    }
    EXPECT_GT(verified, 0);
}

TEST(OddSplit, RejectsTheEvenPrime) {
    EXPECT_THROW(odd_split(preset("hf2", kSmall), 2), std::invalid_argument);
    EXPECT_THROW(odd_split(preset_presentation({PresetKind::HF2_R, 2}), kSmall), std::invalid_argument);
}

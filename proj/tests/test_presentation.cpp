#include <gtest/gtest.h>

#include <cstdlib>

#include "oracles.hpp"

using namespace fracture;

namespace {

const std::string kDot = "\xC2\xB7";

std::string hf2_text() { return "prime 2\ngen rho -1 -1\ngen tau 0 -1\nrel 2" + kDot + "1\nspan 1" + kDot + "1\n"; }

ParseError parse_error(const std::string& text) {
    try {
        parse_presentation(text);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no parse error for:\n" << text;
    return ParseError(ParseErrorKind::syntax, 0, 0, "");
}

}  // namespace

TEST(Parse, BasicPresentation) {
    const auto p = parse_presentation(hf2_text());
    EXPECT_EQ(p.prime, 2);
    ASSERT_EQ(p.generators.size(), 2u);
    EXPECT_EQ(p.generators[0].name, "rho");
    EXPECT_EQ(p.generators[0].degree, (BiDegree{-1, -1}));
    ASSERT_EQ(p.relations.size(), 1u);
    EXPECT_EQ(p.relations[0].p_power, 1);
    EXPECT_TRUE(p.relations[0].is_constant());
    EXPECT_FALSE(p.window);
}

TEST(Parse, AlternativeSeparatorsAndPowerCoefficients) {
    const auto a = parse_presentation("prime 2\ngen x 0 -2\nrel 2^2.x^3\nspan 4*x\n");
    EXPECT_EQ(a.relations[0].p_power, 2);
    EXPECT_EQ(a.relations[0].exponents, std::vector<int>{3});
    EXPECT_EQ(a.spans[0].p_power, 2);
}

TEST(Parse, CommentsAndWindow) {
    const auto p = parse_presentation("# header\nprime 3   # the prime\n\ngen t 0 -2\nspan 1" + kDot + "t\nwindow -2 2 -6 0\n");
    ASSERT_TRUE(p.window);
    EXPECT_EQ(*p.window, (Window{-2, 2, -6, 0}));
}

TEST(Parse, InvertibleGeneratorAllowsNegativeExponent) {
    const auto p = parse_presentation("prime 2\ngen rho -1 -1 inv\nspan 1" + kDot + "rho^-2\n");
    EXPECT_TRUE(p.generators[0].invertible);
    EXPECT_EQ(p.spans[0].exponents, std::vector<int>{-2});
}

TEST(ParseErrors, UnknownNameHasPosition) {
    const auto e = parse_error("prime 2\ngen rho -1 -1\nrel 2" + kDot + "tau\n");
    EXPECT_EQ(e.kind(), ParseErrorKind::unknown_name);
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 7);
}

TEST(ParseErrors, NegativeExponentOnOrdinaryGenerator) {
    const auto e = parse_error("prime 2\ngen rho -1 -1\nspan 1" + kDot + "rho^-1\n");
    EXPECT_EQ(e.kind(), ParseErrorKind::negative_exponent);
    EXPECT_EQ(e.line(), 3);
}

TEST(ParseErrors, DuplicateGenerator) {
    const auto e = parse_error("prime 2\ngen rho -1 -1\ngen rho 0 -1\n");
    EXPECT_EQ(e.kind(), ParseErrorKind::duplicate_generator);
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 5);
}

TEST(ParseErrors, SyntaxErrorsListExpectedTokens) {
    const auto e = parse_error("prime 2\nfoo bar\n");
    EXPECT_EQ(e.kind(), ParseErrorKind::syntax);
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 1);
    EXPECT_FALSE(e.expected().empty());

    const auto missing_sep = parse_error("prime 2\ngen x 0 -1\nspan 1 x\n");
    EXPECT_EQ(missing_sep.line(), 3);
    EXPECT_EQ(missing_sep.column(), 7);
    EXPECT_EQ(missing_sep.expected().size(), 3u);

    const auto no_prime = parse_error("gen x 0 -1\n");
    EXPECT_EQ(no_prime.kind(), ParseErrorKind::syntax);
}

TEST(ParseErrors, CoefficientMustBeAPowerOfP) {
    const auto e = parse_error("prime 3\ngen x 0 -1\nspan 2" + kDot + "x\n");
    EXPECT_EQ(e.kind(), ParseErrorKind::invalid_value);
    EXPECT_EQ(e.column(), 6);
}

TEST(ParseErrors, ColumnsCountCodePoints) {
    // The middle dot is two bytes but one column.
    const auto e = parse_error("prime 2\ngen x 0 -1\nspan 1" + kDot + "y\n");
    EXPECT_EQ(e.column(), 8);
}

TEST(Print, RoundTrip) {
    for (const std::string& text :
         {hf2_text(), std::string("prime 2\ngen rho -1 -1 inv\ngen v1 2 1\nrel 1" + kDot + "v1*rho^3\nspan 2" + kDot + "rho^-1*v1\nwindow -3 3 -3 3\n")}) {
        const auto p = parse_presentation(text);
        EXPECT_EQ(parse_presentation(print_presentation(p)), p);
    }
}

TEST(Expand, F2PolynomialRegionLaw) {
    const auto m = expand(parse_presentation(hf2_text()), Window{-4, 0, -4, 0});
    EXPECT_EQ(m.cell({-1, -1}), PGroup::cyclic(2, 1));
    EXPECT_EQ(m.cell({0, 0}), PGroup::cyclic(2, 1));
    EXPECT_EQ(m.cell({-1, -2}), PGroup::cyclic(2, 1));
    for (const BiDegree d : m.window().cells())
        EXPECT_EQ(m.cell(d).is_zero(), !(d.i <= 0 && d.j <= d.i)) << d;
    const auto wider = expand(parse_presentation(hf2_text()), Window{-4, 1, -4, 1});
    EXPECT_TRUE(wider.cell({1, 0}).is_zero());
}

TEST(Expand, WithoutScalarRelationCellsAreFree) {
    const auto m = expand(parse_presentation("prime 2\ngen rho -1 -1\ngen tau 0 -1\nspan 1" + kDot + "1\n"), Window{-2, 0, -2, 0});
    EXPECT_EQ(m.cell({-1, -2}), PGroup::free(2));
}

TEST(Expand, EmptySpanGivesZeroModule) {
    const auto m = expand(parse_presentation("prime 2\ngen rho -1 -1\ngen tau 0 -1\n"), Window::square(-3, 3));
    EXPECT_TRUE(m.is_zero());
}

TEST(Expand, OddPrimeTauSquared) {
    const auto m = expand(preset_presentation({PresetKind::HFp_odd_R, 5}), Window::square(-6, 6));
    for (const BiDegree d : m.window().cells()) {
        const bool expected = d.i == 0 && d.j <= 0 && d.j % 2 == 0;
        EXPECT_EQ(m.cell(d), expected ? PGroup::cyclic(5, 1) : PGroup::zero(5)) << d;
    }
}

TEST(Expand, KglAgainstMonomialOracle) {
    const Window w = Window::square(-6, 6);
    const auto m = expand(preset_presentation({PresetKind::KGL2_R, 2}), w);
    EXPECT_EQ(m.cell({0, -2}), PGroup::free(2));
    EXPECT_EQ(m.cell({2, 1}), PGroup::free(2));
    // rho^a tau2^t v1^c sits at (2c - a, c - a - 2t).
    std::map<BiDegree, std::pair<int, std::vector<int>>> want;
    for (int a = 0; a <= 20; ++a)
        for (int t = 0; t <= 20; ++t)
            for (int c = 0; c <= 20; ++c) {
                const BiDegree d{2 * c - a, c - a - 2 * t};
                if (!w.contains(d)) continue;
                auto coef = oracle::kgl_coefficient(a, t, c);
                if (!coef) continue;
                auto& [rank, torsion] = want[d];
                if (coef->second == kInfinity)
                    ++rank;
                else
                    torsion.push_back(coef->second);
            }
    for (const BiDegree d : w.cells()) {
        auto it = want.find(d);
        const PGroup g = it == want.end() ? PGroup::zero(2) : PGroup(2, it->second.first, it->second.second);
        EXPECT_EQ(m.cell(d), g) << d;
    }
    // 2 tau^2 times 2 tau^2 is 4 tau^4: the tau2^2 multiplier on 2 tau^2 lands on 2 tau^6.
    EXPECT_EQ(m.act("tau2^2", {0, -2}).matrix(), Matrix::identity(1));
    EXPECT_EQ(m.act("tau2^2", {0, 0}).matrix(), Matrix::identity(1));
}

TEST(Expand, WindowMonotone) {
    for (const auto& id : input_presets()) {
        const auto big = preset(id, Window::square(-7, 7));
        const Window sub{-3, 5, -6, 2};
        const auto small = preset(id, sub);
        const auto restricted = big.restricted(sub);
        EXPECT_TRUE(structural_differences(restricted, small, sub).empty()) << preset_name(id);
        for (const auto& [key, f] : small.actions()) EXPECT_EQ(restricted.act(key.first, key.second), f);
        EXPECT_EQ(restricted.actions().size(), small.actions().size());
    }
}

TEST(ExpandErrors, DegreeZeroGenerator) {
    EXPECT_THROW(expand(parse_presentation("prime 2\ngen e 0 0\nspan 1" + kDot + "1\n"), Window::square(-1, 1)),
                 ExpansionError);
    EXPECT_THROW(expand(parse_presentation("prime 2\ngen a 1 0\ngen b -1 0\nspan 1" + kDot + "1\n"), Window::square(-1, 1)),
                 ExpansionError);
}

TEST(ExpandErrors, CellBudget) {
    EXPECT_THROW(expand(parse_presentation(hf2_text()), Window::square(-20, 20), 100), ExpansionError);
    setenv("FRACTURE_CELL_BUDGET", "50", 1);
    EXPECT_EQ(default_cell_budget(), 50);
    EXPECT_THROW(expand(parse_presentation(hf2_text()), Window::square(-5, 5)), ExpansionError);
    unsetenv("FRACTURE_CELL_BUDGET");
    EXPECT_EQ(default_cell_budget(), 100000);
}

TEST(ExpandErrors, MissingWindowLine) {
    EXPECT_THROW(expand(parse_presentation(hf2_text())), ExpansionError);
}

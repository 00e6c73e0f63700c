#include <gtest/gtest.h>

#include "fracture/fracture.hpp"

using namespace fracture;

TEST(BiDegree, AdditionIsCommutativeWithZeroIdentity) {
    const BiDegree a{2, -3}, b{-1, 5}, c{4, 4};
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a + BiDegree{}, a);
    EXPECT_EQ(to_string(a), "(2,-3)");
}

TEST(Window, RayLengthStopsAtTheEdge) {
    const Window w = Window::square(-2, 2);
    EXPECT_EQ(w.cell_count(), 25);
    EXPECT_EQ(w.ray_length({2, 2}, {-1, -1}, 100), 4);
    EXPECT_EQ(w.ray_length({2, 2}, {-1, -1}, 3), 3);
    EXPECT_EQ(w.ray_length({-2, 0}, {-1, -1}, 10), 0);
    EXPECT_EQ(w.ray_length({3, 0}, {-1, -1}, 10), -1);
}

TEST(PGroup, RejectsBadTorsion) {
    EXPECT_THROW(PGroup(2, 0, {1, 2}), std::invalid_argument);
    EXPECT_THROW(PGroup(2, 0, {0}), std::invalid_argument);
    EXPECT_THROW(PGroup(4, 1, {}), std::invalid_argument);
    EXPECT_TRUE(PGroup::zero(3).is_zero());
    EXPECT_EQ(PGroup(2, 1, {3, 1}).describe(), "Z_2 + Z/2^3 + F_2");
}

TEST(PHom, TorsionRowsAreReduced) {
    const PGroup z = PGroup::free(2), f = PGroup::cyclic(2, 1);
    const PHom r(z, f, Matrix::from_rows({{3}}));
    EXPECT_EQ(r.matrix()(0, 0), 1);
    EXPECT_TRUE(r.is_well_defined());
}

TEST(PHom, OrderTwoIntoFreeIsAViolation) {
    const PGroup f = PGroup::cyclic(2, 1), z = PGroup::free(2);
    const PHom bad(f, z, Matrix::from_rows({{1}}));
    EXPECT_EQ(bad.compatibility_violations().size(), 1u);
    const PHom ok(PGroup::cyclic(2, 1), PGroup::cyclic(2, 2), Matrix::from_rows({{2}}));
    EXPECT_TRUE(ok.is_well_defined());
    const PHom bad2(PGroup::cyclic(2, 1), PGroup::cyclic(2, 2), Matrix::from_rows({{1}}));
    EXPECT_FALSE(bad2.is_well_defined());
}

TEST(PHom, CompositionOfCompatibleMaps) {
    const PGroup a = PGroup::free(2), b = PGroup::cyclic(2, 2), c = PGroup::cyclic(2, 1);
    const PHom f(a, b, Matrix::from_rows({{3}}));
    const PHom g(b, c, Matrix::from_rows({{1}}));
    const PHom h = g.after(f);
    EXPECT_EQ(h.source(), a);
    EXPECT_EQ(h.target(), c);
    EXPECT_EQ(h.matrix()(0, 0), 1);
    EXPECT_THROW(f.after(g), std::invalid_argument);
}

TEST(GroupSum, KeepsCanonicalOrder) {
    const auto s = direct_sum(PGroup(2, 0, {1}), PGroup(2, 1, {2}));
    EXPECT_EQ(s.group, PGroup(2, 1, {2, 1}));
    EXPECT_EQ(s.project_a * s.inject_a, Matrix::identity(1));
    EXPECT_EQ(s.project_b * s.inject_b, Matrix::identity(2));
}

namespace {

BigradedModule f2_tau_rho(const Window& w) {
    return expand(parse_presentation("prime 2\ngen rho -1 -1\ngen tau 0 -1\nrel 2\xC2\xB7" "1\nspan 1\xC2\xB7" "1\n"), w);
}

}  // namespace

TEST(Module, ZeroModuleValidates) {
    const auto z = zero_module(2, Window::square(-3, 3), {mult::rho(), mult::tau()});
    EXPECT_TRUE(validate_module(z).empty());
    EXPECT_TRUE(z.is_zero());
}

TEST(Module, PolynomialRingValidates) {
    const auto m = f2_tau_rho(Window{-4, 0, -4, 0});
    EXPECT_TRUE(validate_module(m).empty());
}

TEST(Module, ActRhoOnOneIsIdentity) {
    const auto m = f2_tau_rho(Window{-4, 0, -4, 0});
    const PHom f = m.act("rho", {0, 0});
    EXPECT_EQ(f.source(), PGroup::cyclic(2, 1));
    EXPECT_EQ(f.target(), PGroup::cyclic(2, 1));
    EXPECT_EQ(f.matrix(), Matrix::identity(1));
}

TEST(Module, ActIntoZeroCellIsZeroMap) {
    const auto m = f2_tau_rho(Window{-4, 1, -4, 1});
    const PHom f = m.act("tau", {1, 1});
    EXPECT_TRUE(f.is_zero());
    EXPECT_THROW(m.act("tau", {0, -4}), std::out_of_range);
}

TEST(Module, ScalarKillsRhoInIntegralRing) {
    const auto m = expand(parse_presentation("prime 2\ngen rho -1 -1\ngen tau2 0 -2\nrel 2\xC2\xB7rho\nspan 1\xC2\xB7" "1\n"),
                          Window::square(-4, 2));
    const PHom r = m.act("rho", {-1, -1});
    EXPECT_EQ(r.source(), PGroup::cyclic(2, 1));
    EXPECT_EQ(r.matrix(), Matrix::identity(1));
    EXPECT_TRUE(m.act("2", {-1, -1}).is_zero());
    EXPECT_FALSE(m.act("2", {0, 0}).is_zero());
}

TEST(Module, TorsionViolationIsReported) {
    ModuleBuilder b(2, Window::square(-2, 2), {mult::rho()});
    b.set_cell({0, 0}, PGroup::cyclic(2, 1));
    b.set_cell({-1, -1}, PGroup::free(2));
    b.set_action("rho", {0, 0}, PHom(PGroup::cyclic(2, 1), PGroup::free(2), Matrix::from_rows({{1}})));
    const auto v = validate_module(b.build());
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].cell, (BiDegree{0, 0}));
    EXPECT_EQ(v[0].rule, "torsion-compatibility");
}

TEST(Module, NonCommutingActionsAreReported) {
    const Window w = Window::square(-1, 0);
    ModuleBuilder b(2, w, {mult::rho(), {"sigma", {-1, 0}}, {"eta", {0, -1}}});
    for (const BiDegree d : w.cells()) b.set_cell(d, PGroup::cyclic(2, 1));
    const PHom id = PHom::identity(PGroup::cyclic(2, 1));
    b.set_action("sigma", {0, 0}, id);
    b.set_action("eta", {-1, 0}, id);
    b.set_action("eta", {0, 0}, id);
    const auto v = validate_module(b.build());
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].rule, "commutativity");
}

TEST(Module, DirectSumWithZeroIsIdentity) {
    const auto m = f2_tau_rho(Window{-4, 0, -4, 0});
    const auto z = zero_module(2, m.window(), m.multipliers());
    const auto s = direct_sum(m, z);
    EXPECT_TRUE(structural_differences(s, m, m.window()).empty());
    EXPECT_EQ(s.act("rho", {0, 0}), m.act("rho", {0, 0}));
}

TEST(Module, DirectSumOfTwoDotsIsTwoDots) {
    const Window w = Window::square(0, 0);
    ModuleBuilder b(2, w);
    b.set_cell({0, 0}, PGroup::cyclic(2, 1));
    const auto m = b.build();
    EXPECT_EQ(direct_sum(m, m).cell({0, 0}), PGroup(2, 0, {1, 1}));
}

TEST(Module, DirectSumMismatchThrows) {
    const auto a = zero_module(2, Window::square(0, 1));
    const auto b = zero_module(3, Window::square(0, 1));
    const auto c = zero_module(2, Window::square(0, 2));
    EXPECT_THROW(direct_sum(a, b), std::invalid_argument);
    EXPECT_THROW(direct_sum(a, c), std::invalid_argument);
}

TEST(Module, DirectSumOrdersMultiplyAndRanksAdd) {
    const Window w = Window::square(-3, 3);
    const auto a = preset("hz2", w);
    const auto b = preset("hf2", w);
    ModuleBuilder bb(2, w, a.multipliers());
    for (const auto& [d, g] : b.cells()) bb.set_cell(d, g);
    const auto s = direct_sum(a, bb.build());
    for (const BiDegree d : w.cells()) {
        EXPECT_EQ(s.cell(d).rank(), a.cell(d).rank() + b.cell(d).rank());
        EXPECT_EQ(s.cell(d).torsion_length(), a.cell(d).torsion_length() + b.cell(d).torsion_length());
    }
}

TEST(CellFlags, NamesRoundTrip) {
    CellFlags f{CellFlag::boundary_unverified};
    f |= CellFlag::ambiguous_extension;
    const auto names = f.names();
    ASSERT_EQ(names.size(), 2u);
    EXPECT_EQ(names[0], "boundary-unverified");
    CellFlags g;
    for (const auto& n : names) g |= *CellFlags::from_name(n);
    EXPECT_EQ(g.bits(), f.bits());
    EXPECT_EQ(CellFlags{}.names(), std::vector<std::string>{"verified"});
}

#include "generators.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

#include <dirac/reduction.hpp>

#include <gtest/gtest.h>

using namespace dirac;
using th::biv;
using th::F;
using th::form;
using th::P;
using th::S;

namespace {

GenSection d(std::size_t n, std::size_t i) { return GenSection::partial(n, i, n); }
GenSection dx(std::size_t n, std::size_t i) { return GenSection::differential(n, i, n); }

Space named(std::vector<std::string> names) { return Space{std::move(names), Field::rational}; }

Family on(const Space &sp, const std::vector<GenSection> &frame) { return Family(sp, frame); }

PolyVector cvec(std::size_t n, const std::vector<long> &c) {
  PolyVector v;
  for (auto a : c) v.push_back(Polynomial::constant(n, Scalar(a)));
  return v;
}

Family kernel_left() { return graph_of_two_form(Space::standard(5), form(5, {{1, 2, "1"}, {3, 4, "1"}})); }
Family kernel_right() { return graph_of_two_form(Space::standard(5), form(5, {{0, 1, "1"}, {2, 3, "1"}})); }

Submanifold slice(std::size_t n, const std::map<std::size_t, long> &fixed) {
  std::map<std::size_t, Scalar> m;
  for (const auto &[k, v] : fixed) m.emplace(k, Scalar(v));
  return Submanifold::slice(Space::standard(n), m);
}

ProbeConfig probes_with(std::vector<ProbePoint> extra) {
  ProbeConfig c;
  c.extra = std::move(extra);
  return c;
}

} // namespace

// ---- pullback ----

TEST(Pullback, GraphSubmanifoldGivesSymplecticPlane) {
  Family l = graph_of_bivector(Space::standard(4), biv(4, {{0, 1, "1"}, {2, 3, "x3"}}));
  Submanifold x = Submanifold::graph(Space::standard(4), {{2, P("x1^2", 4)}, {3, P("x1^2", 4)}});
  PullbackResult r = pullback(l, x);
  EXPECT_EQ(r.family.space().coords, (std::vector<std::string>{"x1", "x2"}));
  EXPECT_TRUE(family_equal(r.family, graph_of_bivector(Space::standard(2), biv(2, {{0, 1, "1"}}))));
  EXPECT_TRUE(r.constant_rank());
}

TEST(Pullback, NonConstantRankFlaggedAtDegenerateLocus) {
  Family l = graph_of_bivector(Space::standard(2), biv(2, {{0, 1, "x1"}}));
  Submanifold x = slice(2, {{1, 0}});
  PullbackResult r = pullback(l, x, probes_with({{Scalar(0)}}));
  EXPECT_TRUE(family_equal(r.family, full_tangent(x.intrinsic())));
  EXPECT_FALSE(r.constant_rank());
  ASSERT_NE(r.smoothness.first_failure(), nullptr);
  EXPECT_EQ(r.smoothness.first_failure()->point, (ProbePoint{Scalar(0)}));
  for (const auto &ev : r.smoothness.probes)
    EXPECT_EQ(ev.status == ProbeStatus::differs, ev.point[0].is_zero()) << point_str(ev.point);
}

TEST(Pullback, FullTangentGivesTangentOfGraph) {
  Submanifold x = Submanifold::graph(Space::standard(3), {{2, P("x1*x2 + 1", 3)}});
  PullbackResult r = pullback(full_tangent(Space::standard(3)), x);
  EXPECT_TRUE(family_equal(r.family, full_tangent(x.intrinsic())));
  EXPECT_TRUE(r.constant_rank());
}

TEST(Pullback, InducedStructuresOfCommutingPair) {
  Submanifold x = slice(4, {{3, 0}});
  Family l = graph_of_bivector(Space::standard(4), biv(4, {{0, 3, "1"}}));
  Family r = graph_of_bivector(Space::standard(4), biv(4, {{1, 3, "1"}, {2, 3, "x1"}}));
  Family il = pullback(l, x).family, ir = pullback(r, x).family;
  EXPECT_TRUE(family_equal(il, graph_of_distribution(Space::standard(3), {cvec(3, {1, 0, 0})})));
  EXPECT_TRUE(family_equal(ir, graph_of_distribution(Space::standard(3), {th::V({"0", "1", "x1"}, 3)})));
  ConcurrenceReport c = concur(il, ir, ConcurMode::weak);
  EXPECT_FALSE(c.weak);
  EXPECT_EQ(c.involutivity.residual, Polynomial::one(3));
}

TEST(Pullback, FrameDegeneratingAlongSubmanifoldRejected) {
  Family l = F({S({"x2", "0"}, {}, 2), S({}, {"0", "1"}, 2)}, 2);
  ASSERT_TRUE(l.is_lagrangian());
  EXPECT_THROW(pullback(l, slice(2, {{1, 0}})), RankDefect);
}

TEST(Pullback, PointSubmanifold) {
  Family l = graph_of_bivector(Space::standard(2), biv(2, {{0, 1, "1"}}));
  PullbackResult r = pullback(l, slice(2, {{0, 1}, {1, 2}}));
  EXPECT_EQ(r.family.n(), 0u);
  EXPECT_EQ(r.family.rank(), 0u);
  EXPECT_TRUE(r.constant_rank());
}

TEST(Pullback, RandomPoissonOnGraphMatchesPointwise) {
  testgen::Gen g(41);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> w;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) w.emplace_back(i, j, g.poly(3, 1, 2));
    Family l = graph_of_bivector(Space::standard(3), Bivector::from_wedges(3, 3, w));
    Submanifold x = Submanifold::graph(Space::standard(3), {{2, g.poly(3, 2, 2).substitute({{2, Polynomial(3)}})}});
    PullbackResult r = pullback(l, x);
    EXPECT_TRUE(r.family.is_lagrangian());
    for (const auto &ev : r.smoothness.probes) EXPECT_NE(ev.status, ProbeStatus::skipped);
  }
}

// ---- pushforward ----

TEST(Pushforward, IdentityProjection) {
  Family l = kernel_left();
  Projection p = Projection::keep(l.space(), {0, 1, 2, 3, 4});
  EXPECT_TRUE(family_equal(pushforward(l, p), l));
}

TEST(Pushforward, DropOutsideKernelsGivesPoissonGraphs) {
  Projection r = Projection::keep(Space::standard(5), {1, 2, 3});
  Space y = named({"x2", "x3", "x4"});
  EXPECT_EQ(r.target(), y);
  EXPECT_TRUE(family_equal(pushforward(kernel_left(), r), graph_of_bivector(y, biv(3, {{1, 0, "1"}}))));
  EXPECT_TRUE(family_equal(pushforward(kernel_right(), r), graph_of_bivector(y, biv(3, {{2, 1, "1"}}))));
}

TEST(Pushforward, TangentFamilyGoesToTangentFamily) {
  Space sp = Space::standard(3);
  Projection p = Projection::linear(sp, {{"y", {Scalar(-1), Scalar(1), Scalar(0)}}});
  Family ly = pushforward(full_tangent(sp), p);
  EXPECT_TRUE(family_equal(ly, full_tangent(named({"y"}))));
}

TEST(Pushforward, FibreDependenceReported) {
  Family l = graph_of_bivector(Space::standard(3), biv(3, {{1, 2, "x1"}}));
  Projection p = Projection::keep(l.space(), {1, 2});
  try {
    pushforward(l, p);
    FAIL() << "expected NotProjectable";
  } catch (const NotProjectable &e) {
    EXPECT_NE(e.coefficient.find("x1"), std::string::npos) << e.coefficient;
  }
}

TEST(Pushforward, ToPoint) {
  Family l = graph_of_bivector(Space::standard(2), biv(2, {{0, 1, "x1"}}));
  Family ly = pushforward(l, Projection::keep(l.space(), {}));
  EXPECT_EQ(ly.n(), 0u);
  EXPECT_TRUE(ly.is_lagrangian());
}

TEST(Pushforward, BasicFamiliesMatchPointwiseOracleAndRoundTrip) {
  testgen::Gen g(97);
  const std::vector<std::size_t> kept{0, 2};
  Space sp = Space::standard(3);
  Projection p = Projection::keep(sp, kept);
  int compared = 0;
  for (int trial = 0; trial < 10; ++trial) {
    Polynomial c = g.poly(3, 1, 2).substitute({{1, Polynomial(3)}});
    PolyVector v{g.poly(3, 2, 2), g.poly(3, 2, 2), g.poly(3, 2, 2)};
    // π = c ∂1∧∂3 + ∂2 ∧ V with c basic: L[F] is basic for F = ⟨∂2⟩.
    PolyMatrix m(3, 3, 3);
    m(0, 2) = c;
    m(2, 0) = -c;
    for (std::size_t k = 0; k < 3; ++k) {
      if (k == 1) continue;
      m(1, k) += v[k];
      m(k, 1) -= v[k];
    }
    Family lx = graph_of_bivector(sp, Bivector(m));
    Family ly = pushforward(lx, p, 5);
    ASSERT_TRUE(ly.is_lagrangian());
    EXPECT_TRUE(family_equal(pullback_submersion(ly, p), stretch(lx, fiber_family(p))));
    for (int k = 0; k < 6; ++k) {
      ProbePoint pt = g.point(3);
      auto lf = oracle::eval(lx.frame(), pt);
      if (oracle::rank(lf) != 3) continue;
      ProbePoint y{pt[0], pt[2]};
      auto ev = oracle::eval(ly.frame(), y);
      if (oracle::rank(ev) != 2) continue;
      EXPECT_TRUE(oracle::same_subspace(ev, oracle::pushforward_keep(lf, 3, kept)));
      ++compared;
    }
  }
  EXPECT_GE(compared, 40);
}

TEST(Pushforward, LinearProjectionRoundTrip) {
  Space sp = Space::standard(3);
  Projection p = Projection::linear(sp, {{"u", {Scalar(1), Scalar(1), Scalar(0)}}, {"w", {Scalar(0), Scalar(1), Scalar(-1)}}});
  Family ly = graph_of_bivector(p.target(), biv(2, {{0, 1, "x1"}}));
  Family lx = pullback_submersion(ly, p);
  EXPECT_TRUE(lx.is_lagrangian());
  EXPECT_TRUE(is_involutive(lx).involutive);
  EXPECT_TRUE(family_equal(pushforward(lx, p), ly));
}

// ---- Dirac reduction ----

TEST(DiracReduce, SliceWithIdentityProjectionKeepsInducedStructure) {
  Submanifold x = slice(4, {{3, 0}});
  Triangle t(x, Projection::keep(x.intrinsic(), {0, 1, 2}));
  Family r = graph_of_bivector(Space::standard(4), biv(4, {{1, 3, "1"}, {2, 3, "x1"}}));
  ReductionReport rep = dirac_reduce(r, t);
  ASSERT_TRUE(rep.reduced);
  EXPECT_TRUE(rep.reducible());
  EXPECT_TRUE(rep.round_trip);
  EXPECT_TRUE(rep.criteria_agree());
  EXPECT_TRUE(family_equal(*rep.reduced, graph_of_distribution(Space::standard(3), {th::V({"0", "1", "x1"}, 3)})));
}

TEST(DiracReduce, NonSmoothPullbackStillReducesToPoint) {
  Family l = graph_of_bivector(Space::standard(2), biv(2, {{0, 1, "x1"}}));
  Submanifold x = slice(2, {{1, 0}});
  Triangle t(x, Projection::keep(x.intrinsic(), {}));
  ReductionReport rep = dirac_reduce(l, t, probes_with({{Scalar(0)}}));
  EXPECT_FALSE(rep.pulled.constant_rank());
  ASSERT_TRUE(rep.reduced);
  EXPECT_EQ(rep.reduced->n(), 0u);
  EXPECT_TRUE(rep.reducible());
  EXPECT_TRUE(rep.round_trip);
  EXPECT_TRUE(rep.criteria_agree());
}

TEST(DiracReduce, NonBasicStretchIsNotReducible) {
  Family l = graph_of_bivector(Space::standard(3), biv(3, {{1, 2, "x1"}}));
  Submanifold x = Submanifold::whole(l.space());
  Triangle t(x, Projection::keep(x.intrinsic(), {1, 2}));
  ReductionReport rep = dirac_reduce(l, t);
  EXPECT_FALSE(rep.reduced);
  EXPECT_FALSE(rep.failure.empty());
  EXPECT_FALSE(rep.stretched_involutivity.involutive);
  EXPECT_FALSE(rep.along_involutivity.involutive);
  EXPECT_TRUE(rep.criteria_agree());
}

TEST(DiracReduce, DistributionGraphAlongItsLeaves) {
  Space sp = Space::standard(3);
  Family l = graph_of_distribution(sp, {cvec(3, {0, 0, 1})});
  Triangle t(Submanifold::whole(sp), Projection::keep(sp, {0, 1}));
  ReductionReport rep = dirac_reduce(l, t);
  ASSERT_TRUE(rep.reduced);
  EXPECT_TRUE(family_equal(*rep.reduced, full_cotangent(Space::standard(2))));
  EXPECT_TRUE(rep.round_trip);
  EXPECT_TRUE(rep.criteria_agree());
}

TEST(DiracReduce, CriteriaAgreeOnRandomSlices) {
  testgen::Gen g(2024);
  int reduced = 0, checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> w;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j)
        if (g.coin(60)) w.emplace_back(i, j, g.poly(4, 1, 2));
    Bivector pi = Bivector::from_wedges(4, 4, w);
    Family l = graph_of_bivector(Space::standard(4), pi);
    if (!is_involutive(l).involutive) continue;
    Submanifold x = slice(4, {{3, 1}});
    Triangle t(x, Projection::keep(x.intrinsic(), {0, 1}));
    ReductionReport rep = dirac_reduce(l, t);
    EXPECT_TRUE(rep.criteria_agree()) << "trial " << trial;
    if (rep.reduced) EXPECT_TRUE(rep.round_trip) << "trial " << trial;
    ++checked;
    reduced += rep.reducible();
  }
  EXPECT_GE(checked, 8);
  EXPECT_GE(reduced, 1);
  EXPECT_LT(reduced, checked);
}

// ---- witnesses and MR conditions ----

namespace {
struct SymplecticSlice {
  Bivector pi = biv(4, {{0, 1, "1"}, {2, 3, "1"}});
  Family l = graph_of_bivector(Space::standard(4), pi);
  Submanifold x = slice(4, {{2, 0}, {3, 0}});
  Triangle t{x, Projection::keep(x.intrinsic(), {0})};
};
} // namespace

TEST(Witness, LargeWitnessPasses) {
  SymplecticSlice s;
  std::vector<PolyVector> e{cvec(4, {0, 1, 0, 0}), cvec(4, {0, 0, 1, 0}), cvec(4, {0, 0, 0, 1})};
  WitnessReport w = check_witness(s.l, s.t, e);
  EXPECT_TRUE(w.wit1);
  EXPECT_TRUE(w.wit2);
  EXPECT_TRUE(w.wit3);
  MRReport mr = check_MR(s.pi, s.x, e);
  EXPECT_TRUE(mr.mr1);
  EXPECT_TRUE(mr.mr1prime);
  EXPECT_TRUE(mr.mr2);
  EXPECT_EQ(mr.passed(), w.passed());
  EXPECT_TRUE(dirac_reduce(s.l, s.t).reducible());
}

TEST(Witness, FibreOnlyWitnessFailsThirdCondition) {
  SymplecticSlice s;
  std::vector<PolyVector> e{cvec(4, {0, 1, 0, 0})};
  WitnessReport w = check_witness(s.l, s.t, e);
  EXPECT_FALSE(w.wit3);
  EXPECT_EQ(w.wit3_residual, Polynomial::one(2));
  MRReport mr = check_MR(s.pi, s.x, e);
  EXPECT_FALSE(mr.mr1);
  EXPECT_FALSE(mr.mr1prime);
  EXPECT_EQ(mr.passed(), w.passed());
}

TEST(Witness, NotAdaptedRejected) {
  SymplecticSlice s;
  EXPECT_THROW(check_witness(s.l, s.t, {cvec(4, {0, 0, 1, 0})}), NotAdapted);
  EXPECT_THROW(check_witness(s.l, s.t, {cvec(4, {1, 0, 0, 0})}), NotAdapted);
}

TEST(Witness, TangentWitnessForDegeneratePoissonLine) {
  Bivector pi = biv(2, {{0, 1, "x1"}});
  Family l = graph_of_bivector(Space::standard(2), pi);
  Submanifold x = slice(2, {{1, 0}});
  Triangle t(x, Projection::keep(x.intrinsic(), {}));
  std::vector<PolyVector> e{cvec(2, {1, 0})};
  MRReport mr = check_MR(pi, x, e);
  EXPECT_TRUE(mr.mr1);
  EXPECT_TRUE(mr.mr2);
  WitnessReport w = check_witness(l, t, e, probes_with({{Scalar(0)}}));
  EXPECT_TRUE(w.passed());
  EXPECT_TRUE(dirac_reduce(l, t).reducible());
}

TEST(Witness, ZeroBivectorPassesEverything) {
  Bivector pi = biv(3, {});
  Submanifold x = slice(3, {{2, 0}});
  for (const auto &e : std::vector<std::vector<PolyVector>>{{}, {cvec(3, {1, 0, 0})}, {cvec(3, {0, 0, 1})}}) {
    MRReport mr = check_MR(pi, x, e);
    EXPECT_TRUE(mr.mr1 && mr.mr1prime && mr.mr2);
  }
}

TEST(Witness, MomentMapLine) {
  Family l = graph_of_two_form(Space::standard(4), form(4, {{0, 1, "1"}}));
  Submanifold x = slice(4, {{1, 0}});
  Projection p = Projection::linear(x.intrinsic(), {{"y", {Scalar(-1), Scalar(1), Scalar(0)}}});
  Triangle t(x, p);
  std::vector<PolyVector> e{cvec(4, {1, 0, 1, 0}), cvec(4, {0, 0, 0, 1})};
  WitnessReport w = check_witness(l, t, e);
  EXPECT_TRUE(w.passed());
  ReductionReport rep = dirac_reduce(l, t);
  EXPECT_TRUE(family_equal(rep.pulled.family, full_tangent(x.intrinsic())));
  ASSERT_TRUE(rep.reduced);
  EXPECT_TRUE(family_equal(*rep.reduced, full_tangent(named({"y"}))));
  EXPECT_TRUE(rep.round_trip);
}

TEST(Witness, FibreWitnessMatchesProjectabilityOnWholeSpace) {
  struct Case {
    Family l;
    std::vector<std::size_t> kept;
  };
  Space sp3 = named({"x2", "x3", "x4"});
  std::vector<Case> cases{
      {kernel_left(), {1, 2, 3, 4}},
      {kernel_right(), {0, 1, 2, 3}},
      {graph_of_bivector(sp3, biv(3, {{1, 0, "1"}})), {0, 2}},
      {graph_of_bivector(Space::standard(3), biv(3, {{1, 2, "x1"}})), {1, 2}},
      {graph_of_bivector(Space::standard(3), biv(3, {{0, 1, "x3"}})), {0, 1}},
  };
  for (const auto &c : cases) {
    Submanifold x = Submanifold::whole(c.l.space());
    Triangle t(x, Projection::keep(c.l.space(), c.kept));
    std::vector<PolyVector> e = t.p.fiber_fields();
    bool wit = check_witness(c.l, t, e).passed();
    bool pushed = true;
    try {
      pushforward(c.l, t.p);
    } catch (const NotProjectable &) {
      pushed = false;
    }
    EXPECT_EQ(wit, pushed);
    if (wit) EXPECT_TRUE(dirac_reduce(c.l, t).reducible());
  }
}

// ---- split condition ----

TEST(Split, GraphExampleFailsOnlyOnDegenerateLocus) {
  Family l = graph_of_bivector(Space::standard(4), biv(4, {{0, 1, "1"}, {2, 3, "x3"}}));
  Submanifold x = Submanifold::graph(Space::standard(4), {{2, P("x1^2", 4)}, {3, P("x1^2", 4)}});
  SplitReport r = split_check(l, x, probes_with({{Scalar(0), Scalar(3)}, {Scalar(0), Scalar(-1, 2)}}));
  EXPECT_EQ(r.intersection.rank(), 0u);
  EXPECT_FALSE(r.constant_rank());
  for (const auto &ev : r.smoothness.probes) {
    EXPECT_EQ(ev.status == ProbeStatus::differs, ev.point[0].is_zero()) << point_str(ev.point);
    if (ev.point[0].is_zero()) EXPECT_EQ(ev.fiber_dim, 2u);
  }
}

TEST(Split, TransverseSymplecticSliceIsClean) {
  SymplecticSlice s;
  SplitReport r = split_check(s.l, s.x);
  EXPECT_EQ(r.intersection.rank(), 0u);
  EXPECT_TRUE(r.constant_rank());
}

// ---- Magri ----

TEST(Magri, PoissonKernelIsImageOfKernel) {
  Space sp = Space::standard(4);
  Bivector pl = biv(4, {{0, 3, "1"}}), pr = biv(4, {{1, 3, "1"}, {2, 3, "x1"}});
  Family l = graph_of_bivector(sp, pl), r = graph_of_bivector(sp, pr);
  Family k = magri_kernel(l, r);
  Family expected = magri_original(sp, pl, pr);
  EXPECT_TRUE(family_equal(k, expected));
  EXPECT_TRUE(family_equal(k, distribution(sp, {cvec(4, {0, 0, 0, 1})})));
}

TEST(Magri, KernelDiamondPairProducts) {
  Family l = kernel_left(), r = kernel_right();
  const std::size_t n = 5;
  Family expected = on(Space::standard(5), {d(n, 0), d(n, 1) + d(n, 3) + dx(n, 4), d(n, 2), dx(n, 1) - dx(n, 3),
                                            d(n, 4) - dx(n, 3)});
  EXPECT_TRUE(family_equal(magri_N(l, r), expected));
  EXPECT_TRUE(family_equal(magri_kernel(l, r), distribution(l.space(), {cvec(5, {1, 0, 0, 0, 0}), cvec(5, {0, 0, 1, 0, 0})})));
  EXPECT_TRUE(family_equal(magri_kernel(r, l), distribution(l.space(), {cvec(5, {0, 0, 1, 0, 0}), cvec(5, {0, 0, 0, 0, 1})})));
  Family m = magri_M(l, r);
  EXPECT_TRUE(m.is_lagrangian());
  EXPECT_TRUE(family_contains(m, magri_kernel(l, r)));
}

TEST(Magri, SelfPairingIsCotangent) {
  testgen::Gen g(8);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> w;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) w.emplace_back(i, j, g.poly(3, 1, 2));
    Family l = graph_of_bivector(Space::standard(3), Bivector::from_wedges(3, 3, w));
    Family nn = magri_N(l, l);
    EXPECT_TRUE(family_equal(nn, full_cotangent(l.space())));
    EXPECT_EQ(kernel(nn).rank(), 0u);
    ProbePoint pt = g.point(3);
    auto lf = oracle::eval(l.frame(), pt);
    if (oracle::rank(lf) != 3) continue;
    oracle::Mat neg = lf;
    for (auto &row : neg)
      for (std::size_t k = 3; k < 6; ++k) row[k] = -row[k];
    auto pointwise = oracle::product(lf, oracle::product(lf, neg, 3, false), 3, true);
    EXPECT_TRUE(oracle::same_subspace(oracle::eval(nn.frame(), pt), pointwise));
  }
}

// ---- diamonds ----

TEST(Diamond, KernelDiamondReproducesDisplayedStructures) {
  DiamondReport rep = diamond(kernel_left(), kernel_right(), DiamondKind::kernel);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.left().coords, (std::vector<std::string>{"x2", "x3", "x4", "x5"}));
  EXPECT_EQ(rep.right().coords, (std::vector<std::string>{"x1", "x2", "x3", "x4"}));
  EXPECT_EQ(rep.bottom().coords, (std::vector<std::string>{"x2", "x3", "x4"}));

  Space sl = rep.left().l.space(), sr = rep.right().l.space(), sb = rep.bottom().l.space();
  EXPECT_TRUE(family_equal(rep.left().l, graph_of_two_form(sl, form(4, {{0, 1, "1"}, {2, 3, "1"}}))));
  EXPECT_TRUE(family_equal(rep.left().r, on(sl, {dx(4, 0), d(4, 1) + dx(4, 2), d(4, 2) - dx(4, 1), d(4, 3)})));
  EXPECT_TRUE(family_equal(rep.right().l, on(sr, {d(4, 0), d(4, 1) + dx(4, 2), d(4, 2) - dx(4, 1), dx(4, 3)})));
  EXPECT_TRUE(family_equal(rep.right().r, graph_of_two_form(sr, form(4, {{0, 1, "1"}, {2, 3, "1"}}))));
  EXPECT_TRUE(family_equal(rep.bottom().l, graph_of_bivector(sb, biv(3, {{1, 0, "1"}}))));
  EXPECT_TRUE(family_equal(rep.bottom().r, graph_of_bivector(sb, biv(3, {{2, 1, "1"}}))));
  ASSERT_TRUE(rep.bottom().concurrence.product);
  EXPECT_TRUE(family_equal(*rep.bottom().concurrence.product, graph_of_bivector(sb, biv(3, {{2, 1, "1"}, {0, 1, "-1"}}))));
}

TEST(Diamond, MagriDiamondReproducesDisplayedStructures) {
  DiamondReport rep = diamond(kernel_left(), kernel_right(), DiamondKind::magri);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.left().coords, (std::vector<std::string>{"x2", "x4", "x5"}));
  EXPECT_EQ(rep.right().coords, (std::vector<std::string>{"x1", "x2", "x4"}));
  EXPECT_EQ(rep.bottom().coords, (std::vector<std::string>{"x2", "x4"}));
  Space sl = rep.left().l.space(), sr = rep.right().l.space(), sb = rep.bottom().l.space();
  EXPECT_TRUE(family_equal(rep.left().l, graph_of_bivector(sl, biv(3, {{2, 1, "1"}}))));
  EXPECT_TRUE(family_equal(rep.left().r, graph_of_distribution(sl, {cvec(3, {0, 0, 1})})));
  EXPECT_TRUE(family_equal(rep.right().l, graph_of_distribution(sr, {cvec(3, {1, 0, 0})})));
  EXPECT_TRUE(family_equal(rep.right().r, graph_of_bivector(sr, biv(3, {{1, 0, "1"}}))));
  EXPECT_TRUE(family_equal(rep.bottom().l, full_cotangent(sb)));
  EXPECT_TRUE(family_equal(rep.bottom().r, full_cotangent(sb)));
}

TEST(Diamond, SymplecticPairHasTrivialDiamond) {
  Space sp = Space::standard(4);
  Family l = graph_of_two_form(sp, form(4, {{0, 1, "1"}, {2, 3, "1"}}));
  Family r = graph_of_two_form(sp, form(4, {{0, 2, "1"}, {1, 3, "1"}}));
  DiamondReport rep = diamond(l, r, DiamondKind::kernel);
  EXPECT_EQ(rep.dl.rank(), 0u);
  EXPECT_EQ(rep.dr.rank(), 0u);
  for (const auto &v : rep.vertices) {
    EXPECT_EQ(v.coords, sp.coords);
    EXPECT_TRUE(family_equal(v.l, l));
    EXPECT_TRUE(family_equal(v.r, r));
  }
}

TEST(Diamond, NonCoordinateKernelNeedsChange) {
  Space sp = Space::standard(2);
  Family l = graph_of_distribution(sp, {cvec(2, {1, 1})});
  Family r = full_cotangent(sp);
  try {
    diamond(l, r, DiamondKind::kernel);
    FAIL() << "expected NotCoordinateSpanned";
  } catch (const NotCoordinateSpanned &e) {
    EXPECT_EQ(e.generator, "d/dx1 + d/dx2");
  }
  LinearChange change(sp, {{Scalar(1), Scalar(0)}, {Scalar(-1), Scalar(1)}}, {"z1", "z2"});
  DiamondReport rep = diamond(l, r, DiamondKind::kernel, change);
  EXPECT_EQ(rep.left().coords, (std::vector<std::string>{"z2"}));
  EXPECT_TRUE(rep.passed());
}

// ---- common witnesses and the complement scheme ----

TEST(CommonWitness, KernelThenMagriOnQuotient) {
  Space sp = named({"x2", "x3", "x4"});
  Bivector nl = biv(3, {{1, 0, "1"}}), nr = biv(3, {{2, 1, "1"}});
  Family l = graph_of_bivector(sp, nl), r = graph_of_bivector(sp, nr);
  EXPECT_TRUE(family_equal(magri_original(sp, nl, nr), distribution(sp, {cvec(3, {0, 1, 0})})));
  Submanifold x = Submanifold::whole(sp);
  Triangle t(x, Projection::keep(sp, {0, 2}));
  CommonWitnessReport rep = check_common_witness(l, r, t, {cvec(3, {0, 1, 0})});
  EXPECT_TRUE(rep.input.weak);
  EXPECT_TRUE(rep.witnesses());
  ASSERT_TRUE(rep.rl && rep.rl->reduced && rep.rr && rep.rr->reduced);
  Space y = named({"x2", "x4"});
  EXPECT_TRUE(family_equal(*rep.rl->reduced, full_cotangent(y)));
  EXPECT_TRUE(family_equal(*rep.rr->reduced, full_cotangent(y)));
  ASSERT_TRUE(rep.reduced);
  EXPECT_TRUE(rep.reduced->weak);
  EXPECT_TRUE(rep.conclusion_holds());
}

TEST(CommonWitness, SameStructureTwice) {
  SymplecticSlice s;
  std::vector<PolyVector> e{cvec(4, {0, 1, 0, 0}), cvec(4, {0, 0, 1, 0}), cvec(4, {0, 0, 0, 1})};
  CommonWitnessReport rep = check_common_witness(s.l, s.l, s.t, e);
  EXPECT_TRUE(rep.witnesses());
  ASSERT_TRUE(rep.reduced);
  EXPECT_TRUE(rep.reduced->weak);
  EXPECT_TRUE(rep.conclusion_holds());
}

TEST(CommonWitness, ComplementSchemeBreaksConcurrence) {
  const std::size_t n = 4;
  Family l = graph_of_bivector(Space::standard(4), biv(4, {{0, 3, "1"}}));
  Family r = graph_of_bivector(Space::standard(4), biv(4, {{1, 3, "1"}, {2, 3, "x1"}}));
  Submanifold x = slice(4, {{3, 0}});
  std::vector<GenSection> cl{d(n, 0), dx(n, 1), dx(n, 2)};
  std::vector<GenSection> cr{dx(n, 0), S({"0", "1", "x1", "0"}, {}, 4), S({}, {"0", "x1", "-1", "0"}, 4)};
  ComplementSchemeReport rep = check_complement_scheme(l, r, x, cl, cr);
  EXPECT_TRUE(concur(l, r, ConcurMode::weak).weak);
  EXPECT_TRUE(rep.cl.decomposes);
  EXPECT_TRUE(rep.cr.decomposes);
  EXPECT_TRUE(rep.cl.complement_involutivity.involutive);
  EXPECT_TRUE(rep.cr.complement_involutivity.involutive);
  EXPECT_FALSE(rep.induced.weak);
  EXPECT_EQ(rep.induced.involutivity.residual, Polynomial::one(3));
}

TEST(CommonWitness, WrongComplementDetected) {
  const std::size_t n = 4;
  Family l = graph_of_bivector(Space::standard(4), biv(4, {{0, 3, "1"}}));
  Submanifold x = slice(4, {{3, 0}});
  EXPECT_FALSE(check_complement(l, x, {d(n, 1), dx(n, 0), dx(n, 2)}).decomposes);
}

// ---- kernels of concurring pairs ----

TEST(KernelReduction, CommutingConstantPoissonPairs) {
  testgen::Gen g(81);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4;
    auto random_constant = [&] {
      std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> w;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (g.coin(50)) w.emplace_back(i, j, Polynomial::constant(n, g.scalar()));
      return Bivector::from_wedges(n, n, w);
    };
    Space sp = Space::standard(n);
    Family l = graph_of_bivector(sp, random_constant()), r = graph_of_bivector(sp, random_constant());
    ASSERT_TRUE(concur(l, r, ConcurMode::weak).weak);
    Family kl = kernel(l), kr = kernel(r);
    EXPECT_TRUE(is_involutive(cotangent_product(l, graph_of_distribution(sp, vector_parts(kr)))).involutive);
    EXPECT_TRUE(is_involutive(cotangent_product(r, graph_of_distribution(sp, vector_parts(kl)))).involutive);
    EXPECT_TRUE(is_involutive(graph_of_distribution(sp, vector_parts(family_sum(kl, kr)))).involutive);
  }
}

TEST(KernelReduction, ConcurringDiracPairsWithKernels) {
  testgen::Gen g(82);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 10; ++trial) {
    const std::size_t n = 4;
    Space sp = Space::standard(n);
    auto random_dirac = [&] {
      std::vector<PolyVector> f;
      std::size_t rank = static_cast<std::size_t>(g.integer(1, 2));
      for (std::size_t k = 0; k < rank; ++k) {
        PolyVector u;
        for (std::size_t i = 0; i < n; ++i) u.push_back(Polynomial::constant(n, Scalar(g.integer(-2, 2))));
        f.push_back(u);
      }
      std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> w;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (g.coin(40)) w.emplace_back(i, j, Polynomial::constant(n, g.scalar()));
      return gauge(graph_of_distribution(sp, f), TwoForm::from_wedges(n, n, w));
    };
    Family l = random_dirac(), r = random_dirac();
    ConcurrenceReport c = concur(l, r, ConcurMode::weak);
    if (!c.weak) continue;
    Family kl = kernel(l), kr = kernel(r);
    try {
      EXPECT_TRUE(is_involutive(cotangent_product(l, graph_of_distribution(sp, vector_parts(kr)))).involutive);
      EXPECT_TRUE(is_involutive(cotangent_product(r, graph_of_distribution(sp, vector_parts(kl)))).involutive);
    } catch (const ProductNotGenericallyLagrangian &) {
      continue;
    }
    EXPECT_TRUE(is_involutive(graph_of_distribution(sp, vector_parts(family_sum(kl, kr)))).involutive);
    ++checked;
  }
  EXPECT_GE(checked, 5);
}

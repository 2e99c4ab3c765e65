#include <gtest/gtest.h>

#include <cmath>

#include "coverforge/lebesgue.hpp"
#include "gen.hpp"

using namespace coverforge;

namespace {

Cover unit_overlaps() {
  Cover c = make_cover(OpenSet::whole(1), {});
  c.schemas = {LatticeFamily::slab(1, 0, -1, 1, 1)};
  return c;
}

Cover whole(std::size_t n) { return make_cover(OpenSet::whole(n), {OpenSet::whole(n)}); }

// Double-precision grid oracle for the profile of the (i-1,i+1) cover: the
// best ball at x is centered on the nearest integer.
double overlap_profile_oracle(double d_max, double delta) {
  double best = 1;
  for (double c = -d_max - 2 * delta + delta / 2; c <= d_max + 2 * delta; c += delta) {
    const double r = 1 - std::fabs(c - std::round(c));
    best = std::min(best, std::min(r, 1.0) - delta / 2);
  }
  return best;
}

// Intervals that shrink away from the origin: cut points t_{k+1} = t_k + 4/(4+k).
Cover shrinking() {
  std::vector<Rational> cuts{0};
  for (long k = 0; cuts.back() < 14; ++k) cuts.push_back(cuts.back() + Rational(4, 4 + k));
  std::vector<OpenSet> elems;
  for (std::size_t k = 1; k + 1 < cuts.size(); ++k) {
    elems.push_back(OpenSet::box(Box::of({{cuts[k - 1], cuts[k + 1]}})));
    elems.push_back(OpenSet::box(Box::of({{-cuts[k + 1], -cuts[k - 1]}})));
  }
  elems.push_back(OpenSet::box(Box::of({{-cuts[1], cuts[1]}})));
  return make_cover(OpenSet::whole(1), elems);
}

}  // namespace

TEST(InscribedRadius, Examples) {
  EXPECT_EQ(inscribed_radius(whole(2), {Rational(5), Rational(-7)}), 1);
  EXPECT_EQ(inscribed_radius(unit_overlaps(), {Rational(1, 2)}), Rational(1, 2));
  EXPECT_EQ(inscribed_radius(unit_overlaps(), {Rational(0)}), 1);
  EXPECT_EQ(inscribed_radius(unit_overlaps(), {Rational(13, 4)}), Rational(3, 4));
  const Cover none = make_cover(OpenSet::whole(1), {OpenSet::box(Box::of({{0, 1}}))});
  EXPECT_EQ(inscribed_radius(none, {Rational(3)}), 0);
}

TEST(InscribedRadius, FieldElementsUnsupported) {
  const Cover c = make_cover(OpenSet::whole(1), {OpenSet::positive(fld::pos_part(fld::coord(1, 0)))});
  try {
    inscribed_radius(c, {Rational(1)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
  }
}

TEST(Profile, WholeSpaceIsNearlyOne) {
  const PLFunction p = lebesgue_profile(whole(1), 5, Rational(1, 20));
  EXPECT_EQ(p.min_value(), Rational(39, 40));
  EXPECT_TRUE(p.nonincreasing());
}

TEST(Profile, OverlappingUnitIntervalsMatchOracle) {
  const PLFunction p = lebesgue_profile(unit_overlaps(), 6, Rational(1, 20));
  EXPECT_TRUE(p.nonincreasing());
  const double oracle = overlap_profile_oracle(6, 0.05);
  EXPECT_NEAR(to_double(p.min_value()), oracle, 1e-12);
  EXPECT_GE(p.min_value(), Rational(45, 100));
  // The true profile is 1 - d up to d = 1/2 and 1/2 from there on.
  EXPECT_LE(p(Rational(1, 2)), Rational(1, 2));
  EXPECT_LE(p(Rational(6)), Rational(1, 2));
  EXPECT_LE(p(Rational(1, 4)), Rational(3, 4));
}

TEST(Profile, ShrinkingCoverDecreases) {
  const Cover c = shrinking();
  const PLFunction p = lebesgue_profile(c, 10, Rational(1, 10));
  EXPECT_TRUE(p.nonincreasing());
  EXPECT_LT(p(Rational(10)), p(Rational(5)));
  EXPECT_LT(p(Rational(5)), p(Rational(0)));
}

TEST(Profile, IsSoundAtSampledPoints) {
  const Cover c = shrinking();
  const PLFunction p = lebesgue_profile(c, 10, Rational(1, 10));
  testgen::Gen g(9);
  for (int k = 0; k < 2000; ++k) {
    const Point x = g.point(Box::of({{-10, 10}}), 1000);
    const Rational d = abs(x[0]);
    ASSERT_LE(p(d), inscribed_radius(c, x)) << to_string(x[0]);
  }
}

TEST(Profile, GapReportsCenter) {
  const Cover gap = make_cover(OpenSet::whole(1), {OpenSet::box(Box::of({{-5, 1}})), OpenSet::box(Box::of({{1, 5}}))});
  try {
    lebesgue_profile(gap, 3, Rational(1, 20));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CoverageGap);
  }
}

TEST(Rescaler, ConstantProfiles) {
  const Rescaler one = build_rescaler(PLFunction::constant(1), 1);
  EXPECT_EQ(one.fixed_point, 1);
  EXPECT_EQ(one.b.min_value(), 2);
  EXPECT_EQ(one.b(Rational(100)), 2);
  const Rescaler half = build_rescaler(PLFunction::constant(Rational(1, 2)), 1);
  EXPECT_EQ(half.fixed_point, Rational(1, 2));
  EXPECT_EQ(half.b.min_value(), 3);
  EXPECT_EQ(half.b(Rational(100)), 3);
}

TEST(Rescaler, DecreasingProfileGivesIncreasingB) {
  testgen::Gen g(12);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> xs, ys;
    Rational x = 0, y = 1;
    for (int k = 0; k < 8; ++k) {
      xs.push_back(x);
      ys.push_back(y);
      x += g.rational(Rational(1, 4), 2);
      y -= g.rational(Rational(1, 64), Rational(1, 16), 64);
    }
    const PLFunction p(xs, ys);
    const Rescaler r = build_rescaler(p, 1);
    EXPECT_EQ(r.fixed_point, p(r.fixed_point));
    EXPECT_TRUE(r.map().monotone());
    EXPECT_GE(r.b(Rational(0)), 1 + 1 / p(r.fixed_point));
    for (std::size_t k = 1; k < r.b.xs().size(); ++k) EXPECT_GT(r.b.ys()[k], r.b.ys()[k - 1]);
    // b(x) >= 1/p(g(x)) where g inverts x - p(x) past the fixed point.
    for (int k = 0; k < 50; ++k) {
      const Rational d = r.fixed_point + g.rational(0, 12, 16);
      EXPECT_GE(r.b(d - p(d)), 1 / p(d));
    }
  }
}

TEST(Rescaler, RejectsBadProfiles) {
  EXPECT_THROW(build_rescaler(PLFunction({0, 1}, {Rational(1, 2), 1}), 1), Error);
  EXPECT_THROW(build_rescaler(PLFunction::constant(2), 1), Error);
  EXPECT_THROW(build_rescaler(PLFunction({0, 1}, {1, 0}), 1), Error);
}

TEST(VerifyLebesgue, PassAndPlantedFailure) {
  testgen::Gen g(4);
  std::vector<Point> samples;
  for (int k = 0; k < 1000; ++k) samples.push_back(g.point(Box::of({{-20, 20}}), 1024));
  const RadialMap three{1, PLFunction::constant(3), 1};
  const LebesgueReport ok = verify_lebesgue(unit_overlaps(), three, samples);
  EXPECT_TRUE(ok.ok());
  EXPECT_EQ(ok.checked, 1000u);
  const RadialMap one{1, PLFunction::constant(1), 1};
  const LebesgueReport bad = verify_lebesgue(unit_overlaps(), one, samples);
  EXPECT_FALSE(bad.ok());
  ASSERT_TRUE(bad.witness.has_value());
  EXPECT_EQ(verify_lebesgue(whole(1), RadialMap{1, PLFunction::constant(2), 1}, samples).failed, 0u);
}

TEST(VerifyLebesgue, BuiltRescalerPassesOnShrinkingCover) {
  const Cover c = shrinking();
  const Rescaler r = build_rescaler(lebesgue_profile(c, 10, Rational(1, 10)), 1);
  testgen::Gen g(6);
  std::vector<Point> samples;
  for (int k = 0; k < 1000; ++k) samples.push_back(g.point(Box::of({{-10, 10}}), 1024));
  EXPECT_TRUE(verify_lebesgue(c, r.map(), samples).ok());
}

TEST(RadialInverse, RoundTrip) {
  const Rescaler r = build_rescaler(PLFunction({0, 1, 3}, {1, Rational(3, 4), Rational(1, 3)}), 2);
  std::vector<Rational> radii;
  for (long k = 1; k <= 1000; ++k) radii.push_back(Rational(k, 50));
  for (auto& x : radii) x.canonicalize();
  EXPECT_TRUE(check_radial_inverse(r.map(Rational(3)), radii));
  RadialMap broken = r.map();
  broken.b = PLFunction({0, 1}, {2, 1});
  EXPECT_FALSE(check_radial_inverse(broken, radii));
}

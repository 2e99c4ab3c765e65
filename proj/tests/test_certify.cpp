#include <gtest/gtest.h>

#include <chrono>

#include "coverforge/decompose.hpp"
#include "gen.hpp"

using namespace coverforge;

namespace {

SamplePlan plan_on(const Box& w, std::size_t count = 2000) {
  SamplePlan p;
  p.window = w;
  p.count = count;
  p.seed = 5;
  return p;
}

OpenSet iv(Rational a, Rational b) { return OpenSet::box(Box::of({{a, b}})); }

Cover tents(OpenSet ambient, std::vector<OpenSet> elems) { return tent_partition(make_cover(std::move(ambient), std::move(elems))); }

void expect_passes(const Cert& c, const SamplePlan& plan) {
  const VerificationReport r = verify(c, plan);
  if (const auto* f = r.first_failure()) ADD_FAILURE() << f->path << " " << node_kind_name(f->kind) << ": " << f->detail;
  EXPECT_FALSE(r.failed());
  EXPECT_TRUE(leaves_are_axioms(c));
}

std::size_t count_kind(const Cert& c, NodeKind k) {
  std::size_t n = c->kind == k;
  for (const auto& ch : c->children) n += count_kind(ch, k);
  return n;
}

}  // namespace

TEST(Verify, EmptyCertificateIsExact) {
  const Cert c = disjoint(make_cover(OpenSet::empty(1), {}));
  const VerificationReport r = verify(c, plan_on(Box::of({{-1, 1}})));
  EXPECT_EQ(r.aggregate, Tier::Exact);
}

TEST(Verify, BrokenCoarsenIsRefutedWithWitness) {
  // (0,3) claimed to refine (0,2).
  const Cover parent = make_cover(iv(0, 3), {iv(0, 2)});
  const Cover child = make_cover(iv(0, 3), {iv(0, 3)});
  const Cert c = coarsen(parent, disjoint(child), {0});
  const VerificationReport r = verify(c, plan_on(Box::of({{-1, 4}})));
  ASSERT_TRUE(r.failed());
  const NodeVerdict* f = r.first_failure();
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->kind, NodeKind::Coarsen);
  ASSERT_TRUE(f->witness.has_value());
  EXPECT_EQ((*f->witness)[0], Rational(5, 2));
}

TEST(Verify, TwoElementRejectsGapAndExtraElements) {
  const Cover gap = tents(iv(0, 4), {iv(0, 2), iv(2, 4)});
  const VerificationReport r = verify(two_element(gap), plan_on(Box::of({{-1, 5}})));
  EXPECT_TRUE(r.failed());
  const Cover three = tents(iv(0, 4), {iv(0, 2), iv(1, 3), iv(2, 4)});
  EXPECT_TRUE(verify(two_element(three), plan_on(Box::of({{-1, 5}}))).failed());
}

TEST(Verify, DisjointRejectsOverlap) {
  const Cover c = make_cover(iv(0, 4), {iv(0, 2), iv(1, 4)});
  const VerificationReport r = verify(disjoint(c), plan_on(Box::of({{-1, 5}})));
  EXPECT_TRUE(r.failed());
}

TEST(Verify, ComposeRejectsMismatchedAmbient) {
  const Cover outer = tents(iv(0, 4), {iv(0, 3), iv(1, 4)});
  const Cert inner0 = disjoint(make_cover(iv(0, 2), {iv(0, 2)}));  // ambient should be (0,3)
  const Cert inner1 = disjoint(make_cover(iv(1, 4), {iv(1, 4)}));
  EXPECT_TRUE(verify(compose(two_element(outer), {inner0, inner1}), plan_on(Box::of({{-1, 5}}))).failed());
}

TEST(DecomposeZigzag, ThreeIntervals) {
  const Cover z = tents(iv(0, 4), {iv(0, 2), iv(1, 3), iv(2, 4)});
  const Cert c = decompose_zigzag(z);
  ASSERT_EQ(c->kind, NodeKind::Coarsen);
  const Cert comp = c->children[0];
  ASSERT_EQ(comp->kind, NodeKind::Compose);
  const Cover& split = comp->children[0]->cover;
  EXPECT_EQ(comp->children[0]->kind, NodeKind::TwoElement);
  const Point in_a{Rational(1, 2)}, in_b{Rational(3, 2)}, far{Rational(7, 2)};
  EXPECT_TRUE(split.elements[0].contains(in_a));
  EXPECT_TRUE(split.elements[0].contains(far));
  EXPECT_FALSE(split.elements[0].contains({Rational(2)}));
  EXPECT_TRUE(split.elements[1].contains(in_b));
  EXPECT_FALSE(split.elements[1].contains(in_a));
  expect_passes(c, plan_on(Box::of({{-1, 5}})));
}

TEST(DecomposeZigzag, DegenerateSingleMember) {
  const Cover z = tents(iv(0, 4), {iv(0, 4), OpenSet::empty(1), OpenSet::empty(1)});
  expect_passes(decompose_zigzag(z), plan_on(Box::of({{-1, 5}})));
}

TEST(DecomposeChain, ConstantAndEmpty) {
  const Cover chain = tents(iv(0, 4), {iv(0, 4), iv(0, 4), iv(0, 4)});
  expect_passes(decompose_chain(chain, plan_on(Box::of({{-1, 5}}))), plan_on(Box::of({{-1, 5}})));

  Cover empty = make_cover(OpenSet::empty(1), {});
  empty.partition.emplace();
  const Cert c = decompose_chain(empty, plan_on(Box::of({{-1, 1}})));
  EXPECT_EQ(verify(c, plan_on(Box::of({{-1, 1}}))).aggregate, Tier::Exact);
}

TEST(DecomposeChain, NestedIntervals) {
  const Cover chain = tents(iv(-3, 3), {iv(-1, 1), iv(-2, 2), iv(-3, 3)});
  expect_passes(decompose_chain(chain, plan_on(Box::of({{-4, 4}}))), plan_on(Box::of({{-4, 4}})));
}

TEST(DecomposeFinite, SingleAndPair) {
  expect_passes(decompose_finite(tents(iv(0, 1), {iv(0, 1)})), plan_on(Box::of({{-1, 2}})));
  expect_passes(decompose_finite(tents(iv(-1, 2), {iv(-1, 1), iv(0, 2)})), plan_on(Box::of({{-2, 3}})));
}

TEST(DecomposeFinite, RandomFourBoxCover) {
  testgen::Gen g(17);
  std::vector<OpenSet> elems;
  Rational left = 0;
  for (int k = 0; k < 4; ++k) {
    const Rational right = k == 3 ? Rational(10) : Rational(left + g.rational(2, 3));
    elems.push_back(iv(k == 0 ? Rational(0) : Rational(left - g.rational(Rational(1, 4), 1)), right));
    left = right;
  }
  const Cert c = decompose_finite(tents(iv(0, 10), elems));
  EXPECT_EQ(count_kind(c, NodeKind::TwoElement), 4u);
  expect_passes(c, plan_on(Box::of({{-1, 11}})));
}

TEST(DecomposeCountable, MatchesFinitePath) {
  const Cover c = tents(iv(-1, 2), {iv(-1, 1), iv(0, 2)});
  const SamplePlan plan = plan_on(Box::of({{-2, 3}}));
  expect_passes(decompose_countable(c, plan), plan);
  expect_passes(decompose_finite(c), plan);
  expect_passes(decompose_countable(tents(iv(0, 1), {iv(0, 1)}), plan), plan);
}

TEST(Decompose, DisjointInputIsOneLeaf) {
  const Cover c = tents(OpenSet::boxes(1, {Box::of({{0, 1}}), Box::of({{2, 3}})}), {iv(0, 1), iv(2, 3)});
  const Cert cert = decompose(c, plan_on(Box::of({{-1, 4}})));
  EXPECT_EQ(cert->kind, NodeKind::Coarsen);
  EXPECT_EQ(cert->children[0]->kind, NodeKind::Disjoint);
  expect_passes(cert, plan_on(Box::of({{-1, 4}})));
}

TEST(Decompose, TwoIntervals) {
  const Cover c = tents(iv(-1, 2), {iv(-1, 1), iv(0, 2)});
  const SamplePlan plan = plan_on(Box::of({{-2, 3}}));
  expect_passes(decompose(c, plan), plan);
}

TEST(Decompose, TamperedRefinementFails) {
  const Cover c = tents(iv(-1, 2), {iv(-1, 1), iv(0, 2)});
  const SamplePlan plan = plan_on(Box::of({{-2, 3}}));
  CertNode root = *decompose(c, plan);
  ASSERT_EQ(root.kind, NodeKind::Coarsen);
  // The first piece lives near -1 and only refines (-1,1).
  ASSERT_EQ(root.refinement[0].index, 0u);
  root.refinement[0].index = 1;
  const VerificationReport r = verify(std::make_shared<const CertNode>(root), plan);
  ASSERT_TRUE(r.failed());
  EXPECT_EQ(r.first_failure()->path, "root");
}

TEST(Decompose, FiveBoxesInThePlane) {
  auto sq = [](Rational a, Rational b, Rational c, Rational d) { return OpenSet::box(Box::of({{a, b}, {c, d}})); };
  testgen::Gen g(23);
  std::vector<OpenSet> elems{sq(0, 6, 0, 6), sq(4, 10, 0, 6), sq(0, 6, 4, 10), sq(4, 10, 4, 10)};
  const Box extra = g.box(2, 1, 9, 2);
  elems.push_back(OpenSet::box(extra));
  const Cover c = tents(sq(0, 10, 0, 10), elems);
  const SamplePlan plan = plan_on(Box::of({{-1, 11}, {-1, 11}}));
  const Cert cert = decompose(c, plan);
  expect_passes(cert, plan);
  EXPECT_EQ(cert->cover, c);
}

TEST(Decompose, RoundTripOnSeededCovers) {
  testgen::Gen g(41);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<OpenSet> elems;
    Rational left = 0;
    const long n = g.integer(2, 5);
    for (long k = 0; k < n; ++k) {
      const Rational right = k + 1 == n ? Rational(10) : Rational(left + g.rational(2, 3));
      const Rational lo = k == 0 ? Rational(0) : Rational(left - g.rational(Rational(1, 4), 1));
      elems.push_back(iv(lo, right));
      left = right;
    }
    const Cover c = tents(iv(0, 10), elems);
    const SamplePlan plan = plan_on(Box::of({{-1, 11}}));
    ASSERT_TRUE(check_cover(c, plan).ok());
    const Cert cert = decompose(c, plan);
    const VerificationReport r = verify(cert, plan);
    EXPECT_NE(r.aggregate, Tier::Failed) << "trial " << trial;
    EXPECT_NE(r.aggregate, Tier::Heuristic) << "trial " << trial;
    EXPECT_TRUE(leaves_are_axioms(cert));
  }
}

#include <gtest/gtest.h>

#include "models.hpp"

using namespace coverforge;
using namespace models;

namespace {

// Plain row reduction over the rationals, kept independent of the library.
std::size_t oracle_rank(const Matrix& m) {
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational k = a[i][c] / a[r][c];
      for (std::size_t j = c; j < m.cols(); ++j) a[i][j] -= k * a[r][j];
    }
    ++r;
  }
  return r;
}

Matrix diag(const std::vector<Rational>& v) {
  Matrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
  return m;
}

bool has_violation(const ValidationReport& r, const std::string& what) {
  for (const auto& v : r.violations)
    if (v.what.find(what) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Linalg, RankMatchesOracle) {
  testgen::Gen g(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = static_cast<std::size_t>(g.integer(0, 5)), c = static_cast<std::size_t>(g.integer(0, 5));
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = g.coin() ? Rational(0) : g.rational(-3, 3, 2);
    // Duplicate a row now and then to force deficiency.
    if (r > 1 && g.coin())
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = 2 * m(0, j);
    EXPECT_EQ(rank(m), oracle_rank(m));
    const Matrix k = kernel(m);
    EXPECT_EQ(k.cols(), c - oracle_rank(m));
    EXPECT_TRUE((m * k).is_zero());
  }
}

TEST(Linalg, SolveAndColumnOutside) {
  const Matrix a = Matrix::from_rows({{1, 0}, {0, 1}, {1, 1}}, 2);
  const Matrix b = Matrix::from_rows({{2}, {3}, {5}}, 1);
  EXPECT_EQ(solve_exact(a, b), Matrix::from_rows({{2}, {3}}, 1));
  EXPECT_FALSE(solve(a, Vector{1, 1, 0}).has_value());
  EXPECT_EQ(column_outside(a, Matrix::identity(3)), std::optional<std::size_t>(0));
  EXPECT_EQ(column_outside(a, Matrix::from_rows({{1}, {1}, {2}}, 1)), std::nullopt);
  EXPECT_EQ(column_outside(a, b), std::nullopt);
}

TEST(Site, MeetsAndJoins) {
  const SubsetSite c = circle_site();
  const Site& s = *c.site;
  EXPECT_EQ(s.meet(s.index("A"), s.index("B")), s.index("AB"));
  EXPECT_EQ(s.meet(s.index("AB"), s.index("BC")), s.index("empty"));
  EXPECT_EQ(s.join(s.index("A"), s.index("B")), s.index("A+B"));
  EXPECT_EQ(s.meet_of({s.index("A"), s.index("B"), s.index("C")}), s.index("empty"));
  const Site bare({"X", "Y", "Z"}, {{1, 0}, {2, 0}});
  EXPECT_FALSE(bare.meet(1, 2).has_value());
  EXPECT_THROW(bare.meet_of({1, 2}), Error);
}

TEST(Validate, ModelsAreFunctors) {
  const SubsetSite c = circle_site();
  EXPECT_TRUE(validate(function_sheaf(c, 2)).ok());
  EXPECT_TRUE(validate(locally_constant(c, cycle(6))).ok());
  EXPECT_TRUE(validate(*twisted().f).ok());
}

TEST(Validate, ReportsBrokenData) {
  const SubsetSite c = interval_site();
  const Site& s = *c.site;
  Presheaf f = function_sheaf(c);
  // Wrong composite: M -> AB directly disagrees with M -> A -> AB.
  f.set_restriction(s.index("M"), s.index("AB"), {Matrix::from_rows({{0, 1, 0, 0}, {0, 0, 0, 1}}, 4)});
  const auto r = validate(f);
  EXPECT_TRUE(has_violation(r, "compose"));

  Presheaf g = function_sheaf(c);
  g.set_restriction(s.index("AB"), s.index("A"), {Matrix(3, 2)});
  EXPECT_TRUE(has_violation(validate(g), "against the order"));

  Presheaf h = function_sheaf(c);
  h.set_restriction(s.index("A"), s.index("A"), {Matrix(3, 3)});
  EXPECT_TRUE(has_violation(validate(h), "identity relation"));

  Complex bad = Complex::concentrated(1, 3);
  bad.dims = {1, 1, 1};
  bad.d = {Matrix::from_rows({{1}}, 1), Matrix::from_rows({{1}}, 1)};
  Presheaf k(s, {bad, Complex::concentrated(0, 3), Complex::concentrated(0, 3), Complex::concentrated(0, 3), Complex::concentrated(0, 3)});
  EXPECT_TRUE(has_violation(validate(k), "d∘d"));
}

TEST(Validate, ChainMapAndMissing) {
  const SubsetSite c = interval_site();
  const Site& s = *c.site;
  Complex one;
  one.dims = {1, 1};
  one.d = {Matrix::from_rows({{1}}, 1)};
  std::vector<Complex> secs(s.size(), Complex::concentrated(0, 2));
  secs[s.index("M")] = one;
  secs[s.index("A")] = one;
  Presheaf f(s, secs);
  // Commutes with d only if degree 1 uses the same scalar.
  f.set_restriction(s.index("M"), s.index("A"), {Matrix::from_rows({{1}}, 1), Matrix::from_rows({{2}}, 1)});
  EXPECT_TRUE(has_violation(validate(f), "chain map"));

  Presheaf g(s, std::vector<Complex>(s.size(), Complex::concentrated(1)));
  EXPECT_TRUE(has_violation(validate(g), "missing restriction"));
}

TEST(SheafCheck, TwoPointDisjointCover) {
  const SubsetSite d = subset_site(2, {{"M", {0, 1}}, {"P", {0}}, {"Q", {1}}, {"empty", {}}});
  d.site->covers = {{0, {1, 2}}};
  const Presheaf f = function_sheaf(d, 2);
  EXPECT_TRUE(sheaf_check(f, 0, d.site->covers[0]).holds);
  const DescentVerdict v = descent_check(f);
  EXPECT_TRUE(v.holds) << v.detail;

  const Presheaf ghost = with_ghost(d, f, 0);
  const DescentVerdict w = descent_check(ghost);
  EXPECT_FALSE(w.holds);
  EXPECT_EQ(w.hypothesis, "disjoint product");
}

TEST(SheafCheck, CircleDegreeZero) {
  const SubsetSite c = circle_site();
  const Presheaf f = locally_constant(c, cycle(6));
  for (const auto& cover : c.site->covers) EXPECT_TRUE(sheaf_check(f, 0, cover).holds);
}

TEST(SheafCheck, OversizedTopHasKernelWitness) {
  const SubsetSite c = interval_site();
  const Presheaf f = with_ghost(c, function_sheaf(c), c.site->index("M"));
  const CheckResult r = sheaf_check(f, 0, c.site->covers[0]);
  ASSERT_FALSE(r.holds);
  ASSERT_TRUE(r.witness.has_value());
  // The witness restricts to zero on both members.
  const Matrix w = Matrix::from_rows({*r.witness}, r.witness->size()).transpose();
  for (auto u : c.site->covers[0].members) EXPECT_TRUE((f.restriction(c.site->index("M"), u, 0) * w).is_zero());
  EXPECT_NE(std::count(r.witness->begin(), r.witness->end(), Rational(0)), static_cast<long>(r.witness->size()));
}

TEST(SheafCheck, MissingGlueHasWitness) {
  // Sections over M are only the constants on a two-point space.
  const SubsetSite d = subset_site(2, {{"M", {0, 1}}, {"P", {0}}, {"Q", {1}}, {"empty", {}}});
  const Site& s = *d.site;
  Presheaf f(s, {Complex::concentrated(1), Complex::concentrated(1), Complex::concentrated(1), Complex::concentrated(0)});
  f.set_restriction(0, 1, {Matrix::from_rows({{1}}, 1)});
  f.set_restriction(0, 2, {Matrix::from_rows({{1}}, 1)});
  f.set_restriction(1, 3, {Matrix(0, 1)});
  f.set_restriction(2, 3, {Matrix(0, 1)});
  const CheckResult r = sheaf_check(f, 0, {0, {1, 2}});
  ASSERT_FALSE(r.holds);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_NE((*r.witness)[0], (*r.witness)[1]);
}

TEST(MayerVietoris, CircleTwoArcsFails) {
  const SubsetSite c = circle_site();
  const Site& s = *c.site;
  const Presheaf f = locally_constant(c, cycle(6));
  const CheckResult r = mv_surjectivity(f, 0, s.index("A+B"), s.index("C"));
  EXPECT_FALSE(r.holds);
  EXPECT_TRUE(r.witness.has_value());
  EXPECT_TRUE(mv_surjectivity(f, 0, s.index("A"), s.index("B")).holds);
  const DescentVerdict v = descent_check(f);
  EXPECT_FALSE(v.holds);
  EXPECT_EQ(v.hypothesis, "Mayer-Vietoris surjectivity");
  EXPECT_EQ(v.cover, std::optional<std::size_t>(1));
}

TEST(MayerVietoris, FunctionSheafIsOnto) {
  const SubsetSite c = circle_site();
  const Presheaf f = function_sheaf(c, 2);
  const Site& s = *c.site;
  EXPECT_TRUE(mv_surjectivity(f, 0, s.index("A+B"), s.index("C")).holds);
  EXPECT_TRUE(descent_check(f).holds);
}

TEST(QuasiIso, IdentityOnConstants) {
  const SubsetSite c = interval_site();
  const QuasiIsoReport r = kernel_quasi_iso(locally_constant(c, path(4)), c.site->covers[0]);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.source_ranks, std::vector<std::size_t>{1});
  EXPECT_EQ(r.kernel_ranks, std::vector<std::size_t>{1});
}

TEST(QuasiIso, FlabbyComplexes) {
  const SubsetSite c = interval_site();
  testgen::Gen g(5);
  for (int t = 0; t < 10; ++t) {
    std::vector<Complex> pts;
    for (int p = 0; p < 4; ++p) pts.push_back(random_complex(g, 3));
    const Presheaf f = function_sheaf(c, pts);
    ASSERT_TRUE(validate(f).ok());
    ASSERT_TRUE(check_flabby(f).holds);
    EXPECT_TRUE(kernel_quasi_iso(f, c.site->covers[0]).holds);
  }
}

TEST(QuasiIso, TwistedGluingFails) {
  const Twisted t = twisted();
  const QuasiIsoReport r = kernel_quasi_iso(*t.f, t.site->covers[0]);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.source_ranks, std::vector<std::size_t>{1});
  EXPECT_EQ(r.kernel_ranks, std::vector<std::size_t>{0});
  EXPECT_TRUE(mv_surjectivity(*t.f, 0, t.u, t.v).holds);
  const DescentVerdict v = descent_check(*t.f);
  EXPECT_FALSE(v.holds);
  EXPECT_EQ(v.hypothesis, "sheaf condition");
  EXPECT_EQ(v.degree, std::optional<std::size_t>(0));
}

TEST(Cech, CircleAndInterval) {
  const SubsetSite c = circle_site();
  EXPECT_EQ(cech_cohomology(locally_constant(c, cycle(6)), c.site->covers[0]), (std::vector<std::size_t>{1, 1}));
  const SubsetSite i = interval_site();
  EXPECT_EQ(cech_cohomology(locally_constant(i, path(4)), i.site->covers[0]), (std::vector<std::size_t>{1, 0}));
  Presheaf zero(*i.site, std::vector<Complex>(i.site->size(), Complex::concentrated(0)));
  for (std::size_t a = 0; a < i.sets.size(); ++a)
    for (std::size_t b = 0; b < i.sets.size(); ++b)
      if (a != b && includes(i.sets[a], i.sets[b])) zero.set_restriction(a, b, {Matrix(0, 0)});
  EXPECT_EQ(cech_cohomology(zero, i.site->covers[0]), (std::vector<std::size_t>{0, 0}));
}

TEST(Cech, FunctionSheafIsAcyclic) {
  const SubsetSite c = circle_site();
  EXPECT_EQ(cech_cohomology(function_sheaf(c, 1), c.site->covers[0]), (std::vector<std::size_t>{6, 0}));
}

TEST(Flabby, FunctionSheafAndConstants) {
  const SubsetSite c = circle_site();
  EXPECT_TRUE(check_flabby(function_sheaf(c, 1)).holds);
  const CheckResult r = check_flabby(locally_constant(c, cycle(6)));
  EXPECT_FALSE(r.holds);
  EXPECT_TRUE(r.witness.has_value());
}

TEST(Supple, SplitsAndTwist) {
  const SubsetSite d = discrete_site(3);
  const Presheaf f = function_sheaf(d, 1);
  std::vector<SuppleTriple> all;
  for (std::size_t u = 0; u < d.sets.size(); ++u)
    for (std::size_t a = 0; a < d.sets.size(); ++a)
      for (std::size_t b = 0; b < d.sets.size(); ++b)
        if (includes(d.sets[u], d.sets[a]) && includes(d.sets[u], d.sets[b])) all.push_back({u, a, b});
  EXPECT_TRUE(check_supple(f, all).holds);

  const Twisted t = twisted();
  EXPECT_TRUE(check_supple(*t.f, {{t.uv, t.w1, t.w2}}).holds);
  // Every section over U vanishes on W1∧W2 = ∅, but none vanishes on W1 or W2.
  const CheckResult r = check_supple(*t.f, {{t.u, t.w1, t.w2}});
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(*r.witness, Vector{1});
  const SubsetSite c = circle_site();
  const Site& s = *c.site;
  const Presheaf lc = locally_constant(c, cycle(6));
  const CheckResult bad = check_supple(lc, {{s.index("M"), s.index("A"), s.index("BC")}});
  EXPECT_FALSE(bad.holds);
  ASSERT_TRUE(bad.witness.has_value());
  EXPECT_THROW(check_supple(lc, {{s.index("A"), s.index("B"), s.index("AB")}}), Error);
}

TEST(Fine, PartitionOfFunctions) {
  const SubsetSite d = discrete_site(3);
  const Presheaf f = function_sheaf(d, 1);
  const std::size_t m = d.open({0, 1, 2}), u = d.open({0, 1}), v = d.open({1, 2});
  const SiteCover cover{m, {u, v}};
  PartitionEndomorphisms p;
  for (const auto& set : d.sets) {
    std::vector<Rational> on_u;
    for (auto q : set) on_u.push_back(q < 2 ? 1 : 0);
    std::vector<Rational> on_v;
    for (const auto& x : on_u) on_v.push_back(1 - x);
    p.p_u.push_back({diag(on_u)});
    p.p_v.push_back({diag(on_v)});
  }
  const FineReport ok = check_fine_witness(f, p, cover, d.open({2}), d.open({0}));
  EXPECT_TRUE(ok.holds()) << ok.detail;
  EXPECT_TRUE(descent_check(f).holds);

  // Vanishing opens that do not complete the cover.
  EXPECT_EQ(check_fine_witness(f, p, cover, d.open({}), d.open({0})).failure, FineFailure::Precondition);

  PartitionEndomorphisms wrong = p;
  wrong.p_v[m][0](0, 0) = 1;
  EXPECT_EQ(check_fine_witness(f, wrong, cover, d.open({2}), d.open({0})).failure, FineFailure::Sum);

  // Planted non-natural pair: a swap on M only.
  PartitionEndomorphisms twist = p;
  twist.p_u[m][0] = Matrix::from_rows({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}, 3);
  twist.p_v[m][0] = Matrix::identity(3) - twist.p_u[m][0];
  EXPECT_EQ(check_fine_witness(f, twist, cover, d.open({2}), d.open({0})).failure, FineFailure::Naturality);

  EXPECT_EQ(check_fine_witness(f, p, cover, d.open({2}), d.open({1, 2})).failure, FineFailure::Precondition);
}

TEST(Fine, TrivialAndVanishing) {
  // One point: p_U = identity, p_V = 0 with V' = M.
  const SubsetSite d = discrete_site(1);
  const Presheaf f = function_sheaf(d, 2);
  const std::size_t m = d.open({0}), e = d.open({});
  PartitionEndomorphisms p;
  for (std::size_t w = 0; w < d.sets.size(); ++w) {
    const std::size_t n = f.dim(w, 0);
    p.p_u.push_back({Matrix::identity(n)});
    p.p_v.push_back({Matrix(n, n)});
  }
  EXPECT_TRUE(check_fine_witness(f, p, {m, {m, e}}, e, m).holds());
  // Swapping the vanishing opens asks p_U to vanish on M.
  EXPECT_EQ(check_fine_witness(f, p, {m, {m, m}}, m, m).failure, FineFailure::Vanishing);
}

TEST(Fine, ChainMapFailure) {
  const SubsetSite d = discrete_site(1);
  Complex one;
  one.dims = {1, 1};
  one.d = {Matrix::from_rows({{1}}, 1)};
  const Presheaf f = function_sheaf(d, {one});
  const std::size_t m = d.open({0}), e = d.open({});
  PartitionEndomorphisms p;
  p.p_u.resize(d.sets.size());
  p.p_v.resize(d.sets.size());
  for (std::size_t w = 0; w < d.sets.size(); ++w)
    for (std::size_t n = 0; n < 2; ++n) {
      const std::size_t k = f.dim(w, n);
      p.p_u[w].push_back(Matrix::identity(k));
      p.p_v[w].push_back(Matrix(k, k));
    }
  // Identity in degree 0, zero in degree 1 on M.
  p.p_u[m][1] = Matrix(1, 1);
  p.p_v[m][1] = Matrix::identity(1);
  EXPECT_EQ(check_fine_witness(f, p, {m, {m, e}}, e, m).failure, FineFailure::ChainMap);
}

// Seeded suites: implications between the checks and a rank cross-check.
TEST(Implications, FlabbyImpliesMayerVietoris) {
  int premises = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    testgen::Gen g(1000 + seed);
    const Instance in = random_instance(g);
    ASSERT_TRUE(validate(*in.f).ok()) << in.kind << " seed " << seed;
    if (!check_flabby(*in.f).holds) continue;
    ++premises;
    const Site& s = *in.model.site;
    for (std::size_t u = 0; u < s.size(); ++u)
      for (std::size_t v = 0; v < s.size(); ++v)
        for (std::size_t n = 0; n < in.f->degrees(); ++n)
          EXPECT_TRUE(mv_surjectivity(*in.f, n, u, v).holds) << in.kind << " seed " << seed;
  }
  EXPECT_GE(premises, 10);
}

TEST(Implications, SheafImpliesQuasiIso) {
  int premises = 0, refuted = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    testgen::Gen g(2000 + seed);
    const Instance in = random_instance(g);
    const SiteCover& cover = in.model.site->covers[0];
    bool sheaf = true;
    for (std::size_t n = 0; n < in.f->degrees(); ++n) sheaf = sheaf && sheaf_check(*in.f, n, cover).holds;
    bool mv = true;
    for (std::size_t n = 0; n < in.f->degrees(); ++n) mv = mv && mv_surjectivity(*in.f, n, cover.members[0], cover.members[1]).holds;
    const QuasiIsoReport q = kernel_quasi_iso(*in.f, cover);
    if (sheaf && mv) {
      ++premises;
      EXPECT_TRUE(q.holds) << in.kind << " seed " << seed;
    }
    if (!sheaf && in.kind == "ghost") {
      ++refuted;
      EXPECT_FALSE(q.holds) << "seed " << seed;
    }
  }
  EXPECT_GE(premises, 10);
  EXPECT_GE(refuted, 5);
}

TEST(Implications, RanksMatchOracle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    testgen::Gen g(3000 + seed);
    const Instance in = random_instance(g);
    const Site& s = *in.model.site;
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = 0; b < s.size(); ++b) {
        if (!s.leq(b, a)) continue;
        for (std::size_t n = 0; n < in.f->degrees(); ++n) {
          const Matrix r = in.f->restriction(a, b, n);
          EXPECT_EQ(rank(r), oracle_rank(r));
        }
      }
    const SiteCover& cover = s.covers[0];
    const std::size_t m = s.meet_of(cover.members);
    for (std::size_t n = 0; n < in.f->degrees(); ++n) {
      const Matrix d = hstack({in.f->restriction(cover.members[0], m, n), scaled(in.f->restriction(cover.members[1], m, n), -1)},
                              in.f->dim(m, n));
      EXPECT_EQ(rank(d), oracle_rank(d));
      EXPECT_EQ(mv_surjectivity(*in.f, n, cover.members[0], cover.members[1]).holds, oracle_rank(d) == in.f->dim(m, n));
    }
  }
}

TEST(Implications, SheafGivesCechZero) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    testgen::Gen g(4000 + seed);
    const Instance in = random_instance(g);
    const SiteCover& cover = in.model.site->covers[0];
    const auto h = cech_cohomology(*in.f, cover);
    if (sheaf_check(*in.f, 0, cover).holds) EXPECT_EQ(h[0], in.f->dim(cover.top, 0)) << in.kind << " seed " << seed;
  }
}

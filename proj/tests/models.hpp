#pragma once

#include <algorithm>
#include <memory>
#include <numeric>

#include "coverforge/descent.hpp"
#include "gen.hpp"

namespace models {

using namespace coverforge;

using Subset = std::vector<std::size_t>;

// Opens are named subsets of {0..points-1} ordered by inclusion.
struct SubsetSite {
  std::size_t points = 0;
  std::vector<Subset> sets;
  std::unique_ptr<Site> site;

  std::size_t open(const Subset& s) const {
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (sets[i] == s) return i;
    throw Error(ErrorKind::Malformed, "open not in site");
  }
};

inline bool includes(const Subset& big, const Subset& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

inline SubsetSite subset_site(std::size_t points, std::vector<std::pair<std::string, Subset>> opens) {
  SubsetSite out;
  out.points = points;
  std::vector<std::string> names;
  std::optional<std::size_t> empty;
  for (auto& [name, set] : opens) {
    std::sort(set.begin(), set.end());
    if (set.empty()) empty = out.sets.size();
    names.push_back(name);
    out.sets.push_back(set);
  }
  std::vector<std::pair<std::size_t, std::size_t>> below;
  for (std::size_t a = 0; a < out.sets.size(); ++a)
    for (std::size_t b = 0; b < out.sets.size(); ++b)
      if (a != b && includes(out.sets[b], out.sets[a])) below.emplace_back(a, b);
  out.site = std::make_unique<Site>(names, below, empty);
  return out;
}

// Position of point p inside the sorted subset.
inline std::size_t slot(const Subset& s, std::size_t p) {
  return static_cast<std::size_t>(std::lower_bound(s.begin(), s.end(), p) - s.begin());
}

// Sections over W are tuples of sections of a complex at each point of W;
// restriction is projection.
inline Presheaf function_sheaf(const SubsetSite& m, const std::vector<Complex>& at_point) {
  const std::size_t deg = at_point.empty() ? 1 : at_point[0].degrees();
  std::vector<Complex> sections;
  for (const auto& set : m.sets) {
    Complex c;
    c.dims.assign(deg, 0);
    for (auto p : set)
      for (std::size_t n = 0; n < deg; ++n) c.dims[n] += at_point[p].dims[n];
    for (std::size_t n = 0; n + 1 < deg; ++n) {
      Matrix d(c.dims[n + 1], c.dims[n]);
      std::size_t r = 0, col = 0;
      for (auto p : set) {
        const Matrix& dp = at_point[p].d[n];
        for (std::size_t i = 0; i < dp.rows(); ++i)
          for (std::size_t j = 0; j < dp.cols(); ++j) d(r + i, col + j) = dp(i, j);
        r += dp.rows();
        col += dp.cols();
      }
      c.d.push_back(d);
    }
    sections.push_back(c);
  }
  Presheaf f(*m.site, sections);
  for (std::size_t a = 0; a < m.sets.size(); ++a)
    for (std::size_t b = 0; b < m.sets.size(); ++b) {
      if (a == b || !includes(m.sets[a], m.sets[b])) continue;
      std::vector<Matrix> per;
      for (std::size_t n = 0; n < deg; ++n) {
        Matrix r(f.dim(b, n), f.dim(a, n));
        std::size_t row = 0;
        for (auto p : m.sets[b]) {
          std::size_t col = 0;
          for (auto q : m.sets[a]) {
            if (q == p) break;
            col += at_point[q].dims[n];
          }
          for (std::size_t i = 0; i < at_point[p].dims[n]; ++i) r(row + i, col + i) = 1;
          row += at_point[p].dims[n];
        }
        per.push_back(r);
      }
      f.set_restriction(a, b, per);
    }
  return f;
}

inline Presheaf function_sheaf(const SubsetSite& m, std::size_t per_point = 1) {
  return function_sheaf(m, std::vector<Complex>(m.points, Complex::concentrated(per_point)));
}

// Connected components of `set` in the graph.
inline std::vector<Subset> components(const Subset& set, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<Subset> out;
  std::vector<bool> seen(set.size(), false);
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (seen[i]) continue;
    Subset comp{set[i]};
    seen[i] = true;
    for (std::size_t k = 0; k < comp.size(); ++k)
      for (const auto& [a, b] : edges) {
        const std::size_t other = a == comp[k] ? b : b == comp[k] ? a : SIZE_MAX;
        if (other == SIZE_MAX) continue;
        auto it = std::find(set.begin(), set.end(), other);
        if (it == set.end() || seen[static_cast<std::size_t>(it - set.begin())]) continue;
        seen[static_cast<std::size_t>(it - set.begin())] = true;
        comp.push_back(other);
      }
    std::sort(comp.begin(), comp.end());
    out.push_back(comp);
  }
  return out;
}

// Locally constant functions: one copy of ℚ per connected component.
inline Presheaf locally_constant(const SubsetSite& m, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<Subset>> comps;
  std::vector<Complex> sections;
  for (const auto& set : m.sets) {
    comps.push_back(components(set, edges));
    sections.push_back(Complex::concentrated(comps.back().size()));
  }
  Presheaf f(*m.site, sections);
  for (std::size_t a = 0; a < m.sets.size(); ++a)
    for (std::size_t b = 0; b < m.sets.size(); ++b) {
      if (a == b || !includes(m.sets[a], m.sets[b])) continue;
      Matrix r(comps[b].size(), comps[a].size());
      for (std::size_t i = 0; i < comps[b].size(); ++i)
        for (std::size_t j = 0; j < comps[a].size(); ++j)
          if (includes(comps[a][j], comps[b][i])) r(i, j) = 1;
      f.set_restriction(a, b, {r});
    }
  return f;
}

inline std::vector<std::pair<std::size_t, std::size_t>> cycle(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return e;
}

inline std::vector<std::pair<std::size_t, std::size_t>> path(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

// Six points on a cycle; arcs A, B, C meet pairwise in single points.
inline SubsetSite circle_site() {
  SubsetSite m = subset_site(6, {{"M", {0, 1, 2, 3, 4, 5}},
                                 {"A", {0, 1, 2}},
                                 {"B", {2, 3, 4}},
                                 {"C", {4, 5, 0}},
                                 {"AB", {2}},
                                 {"BC", {4}},
                                 {"CA", {0}},
                                 {"A+B", {0, 1, 2, 3, 4}},
                                 {"(A+B)C", {0, 4}},
                                 {"empty", {}}});
  m.site->covers = {{m.open({0, 1, 2, 3, 4, 5}), {m.open({0, 1, 2}), m.open({2, 3, 4}), m.open({0, 4, 5})}},
                    {m.open({0, 1, 2, 3, 4, 5}), {m.open({0, 1, 2, 3, 4}), m.open({0, 4, 5})}}};
  return m;
}

inline SubsetSite interval_site() {
  SubsetSite m = subset_site(4, {{"M", {0, 1, 2, 3}}, {"A", {0, 1, 2}}, {"B", {1, 2, 3}}, {"AB", {1, 2}}, {"empty", {}}});
  m.site->covers = {{m.open({0, 1, 2, 3}), {m.open({0, 1, 2}), m.open({1, 2, 3})}}};
  return m;
}

// Every subset of {0..n-1}.
inline SubsetSite discrete_site(std::size_t n) {
  std::vector<std::pair<std::string, Subset>> opens;
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    Subset s;
    std::string name = "{";
    for (std::size_t p = 0; p < n; ++p)
      if (mask >> p & 1) {
        name += (s.empty() ? "" : ",") + std::to_string(p);
        s.push_back(p);
      }
    opens.emplace_back(name + "}", s);
  }
  return subset_site(n, opens);
}

// A two-element cover U, V of M whose meet has two pieces W1, W2, glued with a
// sign flip; F(M) = ℚ restricts to zero.
struct Twisted {
  std::unique_ptr<Site> site;
  std::unique_ptr<Presheaf> f;
  std::size_t m, u, v, uv, w1, w2, empty;
};

inline Twisted twisted() {
  Twisted t;
  t.site = std::make_unique<Site>(std::vector<std::string>{"M", "U", "V", "UV", "W1", "W2", "empty"},
                                  std::vector<std::pair<std::size_t, std::size_t>>{{1, 0}, {2, 0}, {3, 1}, {3, 2}, {4, 3}, {5, 3}, {6, 4}, {6, 5}},
                                  6);
  t.m = 0, t.u = 1, t.v = 2, t.uv = 3, t.w1 = 4, t.w2 = 5, t.empty = 6;
  t.site->covers = {{t.m, {t.u, t.v}}};
  t.f = std::make_unique<Presheaf>(*t.site, std::vector<Complex>{Complex::concentrated(1), Complex::concentrated(1), Complex::concentrated(1),
                                                                 Complex::concentrated(2), Complex::concentrated(1), Complex::concentrated(1),
                                                                 Complex::concentrated(0)});
  t.f->set_restriction(t.m, t.u, {Matrix(1, 1)});
  t.f->set_restriction(t.m, t.v, {Matrix(1, 1)});
  t.f->set_restriction(t.u, t.uv, {Matrix::from_rows({{1}, {1}}, 1)});
  t.f->set_restriction(t.v, t.uv, {Matrix::from_rows({{1}, {-1}}, 1)});
  t.f->set_restriction(t.uv, t.w1, {Matrix::from_rows({{1, 0}}, 2)});
  t.f->set_restriction(t.uv, t.w2, {Matrix::from_rows({{0, 1}}, 2)});
  return t;
}

// Two-term complex ℚ^a → ℚ^b with a small random integer differential.
inline Complex random_complex(testgen::Gen& g, std::size_t degrees) {
  Complex c;
  for (std::size_t n = 0; n < degrees; ++n) c.dims.push_back(static_cast<std::size_t>(g.integer(0, 2)));
  for (std::size_t n = 0; n + 1 < degrees; ++n) {
    Matrix d(c.dims[n + 1], c.dims[n]);
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j) d(i, j) = g.integer(-2, 2);
    if (n > 0) {
      // Keep d∘d = 0: precompose with the kernel of the new map.
      const Matrix k = kernel(d);
      Matrix pick(k.cols(), c.dims[n - 1]);
      for (std::size_t i = 0; i < pick.rows(); ++i)
        for (std::size_t j = 0; j < pick.cols(); ++j) pick(i, j) = g.integer(-1, 1);
      c.d[n - 1] = k * pick;
    }
    c.d.push_back(d);
  }
  return c;
}

// Random site on 3-4 points: M, the empty open, a cover {U, V} of M and a few
// extra subsets, closed under intersection.
inline SubsetSite random_site(testgen::Gen& g) {
  const std::size_t n = static_cast<std::size_t>(g.integer(3, 4));
  Subset all(n);
  std::iota(all.begin(), all.end(), 0);
  Subset u, v;
  for (std::size_t p = 0; p < n; ++p) {
    const long r = g.integer(0, 2);
    if (r != 1) u.push_back(p);
    if (r != 0) v.push_back(p);
  }
  std::vector<Subset> sets{all, u, v, {}};
  for (int k = 0; k < 2; ++k) {
    Subset s;
    for (std::size_t p = 0; p < n; ++p)
      if (g.coin()) s.push_back(p);
    sets.push_back(s);
  }
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t a = 0; a < sets.size() && !grew; ++a)
      for (std::size_t b = a + 1; b < sets.size() && !grew; ++b) {
        Subset x;
        std::set_intersection(sets[a].begin(), sets[a].end(), sets[b].begin(), sets[b].end(), std::back_inserter(x));
        if (std::find(sets.begin(), sets.end(), x) == sets.end()) sets.push_back(x), grew = true;
      }
  }
  std::vector<std::pair<std::string, Subset>> opens;
  std::vector<Subset> seen;
  for (const auto& s : sets) {
    if (std::find(seen.begin(), seen.end(), s) != seen.end()) continue;
    seen.push_back(s);
    std::string name = "{";
    for (std::size_t i = 0; i < s.size(); ++i) name += (i ? "," : "") + std::to_string(s[i]);
    opens.emplace_back(name + "}", s);
  }
  SubsetSite m = subset_site(n, opens);
  m.site->covers = {{m.open(all), {m.open(u), m.open(v)}}};
  return m;
}

inline std::size_t total_dim(const Presheaf& f) {
  std::size_t t = 0;
  for (std::size_t w = 0; w < f.site().size(); ++w)
    for (std::size_t n = 0; n < f.degrees(); ++n) t += f.dim(w, n);
  return t;
}

// Enlarges F(M) by a summand that restricts to zero (breaks injectivity).
inline Presheaf with_ghost(const SubsetSite& m, const Presheaf& f, std::size_t top) {
  std::vector<Complex> sections;
  for (std::size_t w = 0; w < m.sets.size(); ++w) sections.push_back(f.at(w));
  Complex& c = sections[top];
  c.dims[0] += 1;
  if (!c.d.empty()) c.d[0] = hstack({c.d[0], Matrix(c.dims[1], 1)}, c.dims[1]);
  Presheaf g(*m.site, sections);
  for (const auto& [edge, mats] : f.given()) {
    std::vector<Matrix> per = mats;
    if (edge.first == top) per[0] = hstack({per[0], Matrix(per[0].rows(), 1)}, per[0].rows());
    g.set_restriction(edge.first, edge.second, per);
  }
  return g;
}

struct Instance {
  SubsetSite model;
  std::unique_ptr<Presheaf> f;
  std::string kind;
};

// Seeded presheaves with total dimension at most 40.
inline Instance random_instance(testgen::Gen& g) {
  while (true) {
    Instance in;
    in.model = random_site(g);
    const long kind = g.integer(0, 2);
    const std::size_t deg = static_cast<std::size_t>(g.integer(1, 2));
    std::vector<Complex> pts;
    for (std::size_t p = 0; p < in.model.points; ++p) pts.push_back(random_complex(g, deg));
    if (kind == 0) {
      in.kind = "function";
      in.f = std::make_unique<Presheaf>(function_sheaf(in.model, pts));
    } else if (kind == 1) {
      in.kind = "locally-constant";
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      for (std::size_t a = 0; a < in.model.points; ++a)
        for (std::size_t b = a + 1; b < in.model.points; ++b)
          if (g.coin()) edges.emplace_back(a, b);
      in.f = std::make_unique<Presheaf>(locally_constant(in.model, edges));
    } else {
      in.kind = "ghost";
      const Presheaf base = function_sheaf(in.model, pts);
      in.f = std::make_unique<Presheaf>(with_ghost(in.model, base, in.model.site->covers[0].top));
    }
    if (total_dim(*in.f) <= 40) return in;
  }
}

}  // namespace models

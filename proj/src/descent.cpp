#include "coverforge/descent.hpp"

#include <deque>

namespace coverforge {

Site::Site(std::vector<std::string> names, const std::vector<std::pair<std::size_t, std::size_t>>& below,
           std::optional<std::size_t> empty)
    : names_(std::move(names)), gens_(below), empty_(empty) {
  const std::size_t n = names_.size();
  le_.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) le_[i][i] = true;
  for (const auto& [a, b] : below) {
    if (a >= n || b >= n) throw Error(ErrorKind::Malformed, "order relation names an unknown open");
    le_[a][b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (le_[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (le_[k][j]) le_[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (le_[i][j] && le_[j][i]) throw Error(ErrorKind::Malformed, "order has a cycle through " + names_[i] + " and " + names_[j]);
  if (empty_) {
    if (*empty_ >= n) throw Error(ErrorKind::Malformed, "empty open out of range");
    for (std::size_t i = 0; i < n; ++i)
      if (!le_[*empty_][i]) throw Error(ErrorKind::Malformed, "empty open is not below " + names_[i]);
  }
}

std::size_t Site::index(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw Error(ErrorKind::Malformed, "unknown open " + name);
}

std::optional<std::size_t> Site::meet(std::size_t a, std::size_t b) const {
  for (std::size_t c = 0; c < size(); ++c) {
    if (!le_[c][a] || !le_[c][b]) continue;
    bool greatest = true;
    for (std::size_t d = 0; d < size() && greatest; ++d)
      if (le_[d][a] && le_[d][b] && !le_[d][c]) greatest = false;
    if (greatest) return c;
  }
  return std::nullopt;
}

std::optional<std::size_t> Site::join(std::size_t a, std::size_t b) const {
  for (std::size_t c = 0; c < size(); ++c) {
    if (!le_[a][c] || !le_[b][c]) continue;
    bool least = true;
    for (std::size_t d = 0; d < size() && least; ++d)
      if (le_[a][d] && le_[b][d] && !le_[c][d]) least = false;
    if (least) return c;
  }
  return std::nullopt;
}

std::size_t Site::meet_of(const std::vector<std::size_t>& opens) const {
  if (opens.empty()) throw Error(ErrorKind::InvalidArgument, "meet of no opens");
  std::size_t m = opens[0];
  for (std::size_t i = 1; i < opens.size(); ++i) {
    auto next = meet(m, opens[i]);
    if (!next) throw Error(ErrorKind::MissingMeet, "no meet of " + names_[m] + " and " + names_[opens[i]]);
    m = *next;
  }
  return m;
}

Complex Complex::concentrated(std::size_t dim0, std::size_t degrees) {
  Complex c;
  c.dims.assign(degrees, 0);
  if (degrees > 0) c.dims[0] = dim0;
  for (std::size_t n = 0; n + 1 < degrees; ++n) c.d.emplace_back(c.dims[n + 1], c.dims[n]);
  return c;
}

Matrix Complex::differential(std::size_t n) const {
  if (n + 1 < dims.size()) return d.at(n);
  return Matrix(0, n < dims.size() ? dims[n] : 0);
}

Presheaf::Presheaf(const Site& site, std::vector<Complex> sections) : site_(&site), sections_(std::move(sections)) {
  if (sections_.size() != site.size()) throw Error(ErrorKind::Malformed, "one complex per open is required");
  for (const auto& c : sections_) degrees_ = std::max(degrees_, c.dims.size());
  for (std::size_t w = 0; w < sections_.size(); ++w) {
    Complex& c = sections_[w];
    if (c.d.size() + 1 != c.dims.size() && !(c.dims.empty() && c.d.empty()))
      throw Error(ErrorKind::Malformed, "complex on " + site.name(w) + " has the wrong number of differentials");
    for (std::size_t n = 0; n < c.d.size(); ++n)
      if (c.d[n].rows() != c.dims[n + 1] || c.d[n].cols() != c.dims[n])
        throw Error(ErrorKind::Malformed, "differential shape on " + site.name(w) + " in degree " + std::to_string(n));
    while (c.dims.size() < degrees_) {
      if (!c.dims.empty()) c.d.emplace_back(0, c.dims.back());
      c.dims.push_back(0);
    }
  }
}

void Presheaf::set_restriction(std::size_t from, std::size_t to, std::vector<Matrix> per_degree) {
  if (from >= site_->size() || to >= site_->size()) throw Error(ErrorKind::Malformed, "restriction names an unknown open");
  if (per_degree.size() != degrees_)
    throw Error(ErrorKind::Malformed, "restriction " + site_->name(from) + " -> " + site_->name(to) + " needs one matrix per degree");
  for (std::size_t n = 0; n < degrees_; ++n)
    if (per_degree[n].rows() != dim(to, n) || per_degree[n].cols() != dim(from, n))
      throw Error(ErrorKind::Malformed, "restriction " + site_->name(from) + " -> " + site_->name(to) + " has the wrong shape in degree " +
                                            std::to_string(n));
  given_[{from, to}] = std::move(per_degree);
}

std::optional<std::vector<std::size_t>> Presheaf::path(std::size_t from, std::size_t to) const {
  std::vector<long> prev(site_->size(), -1);
  std::deque<std::size_t> queue{from};
  prev[from] = static_cast<long>(from);
  while (!queue.empty()) {
    const std::size_t a = queue.front();
    queue.pop_front();
    if (a == to) break;
    for (const auto& [edge, mats] : given_) {
      if (edge.first != a || prev[edge.second] >= 0) continue;
      prev[edge.second] = static_cast<long>(a);
      queue.push_back(edge.second);
    }
  }
  if (prev[to] < 0) return std::nullopt;
  std::vector<std::size_t> out{to};
  while (out.back() != from) out.push_back(static_cast<std::size_t>(prev[out.back()]));
  return std::vector<std::size_t>(out.rbegin(), out.rend());
}

Matrix Presheaf::restriction(std::size_t from, std::size_t to, std::size_t n) const {
  if (!site_->leq(to, from)) throw Error(ErrorKind::InvalidArgument, site_->name(to) + " is not below " + site_->name(from));
  if (from == to) return Matrix::identity(dim(from, n));
  if (auto it = given_.find({from, to}); it != given_.end()) return it->second[n];
  if (dim(from, n) == 0 || dim(to, n) == 0) return Matrix(dim(to, n), dim(from, n));
  const auto p = path(from, to);
  if (!p) throw Error(ErrorKind::Malformed, "no restriction from " + site_->name(from) + " to " + site_->name(to));
  Matrix m = Matrix::identity(dim(from, n));
  for (std::size_t k = 0; k + 1 < p->size(); ++k) m = given_.at({(*p)[k], (*p)[k + 1]})[n] * m;
  return m;
}

ValidationReport validate(const Presheaf& f) {
  ValidationReport rep;
  const Site& s = f.site();
  for (std::size_t w = 0; w < s.size(); ++w) {
    const Complex& c = f.at(w);
    for (std::size_t n = 0; n + 2 < c.dims.size(); ++n)
      if (!(c.d[n + 1] * c.d[n]).is_zero()) rep.violations.push_back({"d∘d is not zero", s.name(w), n});
  }
  for (const auto& [edge, mats] : f.given()) {
    const auto [from, to] = edge;
    const std::string where = s.name(from) + " -> " + s.name(to);
    if (!s.leq(to, from)) {
      rep.violations.push_back({"restriction against the order", where, std::nullopt});
      continue;
    }
    for (std::size_t n = 0; n < f.degrees(); ++n) {
      if (from == to && !(mats[n] == Matrix::identity(f.dim(from, n))))
        rep.violations.push_back({"identity relation is not the identity", where, n});
      if (n + 1 < f.degrees() && !(mats[n + 1] * f.at(from).differential(n) == f.at(to).differential(n) * mats[n]))
        rep.violations.push_back({"restriction is not a chain map", where, n});
    }
  }
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (a == b || !s.leq(b, a)) continue;
      bool resolvable = true;
      try {
        for (std::size_t n = 0; n < f.degrees(); ++n) (void)f.restriction(a, b, n);
      } catch (const Error&) {
        resolvable = false;
        rep.violations.push_back({"missing restriction", s.name(a) + " -> " + s.name(b), std::nullopt});
      }
      if (!resolvable) continue;
      for (std::size_t c = 0; c < s.size(); ++c) {
        if (c == a || c == b || !s.leq(c, b)) continue;
        for (std::size_t n = 0; n < f.degrees(); ++n) {
          Matrix direct, composite;
          try {
            direct = f.restriction(a, c, n);
            composite = f.restriction(b, c, n) * f.restriction(a, b, n);
          } catch (const Error&) {
            break;
          }
          if (!(direct == composite))
            rep.violations.push_back({"restrictions do not compose", s.name(a) + " -> " + s.name(b) + " -> " + s.name(c), n});
        }
      }
    }
  return rep;
}

namespace {

std::size_t meet_or_throw(const Site& s, std::size_t a, std::size_t b) {
  auto m = s.meet(a, b);
  if (!m) throw Error(ErrorKind::MissingMeet, "no meet of " + s.name(a) + " and " + s.name(b));
  return *m;
}

Vector unit(std::size_t n, std::size_t i) {
  Vector v(n);
  v[i] = 1;
  return v;
}

std::size_t nullity(const Matrix& m) { return m.cols() - rank(m); }

}  // namespace

CheckResult sheaf_check(const Presheaf& f, std::size_t n, const SiteCover& cover) {
  const Site& s = f.site();
  const std::size_t top = cover.top, k = cover.members.size();
  std::vector<Matrix> to_members;
  std::vector<std::size_t> offsets{0};
  for (auto u : cover.members) {
    if (!s.leq(u, top)) throw Error(ErrorKind::Malformed, s.name(u) + " is not below " + s.name(top));
    to_members.push_back(f.restriction(top, u, n));
    offsets.push_back(offsets.back() + f.dim(u, n));
  }
  const std::size_t total = offsets.back();
  const Matrix a = vstack(to_members, f.dim(top, n));

  std::vector<Matrix> rows;
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t l = j + 1; l < k; ++l) {
      const std::size_t m = meet_or_throw(s, cover.members[j], cover.members[l]);
      Matrix block(f.dim(m, n), total);
      const Matrix rj = f.restriction(cover.members[j], m, n), rl = f.restriction(cover.members[l], m, n);
      for (std::size_t r = 0; r < block.rows(); ++r) {
        for (std::size_t c = 0; c < rj.cols(); ++c) block(r, offsets[j] + c) += rj(r, c);
        for (std::size_t c = 0; c < rl.cols(); ++c) block(r, offsets[l] + c) -= rl(r, c);
      }
      rows.push_back(block);
    }
  const Matrix b = vstack(rows, total);

  CheckResult out;
  const std::size_t ra = rank(a);
  if (ra < f.dim(top, n)) {
    out.holds = false;
    out.detail = "sections over " + s.name(top) + " are not determined by their restrictions";
    out.witness = kernel(a).column(0);
    return out;
  }
  const Matrix eq = kernel(b);
  if (eq.cols() > ra) {
    out.holds = false;
    out.detail = "a compatible family does not glue";
    out.witness = eq.column(*column_outside(a, eq));
  }
  return out;
}

CheckResult mv_surjectivity(const Presheaf& f, std::size_t n, std::size_t u, std::size_t v) {
  const Site& s = f.site();
  const std::size_t m = meet_or_throw(s, u, v);
  const Matrix d = hstack({f.restriction(u, m, n), scaled(f.restriction(v, m, n), -1)}, f.dim(m, n));
  CheckResult out;
  if (rank(d) == f.dim(m, n)) return out;
  out.holds = false;
  out.detail = "difference of restrictions misses part of " + s.name(m);
  out.witness = unit(f.dim(m, n), *column_outside(d, Matrix::identity(f.dim(m, n))));
  return out;
}

QuasiIsoReport kernel_quasi_iso(const Presheaf& f, const SiteCover& cover) {
  if (cover.members.size() != 2) throw Error(ErrorKind::InvalidArgument, "kernel_quasi_iso needs a two-element cover");
  const Site& s = f.site();
  const std::size_t top = cover.top, u = cover.members[0], v = cover.members[1];
  const std::size_t m = meet_or_throw(s, u, v);
  const std::size_t deg = f.degrees();

  std::vector<Matrix> basis(deg + 1), dk(deg), chain(deg), da(deg);
  for (std::size_t n = 0; n < deg; ++n) {
    const Matrix d = hstack({f.restriction(u, m, n), scaled(f.restriction(v, m, n), -1)}, f.dim(m, n));
    basis[n] = kernel(d);
  }
  basis[deg] = Matrix(0, 0);
  for (std::size_t n = 0; n < deg; ++n) {
    da[n] = f.at(top).differential(n);
    const Matrix duv = direct_sum(f.at(u).differential(n), f.at(v).differential(n));
    dk[n] = n + 1 < deg ? solve_exact(basis[n + 1], duv * basis[n]) : Matrix(0, basis[n].cols());
    chain[n] = solve_exact(basis[n], vstack({f.restriction(top, u, n), f.restriction(top, v, n)}, f.dim(top, n)));
  }

  QuasiIsoReport rep;
  for (std::size_t n = 0; n < deg; ++n) {
    const std::size_t in_a = n > 0 ? rank(da[n - 1]) : 0, in_k = n > 0 ? rank(dk[n - 1]) : 0;
    const std::size_t ha = f.dim(top, n) - rank(da[n]) - in_a;
    const std::size_t hk = basis[n].cols() - rank(dk[n]) - in_k;
    // Cycles of F(M) sent to boundaries of the kernel complex.
    const Matrix z = kernel(da[n]);
    const Matrix prev = n > 0 ? dk[n - 1] : Matrix(basis[n].cols(), 0);
    const std::size_t sent = nullity(hstack({chain[n] * z, scaled(prev, -1)}, basis[n].cols())) - nullity(prev);
    const bool iso = sent == in_a && ha == hk;
    rep.source_ranks.push_back(ha);
    rep.kernel_ranks.push_back(hk);
    rep.iso.push_back(iso);
    rep.holds = rep.holds && iso;
  }
  return rep;
}

std::vector<std::size_t> cech_cohomology(const Presheaf& f, const SiteCover& cover) {
  const Site& s = f.site();
  const std::size_t k = cover.members.size();
  if (k > 20) throw Error(ErrorKind::Unsupported, "Čech complex limited to 20 members");
  // Simplices by degree as member bitmasks, with their meets.
  std::vector<std::vector<std::uint32_t>> simplices(k);
  std::map<std::uint32_t, std::size_t> meet_of;
  std::size_t top_degree = 0;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<std::size_t> opens;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) opens.push_back(cover.members[i]);
    const std::size_t m = s.meet_of(opens);
    const std::size_t p = opens.size() - 1;
    simplices[p].push_back(mask);
    meet_of[mask] = m;
    if (!s.is_empty(m)) top_degree = std::max(top_degree, p);
  }
  if (k == 0) return {0};

  auto offsets = [&](std::size_t p) {
    std::map<std::uint32_t, std::size_t> off;
    std::size_t total = 0;
    for (auto mask : simplices[p]) {
      off[mask] = total;
      total += f.dim(meet_of[mask], 0);
    }
    return std::make_pair(off, total);
  };
  std::vector<std::size_t> dims(k), ranks(k, 0);
  for (std::size_t p = 0; p < k; ++p) dims[p] = offsets(p).second;
  for (std::size_t p = 0; p + 1 < k; ++p) {
    const auto [src, src_total] = offsets(p);
    const auto [dst, dst_total] = offsets(p + 1);
    Matrix d(dst_total, src_total);
    for (auto sigma : simplices[p + 1]) {
      int sign = 1;
      for (std::size_t i = 0; i < k; ++i) {
        if (!(sigma >> i & 1)) continue;
        const std::uint32_t face = sigma & ~(1u << i);
        const Matrix r = f.restriction(meet_of[face], meet_of[sigma], 0);
        for (std::size_t a = 0; a < r.rows(); ++a)
          for (std::size_t b = 0; b < r.cols(); ++b) d(dst.at(sigma) + a, src.at(face) + b) += sign * r(a, b);
        sign = -sign;
      }
    }
    ranks[p] = rank(d);
  }
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p <= top_degree; ++p) out.push_back(dims[p] - ranks[p] - (p > 0 ? ranks[p - 1] : 0));
  return out;
}

CheckResult check_flabby(const Presheaf& f) {
  const Site& s = f.site();
  CheckResult out;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (a == b || !s.leq(b, a)) continue;
      for (std::size_t n = 0; n < f.degrees(); ++n) {
        const Matrix r = f.restriction(a, b, n);
        if (rank(r) == f.dim(b, n)) continue;
        out.holds = false;
        out.detail = "restriction " + s.name(a) + " -> " + s.name(b) + " is not onto in degree " + std::to_string(n);
        out.witness = unit(f.dim(b, n), *column_outside(r, Matrix::identity(f.dim(b, n))));
        return out;
      }
    }
  return out;
}

CheckResult check_supple(const Presheaf& f, const std::vector<SuppleTriple>& triples) {
  const Site& s = f.site();
  CheckResult out;
  for (const auto& t : triples) {
    if (t.u >= s.size() || t.v1 >= s.size() || t.v2 >= s.size() || !s.leq(t.v1, t.u) || !s.leq(t.v2, t.u))
      throw Error(ErrorKind::Malformed, "supple triple needs V1, V2 below U");
    const std::size_t m = meet_or_throw(s, t.v1, t.v2);
    for (std::size_t n = 0; n < f.degrees(); ++n) {
      const Matrix vanish = kernel(f.restriction(t.u, m, n));
      const Matrix split = hstack({kernel(f.restriction(t.u, t.v1, n)), kernel(f.restriction(t.u, t.v2, n))}, f.dim(t.u, n));
      if (auto j = column_outside(split, vanish)) {
        out.holds = false;
        out.detail = "section over " + s.name(t.u) + " vanishing on " + s.name(m) + " does not split along " + s.name(t.v1) + ", " +
                     s.name(t.v2) + " in degree " + std::to_string(n);
        out.witness = vanish.column(*j);
        return out;
      }
    }
  }
  return out;
}

const char* fine_failure_name(FineFailure f) {
  switch (f) {
    case FineFailure::None: return "none";
    case FineFailure::Precondition: return "precondition";
    case FineFailure::Sum: return "sum";
    case FineFailure::ChainMap: return "chain-map";
    case FineFailure::Naturality: return "naturality";
    case FineFailure::Vanishing: return "vanishing";
  }
  return "?";
}

FineReport check_fine_witness(const Presheaf& f, const PartitionEndomorphisms& p, const SiteCover& cover,
                              std::size_t u_vanish, std::size_t v_vanish) {
  const Site& s = f.site();
  auto fail = [](FineFailure k, std::string d) { return FineReport{k, std::move(d)}; };
  if (cover.members.size() != 2) return fail(FineFailure::Precondition, "fine witnesses need a two-element cover");
  const std::size_t top = cover.top, u = cover.members[0], v = cover.members[1];
  if (u_vanish >= s.size() || v_vanish >= s.size()) return fail(FineFailure::Precondition, "vanishing open out of range");
  if (s.join(u, u_vanish) != top || s.join(v, v_vanish) != top)
    return fail(FineFailure::Precondition, "vanishing opens do not complete the cover to " + s.name(top));
  if (p.p_u.size() != s.size() || p.p_v.size() != s.size()) return fail(FineFailure::Precondition, "one endomorphism per open is required");
  for (std::size_t w = 0; w < s.size(); ++w) {
    if (p.p_u[w].size() != f.degrees() || p.p_v[w].size() != f.degrees())
      return fail(FineFailure::Precondition, "endomorphisms on " + s.name(w) + " need one matrix per degree");
    for (std::size_t n = 0; n < f.degrees(); ++n) {
      const std::size_t d = f.dim(w, n);
      const Matrix &a = p.p_u[w][n], &b = p.p_v[w][n];
      if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d)
        return fail(FineFailure::Precondition, "endomorphism shape on " + s.name(w) + " in degree " + std::to_string(n));
      if (!(a + b == Matrix::identity(d)))
        return fail(FineFailure::Sum, "p_U + p_V is not the identity on " + s.name(w) + " in degree " + std::to_string(n));
    }
  }
  for (std::size_t w = 0; w < s.size(); ++w)
    for (std::size_t n = 0; n + 1 < f.degrees(); ++n) {
      const Matrix d = f.at(w).differential(n);
      if (!(d * p.p_u[w][n] == p.p_u[w][n + 1] * d))
        return fail(FineFailure::ChainMap, "p_U does not commute with the differential on " + s.name(w));
    }
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (a == b || !s.leq(b, a)) continue;
      for (std::size_t n = 0; n < f.degrees(); ++n) {
        const Matrix r = f.restriction(a, b, n);
        if (!(r * p.p_u[a][n] == p.p_u[b][n] * r))
          return fail(FineFailure::Naturality, "p_U is not natural along " + s.name(a) + " -> " + s.name(b));
      }
    }
  for (std::size_t n = 0; n < f.degrees(); ++n) {
    if (!p.p_u[u_vanish][n].is_zero()) return fail(FineFailure::Vanishing, "p_U does not vanish on " + s.name(u_vanish));
    if (!p.p_v[v_vanish][n].is_zero()) return fail(FineFailure::Vanishing, "p_V does not vanish on " + s.name(v_vanish));
  }
  return {};
}

DescentVerdict descent_check(const Presheaf& f) {
  const Site& s = f.site();
  DescentVerdict out;
  for (std::size_t c = 0; c < s.covers.size(); ++c) {
    const SiteCover& cover = s.covers[c];
    bool disjoint = true;
    for (std::size_t j = 0; j < cover.members.size(); ++j)
      for (std::size_t l = j + 1; l < cover.members.size(); ++l)
        disjoint = disjoint && s.is_empty(meet_or_throw(s, cover.members[j], cover.members[l]));
    for (std::size_t n = 0; n < f.degrees(); ++n) {
      const CheckResult r = sheaf_check(f, n, cover);
      if (r.holds) continue;
      return {false, disjoint ? "disjoint product" : "sheaf condition", c, n, r.detail};
    }
    if (cover.members.size() != 2) continue;
    for (std::size_t n = 0; n < f.degrees(); ++n) {
      const CheckResult r = mv_surjectivity(f, n, cover.members[0], cover.members[1]);
      if (!r.holds) return {false, "Mayer-Vietoris surjectivity", c, n, r.detail};
    }
  }
  return out;
}

}  // namespace coverforge

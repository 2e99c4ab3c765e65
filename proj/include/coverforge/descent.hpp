#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coverforge/linalg.hpp"

namespace coverforge {

struct SiteCover {
  std::size_t top;
  std::vector<std::size_t> members;
};

/// A finite poset of opens. Meets and joins are greatest lower and least upper
/// bounds in the poset; `empty` names the empty open when the site has one.
class Site {
 public:
  Site() = default;
  /// `below` lists generating relations (a, b) meaning a ≤ b.
  Site(std::vector<std::string> names, const std::vector<std::pair<std::size_t, std::size_t>>& below,
       std::optional<std::size_t> empty = std::nullopt);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::size_t index(const std::string& name) const;
  bool leq(std::size_t a, std::size_t b) const { return le_[a][b]; }
  std::optional<std::size_t> empty() const { return empty_; }
  std::optional<std::size_t> meet(std::size_t a, std::size_t b) const;
  std::optional<std::size_t> join(std::size_t a, std::size_t b) const;
  /// Meet of several opens; throws MissingMeet.
  std::size_t meet_of(const std::vector<std::size_t>& opens) const;
  bool is_empty(std::size_t a) const { return empty_ && *empty_ == a; }

  std::vector<SiteCover> covers;
  const std::vector<std::pair<std::size_t, std::size_t>>& generators() const { return gens_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> le_;
  std::vector<std::pair<std::size_t, std::size_t>> gens_;
  std::optional<std::size_t> empty_;
};

/// Cochain complex in degrees 0..dims.size()-1; d[n] maps degree n to n+1.
struct Complex {
  std::vector<std::size_t> dims;
  std::vector<Matrix> d;

  static Complex concentrated(std::size_t dim0, std::size_t degrees = 1);
  std::size_t degrees() const { return dims.size(); }
  /// d[n], or the zero map out of the top degree.
  Matrix differential(std::size_t n) const;
};

/// A presheaf of complexes on a site. Restrictions are given on some pairs
/// W' ≤ W; the others are composites along the given ones.
class Presheaf {
 public:
  Presheaf(const Site& site, std::vector<Complex> sections);

  const Site& site() const { return *site_; }
  std::size_t degrees() const { return degrees_; }
  const Complex& at(std::size_t w) const { return sections_.at(w); }
  std::size_t dim(std::size_t w, std::size_t n) const { return n < sections_[w].dims.size() ? sections_[w].dims[n] : 0; }

  void set_restriction(std::size_t from, std::size_t to, std::vector<Matrix> per_degree);
  bool has_restriction(std::size_t from, std::size_t to) const { return given_.count({from, to}) > 0; }
  const std::map<std::pair<std::size_t, std::size_t>, std::vector<Matrix>>& given() const { return given_; }
  /// Restriction from `from` to `to` in degree n (identity on equal opens).
  Matrix restriction(std::size_t from, std::size_t to, std::size_t n) const;

 private:
  std::optional<std::vector<std::size_t>> path(std::size_t from, std::size_t to) const;

  const Site* site_;
  std::vector<Complex> sections_;
  std::size_t degrees_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Matrix>> given_;
};

struct Violation {
  std::string what;
  std::string where;
  std::optional<std::size_t> degree;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Presheaf& f);

struct CheckResult {
  bool holds = true;
  std::string detail;
  std::optional<Vector> witness;
};

/// F(M) → ∏F(U_i) is injective with image the equalizer of the two maps to
/// ∏F(U_j ∧ U_k), in degree n.
CheckResult sheaf_check(const Presheaf& f, std::size_t n, const SiteCover& cover);
/// (u, v) ↦ u|_{U∧V} − v|_{U∧V} is onto F(U∧V)^n.
CheckResult mv_surjectivity(const Presheaf& f, std::size_t n, std::size_t u, std::size_t v);

struct QuasiIsoReport {
  bool holds = true;
  std::vector<std::size_t> source_ranks;  // cohomology of F(M)
  std::vector<std::size_t> kernel_ranks;  // cohomology of ker(F(U) ⊕ F(V) → F(U∧V))
  std::vector<bool> iso;                  // induced map bijective per degree
};

/// The map from F(M) into the kernel complex of the two-element cover.
QuasiIsoReport kernel_quasi_iso(const Presheaf& f, const SiteCover& cover);

/// Ranks of the alternating Čech complex of degree-0 sections, in degrees up
/// to the dimension of the nerve (at least one entry).
std::vector<std::size_t> cech_cohomology(const Presheaf& f, const SiteCover& cover);

CheckResult check_flabby(const Presheaf& f);

struct SuppleTriple {
  std::size_t u, v1, v2;
};
CheckResult check_supple(const Presheaf& f, const std::vector<SuppleTriple>& triples);

struct PartitionEndomorphisms {
  std::vector<std::vector<Matrix>> p_u, p_v;  // [open][degree]
};

enum class FineFailure { None, Precondition, Sum, ChainMap, Naturality, Vanishing };
const char* fine_failure_name(FineFailure f);

struct FineReport {
  FineFailure failure = FineFailure::None;
  std::string detail;
  bool holds() const { return failure == FineFailure::None; }
};

FineReport check_fine_witness(const Presheaf& f, const PartitionEndomorphisms& p, const SiteCover& cover,
                              std::size_t u_vanish, std::size_t v_vanish);

struct DescentVerdict {
  bool holds = true;
  std::string hypothesis;  // failing check, empty on pass
  std::optional<std::size_t> cover;
  std::optional<std::size_t> degree;
  std::string detail;
};

/// Degreewise sheaf condition on every designated cover, Mayer–Vietoris
/// surjectivity on the two-element ones, products on the disjoint ones.
DescentVerdict descent_check(const Presheaf& f);

}  // namespace coverforge

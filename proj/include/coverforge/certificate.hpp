#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coverforge/cover.hpp"

namespace coverforge {

enum class NodeKind { TwoElement, Disjoint, Coarsen, Compose, Iso, CubeSchema };

const char* node_kind_name(NodeKind k);

/// Names one element of a cover: a finite element, or an instance of a schema.
struct ElementRef {
  long schema = -1;
  std::size_t index = 0;
  Index instance;

  friend bool operator==(const ElementRef&, const ElementRef&) = default;
};

struct CertNode;
using Cert = std::shared_ptr<const CertNode>;

struct CertNode {
  NodeKind kind;
  /// The cover this node certifies.
  Cover cover;
  std::vector<Cert> children;
  /// Coarsen: finite child element j refines cover element refinement[j].
  std::vector<ElementRef> refinement;
  /// Coarsen over a lattice-indexed child: instance -> cover element, on the
  /// window the certificate was built for.
  std::map<Index, ElementRef> lattice_refinement;
  /// Iso: the cover of the child is the image of this cover under the map.
  std::optional<RadialMap> map;
  /// CubeSchema dimension.
  std::size_t cube_dim = 0;
  /// TwoElement nodes of the cube scheme: slab axis of the canonical cover.
  std::optional<std::size_t> slab_axis;
};

Cert two_element(Cover c);
Cert disjoint(Cover c);
/// Refinement of `c` by the child's cover with finite element map r.
Cert coarsen(Cover c, Cert child, std::vector<std::size_t> r);
/// Composite of an outer cover and one certificate per outer element. The
/// composite elements default to inner ∩ outer.
Cert compose(Cert outer, std::vector<Cert> inners, std::optional<std::vector<OpenSet>> elements = std::nullopt);
Cert iso(Cover c, RadialMap map, Cert child);

/// Every leaf (after materializing schemas) is a two-element or disjoint node.
bool leaves_are_axioms(const Cert& c);
std::size_t node_total(const Cert& c);
std::size_t depth(const Cert& c);

struct NodeVerdict {
  std::string path;
  NodeKind kind;
  Tier tier;
  std::string detail;
  std::optional<Point> witness;
  double seconds = 0;
};

struct VerificationReport {
  std::vector<NodeVerdict> nodes;
  Tier aggregate = Tier::Exact;
  double seconds = 0;
  bool failed() const { return aggregate == Tier::Failed; }
  /// First failing node, if any.
  const NodeVerdict* first_failure() const;
};

/// Checks every node on the plan window (bounded). Lattice-indexed families
/// and schema nodes are checked on the window only.
VerificationReport verify(const Cert& root, const SamplePlan& plan);

}  // namespace coverforge

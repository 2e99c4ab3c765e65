#pragma once

#include "coverforge/certificate.hpp"
#include "coverforge/lebesgue.hpp"

namespace coverforge {

/// U = ⋃(4i, 4i+3) and V = ⋃(4i+2, 4i+5) along `axis`, with lattice tent partition.
Cover canonical_slabs(std::size_t n, std::size_t axis);

/// The cubes ∏(2m_i, 2m_i+3), m ∈ ℤⁿ.
LatticeFamily cube_family(std::size_t n);

/// Symbolic certificate that the cube cover of ℝⁿ is generated.
Cert cube_certificate(std::size_t n);

/// Ordinary certificate for the cubes meeting a bounded window. Each block
/// ℝ^k × ∏_{i>=k}(2m_i, 2m_i+3) is covered through the slab cover on axis k-1.
Cert materialize_cube(std::size_t n, const Box& window);

/// The node's elements are the canonical slabs on its recorded axis,
/// restricted to its ambient.
bool matches_canonical_slab(const CertNode& node);

/// An element U of the cover with B(preimage of the box center, R) ⊂ U, where
/// R bounds the preimage of the box under the map. The box must be bounded.
std::optional<ElementRef> image_box_witness(const Cover& c, const RadialMap& map, const Box& box);

/// Bounded image-space window containing the image of `window`.
Box image_window(const RadialMap& map, const Box& window);

struct EuclidResult {
  Cert certificate;
  Rescaler rescaler;
  RadialMap map;
  Box image_window;
};

/// Iso(rescaling) over Coarsen(cube certificate) for a cover of ℝⁿ given by
/// box elements and lattice schemas. Throws CoverageGap from the profile.
EuclidResult euclid_decompose(const Cover& c, const Box& window, const Rational& delta = Rational(1, 20));

}  // namespace coverforge

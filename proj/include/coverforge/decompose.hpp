#pragma once

#include "coverforge/certificate.hpp"
#include "coverforge/refine.hpp"

namespace coverforge {

/// Two-element split of a zigzag cover into its even and odd members.
Cert decompose_zigzag(const Cover& zigzag);
/// A chain U_0 ⊂ U_1 ⊂ ... refined by its zigzag cover.
Cert decompose_chain(const Cover& chain, const SamplePlan& plan);
Cert decompose_chain(const Cover& chain, const ZigzagParams& params, const SamplePlan& plan);
/// Finite cover with compatible partition, peeling off the last element.
Cert decompose_finite(const Cover& c);
/// Countable cover through the chain of its partial unions.
Cert decompose_countable(const Cover& c, const SamplePlan& plan);
/// Arbitrary numerable cover. Lattice covers are truncated to the plan window.
Cert decompose(const Cover& c, const SamplePlan& plan);

}  // namespace coverforge

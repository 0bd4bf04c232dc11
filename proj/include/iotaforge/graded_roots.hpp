#pragma once

// Graded roots with module gradings (edges step by 2), symmetric roots with their
// reflection J0, monotone roots, and the monotone subroot.

#include <string>
#include <vector>

#include "iotaforge/iota_complex.hpp"

namespace iota {

struct GradedRoot {
  std::vector<std::string> ids;
  std::vector<Grading> gradings;
  std::vector<std::pair<size_t, size_t>> edges;
  std::vector<size_t> involution;  // J0 as a permutation of vertex indices
  size_t stem_bottom = 0;          // the stem continues downward from here

  size_t size() const { return gradings.size(); }
};

// Throws InvalidRoot naming the first violated condition. The leaves (vertices without
// an upper neighbour), taken in vertex-list order, must be a planar order reversed by J0.
void validate_root(const GradedRoot& m);

// Derived structure of a validated root.
struct RootShape {
  std::vector<long> lower;             // lower neighbour, -1 at the stem bottom
  std::vector<size_t> leaves;          // planar order
  std::vector<Grading> merges;         // merge grading of each adjacent leaf pair
};
RootShape root_shape(const GradedRoot& m);

// Root whose leaves have the given gradings (planar order) and whose adjacent leaves meet at
// the given merge gradings; J0 reverses the order, so both lists must be palindromes.
// Leaves come first in the vertex list.
GradedRoot root_from_leaves(const std::vector<Grading>& leaf_gradings, const std::vector<Grading>& merges,
                            const std::vector<std::string>& leaf_ids = {});

struct MonotoneRoot {
  std::vector<Grading> h;  // strictly decreasing
  std::vector<Grading> r;  // strictly increasing, h.back() >= r.back()
  friend bool operator==(const MonotoneRoot&, const MonotoneRoot&) = default;
};

void validate_monotone(const MonotoneRoot& m);
GradedRoot monotone_root(const MonotoneRoot& m);

struct RootModule {
  GradedModule module;
  MonomialMatrix j0;  // J0 on the vertex generators
};
RootModule hminus(const GradedRoot& m);

MonotoneRoot monotone_subroot(const GradedRoot& m);

// Leaves plus one relation generator per adjacent merge; ι reflects the planar order.
// Checks that the homology equals hminus(m).
IotaComplex realize(const GradedRoot& m);

// Torsion of hminus of the monotone subroot, shifted up by one.
GradedModule root_connected_homology(const GradedRoot& m);

// Towers of odd multiplicity once each, even multiplicities dropped.
GradedModule parity_reduce(const GradedModule& m);

}  // namespace iota

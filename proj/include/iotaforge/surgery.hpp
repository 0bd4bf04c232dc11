#pragma once

// V-sequences of L-space knots, the modules M(V, n) of negative surgeries, the truncated
// mapping cone, and the complexes C_n and C_{n1,...,nm}.

#include <vector>

#include "iotaforge/graded_roots.hpp"

namespace iota {

// d-invariant of the lens space L(n, 1) in the spin^c structure with residue i.
Grading lens_d(int64_t n, int64_t i);

// V_0, V_1, ... up to the last nonzero value; V_s = 0 beyond. Requires V_s - V_{s+1} in {0, 1}.
class VSequence {
 public:
  VSequence() = default;
  explicit VSequence(std::vector<int64_t> values);
  const std::vector<int64_t>& values() const { return v_; }
  int64_t v(int64_t s) const;  // all s, with V_{-s} = V_s + s
  int64_t h(int64_t s) const { return v(-s); }
  int64_t v0() const { return v(0); }
  // Largest s with V_s != 0, or -1 for the unknot.
  int64_t last_nonzero() const { return static_cast<int64_t>(v_.size()) - 1; }
  friend bool operator==(const VSequence&, const VSequence&) = default;

 private:
  std::vector<int64_t> v_;
};

// Step lengths of an L-space knot staircase, from the top corner: odd steps horizontal,
// even steps vertical. Must be positive, even in number and a palindrome.
struct Staircase {
  std::vector<int64_t> steps;
  int64_t genus() const;
};
void validate_staircase(const Staircase& st);

// Staircase of the torus knot T(p, q), read off its Alexander polynomial.
Staircase torus_staircase(int64_t p, int64_t q);

// V_s from the finite models of A_s and B inside the staircase complex.
VSequence vs_from_staircase(const Staircase& st);

struct MModule {
  GradedRoot root;
  GradedModule module;
};
MModule m_module(const VSequence& v, int64_t n);

GradedRoot shift_root(const GradedRoot& m, const Grading& by);

struct SurgeryCone {
  IotaComplex complex;   // B generators b_t and A generators y_t, with the reflection
  GradedModule module;   // homology = coker of the induced map
  int64_t truncation = 0;
};

// Spin^c [0] summand of the cone truncated at N (0 picks the default). Throws
// TruncationUnstable when N and N+1 disagree, InvalidInput when D is not injective.
SurgeryCone surgery_homology(const VSequence& v, int64_t n, int64_t truncation = 0);
int64_t default_truncation(const VSequence& v, int64_t n);

// C_n: x1, x2 at -2, y at -2n-1, dy = U^n (x1 + x2), ι swaps x1 and x2.
IotaComplex surgery_local_rep(int64_t v0);

// C_{n1,...,nm} for n1 >= ... >= nm >= 1. Throws Unsorted.
IotaComplex sum_surgeries_complex(const std::vector<int>& ns);

// ⊕ T_{i-2-2a_{i-1}}(n_i) with a_i the partial sums.
GradedModule sum_surgeries_connected(const std::vector<int>& ns);

Grading dunder_lower_bound(int64_t v0, int64_t n);

}  // namespace iota

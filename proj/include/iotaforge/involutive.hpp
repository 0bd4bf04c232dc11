#pragma once

#include <map>

#include "iotaforge/iota_complex.hpp"

namespace iota {

// Cone(Q(1+ι)): generator i is x_i (grading gr+1), generator n+i is Q x_i (grading gr).
struct InvolutiveCone {
  std::vector<Grading> gradings;
  MonomialMatrix d;  // degree -1
  MonomialMatrix q;  // degree -1, x_i -> Q x_i
};

struct CorrectionTerms {
  Grading lower;  // d underline
  Grading d;
  Grading upper;  // d bar
  friend bool operator==(const CorrectionTerms&, const CorrectionTerms&) = default;
};

InvolutiveCone involutive_cone(const IotaComplex& a);

// Classifies the two non-torsion cone towers by eventual membership in Im(Q).
// Throws NotLocal, or ParityViolation when the answer contradicts the parity law.
CorrectionTerms correction_terms(const IotaComplex& a);

// Formula valid when H_*(A) lives in one parity of gradings: read off from
// ker and coker of 1 + ι_* without building the cone. Throws InvalidInput otherwise.
CorrectionTerms correction_terms_single_parity(const IotaComplex& a);
bool homology_single_parity(const IotaComplex& a);

// Per cone grading r: dim HFI_r and dim ker(1+ι_*)_{r-1} + dim coker(1+ι_*)_r, over gradings
// in [bottom, top] of the cone.
struct TriangleCount {
  int64_t cone = 0;
  int64_t kernel_plus_cokernel = 0;
};
std::map<Grading, TriangleCount> exact_triangle_counts(const IotaComplex& a, const Grading& bottom);

}  // namespace iota

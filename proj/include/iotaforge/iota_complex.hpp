#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iotaforge/ufu_algebra.hpp"

namespace iota {

struct IotaComplex {
  std::string name;
  std::vector<std::string> names;
  std::vector<Grading> gradings;
  MonomialMatrix d;     // degree -1
  MonomialMatrix iota;  // degree 0, strict chain map
  std::optional<MonomialMatrix> h_sq;  // degree +1, iota^2 + id = dH + Hd

  size_t size() const { return gradings.size(); }

  // Builds an empty complex on the given generators (d = 0, iota = 0).
  static IotaComplex on_generators(std::vector<std::string> names, std::vector<Grading> gradings);
};

struct ValidationIssue {
  std::string invariant;  // e.g. "d_squared_zero"
  std::string witness;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
};

ValidationReport validate(const IotaComplex& c);
// Throws InvalidInput (or NotLocal when only locality fails) on the first failed invariant.
void require_valid(const IotaComplex& c);

// H with d H + H d = delta (delta a degree-0 map), or nullopt.
std::optional<MonomialMatrix> solve_homotopy(const MonomialMatrix& d, const MonomialMatrix& delta);

// Generator (F[U], id) at grading -2.
IotaComplex identity_complex();

IotaComplex tensor(const IotaComplex& a, const IotaComplex& b);
IotaComplex dual(const IotaComplex& a);
IotaComplex reduce(const IotaComplex& a);
Grading d_invariant(const IotaComplex& a);

// Direct sum of underlying complexes (not an ι-complex in general: used for tests).
MonomialMatrix direct_sum(const MonomialMatrix& a, const MonomialMatrix& b);

}  // namespace iota

#pragma once

// Random and enumerated inputs shared by the unit and acceptance tests.

#include <random>
#include <vector>

#include "iotaforge/graded_roots.hpp"
#include "iotaforge/iota_complex.hpp"

namespace support {

using iota::Grading;
using iota::IotaComplex;
using iota::MonomialMatrix;

// Random homogeneous degree-0 map with gradings spread over a few even steps.
MonomialMatrix random_map(std::mt19937_64& rng, size_t rows, size_t cols);

// Random differential: a sum of free generators and towers U^k (k <= max_exp) hidden by a
// random graded change of basis, sometimes placed in a non-integral coset.
MonomialMatrix random_differential(std::mt19937_64& rng, size_t n, int max_exp);

// A truncation level comfortably above every tower length and exponent of d.
int64_t safe_truncation(const MonomialMatrix& d);

// Random valid ι-complex on at most max_gens generators (rejection sampling).
IotaComplex random_iota_complex(std::mt19937_64& rng, size_t max_gens);

// Every ι on a complex in tower normal form (one free generator at -2 plus one or two
// towers with tops in [-4, 0] and lengths 1..2) that is a chain map with ι² ≃ id.
std::vector<IotaComplex> small_complex_family();

// Symmetric roots with 1..6 leaves at gradings {-2,-4,-6} whose adjacent leaves merge
// 1..3 steps below the lower of the two.
std::vector<iota::GradedRoot> symmetric_root_family();

// Tower decomposition of H^-(root) straight from the tree: ranks of U^j between levels.
iota::GradedModule root_module_oracle(const iota::GradedRoot& m);

// C_{n1,...,nm} (thin wrapper kept here so unit tests of lower layers stay readable).
IotaComplex sum_complex(const std::vector<int>& ns);

}  // namespace support

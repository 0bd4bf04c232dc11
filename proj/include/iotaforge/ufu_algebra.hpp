#pragma once

// Linear and homological algebra over F2[U] (deg U = -2) for graded free modules.
//
// A homogeneous map between free modules has every entry forced to be 0 or a single
// power of U, so a matrix is an F2 bit-matrix plus the gradings of its rows and columns.
// `degree` is the grading change of the map: -1 for differentials, 0 for chain maps,
// +1 for homotopies. Entry (r, c) stands for U^k with k = (gr_row - gr_col - degree)/2.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iotaforge/bits.hpp"
#include "iotaforge/errors.hpp"
#include "iotaforge/rational.hpp"

namespace iota {

// k with U^k the forced monomial for an entry, or nullopt if the entry must vanish.
std::optional<int64_t> forced_exponent(const Grading& row, const Grading& col, int degree);

// Throws MixedCoset unless all gradings differ by integers. Returns the largest grading
// (or 0 for an empty list).
Grading check_single_coset(const std::vector<Grading>& gradings);

// Integer offsets gr_i - base; requires a single coset containing base.
std::vector<int64_t> coset_offsets(const std::vector<Grading>& gradings, const Grading& base);

class MonomialMatrix {
 public:
  MonomialMatrix() = default;
  MonomialMatrix(std::vector<Grading> rows, std::vector<Grading> cols, int degree);
  static MonomialMatrix from_bits(std::vector<Grading> rows, std::vector<Grading> cols, int degree,
                                  BitMatrix bits);
  static MonomialMatrix identity(const std::vector<Grading>& gradings);

  size_t rows() const { return row_gr_.size(); }
  size_t cols() const { return col_gr_.size(); }
  int degree() const { return degree_; }
  const std::vector<Grading>& row_gradings() const { return row_gr_; }
  const std::vector<Grading>& col_gradings() const { return col_gr_; }
  const BitMatrix& bits() const { return bits_; }

  std::optional<int64_t> exponent(size_t r, size_t c) const {
    return forced_exponent(row_gr_[r], col_gr_[c], degree_);
  }
  bool admissible(size_t r, size_t c) const { return exponent(r, c).has_value(); }
  bool get(size_t r, size_t c) const { return bits_.get(r, c); }
  // Setting an inadmissible entry to 1 throws InvalidInput.
  void set(size_t r, size_t c, bool v = true);
  bool is_zero() const { return bits_.is_zero(); }
  std::optional<std::pair<size_t, size_t>> first_nonzero() const;

  // this ∘ other
  MonomialMatrix compose(const MonomialMatrix& other) const;
  MonomialMatrix operator+(const MonomialMatrix& other) const;
  friend bool operator==(const MonomialMatrix& a, const MonomialMatrix& b) = default;

 private:
  std::vector<Grading> row_gr_, col_gr_;
  int degree_ = 0;
  BitMatrix bits_;
};

// Homogeneous element sum_{i in support} U^{(gr_i - grading)/2} x_i of a free module.
struct Element {
  Grading grading;
  BitVec support;
  friend bool operator==(const Element& a, const Element& b) = default;
};

// True when every generator in the support sits at or above `grading` by an even step.
bool is_homogeneous(const std::vector<Grading>& gens, const Element& e);

Element apply(const MonomialMatrix& m, const Element& x);

// Degree-0 matrix whose columns are the given elements (source gradings = element gradings).
MonomialMatrix columns_matrix(const std::vector<Grading>& gens, const std::vector<Element>& cols);

struct Tower {
  Grading top;
  int64_t length;
  friend bool operator==(const Tower& a, const Tower& b) = default;
};

// F[U]^b ⊕ ⊕ T_a(n); canonical order: free parts descending, towers by (top, length) descending.
struct GradedModule {
  std::vector<Grading> free_parts;
  std::vector<Tower> towers;

  GradedModule& canonicalize();
  GradedModule shifted(const Grading& by) const;
  GradedModule torsion() const;
  int64_t torsion_dimension() const;
  int64_t max_tower_length() const;
  std::string str() const;
  static GradedModule direct_sum(const GradedModule& a, const GradedModule& b);
  friend bool operator==(const GradedModule& a, const GradedModule& b);
};

// Graded Smith reduction of a differential (square, degree -1, d∘d = 0).
// Throws NotAComplex or MixedCoset.
GradedModule homology(const MonomialMatrix& d);

// F2 homology dimension per grading of the complex with U^N = 0, over the window of
// gradings where truncation does not change the chain groups (the top 2N-1 levels).
std::map<Grading, int64_t> truncated_homology_oracle(const MonomialMatrix& d, int64_t n);

// Reconstructs the module from the same truncated window using ranks of U^j between
// graded pieces (dimensions alone do not determine the tower decomposition).
// Throws TruncationTooSmall if the answer differs between N and N+1.
GradedModule truncated_module_oracle(const MonomialMatrix& d, int64_t n);

// Free basis of ker f, column-echelonized with monomial pivots.
std::vector<Element> kernel_basis(const MonomialMatrix& f);

// x with A x = b, or nullopt. Pivots: lowest exponent first, ties by lowest index.
std::optional<Element> solve_linear(const MonomialMatrix& a, const Element& b);

// span(b) ⊆ span(a) inside the free module with the given generator gradings.
bool submodule_contains(const std::vector<Grading>& gens, const std::vector<Element>& a,
                        const std::vector<Element>& b);

// Graded pieces as F2 vector spaces: the generators contributing U^j x_i to grading s.
std::vector<size_t> slice(const std::vector<Grading>& gradings, const Grading& s);

// Restriction of m to the map (grading s piece) -> (grading s + degree piece).
BitMatrix restrict_map(const MonomialMatrix& m, const std::vector<size_t>& src,
                       const std::vector<size_t>& dst);

// Re-indexes a vector on slice `from` into slice `to` (U-multiplication on coordinates).
BitVec move_slice(const BitVec& v, const std::vector<size_t>& from, const std::vector<size_t>& to);

// Cached per-grading cycle and boundary spaces of a differential, in slice coordinates.
// Caches are filled lazily, so one instance must not be shared between threads.
class GradedPieces {
 public:
  explicit GradedPieces(const MonomialMatrix& d);
  const MonomialMatrix& differential() const { return d_; }
  const std::vector<size_t>& slice_at(const Grading& s);
  const std::vector<BitVec>& cycles(const Grading& s);
  const Echelon& boundaries(const Grading& s);
  int64_t homology_dim(const Grading& s);
  // Images of the cycles at s under U^j, inside the slice at s - 2j.
  std::vector<BitVec> u_power_of_cycles(const Grading& s, int64_t j);

 private:
  MonomialMatrix d_;
  std::map<Grading, std::vector<size_t>> slices_;
  std::map<Grading, std::vector<BitVec>> cycles_;
  std::map<Grading, Echelon> bounds_;
};

}  // namespace iota

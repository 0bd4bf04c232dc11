#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace iota {

// Dense F2 vector.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  size_t size() const { return n_; }
  bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(size_t i, bool v = true) {
    if (v)
      w_[i >> 6] |= uint64_t{1} << (i & 63);
    else
      w_[i >> 6] &= ~(uint64_t{1} << (i & 63));
  }
  void flip(size_t i) { w_[i >> 6] ^= uint64_t{1} << (i & 63); }

  BitVec& operator^=(const BitVec& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  BitVec& operator&=(const BitVec& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }

  bool any() const {
    for (auto x : w_)
      if (x) return true;
    return false;
  }
  bool none() const { return !any(); }
  size_t count() const {
    size_t c = 0;
    for (auto x : w_) c += static_cast<size_t>(std::popcount(x));
    return c;
  }
  // Parity of the AND with another vector (dot product over F2).
  bool dot(const BitVec& o) const {
    uint64_t acc = 0;
    for (size_t k = 0; k < w_.size(); ++k) acc ^= w_[k] & o.w_[k];
    return std::popcount(acc) & 1;
  }
  // Index of the lowest set bit at or after `from`, or -1.
  long next(size_t from = 0) const {
    if (from >= n_) return -1;
    size_t k = from >> 6;
    uint64_t x = w_[k] & (~uint64_t{0} << (from & 63));
    while (true) {
      if (x) return static_cast<long>((k << 6) + static_cast<size_t>(std::countr_zero(x)));
      if (++k >= w_.size()) return -1;
      x = w_[k];
    }
  }
  long first() const { return next(0); }

  // Lexicographic order on (bit 0, bit 1, ...), with 0 < 1.
  bool lex_less(const BitVec& o) const {
    for (size_t k = 0; k < w_.size(); ++k) {
      uint64_t diff = w_[k] ^ o.w_[k];
      if (diff) {
        int b = std::countr_zero(diff);
        return ((o.w_[k] >> b) & 1u) != 0;
      }
    }
    return false;
  }

  friend bool operator==(const BitVec& a, const BitVec& b) = default;

  std::vector<uint64_t>& words() { return w_; }
  const std::vector<uint64_t>& words() const { return w_; }

 private:
  size_t n_ = 0;
  std::vector<uint64_t> w_;
};

// Dense row-major F2 matrix.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), r_(rows, BitVec(cols)) {}
  static BitMatrix identity(size_t n) {
    BitMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool get(size_t r, size_t c) const { return r_[r].get(c); }
  void set(size_t r, size_t c, bool v = true) { r_[r].set(c, v); }
  void flip(size_t r, size_t c) { r_[r].flip(c); }
  BitVec& row(size_t r) { return r_[r]; }
  const BitVec& row(size_t r) const { return r_[r]; }
  BitVec column(size_t c) const {
    BitVec v(rows_);
    for (size_t r = 0; r < rows_; ++r)
      if (r_[r].get(c)) v.set(r);
    return v;
  }

  bool is_zero() const {
    for (auto& x : r_)
      if (x.any()) return false;
    return true;
  }

  BitMatrix& operator^=(const BitMatrix& o) {
    for (size_t r = 0; r < rows_; ++r) r_[r] ^= o.r_[r];
    return *this;
  }
  friend BitMatrix operator^(BitMatrix a, const BitMatrix& b) { return a ^= b; }
  friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b);
  friend bool operator==(const BitMatrix& a, const BitMatrix& b) = default;

  // A v for a column vector v.
  BitVec apply(const BitVec& v) const {
    BitVec out(rows_);
    for (size_t r = 0; r < rows_; ++r)
      if (r_[r].dot(v)) out.set(r);
    return out;
  }

  BitMatrix transpose() const;
  size_t rank() const;

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<BitVec> r_;
};

// Incrementally maintained row-echelon basis of a subspace of F2^n.
// Rows are kept fully reduced against each other's pivots.
class Echelon {
 public:
  explicit Echelon(size_t n = 0) : n_(n) {}
  size_t dim() const { return rows_.size(); }
  size_t ambient() const { return n_; }
  // Reduces v against the basis in place; returns true when v becomes zero.
  bool reduce(BitVec& v) const {
    for (size_t i = 0; i < rows_.size(); ++i)
      if (v.get(static_cast<size_t>(piv_[i]))) v ^= rows_[i];
    return v.none();
  }
  bool contains(BitVec v) const { return reduce(v); }
  // Adds v to the span; returns false when it was already contained.
  bool insert(BitVec v);
  const std::vector<BitVec>& rows() const { return rows_; }
  const std::vector<long>& pivots() const { return piv_; }
  // Canonical reduced row-echelon basis sorted by pivot.
  std::vector<BitVec> canonical() const;

 private:
  size_t n_;
  std::vector<BitVec> rows_;
  std::vector<long> piv_;
};

// Basis of {x : A x = 0}, one vector per free column of the RREF of A.
std::vector<BitVec> nullspace(const BitMatrix& a);

// Solves A x = b. Columns are tried as pivots in the given order (default: natural
// order); free variables are set to zero, which makes the answer deterministic.
std::optional<BitVec> solve(const BitMatrix& a, const BitVec& b,
                            const std::vector<size_t>* column_order = nullptr);

}  // namespace iota

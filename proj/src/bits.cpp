#include "iotaforge/bits.hpp"

#include <algorithm>
#include <numeric>

namespace iota {

BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
  BitMatrix out(a.rows_, b.cols_);
  for (size_t r = 0; r < a.rows_; ++r) {
    const BitVec& ar = a.r_[r];
    BitVec& o = out.r_[r];
    for (long k = ar.first(); k >= 0; k = ar.next(static_cast<size_t>(k) + 1)) o ^= b.r_[static_cast<size_t>(k)];
  }
  return out;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (size_t r = 0; r < rows_; ++r)
    for (long c = r_[r].first(); c >= 0; c = r_[r].next(static_cast<size_t>(c) + 1))
      t.r_[static_cast<size_t>(c)].set(r);
  return t;
}

size_t BitMatrix::rank() const {
  std::vector<BitVec> m = r_;
  size_t rank = 0;
  for (size_t c = 0; c < cols_ && rank < m.size(); ++c) {
    size_t p = rank;
    while (p < m.size() && !m[p].get(c)) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (size_t r = rank + 1; r < m.size(); ++r)
      if (m[r].get(c)) m[r] ^= m[rank];
    ++rank;
  }
  return rank;
}

bool Echelon::insert(BitVec v) {
  if (reduce(v)) return false;
  long p = v.first();
  for (auto& r : rows_)
    if (r.get(static_cast<size_t>(p))) r ^= v;
  rows_.push_back(std::move(v));
  piv_.push_back(p);
  return true;
}

std::vector<BitVec> Echelon::canonical() const {
  std::vector<size_t> idx(rows_.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return piv_[a] < piv_[b]; });
  std::vector<BitVec> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(rows_[i]);
  return out;
}

std::vector<BitVec> nullspace(const BitMatrix& a) {
  const size_t n = a.cols();
  std::vector<BitVec> m;
  m.reserve(a.rows());
  for (size_t r = 0; r < a.rows(); ++r)
    if (a.row(r).any()) m.push_back(a.row(r));
  std::vector<long> pivot_of_col(n, -1);
  size_t rank = 0;
  for (size_t c = 0; c < n && rank < m.size(); ++c) {
    size_t p = rank;
    while (p < m.size() && !m[p].get(c)) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (size_t r = 0; r < m.size(); ++r)
      if (r != rank && m[r].get(c)) m[r] ^= m[rank];
    pivot_of_col[c] = static_cast<long>(rank);
    ++rank;
  }
  std::vector<BitVec> basis;
  for (size_t f = 0; f < n; ++f) {
    if (pivot_of_col[f] >= 0) continue;
    BitVec v(n);
    v.set(f);
    for (size_t c = 0; c < n; ++c) {
      long pr = pivot_of_col[c];
      if (pr >= 0 && m[static_cast<size_t>(pr)].get(f)) v.set(c);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<BitVec> solve(const BitMatrix& a, const BitVec& b, const std::vector<size_t>* column_order) {
  const size_t n = a.cols();
  std::vector<size_t> order;
  if (column_order) {
    order = *column_order;
  } else {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
  }
  // Augmented rows: permuted columns followed by the right-hand side bit.
  const size_t m = order.size();
  std::vector<BitVec> rows;
  rows.reserve(a.rows());
  for (size_t r = 0; r < a.rows(); ++r) {
    BitVec v(m + 1);
    for (size_t j = 0; j < m; ++j)
      if (a.get(r, order[j])) v.set(j);
    if (b.get(r)) v.set(m);
    rows.push_back(std::move(v));
  }
  std::vector<long> pivot_row_of(m, -1);
  size_t rank = 0;
  for (size_t j = 0; j < m && rank < rows.size(); ++j) {
    size_t p = rank;
    while (p < rows.size() && !rows[p].get(j)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r].get(j)) rows[r] ^= rows[rank];
    pivot_row_of[j] = static_cast<long>(rank);
    ++rank;
  }
  for (size_t r = rank; r < rows.size(); ++r)
    if (rows[r].get(m)) return std::nullopt;
  BitVec x(n);
  for (size_t j = 0; j < m; ++j) {
    long pr = pivot_row_of[j];
    if (pr >= 0 && rows[static_cast<size_t>(pr)].get(m)) x.set(order[j]);
  }
  return x;
}

}  // namespace iota

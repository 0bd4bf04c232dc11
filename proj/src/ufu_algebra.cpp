#include "iotaforge/ufu_algebra.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace iota {

std::optional<int64_t> forced_exponent(const Grading& row, const Grading& col, int degree) {
  Rational diff = row - col - Rational(degree);
  auto k = diff.half_even();
  if (!k || *k < 0) return std::nullopt;
  return k;
}

Grading check_single_coset(const std::vector<Grading>& gradings) {
  if (gradings.empty()) return Grading(0);
  Grading top = gradings[0];
  for (const auto& g : gradings) {
    if (!(g - gradings[0]).is_integer())
      throw Error(ErrorCode::MixedCoset, "gradings " + gradings[0].str() + " and " + g.str() +
                                             " lie in different cosets of Z");
    if (g > top) top = g;
  }
  return top;
}

std::vector<int64_t> coset_offsets(const std::vector<Grading>& gradings, const Grading& base) {
  std::vector<int64_t> out;
  out.reserve(gradings.size());
  for (const auto& g : gradings) {
    Rational diff = g - base;
    if (!diff.is_integer()) throw Error(ErrorCode::MixedCoset, "grading " + g.str() + " vs " + base.str());
    out.push_back(diff.num());
  }
  return out;
}

MonomialMatrix::MonomialMatrix(std::vector<Grading> rows, std::vector<Grading> cols, int degree)
    : row_gr_(std::move(rows)), col_gr_(std::move(cols)), degree_(degree), bits_(row_gr_.size(), col_gr_.size()) {}

MonomialMatrix MonomialMatrix::from_bits(std::vector<Grading> rows, std::vector<Grading> cols, int degree,
                                         BitMatrix bits) {
  MonomialMatrix m(std::move(rows), std::move(cols), degree);
  if (bits.rows() != m.rows() || bits.cols() != m.cols())
    throw Error(ErrorCode::InvalidInput, "bit matrix shape does not match gradings");
  for (size_t r = 0; r < bits.rows(); ++r)
    for (long c = bits.row(r).first(); c >= 0; c = bits.row(r).next(static_cast<size_t>(c) + 1))
      if (!m.admissible(r, static_cast<size_t>(c)))
        throw Error(ErrorCode::InvalidInput, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                                                 ") is not allowed by the gradings");
  m.bits_ = std::move(bits);
  return m;
}

MonomialMatrix MonomialMatrix::identity(const std::vector<Grading>& gradings) {
  MonomialMatrix m(gradings, gradings, 0);
  m.bits_ = BitMatrix::identity(gradings.size());
  return m;
}

void MonomialMatrix::set(size_t r, size_t c, bool v) {
  if (v && !admissible(r, c))
    throw Error(ErrorCode::InvalidInput, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                                             ") has no non-negative integer U-exponent");
  bits_.set(r, c, v);
}

std::optional<std::pair<size_t, size_t>> MonomialMatrix::first_nonzero() const {
  for (size_t r = 0; r < rows(); ++r) {
    long c = bits_.row(r).first();
    if (c >= 0) return std::make_pair(r, static_cast<size_t>(c));
  }
  return std::nullopt;
}

MonomialMatrix MonomialMatrix::compose(const MonomialMatrix& other) const {
  if (col_gr_ != other.row_gr_) throw Error(ErrorCode::InvalidInput, "composition of incompatible gradings");
  MonomialMatrix out(row_gr_, other.col_gr_, degree_ + other.degree_);
  out.bits_ = bits_ * other.bits_;
  return out;
}

MonomialMatrix MonomialMatrix::operator+(const MonomialMatrix& other) const {
  if (row_gr_ != other.row_gr_ || col_gr_ != other.col_gr_ || degree_ != other.degree_)
    throw Error(ErrorCode::InvalidInput, "sum of incompatible matrices");
  MonomialMatrix out = *this;
  out.bits_ ^= other.bits_;
  return out;
}

bool is_homogeneous(const std::vector<Grading>& gens, const Element& e) {
  if (e.support.size() != gens.size()) return false;
  for (long i = e.support.first(); i >= 0; i = e.support.next(static_cast<size_t>(i) + 1)) {
    auto k = (gens[static_cast<size_t>(i)] - e.grading).half_even();
    if (!k || *k < 0) return false;
  }
  return true;
}

Element apply(const MonomialMatrix& m, const Element& x) {
  return Element{x.grading + Rational(m.degree()), m.bits().apply(x.support)};
}

MonomialMatrix columns_matrix(const std::vector<Grading>& gens, const std::vector<Element>& cols) {
  std::vector<Grading> cg;
  cg.reserve(cols.size());
  for (auto& e : cols) cg.push_back(e.grading);
  BitMatrix b(gens.size(), cols.size());
  for (size_t j = 0; j < cols.size(); ++j)
    for (long i = cols[j].support.first(); i >= 0; i = cols[j].support.next(static_cast<size_t>(i) + 1))
      b.set(static_cast<size_t>(i), j);
  return MonomialMatrix::from_bits(gens, cg, 0, std::move(b));
}

// ---------------------------------------------------------------- GradedModule

GradedModule& GradedModule::canonicalize() {
  std::sort(free_parts.begin(), free_parts.end(), std::greater<>());
  std::sort(towers.begin(), towers.end(), [](const Tower& a, const Tower& b) {
    if (a.top != b.top) return a.top > b.top;
    return a.length > b.length;
  });
  return *this;
}

GradedModule GradedModule::shifted(const Grading& by) const {
  GradedModule m = *this;
  for (auto& g : m.free_parts) g += by;
  for (auto& t : m.towers) t.top += by;
  return m.canonicalize();
}

GradedModule GradedModule::torsion() const {
  GradedModule m;
  m.towers = towers;
  return m.canonicalize();
}

int64_t GradedModule::torsion_dimension() const {
  int64_t s = 0;
  for (auto& t : towers) s += t.length;
  return s;
}

int64_t GradedModule::max_tower_length() const {
  int64_t s = 0;
  for (auto& t : towers) s = std::max(s, t.length);
  return s;
}

std::string GradedModule::str() const {
  std::ostringstream os;
  os << "{free:[";
  for (size_t i = 0; i < free_parts.size(); ++i) os << (i ? "," : "") << free_parts[i].str();
  os << "], towers:[";
  for (size_t i = 0; i < towers.size(); ++i)
    os << (i ? "," : "") << "T_" << towers[i].top.str() << "(" << towers[i].length << ")";
  os << "]}";
  return os.str();
}

GradedModule GradedModule::direct_sum(const GradedModule& a, const GradedModule& b) {
  GradedModule m = a;
  m.free_parts.insert(m.free_parts.end(), b.free_parts.begin(), b.free_parts.end());
  m.towers.insert(m.towers.end(), b.towers.begin(), b.towers.end());
  return m.canonicalize();
}

bool operator==(const GradedModule& a, const GradedModule& b) {
  GradedModule x = a, y = b;
  x.canonicalize();
  y.canonicalize();
  return x.free_parts == y.free_parts && x.towers == y.towers;
}

// ---------------------------------------------------------------- homology

namespace {

void require_differential(const MonomialMatrix& d) {
  if (d.rows() != d.cols() || d.row_gradings() != d.col_gradings() || d.degree() != -1)
    throw Error(ErrorCode::InvalidInput, "differential must be square of degree -1 on one basis");
  check_single_coset(d.row_gradings());
  if (!(d.bits() * d.bits()).is_zero()) {
    auto sq = d.compose(d);
    auto p = sq.first_nonzero();
    throw Error(ErrorCode::NotAComplex, "d∘d has a nonzero entry at (" + std::to_string(p->first) + "," +
                                            std::to_string(p->second) + ")");
  }
}

}  // namespace

GradedModule homology(const MonomialMatrix& d) {
  require_differential(d);
  const size_t n = d.rows();
  GradedModule out;
  if (n == 0) return out;
  const auto& gr = d.row_gradings();
  auto z = coset_offsets(gr, gr[0]);
  BitMatrix m = d.bits();
  std::vector<char> alive(n, 1);

  while (true) {
    // Pivot: minimal exponent, ties by (row, col).
    long br = -1, bc = -1;
    int64_t bk = 0;
    for (size_t r = 0; r < n; ++r) {
      if (!alive[r]) continue;
      const BitVec& row = m.row(r);
      for (long c = row.first(); c >= 0; c = row.next(static_cast<size_t>(c) + 1)) {
        int64_t k = (z[r] - z[static_cast<size_t>(c)] + 1) / 2;
        if (br < 0 || k < bk) {
          br = static_cast<long>(r);
          bc = c;
          bk = k;
        }
      }
    }
    if (br < 0) break;
    const size_t pr = static_cast<size_t>(br), pc = static_cast<size_t>(bc);
    // Column clearing in row pr: basis change c' -> c' + U^e pc.
    for (long c = m.row(pr).first(); c >= 0; c = m.row(pr).next(static_cast<size_t>(c) + 1)) {
      size_t cc = static_cast<size_t>(c);
      if (cc == pc) continue;
      for (size_t r = 0; r < n; ++r)
        if (m.get(r, pc)) m.flip(r, cc);
      m.row(pc) ^= m.row(cc);
    }
    // Row clearing in column pc: basis change pr -> pr + U^e r'.
    for (size_t r = 0; r < n; ++r) {
      if (r == pr || !m.get(r, pc)) continue;
      m.row(r) ^= m.row(pr);
      for (size_t q = 0; q < n; ++q)
        if (m.get(q, r)) m.flip(q, pr);
    }
    if (bk > 0) out.towers.push_back(Tower{gr[pr], bk});
    alive[pr] = alive[pc] = 0;
    // d∘d = 0 forces row pc and column pr to vanish; drop both pivot lines.
    for (size_t q = 0; q < n; ++q) {
      m.set(pr, q, false);
      m.set(pc, q, false);
      m.set(q, pr, false);
      m.set(q, pc, false);
    }
  }
  for (size_t i = 0; i < n; ++i)
    if (alive[i]) out.free_parts.push_back(gr[i]);
  return out.canonicalize();
}

// ---------------------------------------------------------------- slices

std::vector<size_t> slice(const std::vector<Grading>& gradings, const Grading& s) {
  std::vector<size_t> out;
  for (size_t i = 0; i < gradings.size(); ++i) {
    auto k = (gradings[i] - s).half_even();
    if (k && *k >= 0) out.push_back(i);
  }
  return out;
}

BitMatrix restrict_map(const MonomialMatrix& m, const std::vector<size_t>& src, const std::vector<size_t>& dst) {
  BitMatrix out(dst.size(), src.size());
  for (size_t i = 0; i < dst.size(); ++i) {
    const BitVec& row = m.bits().row(dst[i]);
    for (size_t j = 0; j < src.size(); ++j)
      if (row.get(src[j])) out.set(i, j);
  }
  return out;
}

BitVec move_slice(const BitVec& v, const std::vector<size_t>& from, const std::vector<size_t>& to) {
  BitVec out(to.size());
  size_t t = 0;
  for (size_t i = 0; i < from.size(); ++i) {
    if (!v.get(i)) continue;
    while (t < to.size() && to[t] < from[i]) ++t;
    if (t == to.size() || to[t] != from[i]) throw Error(ErrorCode::InvalidInput, "slice move out of range");
    out.set(t);
  }
  return out;
}

GradedPieces::GradedPieces(const MonomialMatrix& d) : d_(d) {}

const std::vector<size_t>& GradedPieces::slice_at(const Grading& s) {
  auto it = slices_.find(s);
  if (it == slices_.end()) it = slices_.emplace(s, slice(d_.row_gradings(), s)).first;
  return it->second;
}

const std::vector<BitVec>& GradedPieces::cycles(const Grading& s) {
  auto it = cycles_.find(s);
  if (it != cycles_.end()) return it->second;
  const auto src = slice_at(s);
  const auto& dst = slice_at(s - Rational(1));
  return cycles_.emplace(s, nullspace(restrict_map(d_, src, dst))).first->second;
}

const Echelon& GradedPieces::boundaries(const Grading& s) {
  auto it = bounds_.find(s);
  if (it != bounds_.end()) return it->second;
  const auto above = slice_at(s + Rational(1));
  const auto& here = slice_at(s);
  BitMatrix t = restrict_map(d_, above, here).transpose();
  Echelon e(here.size());
  for (size_t j = 0; j < t.rows(); ++j) e.insert(t.row(j));
  return bounds_.emplace(s, std::move(e)).first->second;
}

int64_t GradedPieces::homology_dim(const Grading& s) {
  return static_cast<int64_t>(cycles(s).size()) - static_cast<int64_t>(boundaries(s).dim());
}

std::vector<BitVec> GradedPieces::u_power_of_cycles(const Grading& s, int64_t j) {
  const auto from = slice_at(s);
  const auto& to = slice_at(s - Rational(2 * j));
  std::vector<BitVec> out;
  for (const auto& z : cycles(s)) out.push_back(move_slice(z, from, to));
  return out;
}

// ---------------------------------------------------------------- truncation oracle

namespace {

struct WindowData {
  std::vector<Grading> levels;  // window gradings, descending
  std::map<Grading, std::vector<size_t>> sl;
  std::map<Grading, std::vector<BitVec>> cycles;
  std::map<Grading, Echelon> bounds;
};

WindowData window_data(const MonomialMatrix& d, int64_t n) {
  WindowData w;
  const auto& gr = d.row_gradings();
  Grading top = check_single_coset(gr);
  for (int64_t t = 0; t <= 2 * n - 2; ++t) w.levels.push_back(top - Rational(t));
  auto get_slice = [&](const Grading& s) -> const std::vector<size_t>& {
    auto it = w.sl.find(s);
    if (it == w.sl.end()) it = w.sl.emplace(s, slice(gr, s)).first;
    return it->second;
  };
  for (const auto& s : w.levels) {
    const auto& src = get_slice(s);
    const auto& dst = get_slice(s - Rational(1));
    w.cycles[s] = nullspace(restrict_map(d, src, dst));
    const auto& above = get_slice(s + Rational(1));
    BitMatrix into = restrict_map(d, above, src);
    Echelon e(src.size());
    BitMatrix t = into.transpose();
    for (size_t j = 0; j < t.rows(); ++j) e.insert(t.row(j));
    w.bounds.emplace(s, std::move(e));
  }
  return w;
}

GradedModule reconstruct(const MonomialMatrix& d, int64_t n) {
  WindowData w = window_data(d, n);
  GradedModule out;
  if (d.rows() == 0) return out;
  const Grading top = w.levels.front();
  const Grading bottom_any = w.levels.back();
  auto in_window = [&](const Grading& s) { return s <= top && s >= bottom_any; };
  // rank of U^j : H_s -> H_{s-2j}
  auto rank_u = [&](const Grading& s, int64_t j) -> int64_t {
    if (!in_window(s)) return 0;
    Grading t = s - Rational(2 * j);
    if (!in_window(t)) return 0;
    const auto& bt = w.bounds.at(t);
    Echelon e = bt;
    for (auto& z : w.cycles.at(s)) e.insert(move_slice(z, w.sl.at(s), w.sl.at(t)));
    return static_cast<int64_t>(e.dim()) - static_cast<int64_t>(bt.dim());
  };
  for (const auto& s : w.levels) {
    // Lowest window grading in the parity class of s.
    Grading bottom = s;
    while (in_window(bottom - Rational(2))) bottom = bottom - Rational(2);
    int64_t reach = ((s - bottom).num()) / 2 + 1;  // max visible length
    auto count_at_least = [&](int64_t m) {
      return rank_u(s, m - 1) - rank_u(s + Rational(2), m);
    };
    int64_t prev = count_at_least(1);
    for (int64_t m = 1; m < reach; ++m) {
      int64_t next = count_at_least(m + 1);
      for (int64_t k = 0; k < prev - next; ++k) out.towers.push_back(Tower{s, m});
      prev = next;
    }
    for (int64_t k = 0; k < prev; ++k) out.free_parts.push_back(s);
  }
  return out.canonicalize();
}

}  // namespace

std::map<Grading, int64_t> truncated_homology_oracle(const MonomialMatrix& d, int64_t n) {
  require_differential(d);
  if (n <= 0) throw Error(ErrorCode::InvalidInput, "truncation must be positive");
  std::map<Grading, int64_t> out;
  if (d.rows() == 0) return out;
  WindowData w = window_data(d, n);
  for (const auto& s : w.levels) {
    int64_t dim = static_cast<int64_t>(w.cycles[s].size()) - static_cast<int64_t>(w.bounds.at(s).dim());
    if (dim > 0) out[s] = dim;
  }
  return out;
}

GradedModule truncated_module_oracle(const MonomialMatrix& d, int64_t n) {
  require_differential(d);
  if (n <= 0) throw Error(ErrorCode::InvalidInput, "truncation must be positive");
  GradedModule a = reconstruct(d, n);
  GradedModule b = reconstruct(d, n + 1);
  if (!(a == b))
    throw Error(ErrorCode::TruncationTooSmall, "U^" + std::to_string(n) + " truncation gives " + a.str() +
                                                   " but U^" + std::to_string(n + 1) + " gives " + b.str());
  return a;
}

// ---------------------------------------------------------------- kernels and solves

std::vector<Element> kernel_basis(const MonomialMatrix& f) {
  const size_t nc = f.cols();
  const auto& cg = f.col_gradings();
  std::vector<BitVec> image(nc), combo(nc);
  for (size_t j = 0; j < nc; ++j) {
    image[j] = f.bits().column(j);
    combo[j] = BitVec(nc);
    combo[j].set(j);
  }
  std::vector<char> active(nc, 1);
  for (size_t r = 0; r < f.rows(); ++r) {
    long p = -1;
    for (size_t j = 0; j < nc; ++j) {
      if (!active[j] || !image[j].get(r)) continue;
      // Minimal exponent in row r means maximal column grading; ties by index.
      if (p < 0 || cg[j] > cg[static_cast<size_t>(p)]) p = static_cast<long>(j);
    }
    if (p < 0) continue;
    const size_t pp = static_cast<size_t>(p);
    for (size_t j = 0; j < nc; ++j) {
      if (j == pp || !active[j] || !image[j].get(r)) continue;
      image[j] ^= image[pp];
      combo[j] ^= combo[pp];
    }
    active[pp] = 0;
  }
  std::vector<Element> ker;
  for (size_t j = 0; j < nc; ++j)
    if (active[j]) ker.push_back(Element{cg[j], combo[j]});
  // Inter-reduce: clear each element's pivot (lowest unit-coefficient generator) from the others.
  std::sort(ker.begin(), ker.end(), [](const Element& a, const Element& b) {
    if (a.grading != b.grading) return a.grading > b.grading;
    return b.support.lex_less(a.support);
  });
  auto pivot_of = [&](const Element& e) -> long {
    for (long i = e.support.first(); i >= 0; i = e.support.next(static_cast<size_t>(i) + 1))
      if (cg[static_cast<size_t>(i)] == e.grading) return i;
    return -1;
  };
  for (size_t a = 0; a < ker.size(); ++a) {
    long pa = pivot_of(ker[a]);
    if (pa < 0) continue;
    for (size_t b = 0; b < ker.size(); ++b) {
      if (b == a || !ker[b].support.get(static_cast<size_t>(pa))) continue;
      if (ker[a].grading < ker[b].grading) continue;
      if (!(ker[a].grading - ker[b].grading).half_even()) continue;
      ker[b].support ^= ker[a].support;
    }
  }
  return ker;
}

std::optional<Element> solve_linear(const MonomialMatrix& a, const Element& b) {
  if (!is_homogeneous(a.row_gradings(), b)) throw Error(ErrorCode::InvalidInput, "right-hand side is not homogeneous");
  Grading xg = b.grading - Rational(a.degree());
  auto src = slice(a.col_gradings(), xg);
  auto dst = slice(a.row_gradings(), b.grading);
  BitMatrix sys = restrict_map(a, src, dst);
  BitVec rhs(dst.size());
  for (size_t i = 0; i < dst.size(); ++i)
    if (b.support.get(dst[i])) rhs.set(i);
  std::vector<size_t> order(src.size());
  for (size_t j = 0; j < src.size(); ++j) order[j] = j;
  const auto& cg = a.col_gradings();
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) { return cg[src[x]] > cg[src[y]]; });
  auto x = solve(sys, rhs, &order);
  if (!x) return std::nullopt;
  Element out{xg, BitVec(a.cols())};
  for (size_t j = 0; j < src.size(); ++j)
    if (x->get(j)) out.support.set(src[j]);
  return out;
}

bool submodule_contains(const std::vector<Grading>& gens, const std::vector<Element>& a,
                        const std::vector<Element>& b) {
  MonomialMatrix m = columns_matrix(gens, a);
  for (const auto& e : b)
    if (!solve_linear(m, e)) return false;
  return true;
}

}  // namespace iota

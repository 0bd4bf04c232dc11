#include "iotaforge/connected.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <random>

namespace iota {

namespace {

BitVec flatten(const BitMatrix& m) {
  const size_t n = m.rows();
  BitVec v(n * n);
  for (size_t r = 0; r < n; ++r)
    for (long c = m.row(r).first(); c >= 0; c = m.row(r).next(static_cast<size_t>(c) + 1))
      v.set(r * n + static_cast<size_t>(c));
  return v;
}

BitMatrix unflatten(const BitVec& v, size_t n) {
  BitMatrix m(n, n);
  for (long i = v.first(); i >= 0; i = v.next(static_cast<size_t>(i) + 1))
    m.set(static_cast<size_t>(i) / n, static_cast<size_t>(i) % n);
  return m;
}

// Lexicographic key of a kernel: its RREF-derived basis (canonical for the subspace).
bool kernel_less(const std::vector<BitVec>& a, const std::vector<BitVec>& b) {
  for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].lex_less(b[i])) return true;
    if (b[i].lex_less(a[i])) return false;
  }
  return a.size() < b.size();
}

struct Candidate {
  size_t rank = SIZE_MAX;
  std::vector<BitVec> kernel;
  uint64_t index = UINT64_MAX;
  BitMatrix f;

  bool better_than(const Candidate& o) const {
    if (rank != o.rank) return rank < o.rank;
    if (kernel_less(kernel, o.kernel)) return true;
    if (kernel_less(o.kernel, kernel)) return false;
    return index < o.index;
  }
};

Candidate evaluate(const BitMatrix& f, uint64_t index) {
  Candidate c;
  c.kernel = nullspace(f);
  c.rank = f.rows() - c.kernel.size();
  c.index = index;
  c.f = f;
  return c;
}

// Bit-level columns of f split by the parity class of their generator grading.
std::vector<std::vector<size_t>> parity_classes(const std::vector<Grading>& g) {
  std::vector<std::vector<size_t>> classes;
  std::vector<Grading> reps;
  for (size_t i = 0; i < g.size(); ++i) {
    size_t k = 0;
    while (k < reps.size() && !(g[i] - reps[k]).half_even()) ++k;
    if (k == reps.size()) {
      reps.push_back(g[i]);
      classes.emplace_back();
    }
    classes[k].push_back(i);
  }
  return classes;
}

// λ with (id + Σ λ_i B_i) s = 0, as the composite map, or nullopt.
std::optional<BitMatrix> killer_of(const AdmissibleSpace& space, const BitVec& s) {
  const size_t n = s.size(), k = space.dim();
  BitMatrix sys(n, k);
  for (size_t i = 0; i < k; ++i) {
    BitVec col = space.directions[i].apply(s);
    for (long r = col.first(); r >= 0; r = col.next(static_cast<size_t>(r) + 1)) sys.set(static_cast<size_t>(r), i);
  }
  auto lambda = solve(sys, s);
  if (!lambda) return std::nullopt;
  return space.member(*lambda);
}

enum class KillStatus { none, found, too_large };

// Enumerates the image of f per parity class looking for an element some admissible g kills.
KillStatus find_killable(const AdmissibleSpace& space, const BitMatrix& f, size_t cap, BitMatrix* killer) {
  for (const auto& cls : parity_classes(space.gradings)) {
    Echelon e(f.rows());
    for (auto c : cls) e.insert(f.column(c));
    if (e.dim() > cap) return KillStatus::too_large;
    const auto& rows = e.rows();
    BitVec s(f.rows());
    for (uint64_t i = 1; i < (uint64_t{1} << rows.size()); ++i) {
      s ^= rows[static_cast<size_t>(std::countr_zero(i))];
      if (auto g = killer_of(space, s)) {
        if (killer) *killer = *g;
        return KillStatus::found;
      }
    }
  }
  return KillStatus::none;
}

Candidate exhaustive_search(const AdmissibleSpace& space, int threads) {
  const size_t k = space.dim();
  const uint64_t total = uint64_t{1} << k;
  const int t = static_cast<int>(std::min<uint64_t>(static_cast<uint64_t>(std::max(threads, 1)), total));
  std::vector<Candidate> best(static_cast<size_t>(t));
#pragma omp parallel num_threads(t)
  {
    const int me = omp_get_thread_num();
    const uint64_t lo = total * static_cast<uint64_t>(me) / static_cast<uint64_t>(t);
    const uint64_t hi = total * static_cast<uint64_t>(me + 1) / static_cast<uint64_t>(t);
    Candidate& mine = best[static_cast<size_t>(me)];
    if (lo < hi) {
      uint64_t gray = lo ^ (lo >> 1);
      BitMatrix f = space.basepoint;
      for (size_t b = 0; b < k; ++b)
        if ((gray >> b) & 1u) f ^= space.directions[b];
      for (uint64_t i = lo; i < hi; ++i) {
        // Rank first: the kernel comparison only matters for ties at the best rank.
        size_t rank = f.rank();
        if (rank <= mine.rank) {
          Candidate c = evaluate(f, gray);
          if (c.better_than(mine)) mine = std::move(c);
        }
        if (i + 1 < hi) {
          size_t bit = static_cast<size_t>(std::countr_zero(i + 1));
          f ^= space.directions[bit];
          gray ^= uint64_t{1} << bit;
        }
      }
    }
  }
  Candidate out = std::move(best[0]);
  for (size_t i = 1; i < best.size(); ++i)
    if (best[i].better_than(out)) out = std::move(best[i]);
  return out;
}

// One greedy descent: compose with any admissible g that kills a probed image element.
BitMatrix greedy_descent(const AdmissibleSpace& space, uint64_t seed, bool shuffle) {
  std::mt19937_64 rng(seed);
  const auto classes = parity_classes(space.gradings);
  BitMatrix f = space.basepoint;
  while (true) {
    std::vector<BitVec> probes;
    for (const auto& cls : classes) {
      std::vector<BitVec> cols;
      for (auto c : cls) {
        BitVec v = f.column(c);
        if (v.any() && std::find(cols.begin(), cols.end(), v) == cols.end()) cols.push_back(v);
      }
      if (shuffle) std::shuffle(cols.begin(), cols.end(), rng);
      probes.insert(probes.end(), cols.begin(), cols.end());
      for (size_t a = 0; a < cols.size(); ++a)
        for (size_t b = a + 1; b < cols.size(); ++b) probes.push_back(cols[a] ^ cols[b]);
      for (int r = 0; r < 64 && cols.size() > 2; ++r) {
        BitVec v(f.rows());
        for (const auto& c : cols)
          if (rng() & 1u) v ^= c;
        if (v.any()) probes.push_back(v);
      }
    }
    bool moved = false;
    for (const auto& s : probes) {
      if (auto g = killer_of(space, s)) {
        f = *g * f;
        moved = true;
        break;
      }
    }
    if (!moved) return f;
  }
}

}  // namespace

BitMatrix AdmissibleSpace::member(const BitVec& coefficients) const {
  BitMatrix m = basepoint;
  for (long i = coefficients.first(); i >= 0; i = coefficients.next(static_cast<size_t>(i) + 1))
    m ^= directions[static_cast<size_t>(i)];
  return m;
}

LocalityTest::LocalityTest(const IotaComplex& a) : gradings_(a.gradings) {
  GradedModule h = homology(a.d);
  if (h.free_parts.size() != 1) throw Error(ErrorCode::NotLocal, "expected exactly one free summand");
  Grading s = h.free_parts[0];
  for (const auto& t : h.towers) {
    const Grading bottom = t.top - Rational(2 * (t.length - 1));
    while (s >= bottom) s -= Rational(2);
  }
  GradedPieces pieces(a.d);
  slice_ = pieces.slice_at(s);
  boundaries_ = pieces.boundaries(s);
  for (const auto& z : pieces.cycles(s)) {
    BitVec r = z;
    if (!boundaries_.reduce(r)) {
      cycle_ = z;
      read_at_ = static_cast<size_t>(r.first());
      return;
    }
  }
  throw Error(ErrorCode::NotLocal, "free tower class not found");
}

bool LocalityTest::operator()(const BitMatrix& f) const {
  BitVec img(slice_.size());
  for (size_t i = 0; i < slice_.size(); ++i) {
    const BitVec& row = f.row(slice_[i]);
    bool bit = false;
    for (size_t j = 0; j < slice_.size(); ++j)
      if (cycle_.get(j) && row.get(slice_[j])) bit = !bit;
    if (bit) img.set(i);
  }
  boundaries_.reduce(img);
  return img.get(read_at_);
}

AdmissibleSpace admissible_space(const IotaComplex& a) {
  require_valid(a);
  const size_t n = a.size();
  const auto& g = a.gradings;
  const BitMatrix& d = a.d.bits();
  const BitMatrix& io = a.iota.bits();
  std::vector<std::pair<size_t, size_t>> fvars, hvars;
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c) {
      if (forced_exponent(g[r], g[c], 0)) fvars.emplace_back(r, c);
      if (forced_exponent(g[r], g[c], 1)) hvars.emplace_back(r, c);
    }
  // Equation rows: [0, n²) for fd + df, [n², 2n²) for fι + ιf + dH + Hd.
  const size_t nv = fvars.size() + hvars.size();
  std::vector<std::vector<size_t>> cols(nv);
  auto touch = [&](size_t var, size_t block, size_t r, size_t c) { cols[var].push_back(block * n * n + r * n + c); };
  for (size_t v = 0; v < fvars.size(); ++v) {
    auto [p, q] = fvars[v];
    for (size_t c = 0; c < n; ++c) {
      if (d.get(q, c)) touch(v, 0, p, c);
      if (io.get(q, c)) touch(v, 1, p, c);
    }
    for (size_t r = 0; r < n; ++r) {
      if (d.get(r, p)) touch(v, 0, r, q);
      if (io.get(r, p)) touch(v, 1, r, q);
    }
  }
  for (size_t v = 0; v < hvars.size(); ++v) {
    auto [p, q] = hvars[v];
    const size_t var = fvars.size() + v;
    for (size_t r = 0; r < n; ++r)
      if (d.get(r, p)) touch(var, 1, r, q);
    for (size_t c = 0; c < n; ++c)
      if (d.get(q, c)) touch(var, 1, p, c);
  }
  // Compact the equation rows that actually occur.
  std::vector<size_t> used;
  for (auto& col : cols) used.insert(used.end(), col.begin(), col.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  BitMatrix sys(used.size(), nv);
  for (size_t v = 0; v < nv; ++v)
    for (auto e : cols[v]) {
      size_t row = static_cast<size_t>(std::lower_bound(used.begin(), used.end(), e) - used.begin());
      sys.flip(row, v);
    }
  Echelon chain_maps(n * n);
  for (const auto& sol : nullspace(sys)) {
    BitMatrix f(n, n);
    for (long i = sol.first(); i >= 0 && static_cast<size_t>(i) < fvars.size(); i = sol.next(static_cast<size_t>(i) + 1))
      f.set(fvars[static_cast<size_t>(i)].first, fvars[static_cast<size_t>(i)].second);
    chain_maps.insert(flatten(f));
  }
  AdmissibleSpace out;
  out.gradings = g;
  out.basepoint = BitMatrix::identity(n);
  out.chain_map_dim = chain_maps.dim();
  LocalityTest local(a);
  const BitVec id = flatten(out.basepoint);
  Echelon kept(n * n);
  for (const auto& b : chain_maps.canonical()) {
    BitVec v = b;
    if (local(unflatten(v, n))) v ^= id;
    if (v.any()) kept.insert(v);
  }
  for (const auto& v : kept.canonical()) out.directions.push_back(unflatten(v, n));
  return out;
}

int search_threads(int requested) {
  int t = requested > 0 ? requested : omp_get_max_threads();
  if (const char* env = std::getenv("IOTA_FORGE_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) t = std::min(t, cap);
  }
  return std::max(t, 1);
}

SelfLocalEquivalence make_self_local_equivalence(const IotaComplex& a, const BitMatrix& bits) {
  MonomialMatrix f = MonomialMatrix::from_bits(a.gradings, a.gradings, 0, bits);
  if (!(f.compose(a.d) + a.d.compose(f)).is_zero())
    throw Error(ErrorCode::InvalidInput, "not a chain map");
  auto h = solve_homotopy(a.d, f.compose(a.iota) + a.iota.compose(f));
  if (!h) throw Error(ErrorCode::InvalidInput, "does not homotopy-commute with the involution");
  if (!LocalityTest(a)(bits)) throw Error(ErrorCode::InvalidInput, "not an isomorphism on the free tower");
  SelfLocalEquivalence out;
  out.f = std::move(f);
  out.homotopy = std::move(*h);
  out.kernel = kernel_basis(out.f);
  out.rank = a.size() - out.kernel.size();
  return out;
}

std::optional<bool> certify_maximal(const IotaComplex&, const AdmissibleSpace& space, const BitMatrix& f,
                                    size_t cap) {
  switch (find_killable(space, f, cap, nullptr)) {
    case KillStatus::none: return true;
    case KillStatus::found: return false;
    case KillStatus::too_large: return std::nullopt;
  }
  return std::nullopt;
}

SelfLocalEquivalence maximal_self_local_equivalence(const IotaComplex& a, const SearchOptions& opt) {
  AdmissibleSpace space = admissible_space(a);
  const int threads = search_threads(opt.threads);
  if (opt.mode == SearchMode::exhaustive && space.dim() <= opt.exhaustive_cap) {
    Candidate best = exhaustive_search(space, threads);
    SelfLocalEquivalence out = make_self_local_equivalence(a, best.f);
    out.certificate = true;
    out.exhaustive = true;
    return out;
  }
  const int restarts = std::max(opt.restarts, 1);
  std::vector<Candidate> results(static_cast<size_t>(restarts));
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (int r = 0; r < restarts; ++r) {
    BitMatrix f = greedy_descent(space, opt.seed + 0x9E3779B97F4A7C15ull * static_cast<uint64_t>(r), r > 0);
    results[static_cast<size_t>(r)] = evaluate(f, static_cast<uint64_t>(r));
  }
  Candidate best = std::move(results[0]);
  for (size_t i = 1; i < results.size(); ++i)
    if (results[i].better_than(best)) best = std::move(results[i]);
  // Certify; any killable image element found here continues the descent.
  bool certified = false;
  while (true) {
    BitMatrix g;
    KillStatus st = find_killable(space, best.f, opt.certificate_cap, &g);
    if (st == KillStatus::found) {
      best.f = g * best.f;
      continue;
    }
    certified = st == KillStatus::none;
    break;
  }
  if (!certified && opt.require_certificate)
    throw Error(ErrorCode::SearchCapExceeded, "image too large to certify maximality (admissible dimension " +
                                                  std::to_string(space.dim()) + ")");
  SelfLocalEquivalence out = make_self_local_equivalence(a, best.f);
  out.certificate = certified;
  return out;
}

SelfLocalEquivalence maximal_self_local_equivalence_serial(const IotaComplex& a, size_t cap) {
  AdmissibleSpace space = admissible_space(a);
  if (space.dim() > cap)
    throw Error(ErrorCode::SearchCapExceeded, "admissible dimension " + std::to_string(space.dim()) + " above cap");
  Candidate best;
  for (uint64_t mask = 0; mask < (uint64_t{1} << space.dim()); ++mask) {
    BitVec coeff(space.dim());
    for (size_t b = 0; b < space.dim(); ++b)
      if ((mask >> b) & 1u) coeff.set(b);
    Candidate c = evaluate(space.member(coeff), mask);
    if (c.better_than(best)) best = std::move(c);
  }
  SelfLocalEquivalence out = make_self_local_equivalence(a, best.f);
  out.certificate = true;
  out.exhaustive = true;
  return out;
}

ConnectedComplex connected_complex_from(const IotaComplex& a, const SelfLocalEquivalence& slf) {
  const size_t n = a.size();
  const auto& g = a.gradings;
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) { return g[x] > g[y]; });
  // Column echelon in descending grading: U-translates keep their support, so each parity
  // class reduces as plain F2 vectors.
  const auto classes = parity_classes(g);
  std::vector<size_t> class_of(n);
  for (size_t k = 0; k < classes.size(); ++k)
    for (auto i : classes[k]) class_of[i] = k;
  std::vector<Echelon> spans(classes.size(), Echelon(n));
  std::vector<size_t> pivots;
  for (auto j : order)
    if (spans[class_of[j]].insert(slf.f.bits().column(j))) pivots.push_back(j);
  ConnectedComplex out;
  out.source = slf;
  std::vector<std::string> names;
  std::vector<Grading> gr;
  for (auto j : pivots) {
    out.image_basis.push_back(Element{g[j], slf.f.bits().column(j)});
    names.push_back(a.names[j]);
    gr.push_back(g[j]);
  }
  IotaComplex c = IotaComplex::on_generators(std::move(names), std::move(gr));
  c.name = a.name + "_conn";
  MonomialMatrix basis = columns_matrix(g, out.image_basis);
  MonomialMatrix f_on_basis = slf.f.compose(basis);
  auto coords = [&](const MonomialMatrix& m, const Element& e) {
    auto x = solve_linear(m, e);
    if (!x) throw Error(ErrorCode::InvalidInput, "element outside the image of f");
    return *x;
  };
  for (size_t j = 0; j < out.image_basis.size(); ++j) {
    const Element& e = out.image_basis[j];
    Element de = coords(basis, apply(a.d, e));
    for (long i = de.support.first(); i >= 0; i = de.support.next(static_cast<size_t>(i) + 1))
      c.d.set(static_cast<size_t>(i), j);
    // ι_f = f ι (f|im)^{-1}
    Element pre = apply(basis, coords(f_on_basis, e));
    Element ie = coords(basis, apply(slf.f, apply(a.iota, pre)));
    for (long i = ie.support.first(); i >= 0; i = ie.support.next(static_cast<size_t>(i) + 1))
      c.iota.set(static_cast<size_t>(i), j);
  }
  require_valid(c);
  out.complex = std::move(c);
  return out;
}

ConnectedComplex connected_complex(const IotaComplex& a, const SearchOptions& opt) {
  return connected_complex_from(a, maximal_self_local_equivalence(a, opt));
}

GradedModule connected_homology_of(const ConnectedComplex& c) {
  return homology(c.complex.d).torsion().shifted(Rational(1));
}

GradedModule connected_homology(const IotaComplex& a, const SearchOptions& opt) {
  return connected_homology_of(connected_complex(a, opt));
}

int64_t omega_of(const GradedModule& connected) { return connected.max_tower_length(); }

int64_t omega(const IotaComplex& a, const SearchOptions& opt) { return omega_of(connected_homology(a, opt)); }

bool filtration_member(const IotaComplex& a, const std::optional<std::set<int64_t>>& lengths,
                       const SearchOptions& opt) {
  if (!lengths) return true;
  for (const auto& t : connected_homology(a, opt).towers)
    if (!lengths->count(t.length)) return false;
  return true;
}

std::string_view verdict_name(OrderVerdict v) {
  switch (v) {
    case OrderVerdict::d_negative_case: return "d_negative_case";
    case OrderVerdict::rank_one_case: return "rank_one_case";
    case OrderVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

OrderCertificate infinite_order_certificate(const IotaComplex& a, const SearchOptions& opt) {
  OrderCertificate out;
  const CorrectionTerms ct = correction_terms(a);
  const GradedModule red = homology(a.d).torsion();
  out.d_negative = ct.lower < ct.d;
  for (const auto& t : red.towers)
    if (!(t.top < ct.d)) out.d_negative = false;
  const GradedModule conn = connected_homology(a, opt);
  out.rank_one = conn.torsion_dimension() == 1;
  if (out.rank_one) {
    const Grading top = conn.towers[0].top;
    out.rank_one_dichotomy = (top == ct.d - Rational(1) && ct.upper == ct.d && ct.lower == ct.d - Rational(2)) ||
                             (top == ct.d && ct.lower == ct.d && ct.upper == ct.d + Rational(2));
  }
  out.verdict = out.rank_one ? OrderVerdict::rank_one_case
                : out.d_negative ? OrderVerdict::d_negative_case
                                 : OrderVerdict::inconclusive;
  return out;
}

}  // namespace iota

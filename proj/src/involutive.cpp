#include "iotaforge/involutive.hpp"

#include <algorithm>

namespace iota {

namespace {

Grading lowest_tower_bottom(const GradedModule& m, const Grading& fallback) {
  Grading low = fallback;
  for (const auto& t : m.towers) low = std::min(low, t.top - Rational(2 * (t.length - 1)));
  return low;
}

// Smallest B >= 0 with r - 2B strictly below `low`.
int64_t stable_power(const Grading& r, const Grading& low) {
  if (r < low) return 0;
  Rational gap = r - low;  // integer in a single coset
  return gap.num() / gap.den() / 2 + 1;
}

size_t span_rank(size_t ambient, const std::vector<const std::vector<BitVec>*>& parts, const Echelon* base) {
  Echelon e = base ? *base : Echelon(ambient);
  for (auto* p : parts)
    for (const auto& v : *p) e.insert(v);
  return e.dim();
}

std::vector<BitVec> apply_on_slices(const MonomialMatrix& m, const std::vector<BitVec>& vs,
                                    const std::vector<size_t>& src, const std::vector<size_t>& dst) {
  BitMatrix r = restrict_map(m, src, dst);
  std::vector<BitVec> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(r.apply(v));
  return out;
}

bool even_difference(const Grading& a, const Grading& b) { return (a - b).half_even().has_value(); }

void check_parity(const CorrectionTerms& c) {
  if (!even_difference(c.lower, c.d) || !even_difference(c.upper, c.d))
    throw Error(ErrorCode::ParityViolation, "correction terms (" + c.lower.str() + ", " + c.d.str() + ", " +
                                                c.upper.str() + ") are not congruent mod 2");
  if (c.lower > c.d || c.d > c.upper)
    throw Error(ErrorCode::ParityViolation, "correction terms (" + c.lower.str() + ", " + c.d.str() + ", " +
                                                c.upper.str() + ") are out of order");
}

}  // namespace

InvolutiveCone involutive_cone(const IotaComplex& a) {
  const size_t n = a.size();
  InvolutiveCone c;
  for (size_t i = 0; i < n; ++i) c.gradings.push_back(a.gradings[i] + Rational(1));
  for (size_t i = 0; i < n; ++i) c.gradings.push_back(a.gradings[i]);
  BitMatrix d(2 * n, 2 * n), q(2 * n, 2 * n);
  for (size_t r = 0; r < n; ++r)
    for (size_t col = 0; col < n; ++col) {
      if (a.d.get(r, col)) {
        d.set(r, col);
        d.set(n + r, n + col);
      }
      bool one_plus_iota = a.iota.get(r, col) != (r == col);
      if (one_plus_iota) d.set(n + r, col);
    }
  for (size_t i = 0; i < n; ++i) q.set(n + i, i);
  c.d = MonomialMatrix::from_bits(c.gradings, c.gradings, -1, std::move(d));
  c.q = MonomialMatrix::from_bits(c.gradings, c.gradings, -1, std::move(q));
  return c;
}

CorrectionTerms correction_terms(const IotaComplex& a) {
  CorrectionTerms out{0, d_invariant(a), 0};
  InvolutiveCone cone = involutive_cone(a);
  GradedModule hc = homology(cone.d);
  if (hc.free_parts.size() != 2)
    throw Error(ErrorCode::NotLocal, "involutive cone has " + std::to_string(hc.free_parts.size()) +
                                         " free summands, expected 2");
  const Grading top = *std::max_element(cone.gradings.begin(), cone.gradings.end());
  const Grading bottom = *std::min_element(cone.gradings.begin(), cone.gradings.end());
  const Grading low = lowest_tower_bottom(hc, bottom);
  GradedPieces pieces(cone.d);
  bool have_lower = false, have_upper = false;
  for (Grading r = top; !(have_lower && have_upper); r -= Rational(1)) {
    if (r < bottom - Rational(2)) throw Error(ErrorCode::NotLocal, "cone towers not found");
    const int64_t b_pow = stable_power(r, low);
    const Grading t = r - Rational(2 * b_pow);
    const auto& here = pieces.slice_at(t);
    std::vector<BitVec> w = pieces.u_power_of_cycles(r, b_pow);
    std::vector<BitVec> img_q = apply_on_slices(cone.q, pieces.cycles(t + Rational(1)),
                                                pieces.slice_at(t + Rational(1)), here);
    const Echelon& bd = pieces.boundaries(t);
    size_t rank_w = span_rank(here.size(), {&w}, &bd);
    size_t rank_i = span_rank(here.size(), {&img_q}, &bd);
    size_t rank_wi = span_rank(here.size(), {&w, &img_q}, &bd);
    size_t rank_b = bd.dim();
    // Some class at r survives U^B outside Im(Q).
    if (!have_lower && rank_wi > rank_i) {
      out.lower = r + Rational(1);
      have_lower = true;
    }
    // Some class at r has U^B x nonzero and inside Im(Q).
    if (!have_upper && rank_w + rank_i - rank_wi > rank_b) {
      out.upper = r + Rational(2);
      have_upper = true;
    }
  }
  check_parity(out);
  return out;
}

bool homology_single_parity(const IotaComplex& a) {
  GradedModule h = homology(a.d);
  std::vector<Grading> tops = h.free_parts;
  for (auto& t : h.towers) tops.push_back(t.top);
  for (auto& g : tops)
    if (!even_difference(g, tops.front())) return false;
  return true;
}

CorrectionTerms correction_terms_single_parity(const IotaComplex& a) {
  if (!homology_single_parity(a)) throw Error(ErrorCode::InvalidInput, "homology is not supported in one parity");
  CorrectionTerms out{0, d_invariant(a), 0};
  GradedModule h = homology(a.d);
  const Grading top = *std::max_element(a.gradings.begin(), a.gradings.end());
  const Grading bottom = *std::min_element(a.gradings.begin(), a.gradings.end());
  const Grading low = lowest_tower_bottom(h, bottom);
  MonomialMatrix one_plus_iota = a.iota + MonomialMatrix::identity(a.gradings);
  GradedPieces pieces(a.d);
  bool have_lower = false, have_upper = false;
  // Both answers are 2 + (a grading congruent to d).
  Grading r = top;
  if (!even_difference(r, out.d)) r -= Rational(1);
  for (; !(have_lower && have_upper); r -= Rational(2)) {
    if (r < bottom - Rational(2)) throw Error(ErrorCode::NotLocal, "homology tower not found");
    const int64_t b_pow = stable_power(r, low);
    const Grading t = r - Rational(2 * b_pow);
    const auto& src = pieces.slice_at(r);
    const auto& dst = pieces.slice_at(t);
    const Echelon& bd_r = pieces.boundaries(r);
    const Echelon& bd_t = pieces.boundaries(t);
    if (!have_lower) {
      // K_r = cycles z with (1+ι)z a boundary; test U^B K_r against boundaries.
      const auto& z = pieces.cycles(r);
      BitMatrix m = restrict_map(one_plus_iota, src, src);
      // Solve for combinations of cycles whose (1+ι)-image reduces to 0 modulo boundaries.
      BitMatrix sys(src.size(), z.size());
      for (size_t j = 0; j < z.size(); ++j) {
        BitVec img = m.apply(z[j]);
        bd_r.reduce(img);
        for (long i = img.first(); i >= 0; i = img.next(static_cast<size_t>(i) + 1)) sys.set(static_cast<size_t>(i), j);
      }
      for (const auto& comb : nullspace(sys)) {
        BitVec k(src.size());
        for (long j = comb.first(); j >= 0; j = comb.next(static_cast<size_t>(j) + 1)) k ^= z[static_cast<size_t>(j)];
        if (!bd_t.contains(move_slice(k, src, dst))) {
          out.lower = r + Rational(2);
          have_lower = true;
          break;
        }
      }
    }
    if (!have_upper) {
      Echelon e = bd_t;
      BitMatrix m = restrict_map(one_plus_iota, dst, dst);
      for (const auto& z : pieces.cycles(t)) e.insert(m.apply(z));
      for (const auto& v : pieces.u_power_of_cycles(r, b_pow))
        if (!e.contains(v)) {
          out.upper = r + Rational(2);
          have_upper = true;
          break;
        }
    }
  }
  check_parity(out);
  return out;
}

std::map<Grading, TriangleCount> exact_triangle_counts(const IotaComplex& a, const Grading& bottom) {
  std::map<Grading, TriangleCount> out;
  InvolutiveCone cone = involutive_cone(a);
  GradedPieces cp(cone.d), ap(a.d);
  MonomialMatrix one_plus_iota = a.iota + MonomialMatrix::identity(a.gradings);
  // rank of (1+ι)_* on H_s(A)
  auto induced_rank = [&](const Grading& s) -> int64_t {
    const auto& sl = ap.slice_at(s);
    BitMatrix m = restrict_map(one_plus_iota, sl, sl);
    Echelon e = ap.boundaries(s);
    for (const auto& z : ap.cycles(s)) e.insert(m.apply(z));
    return static_cast<int64_t>(e.dim()) - static_cast<int64_t>(ap.boundaries(s).dim());
  };
  const Grading top = *std::max_element(cone.gradings.begin(), cone.gradings.end());
  for (Grading r = top; r >= bottom; r -= Rational(1)) {
    TriangleCount c;
    c.cone = cp.homology_dim(r);
    const Grading s = r - Rational(1);
    c.kernel_plus_cokernel = (ap.homology_dim(s) - induced_rank(s)) + (ap.homology_dim(r) - induced_rank(r));
    out[r] = c;
  }
  return out;
}

}  // namespace iota

#include "iotaforge/surgery.hpp"

#include <algorithm>
#include <numeric>

namespace iota {

Grading lens_d(int64_t n, int64_t i) {
  if (n <= 0 || i < 0 || i >= n)
    throw Error(ErrorCode::BadResidue, "residue " + std::to_string(i) + " is not in [0, " + std::to_string(n) + ")");
  int64_t a = 2 * i - n;
  return Rational(a * a - n, 4 * n);
}

VSequence::VSequence(std::vector<int64_t> values) : v_(std::move(values)) {
  while (!v_.empty() && v_.back() == 0) v_.pop_back();
  for (size_t s = 0; s < v_.size(); ++s) {
    int64_t next = s + 1 < v_.size() ? v_[s + 1] : 0;
    if (v_[s] < 0) throw Error(ErrorCode::InvalidInput, "V_s must be non-negative");
    if (v_[s] < next || v_[s] - next > 1)
      throw Error(ErrorCode::InvalidInput, "V_" + std::to_string(s) + " - V_" + std::to_string(s + 1) +
                                               " must be 0 or 1");
  }
}

int64_t VSequence::v(int64_t s) const {
  if (s < 0) return v(-s) - s;
  return s < static_cast<int64_t>(v_.size()) ? v_[static_cast<size_t>(s)] : 0;
}

int64_t Staircase::genus() const {
  int64_t g = 0;
  for (size_t k = 0; k < steps.size(); k += 2) g += steps[k];
  return g;
}

void validate_staircase(const Staircase& st) {
  if (st.steps.size() % 2) throw Error(ErrorCode::InvalidStaircase, "staircase needs an even number of steps");
  for (auto s : st.steps)
    if (s <= 0) throw Error(ErrorCode::InvalidStaircase, "staircase steps must be positive");
  for (size_t k = 0; k < st.steps.size(); ++k)
    if (st.steps[k] != st.steps[st.steps.size() - 1 - k])
      throw Error(ErrorCode::InvalidStaircase, "staircase steps are not symmetric");
}

Staircase torus_staircase(int64_t p, int64_t q) {
  if (p <= 0 || q <= 0 || std::gcd(p, q) != 1)
    throw Error(ErrorCode::InvalidInput, "torus knot parameters must be coprime positive integers");
  if (p == 1 || q == 1) return {};
  if (p * q > 4096) throw Error(ErrorCode::InvalidInput, "torus knot too large");
  // Δ = (t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1)), coefficients indexed by degree.
  auto mul = [](const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
    std::vector<int64_t> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  auto binomial = [](int64_t k) {
    std::vector<int64_t> c(static_cast<size_t>(k) + 1, 0);
    c[0] = -1;
    c[static_cast<size_t>(k)] = 1;
    return c;
  };
  std::vector<int64_t> num = mul(binomial(p * q), binomial(1));
  std::vector<int64_t> den = mul(binomial(p), binomial(q));
  std::vector<int64_t> quo(num.size() - den.size() + 1, 0);
  for (size_t k = quo.size(); k-- > 0;) {
    int64_t c = num[k + den.size() - 1];  // leading coefficient of den is 1
    quo[k] = c;
    for (size_t j = 0; j < den.size(); ++j) num[k + j] -= c * den[j];
  }
  for (auto c : num)
    if (c != 0) throw Error(ErrorCode::InvalidInput, "Alexander polynomial division left a remainder");
  std::vector<int64_t> exps;
  int64_t sign = 1;
  for (size_t k = quo.size(); k-- > 0;) {
    if (quo[k] == 0) continue;
    if (quo[k] != sign) throw Error(ErrorCode::InvalidStaircase, "Alexander polynomial is not of staircase form");
    sign = -sign;
    exps.push_back(static_cast<int64_t>(k));
  }
  Staircase st;
  for (size_t k = 0; k + 1 < exps.size(); ++k) st.steps.push_back(exps[k] - exps[k + 1]);
  validate_staircase(st);
  return st;
}

namespace {

struct StaircaseModel {
  std::vector<int64_t> i, j, gr;
};

StaircaseModel staircase_corners(const Staircase& st) {
  StaircaseModel m;
  int64_t i = 0, j = st.genus();
  m.i.push_back(i);
  m.j.push_back(j);
  m.gr.push_back(0);
  for (size_t k = 0; k < st.steps.size(); ++k) {
    if (k % 2 == 0) i += st.steps[k];
    else j -= st.steps[k];
    m.i.push_back(i);
    m.j.push_back(j);
    m.gr.push_back(k % 2 == 0 ? 1 : 0);
  }
  return m;
}

// Free complex on U^{power_k} x_k with the staircase differential.
MonomialMatrix staircase_complex(const StaircaseModel& m, const std::vector<int64_t>& power) {
  std::vector<Grading> g;
  for (size_t k = 0; k < power.size(); ++k) g.push_back(Rational(m.gr[k] - 2 * power[k]));
  MonomialMatrix d(g, g, -1);
  for (size_t k = 1; k < power.size(); k += 2) {
    d.set(k - 1, k);
    d.set(k + 1, k);
  }
  return d;
}

}  // namespace

VSequence vs_from_staircase(const Staircase& st) {
  validate_staircase(st);
  StaircaseModel m = staircase_corners(st);
  MonomialMatrix b = staircase_complex(m, m.i);
  GradedModule hb = homology(b);
  if (hb.free_parts.size() != 1 || !hb.towers.empty())
    throw Error(ErrorCode::InvalidStaircase, "B model does not have homology F[U]");
  const Grading top_b = hb.free_parts[0];
  GradedPieces pb(b);
  std::vector<int64_t> values;
  for (int64_t s = 0; s < st.genus(); ++s) {
    std::vector<int64_t> power;
    for (size_t k = 0; k < m.i.size(); ++k) power.push_back(std::max(m.i[k], m.j[k] - s));
    MonomialMatrix a = staircase_complex(m, power);
    GradedModule ha = homology(a);
    if (ha.free_parts.size() != 1 || !ha.towers.empty())
      throw Error(ErrorCode::InvalidStaircase, "A_" + std::to_string(s) + " model does not have homology F[U]");
    const Grading top_a = ha.free_parts[0];
    auto gap = (top_b - top_a).half_even();
    if (!gap || *gap < 0) throw Error(ErrorCode::InvalidStaircase, "inclusion A_s -> B shifts grading oddly");
    // The generator of H(A_s) must land on a nonzero class: then v_s is U^gap on F[U].
    GradedPieces pa(a);
    const auto& from = pa.slice_at(top_a);
    const auto& to = pb.slice_at(top_a);
    bool nonzero = false;
    for (const auto& z : pa.cycles(top_a)) {
      if (pa.boundaries(top_a).contains(z)) continue;
      if (!pb.boundaries(top_a).contains(move_slice(z, from, to))) nonzero = true;
    }
    if (!nonzero) throw Error(ErrorCode::InvalidStaircase, "v_s vanishes on homology");
    values.push_back(*gap);
  }
  return VSequence(std::move(values));
}

MModule m_module(const VSequence& v, int64_t n) {
  if (n <= 0) throw Error(ErrorCode::InvalidInput, "framing must be negative (n > 0)");
  int64_t top_s = -1;
  while (v.v(n * (top_s + 1)) != 0) ++top_s;
  auto leaf = [&](int64_t s) { return Rational(-2 - n * s * (s + 1)); };
  auto merge = [&](int64_t s) { return Rational(-2 - n * s * (s + 1) - 2 * v.v(n * s)); };
  std::vector<Grading> h, m;
  std::vector<std::string> ids;
  if (top_s < 0) {
    h.push_back(Rational(-2));
    ids.push_back("x0");
  } else {
    for (int64_t s = top_s; s >= 0; --s) {
      h.push_back(leaf(s));
      ids.push_back("x" + std::to_string(s));
      if (s > 0) m.push_back(merge(s));
    }
    m.push_back(merge(0));
    for (int64_t s = 0; s <= top_s; ++s) {
      h.push_back(leaf(s));
      ids.push_back("x'" + std::to_string(s));
      if (s < top_s) m.push_back(merge(s + 1));
    }
  }
  MModule out;
  out.root = root_from_leaves(h, m, ids);
  out.module = hminus(out.root).module;
  return out;
}

GradedRoot shift_root(const GradedRoot& m, const Grading& by) {
  GradedRoot out = m;
  for (auto& g : out.gradings) g += by;
  return out;
}

int64_t default_truncation(const VSequence& v, int64_t n) { return n + v.last_nonzero() + 2; }

namespace {

struct ConeBuild {
  IotaComplex complex;
  size_t num_y = 0;
};

ConeBuild truncated_cone(const VSequence& v, int64_t n, int64_t big_n) {
  // Spin^c [0]: only indices t ≡ 0 mod n.
  const int64_t lo_b = -((big_n + n) / n) * n, hi = (big_n / n) * n;
  std::vector<int64_t> bt, yt;
  for (int64_t t = lo_b; t <= hi; t += n) bt.push_back(t);
  for (int64_t t = -hi; t <= hi; t += n) yt.push_back(t);
  std::map<int64_t, Grading> gb;
  gb[0] = Rational(-2) - lens_d(n, 0);
  for (int64_t t = n; t <= hi; t += n) gb[t] = gb[t - n] - Rational(2 * t);
  for (int64_t t = 0; t - n >= lo_b; t -= n) gb[t - n] = gb[t] + Rational(2 * t);
  std::vector<std::string> names;
  std::vector<Grading> g;
  std::map<int64_t, size_t> bidx, yidx;
  for (auto t : bt) {
    bidx[t] = names.size();
    names.push_back("b" + std::to_string(t));
    g.push_back(gb.at(t));
  }
  for (auto t : yt) {
    yidx[t] = names.size();
    names.push_back("y" + std::to_string(t));
    g.push_back(gb.at(t) - Rational(2 * v.v(t) - 1));
  }
  ConeBuild out;
  out.num_y = yt.size();
  IotaComplex c = IotaComplex::on_generators(std::move(names), std::move(g));
  c.name = "cone";
  for (auto t : yt) {
    c.d.set(bidx.at(t), yidx.at(t));
    c.d.set(bidx.at(t - n), yidx.at(t));
    c.iota.set(yidx.at(-t), yidx.at(t));
  }
  for (auto t : bt) c.iota.set(bidx.at(-t - n), bidx.at(t));
  out.complex = std::move(c);
  return out;
}

}  // namespace

SurgeryCone surgery_homology(const VSequence& v, int64_t n, int64_t truncation) {
  if (n <= 0) throw Error(ErrorCode::InvalidInput, "framing must be negative (n > 0)");
  const int64_t big_n = truncation > 0 ? truncation : default_truncation(v, n);
  auto at = [&](int64_t nn) {
    ConeBuild cb = truncated_cone(v, n, nn);
    if (cb.complex.d.bits().rank() != cb.num_y)
      throw Error(ErrorCode::InvalidInput, "the induced map on the A summands is not injective");
    return cb;
  };
  ConeBuild a = at(big_n), b = at(big_n + 1);
  GradedModule ha = homology(a.complex.d), hb = homology(b.complex.d);
  if (!(ha == hb))
    throw Error(ErrorCode::TruncationUnstable, "truncation " + std::to_string(big_n) + " gives " + ha.str() +
                                                   " but " + std::to_string(big_n + 1) + " gives " + hb.str());
  return SurgeryCone{std::move(a.complex), std::move(ha), big_n};
}

IotaComplex surgery_local_rep(int64_t v0) {
  if (v0 < 1) throw Error(ErrorCode::InvalidInput, "V_0 must be positive");
  IotaComplex c = IotaComplex::on_generators({"x1", "x2", "y"}, {Rational(-2), Rational(-2), Rational(-2 * v0 - 1)});
  c.name = "C" + std::to_string(v0);
  c.d.set(0, 2);
  c.d.set(1, 2);
  c.iota.set(1, 0);
  c.iota.set(0, 1);
  c.iota.set(2, 2);
  return c;
}

IotaComplex sum_surgeries_complex(const std::vector<int>& ns) {
  if (ns.empty()) throw Error(ErrorCode::InvalidInput, "need at least one surgery");
  for (size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) throw Error(ErrorCode::InvalidInput, "surgery parameters must be positive");
    if (i > 0 && ns[i] > ns[i - 1]) throw Error(ErrorCode::Unsorted, "parameters must be non-increasing");
  }
  const int64_t m = static_cast<int64_t>(ns.size());
  std::vector<int64_t> a(ns.size() + 1, 0);
  for (size_t i = 0; i < ns.size(); ++i) a[i + 1] = a[i] + ns[i];
  std::vector<std::string> names;
  std::vector<Grading> g;
  for (int64_t j = 1; j <= m; ++j) {
    Grading gr = j == 1 ? Rational(-2) : Rational(-2 * a[static_cast<size_t>(j - 1)] + j - 3);
    for (int k = 1; k <= 2; ++k) {
      names.push_back("x" + std::to_string(j) + "_" + std::to_string(k));
      g.push_back(gr);
    }
  }
  names.push_back("y");
  g.push_back(Rational(-2 * a.back() + m - 2));
  IotaComplex c = IotaComplex::on_generators(std::move(names), std::move(g));
  c.name = "C";
  for (auto n : ns) c.name += "_" + std::to_string(n);
  const size_t y = c.size() - 1;
  for (size_t j = 1; j <= ns.size(); ++j) {
    // Generators x^j are at 2(j-1), 2(j-1)+1; their boundary lands on x^{j-1}.
    size_t col_lo = 2 * (j - 1);
    c.iota.set(col_lo + 1, col_lo);
    c.iota.set(col_lo, col_lo + 1);
    if (j == 1) continue;
    for (size_t k = 0; k < 2; ++k) {
      c.d.set(2 * (j - 2), col_lo + k);
      c.d.set(2 * (j - 2) + 1, col_lo + k);
    }
  }
  c.d.set(2 * (ns.size() - 1), y);
  c.d.set(2 * (ns.size() - 1) + 1, y);
  c.iota.set(y, y);
  return c;
}

GradedModule sum_surgeries_connected(const std::vector<int>& ns) {
  for (size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) throw Error(ErrorCode::InvalidInput, "surgery parameters must be positive");
    if (i > 0 && ns[i] > ns[i - 1]) throw Error(ErrorCode::Unsorted, "parameters must be non-increasing");
  }
  GradedModule out;
  int64_t a = 0;
  for (size_t i = 0; i < ns.size(); ++i) {
    int64_t idx = static_cast<int64_t>(i) + 1;
    out.towers.push_back(Tower{Rational(idx - 2 - 2 * a), ns[i]});
    a += ns[i];
  }
  return out.canonicalize();
}

Grading dunder_lower_bound(int64_t v0, int64_t n) { return Rational(-2 * v0) - lens_d(n, 0); }

}  // namespace iota

#include "support.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "iotaforge/surgery.hpp"

namespace support {

using iota::BitMatrix;
using iota::BitVec;
using iota::Rational;

namespace {

Grading random_coset(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0: return Rational(1, 4);
    case 1: return Rational(-1, 2);
    default: return Rational(0);
  }
}

// Blocks: `free_count` free generators, the rest paired into towers. Then a random
// graded change of basis P with P^2 = 1 applied repeatedly: d -> P d P.
MonomialMatrix hidden_blocks(std::mt19937_64& rng, size_t n, int max_exp, size_t free_count) {
  Grading base = random_coset(rng);
  std::vector<Grading> g;
  std::vector<std::pair<size_t, size_t>> edges;
  size_t free_left = free_count;
  while (g.size() < n) {
    int top = -2 * static_cast<int>(rng() % 4) - static_cast<int>(rng() % 2);
    if (free_left > 0 || g.size() + 1 == n) {
      g.push_back(base + Rational(top));
      if (free_left > 0) --free_left;
      continue;
    }
    int k = static_cast<int>(rng() % static_cast<uint64_t>(max_exp + 1));
    g.push_back(base + Rational(top));
    g.push_back(base + Rational(top - 2 * k + 1));
    edges.emplace_back(g.size() - 2, g.size() - 1);
  }
  BitMatrix bits(g.size(), g.size());
  for (auto [x, y] : edges) bits.set(x, y);
  for (int step = 0; step < 3 * static_cast<int>(g.size()); ++step) {
    size_t i = rng() % g.size(), j = rng() % g.size();
    if (i == j || !iota::forced_exponent(g[j], g[i], 0)) continue;
    // new x_i = x_i + U^k x_j
    BitMatrix p = BitMatrix::identity(g.size());
    p.set(j, i);
    bits = p * bits * p;
  }
  return MonomialMatrix::from_bits(g, g, -1, std::move(bits));
}

}  // namespace

MonomialMatrix random_map(std::mt19937_64& rng, size_t rows, size_t cols) {
  Grading base = random_coset(rng);
  std::vector<Grading> rg, cg;
  for (size_t i = 0; i < rows; ++i) rg.push_back(base - Rational(2 * static_cast<int64_t>(rng() % 3)));
  for (size_t i = 0; i < cols; ++i) cg.push_back(base - Rational(2 * static_cast<int64_t>(rng() % 3)));
  MonomialMatrix m(rg, cg, 0);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c)
      if (m.admissible(r, c) && rng() % 2) m.set(r, c);
  return m;
}

MonomialMatrix random_differential(std::mt19937_64& rng, size_t n, int max_exp) {
  size_t free_count = rng() % (n + 1);
  return hidden_blocks(rng, n, max_exp, free_count);
}

int64_t safe_truncation(const MonomialMatrix& d) {
  if (d.rows() == 0) return 1;
  const auto& g = d.row_gradings();
  Grading hi = *std::max_element(g.begin(), g.end()), lo = *std::min_element(g.begin(), g.end());
  Rational span = hi - lo;
  return span.num() / span.den() + 3;
}

IotaComplex random_iota_complex(std::mt19937_64& rng, size_t max_gens) {
  while (true) {
    size_t n = 1 + rng() % max_gens;
    MonomialMatrix d = hidden_blocks(rng, n, 2, 1);
    const auto& g = d.row_gradings();
    // Chain maps: unknown admissible degree-0 entries with ι d + d ι = 0.
    std::vector<std::pair<size_t, size_t>> vars;
    for (size_t r = 0; r < n; ++r)
      for (size_t c = 0; c < n; ++c)
        if (iota::forced_exponent(g[r], g[c], 0)) vars.emplace_back(r, c);
    std::vector<std::pair<size_t, size_t>> eqs;
    for (size_t r = 0; r < n; ++r)
      for (size_t c = 0; c < n; ++c)
        if (iota::forced_exponent(g[r], g[c], -1)) eqs.emplace_back(r, c);
    BitMatrix sys(eqs.size(), vars.size());
    for (size_t v = 0; v < vars.size(); ++v) {
      MonomialMatrix e(g, g, 0);
      e.set(vars[v].first, vars[v].second);
      MonomialMatrix comm = e.compose(d) + d.compose(e);
      for (size_t q = 0; q < eqs.size(); ++q)
        if (comm.get(eqs[q].first, eqs[q].second)) sys.set(q, v);
    }
    auto basis = iota::nullspace(sys);
    for (int attempt = 0; attempt < 20; ++attempt) {
      BitVec pick(vars.size());
      for (auto& b : basis)
        if (rng() % 2) pick ^= b;
      MonomialMatrix io(g, g, 0);
      for (size_t v = 0; v < vars.size(); ++v)
        if (pick.get(v)) io.set(vars[v].first, vars[v].second);
      MonomialMatrix delta = io.compose(io) + MonomialMatrix::identity(g);
      if (!iota::solve_homotopy(d, delta)) continue;
      std::vector<std::string> names;
      for (size_t i = 0; i < n; ++i) names.push_back("g" + std::to_string(i));
      IotaComplex c = IotaComplex::on_generators(std::move(names), g);
      c.name = "random";
      c.d = d;
      c.iota = io;
      if (!iota::validate(c).ok) continue;
      return c;
    }
  }
}

std::vector<IotaComplex> small_complex_family() {
  struct Shape {
    int top, len;
  };
  std::vector<Shape> shapes;
  for (int top = 0; top >= -4; --top)
    for (int len = 1; len <= 2; ++len) shapes.push_back({top, len});
  std::vector<std::vector<Shape>> layouts{{}};
  for (size_t a = 0; a < shapes.size(); ++a) {
    layouts.push_back({shapes[a]});
    for (size_t b = a; b < shapes.size(); ++b) layouts.push_back({shapes[a], shapes[b]});
  }
  std::vector<IotaComplex> out;
  for (const auto& layout : layouts) {
    std::vector<Grading> g{Rational(-2)};
    std::vector<std::string> names{"z"};
    for (size_t k = 0; k < layout.size(); ++k) {
      g.push_back(Rational(layout[k].top));
      g.push_back(Rational(layout[k].top - 2 * layout[k].len + 1));
      names.push_back("x" + std::to_string(k));
      names.push_back("y" + std::to_string(k));
    }
    const size_t n = g.size();
    MonomialMatrix d(g, g, -1);
    for (size_t k = 0; k < layout.size(); ++k) d.set(1 + 2 * k, 2 + 2 * k);
    // All degree-0 chain maps, as the nullspace of ι ↦ ιd + dι.
    std::vector<std::pair<size_t, size_t>> vars;
    for (size_t r = 0; r < n; ++r)
      for (size_t c = 0; c < n; ++c)
        if (iota::forced_exponent(g[r], g[c], 0)) vars.emplace_back(r, c);
    BitMatrix sys(n * n, vars.size());
    for (size_t v = 0; v < vars.size(); ++v) {
      MonomialMatrix e(g, g, 0);
      e.set(vars[v].first, vars[v].second);
      MonomialMatrix comm = e.compose(d) + d.compose(e);
      for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c)
          if (comm.get(r, c)) sys.set(r * n + c, v);
    }
    auto basis = iota::nullspace(sys);
    if (basis.size() > 12) continue;
    for (uint64_t mask = 0; mask < (uint64_t{1} << basis.size()); ++mask) {
      BitVec pick(vars.size());
      for (size_t b = 0; b < basis.size(); ++b)
        if ((mask >> b) & 1u) pick ^= basis[b];
      MonomialMatrix io(g, g, 0);
      for (size_t v = 0; v < vars.size(); ++v)
        if (pick.get(v)) io.set(vars[v].first, vars[v].second);
      IotaComplex c = IotaComplex::on_generators(names, g);
      c.name = "family" + std::to_string(out.size());
      c.d = d;
      c.iota = io;
      if (iota::validate(c).ok) out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<iota::GradedRoot> symmetric_root_family() {
  const int heights[3] = {-2, -4, -6};
  std::vector<iota::GradedRoot> out;
  for (size_t l = 1; l <= 6; ++l) {
    const size_t free_h = (l + 1) / 2, free_m = l / 2;
    size_t nh = 1, nm = 1;
    for (size_t i = 0; i < free_h; ++i) nh *= 3;
    for (size_t i = 0; i < free_m; ++i) nm *= 3;
    for (size_t a = 0; a < nh; ++a)
      for (size_t b = 0; b < nm; ++b) {
        std::vector<Grading> h(l), m(l - 1);
        size_t x = a;
        for (size_t i = 0; i < free_h; ++i, x /= 3) h[i] = h[l - 1 - i] = Rational(heights[x % 3]);
        x = b;
        for (size_t i = 0; i < free_m; ++i, x /= 3) {
          int depth = 1 + static_cast<int>(x % 3);
          m[i] = m[l - 2 - i] = std::min(h[i], h[i + 1]) - Rational(2 * depth);
        }
        out.push_back(iota::root_from_leaves(h, m));
      }
  }
  return out;
}

iota::GradedModule root_module_oracle(const iota::GradedRoot& m) {
  const auto shape = iota::root_shape(m);
  // Vertices per level, with the stem continued two levels below everything of interest.
  Grading low = m.gradings[m.stem_bottom];
  Grading top = *std::max_element(m.gradings.begin(), m.gradings.end());
  auto down = [&](long v) -> long { return v < 0 ? v - 1 : shape.lower[static_cast<size_t>(v)] >= 0 ? shape.lower[static_cast<size_t>(v)] : -1; };
  // Stem vertices below the bottom are -1, -2, ... (one per level).
  auto level_of = [&](long v) { return v >= 0 ? m.gradings[static_cast<size_t>(v)] : low + Rational(2 * v); };
  auto level = [&](const Grading& g) {
    std::vector<long> vs;
    if (g < low) {
      auto k = (g - low).half_even();
      if (k) vs.push_back(*k);
      return vs;
    }
    for (size_t v = 0; v < m.size(); ++v)
      if (m.gradings[v] == g) vs.push_back(static_cast<long>(v));
    return vs;
  };
  // rank of U^j from level a: number of distinct images.
  auto rank = [&](const Grading& a, int64_t j) -> int64_t {
    std::set<long> img;
    for (long v : level(a)) {
      long w = v;
      for (int64_t s = 0; s < j; ++s) w = down(w);
      img.insert(w);
    }
    (void)level_of;
    return static_cast<int64_t>(img.size());
  };
  iota::GradedModule out;
  const Grading floor = low - Rational(4);
  for (Grading t = top; t >= floor; t -= Rational(2))
    for (int64_t len = 1; t - Rational(2 * (len - 1)) >= floor; ++len) {
      // Intervals born at t and dying exactly after len steps.
      auto r = [&](const Grading& a, int64_t j) { return a > top ? int64_t{0} : rank(a, j); };
      int64_t mult = r(t, len - 1) - r(t + Rational(2), len) - r(t, len) + r(t + Rational(2), len + 1);
      for (int64_t k = 0; k < mult; ++k) out.towers.push_back(iota::Tower{t, len});
    }
  // The stem survives every power: one free part at the top of its branch.
  for (Grading t = top; t >= floor; t -= Rational(2)) {
    int64_t big = 1000;
    int64_t alive = rank(t, big) - (t + Rational(2) > top ? 0 : rank(t + Rational(2), big + 1));
    if (alive > 0) out.free_parts.push_back(t);
  }
  return out.canonicalize();
}

IotaComplex sum_complex(const std::vector<int>& ns) { return iota::sum_surgeries_complex(ns); }

}  // namespace support

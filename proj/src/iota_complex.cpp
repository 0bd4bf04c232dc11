#include "iotaforge/iota_complex.hpp"

#include <algorithm>
#include <set>

namespace iota {

IotaComplex IotaComplex::on_generators(std::vector<std::string> names, std::vector<Grading> gradings) {
  IotaComplex c;
  c.names = std::move(names);
  c.gradings = std::move(gradings);
  c.d = MonomialMatrix(c.gradings, c.gradings, -1);
  c.iota = MonomialMatrix(c.gradings, c.gradings, 0);
  return c;
}

std::optional<MonomialMatrix> solve_homotopy(const MonomialMatrix& d, const MonomialMatrix& delta) {
  const auto& gr = d.row_gradings();
  const size_t n = gr.size();
  if (delta.is_zero()) return MonomialMatrix(gr, gr, 1);
  // Unknowns: admissible entries of H.
  std::vector<std::pair<size_t, size_t>> vars;
  std::vector<std::vector<long>> var_at(n, std::vector<long>(n, -1));
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c)
      if (forced_exponent(gr[r], gr[c], 1)) {
        var_at[r][c] = static_cast<long>(vars.size());
        vars.emplace_back(r, c);
      }
  // Equations: each admissible degree-0 entry (r, c) of dH + Hd equals delta(r, c).
  std::vector<std::pair<size_t, size_t>> eqs;
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c)
      if (forced_exponent(gr[r], gr[c], 0)) eqs.emplace_back(r, c);
  BitMatrix sys(eqs.size(), vars.size());
  BitVec rhs(eqs.size());
  const BitMatrix& db = d.bits();
  BitMatrix dt = db.transpose();
  for (size_t e = 0; e < eqs.size(); ++e) {
    auto [r, c] = eqs[e];
    // (dH)(r,c) = sum_m d(r,m) H(m,c)
    for (long m = db.row(r).first(); m >= 0; m = db.row(r).next(static_cast<size_t>(m) + 1)) {
      long v = var_at[static_cast<size_t>(m)][c];
      if (v >= 0) sys.flip(e, static_cast<size_t>(v));
    }
    // (Hd)(r,c) = sum_m H(r,m) d(m,c)
    for (long m = dt.row(c).first(); m >= 0; m = dt.row(c).next(static_cast<size_t>(m) + 1)) {
      long v = var_at[r][static_cast<size_t>(m)];
      if (v >= 0) sys.flip(e, static_cast<size_t>(v));
    }
    if (delta.get(r, c)) rhs.set(e);
  }
  auto x = solve(sys, rhs);
  if (!x) return std::nullopt;
  MonomialMatrix h(gr, gr, 1);
  for (size_t v = 0; v < vars.size(); ++v)
    if (x->get(v)) h.set(vars[v].first, vars[v].second);
  return h;
}

namespace {

std::string entry_witness(const IotaComplex& c, const MonomialMatrix& m) {
  auto p = m.first_nonzero();
  if (!p) return "";
  return "entry (" + c.names[p->first] + ", " + c.names[p->second] + ")";
}

}  // namespace

ValidationReport validate(const IotaComplex& c) {
  ValidationReport rep;
  auto fail = [&](std::string inv, std::string wit) {
    rep.ok = false;
    rep.issues.push_back({std::move(inv), std::move(wit)});
  };
  const size_t n = c.size();
  if (c.names.size() != n) {
    fail("generator_names", "names and gradings differ in length");
    return rep;
  }
  std::set<std::string> seen;
  for (auto& s : c.names)
    if (!seen.insert(s).second) fail("unique_ids", "duplicate generator id " + s);
  try {
    check_single_coset(c.gradings);
  } catch (const Error& e) {
    fail("single_coset", e.what());
    return rep;
  }
  if (c.d.row_gradings() != c.gradings || c.d.col_gradings() != c.gradings || c.d.degree() != -1) {
    fail("d_shape", "differential must be a degree -1 map on the generators");
    return rep;
  }
  if (c.iota.row_gradings() != c.gradings || c.iota.col_gradings() != c.gradings || c.iota.degree() != 0) {
    fail("iota_shape", "iota must be a degree 0 map on the generators");
    return rep;
  }
  MonomialMatrix dd = c.d.compose(c.d);
  if (!dd.is_zero()) {
    fail("d_squared_zero", "d∘d has nonzero " + entry_witness(c, dd));
    return rep;
  }
  MonomialMatrix comm = c.iota.compose(c.d) + c.d.compose(c.iota);
  if (!comm.is_zero()) fail("iota_chain_map", "iota∘d + d∘iota has nonzero " + entry_witness(c, comm));
  MonomialMatrix delta = c.iota.compose(c.iota) + MonomialMatrix::identity(c.gradings);
  if (c.h_sq) {
    const auto& h = *c.h_sq;
    if (h.row_gradings() != c.gradings || h.col_gradings() != c.gradings || h.degree() != 1) {
      fail("iota_squared_homotopy", "stored homotopy has the wrong shape");
    } else {
      MonomialMatrix rest = delta + c.d.compose(h) + h.compose(c.d);
      if (!rest.is_zero()) fail("iota_squared_homotopy", "stored H misses " + entry_witness(c, rest));
    }
  } else if (!solve_homotopy(c.d, delta)) {
    fail("iota_squared_homotopy", "no H with iota^2 + id = dH + Hd");
  }
  GradedModule h = homology(c.d);
  if (h.free_parts.size() != 1)
    fail("local", "localized homology has rank " + std::to_string(h.free_parts.size()) + ", expected 1");
  return rep;
}

void require_valid(const IotaComplex& c) {
  auto rep = validate(c);
  if (rep.ok) return;
  const auto& first = rep.issues.front();
  ErrorCode code = first.invariant == "local" ? ErrorCode::NotLocal : ErrorCode::InvalidInput;
  if (first.invariant == "single_coset") code = ErrorCode::MixedCoset;
  if (first.invariant == "d_squared_zero") code = ErrorCode::NotAComplex;
  throw Error(code, first.invariant + ": " + first.witness);
}

IotaComplex identity_complex() {
  IotaComplex c = IotaComplex::on_generators({"1"}, {Grading(-2)});
  c.name = "identity";
  c.iota.set(0, 0);
  return c;
}

IotaComplex tensor(const IotaComplex& a, const IotaComplex& b) {
  const size_t na = a.size(), nb = b.size();
  std::vector<std::string> names;
  std::vector<Grading> gr;
  for (size_t i = 0; i < na; ++i)
    for (size_t j = 0; j < nb; ++j) {
      names.push_back(a.names[i] + "⊗" + b.names[j]);
      gr.push_back(a.gradings[i] + b.gradings[j] + Rational(2));
    }
  IotaComplex t = IotaComplex::on_generators(std::move(names), std::move(gr));
  t.name = a.name + "⊗" + b.name;
  auto idx = [nb](size_t i, size_t j) { return i * nb + j; };
  for (size_t i = 0; i < na; ++i)
    for (size_t j = 0; j < nb; ++j) {
      size_t col = idx(i, j);
      // d(a⊗b) = da⊗b + a⊗db
      for (size_t r = 0; r < na; ++r)
        if (a.d.get(r, i)) t.d.set(idx(r, j), col, !t.d.get(idx(r, j), col));
      for (size_t r = 0; r < nb; ++r)
        if (b.d.get(r, j)) t.d.set(idx(i, r), col, !t.d.get(idx(i, r), col));
      for (size_t r = 0; r < na; ++r) {
        if (!a.iota.get(r, i)) continue;
        for (size_t s = 0; s < nb; ++s)
          if (b.iota.get(s, j)) t.iota.set(idx(r, s), col, !t.iota.get(idx(r, s), col));
      }
    }
  return t;
}

IotaComplex dual(const IotaComplex& a) {
  std::vector<std::string> names;
  std::vector<Grading> gr;
  for (size_t i = 0; i < a.size(); ++i) {
    const std::string& s = a.names[i];
    names.push_back(s.size() > 1 && s.back() == '*' ? s.substr(0, s.size() - 1) : s + "*");
    gr.push_back(-a.gradings[i] - Rational(4));
  }
  IotaComplex t = IotaComplex::on_generators(std::move(names), std::move(gr));
  t.name = a.name.size() > 1 && a.name.back() == '*' ? a.name.substr(0, a.name.size() - 1) : a.name + "*";
  t.d = MonomialMatrix::from_bits(t.gradings, t.gradings, -1, a.d.bits().transpose());
  t.iota = MonomialMatrix::from_bits(t.gradings, t.gradings, 0, a.iota.bits().transpose());
  return t;
}

IotaComplex reduce(const IotaComplex& a) {
  IotaComplex c = a;
  c.h_sq.reset();
  while (true) {
    const size_t n = c.size();
    // Unit entries d(x) ∋ y: pick x by (grading descending, index), then lowest y.
    long bx = -1, by = -1;
    BitMatrix dt = c.d.bits().transpose();
    for (size_t x = 0; x < n; ++x) {
      if (bx >= 0 && !(c.gradings[x] > c.gradings[static_cast<size_t>(bx)])) continue;
      for (long y = dt.row(x).first(); y >= 0; y = dt.row(x).next(static_cast<size_t>(y) + 1)) {
        if (*c.d.exponent(static_cast<size_t>(y), x) == 0) {
          bx = static_cast<long>(x);
          by = y;
          break;
        }
      }
    }
    if (bx < 0) break;
    const size_t x = static_cast<size_t>(bx), y = static_cast<size_t>(by);
    std::vector<size_t> keep;
    for (size_t i = 0; i < n; ++i)
      if (i != x && i != y) keep.push_back(i);
    const size_t m = keep.size();
    std::vector<Grading> kg;
    std::vector<std::string> kn;
    for (auto i : keep) {
      kg.push_back(c.gradings[i]);
      kn.push_back(c.names[i]);
    }
    // inclusion i(z) = z + [y-coefficient of dz] x ; projection p(w) = w_R + [y-coefficient of w] (dx)_R
    BitMatrix inc(n, m), proj(m, n);
    for (size_t j = 0; j < m; ++j) {
      inc.set(keep[j], j);
      if (c.d.get(y, keep[j])) inc.set(x, j);
      proj.set(j, keep[j]);
      if (c.d.get(keep[j], x)) proj.set(j, y);
    }
    BitMatrix nd = proj * c.d.bits() * inc;
    BitMatrix ni = proj * c.iota.bits() * inc;
    IotaComplex r = IotaComplex::on_generators(std::move(kn), std::move(kg));
    r.name = c.name;
    r.d = MonomialMatrix::from_bits(r.gradings, r.gradings, -1, std::move(nd));
    r.iota = MonomialMatrix::from_bits(r.gradings, r.gradings, 0, std::move(ni));
    c = std::move(r);
  }
  return c;
}

Grading d_invariant(const IotaComplex& a) {
  GradedModule h = homology(a.d);
  if (h.free_parts.size() != 1)
    throw Error(ErrorCode::NotLocal, "homology has " + std::to_string(h.free_parts.size()) + " free summands");
  return h.free_parts[0] + Rational(2);
}

MonomialMatrix direct_sum(const MonomialMatrix& a, const MonomialMatrix& b) {
  std::vector<Grading> rg = a.row_gradings(), cg = a.col_gradings();
  rg.insert(rg.end(), b.row_gradings().begin(), b.row_gradings().end());
  cg.insert(cg.end(), b.col_gradings().begin(), b.col_gradings().end());
  if (a.degree() != b.degree()) throw Error(ErrorCode::InvalidInput, "direct sum of maps with different degrees");
  BitMatrix bits(rg.size(), cg.size());
  for (size_t r = 0; r < a.rows(); ++r)
    for (size_t c = 0; c < a.cols(); ++c)
      if (a.get(r, c)) bits.set(r, c);
  for (size_t r = 0; r < b.rows(); ++r)
    for (size_t c = 0; c < b.cols(); ++c)
      if (b.get(r, c)) bits.set(a.rows() + r, a.cols() + c);
  return MonomialMatrix::from_bits(std::move(rg), std::move(cg), a.degree(), std::move(bits));
}

}  // namespace iota

#include "iotaforge/graded_roots.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace iota {

namespace {

[[noreturn]] void bad_root(const std::string& why) { throw Error(ErrorCode::InvalidRoot, why); }

bool even_gap(const Grading& a, const Grading& b) { return (a - b).half_even().has_value(); }

}  // namespace

void validate_root(const GradedRoot& m) {
  const size_t n = m.size();
  if (n == 0) bad_root("root has no vertices");
  if (m.ids.size() != n || m.involution.size() != n) bad_root("ids, gradings and involution differ in length");
  if (m.stem_bottom >= n) bad_root("stem bottom out of range");
  std::set<std::string> seen;
  for (auto& id : m.ids)
    if (!seen.insert(id).second) bad_root("duplicate vertex id " + id);
  try {
    check_single_coset(m.gradings);
  } catch (const Error& e) {
    bad_root(e.what());
  }
  std::set<std::pair<size_t, size_t>> edge_set;
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> lower_count(n, 0);
  for (auto [a, b] : m.edges) {
    if (a >= n || b >= n || a == b) bad_root("edge with invalid endpoints");
    Rational gap = m.gradings[a] - m.gradings[b];
    if (gap != Rational(2) && gap != Rational(-2))
      bad_root("edge (" + m.ids[a] + ", " + m.ids[b] + ") does not change the grading by 2");
    if (!edge_set.insert(std::minmax(a, b)).second) bad_root("duplicate edge");
    size_t hi = gap > Rational(0) ? a : b;
    ++lower_count[hi];
    size_t ra = find(a), rb = find(b);
    if (ra == rb) bad_root("edges contain a cycle");
    parent[ra] = rb;
  }
  if (m.edges.size() + 1 != n) bad_root("root is not connected");
  for (size_t v = 0; v < n; ++v) {
    if (v == m.stem_bottom) {
      if (lower_count[v] != 0) bad_root("stem bottom has a lower neighbour");
    } else {
      if (lower_count[v] != 1) bad_root("vertex " + m.ids[v] + " needs exactly one lower neighbour");
      if (!(m.gradings[v] > m.gradings[m.stem_bottom])) bad_root("stem bottom is not the unique minimum");
    }
  }
  std::map<Grading, int> fixed_at;
  for (size_t v = 0; v < n; ++v) {
    size_t w = m.involution[v];
    if (w >= n || m.involution[w] != v) bad_root("J0 is not an involution");
    if (m.gradings[w] != m.gradings[v]) bad_root("J0 does not preserve gradings");
    if (w == v && ++fixed_at[m.gradings[v]] > 1) bad_root("J0 fixes two vertices in grading " + m.gradings[v].str());
  }
  for (auto [a, b] : m.edges)
    if (!edge_set.count(std::minmax(m.involution[a], m.involution[b]))) bad_root("J0 does not preserve edges");
  RootShape s = root_shape(m);
  const size_t l = s.leaves.size();
  std::vector<size_t> first(n, l), last(n, 0), count(n, 0);
  for (size_t i = 0; i < l; ++i)
    for (long v = static_cast<long>(s.leaves[i]); v >= 0; v = s.lower[static_cast<size_t>(v)]) {
      size_t u = static_cast<size_t>(v);
      first[u] = std::min(first[u], i);
      last[u] = std::max(last[u], i);
      ++count[u];
    }
  for (size_t v = 0; v < n; ++v)
    if (count[v] && last[v] - first[v] + 1 != count[v])
      bad_root("leaves above " + m.ids[v] + " are not consecutive in the vertex order");
  for (size_t i = 0; i < l; ++i)
    if (m.involution[s.leaves[i]] != s.leaves[l - 1 - i]) bad_root("J0 does not reverse the leaf order");
}

RootShape root_shape(const GradedRoot& m) {
  const size_t n = m.size();
  RootShape s;
  s.lower.assign(n, -1);
  std::vector<char> has_upper(n, 0);
  for (auto [a, b] : m.edges) {
    auto [lo, hi] = m.gradings[a] < m.gradings[b] ? std::pair{a, b} : std::pair{b, a};
    s.lower[hi] = static_cast<long>(lo);
    has_upper[lo] = 1;
  }
  for (size_t v = 0; v < n; ++v)
    if (!has_upper[v]) s.leaves.push_back(v);
  for (size_t i = 0; i + 1 < s.leaves.size(); ++i) {
    std::set<size_t> path;
    for (long v = static_cast<long>(s.leaves[i]); v >= 0; v = s.lower[static_cast<size_t>(v)])
      path.insert(static_cast<size_t>(v));
    long v = static_cast<long>(s.leaves[i + 1]);
    while (v >= 0 && !path.count(static_cast<size_t>(v))) v = s.lower[static_cast<size_t>(v)];
    if (v < 0) bad_root("leaves do not meet");
    s.merges.push_back(m.gradings[static_cast<size_t>(v)]);
  }
  return s;
}

GradedRoot root_from_leaves(const std::vector<Grading>& h, const std::vector<Grading>& merges,
                            const std::vector<std::string>& leaf_ids) {
  const size_t l = h.size();
  if (l == 0) bad_root("no leaves");
  if (merges.size() + 1 != l) bad_root("need one merge grading per adjacent leaf pair");
  if (!leaf_ids.empty() && leaf_ids.size() != l) bad_root("leaf ids do not match the leaves");
  for (size_t i = 0; i < l; ++i) {
    if (h[i] != h[l - 1 - i]) bad_root("leaf gradings are not a palindrome");
    if (!even_gap(h[i], h[0])) bad_root("leaf gradings differ by odd or fractional steps");
  }
  for (size_t i = 0; i + 1 < l; ++i) {
    if (merges[i] != merges[l - 2 - i]) bad_root("merge gradings are not a palindrome");
    if (!even_gap(merges[i], h[0])) bad_root("merge grading in the wrong parity");
    if (!(h[i] > merges[i]) || !(h[i + 1] > merges[i])) bad_root("a merge is not below both leaves");
  }
  const Grading top = *std::max_element(h.begin(), h.end());
  const Grading bottom = l == 1 ? h[0] : *std::min_element(merges.begin(), merges.end());

  struct Run {
    Grading g;
    size_t lo, hi;
  };
  std::vector<Run> leaves_runs, inner_runs;
  for (size_t i = 0; i < l; ++i) leaves_runs.push_back({h[i], i, i});
  for (Grading g = top; g >= bottom; g -= Rational(2)) {
    size_t i = 0;
    while (i < l) {
      if (h[i] < g) {
        ++i;
        continue;
      }
      size_t j = i;
      while (j + 1 < l && merges[j] >= g) ++j;
      if (!(i == j && h[i] == g)) inner_runs.push_back({g, i, j});
      i = j + 1;
    }
  }
  GradedRoot out;
  std::map<std::pair<Grading, size_t>, size_t> index;  // (grading, lowest leaf) -> vertex
  auto add = [&](const Run& r, std::string id) {
    index[{r.g, r.lo}] = out.size();
    out.ids.push_back(std::move(id));
    out.gradings.push_back(r.g);
  };
  for (size_t i = 0; i < l; ++i) add(leaves_runs[i], leaf_ids.empty() ? "l" + std::to_string(i + 1) : leaf_ids[i]);
  for (size_t k = 0; k < inner_runs.size(); ++k) add(inner_runs[k], "n" + std::to_string(k + 1));
  std::vector<Run> all = leaves_runs;
  all.insert(all.end(), inner_runs.begin(), inner_runs.end());
  // Lowest leaf of the run one level down that contains `lo`.
  auto run_below = [&](const Grading& g, size_t lo) -> size_t {
    size_t a = lo;
    while (a > 0 && merges[a - 1] >= g) --a;
    return index.at({g, a});
  };
  out.involution.resize(all.size());
  for (size_t v = 0; v < all.size(); ++v) {
    const Run& r = all[v];
    if (r.g > bottom) out.edges.emplace_back(v, run_below(r.g - Rational(2), r.lo));
    out.involution[v] = index.at({r.g, l - 1 - r.hi});
  }
  out.stem_bottom = index.at({bottom, 0});
  validate_root(out);
  return out;
}

void validate_monotone(const MonotoneRoot& m) {
  const size_t n = m.h.size();
  if (n == 0 || m.r.size() != n) bad_root("monotone root needs matching nonempty h and r lists");
  for (size_t i = 0; i < n; ++i)
    if (!even_gap(m.h[i], m.h[0]) || !even_gap(m.r[i], m.h[0])) bad_root("monotone parameters differ by odd steps");
  for (size_t i = 0; i + 1 < n; ++i) {
    if (!(m.h[i] > m.h[i + 1])) bad_root("h must decrease strictly");
    if (!(m.r[i] < m.r[i + 1])) bad_root("r must increase strictly");
  }
  if (m.h.back() < m.r.back()) bad_root("h_n must be at least r_n");
}

GradedRoot monotone_root(const MonotoneRoot& m) {
  validate_monotone(m);
  const size_t n = m.h.size();
  const bool middle = m.h.back() == m.r.back();
  std::vector<Grading> h, merges;
  std::vector<std::string> ids;
  for (size_t i = 0; i < n; ++i) {
    if (middle && i + 1 == n) break;
    h.push_back(m.h[i]);
    ids.push_back("v" + std::to_string(i + 1));
  }
  if (middle) {
    h.push_back(m.h.back());
    ids.push_back("v" + std::to_string(n));
  }
  const size_t pairs = middle ? n - 1 : n;
  for (size_t i = pairs; i-- > 0;) {
    h.push_back(m.h[i]);
    ids.push_back("Jv" + std::to_string(i + 1));
  }
  for (size_t i = 0; i + 1 < h.size(); ++i) {
    // Leaves i and i+1 (from the outside in) meet at r of the outer pair index.
    size_t a = std::min(i, h.size() - 1 - i), b = std::min(i + 1, h.size() - 2 - i);
    merges.push_back(m.r[std::min(a, b)]);
  }
  return root_from_leaves(h, merges, ids);
}

RootModule hminus(const GradedRoot& m) {
  validate_root(m);
  RootShape s = root_shape(m);
  const size_t n = m.size();
  std::vector<Grading> g = m.gradings;
  std::vector<std::pair<size_t, size_t>> rel;  // (vertex, its lower neighbour)
  for (size_t v = 0; v < n; ++v)
    if (s.lower[v] >= 0) {
      rel.emplace_back(v, static_cast<size_t>(s.lower[v]));
      g.push_back(m.gradings[static_cast<size_t>(s.lower[v])] + Rational(1));
    }
  MonomialMatrix d(g, g, -1);
  for (size_t k = 0; k < rel.size(); ++k) {
    d.set(rel[k].first, n + k);   // U v
    d.set(rel[k].second, n + k);  // lower neighbour
  }
  RootModule out;
  out.module = homology(d);
  out.j0 = MonomialMatrix(m.gradings, m.gradings, 0);
  for (size_t v = 0; v < n; ++v) out.j0.set(m.involution[v], v);
  return out;
}

MonotoneRoot monotone_subroot(const GradedRoot& m) {
  validate_root(m);
  RootShape s = root_shape(m);
  const size_t n = m.size();
  auto fixed = [&](size_t v) { return m.involution[v] == v; };
  std::vector<size_t> base(n);
  for (size_t v = 0; v < n; ++v) {
    size_t u = v;
    while (!fixed(u)) u = static_cast<size_t>(s.lower[u]);
    base[v] = u;
  }
  std::map<Grading, std::vector<size_t>> clusters;  // base grading -> members, vertex order
  for (size_t v = 0; v < n; ++v) clusters[m.gradings[base[v]]].push_back(v);
  auto tips = [&](const std::vector<size_t>& members) -> std::optional<Grading> {
    std::optional<Grading> best;
    for (auto v : members)
      if (!fixed(v) && (!best || m.gradings[v] > *best)) best = m.gradings[v];
    return best;
  };
  std::vector<Grading> added_h, added_r;
  auto it = clusters.rbegin();  // top invariant vertex
  const Grading r_top = it->first;
  Grading s_max;
  if (it->second.size() == 1) {
    added_h.push_back(r_top);
    added_r.push_back(r_top);
    s_max = r_top;
  } else {
    s_max = *tips(it->second);
    added_h.push_back(s_max);
    added_r.push_back(r_top);
  }
  for (++it; it != clusters.rend(); ++it) {
    if (it->second.size() == 1) continue;
    Grading t = *tips(it->second);
    if (t > s_max) {
      added_h.push_back(t);
      added_r.push_back(it->first);
      s_max = t;
    }
  }
  MonotoneRoot out;
  out.h.assign(added_h.rbegin(), added_h.rend());
  out.r.assign(added_r.rbegin(), added_r.rend());
  validate_monotone(out);
  return out;
}

IotaComplex realize(const GradedRoot& m) {
  validate_root(m);
  RootShape s = root_shape(m);
  const size_t l = s.leaves.size();
  std::vector<std::string> names;
  std::vector<Grading> g;
  for (auto v : s.leaves) {
    names.push_back(m.ids[v]);
    g.push_back(m.gradings[v]);
  }
  for (size_t i = 0; i + 1 < l; ++i) {
    names.push_back("z" + std::to_string(i + 1));
    g.push_back(s.merges[i] + Rational(1));
  }
  IotaComplex c = IotaComplex::on_generators(std::move(names), std::move(g));
  c.name = "root";
  for (size_t i = 0; i + 1 < l; ++i) {
    c.d.set(i, l + i);
    c.d.set(i + 1, l + i);
  }
  for (size_t i = 0; i < l; ++i) c.iota.set(l - 1 - i, i);
  for (size_t i = 0; i + 1 < l; ++i) c.iota.set(l + (l - 2 - i), l + i);
  if (!(homology(c.d) == hminus(m).module)) bad_root("leaf presentation does not reproduce the root module");
  return c;
}

GradedModule root_connected_homology(const GradedRoot& m) {
  GradedRoot sub = monotone_root(monotone_subroot(m));
  return hminus(sub).module.torsion().shifted(Rational(1));
}

GradedModule parity_reduce(const GradedModule& m) {
  std::map<std::pair<Grading, int64_t>, int> count;
  for (auto& t : m.towers) ++count[{t.top, t.length}];
  GradedModule out;
  out.free_parts = m.free_parts;
  for (auto& [key, k] : count)
    if (k % 2) out.towers.push_back(Tower{key.first, key.second});
  return out.canonicalize();
}

}  // namespace iota

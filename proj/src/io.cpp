#include "iotaforge/io.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

namespace iota {

using nlohmann::json;

json grading_to_json(const Grading& g) {
  if (g.is_integer()) return g.num();
  return g.str();
}

Grading grading_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<int64_t>());
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::InvalidInput, std::string("bad grading: ") + e.what());
    }
  }
  throw Error(ErrorCode::InvalidInput, "grading must be an integer or a \"p/q\" string");
}

namespace {

json entries_to_json(const IotaComplex& c, const MonomialMatrix& m) {
  json out = json::array();
  for (size_t col = 0; col < m.cols(); ++col)
    for (size_t row = 0; row < m.rows(); ++row)
      if (m.get(row, col))
        out.push_back({{"from", c.names[col]}, {"to", c.names[row]}, {"upow", *m.exponent(row, col)}});
  return out;
}

void entries_from_json(const json& list, const std::map<std::string, size_t>& index, MonomialMatrix& m,
                       const char* what) {
  if (!list.is_array()) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be a list");
  for (const auto& e : list) {
    const std::string from = e.at("from").get<std::string>(), to = e.at("to").get<std::string>();
    auto fi = index.find(from), ti = index.find(to);
    if (fi == index.end() || ti == index.end())
      throw Error(ErrorCode::InvalidInput, std::string(what) + " entry " + from + " -> " + to + " names an unknown generator");
    const int64_t upow = e.at("upow").get<int64_t>();
    auto forced = m.exponent(ti->second, fi->second);
    if (!forced)
      throw Error(ErrorCode::InvalidInput, std::string(what) + " entry " + from + " -> " + to + " is not homogeneous");
    if (*forced != upow)
      throw Error(ErrorCode::InvalidInput, std::string(what) + " entry " + from + " -> " + to + " has upow " +
                                               std::to_string(upow) + ", gradings force " + std::to_string(*forced));
    if (m.get(ti->second, fi->second))
      throw Error(ErrorCode::InvalidInput, std::string(what) + " entry " + from + " -> " + to + " listed twice");
    m.set(ti->second, fi->second);
  }
}

}  // namespace

json complex_to_json(const IotaComplex& c) {
  json gens = json::array();
  for (size_t i = 0; i < c.size(); ++i) gens.push_back({{"id", c.names[i]}, {"gr", grading_to_json(c.gradings[i])}});
  return {{"name", c.name}, {"generators", gens}, {"differential", entries_to_json(c, c.d)},
          {"iota", entries_to_json(c, c.iota)}};
}

IotaComplex complex_from_json(const json& j) {
  try {
    std::vector<std::string> names;
    std::vector<Grading> gr;
    for (const auto& g : j.at("generators")) {
      names.push_back(g.at("id").get<std::string>());
      gr.push_back(grading_from_json(g.at("gr")));
    }
    check_single_coset(gr);
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < names.size(); ++i)
      if (!index.emplace(names[i], i).second) throw Error(ErrorCode::InvalidInput, "duplicate generator id " + names[i]);
    IotaComplex c = IotaComplex::on_generators(std::move(names), std::move(gr));
    c.name = j.value("name", std::string());
    entries_from_json(j.at("differential"), index, c.d, "differential");
    entries_from_json(j.at("iota"), index, c.iota, "iota");
    return c;
  } catch (const json::exception& e) {
    throw IoError(std::string("complex file: ") + e.what());
  }
}

json root_to_json(const GradedRoot& m) {
  json verts = json::array(), edges = json::array(), inv = json::array();
  for (size_t i = 0; i < m.size(); ++i) verts.push_back({{"id", m.ids[i]}, {"gr", grading_to_json(m.gradings[i])}});
  for (auto [a, b] : m.edges) edges.push_back({m.ids[a], m.ids[b]});
  for (size_t i = 0; i < m.size(); ++i)
    if (i <= m.involution[i]) inv.push_back({m.ids[i], m.ids[m.involution[i]]});
  return {{"vertices", verts}, {"edges", edges}, {"involution", inv}, {"stem_bottom", m.ids[m.stem_bottom]}};
}

GradedRoot root_from_json(const json& j) {
  try {
    GradedRoot m;
    std::map<std::string, size_t> index;
    for (const auto& v : j.at("vertices")) {
      m.ids.push_back(v.at("id").get<std::string>());
      m.gradings.push_back(grading_from_json(v.at("gr")));
      if (!index.emplace(m.ids.back(), m.ids.size() - 1).second)
        throw Error(ErrorCode::InvalidRoot, "duplicate vertex id " + m.ids.back());
    }
    auto at = [&](const json& id) {
      auto it = index.find(id.get<std::string>());
      if (it == index.end()) throw Error(ErrorCode::InvalidRoot, "unknown vertex " + id.get<std::string>());
      return it->second;
    };
    for (const auto& e : j.at("edges")) m.edges.emplace_back(at(e.at(0)), at(e.at(1)));
    m.involution.assign(m.size(), SIZE_MAX);
    for (const auto& p : j.at("involution")) {
      size_t a = at(p.at(0)), b = at(p.at(1));
      if (m.involution[a] != SIZE_MAX || m.involution[b] != SIZE_MAX)
        throw Error(ErrorCode::InvalidRoot, "vertex listed twice in the involution");
      m.involution[a] = b;
      m.involution[b] = a;
    }
    for (size_t i = 0; i < m.size(); ++i)
      if (m.involution[i] == SIZE_MAX) throw Error(ErrorCode::InvalidRoot, "involution misses vertex " + m.ids[i]);
    m.stem_bottom = at(j.at("stem_bottom"));
    validate_root(m);
    return m;
  } catch (const json::exception& e) {
    throw IoError(std::string("root file: ") + e.what());
  }
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << dump_canonical(j);
  if (!out) throw IoError("write failed: " + path);
}

IotaComplex read_complex(const std::string& path) { return complex_from_json(read_json(path)); }
GradedRoot read_root(const std::string& path) { return root_from_json(read_json(path)); }

ConnectedReport invariants_report(const IotaComplex& a, const SearchOptions& opt, int64_t truncation) {
  require_valid(a);
  if (truncation > 0 && !(truncated_module_oracle(a.d, truncation) == homology(a.d)))
    throw Error(ErrorCode::TruncationTooSmall, "truncation " + std::to_string(truncation) + " disagrees with homology");
  IotaComplex r = reduce(a);
  ConnectedReport out;
  out.generators = r.size();
  out.terms = correction_terms(r);
  auto t0 = std::chrono::steady_clock::now();
  SearchOptions o = opt;
  o.require_certificate = false;
  ConnectedComplex cc = connected_complex(r, o);
  out.search_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  out.connected = connected_homology_of(cc);
  out.omega = omega_of(out.connected);
  out.certificate = cc.source.certificate;
  out.exhaustive = cc.source.exhaustive;
  return out;
}

json module_to_json(const GradedModule& m) {
  json towers = json::array(), free = json::array();
  for (const auto& t : m.towers) towers.push_back({{"top", t.top.str()}, {"len", t.length}});
  for (const auto& f : m.free_parts) free.push_back(f.str());
  return {{"free", free}, {"towers", towers}};
}

json report_to_json(const ConnectedReport& r) {
  json out = {{"d_lower", r.terms.lower.str()},
              {"d", r.terms.d.str()},
              {"d_upper", r.terms.upper.str()},
              {"omega", r.omega},
              {"towers", module_to_json(r.connected)["towers"]},
              {"certificate", r.certificate},
              {"exhaustive", r.exhaustive},
              {"generators", r.generators}};
  if (r.search_ms) out["timings"] = {{"search_ms", *r.search_ms}};
  return out;
}

std::string report_text(const ConnectedReport& r) {
  std::ostringstream os;
  os << "d_lower " << r.terms.lower.str() << "\n"
     << "d " << r.terms.d.str() << "\n"
     << "d_upper " << r.terms.upper.str() << "\n"
     << "omega " << r.omega << "\n"
     << "towers";
  for (const auto& t : r.connected.towers) os << " T_" << t.top.str() << "(" << t.length << ")";
  os << "\n"
     << "certificate " << (r.certificate ? "true" : "false") << "\n";
  if (r.search_ms) os << "search_ms " << *r.search_ms << "\n";
  return os.str();
}

}  // namespace iota

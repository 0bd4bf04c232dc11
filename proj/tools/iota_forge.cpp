// iota_forge: command-line front end.
// Exit codes: 0 success, 1 I/O or parse error, 2 invalid input, 3 maximality not certified.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "iotaforge/io.hpp"
#include "iotaforge/surgery.hpp"

using namespace iota;
using nlohmann::json;

namespace {

struct Common {
  std::string format = "json";
  std::string mode = "exhaustive";
  uint64_t seed = 0;
  int64_t truncation = 0;
  int threads = 0;
  bool timings = false;

  SearchOptions search() const {
    SearchOptions o;
    o.mode = mode == "greedy" ? SearchMode::greedy : SearchMode::exhaustive;
    o.seed = seed;
    o.threads = threads;
    return o;
  }
};

void add_search_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--mode", c.mode, "exhaustive or greedy")->check(CLI::IsMember({"exhaustive", "greedy"}));
  cmd->add_option("--seed", c.seed, "seed for greedy restarts");
  cmd->add_option("--threads", c.threads, "worker threads (capped by IOTA_FORGE_THREADS)");
  cmd->add_flag("--timings", c.timings, "include wall-clock timings in the report");
}

void add_format_flag(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
}

std::vector<int64_t> parse_list(const std::string& s) {
  std::vector<int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, "bad integer list: " + s);
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidInput, "empty integer list");
  return out;
}

// Prints the report; exit 3 when the search could not certify maximality.
int emit_report(ConnectedReport r, const Common& c, json extra = json::object()) {
  if (!c.timings) r.search_ms.reset();
  if (c.format == "json") {
    json j = report_to_json(r);
    for (auto& [k, v] : extra.items()) j[k] = v;
    std::cout << dump_canonical(j);
  } else {
    std::cout << report_text(r);
    for (auto& [k, v] : extra.items()) std::cout << k << " " << v.dump() << "\n";
  }
  return r.certificate ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact invariants of iota-complexes over F2[U]"};
  app.require_subcommand(1);
  Common c;
  std::string path, out_path, sub_path;
  std::vector<std::string> paths;

  auto* validate_cmd = app.add_subcommand("validate", "check every iota-complex invariant");
  validate_cmd->add_option("path", path)->required();
  add_format_flag(validate_cmd, c);

  auto* inv_cmd = app.add_subcommand("invariants", "correction terms, connected homology and omega");
  inv_cmd->add_option("path", path)->required();
  inv_cmd->add_option("--truncation", c.truncation, "cross-check homology against the U^N truncation");
  add_search_flags(inv_cmd, c);
  add_format_flag(inv_cmd, c);

  auto* tensor_cmd = app.add_subcommand("tensor", "tensor product of complex files");
  tensor_cmd->add_option("paths", paths)->required()->expected(1, -1);
  tensor_cmd->add_option("-o,--output", out_path)->required();

  auto* dual_cmd = app.add_subcommand("dual", "dual complex");
  dual_cmd->add_option("path", path)->required();
  dual_cmd->add_option("-o,--output", out_path)->required();

  std::string torus, staircase, vseq, emit_root, emit_complex;
  int64_t framing = 0;
  auto* surgery_cmd = app.add_subcommand("surgery", "negative surgery on an L-space knot");
  auto* knot = surgery_cmd->add_option_group("knot");
  knot->add_option("--torus", torus, "p,q");
  knot->add_option("--staircase", staircase, "s1,s2,...");
  knot->add_option("--vseq", vseq, "V0,V1,...");
  knot->require_option(1);
  surgery_cmd->add_option("--framing", framing, "-n with n > 0")->required()->allow_extra_args(false);
  surgery_cmd->add_option("--truncation", c.truncation, "cone truncation N (default picks a stable one)");
  surgery_cmd->add_option("--emit-root", emit_root, "write the M(V, n) root, shifted to cone gradings");
  surgery_cmd->add_option("--emit-complex", emit_complex, "write the truncated cone complex");
  add_search_flags(surgery_cmd, c);
  add_format_flag(surgery_cmd, c);

  std::string root_action;
  auto* root_cmd = app.add_subcommand("root", "graded roots: monotone subroot or connected homology");
  root_cmd->add_option("action", root_action)->required()->check(CLI::IsMember({"subroot", "conn"}));
  root_cmd->add_option("path", path)->required();
  root_cmd->add_option("-o,--output", out_path, "subroot: write here instead of stdout");
  add_format_flag(root_cmd, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*validate_cmd) {
      json report;
      int code = 0;
      try {
        ValidationReport v = validate(read_complex(path));
        report["valid"] = v.ok;
        report["issues"] = json::array();
        for (const auto& i : v.issues) report["issues"].push_back({{"invariant", i.invariant}, {"witness", i.witness}});
        code = v.ok ? 0 : 2;
      } catch (const Error& e) {
        report = {{"valid", false}, {"issues", json::array({{{"invariant", "parse"}, {"witness", e.what()}}})}};
        code = 2;
      }
      if (c.format == "json") {
        std::cout << dump_canonical(report);
      } else {
        std::cout << (report["valid"].get<bool>() ? "valid" : "invalid") << "\n";
        for (const auto& i : report["issues"])
          std::cout << i["invariant"].get<std::string>() << ": " << i["witness"].get<std::string>() << "\n";
      }
      return code;
    }
    if (*inv_cmd) return emit_report(invariants_report(read_complex(path), c.search(), c.truncation), c);
    if (*tensor_cmd) {
      IotaComplex acc = read_complex(paths[0]);
      require_valid(acc);
      for (size_t i = 1; i < paths.size(); ++i) {
        IotaComplex next = read_complex(paths[i]);
        require_valid(next);
        acc = tensor(acc, next);
      }
      write_json(out_path, complex_to_json(acc));
      return 0;
    }
    if (*dual_cmd) {
      IotaComplex a = read_complex(path);
      require_valid(a);
      write_json(out_path, complex_to_json(dual(a)));
      return 0;
    }
    if (*surgery_cmd) {
      if (framing >= 0) throw Error(ErrorCode::InvalidInput, "framing must be negative");
      const int64_t n = -framing;
      VSequence v;
      if (!torus.empty()) {
        auto pq = parse_list(torus);
        if (pq.size() != 2) throw Error(ErrorCode::InvalidInput, "--torus takes p,q");
        v = vs_from_staircase(torus_staircase(pq[0], pq[1]));
      } else if (!staircase.empty()) {
        v = vs_from_staircase(Staircase{parse_list(staircase)});
      } else {
        v = VSequence(parse_list(vseq));
      }
      SurgeryCone cone = surgery_homology(v, n, c.truncation);
      if (!emit_complex.empty()) write_json(emit_complex, complex_to_json(cone.complex));
      if (!emit_root.empty())
        write_json(emit_root, root_to_json(shift_root(m_module(v, n).root, Rational(0) - lens_d(n, 0))));
      json extra = {{"v_sequence", v.values()}, {"homology", module_to_json(cone.module)},
                    {"truncation", cone.truncation}};
      return emit_report(invariants_report(cone.complex, c.search()), c, extra);
    }
    if (*root_cmd) {
      GradedRoot m = read_root(path);
      if (root_action == "subroot") {
        json j = root_to_json(monotone_root(monotone_subroot(m)));
        if (out_path.empty()) std::cout << dump_canonical(j);
        else write_json(out_path, j);
        return 0;
      }
      IotaComplex real = realize(m);
      ConnectedReport r;
      r.terms = correction_terms(real);
      r.connected = root_connected_homology(m);
      r.omega = omega_of(r.connected);
      r.certificate = true;
      r.exhaustive = true;
      r.generators = real.size();
      return emit_report(r, c);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::SearchCapExceeded ? 3 : 2;
  }
  return 0;
}

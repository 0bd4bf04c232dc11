#pragma once

// File formats and reports. Rationals are written as integers or "p/q" strings;
// objects are emitted with sorted keys so identical inputs give identical bytes.

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "iotaforge/connected.hpp"
#include "iotaforge/graded_roots.hpp"

namespace iota {

// Unreadable file or malformed JSON (CLI exit 1). Semantic problems throw iota::Error.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json grading_to_json(const Grading& g);
Grading grading_from_json(const nlohmann::json& j);

nlohmann::json complex_to_json(const IotaComplex& c);
// Entries must carry the forced exponent as "upow"; a mismatch throws InvalidInput.
IotaComplex complex_from_json(const nlohmann::json& j);

nlohmann::json root_to_json(const GradedRoot& m);
GradedRoot root_from_json(const nlohmann::json& j);

nlohmann::json read_json(const std::string& path);
void write_json(const std::string& path, const nlohmann::json& j);
std::string dump_canonical(const nlohmann::json& j);

IotaComplex read_complex(const std::string& path);
GradedRoot read_root(const std::string& path);

struct ConnectedReport {
  CorrectionTerms terms;
  int64_t omega = 0;
  GradedModule connected;  // towers only
  bool certificate = false;
  bool exhaustive = false;
  size_t generators = 0;          // after reduction
  std::optional<int64_t> search_ms;  // only emitted when timings are requested
};

// validate -> reduce -> correction terms -> connected homology -> omega.
// A truncation > 0 also cross-checks homology against the truncated oracle at that level.
ConnectedReport invariants_report(const IotaComplex& a, const SearchOptions& opt, int64_t truncation = 0);

nlohmann::json module_to_json(const GradedModule& m);
nlohmann::json report_to_json(const ConnectedReport& r);
std::string report_text(const ConnectedReport& r);

}  // namespace iota

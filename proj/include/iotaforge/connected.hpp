#pragma once

// Self-local equivalences, the search for a maximal one, the connected complex
// (im f, ι_f), connected homology and the invariants read off from it.

#include <cstdint>
#include <optional>
#include <set>

#include "iotaforge/involutive.hpp"

namespace iota {

// All self-local equivalences form id + span(directions): the f-projection of the joint
// solutions (f, H) of fd + df = 0 and fι + ιf = dH + Hd, cut down by the condition that
// f fixes the class of the free tower.
struct AdmissibleSpace {
  std::vector<Grading> gradings;
  BitMatrix basepoint;              // identity
  std::vector<BitMatrix> directions;
  size_t chain_map_dim = 0;         // dimension before the locality cut

  size_t dim() const { return directions.size(); }
  BitMatrix member(const BitVec& coefficients) const;
};

AdmissibleSpace admissible_space(const IotaComplex& a);

// The free-tower class functional: 1 for f that fix the class of the free tower.
class LocalityTest {
 public:
  explicit LocalityTest(const IotaComplex& a);
  bool operator()(const BitMatrix& f) const;

 private:
  std::vector<Grading> gradings_;
  std::vector<size_t> slice_;
  BitVec cycle_;
  Echelon boundaries_;
  size_t read_at_ = 0;
};

enum class SearchMode { exhaustive, greedy };

struct SearchOptions {
  SearchMode mode = SearchMode::exhaustive;
  uint64_t seed = 0;
  int threads = 0;                 // 0: IOTA_FORGE_THREADS, else the OpenMP default
  bool require_certificate = false;
  size_t exhaustive_cap = 20;      // largest admissible dimension enumerated outright
  size_t certificate_cap = 20;     // largest image rank per parity class certified
  int restarts = 64;
};

// Threads actually used for a request of `requested` (0 = default), honouring IOTA_FORGE_THREADS.
int search_threads(int requested);

struct SelfLocalEquivalence {
  MonomialMatrix f;                 // degree 0
  MonomialMatrix homotopy;          // degree +1, fι + ιf = dH + Hd
  std::vector<Element> kernel;      // free basis of ker f
  size_t rank = 0;                  // F[U]-rank of im f
  bool certificate = false;         // maximality proven
  bool exhaustive = false;          // found by full enumeration
};

// Builds the record for a given admissible f (throws InvalidInput if f is not one).
SelfLocalEquivalence make_self_local_equivalence(const IotaComplex& a, const BitMatrix& f);

// Throws SearchCapExceeded only if a certificate was required and none could be produced.
SelfLocalEquivalence maximal_self_local_equivalence(const IotaComplex& a, const SearchOptions& opt = {});

// Reference implementation: single-threaded exhaustive enumeration, no tie-break shortcuts.
SelfLocalEquivalence maximal_self_local_equivalence_serial(const IotaComplex& a, size_t cap = 20);

// True when no self-local equivalence kills a nonzero element of im f (per parity class,
// by enumerating the image); nullopt when the image is too large to enumerate.
std::optional<bool> certify_maximal(const IotaComplex& a, const AdmissibleSpace& space, const BitMatrix& f,
                                    size_t cap = 20);

struct ConnectedComplex {
  IotaComplex complex;              // generators are the image basis
  std::vector<Element> image_basis; // in the coordinates of the input
  SelfLocalEquivalence source;
};

ConnectedComplex connected_complex(const IotaComplex& a, const SearchOptions& opt = {});
ConnectedComplex connected_complex_from(const IotaComplex& a, const SelfLocalEquivalence& f);

// Torsion of H_*(im f), tower tops raised by one.
GradedModule connected_homology(const IotaComplex& a, const SearchOptions& opt = {});
GradedModule connected_homology_of(const ConnectedComplex& c);

int64_t omega(const IotaComplex& a, const SearchOptions& opt = {});
int64_t omega_of(const GradedModule& connected);

// nullopt stands for all positive integers.
bool filtration_member(const IotaComplex& a, const std::optional<std::set<int64_t>>& lengths,
                       const SearchOptions& opt = {});

enum class OrderVerdict { d_negative_case, rank_one_case, inconclusive };
std::string_view verdict_name(OrderVerdict v);

struct OrderCertificate {
  OrderVerdict verdict = OrderVerdict::inconclusive;
  bool d_negative = false;
  bool rank_one = false;
  // For rank one: the single class sits at d - 1 with d = d̄ = d̲ + 2, or at d with
  // d̲ = d = d̄ - 2.
  bool rank_one_dichotomy = false;
};
OrderCertificate infinite_order_certificate(const IotaComplex& a, const SearchOptions& opt = {});

}  // namespace iota

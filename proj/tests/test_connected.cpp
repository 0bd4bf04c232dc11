#include <cstdlib>
#include <map>
#include <random>

#include "doctest.h"
#include "iotaforge/connected.hpp"
#include "iotaforge/surgery.hpp"
#include "support.hpp"

using namespace iota;

namespace {

SearchOptions exhaustive_only() {
  SearchOptions o;
  o.require_certificate = true;
  return o;
}

// Tower multiset of `sub` is contained in that of `all`.
bool sub_multiset(const GradedModule& sub, const GradedModule& all) {
  std::map<std::pair<Grading, int64_t>, int> count;
  for (const auto& t : all.towers) ++count[{t.top, t.length}];
  for (const auto& t : sub.towers)
    if (--count[{t.top, t.length}] < 0) return false;
  return true;
}

int64_t ceil_half(const Rational& even) { return (even.num() + 1) / 2; }

}  // namespace

TEST_CASE("admissible space of the identity complex is a point") {
  AdmissibleSpace s = admissible_space(identity_complex());
  CHECK(s.dim() == 0);
  CHECK(s.basepoint == BitMatrix::identity(1));
}

TEST_CASE("self-local equivalences of C1 fix x1+x2 and y and send x1 to x1 or x2") {
  IotaComplex c1 = surgery_local_rep(1);
  AdmissibleSpace s = admissible_space(c1);
  CHECK(s.dim() == 1);
  for (uint64_t mask = 0; mask < 2; ++mask) {
    BitVec coeff(1);
    if (mask) coeff.set(0);
    BitMatrix f = s.member(coeff);
    BitVec sum(3);
    sum.set(0);
    sum.set(1);
    CHECK(f.apply(sum) == sum);
    BitVec y(3);
    y.set(2);
    CHECK(f.apply(y) == y);
    BitVec x1(3);
    x1.set(0);
    BitVec img = f.apply(x1);
    BitVec x2(3);
    x2.set(1);
    CHECK((img == x1 || img == x2));
  }
}

TEST_CASE("C1 tensor its dual admits a rank-one self-local equivalence") {
  IotaComplex c1 = surgery_local_rep(1);
  IotaComplex t = tensor(c1, dual(c1));
  SelfLocalEquivalence f = maximal_self_local_equivalence(t, exhaustive_only());
  CHECK(f.kernel.size() == 8);
  CHECK(f.rank == 1);
  CHECK(f.certificate);
  ConnectedComplex cc = connected_complex_from(t, f);
  CHECK(homology(cc.complex.d).torsion().towers.empty());
}

TEST_CASE("identity map is maximal on C_n and C_{n1,...,nm}") {
  for (int n = 1; n <= 3; ++n) {
    SelfLocalEquivalence f = maximal_self_local_equivalence(surgery_local_rep(n), exhaustive_only());
    CHECK(f.rank == 3);
    CHECK(f.kernel.empty());
  }
  for (auto ns : std::vector<std::vector<int>>{{2, 1}, {1, 1}, {3, 2, 2, 1}}) {
    IotaComplex c = sum_surgeries_complex(ns);
    SelfLocalEquivalence f = maximal_self_local_equivalence(c, exhaustive_only());
    CHECK(f.rank == c.size());
  }
}

TEST_CASE("connected complex of Sigma(2,3,7) is C1 itself") {
  IotaComplex c1 = surgery_local_rep(1);
  ConnectedComplex cc = connected_complex(c1);
  CHECK(cc.complex.gradings == c1.gradings);
  CHECK(cc.complex.d.bits() == c1.d.bits());
  CHECK(cc.complex.iota.bits() == c1.iota.bits());
  CHECK(connected_complex(identity_complex()).complex.size() == 1);
}

TEST_CASE("connected homology, omega and filtration examples") {
  IotaComplex c1 = surgery_local_rep(1), c2 = surgery_local_rep(2);
  CHECK(connected_homology(c1) == GradedModule{{}, {{-1, 1}}});
  CHECK(connected_homology(dual(c1)) == GradedModule{{}, {{0, 1}}});
  CHECK(connected_homology(tensor(c2, c1)) == GradedModule{{}, {{-1, 2}, {-4, 1}}});
  CHECK(connected_homology(identity_complex()) == GradedModule{});
  CHECK(omega(identity_complex()) == 0);
  CHECK(omega(c2) == 2);
  CHECK(omega(tensor(c2, c1)) == 2);
  for (int n = 1; n <= 3; ++n) CHECK(omega(surgery_local_rep(n)) == n);
  CHECK(filtration_member(c1, std::set<int64_t>{1}));
  CHECK_FALSE(filtration_member(c2, std::set<int64_t>{1}));
  CHECK(filtration_member(c2, std::nullopt));
  CHECK(filtration_member(identity_complex(), std::set<int64_t>{}));
}

TEST_CASE("infinite order certificates") {
  OrderCertificate s = infinite_order_certificate(surgery_local_rep(1));
  CHECK(s.verdict == OrderVerdict::rank_one_case);
  CHECK(s.d_negative);
  CHECK(s.rank_one_dichotomy);
  CHECK(infinite_order_certificate(identity_complex()).verdict == OrderVerdict::inconclusive);
  OrderCertificate c2 = infinite_order_certificate(surgery_local_rep(2));
  CHECK(c2.verdict == OrderVerdict::d_negative_case);
  OrderCertificate du = infinite_order_certificate(dual(surgery_local_rep(1)));
  CHECK(du.verdict == OrderVerdict::rank_one_case);
  CHECK(du.rank_one_dichotomy);
  CHECK_FALSE(du.d_negative);
  CHECK(verdict_name(OrderVerdict::d_negative_case) == "d_negative_case");
}

TEST_CASE("parallel, serial and greedy searches agree") {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    IotaComplex a = support::random_iota_complex(rng, 6);
    AdmissibleSpace s = admissible_space(a);
    if (s.dim() > 14) continue;
    ++checked;
    SelfLocalEquivalence serial = maximal_self_local_equivalence_serial(a);
    SearchOptions par;
    par.threads = 4;
    SelfLocalEquivalence p4 = maximal_self_local_equivalence(a, par);
    par.threads = 1;
    SelfLocalEquivalence p1 = maximal_self_local_equivalence(a, par);
    CHECK(p4.f == p1.f);
    CHECK(p4.f == serial.f);
    SearchOptions greedy;
    greedy.mode = SearchMode::greedy;
    greedy.seed = static_cast<uint64_t>(trial);
    SelfLocalEquivalence g = maximal_self_local_equivalence(a, greedy);
    CHECK(g.certificate);
    CHECK(g.rank == serial.rank);
    CHECK(homology(connected_complex_from(a, g).complex.d) == homology(connected_complex_from(a, serial).complex.d));
  }
  CHECK(checked > 30);
}

TEST_CASE("maximal self-local equivalences split the complex") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    IotaComplex a = support::random_iota_complex(rng, 6);
    SelfLocalEquivalence f = maximal_self_local_equivalence(a);
    ConnectedComplex cc = connected_complex_from(a, f);
    // Per grading: dim C = dim im f + dim ker f.
    std::vector<Grading> kg;
    for (const auto& e : f.kernel) kg.push_back(e.grading);
    Grading top = *std::max_element(a.gradings.begin(), a.gradings.end());
    Grading low = *std::min_element(a.gradings.begin(), a.gradings.end()) - Rational(4);
    for (Grading s = top; s >= low; s -= Rational(1))
      CHECK(slice(a.gradings, s).size() == slice(cc.complex.gradings, s).size() + slice(kg, s).size());
    // f restricted to its image is injective: f∘f has the same rank.
    CHECK(f.f.bits().rank() == (f.f.bits() * f.f.bits()).rank());
  }
}

TEST_CASE("properties of connected homology on random complexes") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 80; ++trial) {
    IotaComplex a = support::random_iota_complex(rng, 6);
    ConnectedComplex cc = connected_complex(a);
    GradedModule hc = connected_homology_of(cc);
    CHECK(hc.free_parts.empty());
    CHECK(sub_multiset(hc, homology(a.d).torsion().shifted(Rational(1))));
    CorrectionTerms ct = correction_terms(a);
    const int64_t w = omega_of(hc);
    CHECK(ceil_half(ct.d - ct.lower) <= w);
    CHECK(ceil_half(ct.upper - ct.d) <= w);
    // The connected complex carries the same correction terms.
    CHECK(correction_terms(cc.complex) == ct);
    if (hc.torsion_dimension() == 1) {
      // Matches C1 or its dual up to a grading shift.
      IotaComplex r = reduce(cc.complex);
      CHECK(r.size() == 3);
      Rational shift = ct.d;
      CorrectionTerms moved{ct.lower - shift, 0, ct.upper - shift};
      CHECK((moved == CorrectionTerms{-2, 0, 0} || moved == CorrectionTerms{0, 0, 2}));
    }
  }
}

TEST_CASE("certificates and caps") {
  IotaComplex c1 = surgery_local_rep(1);
  IotaComplex t = tensor(tensor(c1, c1), c1);
  AdmissibleSpace s = admissible_space(t);
  CHECK(s.dim() > 20);
  SearchOptions o;
  SelfLocalEquivalence f = maximal_self_local_equivalence(t, o);
  CHECK(f.certificate);
  CHECK_FALSE(f.exhaustive);
  CHECK(certify_maximal(t, s, f.f.bits()).value());
  CHECK_FALSE(certify_maximal(t, s, BitMatrix::identity(t.size())).value());
  CHECK_FALSE(certify_maximal(t, s, f.f.bits(), 0).has_value());
  o.certificate_cap = 0;
  o.require_certificate = true;
  try {
    maximal_self_local_equivalence(t, o);
    FAIL("expected SearchCapExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SearchCapExceeded);
  }
  o.require_certificate = false;
  CHECK_FALSE(maximal_self_local_equivalence(t, o).certificate);
}

TEST_CASE("thread cap from the environment") {
  setenv("IOTA_FORGE_THREADS", "2", 1);
  CHECK(search_threads(8) <= 2);
  CHECK(search_threads(1) == 1);
  unsetenv("IOTA_FORGE_THREADS");
  CHECK(search_threads(3) == 3);
}

TEST_CASE("non-members are rejected") {
  IotaComplex c1 = surgery_local_rep(1);
  BitMatrix zero(3, 3);
  CHECK_THROWS_AS(make_self_local_equivalence(c1, zero), Error);
}

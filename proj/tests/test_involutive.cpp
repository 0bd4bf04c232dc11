#include <random>

#include "doctest.h"
#include "iotaforge/involutive.hpp"
#include "iotaforge/surgery.hpp"
#include "support.hpp"

using namespace iota;

TEST_CASE("correction terms of the basic complexes") {
  CHECK(correction_terms(identity_complex()) == CorrectionTerms{0, 0, 0});
  CHECK(correction_terms(surgery_local_rep(1)) == CorrectionTerms{-2, 0, 0});
  CHECK(correction_terms(dual(surgery_local_rep(1))) == CorrectionTerms{0, 0, 2});
  CHECK(correction_terms(surgery_local_rep(2)) == CorrectionTerms{-4, 0, 0});
  CHECK(correction_terms(surgery_local_rep(3)) == CorrectionTerms{-6, 0, 0});
  // ι = id on C1: the cone splits, nothing separates the towers.
  IotaComplex c = surgery_local_rep(1);
  c.iota = MonomialMatrix::identity(c.gradings);
  CHECK(correction_terms(c) == CorrectionTerms{0, 0, 0});
}

TEST_CASE("involutive cone has the block shape") {
  InvolutiveCone cone = involutive_cone(surgery_local_rep(1));
  CHECK(cone.gradings.size() == 6);
  CHECK(cone.gradings[0] == Rational(-1));
  CHECK(cone.gradings[3] == Rational(-2));
  // (1 + ι) x1 = x1 + x2 lands in the Q copy.
  CHECK(cone.d.get(3, 0));
  CHECK(cone.d.get(4, 0));
  CHECK(cone.q.get(3, 0));
  GradedModule h = homology(cone.d);
  CHECK(h.free_parts.size() == 2);
}

TEST_CASE("single-parity formula agrees with the cone") {
  std::mt19937_64 rng(31);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    IotaComplex a = support::random_iota_complex(rng, 6);
    if (!homology_single_parity(a)) continue;
    ++compared;
    CHECK(correction_terms_single_parity(a) == correction_terms(a));
  }
  for (const auto& a : support::small_complex_family()) {
    if (!homology_single_parity(a)) continue;
    ++compared;
    CHECK(correction_terms_single_parity(a) == correction_terms(a));
  }
  CHECK(compared > 100);
}

TEST_CASE("cone homology matches the exact triangle dimension count") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 80; ++trial) {
    IotaComplex a = support::random_iota_complex(rng, 6);
    Grading low = *std::min_element(a.gradings.begin(), a.gradings.end());
    // Far enough below the bottom that only the towers' tails remain.
    for (const auto& [r, c] : exact_triangle_counts(a, low - Rational(6))) {
      CAPTURE(r.str());
      CHECK(c.cone == c.kernel_plus_cokernel);
    }
  }
}

TEST_CASE("ordering, parity and duality on random complexes") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 150; ++trial) {
    IotaComplex a = support::random_iota_complex(rng, 6);
    CorrectionTerms c = correction_terms(a);
    CHECK(c.lower <= c.d);
    CHECK(c.d <= c.upper);
    CHECK((c.d - c.lower).half_even());
    CHECK((c.upper - c.d).half_even());
    CorrectionTerms cs = correction_terms(dual(a));
    CHECK(cs.lower == Rational(0) - c.upper);
    CHECK(cs.upper == Rational(0) - c.lower);
    CHECK(cs.d == Rational(0) - c.d);
  }
}

TEST_CASE("non-local cones are rejected") {
  IotaComplex c = IotaComplex::on_generators({"a", "b"}, {Rational(-2), Rational(-2)});
  c.iota = MonomialMatrix::identity(c.gradings);
  CHECK_THROWS_AS(correction_terms(c), Error);
}

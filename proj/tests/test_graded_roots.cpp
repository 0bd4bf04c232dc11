#include <functional>

#include "doctest.h"
#include "iotaforge/connected.hpp"
#include "iotaforge/graded_roots.hpp"
#include "iotaforge/surgery.hpp"
#include "support.hpp"

using namespace iota;

namespace {

GradedRoot two_leaves(int depth) { return root_from_leaves({-2, -2}, {Rational(-2 - 2 * depth)}); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidInput;  // sentinel: nothing thrown
}

}  // namespace

TEST_CASE("one-stem root") {
  GradedRoot r = root_from_leaves({-2}, {});
  CHECK(hminus(r).module == GradedModule{{-2}, {}});
  CHECK(root_connected_homology(r) == GradedModule{});
  IotaComplex c = realize(r);
  CHECK(c.size() == 1);
  CHECK(c.gradings[0] == Rational(-2));
}

TEST_CASE("two leaves realize C_n") {
  for (int n = 1; n <= 3; ++n) {
    IotaComplex c = realize(two_leaves(n));
    IotaComplex cn = surgery_local_rep(n);
    CHECK(c.gradings == cn.gradings);
    CHECK(c.d.bits() == cn.d.bits());
    CHECK(c.iota.bits() == cn.iota.bits());
    CHECK(root_connected_homology(two_leaves(n)) == GradedModule{{}, {{-1, n}}});
  }
}

TEST_CASE("root of V = (2,1,1) has the tower multiset with multiplicities") {
  GradedRoot r = m_module(VSequence({2, 1, 1}), 1).root;
  GradedModule expected{{-2}, {{-2, 2}, {-4, 1}, {-4, 1}, {-8, 1}, {-8, 1}}};
  CHECK(hminus(r).module == expected);
  CHECK(support::root_module_oracle(r) == expected);
  CHECK(monotone_subroot(r) == MonotoneRoot{{-2}, {-6}});
  CHECK(root_connected_homology(r) == GradedModule{{}, {{-1, 2}}});
}

TEST_CASE("monotone root M(6,-4;4,-2;2,0)") {
  MonotoneRoot m{{6, 4, 2}, {-4, -2, 0}};
  GradedRoot r = monotone_root(m);
  GradedModule expected{{6}, {{6, 5}, {4, 4}, {4, 3}, {2, 2}, {2, 1}}};
  CHECK(hminus(r).module == expected);
  CHECK(support::root_module_oracle(r) == expected);
  CHECK(monotone_subroot(r) == m);
}

TEST_CASE("hminus agrees with the level-rank oracle on the root family") {
  for (const auto& r : support::symmetric_root_family()) CHECK(hminus(r).module == support::root_module_oracle(r));
}

TEST_CASE("monotone subroot is monotone, idempotent and a sub-module") {
  for (const auto& r : support::symmetric_root_family()) {
    MonotoneRoot m = monotone_subroot(r);
    CHECK_NOTHROW(validate_monotone(m));
    CHECK(monotone_subroot(monotone_root(m)) == m);
    // Per tower top, the subroot never has more towers of at least a given length.
    GradedModule small = hminus(monotone_root(m)).module, big = hminus(r).module;
    for (const auto& t : small.towers) {
      int64_t need = 0, have = 0;
      for (const auto& u : small.towers) need += u.top == t.top && u.length >= t.length;
      for (const auto& u : big.towers) have += u.top == t.top && u.length >= t.length;
      CHECK(need <= have);
    }
  }
}

TEST_CASE("monotone roots are fixed by the subroot algorithm") {
  for (int h1 = -2; h1 >= -6; h1 -= 2)
    for (int gap = 1; gap <= 3; ++gap) {
      MonotoneRoot one{{h1}, {h1 - 2 * gap}};
      CHECK(monotone_subroot(monotone_root(one)) == one);
      for (int h2 = h1 - 2; h2 >= -8; h2 -= 2)
        for (int r2 = h1 - 2 * gap + 2; r2 <= h2; r2 += 2) {
          MonotoneRoot two{{h1, h2}, {h1 - 2 * gap, r2}};
          CHECK(monotone_subroot(monotone_root(two)) == two);
        }
    }
}

TEST_CASE("realized complexes are valid with the root's homology") {
  for (const auto& r : support::symmetric_root_family()) {
    IotaComplex c = realize(r);
    CHECK(validate(c).ok);
    CHECK(homology(c.d) == hminus(r).module);
  }
}

TEST_CASE("parity reduction") {
  GradedModule m{{}, {{-2, 1}, {-2, 1}, {-2, 1}, {-4, 2}, {-4, 2}, {-6, 1}}};
  CHECK(parity_reduce(m) == GradedModule{{}, {{-2, 1}, {-6, 1}}});
}

TEST_CASE("invalid roots are rejected") {
  CHECK(code_of([] { root_from_leaves({-2, -4}, {Rational(-6)}); }) == ErrorCode::InvalidRoot);  // not a palindrome
  CHECK(code_of([] { root_from_leaves({-2, -2}, {Rational(-3)}); }) == ErrorCode::InvalidRoot);  // odd step
  CHECK(code_of([] { root_from_leaves({-2, -2}, {Rational(-2)}); }) == ErrorCode::InvalidRoot);  // merge not below
  GradedRoot r = two_leaves(1);
  GradedRoot bad = r;
  bad.involution = {0, 1, 2};  // J0 must swap the two leaves
  CHECK(code_of([&] { validate_root(bad); }) == ErrorCode::InvalidRoot);
  bad = r;
  bad.gradings[2] = bad.gradings[2] - Rational(2);  // edge step of 4
  CHECK(code_of([&] { validate_root(bad); }) == ErrorCode::InvalidRoot);
  CHECK(code_of([] { validate_monotone(MonotoneRoot{{-2, -2}, {-6, -4}}); }) == ErrorCode::InvalidRoot);
  CHECK(code_of([] { validate_monotone(MonotoneRoot{{-2}, {0}}); }) == ErrorCode::InvalidRoot);
}

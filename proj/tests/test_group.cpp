#include <doctest.h>

#include <set>

#include "equimaps/error.hpp"
#include "equimaps/group.hpp"
#include "test_instances.hpp"

using namespace equimaps;

namespace {

// Independent oracle: every subset that happens to be closed.
std::vector<std::vector<int>> subgroups_by_subset_filter(const FiniteGroup& g) {
  int n = g.order();
  REQUIRE(n <= 12);
  std::vector<std::vector<int>> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> members;
    for (int e = 0; e < n; ++e)
      if (mask & (1u << e)) members.push_back(e);
    if (is_subgroup(g, members)) out.push_back(members);
  }
  return out;
}

}  // namespace

TEST_CASE("permutation closure: cyclic group of order 2") {
  FiniteGroup g = FiniteGroup::from_permutation_generators(2, {{1, 0}});
  CHECK(g.order() == 2);
  CHECK(g.mul(1, 1) == 0);
  CHECK(g.inv(1) == 1);
}

TEST_CASE("permutation closure: S3 from a transposition and a 3-cycle") {
  FiniteGroup g = s3();
  CHECK(g.order() == 6);
  // Brute-force oracle: close the two generator permutations by hand.
  std::set<std::vector<int>> closure{{0, 1, 2}};
  std::vector<std::vector<int>> gens{{1, 0, 2}, {1, 2, 0}};
  bool grew = true;
  while (grew) {
    grew = false;
    auto snapshot = closure;
    for (const auto& a : snapshot)
      for (const auto& b : gens) {
        std::vector<int> p(3);
        for (int i = 0; i < 3; ++i) p[i] = a[b[i]];
        if (closure.insert(p).second) grew = true;
      }
  }
  CHECK(closure.size() == 6);
}

TEST_CASE("permutation closure: trivial group") {
  FiniteGroup g = FiniteGroup::from_permutation_generators(1, {});
  CHECK(g.order() == 1);
}

TEST_CASE("from_cayley validates the table") {
  CHECK_THROWS_AS(FiniteGroup::from_cayley({{0, 1}, {1, 1}}), Error);
  CHECK_THROWS_AS(FiniteGroup::from_cayley({{1, 0}, {0, 1}}), Error);
  FiniteGroup z2 = FiniteGroup::from_cayley({{0, 1}, {1, 0}});
  CHECK(z2.order() == 2);
}

TEST_CASE("closure cap") {
  CHECK_THROWS_WITH_AS(FiniteGroup::from_permutation_generators(4, {{1, 0, 2, 3}, {1, 2, 3, 0}}, 10),
                       doctest::Contains("too large"), Error);
}

TEST_CASE("Cayley associativity holds on every triple") {
  for (const FiniteGroup& g : {z2(), z4(), v4(), s3()}) {
    for (int a = 0; a < g.order(); ++a)
      for (int b = 0; b < g.order(); ++b)
        for (int c = 0; c < g.order(); ++c)
          REQUIRE(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
  }
}

TEST_CASE("all_subgroups matches the subset-filter oracle") {
  for (const FiniteGroup& g : {z2(), z3(), z4(), v4(), s3()}) {
    auto expected = subgroups_by_subset_filter(g);
    auto got = all_subgroups(g);
    REQUIRE(got.size() == expected.size());
    std::set<std::vector<int>> expect_set(expected.begin(), expected.end());
    for (const auto& h : got) {
      CHECK(expect_set.count(h.members) == 1);
      CHECK(h.size() % 1 == 0);
      CHECK(g.order() % h.size() == 0);  // Lagrange
    }
  }
}

TEST_CASE("all_subgroups counts") {
  CHECK(all_subgroups(z2()).size() == 2);
  CHECK(all_subgroups(z4()).size() == 3);
  CHECK(all_subgroups(s3()).size() == 6);
  int order2 = 0, order3 = 0;
  for (const auto& h : all_subgroups(s3())) {
    if (h.size() == 2) ++order2;
    if (h.size() == 3) ++order3;
  }
  CHECK(order2 == 3);
  CHECK(order3 == 1);
}

TEST_CASE("normalizer") {
  FiniteGroup g = s3();
  CHECK(normalizer(g, trivial_subgroup(g)).size() == 6);
  for (const auto& h : all_subgroups(g)) {
    if (h.size() == 2) {
      // An order-2 subgroup of S3 is self-normalizing.
      CHECK(normalizer(g, h).members == h.members);
    }
    // H is normal in its normalizer.
    Subgroup n = normalizer(g, h);
    for (int e : n.members) CHECK(conjugate_subgroup(g, h, e).members == h.members);
  }
  FiniteGroup a = z4();
  for (const auto& h : all_subgroups(a)) CHECK(normalizer(a, h).size() == 4);
}

TEST_CASE("conjugacy classes of subgroups") {
  auto classes = conj_classes_of_subgroups(s3());
  REQUIRE(classes.size() == 4);
  CHECK(classes[0].representative.size() == 1);
  CHECK(classes[1].representative.size() == 2);
  CHECK(classes[1].members.size() == 3);
  CHECK(classes[2].representative.size() == 3);
  CHECK(classes[3].representative.size() == 6);

  // Classes partition all_subgroups; conjugators are witnesses.
  std::set<std::vector<int>> seen;
  for (const auto& cls : classes) {
    REQUIRE(cls.members.size() == cls.conjugators.size());
    bool rep_found = false;
    for (size_t i = 0; i < cls.members.size(); ++i) {
      CHECK(conjugate_subgroup(s3(), cls.representative, cls.conjugators[i]).members ==
            cls.members[i].members);
      CHECK(seen.insert(cls.members[i].members).second);
      if (cls.members[i] == cls.representative) rep_found = true;
    }
    CHECK(rep_found);
  }
  CHECK(seen.size() == all_subgroups(s3()).size());

  CHECK(conj_classes_of_subgroups(z2()).size() == 2);
  // Abelian: one class per subgroup.
  CHECK(conj_classes_of_subgroups(v4()).size() == all_subgroups(v4()).size());
}

TEST_CASE("n_conj_class") {
  FiniteGroup g = s3();
  Subgroup h;
  for (const auto& s : all_subgroups(g))
    if (s.size() == 2) {
      h = s;
      break;
    }
  CHECK(n_conj_class(g, h, normalizer(g, h)).size() == 1);
  CHECK(n_conj_class(g, h, full_subgroup(g)).size() == 3);
  CHECK(n_conj_class(g, h, trivial_subgroup(g)).size() == 1);

  // [H]_N is contained in [H] for every subgroup pair.
  for (const auto& hh : all_subgroups(g)) {
    auto full = conj_class_of(g, hh);
    std::set<std::vector<int>> full_set;
    for (const auto& m : full.members) full_set.insert(m.members);
    for (const auto& nn : all_subgroups(g))
      for (const auto& k : n_conj_class(g, hh, nn)) CHECK(full_set.count(k.members) == 1);
  }
}

#pragma once

#include <optional>
#include <vector>

#include "equimaps/collapse.hpp"

namespace equimaps {

struct ClosureResult {
  std::vector<EquivariantMap> elements;  // first-discovery order, identity first
  int generation_depth = 0;              // max word length used
  size_t size = 0;
};

/// BFS closure of the generators under composition (finite g-sets).
ClosureResult monoid_closure(const GSetPtr& gs, const std::vector<EquivariantMap>& gens,
                             long long cap = 100000);

struct RankSearchResult {
  long long rank = 0;
  std::vector<EquivariantMap> witness;  // a minimal set achieving the closure
};

/// Smallest k such that Aut together with some k-subset of End \ Aut generates
/// End. The search runs over Aut-Aut double-coset representatives, which
/// preserves exactness because replacing a generator by alpha.f.beta with
/// alpha, beta in Aut never changes the closure.
RankSearchResult relative_rank_bruteforce(const GSetPtr& gs, int max_k = 3,
                                          long long cap = 100000);

/// Classifies a finite map as an elementary collapse by its kernel/image
/// signature: the kernel partition must merge exactly one orbit onto a
/// pointwise-compatible target orbit, diagonal elsewhere.
std::optional<CollapseType> classify_collapse(const EquivariantMap& f);

/// All constructible collapse types of the g-set.
std::vector<CollapseType> constructible_types(const GSet& gs);

struct NecessityReport {
  bool pass = false;
  std::vector<CollapseType> missing;
  std::vector<std::optional<CollapseType>> classified;  // per generator
};

/// Whether every constructible type is represented among the generators.
NecessityReport necessity_check(const GSetPtr& gs, const std::vector<EquivariantMap>& gens);

}  // namespace equimaps

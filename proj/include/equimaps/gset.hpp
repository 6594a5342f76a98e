#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "equimaps/group.hpp"

namespace equimaps {

/// Extended count: a finite value or countably infinite.
struct ExtCount {
  bool infinite = false;
  long long value = 0;

  static ExtCount inf() { return {true, 0}; }
  static ExtCount of(long long v) { return {false, v}; }
  bool operator==(const ExtCount&) const = default;
};

enum class CaseTag { AllFinite, Case1, Case2, UnsupportedInfinite };

/// One orbit family G/H with a finite multiplicity or a countably infinite one.
struct OrbitSpec {
  Subgroup stabilizer;
  std::optional<long long> count;  // nullopt = countably infinite

  static OrbitSpec finite(Subgroup h, long long m) { return {std::move(h), m}; }
  static OrbitSpec infinite(Subgroup h) { return {std::move(h), std::nullopt}; }
};

/// A point of the G-set: stratum index, orbit index within the stratum
/// (unbounded on an infinite stratum), and a left-coset id of the stratum
/// subgroup. The point (i, lambda, c) is rep_c * x_{i,lambda}.
struct Point {
  int stratum = 0;
  long long orbit = 0;
  int coset = 0;

  auto operator<=>(const Point&) const = default;
};

/// Per-stratum data: the conjugacy class [H_i], coset tables for H_i, the
/// fixed representatives x_i / x'_i and the collapse targets y_{i,j} for the
/// strictly larger N_i-classes present in the action.
struct StratumInfo {
  SubgroupConjClass cls;                  // [H_i]
  Subgroup stabilizer;                    // H_i, the class representative
  Subgroup normalizer;                    // N_i = N_G(H_i)
  std::optional<long long> orbit_count;   // nullopt = infinite

  int coset_index = 0;                    // [G : H_i]
  std::vector<int> coset_of;              // element -> coset id of its coset of H_i
  std::vector<int> coset_rep;             // coset id -> smallest element
  std::vector<std::vector<int>> act;      // act[g][c] = coset id of g * rep_c

  /// N_i-classes [K]_{N_i} with H_i <= K and K in Stab_G(X); the class
  /// [H_i]_{N_i} itself comes first, then ascending (|K|, lexicographic).
  struct NClass {
    std::vector<Subgroup> members;        // sorted; members[0] is canonical
    bool same_class = false;              // true for [H_i]_{N_i} itself
  };
  std::vector<NClass> u_classes;

  /// For each strictly larger N_i-class, the fixed target y_{i,j} with
  /// stabilizer exactly K_{i,j} = members[0] of that class; 1-based ordinal j.
  struct CollapseTarget {
    Subgroup k;
    Point y;
    int ordinal = 0;
  };
  std::vector<CollapseTarget> collapse_targets;
};

/// A G-set as a disjoint union of coset orbits, grouped into strata by the
/// conjugacy class of the stabilizer and ordered by |H_i| ascending. At most
/// one stratum is countably infinite.
class GSet {
 public:
  const FiniteGroup& group() const { return group_; }
  const std::vector<StratumInfo>& strata() const { return strata_; }
  const StratumInfo& stratum(int i) const { return strata_[i]; }
  int stratum_count() const { return static_cast<int>(strata_.size()); }
  CaseTag case_tag() const { return tag_; }
  bool all_finite() const { return tag_ == CaseTag::AllFinite; }
  int infinite_stratum() const { return infinite_stratum_; }

  bool valid_point(const Point& p) const;
  void require_point(const Point& p) const;

  /// g . p within p's stratum.
  Point act(int g, const Point& p) const;
  /// { g : g . p = p }; equals rep_c H_i rep_c^-1.
  Subgroup stabilizer_of(const Point& p) const;

  /// Designated representative of orbit lambda in stratum i (coset 0, so its
  /// stabilizer is exactly H_i).
  Point rep(int i, long long lambda) const { return Point{i, lambda, 0}; }
  Point x(int i) const { return rep(i, 0); }
  /// Second fixed representative; only when the stratum has >= 2 orbits.
  Point x_prime(int i) const;

  /// Total number of points (finite g-sets only).
  long long total_points() const;
  /// Points of stratum i: |X_i| * [G : H_i].
  ExtCount stratum_size(int i) const;

  /// Dense point id on finite g-sets, lexicographic in (stratum, orbit, coset).
  long long flat_id(const Point& p) const;
  Point from_flat(long long id) const;

  /// Canonical ordinal of (stratum, orbit) among finite-strata representatives.
  int finite_rep_ordinal(int stratum, long long orbit) const;
  const std::vector<std::pair<int, long long>>& finite_reps() const { return finite_reps_; }

  /// Stab_G(X) (all exact stabilizers, full conjugacy classes) and Conj_G(X)
  /// (the classes, in stratum order).
  std::pair<std::vector<Subgroup>, std::vector<SubgroupConjClass>> stab_classes() const;

 private:
  friend std::shared_ptr<const GSet> build_gset(FiniteGroup group, const std::vector<OrbitSpec>& orbits);

  explicit GSet(FiniteGroup group) : group_(std::move(group)) {}

  FiniteGroup group_;
  std::vector<StratumInfo> strata_;
  CaseTag tag_ = CaseTag::AllFinite;
  int infinite_stratum_ = -1;
  std::vector<std::pair<int, long long>> finite_reps_;
};

std::shared_ptr<const GSet> build_gset(FiniteGroup group, const std::vector<OrbitSpec>& orbits);

using GSetPtr = std::shared_ptr<const GSet>;

}  // namespace equimaps

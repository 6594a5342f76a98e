#pragma once

#include <cstdint>
#include <vector>

namespace equimaps {

/// Finite group stored as a Cayley table. Element ids are 0..order-1 and id 0
/// is the identity. Groups built from permutation generators also remember the
/// permutation image of every element.
class FiniteGroup {
 public:
  /// Validates the table: identity row/column at 0, associativity on all
  /// triples, two-sided inverses.
  static FiniteGroup from_cayley(std::vector<std::vector<int>> table);

  /// BFS closure of the generators under composition. Element 0 is the
  /// identity; discovery order is parent-major, generator-minor, so ids are
  /// reproducible across runs.
  static FiniteGroup from_permutation_generators(int degree,
                                                 const std::vector<std::vector<int>>& generators,
                                                 int order_cap = 10000);

  int order() const { return static_cast<int>(cayley_.size()); }
  int mul(int a, int b) const { return cayley_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  const std::vector<std::vector<int>>& cayley() const { return cayley_; }

  bool has_permutation_images() const { return degree_ > 0; }
  int degree() const { return degree_; }
  const std::vector<int>& permutation(int e) const { return perms_[e]; }

 private:
  FiniteGroup() = default;

  std::vector<std::vector<int>> cayley_;
  std::vector<int> inverse_;
  int degree_ = 0;                        // 0 when no permutation images
  std::vector<std::vector<int>> perms_;   // per element, when present
};

/// Subgroup as a sorted member-id list plus a membership mask. The canonical
/// identity of a subgroup is its sorted member sequence.
struct Subgroup {
  std::vector<int> members;     // sorted, contains 0
  std::vector<char> mask;       // size = group order

  int size() const { return static_cast<int>(members.size()); }
  bool contains(int e) const { return mask[e] != 0; }

  bool operator==(const Subgroup& o) const { return members == o.members; }
  bool operator<(const Subgroup& o) const {
    if (members.size() != o.members.size()) return members.size() < o.members.size();
    return members < o.members;
  }
};

Subgroup make_subgroup(const FiniteGroup& g, std::vector<int> members);
bool is_subgroup(const FiniteGroup& g, const std::vector<int>& members);
Subgroup trivial_subgroup(const FiniteGroup& g);
Subgroup full_subgroup(const FiniteGroup& g);

/// Smallest subgroup containing the given elements.
Subgroup subgroup_closure(const FiniteGroup& g, const std::vector<int>& gens);

/// g^-1 * h * g as a subgroup.
Subgroup conjugate_subgroup(const FiniteGroup& g, const Subgroup& h, int by);

/// Every subgroup exactly once, sorted by (size, lexicographic member list).
/// Enumeration is a layered closure: cyclic subgroups first, then pairwise
/// joins until nothing new appears.
std::vector<Subgroup> all_subgroups(const FiniteGroup& g);

/// N_G(H) = { n : n^-1 H n = H }.
Subgroup normalizer(const FiniteGroup& g, const Subgroup& h);

struct SubgroupConjClass {
  Subgroup representative;            // lexicographically smallest member
  std::vector<Subgroup> members;      // sorted, pairwise distinct
  std::vector<int> conjugators;       // per member, some c with c^-1 * rep * c = member
};

/// Conjugacy class of h under the full group.
SubgroupConjClass conj_class_of(const FiniteGroup& g, const Subgroup& h);

/// All classes, partitioning all_subgroups(g), sorted by (representative size,
/// lexicographic representative).
std::vector<SubgroupConjClass> conj_classes_of_subgroups(const FiniteGroup& g);

/// [H]_N = { n^-1 H n : n in N }, deduplicated, sorted canonically.
std::vector<Subgroup> n_conj_class(const FiniteGroup& g, const Subgroup& h, const Subgroup& n);

}  // namespace equimaps

#include "equimaps/group.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "equimaps/error.hpp"

namespace equimaps {

namespace {

std::vector<int> compose_perm(const std::vector<int>& a, const std::vector<int>& b) {
  // (a*b)(x) = a(b(x))
  std::vector<int> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
  return r;
}

}  // namespace

FiniteGroup FiniteGroup::from_cayley(std::vector<std::vector<int>> table) {
  const int n = static_cast<int>(table.size());
  if (n == 0) fail("invalid-group", "empty Cayley table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) fail("invalid-group", "Cayley table is not square");
    for (int v : row)
      if (v < 0 || v >= n) fail("invalid-group", "Cayley entry out of range");
  }
  for (int i = 0; i < n; ++i) {
    if (table[0][i] != i || table[i][0] != i)
      fail("invalid-group", "element 0 is not the identity");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          fail("invalid-group", "Cayley table is not associative");

  FiniteGroup g;
  g.cayley_ = std::move(table);
  g.inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (g.cayley_[a][b] == 0 && g.cayley_[b][a] == 0) {
        g.inverse_[a] = b;
        break;
      }
    }
    if (g.inverse_[a] < 0) fail("invalid-group", "element without a two-sided inverse");
  }
  return g;
}

FiniteGroup FiniteGroup::from_permutation_generators(int degree,
                                                     const std::vector<std::vector<int>>& generators,
                                                     int order_cap) {
  if (degree <= 0) fail("invalid-group", "degree must be positive");
  for (const auto& p : generators) {
    if (static_cast<int>(p.size()) != degree) fail("invalid-group", "generator has wrong degree");
    std::vector<char> seen(degree, 0);
    for (int v : p) {
      if (v < 0 || v >= degree || seen[v]) fail("invalid-group", "generator is not a bijection");
      seen[v] = 1;
    }
  }

  std::vector<int> identity(degree);
  for (int i = 0; i < degree; ++i) identity[i] = i;

  std::vector<std::vector<int>> elems{identity};
  std::map<std::vector<int>, int> index{{identity, 0}};
  std::queue<int> frontier;
  frontier.push(0);
  while (!frontier.empty()) {
    int e = frontier.front();
    frontier.pop();
    for (const auto& gen : generators) {
      auto p = compose_perm(elems[e], gen);
      if (index.emplace(p, static_cast<int>(elems.size())).second) {
        elems.push_back(p);
        if (static_cast<int>(elems.size()) > order_cap) fail("cap-exceeded", "group too large");
        frontier.push(static_cast<int>(elems.size()) - 1);
      }
    }
  }

  const int n = static_cast<int>(elems.size());
  FiniteGroup g;
  g.cayley_.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      g.cayley_[a][b] = index.at(compose_perm(elems[a], elems[b]));
  g.inverse_.assign(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.cayley_[a][b] == 0) {
        g.inverse_[a] = b;
        break;
      }
  g.degree_ = degree;
  g.perms_ = std::move(elems);
  return g;
}

Subgroup make_subgroup(const FiniteGroup& g, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!is_subgroup(g, members)) fail("invalid-gset", "member set is not a subgroup");
  Subgroup h;
  h.mask.assign(g.order(), 0);
  for (int e : members) h.mask[e] = 1;
  h.members = std::move(members);
  return h;
}

bool is_subgroup(const FiniteGroup& g, const std::vector<int>& members) {
  if (members.empty()) return false;
  std::vector<char> mask(g.order(), 0);
  for (int e : members) {
    if (e < 0 || e >= g.order()) return false;
    mask[e] = 1;
  }
  if (!mask[0]) return false;
  for (int a : members) {
    if (!mask[g.inv(a)]) return false;
    for (int b : members)
      if (!mask[g.mul(a, b)]) return false;
  }
  return true;
}

Subgroup trivial_subgroup(const FiniteGroup& g) { return make_subgroup(g, {0}); }

Subgroup full_subgroup(const FiniteGroup& g) {
  std::vector<int> all(g.order());
  for (int i = 0; i < g.order(); ++i) all[i] = i;
  return make_subgroup(g, all);
}

Subgroup subgroup_closure(const FiniteGroup& g, const std::vector<int>& gens) {
  std::vector<char> mask(g.order(), 0);
  std::vector<int> elems{0};
  mask[0] = 1;
  std::queue<int> frontier;
  frontier.push(0);
  for (int e : gens) {
    if (e < 0 || e >= g.order()) fail("invalid-gset", "generator id out of range");
    if (!mask[e]) {
      mask[e] = 1;
      elems.push_back(e);
      frontier.push(e);
    }
  }
  while (!frontier.empty()) {
    int a = frontier.front();
    frontier.pop();
    for (size_t i = 0; i < elems.size(); ++i) {
      int b = elems[i];
      for (int p : {g.mul(a, b), g.mul(b, a), g.inv(a)}) {
        if (!mask[p]) {
          mask[p] = 1;
          elems.push_back(p);
          frontier.push(p);
        }
      }
    }
  }
  return make_subgroup(g, elems);
}

Subgroup conjugate_subgroup(const FiniteGroup& g, const Subgroup& h, int by) {
  std::vector<int> members;
  members.reserve(h.members.size());
  int byi = g.inv(by);
  for (int e : h.members) members.push_back(g.mul(g.mul(byi, e), by));
  std::sort(members.begin(), members.end());
  Subgroup r;
  r.members = std::move(members);
  r.mask.assign(g.order(), 0);
  for (int e : r.members) r.mask[e] = 1;
  return r;
}

std::vector<Subgroup> all_subgroups(const FiniteGroup& g) {
  std::set<std::vector<int>> known;
  std::vector<Subgroup> result;
  auto add = [&](const Subgroup& h) {
    if (known.insert(h.members).second) {
      result.push_back(h);
      return true;
    }
    return false;
  };
  add(trivial_subgroup(g));
  for (int e = 0; e < g.order(); ++e) add(subgroup_closure(g, {e}));

  // Layered pairwise joins until fixpoint; every subgroup is a join of cyclic
  // subgroups, so this is exhaustive.
  bool grew = true;
  while (grew) {
    grew = false;
    const size_t snapshot = result.size();
    for (size_t i = 0; i < snapshot; ++i) {
      for (size_t j = i + 1; j < snapshot; ++j) {
        std::vector<int> gens = result[i].members;
        gens.insert(gens.end(), result[j].members.begin(), result[j].members.end());
        if (add(subgroup_closure(g, gens))) grew = true;
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

Subgroup normalizer(const FiniteGroup& g, const Subgroup& h) {
  std::vector<int> members;
  for (int n = 0; n < g.order(); ++n) {
    bool fixes = true;
    int ni = g.inv(n);
    for (int e : h.members) {
      if (!h.contains(g.mul(g.mul(ni, e), n))) {
        fixes = false;
        break;
      }
    }
    if (fixes) members.push_back(n);
  }
  return make_subgroup(g, members);
}

SubgroupConjClass conj_class_of(const FiniteGroup& g, const Subgroup& h) {
  std::map<std::vector<int>, int> seen;  // member list -> conjugator
  for (int c = 0; c < g.order(); ++c) {
    Subgroup k = conjugate_subgroup(g, h, c);
    seen.emplace(k.members, c);
  }
  SubgroupConjClass cls;
  // Representative: lexicographically smallest member set. Re-anchor the
  // conjugators on it so c^-1 * rep * c = member holds for every member.
  cls.representative = make_subgroup(g, seen.begin()->first);
  for (int c = 0; c < g.order(); ++c) {
    Subgroup k = conjugate_subgroup(g, cls.representative, c);
    bool present = false;
    for (const auto& m : cls.members)
      if (m == k) {
        present = true;
        break;
      }
    if (!present) {
      cls.members.push_back(k);
      cls.conjugators.push_back(c);
    }
  }
  return cls;
}

std::vector<SubgroupConjClass> conj_classes_of_subgroups(const FiniteGroup& g) {
  std::vector<SubgroupConjClass> classes;
  std::set<std::vector<int>> covered;
  for (const auto& h : all_subgroups(g)) {
    if (covered.count(h.members)) continue;
    SubgroupConjClass cls = conj_class_of(g, h);
    for (const auto& m : cls.members) covered.insert(m.members);
    classes.push_back(std::move(cls));
  }
  std::sort(classes.begin(), classes.end(),
            [](const SubgroupConjClass& a, const SubgroupConjClass& b) {
              return a.representative < b.representative;
            });
  return classes;
}

std::vector<Subgroup> n_conj_class(const FiniteGroup& g, const Subgroup& h, const Subgroup& n) {
  std::set<std::vector<int>> seen;
  std::vector<Subgroup> out;
  for (int e : n.members) {
    Subgroup k = conjugate_subgroup(g, h, e);
    if (seen.insert(k.members).second) out.push_back(std::move(k));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace equimaps

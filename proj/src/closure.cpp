#include "equimaps/closure.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "equimaps/error.hpp"

namespace equimaps {

namespace {

using Dense = std::vector<int>;

Dense dense_compose(const Dense& f, const Dense& g) {
  Dense h(f.size());
  for (size_t i = 0; i < f.size(); ++i) h[i] = f[g[i]];
  return h;
}

bool dense_bijective(const Dense& f) {
  std::vector<char> hit(f.size(), 0);
  for (int v : f) {
    if (hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

// Registry of dense tables with memoized composition, shared by the closure
// BFS and the rank search.
class DenseMonoid {
 public:
  explicit DenseMonoid(long long points) : points_(points) {}

  int intern(const Dense& t) {
    auto [it, fresh] = index_.emplace(t, static_cast<int>(tables_.size()));
    if (fresh) tables_.push_back(t);
    return it->second;
  }
  std::optional<int> find(const Dense& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  const Dense& table(int i) const { return tables_[i]; }
  size_t size() const { return tables_.size(); }

  int compose(int a, int b) {
    uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int r = intern(dense_compose(tables_[a], tables_[b]));
    memo_.emplace(key, r);
    return r;
  }

 private:
  long long points_;
  std::map<Dense, int> index_;
  std::vector<Dense> tables_;
  std::unordered_map<uint64_t, int> memo_;
};

// BFS closure over interned indices; returns them in first-discovery order.
std::pair<std::vector<int>, int> closure_indices(DenseMonoid& monoid, long long points,
                                                 const std::vector<int>& gens, long long cap) {
  Dense identity(points);
  for (long long i = 0; i < points; ++i) identity[i] = static_cast<int>(i);
  int id = monoid.intern(identity);

  std::vector<int> elements{id};
  std::set<int> seen{id};
  for (int g : gens)
    if (seen.insert(g).second) elements.push_back(g);

  int depth = elements.size() > 1 ? 1 : 0;
  size_t layer_begin = 0;
  while (layer_begin < elements.size()) {
    size_t layer_end = elements.size();
    bool grew = false;
    for (size_t i = layer_begin; i < layer_end; ++i) {
      for (int g : gens) {
        int p = monoid.compose(g, elements[i]);
        if (seen.insert(p).second) {
          elements.push_back(p);
          grew = true;
          if (static_cast<long long>(elements.size()) > cap)
            fail("cap-exceeded", "monoid closure exceeds the cap");
        }
      }
    }
    if (grew) ++depth;
    layer_begin = layer_end;
  }
  return {elements, depth};
}

}  // namespace

ClosureResult monoid_closure(const GSetPtr& gs, const std::vector<EquivariantMap>& gens,
                             long long cap) {
  if (!gs->all_finite()) fail("unsupported-case", "closure needs a finite g-set");
  const long long points = gs->total_points();
  DenseMonoid monoid(points);
  std::vector<int> gen_idx;
  for (const auto& g : gens) gen_idx.push_back(monoid.intern(to_dense(g)));
  auto [elements, depth] = closure_indices(monoid, points, gen_idx, cap);

  ClosureResult result;
  result.generation_depth = depth;
  result.size = elements.size();
  for (int e : elements) result.elements.push_back(from_dense(gs, monoid.table(e)));
  return result;
}

RankSearchResult relative_rank_bruteforce(const GSetPtr& gs, int max_k, long long cap) {
  if (!gs->all_finite()) fail("unsupported-case", "rank search needs a finite g-set");
  const long long points = gs->total_points();
  if (count_end(*gs) > cap) fail("cap-exceeded", "End too large for the rank search");

  DenseMonoid monoid(points);
  std::vector<int> all_end, aut;
  for (const auto& f : enumerate_end(gs, cap)) {
    int idx = monoid.intern(to_dense(f));
    all_end.push_back(idx);
    if (dense_bijective(monoid.table(idx))) aut.push_back(idx);
  }
  std::set<int> end_set(all_end.begin(), all_end.end());
  auto closure_is_end = [&](const std::vector<int>& gens) {
    return closure_indices(monoid, points, gens, cap).first.size() == end_set.size();
  };

  if (closure_is_end(aut)) return {0, {}};

  // Candidates modulo Aut-Aut double cosets.
  std::set<int> aut_set(aut.begin(), aut.end());
  std::set<int> covered;
  std::vector<int> reps;
  for (int f : all_end) {
    if (aut_set.count(f) || covered.count(f)) continue;
    reps.push_back(f);
    std::vector<int> orbit{f};
    covered.insert(f);
    for (size_t i = 0; i < orbit.size(); ++i) {
      for (int a : aut) {
        for (int b : aut) {
          int img = monoid.compose(a, monoid.compose(orbit[i], b));
          if (covered.insert(img).second) orbit.push_back(img);
        }
      }
    }
  }

  std::vector<int> subset;
  auto search = [&](auto&& self, int k, size_t next) -> bool {
    if (static_cast<int>(subset.size()) == k) {
      std::vector<int> gens = aut;
      gens.insert(gens.end(), subset.begin(), subset.end());
      return closure_is_end(gens);
    }
    for (size_t i = next; i < reps.size(); ++i) {
      subset.push_back(reps[i]);
      if (self(self, k, i + 1)) return true;
      subset.pop_back();
    }
    return false;
  };

  for (int k = 1; k <= max_k; ++k) {
    subset.clear();
    if (search(search, k, 0)) {
      RankSearchResult result;
      result.rank = k;
      for (int idx : subset) result.witness.push_back(from_dense(gs, monoid.table(idx)));
      return result;
    }
  }
  fail("cap-exceeded", "no generating subset within the search depth");
}

std::optional<CollapseType> classify_collapse(const EquivariantMap& f) {
  const GSetPtr& gs = f.gset();
  if (!gs->all_finite()) fail("unsupported-case", "classification needs a finite g-set");
  const long long n = gs->total_points();
  Dense table = to_dense(f);

  // Nontrivial kernel classes.
  std::map<int, std::vector<long long>> classes;
  for (long long id = 0; id < n; ++id) classes[table[id]].push_back(id);
  std::vector<std::vector<long long>> nontrivial;
  for (auto& [img, cls] : classes)
    if (cls.size() >= 2) nontrivial.push_back(std::move(cls));
  if (nontrivial.empty()) return std::nullopt;

  // The union of the nontrivial classes must be one source orbit A plus one
  // target orbit B, each class holding exactly one B-point.
  auto orbit_key = [&](long long id) {
    Point p = gs->from_flat(id);
    return std::pair<int, long long>{p.stratum, p.orbit};
  };
  std::set<std::pair<int, long long>> orbits;
  for (const auto& cls : nontrivial)
    for (long long id : cls) orbits.insert(orbit_key(id));
  if (orbits.size() != 2) return std::nullopt;

  auto in_orbit = [&](long long id, const std::pair<int, long long>& o) { return orbit_key(id) == o; };
  auto o1 = *orbits.begin(), o2 = *std::next(orbits.begin());

  for (auto [source, target] : {std::pair{o1, o2}, std::pair{o2, o1}}) {
    // Every class: one target point, the rest source points; classes cover the
    // target orbit exactly once and the source orbit completely.
    bool ok = true;
    long long covered_source = 0, covered_target = 0;
    for (const auto& cls : nontrivial) {
      long long t = 0;
      for (long long id : cls) {
        if (in_orbit(id, target))
          ++t;
        else if (!in_orbit(id, source))
          ok = false;
      }
      if (t != 1) ok = false;
      covered_target += t;
      covered_source += static_cast<long long>(cls.size()) - t;
    }
    if (!ok) continue;
    const StratumInfo& src_s = gs->stratum(source.first);
    const StratumInfo& tgt_s = gs->stratum(target.first);
    if (covered_source != src_s.coset_index || covered_target != tgt_s.coset_index) continue;
    if (src_s.stabilizer.size() > tgt_s.stabilizer.size()) continue;

    // Normalize on a source point with stabilizer exactly H_i and read the
    // target class from its class partner.
    Point x = gs->rep(source.first, source.second);
    long long xid = gs->flat_id(x);
    const std::vector<long long>* x_class = nullptr;
    for (const auto& cls : nontrivial)
      if (std::find(cls.begin(), cls.end(), xid) != cls.end()) x_class = &cls;
    if (!x_class) continue;
    Point partner;
    for (long long id : *x_class)
      if (in_orbit(id, target)) partner = gs->from_flat(id);

    Subgroup k = gs->stabilizer_of(partner);
    bool contains = true;
    for (int e : src_s.stabilizer.members)
      if (!k.contains(e)) contains = false;
    if (!contains) continue;

    CollapseType type;
    type.stratum = source.first;
    type.target_class = n_conj_class(gs->group(), k, src_s.normalizer);
    type.same_class = (k == src_s.stabilizer);

    // Condition 1 on the actual image of x.
    Subgroup img_stab = gs->stabilizer_of(f.evaluate(x));
    if (n_conj_class(gs->group(), img_stab, src_s.normalizer) != type.target_class) continue;
    return type;
  }
  return std::nullopt;
}

std::vector<CollapseType> constructible_types(const GSet& gs) {
  std::vector<CollapseType> types;
  for (int i = 0; i < gs.stratum_count(); ++i) {
    const StratumInfo& s = gs.stratum(i);
    for (const auto& nc : s.u_classes) {
      if (nc.same_class && s.orbit_count && *s.orbit_count < 2) continue;
      CollapseType t;
      t.stratum = i;
      t.target_class = nc.members;
      t.same_class = nc.same_class;
      types.push_back(std::move(t));
    }
  }
  return types;
}

NecessityReport necessity_check(const GSetPtr& gs, const std::vector<EquivariantMap>& gens) {
  NecessityReport report;
  for (const auto& g : gens) report.classified.push_back(classify_collapse(g));
  for (const auto& type : constructible_types(*gs)) {
    bool found = false;
    for (const auto& c : report.classified)
      if (c && *c == type) found = true;
    if (!found) report.missing.push_back(type);
  }
  report.pass = report.missing.empty();
  return report;
}

}  // namespace equimaps

#include "equimaps/gset.hpp"

#include <algorithm>
#include <map>

#include "equimaps/error.hpp"

namespace equimaps {

namespace {

void build_coset_tables(const FiniteGroup& g, StratumInfo& s) {
  const int n = g.order();
  s.coset_of.assign(n, -1);
  s.coset_rep.clear();
  for (int e = 0; e < n; ++e) {
    if (s.coset_of[e] >= 0) continue;
    int id = static_cast<int>(s.coset_rep.size());
    s.coset_rep.push_back(e);
    for (int h : s.stabilizer.members) s.coset_of[g.mul(e, h)] = id;
  }
  s.coset_index = static_cast<int>(s.coset_rep.size());
  s.act.assign(n, std::vector<int>(s.coset_index));
  for (int e = 0; e < n; ++e)
    for (int c = 0; c < s.coset_index; ++c)
      s.act[e][c] = s.coset_of[g.mul(e, s.coset_rep[c])];
}

}  // namespace

std::shared_ptr<const GSet> build_gset(FiniteGroup group, const std::vector<OrbitSpec>& orbits) {
  if (orbits.empty()) fail("invalid-gset", "a g-set needs at least one orbit family");

  int infinite_specs = 0;
  for (const auto& spec : orbits) {
    if (!is_subgroup(group, spec.stabilizer.members))
      fail("invalid-gset", "orbit stabilizer is not a subgroup");
    if (spec.count) {
      if (*spec.count < 1) fail("invalid-gset", "orbit multiplicity must be >= 1");
    } else {
      ++infinite_specs;
    }
  }
  if (infinite_specs > 1) fail("invalid-gset", "at most one orbit family may be infinite");

  // Group the specs by the conjugacy class of their stabilizer.
  std::map<std::vector<int>, std::pair<SubgroupConjClass, std::optional<long long>>> by_class;
  for (const auto& spec : orbits) {
    SubgroupConjClass cls = conj_class_of(group, spec.stabilizer);
    auto key = cls.representative.members;
    auto it = by_class.find(key);
    if (it == by_class.end())
      it = by_class.emplace(key, std::make_pair(std::move(cls), std::optional<long long>(0))).first;
    auto& count = it->second.second;
    if (!spec.count)
      count.reset();
    else if (count)
      *count += *spec.count;
  }

  std::shared_ptr<GSet> gs(new GSet(std::move(group)));
  GSet& out = *gs;
  const FiniteGroup& g = out.group_;

  for (auto& [key, entry] : by_class) {
    StratumInfo s;
    s.cls = std::move(entry.first);
    s.stabilizer = s.cls.representative;
    s.normalizer = normalizer(g, s.stabilizer);
    s.orbit_count = entry.second;
    build_coset_tables(g, s);
    out.strata_.push_back(std::move(s));
  }
  std::sort(out.strata_.begin(), out.strata_.end(),
            [](const StratumInfo& a, const StratumInfo& b) {
              return a.stabilizer < b.stabilizer;
            });

  out.tag_ = CaseTag::AllFinite;
  for (int i = 0; i < out.stratum_count(); ++i) {
    if (!out.strata_[i].orbit_count) {
      out.infinite_stratum_ = i;
      const Subgroup& h = out.strata_[i].stabilizer;
      if (h.size() == g.order())
        out.tag_ = CaseTag::Case1;
      else if (h.size() == 1)
        out.tag_ = CaseTag::Case2;
      else
        out.tag_ = CaseTag::UnsupportedInfinite;
    }
  }

  // Stab_G(X): the full conjugacy classes of the strata stabilizers.
  std::vector<Subgroup> stab;
  for (const auto& s : out.strata_)
    stab.insert(stab.end(), s.cls.members.begin(), s.cls.members.end());
  std::sort(stab.begin(), stab.end());
  stab.erase(std::unique(stab.begin(), stab.end()), stab.end());

  for (auto& s : out.strata_) {
    // U(H_i): N_i-classes of the K in Stab_G(X) containing H_i.
    std::map<std::vector<int>, StratumInfo::NClass> classes;
    for (const auto& k : stab) {
      bool contains = true;
      for (int e : s.stabilizer.members)
        if (!k.contains(e)) {
          contains = false;
          break;
        }
      if (!contains) continue;
      StratumInfo::NClass nc;
      nc.members = n_conj_class(g, k, s.normalizer);
      nc.same_class = (k == s.stabilizer);
      classes.emplace(nc.members.front().members, std::move(nc));
    }
    for (auto& [key, nc] : classes) s.u_classes.push_back(std::move(nc));
    std::sort(s.u_classes.begin(), s.u_classes.end(),
              [](const StratumInfo::NClass& a, const StratumInfo::NClass& b) {
                return a.members.front() < b.members.front();
              });

    // One fixed target y_{i,j} per strictly larger class: the lowest-index
    // point whose stabilizer is exactly K_{i,j}.
    int ordinal = 0;
    for (const auto& nc : s.u_classes) {
      if (nc.same_class) continue;
      ++ordinal;
      const Subgroup& k = nc.members.front();
      StratumInfo::CollapseTarget t;
      t.k = k;
      t.ordinal = ordinal;
      bool found = false;
      for (int j = 0; j < out.stratum_count() && !found; ++j) {
        const StratumInfo& sj = out.strata_[j];
        if (sj.stabilizer.size() != k.size()) continue;
        for (int c = 0; c < sj.coset_index; ++c) {
          if (conjugate_subgroup(g, sj.stabilizer, g.inv(sj.coset_rep[c])) == k) {
            t.y = Point{j, 0, c};
            found = true;
            break;
          }
        }
      }
      if (!found) fail("internal", "collapse target not in action");
      s.collapse_targets.push_back(std::move(t));
    }
  }

  for (int i = 0; i < out.stratum_count(); ++i) {
    const auto& s = out.strata_[i];
    if (s.orbit_count) {
      for (long long l = 0; l < *s.orbit_count; ++l) out.finite_reps_.emplace_back(i, l);
    }
  }
  return gs;
}

bool GSet::valid_point(const Point& p) const {
  if (p.stratum < 0 || p.stratum >= stratum_count()) return false;
  const auto& s = strata_[p.stratum];
  if (p.orbit < 0) return false;
  if (s.orbit_count && p.orbit >= *s.orbit_count) return false;
  return p.coset >= 0 && p.coset < s.coset_index;
}

void GSet::require_point(const Point& p) const {
  if (!valid_point(p)) fail("invalid-point", "point outside the g-set");
}

Point GSet::act(int g, const Point& p) const {
  require_point(p);
  if (g < 0 || g >= group_.order()) fail("invalid-point", "group element out of range");
  return Point{p.stratum, p.orbit, strata_[p.stratum].act[g][p.coset]};
}

Subgroup GSet::stabilizer_of(const Point& p) const {
  require_point(p);
  const auto& s = strata_[p.stratum];
  return conjugate_subgroup(group_, s.stabilizer, group_.inv(s.coset_rep[p.coset]));
}

Point GSet::x_prime(int i) const {
  const auto& s = strata_[i];
  if (s.orbit_count && *s.orbit_count < 2)
    fail("invalid-point", "stratum has a single orbit, no second representative");
  return rep(i, 1);
}

long long GSet::total_points() const {
  if (!all_finite()) fail("unsupported-case", "infinite g-set");
  long long total = 0;
  for (const auto& s : strata_) total += *s.orbit_count * s.coset_index;
  return total;
}

ExtCount GSet::stratum_size(int i) const {
  const auto& s = strata_[i];
  if (!s.orbit_count) return ExtCount::inf();
  return ExtCount::of(*s.orbit_count * s.coset_index);
}

long long GSet::flat_id(const Point& p) const {
  require_point(p);
  long long id = 0;
  for (int i = 0; i < p.stratum; ++i) id += *strata_[i].orbit_count * strata_[i].coset_index;
  return id + p.orbit * strata_[p.stratum].coset_index + p.coset;
}

Point GSet::from_flat(long long id) const {
  for (int i = 0; i < stratum_count(); ++i) {
    long long size = *strata_[i].orbit_count * strata_[i].coset_index;
    if (id < size) return Point{i, id / strata_[i].coset_index,
                                static_cast<int>(id % strata_[i].coset_index)};
    id -= size;
  }
  fail("invalid-point", "flat id out of range");
}

int GSet::finite_rep_ordinal(int stratum, long long orbit) const {
  long long ord = 0;
  for (int i = 0; i < stratum; ++i)
    if (strata_[i].orbit_count) ord += *strata_[i].orbit_count;
  if (!strata_[stratum].orbit_count) fail("invalid-point", "representative on the infinite stratum");
  return static_cast<int>(ord + orbit);
}

std::pair<std::vector<Subgroup>, std::vector<SubgroupConjClass>> GSet::stab_classes() const {
  std::vector<Subgroup> stab;
  std::vector<SubgroupConjClass> classes;
  for (const auto& s : strata_) {
    stab.insert(stab.end(), s.cls.members.begin(), s.cls.members.end());
    classes.push_back(s.cls);
  }
  std::sort(stab.begin(), stab.end());
  stab.erase(std::unique(stab.begin(), stab.end()), stab.end());
  return {stab, classes};
}

}  // namespace equimaps

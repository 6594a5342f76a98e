#include "equimaps/collapse.hpp"

#include <algorithm>
#include <map>

#include "equimaps/error.hpp"

namespace equimaps {

namespace {

// Builds a map from per-orbit changes: each touched orbit's designated
// representative is sent to the given point, every other orbit is fixed.
EquivariantMap from_orbit_changes(const GSetPtr& gs,
                                  const std::map<std::pair<int, long long>, Point>& changes) {
  std::vector<Point> images = EquivariantMap::identity(gs).rep_images();
  FinitePatch patch;
  for (const auto& [key, img] : changes) {
    const auto& [stratum, orbit] = key;
    if (stratum == gs->infinite_stratum())
      patch.entries.emplace(orbit, img);
    else
      images[gs->finite_rep_ordinal(stratum, orbit)] = img;
  }
  TailWord tail;
  if (!patch.entries.empty()) tail.emplace_back(std::move(patch));
  return EquivariantMap::from_parts(gs, std::move(images), std::move(tail));
}

bool stabilizer_fixes(const GSet& gs, const Point& x, const Point& y) {
  for (int h : gs.stabilizer_of(x).members)
    if (gs.act(h, y) != y) return false;
  return true;
}

}  // namespace

const NamedGenerator* GeneratorSet::find(const std::string& name) const {
  for (const auto& g : named)
    if (g.name == name) return &g;
  return nullptr;
}

const std::vector<StratumInfo::NClass>& u_set(const GSet& gs, int stratum) {
  return gs.stratum(stratum).u_classes;
}

std::vector<int> kappa_classes(const GSet& gs) {
  std::vector<int> out;
  for (int i = 0; i < gs.stratum_count(); ++i) {
    const auto& count = gs.stratum(i).orbit_count;
    if (count && *count == 1) out.push_back(i);
  }
  return out;
}

long long collapse_type_count(const GSet& gs) {
  long long total = 0;
  for (int i = 0; i < gs.stratum_count(); ++i)
    total += static_cast<long long>(gs.stratum(i).u_classes.size());
  return total - static_cast<long long>(kappa_classes(gs).size());
}

EquivariantMap make_point_collapse(const GSetPtr& gs, const Point& x, const Point& y) {
  gs->require_point(x);
  gs->require_point(y);
  if (x == y) return EquivariantMap::identity(gs);
  if (!stabilizer_fixes(*gs, x, y))
    fail("infeasible-map", "G_x is not contained in G_y");
  if (x.stratum == y.stratum && x.orbit == y.orbit)
    fail("infeasible-map", "collapse endpoints must lie in distinct orbits");
  int a = gs->stratum(x.stratum).coset_rep[x.coset];
  return from_orbit_changes(gs, {{{x.stratum, x.orbit}, gs->act(gs->group().inv(a), y)}});
}

EquivariantMap make_transposition(const GSetPtr& gs, const Point& x, const Point& y) {
  gs->require_point(x);
  gs->require_point(y);
  if (x == y) return EquivariantMap::identity(gs);
  if (!(gs->stabilizer_of(x) == gs->stabilizer_of(y)))
    fail("infeasible-map", "transposition requires G_x = G_y");
  const FiniteGroup& g = gs->group();
  int a = gs->stratum(x.stratum).coset_rep[x.coset];
  if (x.stratum == y.stratum && x.orbit == y.orbit) {
    // y = n.x within one orbit: the swap is the right multiplication R_n,
    // consistent only when n^2 lies in the stabilizer.
    int n = -1;
    for (int e = 0; e < g.order(); ++e)
      if (gs->act(e, x) == y) {
        n = e;
        break;
      }
    if (!gs->stabilizer_of(x).contains(g.mul(n, n)))
      fail("infeasible-map", "transposition within one orbit is not well-defined");
    return from_orbit_changes(gs, {{{x.stratum, x.orbit}, gs->act(g.inv(a), y)}});
  }
  int b = gs->stratum(y.stratum).coset_rep[y.coset];
  return from_orbit_changes(gs, {{{x.stratum, x.orbit}, gs->act(g.inv(a), y)},
                                 {{y.stratum, y.orbit}, gs->act(g.inv(b), x)}});
}

EquivariantMap make_orbit_right_mult(const GSetPtr& gs, int stratum, long long orbit, int n) {
  const StratumInfo& s = gs->stratum(stratum);
  if (!s.normalizer.contains(n))
    fail("infeasible-map", "right multiplication needs an element of the normalizer");
  return from_orbit_changes(gs, {{{stratum, orbit}, Point{stratum, orbit, s.coset_of[n]}}});
}

std::string collapse_name(int stratum, int ordinal) {
  return "collapse:" + std::to_string(stratum + 1) + "→(" + std::to_string(stratum + 1) +
         "," + std::to_string(ordinal) + ")";
}

std::string swap_collapse_name(int stratum) {
  return "swap-collapse:" + std::to_string(stratum + 1);
}

GeneratorSet build_W(const GSetPtr& gs) {
  GeneratorSet w;
  w.gs = gs;
  for (int i = 0; i < gs->stratum_count(); ++i) {
    const StratumInfo& s = gs->stratum(i);
    for (const auto& target : s.collapse_targets) {
      CollapseType t{i, n_conj_class(gs->group(), target.k, s.normalizer), false};
      w.named.push_back({collapse_name(i, target.ordinal),
                         make_point_collapse(gs, gs->x(i), target.y), std::move(t)});
    }
    if (!s.orbit_count || *s.orbit_count >= 2) {
      CollapseType t{i, {s.stabilizer}, true};
      w.named.push_back({swap_collapse_name(i),
                         make_point_collapse(gs, gs->x(i), gs->x_prime(i)), std::move(t)});
    }
  }
  return w;
}

EquivariantMap make_mu_hat(const GSetPtr& gs) {
  if (gs->infinite_stratum() < 0) fail("unsupported-case", "mu-hat needs an infinite stratum");
  return EquivariantMap::from_parts(gs, EquivariantMap::identity(gs).rep_images(), {MuAtom{}});
}

EquivariantMap make_nu_hat(const GSetPtr& gs) {
  if (gs->infinite_stratum() < 0) fail("unsupported-case", "nu-hat needs an infinite stratum");
  return EquivariantMap::from_parts(gs, EquivariantMap::identity(gs).rep_images(), {NuAtom{}});
}

GeneratorSet build_V(const GSetPtr& gs) {
  if (gs->case_tag() != CaseTag::Case1 && gs->case_tag() != CaseTag::Case2)
    fail("unsupported-case", "V is defined for case-1 and case-2 g-sets only");
  GeneratorSet v = build_W(gs);
  const std::string removed = swap_collapse_name(gs->infinite_stratum());
  std::erase_if(v.named, [&](const NamedGenerator& g) { return g.name == removed; });
  v.named.push_back({"mu-hat", make_mu_hat(gs), std::nullopt});
  v.named.push_back({"nu-hat", make_nu_hat(gs), std::nullopt});
  return v;
}

long long relative_rank_formula(const GSet& gs) {
  switch (gs.case_tag()) {
    case CaseTag::AllFinite:
      return collapse_type_count(gs);
    case CaseTag::Case1:
    case CaseTag::Case2:
      return collapse_type_count(gs) + 1;
    default:
      fail("unsupported-case", "infinite stratum at an intermediate subgroup");
  }
}

}  // namespace equimaps

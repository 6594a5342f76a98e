#include "equimaps/factorize.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "equimaps/error.hpp"

namespace equimaps {

namespace {

// The tail of every map entering the pipeline is a single finite patch (or
// empty); anything else was rejected up front.
const FinitePatch* tail_patch(const EquivariantMap& f) {
  if (f.tail().empty()) return nullptr;
  if (f.tail().size() > 1 || !std::holds_alternative<FinitePatch>(f.tail().front()))
    fail("unsupported-tail", "tail is not finitely supported");
  return &std::get<FinitePatch>(f.tail().front());
}

EquivariantMap map_from_parts(const GSetPtr& gs, std::vector<Point> images, FinitePatch patch) {
  TailWord tail;
  if (!patch.entries.empty()) tail.emplace_back(std::move(patch));
  return EquivariantMap::from_parts(gs, std::move(images), std::move(tail));
}

// Smallest n in N_i with n K n^-1 = L.
int conjugation_realizer(const FiniteGroup& g, const Subgroup& normal, const Subgroup& k,
                         const Subgroup& l) {
  for (int n : normal.members)
    if (conjugate_subgroup(g, k, g.inv(n)) == l) return n;
  fail("internal", "collapse target not in action");
}

// The inner/outer fix-up pair around a collapse: T_inner sends a^-1.w back to
// y, T_outer = T_inner^-1. A transposition when the orbits differ, a right
// multiplication pair when w lies in y's orbit, identities when the points
// coincide.
std::pair<Factor, Factor> make_frame_pair(const GSetPtr& gs, const Point& y, const Point& target) {
  if (y == target) {
    EquivariantMap id = EquivariantMap::identity(gs);
    return {Factor::explicit_aut(id), Factor::explicit_aut(id)};
  }
  if (y.stratum == target.stratum && y.orbit == target.orbit) {
    const FiniteGroup& g = gs->group();
    const StratumInfo& s = gs->stratum(y.stratum);
    int u = s.coset_rep[y.coset];
    int v = s.coset_rep[target.coset];
    int m = g.mul(g.inv(v), u);  // R_m(target) = y
    EquivariantMap inner = make_orbit_right_mult(gs, y.stratum, y.orbit, m);
    EquivariantMap outer = make_orbit_right_mult(gs, y.stratum, y.orbit, g.inv(m));
    return {Factor::explicit_aut(std::move(inner)), Factor::explicit_aut(std::move(outer))};
  }
  EquivariantMap t = make_transposition(gs, y, target);
  return {Factor::explicit_aut(t), Factor::explicit_aut(t)};
}

// Looks up the named collapse [x_i -> y_{i,j}] whose target N_i-class is that
// of l, returning (name, y, n) with n K_{i,j} n^-1 = l.
struct TargetLookup {
  std::string name;
  Point y;
  int n;
};

TargetLookup lookup_collapse_target(const GSetPtr& gs, int stratum, const Subgroup& l,
                                    const GeneratorSet& gens) {
  const StratumInfo& s = gs->stratum(stratum);
  std::vector<Subgroup> l_class = n_conj_class(gs->group(), l, s.normalizer);
  for (const auto& target : s.collapse_targets) {
    if (n_conj_class(gs->group(), target.k, s.normalizer) == l_class) {
      TargetLookup out;
      out.name = collapse_name(stratum, target.ordinal);
      if (!gens.find(out.name)) fail("unresolved-name", "generator set lacks " + out.name);
      out.y = target.y;
      out.n = conjugation_realizer(gs->group(), s.normalizer, target.k, l);
      return out;
    }
  }
  fail("collapse-target-missing", "no fixed target for the required collapse type");
}

// Word for the single-orbit raise [x_rep(orbit) -> w] via the conjugated
// named collapse: (x_i <-> x_k)(x_i <-> n.x_i) T_out [x_i -> y] T_in
// (x_i <-> n.x_i)(x_i <-> x_k).
Word raise_block(const GSetPtr& gs, int stratum, long long orbit, const Point& w,
                 const GeneratorSet& gens) {
  Subgroup l = gs->stabilizer_of(w);
  TargetLookup target = lookup_collapse_target(gs, stratum, l, gens);
  Point shifted = gs->act(gs->group().inv(target.n), w);
  auto [inner, outer] = make_frame_pair(gs, target.y, shifted);
  Factor swap = Factor::explicit_aut(make_transposition(gs, gs->x(stratum), gs->rep(stratum, orbit)));
  Factor twist = Factor::explicit_aut(make_orbit_right_mult(gs, stratum, 0, target.n));

  Word word;
  word.factors = {swap, twist, std::move(outer), Factor::named(target.name), std::move(inner),
                  twist, swap};
  return word;
}

// Lifts an orbit permutation of one finite stratum to a twist-free
// automorphism.
EquivariantMap lift_orbit_permutation(const GSetPtr& gs, int stratum,
                                      const std::vector<long long>& perm) {
  std::map<std::pair<int, long long>, Point> changes;
  for (long long l = 0; l < static_cast<long long>(perm.size()); ++l)
    if (perm[l] != l) changes[{stratum, l}] = Point{stratum, perm[l], 0};
  std::vector<Point> images = EquivariantMap::identity(gs).rep_images();
  for (const auto& [key, img] : changes) images[gs->finite_rep_ordinal(key.first, key.second)] = img;
  return EquivariantMap::from_parts(gs, std::move(images));
}

// Extends a partial orbit bijection to a full permutation: unmatched sources
// go to unmatched targets in sorted order.
std::vector<long long> complete_permutation(long long m, const std::map<long long, long long>& part) {
  std::vector<char> used(m, 0);
  for (const auto& [a, b] : part) used[b] = 1;
  std::vector<long long> free_targets;
  for (long long t = 0; t < m; ++t)
    if (!used[t]) free_targets.push_back(t);
  std::vector<long long> perm(m);
  size_t next = 0;
  for (long long a = 0; a < m; ++a) {
    auto it = part.find(a);
    perm[a] = (it != part.end()) ? it->second : free_targets[next++];
  }
  return perm;
}

// Scheme word for a finitely supported index map f: nu-hat . sigma . mu-hat
// with sigma = fix . sigma0 routing the even image 2n into the pair cell
// <f(n), j>; identity off the support comes out exactly because
// nu(sigma0(mu(n))) = n.
Word scheme_word(const GSetPtr& gs, const std::map<long long, long long>& f,
                 const GeneratorSet& gens) {
  Word word;
  if (f.empty()) return word;

  std::set<long long> keys, vals;
  for (const auto& [a, b] : f) {
    keys.insert(a);
    vals.insert(b);
  }
  if (keys == vals) {
    // Finitely supported bijection: one automorphism factor.
    FinitePatch patch;
    for (const auto& [a, b] : f) patch.entries.emplace(a, Point{gs->infinite_stratum(), b, 0});
    word.factors.push_back(Factor::explicit_aut(
        map_from_parts(gs, EquivariantMap::identity(gs).rep_images(), std::move(patch))));
    return word;
  }

  if (!gens.find("mu-hat") || !gens.find("nu-hat"))
    fail("unresolved-name", "generator set lacks mu-hat / nu-hat");

  RuleBijection sigma;
  sigma.base = RuleBijection::Base::Sigma0;
  std::map<long long, long long> next_slot;  // per target class, next free j
  for (const auto& [n, fn] : f) {
    long long source = cantor_pair(n, 0);
    long long j = ++next_slot[fn];
    long long target = cantor_pair(fn, j);
    sigma.post[source] = target;
    sigma.post[target] = source;
  }
  EquivariantMap sigma_map = EquivariantMap::from_parts(
      gs, EquivariantMap::identity(gs).rep_images(), {TailAtom{sigma}});
  word.factors = {Factor::named("nu-hat"), Factor::explicit_aut(std::move(sigma_map)),
                  Factor::named("mu-hat")};
  return word;
}

void verify_part(const Word& word, const EquivariantMap& expected, const GeneratorSet& gens,
                 const char* what) {
  if (!maps_equal(recompose(word, gens), expected))
    fail("internal", std::string("factor word does not recompose: ") + what);
}

}  // namespace

std::vector<EquivariantMap> stratum_decompose(const EquivariantMap& tau) {
  const GSetPtr& gs = tau.gset();
  EquivariantMap id = EquivariantMap::identity(gs);
  std::vector<EquivariantMap> parts;
  for (int i = 0; i < gs->stratum_count(); ++i) {
    std::vector<Point> images = id.rep_images();
    TailWord tail;
    if (i == gs->infinite_stratum()) {
      tail = tau.tail();
    } else {
      for (long long l = 0; l < *gs->stratum(i).orbit_count; ++l) {
        Point q = tau.rep_image(i, l);
        if (q.stratum < i) fail("internal", "map sends a point to an earlier stratum");
        images[gs->finite_rep_ordinal(i, l)] = q;
      }
    }
    parts.push_back(EquivariantMap::from_parts(gs, std::move(images), std::move(tail)));
  }
  return parts;
}

std::pair<EquivariantMap, EquivariantMap> split_prime(const EquivariantMap& tau_i, int stratum) {
  const GSetPtr& gs = tau_i.gset();
  EquivariantMap id = EquivariantMap::identity(gs);
  std::vector<Point> prime = id.rep_images();
  std::vector<Point> dprime = id.rep_images();
  FinitePatch prime_patch, dprime_patch;
  if (stratum == gs->infinite_stratum()) {
    if (const FinitePatch* patch = tail_patch(tau_i)) {
      for (const auto& [n, q] : patch->entries)
        (q.stratum == stratum ? prime_patch : dprime_patch).entries.emplace(n, q);
    }
  } else {
    for (long long l = 0; l < *gs->stratum(stratum).orbit_count; ++l) {
      Point q = tau_i.rep_image(stratum, l);
      auto& side = (q.stratum == stratum) ? prime : dprime;
      side[gs->finite_rep_ordinal(stratum, l)] = q;
    }
  }
  return {map_from_parts(gs, std::move(prime), std::move(prime_patch)),
          map_from_parts(gs, std::move(dprime), std::move(dprime_patch))};
}

Word factor_raising(const EquivariantMap& tau_dprime, int stratum, const GeneratorSet& gens) {
  const GSetPtr& gs = tau_dprime.gset();
  if (stratum == gs->infinite_stratum())
    fail("unsupported-case", "raising off the infinite stratum is the case-2 construction");
  Word word;
  for (long long l = 0; l < *gs->stratum(stratum).orbit_count; ++l) {
    Point w = tau_dprime.rep_image(stratum, l);
    if (w == gs->rep(stratum, l)) continue;
    if (w.stratum == stratum) fail("internal", "raising part preserves a stratum");
    word.append(raise_block(gs, stratum, l, w, gens));
  }
  verify_part(word, tau_dprime, gens, "raising");
  return word;
}

Word factor_preserving_finite(const EquivariantMap& tau_prime, int stratum,
                              const GeneratorSet& gens) {
  const GSetPtr& gs = tau_prime.gset();
  const StratumInfo& s = gs->stratum(stratum);
  const long long m = *s.orbit_count;

  std::vector<long long> orbit_map(m);
  std::vector<int> twist(m);
  bool is_perm;
  {
    std::set<long long> image;
    for (long long l = 0; l < m; ++l) {
      Point q = tau_prime.rep_image(stratum, l);
      if (q.stratum != stratum) fail("internal", "preserving part leaves its stratum");
      orbit_map[l] = q.orbit;
      twist[l] = s.coset_rep[q.coset];
      image.insert(q.orbit);
    }
    is_perm = static_cast<long long>(image.size()) == m;
  }

  Word word;
  if (tau_prime.is_identity()) return word;
  if (is_perm) {
    word.factors.push_back(Factor::explicit_aut(tau_prime));
    verify_part(word, tau_prime, gens, "preserving automorphism");
    return word;
  }

  // tau' = Pi . merges . R: twists first, then the kernel classes of the
  // orbit map collapse onto their minimum via conjugates of [x_i -> x'_i],
  // then a permutation places the class minima onto the image.
  const std::string swap_name = swap_collapse_name(stratum);
  if (!gens.find(swap_name)) fail("unresolved-name", "generator set lacks " + swap_name);

  std::map<long long, std::vector<long long>> classes;  // image orbit -> sources
  for (long long l = 0; l < m; ++l) classes[orbit_map[l]].push_back(l);

  Word merges;
  std::map<long long, long long> minima;  // class min -> image orbit
  for (const auto& [img, sources] : classes) {
    long long root = sources.front();
    minima[root] = img;
    for (size_t idx = 1; idx < sources.size(); ++idx) {
      long long a = sources[idx];
      std::vector<long long> delta =
          complete_permutation(m, std::map<long long, long long>{{0, a}, {1, root}});
      std::vector<long long> delta_inv(m);
      for (long long t = 0; t < m; ++t) delta_inv[delta[t]] = t;
      EquivariantMap lifted = lift_orbit_permutation(gs, stratum, delta);
      EquivariantMap lifted_inv = lift_orbit_permutation(gs, stratum, delta_inv);
      if (!lifted.is_identity()) merges.factors.push_back(Factor::explicit_aut(lifted));
      merges.factors.push_back(Factor::named(swap_name));
      if (!lifted_inv.is_identity()) merges.factors.push_back(Factor::explicit_aut(lifted_inv));
    }
  }

  std::vector<long long> pi = complete_permutation(m, minima);
  EquivariantMap pi_map = lift_orbit_permutation(gs, stratum, pi);
  if (!pi_map.is_identity()) word.factors.push_back(Factor::explicit_aut(pi_map));
  word.append(std::move(merges));

  std::map<std::pair<int, long long>, Point> twist_changes;
  for (long long l = 0; l < m; ++l)
    if (twist[l] != 0) twist_changes[{stratum, l}] = Point{stratum, l, s.coset_of[twist[l]]};
  if (!twist_changes.empty()) {
    std::vector<Point> images = EquivariantMap::identity(gs).rep_images();
    for (const auto& [key, img] : twist_changes)
      images[gs->finite_rep_ordinal(key.first, key.second)] = img;
    word.factors.push_back(
        Factor::explicit_aut(EquivariantMap::from_parts(gs, std::move(images))));
  }
  verify_part(word, tau_prime, gens, "preserving finite");
  return word;
}

Word factor_preserving_infinite(const EquivariantMap& tau_prime, const GeneratorSet& gens) {
  const GSetPtr& gs = tau_prime.gset();
  const int inf = gs->infinite_stratum();
  std::map<long long, long long> index_map;
  FinitePatch twist_patch;
  if (const FinitePatch* patch = tail_patch(tau_prime)) {
    for (const auto& [n, q] : patch->entries) {
      if (q.stratum != inf) fail("internal", "preserving part leaves the infinite stratum");
      if (q.orbit != n) index_map[n] = q.orbit;
      // tau' = T_f . A with A the per-orbit twist on the source orbit.
      if (q.coset != 0) twist_patch.entries.emplace(n, Point{inf, n, q.coset});
    }
  }
  Word word = scheme_word(gs, index_map, gens);
  if (!twist_patch.entries.empty())
    word.factors.push_back(Factor::explicit_aut(
        map_from_parts(gs, EquivariantMap::identity(gs).rep_images(), std::move(twist_patch))));
  verify_part(word, tau_prime, gens, "preserving infinite");
  return word;
}

Word factor_case2_trivial_stratum(const EquivariantMap& tau_dprime, const GeneratorSet& gens) {
  const GSetPtr& gs = tau_dprime.gset();
  if (gs->case_tag() != CaseTag::Case2)
    fail("unsupported-case", "trivial-stratum raising is the case-2 construction");
  const int inf = gs->infinite_stratum();

  // Group the raised representatives by their exact image point z.
  std::map<Point, std::vector<long long>> fibers;
  if (const FinitePatch* patch = tail_patch(tau_dprime)) {
    for (const auto& [n, q] : patch->entries) {
      if (q.stratum == inf) fail("internal", "raising part preserves the infinite stratum");
      fibers[q].push_back(n);
    }
  }

  Word word;
  for (const auto& [z, sources] : fibers) {
    Subgroup l = gs->stabilizer_of(z);
    TargetLookup target = lookup_collapse_target(gs, inf, l, gens);
    Point shifted = gs->act(gs->group().inv(target.n), z);
    auto [inner, outer] = make_frame_pair(gs, target.y, shifted);

    const bool x1_in_fiber = std::find(sources.begin(), sources.end(), 0) != sources.end();
    std::map<long long, long long> gather;  // f_{t,p} on orbit indices
    for (long long nidx : sources)
      if (nidx != 0) gather[nidx] = 0;
    Word block;
    if (!x1_in_fiber) {
      long long pivot = sources.front();  // smallest index in the fiber
      gather[0] = pivot;
      block.factors.push_back(
          Factor::explicit_aut(make_transposition(gs, gs->rep(inf, 0), gs->rep(inf, pivot))));
    }
    block.factors.push_back(std::move(outer));
    block.factors.push_back(Factor::named(target.name));
    block.factors.push_back(std::move(inner));
    block.factors.push_back(Factor::explicit_aut(make_orbit_right_mult(gs, inf, 0, target.n)));
    block.append(scheme_word(gs, gather, gens));

    // Each block must equal the one-fiber collapse exactly.
    FinitePatch fiber_patch;
    for (long long nidx : sources) fiber_patch.entries.emplace(nidx, z);
    verify_part(block, map_from_parts(gs, EquivariantMap::identity(gs).rep_images(), fiber_patch),
                gens, "case-2 block");
    word.append(std::move(block));
  }
  verify_part(word, tau_dprime, gens, "case-2 raising");
  return word;
}

FactorizationReport factor(const EquivariantMap& tau, const GeneratorSet& gens) {
  const GSetPtr& gs = tau.gset();
  if (gens.gs != gs) fail("internal", "generator set built for a different g-set");
  if (gs->case_tag() == CaseTag::UnsupportedInfinite)
    fail("unsupported-case", "infinite stratum at an intermediate subgroup");

  FactorizationReport report;

  // A named generator or an automorphism is its own factorization.
  for (const auto& g : gens.named) {
    if (maps_equal(tau, g.map)) {
      report.word.factors.push_back(Factor::named(g.name));
      report.length = 1;
      report.verified = maps_equal(recompose(report.word, gens), tau);
      return report;
    }
  }
  if (is_bijective_shape(tau)) {
    report.word.factors.push_back(Factor::explicit_aut(tau));
    report.length = 1;
    report.verified = maps_equal(recompose(report.word, gens), tau);
    return report;
  }

  tail_patch(tau);  // rejects tails that are not finitely supported

  std::vector<EquivariantMap> parts = stratum_decompose(tau);
  for (int i = 0; i < gs->stratum_count(); ++i) {
    auto [prime, dprime] = split_prime(parts[i], i);
    StageReport stage{i, parts[i], prime, dprime, 0, 0};

    Word dprime_word;
    if (!dprime.is_identity()) {
      dprime_word = (i == gs->infinite_stratum())
                        ? factor_case2_trivial_stratum(dprime, gens)
                        : factor_raising(dprime, i, gens);
    }
    Word prime_word;
    if (!prime.is_identity()) {
      prime_word = (i == gs->infinite_stratum()) ? factor_preserving_infinite(prime, gens)
                                                 : factor_preserving_finite(prime, i, gens);
    }
    stage.preserving_factors = prime_word.size();
    stage.raising_factors = dprime_word.size();
    report.stages.push_back(std::move(stage));

    report.word.append(std::move(prime_word));
    report.word.append(std::move(dprime_word));
  }

  report.length = report.word.size();
  report.verified = maps_equal(recompose(report.word, gens), tau);
  if (!report.verified) fail("internal", "factorization failed to verify");
  return report;
}

EquivariantMap recompose(const Word& word, const GeneratorSet& gens) {
  EquivariantMap acc = EquivariantMap::identity(gens.gs);
  for (auto it = word.factors.rbegin(); it != word.factors.rend(); ++it) {
    const EquivariantMap* f = nullptr;
    if (!it->name.empty()) {
      const NamedGenerator* g = gens.find(it->name);
      if (!g) fail("unresolved-name", "unknown generator name: " + it->name);
      f = &g->map;
    } else {
      if (!it->aut) fail("unresolved-name", "factor carries neither name nor map");
      if (!is_bijective_shape(*it->aut))
        fail("infeasible-map", "explicit factor is not an automorphism");
      f = &*it->aut;
    }
    acc = compose(*f, acc);
  }
  return acc;
}

}  // namespace equimaps

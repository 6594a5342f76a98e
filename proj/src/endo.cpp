#include "equimaps/endo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "equimaps/error.hpp"

namespace equimaps {

namespace {

constexpr long long kIndexCap = 1LL << 62;

long long checked_index(__int128 v, const char* what) {
  if (v < 0 || v > kIndexCap) fail("cap-exceeded", std::string("orbit index overflow in ") + what);
  return static_cast<long long>(v);
}

long long isqrt_ll(long long v) {
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

long long triangular(long long n) { return checked_index((__int128)n * (n + 1) / 2, "triangular"); }

bool is_triangular(long long v) {
  long long w = (isqrt_ll(8 * v + 1) - 1) / 2;
  return triangular(w) == v;
}

// Number of triangular numbers <= v.
long long tri_count_le(long long v) {
  long long w = (isqrt_ll(8 * v + 1) - 1) / 2;
  return w + 1;
}

}  // namespace

long long cantor_pair(long long i, long long j) {
  return checked_index((__int128)(i + j) * (i + j + 1) / 2 + j, "cantor_pair");
}

long long cantor_first(long long m) {
  long long w = (isqrt_ll(8 * m + 1) - 1) / 2;
  long long j = m - triangular(w);
  return w - j;
}

long long sigma0(long long n) {
  if (n % 2 == 0) return triangular(n / 2);  // the cell <n/2, 0>
  long long k = n / 2;  // k-th non-triangular, 0-indexed
  long long lo = 1, hi = k + 2 + isqrt_ll(2 * (k + 2)) + 2;
  while (lo < hi) {
    long long mid = lo + (hi - lo) / 2;
    long long nontri = mid + 1 - tri_count_le(mid);
    if (nontri >= k + 1)
      hi = mid;
    else
      lo = mid + 1;
  }
  if (is_triangular(lo)) ++lo;
  return lo;
}

long long RuleBijection::eval(long long n) const {
  long long b = (base == Base::Sigma0) ? sigma0(n) : n;
  auto it = post.find(b);
  return it == post.end() ? b : it->second;
}

namespace {

bool patch_entry_is_identity(const GSet& gs, long long n, const Point& q) {
  return q.stratum == gs.infinite_stratum() && q.orbit == n && q.coset == 0;
}

bool atom_is_identity(const GSet& gs, const TailAtom& atom) {
  if (const auto* p = std::get_if<FinitePatch>(&atom)) {
    for (const auto& [n, q] : p->entries)
      if (!patch_entry_is_identity(gs, n, q)) return false;
    return true;
  }
  if (const auto* r = std::get_if<RuleBijection>(&atom)) return r->is_identity();
  return false;
}

FinitePatch fuse_patches(const GSet& gs, const FinitePatch& outer, const FinitePatch& inner) {
  const int inf = gs.infinite_stratum();
  FinitePatch fused;
  for (const auto& [n, q] : inner.entries) {
    Point img = q;
    if (q.stratum == inf) {
      auto it = outer.entries.find(q.orbit);
      if (it != outer.entries.end())
        img = gs.act(gs.stratum(inf).coset_rep[q.coset], it->second);
    }
    if (!patch_entry_is_identity(gs, n, img)) fused.entries.emplace(n, img);
  }
  for (const auto& [n, q] : outer.entries) {
    if (inner.entries.count(n)) continue;
    if (!patch_entry_is_identity(gs, n, q)) fused.entries.emplace(n, q);
  }
  return fused;
}

}  // namespace

TailWord normalize_tail(const GSet& gs, TailWord word) {
  TailWord out;
  for (auto& atom : word) {
    if (auto* p = std::get_if<FinitePatch>(&atom))
      std::erase_if(p->entries,
                    [&](const auto& e) { return patch_entry_is_identity(gs, e.first, e.second); });
    if (atom_is_identity(gs, atom)) continue;
    if (std::holds_alternative<FinitePatch>(atom) && !out.empty() &&
        std::holds_alternative<FinitePatch>(out.back())) {
      // out.back() is applied after the incoming atom (list order is
      // outermost-first), so it is the outer patch of the fusion.
      FinitePatch fused = fuse_patches(gs, std::get<FinitePatch>(out.back()),
                                       std::get<FinitePatch>(atom));
      out.pop_back();
      if (!fused.entries.empty()) out.emplace_back(std::move(fused));
      continue;
    }
    out.push_back(std::move(atom));
  }
  return out;
}

std::string reduced_tail_symbols(const TailWord& word) {
  std::string s;
  for (const auto& atom : word) {
    if (std::holds_alternative<MuAtom>(atom))
      s += 'm';
    else if (std::holds_alternative<NuAtom>(atom))
      s += 'n';
    else if (const auto* r = std::get_if<RuleBijection>(&atom)) {
      if (r->base == RuleBijection::Base::Sigma0) s += 's';
    }
  }
  for (size_t pos; (pos = s.find("nsm")) != std::string::npos;) s.erase(pos, 3);
  return s;
}

// ---------------------------------------------------------------------------
// EquivariantMap
// ---------------------------------------------------------------------------

EquivariantMap EquivariantMap::identity(GSetPtr gs) {
  std::vector<Point> images;
  images.reserve(gs->finite_reps().size());
  for (const auto& [i, l] : gs->finite_reps()) images.push_back(Point{i, l, 0});
  return from_parts(std::move(gs), std::move(images));
}

EquivariantMap EquivariantMap::from_parts(GSetPtr gs, std::vector<Point> rep_images, TailWord tail) {
  if (rep_images.size() != gs->finite_reps().size())
    fail("infeasible-map", "wrong number of representative images");
  for (size_t r = 0; r < rep_images.size(); ++r) {
    const auto& [i, l] = gs->finite_reps()[r];
    gs->require_point(rep_images[r]);
    // Feasibility: an equivariant extension exists iff H_i fixes the image
    // pointwise (G_x <= G_{f(x)}).
    for (int h : gs->stratum(i).stabilizer.members)
      if (gs->act(h, rep_images[r]) != rep_images[r])
        fail("infeasible-map", "stabilizer not contained in image stabilizer");
  }
  const int inf = gs->infinite_stratum();
  if (inf < 0 && !tail.empty()) fail("infeasible-map", "tail on an all-finite g-set");
  if (inf >= 0) {
    const bool case1 = gs->case_tag() == CaseTag::Case1;
    for (const auto& atom : tail) {
      if (const auto* p = std::get_if<FinitePatch>(&atom)) {
        for (const auto& [n, q] : p->entries) {
          if (n < 0) fail("infeasible-map", "negative orbit index in patch");
          gs->require_point(q);
          if (case1 && q.stratum != inf)
            fail("infeasible-map", "fixed points cannot leave their stratum");
        }
      } else if (const auto* r = std::get_if<RuleBijection>(&atom)) {
        std::set<long long> keys, vals;
        for (const auto& [a, b] : r->post) {
          keys.insert(a);
          vals.insert(b);
        }
        if (keys != vals) fail("infeasible-map", "rule post-map is not a permutation");
      }
    }
  }
  EquivariantMap f;
  f.gs_ = std::move(gs);
  f.rep_images_ = std::move(rep_images);
  f.tail_ = normalize_tail(*f.gs_, std::move(tail));
  return f;
}

Point EquivariantMap::tail_eval_index(long long n) const {
  const int inf = gs_->infinite_stratum();
  Point z{inf, n, 0};
  for (auto it = tail_.rbegin(); it != tail_.rend(); ++it) {
    if (z.stratum != inf) continue;  // escaped; index atoms act as identity
    if (const auto* p = std::get_if<FinitePatch>(&*it)) {
      auto e = p->entries.find(z.orbit);
      if (e != p->entries.end()) z = gs_->act(gs_->stratum(inf).coset_rep[z.coset], e->second);
    } else if (std::holds_alternative<MuAtom>(*it)) {
      z.orbit = checked_index((__int128)2 * z.orbit, "mu");
    } else if (std::holds_alternative<NuAtom>(*it)) {
      z.orbit = cantor_first(z.orbit);
    } else {
      z.orbit = std::get<RuleBijection>(*it).eval(z.orbit);
    }
  }
  return z;
}

Point EquivariantMap::rep_image(int stratum, long long orbit) const {
  if (stratum == gs_->infinite_stratum()) return tail_eval_index(orbit);
  return rep_images_[gs_->finite_rep_ordinal(stratum, orbit)];
}

Point EquivariantMap::evaluate(const Point& p) const {
  gs_->require_point(p);
  Point base = rep_image(p.stratum, p.orbit);
  return gs_->act(gs_->stratum(p.stratum).coset_rep[p.coset], base);
}

bool EquivariantMap::is_identity() const {
  if (!tail_.empty()) return false;
  for (size_t r = 0; r < rep_images_.size(); ++r) {
    const auto& [i, l] = gs_->finite_reps()[r];
    if (rep_images_[r] != Point{i, l, 0}) return false;
  }
  return true;
}

long long EquivariantMap::tail_touch_bound() const {
  long long bound = 0;
  const int inf = gs_->infinite_stratum();
  for (const auto& atom : tail_) {
    if (const auto* p = std::get_if<FinitePatch>(&atom)) {
      for (const auto& [n, q] : p->entries) {
        bound = std::max(bound, n);
        if (q.stratum == inf) bound = std::max(bound, q.orbit);
      }
    } else if (const auto* r = std::get_if<RuleBijection>(&atom)) {
      for (const auto& [a, b] : r->post) bound = std::max({bound, a, b});
    }
  }
  return bound;
}

EquivariantMap compose(const EquivariantMap& f, const EquivariantMap& g) {
  if (f.gset() != g.gset()) fail("internal", "composing maps over different g-sets");
  const GSetPtr& gs = f.gset();
  std::vector<Point> images;
  images.reserve(g.rep_images().size());
  for (const auto& q : g.rep_images()) images.push_back(f.evaluate(q));

  TailWord tail;
  if (gs->infinite_stratum() >= 0) {
    const int inf = gs->infinite_stratum();
    tail = f.tail();
    // Reroute g's stratum escapes through f now; the concatenated word treats
    // points off the infinite stratum as already final.
    for (const auto& atom : g.tail()) {
      if (const auto* p = std::get_if<FinitePatch>(&atom)) {
        FinitePatch rewritten;
        for (const auto& [n, q] : p->entries)
          rewritten.entries.emplace(n, q.stratum == inf ? q : f.evaluate(q));
        tail.emplace_back(std::move(rewritten));
      } else {
        tail.push_back(atom);
      }
    }
  }
  return EquivariantMap::from_parts(gs, std::move(images), std::move(tail));
}

bool window_equal(const EquivariantMap& f, const EquivariantMap& g, long long n) {
  if (f.gset() != g.gset()) return false;
  if (f.rep_images() != g.rep_images()) return false;
  if (f.gset()->infinite_stratum() < 0) return true;
  for (long long i = 0; i < n; ++i)
    if (f.tail_eval_index(i) != g.tail_eval_index(i)) return false;
  return true;
}

bool maps_equal(const EquivariantMap& f, const EquivariantMap& g) {
  if (f.gset() != g.gset()) return false;
  if (f.rep_images() != g.rep_images()) return false;
  if (f.gset()->infinite_stratum() < 0) return true;
  if (reduced_tail_symbols(f.tail()) != reduced_tail_symbols(g.tail())) return false;
  long long w = 2 * std::max(f.tail_touch_bound(), g.tail_touch_bound()) + 64;
  return window_equal(f, g, w);
}

bool is_bijective_shape(const EquivariantMap& f) {
  const GSet& gs = *f.gset();
  // Finite strata: each stratum's orbits permuted, stabilizers preserved
  // exactly (image coset representative normalizes H_i).
  std::vector<std::set<long long>> seen(gs.stratum_count());
  for (size_t r = 0; r < f.rep_images().size(); ++r) {
    const auto& [i, l] = gs.finite_reps()[r];
    const Point& q = f.rep_images()[r];
    if (q.stratum != i) return false;
    if (!gs.stratum(i).normalizer.contains(gs.stratum(i).coset_rep[q.coset])) return false;
    if (!seen[i].insert(q.orbit).second) return false;
  }
  for (const auto& atom : f.tail()) {
    if (std::holds_alternative<MuAtom>(atom) || std::holds_alternative<NuAtom>(atom)) return false;
    if (const auto* p = std::get_if<FinitePatch>(&atom)) {
      std::set<long long> dom, img;
      for (const auto& [n, q] : p->entries) {
        if (q.stratum != gs.infinite_stratum()) return false;
        dom.insert(n);
        img.insert(q.orbit);
      }
      if (dom != img) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Dense tables and equivariance
// ---------------------------------------------------------------------------

std::vector<int> to_dense(const EquivariantMap& f) {
  const GSet& gs = *f.gset();
  const long long n = gs.total_points();
  std::vector<int> table(n);
  for (long long id = 0; id < n; ++id)
    table[id] = static_cast<int>(gs.flat_id(f.evaluate(gs.from_flat(id))));
  return table;
}

EquivariantMap from_dense(GSetPtr gs, const std::vector<int>& table) {
  if (static_cast<long long>(table.size()) != gs->total_points())
    fail("infeasible-map", "dense table has wrong size");
  std::vector<Point> images;
  for (const auto& [i, l] : gs->finite_reps())
    images.push_back(gs->from_flat(table[gs->flat_id(Point{i, l, 0})]));
  return EquivariantMap::from_parts(gs, std::move(images));
}

bool check_equivariance(const GSet& gs, const std::vector<int>& table) {
  if (static_cast<long long>(table.size()) != gs.total_points()) return false;
  const long long n = gs.total_points();
  for (long long id = 0; id < n; ++id) {
    Point p = gs.from_flat(id);
    for (int g = 0; g < gs.group().order(); ++g) {
      long long lhs = gs.flat_id(gs.act(g, gs.from_flat(table[id])));
      long long rhs = table[gs.flat_id(gs.act(g, p))];
      if (lhs != rhs) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

namespace {

MapMetrics metrics_finite(const EquivariantMap& f) {
  const GSet& gs = *f.gset();
  const long long n = gs.total_points();
  auto table = to_dense(f);
  std::vector<char> hit(n, 0);
  for (int v : table) hit[v] = 1;
  long long range = std::count(hit.begin(), hit.end(), char(1));

  std::map<int, std::vector<long long>> classes;
  for (long long id = 0; id < n; ++id) classes[table[id]].push_back(id);
  MapMetrics m;
  m.range = ExtCount::of(range);
  m.defect = ExtCount::of(n - range);
  m.injective = (range == n);
  m.surjective = (range == n);
  long long full = 0;
  for (auto& [img, cls] : classes) {
    if (static_cast<long long>(cls.size()) == n) ++full;
    m.kernel.push_back(std::move(cls));
  }
  m.contraction = ExtCount::of(full);
  return m;
}

MapMetrics metrics_infinite(const EquivariantMap& f) {
  const GSet& gs = *f.gset();
  const int inf = gs.infinite_stratum();
  const std::string syms = reduced_tail_symbols(f.tail());
  const bool all_rules = !syms.empty() && syms.find_first_not_of('s') == std::string::npos;
  enum class Eventual { Identity, MuImage, NuAll, BijAll };
  Eventual ev;
  if (syms.empty())
    ev = Eventual::Identity;
  else if (syms == "m")
    ev = Eventual::MuImage;
  else if (syms == "n")
    ev = Eventual::NuAll;
  else if (all_rules)
    ev = Eventual::BijAll;
  else
    fail("internal", "tail shape without decidable metrics");

  long long bound = f.tail_touch_bound();
  for (const auto& q : f.rep_images())
    if (q.stratum == inf) bound = std::max(bound, q.orbit);
  const long long w = 2 * bound + 64;

  // Sources: every finite-strata orbit plus the infinite-stratum orbits in the
  // window. Image orbits are hit as whole orbits.
  struct Src {
    int stab_size;
    Point img;
  };
  std::vector<Src> sources;
  for (size_t r = 0; r < f.rep_images().size(); ++r) {
    const auto& [i, l] = gs.finite_reps()[r];
    sources.push_back({gs.stratum(i).stabilizer.size(), f.rep_images()[r]});
  }
  const int inf_stab = gs.stratum(inf).stabilizer.size();
  for (long long nidx = 0; nidx < w; ++nidx)
    sources.push_back({inf_stab, f.tail_eval_index(nidx)});

  std::set<std::pair<int, long long>> hit_orbits;
  bool collision = false;
  bool stab_grow = false;
  for (const auto& s : sources) {
    if (!hit_orbits.emplace(s.img.stratum, s.img.orbit).second) collision = true;
    if (gs.stratum(s.img.stratum).stabilizer.size() > s.stab_size) stab_grow = true;
  }

  long long missed_points = 0;
  for (int i = 0; i < gs.stratum_count(); ++i) {
    if (i == inf) continue;
    for (long long l = 0; l < *gs.stratum(i).orbit_count; ++l)
      if (!hit_orbits.count({i, l})) missed_points += gs.stratum(i).coset_index;
  }
  bool inf_side_covered = (ev == Eventual::NuAll || ev == Eventual::BijAll);
  long long missed_inf_window = 0;
  if (!inf_side_covered) {
    for (long long nidx = 0; nidx < w; ++nidx)
      if (!hit_orbits.count({inf, nidx})) missed_inf_window += gs.stratum(inf).coset_index;
  } else {
    // Every infinite-stratum orbit is eventually hit; a window source landing
    // there collides with that coverage.
    for (const auto& s : sources)
      if (s.img.stratum == inf && s.stab_size != inf_stab) collision = true;
  }

  MapMetrics m;
  m.range = ExtCount::inf();
  if (ev == Eventual::MuImage)
    m.defect = ExtCount::inf();
  else
    m.defect = ExtCount::of(missed_points + missed_inf_window);
  m.surjective = !m.defect.infinite && m.defect.value == 0;
  m.injective = !collision && !stab_grow && ev != Eventual::NuAll;
  m.contraction = (ev == Eventual::NuAll) ? ExtCount::inf() : ExtCount::of(0);
  return m;
}

}  // namespace

MapMetrics metrics(const EquivariantMap& f) {
  return f.gset()->all_finite() ? metrics_finite(f) : metrics_infinite(f);
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

// All points fixed pointwise by H_i, in (stratum, orbit, coset) order. These
// are exactly the feasible images for a stratum-i representative.
std::vector<Point> candidates_for_stratum(const GSet& gs, int i) {
  std::vector<Point> out;
  for (int j = 0; j < gs.stratum_count(); ++j) {
    const auto& sj = gs.stratum(j);
    for (long long l = 0; l < *sj.orbit_count; ++l) {
      for (int c = 0; c < sj.coset_index; ++c) {
        Point p{j, l, c};
        bool fixed = true;
        for (int h : gs.stratum(i).stabilizer.members)
          if (gs.act(h, p) != p) {
            fixed = false;
            break;
          }
        if (fixed) out.push_back(p);
      }
    }
  }
  return out;
}

}  // namespace

long long count_end(const GSet& gs) {
  if (!gs.all_finite()) fail("unsupported-case", "End enumeration needs a finite g-set");
  __int128 total = 1;
  for (int i = 0; i < gs.stratum_count(); ++i) {
    long long c = static_cast<long long>(candidates_for_stratum(gs, i).size());
    for (long long l = 0; l < *gs.stratum(i).orbit_count; ++l) {
      total *= c;
      if (total > std::numeric_limits<long long>::max()) return std::numeric_limits<long long>::max();
    }
  }
  return static_cast<long long>(total);
}

std::vector<EquivariantMap> enumerate_end(GSetPtr gs, long long cap) {
  if (!gs->all_finite()) fail("unsupported-case", "End enumeration needs a finite g-set");
  if (count_end(*gs) > cap) fail("cap-exceeded", "too many equivariant maps to enumerate");

  std::vector<std::vector<Point>> cands(gs->stratum_count());
  for (int i = 0; i < gs->stratum_count(); ++i) cands[i] = candidates_for_stratum(*gs, i);

  const auto& reps = gs->finite_reps();
  std::vector<size_t> odo(reps.size(), 0);
  std::vector<EquivariantMap> out;
  for (;;) {
    std::vector<Point> images;
    images.reserve(reps.size());
    for (size_t r = 0; r < reps.size(); ++r) images.push_back(cands[reps[r].first][odo[r]]);
    out.push_back(EquivariantMap::from_parts(gs, std::move(images)));
    int pos = static_cast<int>(reps.size()) - 1;
    while (pos >= 0) {
      if (++odo[pos] < cands[reps[pos].first].size()) break;
      odo[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

std::vector<EquivariantMap> enumerate_aut(GSetPtr gs, long long cap) {
  if (!gs->all_finite()) fail("unsupported-case", "Aut enumeration needs a finite g-set");

  // Per stratum: orbit permutations crossed with per-orbit twists from
  // N_i / H_i (right multiplications).
  struct StratumOptions {
    std::vector<std::vector<Point>> choices;  // images for this stratum's reps
  };
  std::vector<StratumOptions> options(gs->stratum_count());
  __int128 total = 1;
  for (int i = 0; i < gs->stratum_count(); ++i) {
    const auto& s = gs->stratum(i);
    const long long m = *s.orbit_count;
    std::vector<int> twists;
    for (int c = 0; c < s.coset_index; ++c)
      if (s.normalizer.contains(s.coset_rep[c])) twists.push_back(c);

    std::vector<long long> perm(m);
    for (long long l = 0; l < m; ++l) perm[l] = l;
    do {
      std::vector<size_t> odo(m, 0);
      for (;;) {
        std::vector<Point> images(m);
        for (long long l = 0; l < m; ++l) images[l] = Point{i, perm[l], twists[odo[l]]};
        options[i].choices.push_back(std::move(images));
        int pos = static_cast<int>(m) - 1;
        while (pos >= 0) {
          if (++odo[pos] < twists.size()) break;
          odo[pos] = 0;
          --pos;
        }
        if (pos < 0) break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    total *= static_cast<long long>(options[i].choices.size());
    if (total > cap) fail("cap-exceeded", "too many automorphisms to enumerate");
  }

  std::vector<size_t> odo(gs->stratum_count(), 0);
  std::vector<EquivariantMap> out;
  for (;;) {
    std::vector<Point> images;
    for (int i = 0; i < gs->stratum_count(); ++i) {
      const auto& block = options[i].choices[odo[i]];
      images.insert(images.end(), block.begin(), block.end());
    }
    EquivariantMap f = EquivariantMap::from_parts(gs, std::move(images));
    if (!is_bijective_shape(f)) fail("internal", "enumerated automorphism is not bijective");
    out.push_back(std::move(f));
    int pos = gs->stratum_count() - 1;
    while (pos >= 0) {
      if (++odo[pos] < options[pos].choices.size()) break;
      odo[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Restriction and induction
// ---------------------------------------------------------------------------

long long RepLevelMap::image_of(long long lambda) const {
  if (!infinite) return full[lambda];
  auto it = sparse.find(lambda);
  return it == sparse.end() ? lambda : it->second;
}

RepLevelMap restrict_to_reps(const EquivariantMap& f, int stratum) {
  const GSet& gs = *f.gset();
  RepLevelMap rm;
  rm.stratum = stratum;
  if (stratum == gs.infinite_stratum()) {
    rm.infinite = true;
    // Only patch-shaped tails restrict; every entry must be an exact
    // representative of the stratum.
    for (const auto& atom : f.tail()) {
      const auto* p = std::get_if<FinitePatch>(&atom);
      if (!p || f.tail().size() > 1)
        fail("not-representative-closed", "tail is not a single finite patch");
      for (const auto& [n, q] : p->entries) {
        if (q.stratum != stratum || q.coset != 0)
          fail("not-representative-closed", "image is not a designated representative");
        rm.sparse[n] = q.orbit;
      }
    }
    return rm;
  }
  const auto& s = gs.stratum(stratum);
  for (long long l = 0; l < *s.orbit_count; ++l) {
    Point q = f.rep_image(stratum, l);
    if (q.stratum != stratum || q.coset != 0)
      fail("not-representative-closed", "image is not a designated representative");
    rm.full.push_back(q.orbit);
  }
  return rm;
}

EquivariantMap induce_tilde(GSetPtr gs, const RepLevelMap& rep_map) {
  EquivariantMap id = EquivariantMap::identity(gs);
  std::vector<Point> images = id.rep_images();
  TailWord tail;
  if (rep_map.infinite) {
    FinitePatch patch;
    for (const auto& [n, m] : rep_map.sparse)
      patch.entries.emplace(n, Point{rep_map.stratum, m, 0});
    if (!patch.entries.empty()) tail.emplace_back(std::move(patch));
  } else {
    const auto& s = gs->stratum(rep_map.stratum);
    if (static_cast<long long>(rep_map.full.size()) != *s.orbit_count)
      fail("infeasible-map", "representative-level map has wrong size");
    for (long long l = 0; l < *s.orbit_count; ++l)
      images[gs->finite_rep_ordinal(rep_map.stratum, l)] = Point{rep_map.stratum, rep_map.full[l], 0};
  }
  return EquivariantMap::from_parts(gs, std::move(images), std::move(tail));
}

EquivariantMap induce_hat(const EquivariantMap& f, int stratum) {
  const GSet& gs = *f.gset();
  EquivariantMap id = EquivariantMap::identity(f.gset());
  std::vector<Point> images = id.rep_images();
  TailWord tail;
  if (stratum == gs.infinite_stratum()) {
    for (const auto& atom : f.tail()) {
      if (const auto* p = std::get_if<FinitePatch>(&atom))
        for (const auto& [n, q] : p->entries)
          if (q.stratum != stratum)
            fail("infeasible-map", "map does not send the stratum into itself");
      tail.push_back(atom);
    }
  } else {
    const auto& s = gs.stratum(stratum);
    for (long long l = 0; l < *s.orbit_count; ++l) {
      Point q = f.rep_image(stratum, l);
      if (q.stratum != stratum) fail("infeasible-map", "map does not send the stratum into itself");
      images[gs.finite_rep_ordinal(stratum, l)] = q;
    }
  }
  return EquivariantMap::from_parts(f.gset(), std::move(images), std::move(tail));
}

}  // namespace equimaps

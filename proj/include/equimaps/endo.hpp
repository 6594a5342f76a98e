#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "equimaps/gset.hpp"

namespace equimaps {

// ---------------------------------------------------------------------------
// Infinite-stratum tails.
//
// A map's action on the infinite stratum is a word of atoms applied
// right-to-left to the representative family x_0, x_1, ... Index atoms (mu,
// nu, rule bijections) act on orbit indices and leave every other stratum
// alone; a finite patch sends finitely many representatives to arbitrary
// points (so it is the only way off the stratum) and is the identity
// elsewhere.
// ---------------------------------------------------------------------------

long long cantor_pair(long long i, long long j);
/// First coordinate of the Cantor unpairing; this is the fixed surjection nu.
long long cantor_first(long long m);
/// The fixed injection mu.
inline long long mu_index(long long n) { return 2 * n; }

/// sigma0 is the fixed base bijection of the factorization scheme: evens go to
/// triangular numbers (2n -> n(n+1)/2, the cell <n,0>), odds enumerate the
/// non-triangulars. It satisfies nu(sigma0(mu(n))) = n for every n.
long long sigma0(long long n);

struct FinitePatch {
  std::map<long long, Point> entries;  // orbit index -> image of x_index
};

struct RuleBijection {
  enum class Base { Identity, Sigma0 };
  Base base = Base::Identity;
  std::map<long long, long long> post;  // finite permutation applied after base

  long long eval(long long n) const;
  bool is_identity() const { return base == Base::Identity && post.empty(); }
};

struct MuAtom {};
struct NuAtom {};

using TailAtom = std::variant<FinitePatch, MuAtom, NuAtom, RuleBijection>;
using TailWord = std::vector<TailAtom>;  // index 0 applied last

/// Fuses adjacent patches and drops identity atoms.
TailWord normalize_tail(const GSet& gs, TailWord word);

/// Eventual-behaviour skeleton of a word: 'm' for mu, 'n' for nu, 's' for a
/// sigma0-based rule; patches and finite permutations vanish, and the exact
/// cancellation nu . sigma0 . mu = id removes "nsm" runs.
std::string reduced_tail_symbols(const TailWord& word);

// ---------------------------------------------------------------------------
// Equivariant maps.
// ---------------------------------------------------------------------------

/// An element of End_G(X): one image point per finite-strata orbit
/// representative, plus a tail word when the g-set has an infinite stratum.
/// Construction validates feasibility (G_x <= G_{f(x)} for every stored
/// image), which makes the equivariant extension well-defined.
class EquivariantMap {
 public:
  static EquivariantMap identity(GSetPtr gs);
  static EquivariantMap from_parts(GSetPtr gs, std::vector<Point> rep_images, TailWord tail = {});

  const GSetPtr& gset() const { return gs_; }
  const std::vector<Point>& rep_images() const { return rep_images_; }
  const TailWord& tail() const { return tail_; }

  Point evaluate(const Point& p) const;
  /// Image of the representative x_n of the infinite stratum.
  Point tail_eval_index(long long n) const;
  /// Image of the representative of (stratum, orbit), either kind.
  Point rep_image(int stratum, long long orbit) const;

  bool is_identity() const;
  /// Largest orbit index mentioned by any patch, rule or image in the tail.
  long long tail_touch_bound() const;

  bool operator==(const EquivariantMap& o) const { return maps_equal(*this, o); }

  friend bool maps_equal(const EquivariantMap& f, const EquivariantMap& g);

 private:
  EquivariantMap() = default;

  GSetPtr gs_;
  std::vector<Point> rep_images_;  // canonical finite-strata rep order
  TailWord tail_;
};

/// h = f . g  (g applied first). Finite parts compose exactly; tails compose
/// by word concatenation after rerouting g's stratum escapes through f.
EquivariantMap compose(const EquivariantMap& f, const EquivariantMap& g);

/// Endo equality contract: finite parts exact; tails compared on the window
/// [0, 2*touch+64) together with matching reduced symbols.
bool maps_equal(const EquivariantMap& f, const EquivariantMap& g);

/// Tails compared on [0, n) only (plus exact finite parts).
bool window_equal(const EquivariantMap& f, const EquivariantMap& g, long long n);

/// Shape-level bijectivity: finite strata permuted with equal stabilizers and
/// an all-bijective tail word. Exact for the maps the factorizer emits.
bool is_bijective_shape(const EquivariantMap& f);

// ---------------------------------------------------------------------------
// Dense tables, equivariance predicate, metrics.
// ---------------------------------------------------------------------------

std::vector<int> to_dense(const EquivariantMap& f);
EquivariantMap from_dense(GSetPtr gs, const std::vector<int>& table);

/// Whether a raw point table on a finite g-set commutes with the action.
bool check_equivariance(const GSet& gs, const std::vector<int>& table);

struct MapMetrics {
  ExtCount range;
  ExtCount defect;
  ExtCount contraction;  // kernel classes of full cardinality
  bool injective = false;
  bool surjective = false;
  std::vector<std::vector<long long>> kernel;  // finite g-sets only
};

MapMetrics metrics(const EquivariantMap& f);

// ---------------------------------------------------------------------------
// Enumeration (finite g-sets).
// ---------------------------------------------------------------------------

long long count_end(const GSet& gs);
std::vector<EquivariantMap> enumerate_end(GSetPtr gs, long long cap = 10'000'000);
std::vector<EquivariantMap> enumerate_aut(GSetPtr gs, long long cap = 10'000'000);

// ---------------------------------------------------------------------------
// Restriction and induction.
// ---------------------------------------------------------------------------

/// A self-map of the representative set X_i; sparse (identity off the listed
/// indices) when the stratum is infinite.
struct RepLevelMap {
  int stratum = 0;
  bool infinite = false;
  std::vector<long long> full;
  std::map<long long, long long> sparse;

  long long image_of(long long lambda) const;
};

/// Fails with "not-representative-closed" when some f(x_lambda) is not itself
/// a designated representative of stratum i.
RepLevelMap restrict_to_reps(const EquivariantMap& f, int stratum);

/// The unique equivariant extension of a representative-level map to its
/// stratum, identity elsewhere.
EquivariantMap induce_tilde(GSetPtr gs, const RepLevelMap& rep_map);

/// Extension by identity: acts as f on stratum i, identity off it. Requires
/// f to map the stratum into itself.
EquivariantMap induce_hat(const EquivariantMap& f, int stratum);

}  // namespace equimaps

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "equimaps/endo.hpp"

namespace equimaps {

/// Type (H_i, [K]_{N_i}) of an elementary collapse: the stratum whose orbit is
/// merged and the N_i-class of the target stabilizer.
struct CollapseType {
  int stratum = 0;
  std::vector<Subgroup> target_class;  // sorted members of [K]_{N_i}
  bool same_class = false;             // target class is [H_i]_{N_i}

  bool operator==(const CollapseType& o) const {
    return stratum == o.stratum && target_class == o.target_class;
  }
};

struct NamedGenerator {
  std::string name;
  EquivariantMap map;
  std::optional<CollapseType> type;  // absent for mu-hat / nu-hat
};

/// Aut_G(X) as a symbol plus the named generator maps.
struct GeneratorSet {
  GSetPtr gs;
  bool aut_symbol = true;
  std::vector<NamedGenerator> named;

  const NamedGenerator* find(const std::string& name) const;
};

/// U(H_i): the N_i-classes of subgroups K >= H_i occurring as stabilizers,
/// [H_i]_{N_i} included.
const std::vector<StratumInfo::NClass>& u_set(const GSet& gs, int stratum);

/// Stratum indices whose stratum is a single orbit; infinite strata never
/// qualify.
std::vector<int> kappa_classes(const GSet& gs);

/// Sum of |U(H)| minus |kappa|: the type (H,[H]_{N_H}) does not exist when the
/// stratum has a single orbit.
long long collapse_type_count(const GSet& gs);

/// [x -> y]: g.x -> g.y on x's orbit, identity elsewhere. Requires G_x <= G_y
/// and x, y in distinct orbits (or x = y, giving the identity).
EquivariantMap make_point_collapse(const GSetPtr& gs, const Point& x, const Point& y);

/// (x <-> y): swaps the two orbits along g.x <-> g.y, identity elsewhere;
/// self-inverse. Requires G_x = G_y; within a single orbit the swap is only
/// well-defined when the connecting element squares into the stabilizer.
EquivariantMap make_transposition(const GSetPtr& gs, const Point& x, const Point& y);

/// Right multiplication by n (from N_i) on one orbit, identity elsewhere.
EquivariantMap make_orbit_right_mult(const GSetPtr& gs, int stratum, long long orbit, int n);

/// W: one named collapse per constructible type, [x_i -> y_{i,j}] for the
/// strictly larger targets and [x_i -> x'_i] when the stratum has >= 2 orbits.
GeneratorSet build_W(const GSetPtr& gs);

/// V: W minus the same-class collapse of the infinite stratum, plus mu-hat and
/// nu-hat. Only for case 1 / case 2 g-sets.
GeneratorSet build_V(const GSetPtr& gs);

EquivariantMap make_mu_hat(const GSetPtr& gs);
EquivariantMap make_nu_hat(const GSetPtr& gs);

/// Sum |U(H)| - |kappa| + 1 on case-1/case-2 g-sets; the finite-case count
/// (no +1) on all-finite ones.
long long relative_rank_formula(const GSet& gs);

std::string collapse_name(int stratum, int ordinal);
std::string swap_collapse_name(int stratum);

}  // namespace equimaps

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "equimaps/collapse.hpp"

namespace equimaps {

/// One factor of a word: a name resolved in the generator set, or an explicit
/// automorphism.
struct Factor {
  std::string name;                   // empty for explicit factors
  std::optional<EquivariantMap> aut;  // bijective, equivariant

  static Factor named(std::string n) { return {std::move(n), std::nullopt}; }
  static Factor explicit_aut(EquivariantMap m) { return {"", std::move(m)}; }
};

/// Sequence of factors; the leftmost factor is applied last.
struct Word {
  std::vector<Factor> factors;

  void append(Word other) {
    for (auto& f : other.factors) factors.push_back(std::move(f));
  }
  size_t size() const { return factors.size(); }
};

struct StageReport {
  int stratum = 0;
  EquivariantMap tau_i, tau_prime, tau_dprime;
  size_t preserving_factors = 0;
  size_t raising_factors = 0;
};

struct FactorizationReport {
  Word word;
  size_t length = 0;
  bool verified = false;
  std::vector<StageReport> stages;
};

/// tau_i agrees with tau on stratum i and is the identity elsewhere; the
/// product over all strata (leftmost applied last) recomposes tau.
std::vector<EquivariantMap> stratum_decompose(const EquivariantMap& tau);

/// Splits tau_i into the stratum-preserving part tau'_i and the
/// stratum-raising part tau''_i with tau_i = tau'_i . tau''_i.
std::pair<EquivariantMap, EquivariantMap> split_prime(const EquivariantMap& tau_i, int stratum);

/// Factors a stratum-raising part through the named collapse of the matching
/// type, one conjugated 7-factor block per raised orbit.
Word factor_raising(const EquivariantMap& tau_dprime, int stratum, const GeneratorSet& gens);

/// Factors a stratum-preserving part on a finite stratum through explicit
/// automorphisms and the stratum's same-class collapse.
Word factor_preserving_finite(const EquivariantMap& tau_prime, int stratum,
                              const GeneratorSet& gens);

/// Factors a stratum-preserving part on the infinite stratum: any finitely
/// supported representative-level map f becomes nu-hat . sigma . mu-hat with
/// sigma an explicit rule bijection; finitely supported bijections become a
/// single automorphism factor.
Word factor_preserving_infinite(const EquivariantMap& tau_prime, const GeneratorSet& gens);

/// Case 2 only: factors the part of tau that maps free orbits into the finite
/// complement, as the double product of framed gathering maps.
Word factor_case2_trivial_stratum(const EquivariantMap& tau_dprime, const GeneratorSet& gens);

/// Full pipeline; the returned word recomposes to tau (verified, never
/// silently unverified).
FactorizationReport factor(const EquivariantMap& tau, const GeneratorSet& gens);

EquivariantMap recompose(const Word& word, const GeneratorSet& gens);

}  // namespace equimaps

#pragma once

#include <optional>
#include <vector>

#include "covermech/paylp.hpp"

namespace covermech {

// The support extended with one high sentinel type per player: Dbar_i adjoins
// m_i * 1 to D_i, and the profile table covers every (Dbar_i x D_-i) mix.
class BoundedSupport {
 public:
  struct BarProfile {
    TypeProfile profile;
    Rat prob;                           // zero off the original support
    std::optional<int> sentinel_player; // set when c_i = m_i * 1
  };

  static BoundedSupport make(const CoveringProblem& problem, SupportedDistribution dist,
                             std::vector<Rat> sentinel_values);

  const SupportedDistribution& dist() const { return dist_; }
  int num_players() const { return dist_.num_players(); }

  const Rat& sentinel_value(int i) const { return sentinel_values_[static_cast<std::size_t>(i)]; }
  const std::vector<Rat>& sentinel_vector(int i) const { return sentinel_vectors_[static_cast<std::size_t>(i)]; }

  // Dbar_i in canonical order: D_i ascending, sentinel vector last.
  std::size_t dbar_size(int i) const { return dist_.marginal(i).size() + 1; }
  const std::vector<Rat>& dbar_type(int i, std::size_t k) const;
  bool is_sentinel_type(int i, const std::vector<Rat>& ci) const {
    return ci == sentinel_vector(i);
  }
  bool in_dbar(int i, const std::vector<Rat>& ci) const {
    return dist_.marginal_index(i, ci).has_value() || is_sentinel_type(i, ci);
  }

  const std::vector<BarProfile>& profiles() const { return profiles_; }
  std::optional<std::size_t> index_of(const TypeProfile& c) const;

 private:
  SupportedDistribution dist_;
  std::vector<Rat> sentinel_values_;
  std::vector<std::vector<Rat>> sentinel_vectors_;
  std::vector<BarProfile> profiles_;
  std::map<TypeProfile, std::size_t> index_;
};

// Payment-LP layouts shared across modules: (P) over the whole extended
// support, and its support-only restriction used for the bound estimates.
PayLpSpec build_full_lp_spec(const BoundedSupport& bs, const Rat& kappa);
PayLpSpec build_support_lp_spec(const SupportedDistribution& dist, const Rat& kappa);

struct BoundEstimateResult {
  BoundedSupport bounded;
  PayLpSpec support_spec;       // the LP the estimates came from
  LpPair support_solution;      // optimal basic solution, zeroing pass applied
  mpz_class granularity;        // lcm of the basic solution's denominators
};

struct BoundEstimateOptions {
  Rat kappa;
  std::vector<std::optional<Rat>> sentinel_overrides;  // per player, must exceed max support cost
  CuttingPlaneOptions cp;
};

// Solves the support LP, derives the sentinel estimates
// m = max(2 * sum of per-object maxima, N * total payments), and assembles the
// extended support. Degenerate all-zero instances fall back to max cost + 1.
BoundEstimateResult compute_bound_estimates(const CoveringProblem& problem, const SupportedDistribution& dist,
                                            CmOracle& oracle, const BoundEstimateOptions& opts = {});

// Extends a normalized support-LP solution to the whole extended support:
// sentinel profiles deterministically play the minimum-total-cost allocation
// and pay VCG prices, which are zero for the sentinel player.
LpPair extend_support_solution(const CoveringProblem& problem, const BoundedSupport& bs,
                               const PayLpSpec& support_spec, const LpPair& support_solution,
                               const std::vector<Allocation>& omega);

// Omega(c) for c in Dbar: the full space on support mixes, allocations leaving
// the sentinel player empty otherwise. Errors on profiles outside Dbar.
std::vector<Allocation> restricted_allocations(const CoveringProblem& problem, const BoundedSupport& bs,
                                               const TypeProfile& c,
                                               const std::vector<Allocation>& omega);

}  // namespace covermech

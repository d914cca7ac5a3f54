#pragma once

#include <string>
#include <vector>

#include "covermech/bounds.hpp"
#include "covermech/mechanism.hpp"

namespace covermech {

// Exact verification verdicts. Every slack is a rational; there are no
// tolerances anywhere in this module.
struct CheckReport {
  bool pass = true;
  std::vector<std::string> witnesses;

  void fail(std::string witness) {
    pass = false;
    witnesses.push_back(std::move(witness));
  }
};

// Robust-(BIC, IR)-in-expectation over the declared support: for every player,
// every true/reported type in Dbar_i and every opponent tuple in D_-i.
CheckReport check_robust_bic_ir(const CoveringProblem& problem, const Mechanism& mechanism,
                                const BoundedSupport& bs);

// Per-realization IR audit on the extended support (the probability-one
// property after payment rescaling).
CheckReport check_ir_per_realization(const CoveringProblem& problem, const Mechanism& mechanism,
                                     const BoundedSupport& bs);

// DSIC and IR on a finite adversarial grid of single-dimensional reports.
CheckReport check_dsic_grid(const CoveringProblem& problem, const Mechanism& mechanism,
                            const std::vector<std::vector<Rat>>& grids);

// The documented grid: 0, all support values, bucket midpoints, max support
// value + 1, the sentinel and sentinel + 1, per player.
std::vector<std::vector<Rat>> canonical_dsic_grid(const CoveringProblem& problem, const BoundedSupport& bs);

Rat expected_disutility(const CoveringProblem& problem, const Mechanism& mechanism,
                        const SupportedDistribution& dist, const Rat& kappa);

inline constexpr std::uint64_t kDefaultBruteForceCap = 10000;

// Materializes every variable and constraint of the payment LP and solves it
// directly: the independent oracle for the cutting-plane results.
Rat brute_force_lp_opt(const CoveringProblem& problem, const BoundedSupport& bs, const Rat& kappa,
                       std::uint64_t cap = kDefaultBruteForceCap);

}  // namespace covermech

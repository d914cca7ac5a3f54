#pragma once

#include <memory>

#include "covermech/bounds.hpp"
#include "covermech/mechanism.hpp"
#include "covermech/paylp.hpp"

namespace covermech {

struct PaymentLpSolution {
  PayLpSpec spec;      // the LP layout over the extended support
  LpPair pair;         // optimal, zeroing pass applied
  Rat dual_optimum;    // equals pair.objective (asserted)
  long cut_rounds = 0;
  std::size_t generated_cuts = 0;
};

// Optimal payment LP over the extended support, solved through the dual with
// the CM oracle as separation routine. The returned pair is optimal for the
// fully materialized LP; strong duality is checked exactly.
PaymentLpSolution solve_payment_lp(const CoveringProblem& problem, const BoundedSupport& bs, const Rat& kappa,
                                   CmOracle& oracle, const CuttingPlaneOptions& cp = {});

// Extends a feasible payment-LP solution to a mechanism defined on every
// profile: stored rows on the extended support, best-range selection for a
// single off-support deviator, first-price fallback otherwise.
std::shared_ptr<TableMechanism> extend_to_mechanism(const CoveringProblem& problem, const BoundedSupport& bs,
                                                    const PayLpSpec& spec, const LpPair& pair,
                                                    const std::vector<Allocation>& omega);

}  // namespace covermech

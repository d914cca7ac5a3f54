#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covermech/cutting_plane.hpp"
#include "covermech/model.hpp"

namespace covermech {

// One type profile appearing in a payment LP. `zero_players` lists players
// whose allocation is pinned to the empty set at this profile (the sentinel
// restriction); the allowed allocation set is everything else.
struct PayLpRow {
  TypeProfile profile;
  Rat prob;
  std::vector<int> zero_players;
};

// The truthfulness family for one (player, opponent-tuple): all rows obtained
// by swapping that player's type. Incentive constraints quantify over ordered
// pairs within a block; participation constraints over its members.
struct PayLpBlock {
  int player = 0;
  std::vector<std::size_t> row_indices;
};

struct PayLpSpec {
  Rat kappa;
  std::vector<PayLpRow> rows;
  std::vector<PayLpBlock> blocks;
};

bool row_allows(const PayLpRow& row, const Allocation& w);

// Primal solution of a payment LP: a lottery per row plus expected payments
// for every modeled (player, row) pair. Unmodeled pairs read as zero.
struct LpPair {
  std::vector<std::vector<std::pair<Allocation, Rat>>> lotteries;  // per row, sorted, prob > 0
  std::map<std::pair<int, std::size_t>, Rat> payments;
  Rat objective;

  Rat payment(int player, std::size_t row) const {
    const auto it = payments.find({player, row});
    return it == payments.end() ? Rat(0) : it->second;
  }
  Rat expected_cost(const TypeProfile& true_type, int player, std::size_t row) const;
  Rat expected_public_cost(const CoveringProblem& problem, std::size_t row) const;
  // Probability mass row places on allocations where the player gets anything.
  bool ever_allocates(int player, std::size_t row) const;
};

Rat paylp_objective(const CoveringProblem& problem, const PayLpSpec& spec, const LpPair& pair);

// Exact (2)-(5) feasibility audit; returns human-readable violations.
std::vector<std::string> paylp_violations(const CoveringProblem& problem, const PayLpSpec& spec,
                                          const LpPair& pair);

// Full materialization over an enumerated allocation space.
LpPair solve_paylp_materialized(const CoveringProblem& problem, const PayLpSpec& spec,
                                const std::vector<Allocation>& omega);

// Materialization restricted to explicit per-row column lists.
LpPair solve_paylp_columns(const CoveringProblem& problem, const PayLpSpec& spec,
                           const std::vector<std::vector<Allocation>>& columns);

// Cost-minimization oracle: given nonnegative per-object costs, returns an
// allocation minimizing total player cost plus public cost.
class CmOracle {
 public:
  virtual ~CmOracle() = default;
  virtual Allocation solve(const CoveringProblem& problem, const std::vector<std::vector<Rat>>& costs) = 0;
};

// Reference oracle: scans an enumerated allocation space.
class EnumerationCm : public CmOracle {
 public:
  explicit EnumerationCm(std::vector<Allocation> omega) : omega_(std::move(omega)) {}
  Allocation solve(const CoveringProblem& problem, const std::vector<std::vector<Rat>>& costs) override;

 private:
  std::vector<Allocation> omega_;
};

// Signed-cost reduction: forces negative-cost objects into the solution,
// clamps the rest at zero, scales so the oracle's unit public-cost weight
// stands in for `kappa_weight`, then reassembles. `public_upper_bound` must
// strictly exceed every feasible public cost.
std::pair<Allocation, Rat> cm_with_signed_costs(const CoveringProblem& problem, CmOracle& oracle,
                                                const std::vector<std::vector<Rat>>& signed_costs,
                                                const Rat& kappa_weight, const Rat& public_upper_bound);

struct PaylpOracleResult {
  LpPair pair;
  Rat dual_optimum;
  long cut_rounds = 0;
  std::size_t generated_cuts = 0;
};

// Solves the payment LP by cutting planes on its dual, with the CM oracle as
// separation routine, then recovers the primal from the generated columns.
// Strong duality between the two is asserted exactly.
PaylpOracleResult solve_paylp_oracle(const CoveringProblem& problem, const PayLpSpec& spec, CmOracle& oracle,
                                     const std::optional<Rat>& public_upper_bound = std::nullopt,
                                     const CuttingPlaneOptions& cp = {});

// Zeroing pass: wherever a player is never allocated across a block row, the
// payment there is forced to zero by shifting the whole block. Optimal inputs
// keep their objective; this is asserted.
void normalize_never_allocated_payments(const CoveringProblem& problem, const PayLpSpec& spec, LpPair& pair);

// Strict upper bound on the public cost over feasible allocations.
Rat public_cost_strict_upper_bound(const CoveringProblem& problem);

}  // namespace covermech

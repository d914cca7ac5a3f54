#include "covermech/exact.hpp"

#include "covermech/errors.hpp"

namespace covermech {

PaymentLpSolution solve_payment_lp(const CoveringProblem& problem, const BoundedSupport& bs, const Rat& kappa,
                                   CmOracle& oracle, const CuttingPlaneOptions& cp) {
  PaymentLpSolution out;
  out.spec = build_full_lp_spec(bs, kappa);
  PaylpOracleResult solved = solve_paylp_oracle(problem, out.spec, oracle, problem.public_cost_upper_bound, cp);
  normalize_never_allocated_payments(problem, out.spec, solved.pair);
  out.pair = std::move(solved.pair);
  out.dual_optimum = solved.dual_optimum;
  out.cut_rounds = solved.cut_rounds;
  out.generated_cuts = solved.generated_cuts;
  return out;
}

std::shared_ptr<TableMechanism> extend_to_mechanism(const CoveringProblem& problem, const BoundedSupport& bs,
                                                    const PayLpSpec& spec, const LpPair& pair,
                                                    const std::vector<Allocation>& omega) {
  if (spec.rows.size() != pair.lotteries.size()) throw InputError("LP pair does not match its spec");
  if (omega.empty()) throw InfeasibleError("no feasible allocation");
  const int n = problem.num_players();

  auto mech = std::make_shared<TableMechanism>();
  mech->players = n;
  for (int i = 0; i < n; ++i) mech->object_counts.push_back(problem.objects_of(i));
  mech->fallback = omega.front();  // canonical order makes this the lex-first allocation

  mech->rows.reserve(spec.rows.size());
  for (std::size_t r = 0; r < spec.rows.size(); ++r) {
    TableMechanism::TableRow row;
    row.profile = spec.rows[r].profile;
    row.lottery = pair.lotteries[r];
    for (int i = 0; i < n; ++i) row.payments.push_back(pair.payment(i, r));
    mech->rows.push_back(std::move(row));
  }

  mech->opponent_sets.resize(static_cast<std::size_t>(n));
  mech->ranges.resize(static_cast<std::size_t>(n));
  std::map<TypeProfile, std::size_t> spec_row;
  for (std::size_t r = 0; r < spec.rows.size(); ++r) spec_row[spec.rows[r].profile] = r;

  for (int i = 0; i < n; ++i) {
    const auto& opp = bs.dist().opponents(i);
    mech->opponent_sets[static_cast<std::size_t>(i)] = opp;
    auto& per_opp = mech->ranges[static_cast<std::size_t>(i)];
    per_opp.resize(opp.size());
    for (std::size_t o = 0; o < opp.size(); ++o) {
      std::vector<TableMechanism::RangeEntry>& entries = per_opp[o];
      // Dbar_i in canonical order; the first type defining each distinct
      // lottery becomes the representative, fixing every later tie-break.
      for (std::size_t k = 0; k < bs.dbar_size(i); ++k) {
        const TypeProfile c = SupportedDistribution::compose(i, bs.dbar_type(i, k), opp[o]);
        const auto it = spec_row.find(c);
        if (it == spec_row.end()) throw InternalError("extended profile missing a spec row");
        const auto& lottery = pair.lotteries[it->second];
        bool seen = false;
        for (const auto& e : entries) {
          if (e.lottery == lottery) {
            seen = true;
            break;
          }
        }
        if (seen) continue;
        TableMechanism::RangeEntry e;
        e.defining_type = bs.dbar_type(i, k);
        e.lottery = lottery;
        for (int j = 0; j < n; ++j) e.payments.push_back(pair.payment(j, it->second));
        entries.push_back(std::move(e));
      }
    }
  }
  mech->rebuild_indices();
  return mech;
}

}  // namespace covermech

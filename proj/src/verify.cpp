#include "covermech/verify.hpp"

#include <algorithm>
#include <set>

#include "covermech/errors.hpp"

namespace covermech {

namespace {

std::string type_str(const std::vector<Rat>& t) {
  std::string s = "(";
  for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + t[k].str();
  return s + ")";
}

}  // namespace

CheckReport check_robust_bic_ir(const CoveringProblem& problem, const Mechanism& mechanism,
                                const BoundedSupport& bs) {
  CheckReport report;
  const int n = bs.num_players();
  for (int i = 0; i < n; ++i) {
    const auto& opponents = bs.dist().opponents(i);
    for (const auto& rest : opponents) {
      // Cache the outcome for each reported type in Dbar_i.
      std::vector<Outcome> outcomes;
      for (std::size_t k = 0; k < bs.dbar_size(i); ++k) {
        outcomes.push_back(mechanism.evaluate(SupportedDistribution::compose(i, bs.dbar_type(i, k), rest)));
      }
      for (std::size_t kt = 0; kt < bs.dbar_size(i); ++kt) {
        const auto& true_type = bs.dbar_type(i, kt);
        const TypeProfile true_profile = SupportedDistribution::compose(i, true_type, rest);
        const Rat truthful = outcomes[kt].expected_payment(i) - outcomes[kt].expected_cost(true_profile, i);
        if (truthful.sign() < 0) {
          report.fail("IR: player " + std::to_string(i) + " true " + type_str(true_type) + " slack " +
                      truthful.str());
        }
        for (std::size_t kr = 0; kr < bs.dbar_size(i); ++kr) {
          if (kr == kt) continue;
          const Rat deviate = outcomes[kr].expected_payment(i) - outcomes[kr].expected_cost(true_profile, i);
          if (truthful < deviate) {
            report.fail("BIC: player " + std::to_string(i) + " true " + type_str(true_type) + " report " +
                        type_str(bs.dbar_type(i, kr)) + " gain " + (deviate - truthful).str());
          }
        }
      }
    }
  }
  return report;
}

CheckReport check_ir_per_realization(const CoveringProblem& problem, const Mechanism& mechanism,
                                     const BoundedSupport& bs) {
  CheckReport report;
  const int n = bs.num_players();
  for (int i = 0; i < n; ++i) {
    for (const auto& rest : bs.dist().opponents(i)) {
      for (std::size_t k = 0; k < bs.dbar_size(i); ++k) {
        const TypeProfile c = SupportedDistribution::compose(i, bs.dbar_type(i, k), rest);
        const Outcome out = mechanism.evaluate(c);
        for (const auto& atom : out.atoms) {
          const Rat utility = atom.payments[static_cast<std::size_t>(i)] - c.cost_of(i, atom.allocation);
          if (utility.sign() < 0) {
            report.fail("realization IR: player " + std::to_string(i) + " type " +
                        type_str(bs.dbar_type(i, k)) + " utility " + utility.str());
          }
        }
      }
    }
  }
  return report;
}

CheckReport check_dsic_grid(const CoveringProblem& problem, const Mechanism& mechanism,
                            const std::vector<std::vector<Rat>>& grids) {
  if (problem.dimension() != 1) throw InputError("the DSIC grid check covers single-dimensional problems");
  const int n = problem.num_players();
  if (grids.size() != static_cast<std::size_t>(n)) throw InputError("one grid per player");

  CheckReport report;
  for (int i = 0; i < n; ++i) {
    // Odometer over opponents' grid cells.
    std::vector<std::size_t> pos(static_cast<std::size_t>(n), 0);
    while (true) {
      TypeProfile base;
      base.costs.resize(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        if (j != i) base.costs[static_cast<std::size_t>(j)] = {grids[static_cast<std::size_t>(j)][pos[static_cast<std::size_t>(j)]]};
      }
      std::vector<Outcome> outcomes;
      for (const Rat& report_value : grids[static_cast<std::size_t>(i)]) {
        TypeProfile c = base;
        c.costs[static_cast<std::size_t>(i)] = {report_value};
        outcomes.push_back(mechanism.evaluate(c));
      }
      for (std::size_t kt = 0; kt < grids[static_cast<std::size_t>(i)].size(); ++kt) {
        TypeProfile truth = base;
        truth.costs[static_cast<std::size_t>(i)] = {grids[static_cast<std::size_t>(i)][kt]};
        const Rat truthful = outcomes[kt].expected_payment(i) - outcomes[kt].expected_cost(truth, i);
        if (truthful.sign() < 0) {
          report.fail("grid IR: player " + std::to_string(i) + " type " +
                      grids[static_cast<std::size_t>(i)][kt].str() + " utility " + truthful.str());
        }
        for (std::size_t kr = 0; kr < grids[static_cast<std::size_t>(i)].size(); ++kr) {
          if (kr == kt) continue;
          const Rat deviate = outcomes[kr].expected_payment(i) - outcomes[kr].expected_cost(truth, i);
          if (truthful < deviate) {
            report.fail("grid IC: player " + std::to_string(i) + " true " +
                        grids[static_cast<std::size_t>(i)][kt].str() + " report " +
                        grids[static_cast<std::size_t>(i)][kr].str() + " gain " + (deviate - truthful).str());
          }
        }
      }
      int j = 0;
      for (; j < n; ++j) {
        if (j == i) continue;
        auto& p = pos[static_cast<std::size_t>(j)];
        if (++p < grids[static_cast<std::size_t>(j)].size()) break;
        p = 0;
      }
      if (j == n) break;
    }
  }
  return report;
}

std::vector<std::vector<Rat>> canonical_dsic_grid(const CoveringProblem& problem, const BoundedSupport& bs) {
  if (problem.dimension() != 1) throw InputError("the canonical grid covers single-dimensional problems");
  std::vector<std::vector<Rat>> grids;
  for (int i = 0; i < bs.num_players(); ++i) {
    std::set<Rat> g;
    g.insert(Rat(0));
    const auto& marg = bs.dist().marginal(i);
    for (std::size_t k = 0; k < marg.size(); ++k) {
      g.insert(marg[k][0]);
      if (k + 1 < marg.size()) g.insert((marg[k][0] + marg[k + 1][0]) / Rat(2));
    }
    if (!marg.empty()) g.insert(marg.back()[0] + Rat(1));
    g.insert(bs.sentinel_value(i));
    g.insert(bs.sentinel_value(i) + Rat(1));
    grids.emplace_back(g.begin(), g.end());
  }
  return grids;
}

Rat expected_disutility(const CoveringProblem& problem, const Mechanism& mechanism,
                        const SupportedDistribution& dist, const Rat& kappa) {
  Rat total;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const Outcome out = mechanism.evaluate(dist.support()[k]);
    Rat inner = kappa * out.expected_public(problem);
    for (int i = 0; i < dist.num_players(); ++i) inner += out.expected_payment(i);
    total += dist.probabilities()[k] * inner;
  }
  return total;
}

Rat brute_force_lp_opt(const CoveringProblem& problem, const BoundedSupport& bs, const Rat& kappa,
                       std::uint64_t cap) {
  const auto omega = enumerate_allocations(problem);
  const std::uint64_t cells = static_cast<std::uint64_t>(bs.profiles().size()) * omega.size();
  if (cells > cap) {
    throw SizeError("brute-force payment LP would have " + std::to_string(cells) + " cells, cap " +
                    std::to_string(cap));
  }
  const PayLpSpec spec = build_full_lp_spec(bs, kappa);
  return solve_paylp_materialized(problem, spec, omega).objective;
}

}  // namespace covermech

#include "covermech/bounds.hpp"

#include <algorithm>

#include "covermech/errors.hpp"

namespace covermech {

BoundedSupport BoundedSupport::make(const CoveringProblem& problem, SupportedDistribution dist,
                                    std::vector<Rat> sentinel_values) {
  const int n = dist.num_players();
  if (sentinel_values.size() != static_cast<std::size_t>(n)) throw InputError("one sentinel value per player");

  BoundedSupport bs;
  bs.dist_ = std::move(dist);
  bs.sentinel_values_ = std::move(sentinel_values);
  for (int i = 0; i < n; ++i) {
    Rat max_cost;
    for (const auto& ci : bs.dist_.marginal(i)) {
      for (const auto& v : ci) max_cost = max(max_cost, v);
    }
    if (!(bs.sentinel_values_[static_cast<std::size_t>(i)] > max_cost)) {
      throw InputError("sentinel value for player " + std::to_string(i) +
                       " must strictly exceed every support cost");
    }
    bs.sentinel_vectors_.push_back(
        std::vector<Rat>(problem.objects_of(i), bs.sentinel_values_[static_cast<std::size_t>(i)]));
  }

  // Dbar = union over i of Dbar_i x D_-i, deduplicated, canonical order.
  std::map<TypeProfile, std::optional<int>> table;
  for (int i = 0; i < n; ++i) {
    for (const auto& rest : bs.dist_.opponents(i)) {
      for (const auto& ci : bs.dist_.marginal(i)) {
        table.emplace(SupportedDistribution::compose(i, ci, rest), std::nullopt);
      }
      const TypeProfile sent = SupportedDistribution::compose(i, bs.sentinel_vector(i), rest);
      auto [it, inserted] = table.emplace(sent, i);
      if (!inserted && it->second != std::optional<int>(i)) {
        throw InternalError("sentinel profile collided with another profile");
      }
    }
  }
  for (auto& [profile, sentinel] : table) {
    bs.index_[profile] = bs.profiles_.size();
    bs.profiles_.push_back(BarProfile{profile, bs.dist_.probability_of(profile), sentinel});
  }
  return bs;
}

const std::vector<Rat>& BoundedSupport::dbar_type(int i, std::size_t k) const {
  const auto& m = dist_.marginal(i);
  if (k < m.size()) return m[k];
  if (k == m.size()) return sentinel_vector(i);
  throw InputError("dbar index out of range");
}

std::optional<std::size_t> BoundedSupport::index_of(const TypeProfile& c) const {
  const auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PayLpSpec build_full_lp_spec(const BoundedSupport& bs, const Rat& kappa) {
  PayLpSpec spec;
  spec.kappa = kappa;
  for (const auto& bp : bs.profiles()) {
    PayLpRow row;
    row.profile = bp.profile;
    row.prob = bp.prob;
    if (bp.sentinel_player) row.zero_players = {*bp.sentinel_player};
    spec.rows.push_back(std::move(row));
  }
  const int n = bs.num_players();
  for (int i = 0; i < n; ++i) {
    for (const auto& rest : bs.dist().opponents(i)) {
      PayLpBlock block;
      block.player = i;
      for (std::size_t k = 0; k < bs.dbar_size(i); ++k) {
        const TypeProfile c = SupportedDistribution::compose(i, bs.dbar_type(i, k), rest);
        const auto idx = bs.index_of(c);
        if (!idx) throw InternalError("extended profile missing from the Dbar table");
        block.row_indices.push_back(*idx);
      }
      spec.blocks.push_back(std::move(block));
    }
  }
  return spec;
}

PayLpSpec build_support_lp_spec(const SupportedDistribution& dist, const Rat& kappa) {
  PayLpSpec spec;
  spec.kappa = kappa;
  std::map<TypeProfile, std::size_t> index;
  const int n = dist.num_players();
  for (int i = 0; i < n; ++i) {
    for (const auto& rest : dist.opponents(i)) {
      for (const auto& ci : dist.marginal(i)) {
        index.emplace(SupportedDistribution::compose(i, ci, rest), 0);
      }
    }
  }
  std::size_t k = 0;
  for (auto& [profile, idx] : index) {
    idx = k++;
    spec.rows.push_back(PayLpRow{profile, dist.probability_of(profile), {}});
  }
  for (int i = 0; i < n; ++i) {
    for (const auto& rest : dist.opponents(i)) {
      PayLpBlock block;
      block.player = i;
      for (const auto& ci : dist.marginal(i)) {
        block.row_indices.push_back(index.at(SupportedDistribution::compose(i, ci, rest)));
      }
      spec.blocks.push_back(std::move(block));
    }
  }
  return spec;
}

BoundEstimateResult compute_bound_estimates(const CoveringProblem& problem, const SupportedDistribution& dist,
                                            CmOracle& oracle, const BoundEstimateOptions& opts) {
  PayLpSpec support_spec = build_support_lp_spec(dist, opts.kappa);
  PaylpOracleResult solved = solve_paylp_oracle(problem, support_spec, oracle, std::nullopt, opts.cp);

  std::vector<Rat> values;
  for (const auto& lottery : solved.pair.lotteries) {
    for (const auto& [w, p] : lottery) values.push_back(p);
  }
  Rat payment_total;
  for (const auto& [key, p] : solved.pair.payments) {
    values.push_back(p);
    payment_total += p;
  }
  const mpz_class granularity = denominator_lcm(values);

  Rat per_object_max_sum;
  Rat max_cost;
  for (int i = 0; i < dist.num_players(); ++i) {
    for (std::size_t v = 0; v < problem.objects_of(i); ++v) {
      Rat object_max;
      for (const auto& ci : dist.marginal(i)) object_max = max(object_max, ci[v]);
      per_object_max_sum += object_max;
      max_cost = max(max_cost, object_max);
    }
  }
  Rat m = max(Rat(2) * per_object_max_sum, Rat(granularity) * payment_total);
  if (!(m > max_cost)) m = max_cost + Rat(1);  // all-zero degenerate instances

  std::vector<Rat> sentinels(static_cast<std::size_t>(dist.num_players()), m);
  if (!opts.sentinel_overrides.empty()) {
    if (opts.sentinel_overrides.size() != sentinels.size()) throw InputError("one sentinel override per player");
    for (std::size_t i = 0; i < sentinels.size(); ++i) {
      if (opts.sentinel_overrides[i]) sentinels[i] = *opts.sentinel_overrides[i];
    }
  }

  normalize_never_allocated_payments(problem, support_spec, solved.pair);

  BoundEstimateResult out{BoundedSupport::make(problem, dist, std::move(sentinels)), std::move(support_spec),
                          std::move(solved.pair), granularity};
  return out;
}

LpPair extend_support_solution(const CoveringProblem& problem, const BoundedSupport& bs,
                               const PayLpSpec& support_spec, const LpPair& support_solution,
                               const std::vector<Allocation>& omega) {
  // Precondition: the zeroing normalization has been applied.
  for (const auto& block : support_spec.blocks) {
    for (std::size_t r : block.row_indices) {
      if (!support_solution.ever_allocates(block.player, r) &&
          !support_solution.payment(block.player, r).is_zero()) {
        throw InternalError("support solution missing the zeroing normalization");
      }
    }
  }

  std::map<TypeProfile, std::size_t> support_row;
  for (std::size_t r = 0; r < support_spec.rows.size(); ++r) support_row[support_spec.rows[r].profile] = r;

  LpPair out;
  out.lotteries.resize(bs.profiles().size());
  const int n = bs.num_players();

  for (std::size_t r = 0; r < bs.profiles().size(); ++r) {
    const auto& bp = bs.profiles()[r];
    if (!bp.sentinel_player) {
      const auto it = support_row.find(bp.profile);
      if (it == support_row.end()) throw InternalError("support mix profile missing from the support LP");
      out.lotteries[r] = support_solution.lotteries[it->second];
      for (int i = 0; i < n; ++i) {
        const auto pit = support_solution.payments.find({i, it->second});
        if (pit != support_solution.payments.end()) out.payments[{i, r}] = pit->second;
      }
      continue;
    }

    // Sentinel profile: minimum-total-cost allocation, first in canonical
    // order on ties, priced by the VCG rule.
    const int sent = *bp.sentinel_player;
    const Allocation* best = nullptr;
    Rat best_cost;
    for (const auto& w : omega) {
      const Rat c = bp.profile.total_cost(w);
      if (!best || c < best_cost) {
        best = &w;
        best_cost = c;
      }
    }
    if (!best) throw InfeasibleError("no feasible allocation");
    if (!best->player_empty(sent)) {
      throw InternalError("sentinel estimate too small: min-cost allocation still uses the sentinel player");
    }
    out.lotteries[r] = {{*best, Rat(1)}};
    for (int j = 0; j < n; ++j) {
      Rat without;
      bool found = false;
      for (const auto& w : omega) {
        if (!w.player_empty(j)) continue;
        const Rat c = bp.profile.total_cost(w);
        if (!found || c < without) {
          without = c;
          found = true;
        }
      }
      if (!found) throw InfeasibleError("instance is not monopoly-free");
      const Rat pay = without - (best_cost - bp.profile.cost_of(j, *best));
      if (pay.sign() < 0) throw InternalError("VCG price came out negative");
      out.payments[{j, r}] = pay;
    }
    if (!out.payments[{sent, r}].is_zero()) {
      throw InternalError("sentinel player received a nonzero VCG price");
    }
  }
  out.objective = support_solution.objective;
  return out;
}

std::vector<Allocation> restricted_allocations(const CoveringProblem& problem, const BoundedSupport& bs,
                                               const TypeProfile& c, const std::vector<Allocation>& omega) {
  const auto idx = bs.index_of(c);
  if (!idx) throw InputError("profile is outside the extended support Dbar");
  const auto& bp = bs.profiles()[*idx];
  if (!bp.sentinel_player) return omega;
  std::vector<Allocation> out;
  for (const auto& w : omega) {
    if (w.player_empty(*bp.sentinel_player)) out.push_back(w);
  }
  if (out.empty()) throw InfeasibleError("instance is not monopoly-free");
  return out;
}

}  // namespace covermech

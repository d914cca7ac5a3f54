#include "covermech/mechanism.hpp"

#include <random>

#include "covermech/errors.hpp"

namespace covermech {

Rat Outcome::expected_payment(int i) const {
  Rat total;
  for (const auto& a : atoms) total += a.prob * a.payments[static_cast<std::size_t>(i)];
  return total;
}

Rat Outcome::expected_cost(const TypeProfile& true_type, int i) const {
  Rat total;
  for (const auto& a : atoms) total += a.prob * true_type.cost_of(i, a.allocation);
  return total;
}

Rat Outcome::expected_public(const CoveringProblem& problem) const {
  Rat total;
  for (const auto& a : atoms) {
    const auto pub = problem.public_cost(a.allocation);
    if (!pub) throw InternalError("mechanism lottery contains an infeasible allocation");
    total += a.prob * *pub;
  }
  return total;
}

Rat Outcome::total_mass() const {
  Rat total;
  for (const auto& a : atoms) total += a.prob;
  return total;
}

void TableMechanism::rebuild_indices() {
  row_index_.clear();
  for (std::size_t r = 0; r < rows.size(); ++r) row_index_[rows[r].profile] = r;
  opponent_index_.assign(static_cast<std::size_t>(players), {});
  for (int i = 0; i < players; ++i) {
    auto& m = opponent_index_[static_cast<std::size_t>(i)];
    const auto& list = opponent_sets[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < list.size(); ++k) m[list[k]] = k;
  }
}

Outcome TableMechanism::evaluate(const TypeProfile& reported) const {
  if (reported.costs.size() != static_cast<std::size_t>(players)) throw InputError("profile width mismatch");
  for (int i = 0; i < players; ++i) {
    if (reported.costs[static_cast<std::size_t>(i)].size() != object_counts[static_cast<std::size_t>(i)]) {
      throw InputError("profile row width mismatch");
    }
  }

  const auto make_outcome = [&](const std::vector<std::pair<Allocation, Rat>>& lottery,
                                const std::vector<Rat>& payments) {
    Outcome out;
    out.atoms.reserve(lottery.size());
    for (const auto& [w, p] : lottery) out.atoms.push_back(LotteryAtom{w, p, payments});
    return out;
  };

  const auto hit = row_index_.find(reported);
  if (hit != row_index_.end()) {
    const auto& row = rows[hit->second];
    return make_outcome(row.lottery, row.payments);
  }

  int deviator = -1;
  std::size_t opp = 0;
  for (int i = 0; i < players; ++i) {
    const auto& m = opponent_index_[static_cast<std::size_t>(i)];
    const auto it = m.find(SupportedDistribution::strip(i, reported));
    if (it == m.end()) continue;
    if (deviator != -1) throw InternalError("off-table profile matched two opponent tuples");
    deviator = i;
    opp = it->second;
  }

  if (deviator == -1) {
    std::vector<Rat> pay;
    pay.reserve(static_cast<std::size_t>(players));
    for (int i = 0; i < players; ++i) pay.push_back(reported.cost_of(i, fallback));
    return make_outcome({{fallback, Rat(1)}}, pay);
  }

  const auto& entries = ranges[static_cast<std::size_t>(deviator)][opp];
  if (entries.empty()) throw InternalError("empty range table");
  const RangeEntry* best = nullptr;
  Rat best_utility;
  for (const auto& e : entries) {
    Rat cost;
    for (const auto& [w, p] : e.lottery) cost += p * reported.cost_of(deviator, w);
    const Rat utility = e.payments[static_cast<std::size_t>(deviator)] - cost;
    if (!best || utility > best_utility) {
      best = &e;
      best_utility = utility;
    }
  }
  return make_outcome(best->lottery, best->payments);
}

Outcome IrProbOneMechanism::evaluate(const TypeProfile& reported) const {
  Outcome out = inner_->evaluate(reported);
  const int n = num_players();
  for (int i = 0; i < n; ++i) {
    const Rat ep = out.expected_payment(i);
    const Rat ec = out.expected_cost(reported, i);
    for (auto& atom : out.atoms) {
      auto& pay = atom.payments[static_cast<std::size_t>(i)];
      if (ec.sign() > 0) {
        pay = reported.cost_of(i, atom.allocation) * ep / ec;
      } else {
        // Zero expected cost: a flat payment preserves both the expectation
        // and per-realization IR; the scaling formula is 0/0 here.
        pay = ep;
      }
    }
  }
  return out;
}

std::shared_ptr<const Mechanism> enforce_ir_prob1(std::shared_ptr<const Mechanism> mechanism) {
  return std::make_shared<IrProbOneMechanism>(std::move(mechanism));
}

RunResult run_mechanism(const Mechanism& mechanism, const TypeProfile& profile, std::uint64_t seed) {
  for (const auto& row : profile.costs) {
    for (const auto& v : row) {
      if (v.sign() < 0) throw InputError("reported costs must be nonnegative");
    }
  }
  RunResult res;
  res.outcome = mechanism.evaluate(profile);
  if (res.outcome.total_mass() != Rat(1)) throw InternalError("lottery mass is not one");

  std::mt19937_64 rng(seed);
  const std::uint64_t draw = rng();
  // Pick the first atom whose cumulative probability exceeds draw / 2^64.
  mpz_class two64 = 1;
  two64 <<= 64;
  mpq_class t(mpz_class(draw), two64);
  t.canonicalize();
  const Rat threshold(t);
  Rat cumulative;
  std::size_t chosen = res.outcome.atoms.size() - 1;
  for (std::size_t k = 0; k < res.outcome.atoms.size(); ++k) {
    cumulative += res.outcome.atoms[k].prob;
    if (cumulative > threshold) {
      chosen = k;
      break;
    }
  }
  res.sampled_atom = chosen;
  res.sampled_allocation = res.outcome.atoms[chosen].allocation;
  res.realized_payments = res.outcome.atoms[chosen].payments;
  return res;
}

}  // namespace covermech

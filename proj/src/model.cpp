#include "covermech/model.hpp"

#include <algorithm>

#include "covermech/errors.hpp"

namespace covermech {

bool Allocation::subset_of(const Allocation& other) const {
  if (sets.size() != other.sets.size()) return false;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!std::includes(other.sets[i].begin(), other.sets[i].end(), sets[i].begin(), sets[i].end())) return false;
  }
  return true;
}

Rat TypeProfile::cost_of(int i, const Allocation& a) const {
  Rat total;
  const auto& row = costs[static_cast<std::size_t>(i)];
  for (int v : a.sets[static_cast<std::size_t>(i)]) total += row[static_cast<std::size_t>(v)];
  return total;
}

Rat TypeProfile::total_cost(const Allocation& a) const {
  Rat total;
  for (std::size_t i = 0; i < costs.size(); ++i) total += cost_of(static_cast<int>(i), a);
  return total;
}

CoveringProblem::CoveringProblem(std::vector<Player> players, PublicCostFn public_cost)
    : players_(std::move(players)), public_cost_(std::move(public_cost)) {
  if (players_.empty()) throw InputError("covering problem needs at least one player");
  for (const auto& p : players_) {
    if (p.objects.empty()) throw InputError("player '" + p.name + "' has no covering objects");
  }
  if (!public_cost_) throw InputError("covering problem needs a public-cost evaluator");
}

std::size_t CoveringProblem::dimension() const {
  std::size_t d = 0;
  for (const auto& p : players_) d = std::max(d, p.objects.size());
  return d;
}

Allocation CoveringProblem::empty_allocation() const {
  Allocation a;
  a.sets.assign(players_.size(), {});
  return a;
}

void validate_profile_shape(const CoveringProblem& problem, const TypeProfile& profile, bool require_nonnegative) {
  if (profile.costs.size() != static_cast<std::size_t>(problem.num_players())) {
    throw InputError("type profile has wrong player count");
  }
  for (int i = 0; i < problem.num_players(); ++i) {
    const auto& row = profile.costs[static_cast<std::size_t>(i)];
    if (row.size() != problem.objects_of(i)) throw InputError("type profile row width mismatch");
    if (require_nonnegative) {
      for (const auto& v : row) {
        if (v.sign() < 0) throw InputError("negative cost in type profile");
      }
    }
  }
}

std::vector<Allocation> enumerate_allocations(const CoveringProblem& problem, std::uint64_t cap) {
  const int n = problem.num_players();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    const std::size_t k = problem.objects_of(i);
    if (k >= 63) throw SizeError("object set too large to enumerate");
    const std::uint64_t factor = 1ull << k;
    if (total > cap / factor) {
      throw SizeError("allocation space exceeds enumeration cap; use the CM-oracle path");
    }
    total *= factor;
  }

  std::vector<Allocation> result;
  Allocation current = problem.empty_allocation();
  std::vector<std::uint64_t> mask(static_cast<std::size_t>(n), 0);
  while (true) {
    for (int i = 0; i < n; ++i) {
      auto& s = current.sets[static_cast<std::size_t>(i)];
      s.clear();
      for (std::size_t v = 0; v < problem.objects_of(i); ++v) {
        if (mask[static_cast<std::size_t>(i)] >> v & 1u) s.push_back(static_cast<int>(v));
      }
    }
    if (problem.feasible(current)) result.push_back(current);
    int i = 0;
    for (; i < n; ++i) {
      auto& m = mask[static_cast<std::size_t>(i)];
      if (++m < (1ull << problem.objects_of(i))) break;
      m = 0;
    }
    if (i == n) break;
  }
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

DisutilityTerms disutility_terms(const CoveringProblem& problem, const TypeProfile& profile,
                                 const Allocation& allocation, const Rat& kappa) {
  if (kappa.sign() < 0) throw InputError("kappa must be nonnegative");
  const auto pub = problem.public_cost(allocation);
  if (!pub) throw InfeasibleError("disutility of an infeasible allocation");
  DisutilityTerms out;
  out.player_costs.reserve(profile.costs.size());
  for (int i = 0; i < problem.num_players(); ++i) out.player_costs.push_back(profile.cost_of(i, allocation));
  out.weighted_public = kappa * *pub;
  return out;
}

bool check_monopoly_free(const CoveringProblem& problem, const std::vector<Allocation>& omega) {
  for (int i = 0; i < problem.num_players(); ++i) {
    bool has_empty = false;
    for (const auto& w : omega) {
      if (w.player_empty(i)) {
        has_empty = true;
        break;
      }
    }
    if (!has_empty) return false;
  }
  return true;
}

bool check_monopoly_free(const CoveringProblem& problem) {
  return check_monopoly_free(problem, enumerate_allocations(problem));
}

SupportedDistribution SupportedDistribution::make(const CoveringProblem& problem, std::vector<TypeProfile> profiles,
                                                  std::vector<Rat> probabilities) {
  if (profiles.size() != probabilities.size()) throw InputError("distribution: profile/probability count mismatch");
  if (profiles.empty()) throw InputError("distribution: empty support");

  std::map<TypeProfile, Rat> merged;
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    validate_profile_shape(problem, profiles[k]);
    if (probabilities[k].sign() <= 0) throw InputError("distribution: probabilities must be positive");
    merged[profiles[k]] += probabilities[k];
  }
  Rat total;
  for (const auto& [c, p] : merged) total += p;
  if (total != Rat(1)) throw InputError("distribution: probabilities sum to " + total.str() + ", expected 1");

  SupportedDistribution d;
  d.num_players_ = problem.num_players();
  for (const auto& [c, p] : merged) {
    d.support_index_[c] = d.support_.size();
    d.support_.push_back(c);
    d.probabilities_.push_back(p);
  }

  const int n = d.num_players_;
  d.marginals_.resize(static_cast<std::size_t>(n));
  d.marginal_index_.resize(static_cast<std::size_t>(n));
  d.opponents_.resize(static_cast<std::size_t>(n));
  d.opponent_index_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& mi = d.marginal_index_[static_cast<std::size_t>(i)];
    auto& oi = d.opponent_index_[static_cast<std::size_t>(i)];
    for (const auto& c : d.support_) {
      mi.emplace(c.costs[static_cast<std::size_t>(i)], 0);
      oi.emplace(strip(i, c), 0);
    }
    for (auto& [k, idx] : mi) {
      idx = d.marginals_[static_cast<std::size_t>(i)].size();
      d.marginals_[static_cast<std::size_t>(i)].push_back(k);
    }
    for (auto& [k, idx] : oi) {
      idx = d.opponents_[static_cast<std::size_t>(i)].size();
      d.opponents_[static_cast<std::size_t>(i)].push_back(k);
    }
  }
  return d;
}

Rat SupportedDistribution::probability_of(const TypeProfile& c) const {
  const auto it = support_index_.find(c);
  return it == support_index_.end() ? Rat(0) : probabilities_[it->second];
}

std::optional<std::size_t> SupportedDistribution::marginal_index(int i, const std::vector<Rat>& ci) const {
  const auto& m = marginal_index_[static_cast<std::size_t>(i)];
  const auto it = m.find(ci);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> SupportedDistribution::opponent_index(int i, const TypeProfile& full_profile) const {
  const auto& m = opponent_index_[static_cast<std::size_t>(i)];
  const auto it = m.find(strip(i, full_profile));
  if (it == m.end()) return std::nullopt;
  return it->second;
}

TypeProfile SupportedDistribution::compose(int i, const std::vector<Rat>& ci, const TypeProfile& rest) {
  TypeProfile c = rest;
  c.costs[static_cast<std::size_t>(i)] = ci;
  return c;
}

TypeProfile SupportedDistribution::strip(int i, const TypeProfile& full_profile) {
  TypeProfile c = full_profile;
  c.costs[static_cast<std::size_t>(i)].clear();
  return c;
}

}  // namespace covermech

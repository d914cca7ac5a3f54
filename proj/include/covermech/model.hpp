#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "covermech/rational.hpp"

namespace covermech {

struct CmLp;  // relax module

// One covering choice per player: sorted indices into that player's object set.
struct Allocation {
  std::vector<std::vector<int>> sets;

  friend bool operator==(const Allocation& a, const Allocation& b) { return a.sets == b.sets; }
  friend bool operator<(const Allocation& a, const Allocation& b) { return a.sets < b.sets; }

  bool player_empty(int i) const { return sets[static_cast<std::size_t>(i)].empty(); }
  // Componentwise subset test, used by the public-cost monotonicity property.
  bool subset_of(const Allocation& other) const;
};

// Reported or true cost vectors, aligned with each player's object list.
struct TypeProfile {
  std::vector<std::vector<Rat>> costs;

  friend bool operator==(const TypeProfile& a, const TypeProfile& b) { return a.costs == b.costs; }
  friend bool operator<(const TypeProfile& a, const TypeProfile& b) { return a.costs < b.costs; }

  // Additive type: c_i(T) = sum of the selected objects' costs.
  Rat cost_of(int i, const Allocation& a) const;
  Rat total_cost(const Allocation& a) const;
};

using PublicCostFn = std::function<std::optional<Rat>(const Allocation&)>;  // nullopt = infeasible

class CoveringProblem {
 public:
  struct Player {
    std::string name;
    std::vector<std::string> objects;
  };

  CoveringProblem() = default;
  CoveringProblem(std::vector<Player> players, PublicCostFn public_cost);

  int num_players() const { return static_cast<int>(players_.size()); }
  const std::vector<Player>& players() const { return players_; }
  std::size_t objects_of(int i) const { return players_[static_cast<std::size_t>(i)].objects.size(); }
  std::size_t dimension() const;

  std::optional<Rat> public_cost(const Allocation& a) const { return public_cost_(a); }
  bool feasible(const Allocation& a) const { return public_cost(a).has_value(); }

  Allocation empty_allocation() const;

  // Optional CM-LP encoding for the relaxed pipeline.
  std::shared_ptr<const CmLp> cmlp;
  // Optional strict upper bound on max public cost over feasible allocations,
  // for the oracle path; when absent it is derived by enumeration.
  std::optional<Rat> public_cost_upper_bound;

 private:
  std::vector<Player> players_;
  PublicCostFn public_cost_;
};

// Explicit correlated joint distribution over type profiles; marginal
// projections are precomputed on construction.
class SupportedDistribution {
 public:
  // Validates, merges duplicate profiles, sorts into canonical order.
  static SupportedDistribution make(const CoveringProblem& problem, std::vector<TypeProfile> profiles,
                                    std::vector<Rat> probabilities);

  std::size_t size() const { return support_.size(); }
  const std::vector<TypeProfile>& support() const { return support_; }
  const std::vector<Rat>& probabilities() const { return probabilities_; }
  Rat probability_of(const TypeProfile& c) const;

  int num_players() const { return num_players_; }

  // D_i: distinct own-cost vectors of player i, canonical order.
  const std::vector<std::vector<Rat>>& marginal(int i) const { return marginals_[static_cast<std::size_t>(i)]; }
  // D_{-i}: distinct opponent tuples; each entry is a full-width profile whose
  // slot i is left empty and must be filled via compose().
  const std::vector<TypeProfile>& opponents(int i) const { return opponents_[static_cast<std::size_t>(i)]; }

  std::optional<std::size_t> marginal_index(int i, const std::vector<Rat>& ci) const;
  std::optional<std::size_t> opponent_index(int i, const TypeProfile& full_profile) const;

  static TypeProfile compose(int i, const std::vector<Rat>& ci, const TypeProfile& rest);
  static TypeProfile strip(int i, const TypeProfile& full_profile);

 private:
  int num_players_ = 0;
  std::vector<TypeProfile> support_;
  std::vector<Rat> probabilities_;
  std::map<TypeProfile, std::size_t> support_index_;
  std::vector<std::vector<std::vector<Rat>>> marginals_;
  std::vector<std::map<std::vector<Rat>, std::size_t>> marginal_index_;
  std::vector<std::vector<TypeProfile>> opponents_;
  std::vector<std::map<TypeProfile, std::size_t>> opponent_index_;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1u << 20;

// All feasible allocations, deduplicated, lexicographic order. Errors with
// SizeError when prod_i 2^{|T_i|} exceeds the cap.
std::vector<Allocation> enumerate_allocations(const CoveringProblem& problem,
                                              std::uint64_t cap = kDefaultEnumerationCap);

struct DisutilityTerms {
  std::vector<Rat> player_costs;
  Rat weighted_public;
};

// Per-player incurred costs plus kappa-weighted public cost of one allocation.
DisutilityTerms disutility_terms(const CoveringProblem& problem, const TypeProfile& profile,
                                 const Allocation& allocation, const Rat& kappa);

bool check_monopoly_free(const CoveringProblem& problem, const std::vector<Allocation>& omega);
bool check_monopoly_free(const CoveringProblem& problem);

// Shared validation helpers.
void validate_profile_shape(const CoveringProblem& problem, const TypeProfile& profile,
                            bool require_nonnegative = true);

}  // namespace covermech

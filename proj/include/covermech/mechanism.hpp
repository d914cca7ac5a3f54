#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "covermech/model.hpp"

namespace covermech {

// One realization of a randomized outcome: the chosen allocation and the
// payment each player receives if this atom is drawn.
struct LotteryAtom {
  Allocation allocation;
  Rat prob;
  std::vector<Rat> payments;
};

struct Outcome {
  std::vector<LotteryAtom> atoms;

  Rat expected_payment(int i) const;
  Rat expected_cost(const TypeProfile& true_type, int i) const;
  Rat expected_public(const CoveringProblem& problem) const;
  Rat total_mass() const;
};

// A total allocation-and-payment rule over all type profiles.
class Mechanism {
 public:
  virtual ~Mechanism() = default;
  virtual int num_players() const = 0;
  virtual Outcome evaluate(const TypeProfile& reported) const = 0;
};

// Table-driven mechanism: stored rows on the extended support, a deterministic
// fallback allocation when no player's opponents lie in the support, and
// best-entry selection from the range table for a single off-support deviator.
class TableMechanism : public Mechanism {
 public:
  struct RangeEntry {
    std::vector<Rat> defining_type;  // the canonical type behind this lottery
    std::vector<std::pair<Allocation, Rat>> lottery;
    std::vector<Rat> payments;  // per player
  };
  struct TableRow {
    TypeProfile profile;
    std::vector<std::pair<Allocation, Rat>> lottery;
    std::vector<Rat> payments;  // per player, expected
  };

  int players = 0;
  std::vector<std::size_t> object_counts;
  Allocation fallback;                                   // omega0
  std::vector<TableRow> rows;                            // canonical order
  std::vector<std::vector<TypeProfile>> opponent_sets;   // per player: D_-i (stripped profiles)
  std::vector<std::vector<std::vector<RangeEntry>>> ranges;  // [player][opponent index]

  int num_players() const override { return players; }
  Outcome evaluate(const TypeProfile& reported) const override;

  void rebuild_indices();  // call after bulk-loading the public fields

 private:
  std::map<TypeProfile, std::size_t> row_index_;
  std::vector<std::map<TypeProfile, std::size_t>> opponent_index_;
};

// Per-realization payment rescaling that makes IR hold with probability one
// while keeping every expected payment unchanged.
class IrProbOneMechanism : public Mechanism {
 public:
  explicit IrProbOneMechanism(std::shared_ptr<const Mechanism> inner) : inner_(std::move(inner)) {}
  int num_players() const override { return inner_->num_players(); }
  Outcome evaluate(const TypeProfile& reported) const override;
  const Mechanism& inner() const { return *inner_; }
  std::shared_ptr<const Mechanism> inner_ptr() const { return inner_; }

 private:
  std::shared_ptr<const Mechanism> inner_;
};

std::shared_ptr<const Mechanism> enforce_ir_prob1(std::shared_ptr<const Mechanism> mechanism);

struct RunResult {
  Outcome outcome;                 // full lottery with per-realization payments
  std::size_t sampled_atom = 0;    // index into outcome.atoms
  Allocation sampled_allocation;
  std::vector<Rat> realized_payments;
};

// Seed-deterministic sampling from the mechanism's lottery; expectations are
// reported exactly alongside. Profiles with negative costs are rejected.
RunResult run_mechanism(const Mechanism& mechanism, const TypeProfile& profile, std::uint64_t seed);

}  // namespace covermech

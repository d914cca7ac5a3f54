#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "covermech/lp.hpp"

namespace covermech {

// Sparse linear constraint used by the cutting-plane driver. `tag` carries an
// opaque identity (e.g. which profile/allocation produced the cut) so callers
// can rebuild compact primals from the active set.
struct CutConstraint {
  std::vector<std::pair<std::size_t, Rat>> terms;
  Relation rel = Relation::LessEq;
  Rat rhs;
  std::string tag;
};

Rat cut_lhs_value(const CutConstraint& cut, const std::vector<Rat>& point);
bool cut_satisfied(const CutConstraint& cut, const std::vector<Rat>& point);
// Recession check: whether moving along `ray` can never leave the half-space.
bool cut_blocks_ray(const CutConstraint& cut, const std::vector<Rat>& ray);

class SeparationOracle {
 public:
  virtual ~SeparationOracle() = default;

  // Violated constraints at the candidate point; empty certifies feasibility.
  virtual std::vector<CutConstraint> separate(const std::vector<Rat>& point) = 0;

  // Constraints violated in recession form along an improving ray; empty
  // certifies the implicit LP is unbounded. Only called when a restricted LP
  // is unbounded, which cannot happen once enough cuts are present.
  virtual std::vector<CutConstraint> separate_ray(const std::vector<Rat>& ray) {
    (void)ray;
    return {};
  }
};

struct CuttingPlaneOptions {
  long max_iterations = 0;  // 0: use 10 * (num_vars + 1000)
};

struct CuttingPlaneResult {
  LpStatus status = LpStatus::Unbounded;
  Rat optimum;
  std::vector<Rat> point;
  std::vector<CutConstraint> active_constraints;  // seeds plus every generated cut
  long iterations = 0;
};

// Maximizes objective over { static constraints } ∩ { the oracle's implicit
// constraint family } by iteratively solving a restricted LP and cutting.
// Throws InternalError when the iteration cap is exceeded.
CuttingPlaneResult cutting_plane_maximize(std::size_t num_vars,
                                          const std::vector<bool>& free_vars,
                                          const std::vector<Rat>& objective,
                                          const std::vector<CutConstraint>& static_constraints,
                                          const std::vector<CutConstraint>& seed_cuts,
                                          SeparationOracle& oracle,
                                          const CuttingPlaneOptions& opts = {});

}  // namespace covermech

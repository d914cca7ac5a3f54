#include "covermech/cutting_plane.hpp"

#include <set>

#include "covermech/errors.hpp"

namespace covermech {

Rat cut_lhs_value(const CutConstraint& cut, const std::vector<Rat>& point) {
  Rat v;
  for (const auto& [j, coeff] : cut.terms) v += coeff * point[j];
  return v;
}

bool cut_satisfied(const CutConstraint& cut, const std::vector<Rat>& point) {
  const Rat lhs = cut_lhs_value(cut, point);
  switch (cut.rel) {
    case Relation::LessEq: return lhs <= cut.rhs;
    case Relation::Equal: return lhs == cut.rhs;
    case Relation::GreaterEq: return lhs >= cut.rhs;
  }
  return false;
}

bool cut_blocks_ray(const CutConstraint& cut, const std::vector<Rat>& ray) {
  const Rat g = cut_lhs_value(cut, ray);
  switch (cut.rel) {
    case Relation::LessEq: return g.sign() > 0;
    case Relation::Equal: return g.sign() != 0;
    case Relation::GreaterEq: return g.sign() < 0;
  }
  return false;
}

namespace {

LinearProgram assemble(std::size_t num_vars, const std::vector<bool>& free_vars,
                       const std::vector<Rat>& objective,
                       const std::vector<const CutConstraint*>& rows) {
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  lp.objective = objective;
  lp.free_var = free_vars;
  lp.free_var.resize(num_vars, false);
  lp.rows.reserve(rows.size());
  for (const auto* cut : rows) {
    std::vector<Rat> coeffs(num_vars, Rat(0));
    for (const auto& [j, coeff] : cut->terms) {
      if (j >= num_vars) throw InputError("cut references unknown variable index");
      coeffs[j] += coeff;
    }
    lp.add_row(std::move(coeffs), cut->rel, cut->rhs);
  }
  return lp;
}

}  // namespace

CuttingPlaneResult cutting_plane_maximize(std::size_t num_vars,
                                          const std::vector<bool>& free_vars,
                                          const std::vector<Rat>& objective,
                                          const std::vector<CutConstraint>& static_constraints,
                                          const std::vector<CutConstraint>& seed_cuts,
                                          SeparationOracle& oracle,
                                          const CuttingPlaneOptions& opts) {
  if (objective.size() != num_vars) throw InputError("objective size mismatch");
  const long cap = opts.max_iterations > 0 ? opts.max_iterations : 10 * (static_cast<long>(num_vars) + 1000);

  CuttingPlaneResult res;
  res.active_constraints = seed_cuts;

  for (long iter = 1;; ++iter) {
    if (iter > cap) {
      throw InternalError("cutting-plane iteration cap exceeded after " + std::to_string(cap) +
                          " rounds with " + std::to_string(res.active_constraints.size()) + " cuts");
    }
    res.iterations = iter;

    std::vector<const CutConstraint*> rows;
    rows.reserve(static_constraints.size() + res.active_constraints.size());
    for (const auto& c : static_constraints) rows.push_back(&c);
    for (const auto& c : res.active_constraints) rows.push_back(&c);

    const LpOutcome outcome = solve_lp(assemble(num_vars, free_vars, objective, rows));

    if (outcome.status == LpStatus::Infeasible) {
      throw InternalError("restricted LP infeasible inside cutting-plane driver");
    }

    if (outcome.status == LpStatus::Unbounded) {
      auto cuts = oracle.separate_ray(outcome.ray);
      if (cuts.empty()) {
        res.status = LpStatus::Unbounded;
        return res;
      }
      bool blocked = false;
      for (auto& c : cuts) {
        blocked |= cut_blocks_ray(c, outcome.ray);
        res.active_constraints.push_back(std::move(c));
      }
      if (!blocked) throw InternalError("ray separation returned cuts that do not block the ray");
      continue;
    }

    auto cuts = oracle.separate(outcome.solution);
    if (cuts.empty()) {
      res.status = LpStatus::Optimal;
      res.optimum = outcome.value;
      res.point = outcome.solution;
      return res;
    }
    bool progressed = false;
    for (auto& c : cuts) {
      progressed |= !cut_satisfied(c, outcome.solution);
      res.active_constraints.push_back(std::move(c));
    }
    if (!progressed) {
      throw InternalError("separation oracle reported violation but returned satisfied cuts");
    }
  }
}

}  // namespace covermech

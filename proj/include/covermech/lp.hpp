#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "covermech/rational.hpp"

namespace covermech {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpRow {
  std::vector<Rat> coeffs;  // dense, one per variable
  Relation rel = Relation::GreaterEq;
  Rat rhs;
};

// Dense LP carrier. Variables are nonnegative unless marked free.
struct LinearProgram {
  Sense sense = Sense::Minimize;
  std::vector<Rat> objective;
  std::vector<LpRow> rows;
  std::vector<bool> free_var;  // empty == all nonnegative

  std::size_t num_vars() const { return objective.size(); }

  std::size_t add_variable(const Rat& obj_coeff, bool is_free = false) {
    objective.push_back(obj_coeff);
    if (is_free && free_var.size() < objective.size()) free_var.resize(objective.size(), false);
    if (!free_var.empty()) free_var.resize(objective.size(), false);
    if (is_free) free_var[objective.size() - 1] = true;
    return objective.size() - 1;
  }

  void add_row(std::vector<Rat> coeffs, Relation rel, Rat rhs) {
    rows.push_back(LpRow{std::move(coeffs), rel, std::move(rhs)});
  }

  bool is_free(std::size_t j) const { return j < free_var.size() && free_var[j]; }
};

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rat> solution;  // Optimal only; basic solution in original variables
  Rat value;                  // Optimal only
  std::vector<Rat> ray;       // Unbounded only: improving recession direction
};

// Exact primal simplex, two phases. Dantzig pricing with an automatic and
// permanent switch to Bland's rule once degeneracy stalls progress, so the
// pivoting rule is fixed and cycling is impossible. Throws std::invalid_argument
// on dimension mismatches.
LpOutcome solve_lp(const LinearProgram& lp);

// Exact feasibility check of a point against every row and sign constraint.
bool lp_point_feasible(const LinearProgram& lp, const std::vector<Rat>& x);

Rat lp_objective_value(const LinearProgram& lp, const std::vector<Rat>& x);

}  // namespace covermech

#include "covermech/paylp.hpp"

#include <algorithm>
#include <set>

#include "covermech/errors.hpp"

namespace covermech {

bool row_allows(const PayLpRow& row, const Allocation& w) {
  for (int i : row.zero_players) {
    if (!w.player_empty(i)) return false;
  }
  return true;
}

Rat LpPair::expected_cost(const TypeProfile& true_type, int player, std::size_t row) const {
  Rat total;
  for (const auto& [w, p] : lotteries[row]) total += p * true_type.cost_of(player, w);
  return total;
}

Rat LpPair::expected_public_cost(const CoveringProblem& problem, std::size_t row) const {
  Rat total;
  for (const auto& [w, p] : lotteries[row]) {
    const auto pub = problem.public_cost(w);
    if (!pub) throw InternalError("lottery contains an infeasible allocation");
    total += p * *pub;
  }
  return total;
}

bool LpPair::ever_allocates(int player, std::size_t row) const {
  for (const auto& [w, p] : lotteries[row]) {
    if (!w.player_empty(player)) return true;
  }
  return false;
}

Rat paylp_objective(const CoveringProblem& problem, const PayLpSpec& spec, const LpPair& pair) {
  Rat total;
  for (std::size_t r = 0; r < spec.rows.size(); ++r) {
    if (spec.rows[r].prob.is_zero()) continue;
    Rat inner = spec.kappa * pair.expected_public_cost(problem, r);
    for (int i = 0; i < problem.num_players(); ++i) inner += pair.payment(i, r);
    total += spec.rows[r].prob * inner;
  }
  return total;
}

std::vector<std::string> paylp_violations(const CoveringProblem& problem, const PayLpSpec& spec,
                                          const LpPair& pair) {
  std::vector<std::string> out;
  if (pair.lotteries.size() != spec.rows.size()) {
    out.push_back("lottery table size mismatch");
    return out;
  }
  for (std::size_t r = 0; r < spec.rows.size(); ++r) {
    Rat mass;
    for (const auto& [w, p] : pair.lotteries[r]) {
      if (p.sign() < 0) out.push_back("row " + std::to_string(r) + ": negative lottery weight");
      if (!row_allows(spec.rows[r], w)) out.push_back("row " + std::to_string(r) + ": restricted player allocated");
      if (!problem.feasible(w)) out.push_back("row " + std::to_string(r) + ": infeasible allocation in lottery");
      mass += p;
    }
    if (mass != Rat(1)) out.push_back("row " + std::to_string(r) + ": lottery mass " + mass.str());
  }
  for (const auto& [key, p] : pair.payments) {
    if (p.sign() < 0) out.push_back("negative payment for player " + std::to_string(key.first));
  }
  for (const auto& block : spec.blocks) {
    const int i = block.player;
    for (std::size_t a = 0; a < block.row_indices.size(); ++a) {
      const std::size_t ra = block.row_indices[a];
      const TypeProfile& ta = spec.rows[ra].profile;
      const Rat truthful = pair.payment(i, ra) - pair.expected_cost(ta, i, ra);
      if (truthful.sign() < 0) {
        out.push_back("IR violated: player " + std::to_string(i) + " row " + std::to_string(ra) +
                      " slack " + truthful.str());
      }
      for (std::size_t b = 0; b < block.row_indices.size(); ++b) {
        if (a == b) continue;
        const std::size_t rb = block.row_indices[b];
        const Rat deviate = pair.payment(i, rb) - pair.expected_cost(ta, i, rb);
        if (truthful < deviate) {
          out.push_back("IC violated: player " + std::to_string(i) + " rows " + std::to_string(ra) + "->" +
                        std::to_string(rb) + " gain " + (deviate - truthful).str());
        }
      }
    }
  }
  return out;
}

namespace {

void validate_spec(const CoveringProblem& problem, const PayLpSpec& spec) {
  if (spec.kappa.sign() < 0) throw InputError("kappa must be nonnegative");
  for (const auto& row : spec.rows) {
    if (row.profile.costs.size() != static_cast<std::size_t>(problem.num_players())) {
      throw InputError("payment LP row has wrong profile width");
    }
    if (row.prob.sign() < 0) throw InputError("negative row probability");
  }
  for (const auto& block : spec.blocks) {
    if (block.player < 0 || block.player >= problem.num_players()) throw InputError("block player out of range");
    for (std::size_t r : block.row_indices) {
      if (r >= spec.rows.size()) throw InputError("block references unknown row");
    }
  }
}

}  // namespace

LpPair solve_paylp_columns(const CoveringProblem& problem, const PayLpSpec& spec,
                           const std::vector<std::vector<Allocation>>& columns) {
  validate_spec(problem, spec);
  if (columns.size() != spec.rows.size()) throw InputError("column table size mismatch");

  const std::size_t nrows = spec.rows.size();
  std::vector<std::size_t> xbase(nrows);
  std::size_t nv = 0;
  for (std::size_t r = 0; r < nrows; ++r) {
    if (columns[r].empty()) throw InfeasibleError("payment LP row with no allowed allocation");
    for (const auto& w : columns[r]) {
      if (!row_allows(spec.rows[r], w)) throw InternalError("column violates row restriction");
    }
    xbase[r] = nv;
    nv += columns[r].size();
  }
  std::vector<std::size_t> pbase(spec.blocks.size());
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    pbase[b] = nv;
    nv += spec.blocks[b].row_indices.size();
  }

  LinearProgram lp;
  lp.sense = Sense::Minimize;
  lp.objective.assign(nv, Rat(0));
  for (std::size_t r = 0; r < nrows; ++r) {
    if (spec.rows[r].prob.is_zero() || spec.kappa.is_zero()) continue;
    for (std::size_t k = 0; k < columns[r].size(); ++k) {
      const auto pub = problem.public_cost(columns[r][k]);
      if (!pub) throw InternalError("infeasible allocation offered as LP column");
      lp.objective[xbase[r] + k] = spec.kappa * spec.rows[r].prob * *pub;
    }
  }
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const auto& block = spec.blocks[b];
    for (std::size_t a = 0; a < block.row_indices.size(); ++a) {
      lp.objective[pbase[b] + a] = spec.rows[block.row_indices[a]].prob;
    }
  }

  // (2): every row picks a full lottery.
  for (std::size_t r = 0; r < nrows; ++r) {
    std::vector<Rat> row(nv, Rat(0));
    for (std::size_t k = 0; k < columns[r].size(); ++k) row[xbase[r] + k] = Rat(1);
    lp.add_row(std::move(row), Relation::Equal, Rat(1));
  }
  // (3) and (4) per block.
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const auto& block = spec.blocks[b];
    const int i = block.player;
    const std::size_t f = block.row_indices.size();
    for (std::size_t a = 0; a < f; ++a) {
      const std::size_t ra = block.row_indices[a];
      const TypeProfile& ta = spec.rows[ra].profile;
      {
        std::vector<Rat> row(nv, Rat(0));
        row[pbase[b] + a] = Rat(1);
        for (std::size_t k = 0; k < columns[ra].size(); ++k) {
          const Rat c = ta.cost_of(i, columns[ra][k]);
          if (!c.is_zero()) row[xbase[ra] + k] = -c;
        }
        lp.add_row(std::move(row), Relation::GreaterEq, Rat(0));
      }
      for (std::size_t a2 = 0; a2 < f; ++a2) {
        if (a2 == a) continue;
        const std::size_t rb = block.row_indices[a2];
        std::vector<Rat> row(nv, Rat(0));
        row[pbase[b] + a] += Rat(1);
        row[pbase[b] + a2] -= Rat(1);
        for (std::size_t k = 0; k < columns[ra].size(); ++k) {
          const Rat c = ta.cost_of(i, columns[ra][k]);
          if (!c.is_zero()) row[xbase[ra] + k] -= c;
        }
        for (std::size_t k = 0; k < columns[rb].size(); ++k) {
          const Rat c = ta.cost_of(i, columns[rb][k]);
          if (!c.is_zero()) row[xbase[rb] + k] += c;
        }
        lp.add_row(std::move(row), Relation::GreaterEq, Rat(0));
      }
    }
  }

  const LpOutcome out = solve_lp(lp);
  if (out.status == LpStatus::Infeasible) throw InfeasibleError("payment LP infeasible");
  if (out.status == LpStatus::Unbounded) throw InternalError("payment LP unbounded despite nonnegative objective");

  LpPair pair;
  pair.objective = out.value;
  pair.lotteries.resize(nrows);
  for (std::size_t r = 0; r < nrows; ++r) {
    for (std::size_t k = 0; k < columns[r].size(); ++k) {
      const Rat& v = out.solution[xbase[r] + k];
      if (!v.is_zero()) pair.lotteries[r].push_back({columns[r][k], v});
    }
  }
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const auto& block = spec.blocks[b];
    for (std::size_t a = 0; a < block.row_indices.size(); ++a) {
      pair.payments[{block.player, block.row_indices[a]}] = out.solution[pbase[b] + a];
    }
  }
  return pair;
}

LpPair solve_paylp_materialized(const CoveringProblem& problem, const PayLpSpec& spec,
                                const std::vector<Allocation>& omega) {
  std::vector<std::vector<Allocation>> columns(spec.rows.size());
  for (std::size_t r = 0; r < spec.rows.size(); ++r) {
    for (const auto& w : omega) {
      if (row_allows(spec.rows[r], w)) columns[r].push_back(w);
    }
  }
  return solve_paylp_columns(problem, spec, columns);
}

Allocation EnumerationCm::solve(const CoveringProblem& problem, const std::vector<std::vector<Rat>>& costs) {
  const Allocation* best = nullptr;
  Rat best_value;
  for (const auto& w : omega_) {
    const auto pub = problem.public_cost(w);
    if (!pub) throw InternalError("enumeration CM holds an infeasible allocation");
    Rat value = *pub;
    for (std::size_t i = 0; i < w.sets.size(); ++i) {
      for (int v : w.sets[i]) value += costs[i][static_cast<std::size_t>(v)];
    }
    if (!best || value < best_value) {
      best = &w;
      best_value = value;
    }
  }
  if (!best) throw InfeasibleError("no feasible allocation");
  return *best;
}

std::pair<Allocation, Rat> cm_with_signed_costs(const CoveringProblem& problem, CmOracle& oracle,
                                                const std::vector<std::vector<Rat>>& signed_costs,
                                                const Rat& kappa_weight, const Rat& public_upper_bound) {
  if (kappa_weight.sign() < 0) throw InputError("kappa weight must be nonnegative");
  const int n = problem.num_players();

  Allocation forced = problem.empty_allocation();
  std::vector<std::vector<Rat>> cplus(signed_costs);
  std::vector<Rat> flat;
  for (int i = 0; i < n; ++i) {
    auto& row = cplus[static_cast<std::size_t>(i)];
    for (std::size_t v = 0; v < row.size(); ++v) {
      if (row[v].sign() < 0) {
        forced.sets[static_cast<std::size_t>(i)].push_back(static_cast<int>(v));
        row[v] = Rat(0);
      }
      flat.push_back(row[v]);
    }
  }

  Rat gamma;
  if (kappa_weight.sign() > 0) {
    gamma = Rat(1) / kappa_weight;
  } else {
    if (public_upper_bound.sign() <= 0) throw InputError("public upper bound must be positive");
    gamma = Rat(denominator_lcm(flat)) * public_upper_bound;
  }
  std::vector<std::vector<Rat>> scaled(cplus);
  for (auto& row : scaled) {
    for (auto& v : row) v *= gamma;
  }

  const Allocation partial = oracle.solve(problem, scaled);
  if (!problem.feasible(partial)) throw ContractError("CM oracle returned an infeasible allocation");

  Allocation merged = problem.empty_allocation();
  for (int i = 0; i < n; ++i) {
    const auto& a = forced.sets[static_cast<std::size_t>(i)];
    const auto& s = partial.sets[static_cast<std::size_t>(i)];
    auto& m = merged.sets[static_cast<std::size_t>(i)];
    std::set_union(a.begin(), a.end(), s.begin(), s.end(), std::back_inserter(m));
  }
  const auto pub = problem.public_cost(merged);
  if (!pub) throw InternalError("object-monotone public cost rejected a superset allocation");

  Rat value = kappa_weight * *pub;
  for (int i = 0; i < n; ++i) {
    for (int v : merged.sets[static_cast<std::size_t>(i)]) {
      value += signed_costs[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
    }
  }
  return {merged, value};
}

Rat public_cost_strict_upper_bound(const CoveringProblem& problem) {
  if (problem.public_cost_upper_bound) return *problem.public_cost_upper_bound;
  const auto omega = enumerate_allocations(problem);
  if (omega.empty()) throw InfeasibleError("no feasible allocation");
  Rat m;
  for (const auto& w : omega) m = max(m, *problem.public_cost(w));
  return m + Rat(1);
}

namespace {

// Dual variable layout for the cutting-plane path.
struct DualLayout {
  std::size_t nrows = 0;
  std::vector<std::size_t> ybase, bbase, fsize;
  std::size_t num_vars = 0;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> row_blocks;  // row -> (block, position)

  std::size_t gamma(std::size_t r) const { return r; }
  std::size_t y(std::size_t b, std::size_t a, std::size_t a2) const {
    return ybase[b] + a * (fsize[b] - 1) + (a2 < a ? a2 : a2 - 1);
  }
  std::size_t beta(std::size_t b, std::size_t a) const { return bbase[b] + a; }
};

DualLayout make_layout(const PayLpSpec& spec) {
  DualLayout L;
  L.nrows = spec.rows.size();
  std::size_t nv = L.nrows;
  L.row_blocks.resize(L.nrows);
  L.ybase.resize(spec.blocks.size());
  L.bbase.resize(spec.blocks.size());
  L.fsize.resize(spec.blocks.size());
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const std::size_t f = spec.blocks[b].row_indices.size();
    L.fsize[b] = f;
    L.ybase[b] = nv;
    nv += f * (f - 1);
    L.bbase[b] = nv;
    nv += f;
    for (std::size_t a = 0; a < f; ++a) L.row_blocks[spec.blocks[b].row_indices[a]].push_back({b, a});
  }
  L.num_vars = nv;
  return L;
}

class PaylpDualOracle : public SeparationOracle {
 public:
  PaylpDualOracle(const CoveringProblem& problem, const PayLpSpec& spec, const DualLayout& layout,
                  CmOracle& cm, const Rat& pub_ub)
      : problem_(problem), spec_(spec), layout_(layout), cm_(cm), pub_ub_(pub_ub) {}

  std::vector<std::pair<std::size_t, Allocation>> generated;

  CutConstraint make_cut(std::size_t r, const Allocation& w) const {
    CutConstraint cut;
    cut.rel = Relation::LessEq;
    cut.terms.push_back({layout_.gamma(r), Rat(1)});
    for (const auto& [b, a] : layout_.row_blocks[r]) {
      const auto& block = spec_.blocks[b];
      const int i = block.player;
      const Rat ca = spec_.rows[r].profile.cost_of(i, w);
      for (std::size_t a2 = 0; a2 < layout_.fsize[b]; ++a2) {
        if (a2 == a) continue;
        if (!ca.is_zero()) cut.terms.push_back({layout_.y(b, a, a2), -ca});
        const Rat cb = spec_.rows[block.row_indices[a2]].profile.cost_of(i, w);
        if (!cb.is_zero()) cut.terms.push_back({layout_.y(b, a2, a), cb});
      }
      if (!ca.is_zero()) cut.terms.push_back({layout_.beta(b, a), -ca});
    }
    const auto pub = problem_.public_cost(w);
    if (!pub) throw InternalError("cut from infeasible allocation");
    cut.rhs = spec_.kappa * spec_.rows[r].prob * *pub;
    cut.tag = "row " + std::to_string(r);
    return cut;
  }

  std::vector<CutConstraint> separate(const std::vector<Rat>& point) override { return run(point, false); }
  std::vector<CutConstraint> separate_ray(const std::vector<Rat>& ray) override { return run(ray, true); }

 private:
  // The reduced-cost profile: theta coefficients of the (e5) row for `r`.
  std::vector<std::vector<Rat>> theta_profile(std::size_t r, const std::vector<Rat>& v) const {
    std::vector<std::vector<Rat>> theta;
    theta.reserve(spec_.rows[r].profile.costs.size());
    for (const auto& row : spec_.rows[r].profile.costs) theta.emplace_back(row.size(), Rat(0));
    for (const auto& [b, a] : layout_.row_blocks[r]) {
      const auto& block = spec_.blocks[b];
      const std::size_t i = static_cast<std::size_t>(block.player);
      const auto& own = spec_.rows[r].profile.costs[i];
      for (std::size_t a2 = 0; a2 < layout_.fsize[b]; ++a2) {
        if (a2 == a) continue;
        const Rat ya = v[layout_.y(b, a, a2)];
        const Rat yb = v[layout_.y(b, a2, a)];
        const auto& other = spec_.rows[block.row_indices[a2]].profile.costs[i];
        for (std::size_t ov = 0; ov < own.size(); ++ov) {
          if (!ya.is_zero()) theta[i][ov] += own[ov] * ya;
          if (!yb.is_zero()) theta[i][ov] -= other[ov] * yb;
        }
      }
      const Rat be = v[layout_.beta(b, a)];
      if (!be.is_zero()) {
        for (std::size_t ov = 0; ov < own.size(); ++ov) theta[i][ov] += own[ov] * be;
      }
    }
    return theta;
  }

  std::vector<CutConstraint> run(const std::vector<Rat>& v, bool is_ray) {
    std::vector<CutConstraint> cuts;
    for (std::size_t r = 0; r < spec_.rows.size(); ++r) {
      const Rat target = v[layout_.gamma(r)];
      auto ctilde = theta_profile(r, v);
      for (int i : spec_.rows[r].zero_players) {
        const Rat penalty = max(target + Rat(1), Rat(1));
        for (auto& e : ctilde[static_cast<std::size_t>(i)]) e = penalty;
      }
      const Rat weight = is_ray ? Rat(0) : spec_.kappa * spec_.rows[r].prob;
      auto [w, value] = cm_with_signed_costs(problem_, cm_, ctilde, weight, pub_ub_);
      if (value < target) {
        if (!row_allows(spec_.rows[r], w)) {
          throw InternalError("separation produced a restricted allocation for a sentinel row");
        }
        cuts.push_back(make_cut(r, w));
        generated.push_back({r, w});
      }
    }
    return cuts;
  }

  const CoveringProblem& problem_;
  const PayLpSpec& spec_;
  const DualLayout& layout_;
  CmOracle& cm_;
  Rat pub_ub_;
};

}  // namespace

PaylpOracleResult solve_paylp_oracle(const CoveringProblem& problem, const PayLpSpec& spec, CmOracle& oracle,
                                     const std::optional<Rat>& public_upper_bound,
                                     const CuttingPlaneOptions& cp) {
  validate_spec(problem, spec);
  const Rat ub = public_upper_bound ? *public_upper_bound : public_cost_strict_upper_bound(problem);
  const DualLayout layout = make_layout(spec);

  std::vector<Rat> objective(layout.num_vars, Rat(0));
  std::vector<bool> free_vars(layout.num_vars, false);
  for (std::size_t r = 0; r < layout.nrows; ++r) {
    objective[layout.gamma(r)] = Rat(1);
    free_vars[layout.gamma(r)] = true;
  }

  std::vector<CutConstraint> statics;
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const auto& block = spec.blocks[b];
    const std::size_t f = block.row_indices.size();
    for (std::size_t a = 0; a < f; ++a) {
      CutConstraint c;
      c.rel = Relation::LessEq;
      for (std::size_t a2 = 0; a2 < f; ++a2) {
        if (a2 == a) continue;
        c.terms.push_back({layout.y(b, a, a2), Rat(1)});
        c.terms.push_back({layout.y(b, a2, a), Rat(-1)});
      }
      c.terms.push_back({layout.beta(b, a), Rat(1)});
      c.rhs = spec.rows[block.row_indices[a]].prob;
      statics.push_back(std::move(c));
    }
  }

  PaylpDualOracle sep(problem, spec, layout, oracle, ub);

  // Seed one allowed column per row so the restricted primal is feasible and
  // sentinel rows carry their whole (trivial) cut family up front.
  std::vector<CutConstraint> seeds;
  std::map<std::vector<int>, Allocation> seed_cache;
  for (std::size_t r = 0; r < layout.nrows; ++r) {
    auto key = spec.rows[r].zero_players;
    auto it = seed_cache.find(key);
    if (it == seed_cache.end()) {
      std::vector<std::vector<Rat>> penalty;
      for (int i = 0; i < problem.num_players(); ++i) penalty.emplace_back(problem.objects_of(i), Rat(0));
      for (int i : key) {
        for (auto& e : penalty[static_cast<std::size_t>(i)]) e = Rat(1);
      }
      auto [w, value] = cm_with_signed_costs(problem, oracle, penalty, Rat(0), ub);
      if (!row_allows(spec.rows[r], w)) {
        throw InfeasibleError("no allocation avoids the restricted players; instance is not monopoly-free");
      }
      it = seed_cache.emplace(std::move(key), std::move(w)).first;
    }
    seeds.push_back(sep.make_cut(r, it->second));
    sep.generated.push_back({r, it->second});
  }

  const CuttingPlaneResult res =
      cutting_plane_maximize(layout.num_vars, free_vars, objective, statics, seeds, sep, cp);
  if (res.status != LpStatus::Optimal) {
    throw InfeasibleError("payment LP dual unbounded; the primal admits no feasible payments");
  }

  std::vector<std::set<Allocation>> colsets(layout.nrows);
  for (const auto& [r, w] : sep.generated) colsets[r].insert(w);
  std::vector<std::vector<Allocation>> columns(layout.nrows);
  for (std::size_t r = 0; r < layout.nrows; ++r) columns[r].assign(colsets[r].begin(), colsets[r].end());

  PaylpOracleResult out;
  out.pair = solve_paylp_columns(problem, spec, columns);
  out.dual_optimum = res.optimum;
  out.cut_rounds = res.iterations;
  out.generated_cuts = sep.generated.size();
  if (out.pair.objective != res.optimum) {
    throw InternalError("strong duality violated: primal " + out.pair.objective.str() + " vs dual " +
                        res.optimum.str());
  }
  return out;
}

void normalize_never_allocated_payments(const CoveringProblem& problem, const PayLpSpec& spec, LpPair& pair) {
  const Rat before = paylp_objective(problem, spec, pair);
  for (const auto& block : spec.blocks) {
    const int i = block.player;
    std::optional<Rat> delta;
    for (std::size_t r : block.row_indices) {
      if (pair.ever_allocates(i, r)) continue;
      const Rat p = pair.payment(i, r);
      if (!delta) {
        delta = p;
      } else if (*delta != p) {
        throw InternalError("never-allocated payments disagree inside a block");
      }
    }
    if (!delta || delta->is_zero()) continue;
    for (std::size_t r : block.row_indices) {
      auto& p = pair.payments[{i, r}];
      p -= *delta;
      if (p.sign() < 0) throw InternalError("payment normalization produced a negative payment");
    }
  }
  const Rat after = paylp_objective(problem, spec, pair);
  if (after != before) {
    throw InternalError("payment normalization changed the objective from " + before.str() + " to " +
                        after.str());
  }
}

}  // namespace covermech

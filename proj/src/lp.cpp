#include "covermech/lp.hpp"

#include <algorithm>
#include <stdexcept>

namespace covermech {

namespace {

// Standard-form tableau: minimize cost over Ax = b, x >= 0, b >= 0.
// Column layout: structural columns (split free vars), then slack/surplus,
// then artificials. One dense row per constraint plus a reduced-cost row.
class Tableau {
 public:
  std::size_t rows = 0, cols = 0;          // cols excludes the rhs column
  std::vector<std::vector<Rat>> a;         // rows x (cols + 1); last entry is rhs
  std::vector<Rat> cost;                   // cols + 1; last entry is -objective value
  std::vector<std::size_t> basis;          // basic column per row
  bool bland = false;
  long degenerate_streak = 0;

  void init(std::size_t m, std::size_t n) {
    rows = m;
    cols = n;
    a.assign(m, std::vector<Rat>(n + 1));
    cost.assign(n + 1, Rat(0));
    basis.assign(m, 0);
  }

  void pivot(std::size_t r, std::size_t s) {
    auto& prow = a[r];
    const Rat piv = prow[s];
    if (!(piv.sign() > 0)) throw std::logic_error("simplex pivot on nonpositive entry");
    if (piv != Rat(1)) {
      for (auto& e : prow) {
        if (!e.is_zero()) e /= piv;
      }
    }
    std::vector<std::size_t> nz;
    nz.reserve(cols + 1);
    for (std::size_t j = 0; j <= cols; ++j) {
      if (!prow[j].is_zero()) nz.push_back(j);
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      Rat f = a[i][s];
      if (f.is_zero()) continue;
      auto& row = a[i];
      for (std::size_t j : nz) row[j] -= f * prow[j];
      row[s] = Rat(0);
    }
    Rat f = cost[s];
    if (!f.is_zero()) {
      for (std::size_t j : nz) cost[j] -= f * prow[j];
      cost[s] = Rat(0);
    }
    basis[r] = s;
  }

  // Returns cols when the current basis is optimal for `cost`.
  std::size_t choose_entering(const std::vector<bool>& eligible) const {
    if (bland) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (eligible[j] && cost[j].sign() < 0) return j;
      }
      return cols;
    }
    std::size_t best = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (eligible[j] && cost[j].sign() < 0 && (best == cols || cost[j] < cost[best])) best = j;
    }
    return best;
  }

  // Ratio test; returns rows when the column is unbounded below.
  std::size_t choose_leaving(std::size_t s) const {
    std::size_t best = rows;
    for (std::size_t i = 0; i < rows; ++i) {
      if (a[i][s].sign() <= 0) continue;
      if (best == rows) {
        best = i;
        continue;
      }
      const Rat lhs = a[i][cols] * a[best][s];
      const Rat rhs = a[best][cols] * a[i][s];
      if (lhs < rhs || (lhs == rhs && basis[i] < basis[best])) best = i;
    }
    return best;
  }

  // Runs simplex on the current cost row. Returns false on unbounded (sets
  // *unbounded_col to the entering column with no blocking row).
  bool iterate(const std::vector<bool>& eligible, std::size_t* unbounded_col) {
    const long stall_limit = static_cast<long>(2 * (rows + cols) + 16);
    while (true) {
      const std::size_t s = choose_entering(eligible);
      if (s == cols) return true;
      const std::size_t r = choose_leaving(s);
      if (r == rows) {
        if (unbounded_col) *unbounded_col = s;
        return false;
      }
      const bool degenerate = a[r][cols].is_zero();
      pivot(r, s);
      if (degenerate) {
        if (++degenerate_streak > stall_limit) bland = true;
      } else {
        degenerate_streak = 0;
      }
    }
  }
};

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp) {
  const std::size_t n_orig = lp.num_vars();
  for (const auto& row : lp.rows) {
    if (row.coeffs.size() != n_orig) throw std::invalid_argument("LP row width does not match variable count");
  }

  // Column map: structural j -> (pos column, optional neg column for free vars).
  std::vector<std::size_t> pos_col(n_orig), neg_col(n_orig, SIZE_MAX);
  std::size_t ncols = 0;
  for (std::size_t j = 0; j < n_orig; ++j) {
    pos_col[j] = ncols++;
    if (lp.is_free(j)) neg_col[j] = ncols++;
  }
  const std::size_t m = lp.rows.size();
  std::vector<std::size_t> slack_col(m, SIZE_MAX);
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.rows[i].rel != Relation::Equal) slack_col[i] = ncols++;
  }
  const std::size_t n_structural = ncols;

  // Row signs: force rhs >= 0.
  std::vector<bool> negated(m, false);
  for (std::size_t i = 0; i < m; ++i) negated[i] = lp.rows[i].rhs.sign() < 0;

  // Decide which rows need artificials: a slack column with +1 after negation
  // can serve as the initial basic variable.
  std::vector<bool> needs_artificial(m, true);
  for (std::size_t i = 0; i < m; ++i) {
    if (slack_col[i] == SIZE_MAX) continue;
    const bool plus_slack = (lp.rows[i].rel == Relation::LessEq) != negated[i];
    if (plus_slack) needs_artificial[i] = false;
  }
  std::vector<std::size_t> art_col(m, SIZE_MAX);
  for (std::size_t i = 0; i < m; ++i) {
    if (needs_artificial[i]) art_col[i] = ncols++;
  }

  Tableau t;
  t.init(m, ncols);
  const Rat sense_mul = lp.sense == Sense::Minimize ? Rat(1) : Rat(-1);

  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    const Rat rmul = negated[i] ? Rat(-1) : Rat(1);
    auto& tr = t.a[i];
    for (std::size_t j = 0; j < n_orig; ++j) {
      if (row.coeffs[j].is_zero()) continue;
      const Rat v = rmul * row.coeffs[j];
      tr[pos_col[j]] = v;
      if (neg_col[j] != SIZE_MAX) tr[neg_col[j]] = -v;
    }
    if (slack_col[i] != SIZE_MAX) {
      // <= gets +slack, >= gets -slack, then the row sign flip.
      Rat s = row.rel == Relation::LessEq ? Rat(1) : Rat(-1);
      tr[slack_col[i]] = rmul * s;
    }
    if (art_col[i] != SIZE_MAX) tr[art_col[i]] = Rat(1);
    tr[ncols] = rmul * row.rhs;
    t.basis[i] = art_col[i] != SIZE_MAX ? art_col[i] : slack_col[i];
  }

  std::vector<bool> all_eligible(ncols, true);

  // Phase 1: minimize the sum of artificials, priced out against the basis.
  bool have_artificials = false;
  for (std::size_t i = 0; i < m; ++i) have_artificials |= art_col[i] != SIZE_MAX;
  if (have_artificials) {
    for (std::size_t i = 0; i < m; ++i) {
      if (art_col[i] == SIZE_MAX) continue;
      for (std::size_t j = 0; j <= ncols; ++j) {
        if (!t.a[i][j].is_zero()) t.cost[j] -= t.a[i][j];
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (art_col[i] != SIZE_MAX) t.cost[art_col[i]] = Rat(0);
    }
    std::size_t dummy = 0;
    if (!t.iterate(all_eligible, &dummy)) throw std::logic_error("phase-1 objective unbounded");
    if (t.cost[ncols].sign() < 0) {
      LpOutcome out;
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Drive artificials out of the basis; rows that cannot pivot are redundant
    // but harmless (their artificial stays basic at value zero and is frozen).
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] < n_structural) continue;
      std::size_t s = n_structural;
      for (std::size_t j = 0; j < n_structural; ++j) {
        if (t.a[i][j].sign() > 0) { s = j; break; }
      }
      if (s == n_structural) {
        for (std::size_t j = 0; j < n_structural; ++j) {
          if (t.a[i][j].sign() < 0) { s = j; break; }
        }
        if (s != n_structural) {
          // Flip so the pivot entry is positive; rhs is zero here.
          for (auto& e : t.a[i]) e = -e;
        }
      }
      if (s != n_structural) t.pivot(i, s);
    }
  }

  // Phase 2: real objective; artificial columns are ineligible.
  std::vector<bool> eligible(ncols, true);
  for (std::size_t i = 0; i < m; ++i) {
    if (art_col[i] != SIZE_MAX) eligible[art_col[i]] = false;
  }
  std::fill(t.cost.begin(), t.cost.end(), Rat(0));
  for (std::size_t j = 0; j < n_orig; ++j) {
    const Rat c = sense_mul * lp.objective[j];
    if (c.is_zero()) continue;
    t.cost[pos_col[j]] = c;
    if (neg_col[j] != SIZE_MAX) t.cost[neg_col[j]] = -c;
  }
  // Price out the basic columns.
  for (std::size_t i = 0; i < m; ++i) {
    const Rat cb = t.cost[t.basis[i]];
    if (cb.is_zero()) continue;
    for (std::size_t j = 0; j <= ncols; ++j) {
      if (!t.a[i][j].is_zero()) t.cost[j] -= cb * t.a[i][j];
    }
    t.cost[t.basis[i]] = Rat(0);
  }

  std::size_t unbounded_col = ncols;
  const bool bounded = t.iterate(eligible, &unbounded_col);

  LpOutcome out;
  if (!bounded) {
    out.status = LpStatus::Unbounded;
    // The recession direction: entering column increases, basics adjust.
    std::vector<Rat> dir(ncols, Rat(0));
    dir[unbounded_col] = Rat(1);
    for (std::size_t i = 0; i < m; ++i) dir[t.basis[i]] = -t.a[i][unbounded_col];
    out.ray.assign(n_orig, Rat(0));
    for (std::size_t j = 0; j < n_orig; ++j) {
      out.ray[j] = dir[pos_col[j]];
      if (neg_col[j] != SIZE_MAX) out.ray[j] -= dir[neg_col[j]];
    }
    return out;
  }

  out.status = LpStatus::Optimal;
  std::vector<Rat> xfull(ncols, Rat(0));
  for (std::size_t i = 0; i < m; ++i) xfull[t.basis[i]] = t.a[i][ncols];
  out.solution.assign(n_orig, Rat(0));
  for (std::size_t j = 0; j < n_orig; ++j) {
    out.solution[j] = xfull[pos_col[j]];
    if (neg_col[j] != SIZE_MAX) out.solution[j] -= xfull[neg_col[j]];
  }
  out.value = sense_mul * (-t.cost[ncols]);
  return out;
}

bool lp_point_feasible(const LinearProgram& lp, const std::vector<Rat>& x) {
  if (x.size() != lp.num_vars()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!lp.is_free(j) && x[j].sign() < 0) return false;
  }
  for (const auto& row : lp.rows) {
    Rat lhs;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!row.coeffs[j].is_zero() && !x[j].is_zero()) lhs += row.coeffs[j] * x[j];
    }
    switch (row.rel) {
      case Relation::LessEq:
        if (lhs > row.rhs) return false;
        break;
      case Relation::Equal:
        if (lhs != row.rhs) return false;
        break;
      case Relation::GreaterEq:
        if (lhs < row.rhs) return false;
        break;
    }
  }
  return true;
}

Rat lp_objective_value(const LinearProgram& lp, const std::vector<Rat>& x) {
  Rat v;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!lp.objective[j].is_zero() && !x[j].is_zero()) v += lp.objective[j] * x[j];
  }
  return v;
}

}  // namespace covermech

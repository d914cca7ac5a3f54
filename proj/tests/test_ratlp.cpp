#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "covermech/cutting_plane.hpp"
#include "covermech/errors.hpp"
#include "covermech/lp.hpp"
#include "covermech/rational.hpp"

using namespace covermech;

TEST_CASE("rational basics") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-2, -4) == Rat(1, 2));
  CHECK(Rat(2, -4) == Rat(-1, 2));
  CHECK(Rat(1, 2).den() == 2);
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat::parse("7/21") == Rat(1, 3));
  CHECK(Rat::parse("-3") == Rat(-3));
  CHECK(Rat::parse("3/1").str() == "3");
  CHECK(Rat(5, 7).str() == "5/7");
  CHECK_THROWS_AS(Rat::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rat::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(Rat(1) / Rat(0), std::invalid_argument);
  CHECK(denominator_lcm({Rat(1, 4), Rat(5, 6), Rat(3)}) == 12);
  CHECK(denominator_lcm({}) == 1);
}

namespace {

LinearProgram make_lp(Sense sense, std::vector<Rat> obj) {
  LinearProgram lp;
  lp.sense = sense;
  lp.objective = std::move(obj);
  return lp;
}

// Textbook dual: used as the independent witness for strong duality.
LinearProgram make_dual(const LinearProgram& p) {
  REQUIRE(p.sense == Sense::Minimize);
  LinearProgram d;
  d.sense = Sense::Maximize;
  const std::size_t m = p.rows.size(), n = p.num_vars();
  d.objective.resize(m);
  d.free_var.assign(m, false);
  for (std::size_t k = 0; k < m; ++k) {
    // GreaterEq row -> y_k >= 0; LessEq row -> y_k <= 0 (substituted -y');
    // Equal row -> free.
    d.objective[k] = p.rows[k].rel == Relation::LessEq ? -p.rows[k].rhs : p.rows[k].rhs;
    d.free_var[k] = p.rows[k].rel == Relation::Equal;
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rat> coeffs(m);
    for (std::size_t k = 0; k < m; ++k) {
      coeffs[k] = p.rows[k].rel == Relation::LessEq ? -p.rows[k].coeffs[j] : p.rows[k].coeffs[j];
    }
    d.add_row(std::move(coeffs), p.is_free(j) ? Relation::Equal : Relation::LessEq, p.objective[j]);
  }
  return d;
}

}  // namespace

TEST_CASE("solve_lp handles the three canonical outcomes") {
  SUBCASE("lower bound binding") {
    auto lp = make_lp(Sense::Minimize, {Rat(1)});
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == Rat(0));
    CHECK(out.solution[0] == Rat(0));
  }
  SUBCASE("single tight constraint") {
    auto lp = make_lp(Sense::Minimize, {Rat(1), Rat(1)});
    lp.add_row({Rat(1), Rat(1)}, Relation::GreaterEq, Rat(1));
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == Rat(1));
    CHECK(lp_point_feasible(lp, out.solution));
  }
  SUBCASE("contradictory constraints on a free variable") {
    auto lp = make_lp(Sense::Minimize, {Rat(1)});
    lp.free_var = {true};
    lp.add_row({Rat(1)}, Relation::GreaterEq, Rat(1));
    lp.add_row({Rat(-1)}, Relation::GreaterEq, Rat(0));
    auto out = solve_lp(lp);
    CHECK(out.status == LpStatus::Infeasible);
  }
  SUBCASE("unbounded with improving ray") {
    auto lp = make_lp(Sense::Maximize, {Rat(1), Rat(0)});
    lp.add_row({Rat(-1), Rat(1)}, Relation::GreaterEq, Rat(-2));
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::Unbounded);
    REQUIRE(out.ray.size() == 2);
    CHECK(out.ray[0].sign() > 0);  // objective improves along the ray
    // The ray must satisfy the recession form of every row.
    CHECK(-out.ray[0] + out.ray[1] >= Rat(0));
  }
  SUBCASE("equality rows and free variables") {
    auto lp = make_lp(Sense::Minimize, {Rat(2), Rat(3)});
    lp.free_var = {true, false};
    lp.add_row({Rat(1), Rat(1)}, Relation::Equal, Rat(4));
    lp.add_row({Rat(1), Rat(0)}, Relation::LessEq, Rat(1));
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == Rat(11));  // x = 1, y = 3
    CHECK(lp_point_feasible(lp, out.solution));
  }
  SUBCASE("dimension mismatch rejected") {
    auto lp = make_lp(Sense::Minimize, {Rat(1), Rat(1)});
    lp.rows.push_back(LpRow{{Rat(1)}, Relation::GreaterEq, Rat(1)});
    CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);
  }
}

TEST_CASE("solutions are exactly feasible and optimal value matches the point") {
  std::mt19937_64 rng(20240517);
  auto rnd = [&](long lo, long hi) { return static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)) + lo; };
  int optimal_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rnd(1, 4));
    const std::size_t m = static_cast<std::size_t>(rnd(1, 4));
    LinearProgram lp;
    lp.sense = Sense::Minimize;
    lp.free_var.assign(n, false);
    for (std::size_t j = 0; j < n; ++j) {
      lp.objective.push_back(Rat(rnd(-3, 3), rnd(1, 3)));
      lp.free_var[j] = rnd(0, 3) == 0;
    }
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<Rat> coeffs;
      for (std::size_t j = 0; j < n; ++j) coeffs.push_back(Rat(rnd(-3, 3)));
      const long r = rnd(0, 2);
      lp.add_row(std::move(coeffs), r == 0 ? Relation::LessEq : (r == 1 ? Relation::Equal : Relation::GreaterEq),
                 Rat(rnd(-4, 4)));
    }
    const auto out = solve_lp(lp);
    if (out.status != LpStatus::Optimal) continue;
    ++optimal_seen;
    CHECK(lp_point_feasible(lp, out.solution));
    CHECK(lp_objective_value(lp, out.solution) == out.value);

    // Strong duality against the explicitly-built dual.
    const auto dual_out = solve_lp(make_dual(lp));
    REQUIRE(dual_out.status == LpStatus::Optimal);
    CHECK(dual_out.value == out.value);

    // Determinism: identical inputs, identical outcomes.
    const auto again = solve_lp(lp);
    REQUIRE(again.status == LpStatus::Optimal);
    CHECK(again.value == out.value);
    CHECK(again.solution == out.solution);
  }
  CHECK(optimal_seen > 50);
}

namespace {

// Implicit family gamma <= k for k = 1..100; returns the most violated cut.
class EnvelopeOracle : public SeparationOracle {
 public:
  std::vector<CutConstraint> separate(const std::vector<Rat>& point) override {
    if (point[0] <= Rat(1)) return {};
    CutConstraint c;
    c.terms = {{0, Rat(1)}};
    c.rel = Relation::LessEq;
    c.rhs = Rat(1);  // k = 1 maximizes gamma - k
    c.tag = "k=1";
    return {c};
  }
  std::vector<CutConstraint> separate_ray(const std::vector<Rat>& ray) override {
    if (ray[0].sign() <= 0) return {};
    CutConstraint c;
    c.terms = {{0, Rat(1)}};
    c.rel = Relation::LessEq;
    c.rhs = Rat(1);
    c.tag = "k=1";
    return {c};
  }
};

class AlwaysFeasibleOracle : public SeparationOracle {
 public:
  std::vector<CutConstraint> separate(const std::vector<Rat>&) override { return {}; }
};

// Implicit random <=-constraint family over a box; complete separation by scan.
class ScanOracle : public SeparationOracle {
 public:
  std::vector<CutConstraint> family;
  std::vector<CutConstraint> separate(const std::vector<Rat>& point) override {
    const CutConstraint* worst = nullptr;
    Rat worst_gap;
    for (const auto& c : family) {
      const Rat gap = cut_lhs_value(c, point) - c.rhs;
      if (gap.sign() > 0 && (!worst || gap > worst_gap)) {
        worst = &c;
        worst_gap = gap;
      }
    }
    if (!worst) return {};
    return {*worst};
  }
};

}  // namespace

TEST_CASE("cutting-plane driver") {
  SUBCASE("minimum envelope") {
    EnvelopeOracle oracle;
    auto res = cutting_plane_maximize(1, {true}, {Rat(1)}, {}, {}, oracle);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.optimum == Rat(1));
    CHECK(res.active_constraints.size() == 1);
  }
  SUBCASE("immediate certification uses statics alone") {
    AlwaysFeasibleOracle oracle;
    CutConstraint st;
    st.terms = {{0, Rat(1)}};
    st.rel = Relation::LessEq;
    st.rhs = Rat(5);
    auto res = cutting_plane_maximize(1, {true}, {Rat(1)}, {st}, {}, oracle);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.optimum == Rat(5));
    CHECK(res.active_constraints.empty());
  }
  SUBCASE("genuinely unbounded when the oracle cannot block") {
    AlwaysFeasibleOracle oracle;
    auto res = cutting_plane_maximize(1, {true}, {Rat(1)}, {}, {}, oracle);
    CHECK(res.status == LpStatus::Unbounded);
  }
  SUBCASE("re-solving with only the active constraints reproduces the optimum") {
    std::mt19937_64 rng(99);
    auto rnd = [&](long lo, long hi) { return static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)) + lo; };
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = static_cast<std::size_t>(rnd(1, 3));
      ScanOracle oracle;
      const int fam = static_cast<int>(rnd(3, 12));
      for (int k = 0; k < fam; ++k) {
        CutConstraint c;
        for (std::size_t j = 0; j < n; ++j) {
          const Rat coeff(rnd(-2, 3));
          if (!coeff.is_zero()) c.terms.push_back({j, coeff});
        }
        c.rel = Relation::LessEq;
        c.rhs = Rat(rnd(0, 5));
        oracle.family.push_back(c);
      }
      // Box statics keep every restricted LP bounded.
      std::vector<CutConstraint> statics;
      for (std::size_t j = 0; j < n; ++j) {
        CutConstraint hi;
        hi.terms = {{j, Rat(1)}};
        hi.rel = Relation::LessEq;
        hi.rhs = Rat(10);
        statics.push_back(hi);
      }
      std::vector<Rat> obj;
      for (std::size_t j = 0; j < n; ++j) obj.push_back(Rat(rnd(0, 3)));

      AlwaysFeasibleOracle no_oracle;
      auto res = cutting_plane_maximize(n, {}, obj, statics, {}, oracle);
      REQUIRE(res.status == LpStatus::Optimal);

      // Materialize everything: same optimum.
      auto all_static = statics;
      for (const auto& c : oracle.family) all_static.push_back(c);
      auto full = cutting_plane_maximize(n, {}, obj, all_static, {}, no_oracle);
      REQUIRE(full.status == LpStatus::Optimal);
      CHECK(full.optimum == res.optimum);

      // Restricted to actives only: same optimum.
      auto compact = cutting_plane_maximize(n, {}, obj, statics, res.active_constraints, no_oracle);
      REQUIRE(compact.status == LpStatus::Optimal);
      CHECK(compact.optimum == res.optimum);
    }
  }
  SUBCASE("iteration cap raises an internal error") {
    class StallingOracle : public SeparationOracle {
     public:
      long k = 0;
      std::vector<CutConstraint> separate(const std::vector<Rat>& point) override {
        CutConstraint c;
        c.terms = {{0, Rat(1)}};
        c.rel = Relation::LessEq;
        c.rhs = point[0] - Rat(1, 1000000);  // always violated, never converges fast
        c.tag = std::to_string(++k);
        return {c};
      }
      std::vector<CutConstraint> separate_ray(const std::vector<Rat>& ray) override {
        return separate(ray);
      }
    };
    StallingOracle oracle;
    CuttingPlaneOptions opts;
    opts.max_iterations = 25;
    CHECK_THROWS_AS(cutting_plane_maximize(1, {true}, {Rat(1)}, {}, {}, oracle, opts), InternalError);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "covermech/bounds.hpp"
#include "covermech/errors.hpp"
#include "instances.hpp"

using namespace covermech;
using namespace covermech::testing;

namespace {

BoundEstimateResult solve_bounds(const CoveringProblem& p, const SupportedDistribution& d, Rat kappa = Rat(0)) {
  EnumerationCm cm(enumerate_allocations(p));
  BoundEstimateOptions opts;
  opts.kappa = kappa;
  return compute_bound_estimates(p, d, cm, opts);
}

}  // namespace

TEST_CASE("bound estimates on the two-seller point instance") {
  auto p = make_single_item(2);
  auto d = SupportedDistribution::make(p, {prof1({1, 2})}, {Rat(1)});
  auto res = solve_bounds(p, d);

  // Support LP optimum buys from seller 1 at payment 1.
  CHECK(res.support_solution.objective == Rat(1));
  // Solution is integral here, so the denominator lcm is 1 and
  // m = max(2*(1+2), N * total payments) = 6.
  CHECK(res.granularity == 1);
  CHECK(res.bounded.sentinel_value(0) == Rat(6));
  CHECK(res.bounded.sentinel_value(1) == Rat(6));

  // Dbar table: the mix profile plus one sentinel profile per player.
  CHECK(res.bounded.profiles().size() == 3);
  int sentinels = 0;
  for (const auto& bp : res.bounded.profiles()) sentinels += bp.sentinel_player.has_value();
  CHECK(sentinels == 2);
}

TEST_CASE("degenerate all-zero instance falls back to max cost + 1") {
  auto p = make_single_item(2);
  auto d = SupportedDistribution::make(p, {prof1({0, 0})}, {Rat(1)});
  auto res = solve_bounds(p, d);
  CHECK(res.support_solution.objective == Rat(0));
  CHECK(res.bounded.sentinel_value(0) == Rat(1));  // guard: strictly above the zero support
}

TEST_CASE("integral data keeps granularity 1") {
  auto p = make_single_item(3);
  auto d = SupportedDistribution::make(p, {prof1({5, 3, 4})}, {Rat(1)});
  auto res = solve_bounds(p, d);
  CHECK(res.granularity == 1);
  CHECK(res.support_solution.objective == Rat(3));
}

TEST_CASE("sentinel overrides must dominate the support") {
  auto p = make_single_item(2);
  auto d = SupportedDistribution::make(p, {prof1({1, 2})}, {Rat(1)});
  EnumerationCm cm(enumerate_allocations(p));
  BoundEstimateOptions opts;
  opts.sentinel_overrides = {Rat(100), std::nullopt};
  auto res = compute_bound_estimates(p, d, cm, opts);
  CHECK(res.bounded.sentinel_value(0) == Rat(100));
  CHECK(res.bounded.sentinel_value(1) == Rat(6));

  opts.sentinel_overrides = {Rat(1), std::nullopt};  // not above the max support cost
  CHECK_THROWS_AS(compute_bound_estimates(p, d, cm, opts), InputError);
}

TEST_CASE("support extension is feasible for the full LP and zeroes sentinels") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 25; ++t) {
    auto inst = random_instance(rng);
    auto omega = enumerate_allocations(inst.problem);
    EnumerationCm cm(omega);
    BoundEstimateOptions opts;
    opts.kappa = inst.kappa;
    auto res = compute_bound_estimates(inst.problem, inst.dist, cm, opts);

    auto extended = extend_support_solution(inst.problem, res.bounded, res.support_spec, res.support_solution, omega);
    const PayLpSpec full = build_full_lp_spec(res.bounded, inst.kappa);
    const auto violations = paylp_violations(inst.problem, full, extended);
    CHECK(violations.empty());
    if (!violations.empty()) {
      for (const auto& v : violations) MESSAGE(v);
    }
    // Objective carries over exactly: sentinel rows have zero weight.
    CHECK(paylp_objective(inst.problem, full, extended) == res.support_solution.objective);

    // Sentinel rows allocate nothing to the sentinel player and pay them zero.
    for (std::size_t r = 0; r < res.bounded.profiles().size(); ++r) {
      const auto& bp = res.bounded.profiles()[r];
      if (!bp.sentinel_player) continue;
      CHECK(!extended.ever_allocates(*bp.sentinel_player, r));
      CHECK(extended.payment(*bp.sentinel_player, r) == Rat(0));
    }
  }
}

TEST_CASE("sentinel tie-break picks the canonical minimum-cost allocation") {
  auto p = make_single_item(2);
  auto d = SupportedDistribution::make(p, {prof1({1, 1})}, {Rat(1)});
  auto res = solve_bounds(p, d);
  auto omega = enumerate_allocations(p);
  auto extended = extend_support_solution(p, res.bounded, res.support_spec, res.support_solution, omega);
  for (std::size_t r = 0; r < res.bounded.profiles().size(); ++r) {
    const auto& bp = res.bounded.profiles()[r];
    if (!bp.sentinel_player) continue;
    REQUIRE(extended.lotteries[r].size() == 1);
    // Minimum total cost at a sentinel profile buys from the other seller
    // alone; ties inside omega resolve to the lexicographically first.
    const auto& w = extended.lotteries[r].front().first;
    CHECK(w.player_empty(*bp.sentinel_player));
    int others = 0;
    for (int i = 0; i < 2; ++i) others += !w.player_empty(i);
    CHECK(others == 1);
  }
}

TEST_CASE("restricted allocations") {
  auto p = make_single_item(2);
  auto d = SupportedDistribution::make(p, {prof1({1, 2})}, {Rat(1)});
  auto res = solve_bounds(p, d);
  auto omega = enumerate_allocations(p);

  // On-support profile: the full space.
  CHECK(restricted_allocations(p, res.bounded, prof1({1, 2}), omega).size() == omega.size());

  // Sentinel profile for player 1: everything that leaves player 1 empty.
  TypeProfile sent = prof1({1, 2});
  sent.costs[0] = {res.bounded.sentinel_value(0)};
  auto rest = restricted_allocations(p, res.bounded, sent, omega);
  REQUIRE(rest.size() == 1);
  CHECK(rest[0].player_empty(0));
  CHECK_FALSE(rest[0].player_empty(1));

  // Outside Dbar: domain error.
  CHECK_THROWS_AS(restricted_allocations(p, res.bounded, prof1({7, 2}), omega), InputError);
}

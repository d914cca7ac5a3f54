#pragma once

// Shared instance builders for the test suites. Everything here is
// deliberately independent of the plugin encodings: problems are built from
// raw evaluators so these can serve as oracles for the library paths.

#include <cstdint>
#include <random>
#include <vector>

#include "covermech/model.hpp"

namespace covermech::testing {

inline CoveringProblem make_single_item(int sellers) {
  std::vector<CoveringProblem::Player> players;
  for (int i = 0; i < sellers; ++i) players.push_back({"s" + std::to_string(i + 1), {"item"}});
  PublicCostFn pub = [](const Allocation& a) -> std::optional<Rat> {
    for (const auto& s : a.sets) {
      if (!s.empty()) return Rat(0);
    }
    return std::nullopt;
  };
  CoveringProblem p(std::move(players), std::move(pub));
  p.public_cost_upper_bound = Rat(1);
  return p;
}

// Vertex cover: one player per node, one object each; edges must be covered.
inline CoveringProblem make_vertex_cover(int nodes, std::vector<std::pair<int, int>> edges) {
  std::vector<CoveringProblem::Player> players;
  for (int i = 0; i < nodes; ++i) players.push_back({"v" + std::to_string(i), {"use"}});
  PublicCostFn pub = [edges = std::move(edges)](const Allocation& a) -> std::optional<Rat> {
    for (const auto& [u, w] : edges) {
      if (a.player_empty(u) && a.player_empty(w)) return std::nullopt;
    }
    return Rat(0);
  };
  CoveringProblem p(std::move(players), std::move(pub));
  p.public_cost_upper_bound = Rat(1);
  return p;
}

// Single-dimensional profile from scalars.
inline TypeProfile prof1(std::vector<long> costs) {
  TypeProfile c;
  for (long v : costs) c.costs.push_back({Rat(v)});
  return c;
}

inline TypeProfile prof1r(std::vector<Rat> costs) {
  TypeProfile c;
  for (const Rat& v : costs) c.costs.push_back({v});
  return c;
}

struct RandomInstance {
  CoveringProblem problem;
  SupportedDistribution dist;
  Rat kappa;
};

// Random monopoly-free covering instance within the acceptance envelope:
// n in {2,3}, |T_i| <= 2, |D| <= 5, |Omega| <= 64. The joint size of the
// materialized payment LP is kept at desk scale so the brute-force oracle
// stays fast; individual draws still reach each cap.
inline RandomInstance random_instance(std::mt19937_64& rng) {
  auto rnd = [&](long lo, long hi) { return static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)) + lo; };

  for (int attempt = 0;; ++attempt) {
    const int n = rnd(0, 1) ? 3 : 2;
    const bool wide = rnd(0, 3) == 0;  // multidimensional draw
    std::vector<std::size_t> tsize;
    for (int i = 0; i < n; ++i) tsize.push_back(wide ? static_cast<std::size_t>(rnd(1, 2)) : 1);

    const int items = static_cast<int>(rnd(1, 2));
    // covers[i][v] = bitmask of items; monotone public cost with optional
    // linear discount term.
    std::vector<std::vector<unsigned>> covers(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (std::size_t v = 0; v < tsize[static_cast<std::size_t>(i)]; ++v) {
        covers[static_cast<std::size_t>(i)].push_back(static_cast<unsigned>(rnd(0, (1 << items) - 1)));
      }
    }
    const bool with_public = rnd(0, 2) == 0;
    std::vector<std::vector<Rat>> weights(static_cast<std::size_t>(n));
    Rat ceiling;
    if (with_public) {
      for (int i = 0; i < n; ++i) {
        for (std::size_t v = 0; v < tsize[static_cast<std::size_t>(i)]; ++v) {
          weights[static_cast<std::size_t>(i)].push_back(Rat(rnd(0, 2)));
        }
      }
      ceiling = Rat(rnd(1, 4));
    }

    std::vector<CoveringProblem::Player> players;
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> objs;
      for (std::size_t v = 0; v < tsize[static_cast<std::size_t>(i)]; ++v) objs.push_back("o" + std::to_string(v));
      players.push_back({"p" + std::to_string(i), std::move(objs)});
    }
    const unsigned full = static_cast<unsigned>((1 << items) - 1);
    PublicCostFn pub = [covers, weights, ceiling, with_public, full](const Allocation& a) -> std::optional<Rat> {
      unsigned got = 0;
      Rat discount;
      for (std::size_t i = 0; i < a.sets.size(); ++i) {
        for (int v : a.sets[i]) {
          got |= covers[i][static_cast<std::size_t>(v)];
          if (with_public) discount += weights[i][static_cast<std::size_t>(v)];
        }
      }
      if (got != full) return std::nullopt;
      if (!with_public) return Rat(0);
      return max(Rat(0), ceiling - discount);
    };
    CoveringProblem problem(std::move(players), std::move(pub));

    std::vector<Allocation> omega;
    try {
      omega = enumerate_allocations(problem);
    } catch (...) {
      continue;
    }
    if (omega.empty() || !check_monopoly_free(problem, omega)) continue;

    const long dsize = wide ? rnd(1, 3) : rnd(1, 5);
    std::vector<TypeProfile> profiles;
    std::vector<Rat> probs;
    Rat denom(static_cast<long>(dsize));
    for (long k = 0; k < dsize; ++k) {
      TypeProfile c;
      for (int i = 0; i < n; ++i) {
        std::vector<Rat> row;
        for (std::size_t v = 0; v < tsize[static_cast<std::size_t>(i)]; ++v) {
          row.push_back(Rat(rnd(0, 6), rnd(1, 3)));
        }
        c.costs.push_back(std::move(row));
      }
      profiles.push_back(std::move(c));
      probs.push_back(Rat(1) / denom);
    }

    SupportedDistribution dist;
    try {
      dist = SupportedDistribution::make(problem, profiles, probs);
    } catch (...) {
      continue;
    }

    // Keep the materialized LP at desk scale.
    std::uint64_t mixes = 0;
    for (int i = 0; i < n; ++i) mixes += (dist.marginal(i).size() + 1) * dist.opponents(i).size();
    if (mixes * omega.size() > 1200) continue;

    const long kk = rnd(0, 3);
    Rat kappa = kk == 0 ? Rat(1) : (kk == 1 ? Rat(1, 2) : Rat(0));

    return RandomInstance{std::move(problem), std::move(dist), kappa};
  }
}

}  // namespace covermech::testing

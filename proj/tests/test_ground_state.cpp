// Copyright 2026 The frustration-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <climits>
#include <map>

#include "doctest.h"
#include "flab/errors.hpp"
#include "flab/ground_state.hpp"
#include "flab/modules.hpp"
#include "flab/rng.hpp"

using namespace flab;

namespace {

struct Brute {
  long energy = LONG_MAX;
  std::vector<SpinState> states;
};

// Every assignment of the present sites, scored with the plain energy sum.
Brute brute_force(const Lattice& lat, const CouplingConfig& J) {
  Brute out;
  const auto sites = lat.sites();
  const std::size_t n = sites.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    SpinState s(lat.site_capacity());
    for (std::size_t i = 0; i < n; ++i) {
      if ((m >> i) & 1U) s.set(sites[i], -1);
    }
    long h = 0;
    for (BondId b = 0; b < lat.num_bonds(); ++b) {
      h -= J[b] * s[lat.bond(b).a] * s[lat.bond(b).b];
    }
    if (h < out.energy) {
      out.energy = h;
      out.states.clear();
    }
    if (h == out.energy) out.states.push_back(s);
  }
  std::sort(out.states.begin(), out.states.end());
  return out;
}

// Column-by-column count for free-boundary charts whose bonds join equal or
// neighbouring columns. Absent sites are left as free spins and divided out.
std::pair<long, Count> column_count(const Lattice& lat, const CouplingConfig& J) {
  const int rows = lat.rows();
  const int cols = lat.cols();
  struct Edge {
    int r1, r2;
    bool neg;
  };
  std::vector<std::vector<Edge>> inside(cols), across(cols);
  for (BondId b = 0; b < lat.num_bonds(); ++b) {
    const SiteId x = lat.bond(b).a, y = lat.bond(b).b;
    const int cx = lat.col_of(x), cy = lat.col_of(y);
    if (cx == cy) {
      inside[cx].push_back({lat.row_of(x), lat.row_of(y), J.negative(b)});
    } else {
      REQUIRE(cy == cx + 1);
      across[cx].push_back({lat.row_of(x), lat.row_of(y), J.negative(b)});
    }
  }
  auto bad = [](const std::vector<Edge>& edges, unsigned s, unsigned t) {
    long u = 0;
    for (const auto& e : edges) u += (((s >> e.r1) ^ (t >> e.r2) ^ e.neg) & 1U);
    return u;
  };
  const unsigned states = 1U << rows;
  std::vector<long> e(states);
  std::vector<Count> n(states, 1);
  for (unsigned t = 0; t < states; ++t) e[t] = bad(inside[0], t, t);
  for (int c = 1; c < cols; ++c) {
    std::vector<long> e2(states, LONG_MAX);
    std::vector<Count> n2(states, 0);
    for (unsigned t = 0; t < states; ++t) {
      for (unsigned s = 0; s < states; ++s) {
        const long v = e[s] + bad(across[c - 1], s, t) + bad(inside[c], t, t);
        if (v < e2[t]) {
          e2[t] = v;
          n2[t] = 0;
        }
        if (v == e2[t]) n2[t] += n[s];
      }
    }
    e.swap(e2);
    n.swap(n2);
  }
  const long best = *std::min_element(e.begin(), e.end());
  Count total = 0;
  for (unsigned t = 0; t < states; ++t) {
    if (e[t] == best) total += n[t];
  }
  total >>= static_cast<unsigned>(lat.site_capacity() - lat.num_sites());
  return {2 * best - static_cast<long>(lat.num_bonds()), total};
}

Lattice random_small(Engine& rng, std::size_t max_sites) {
  for (;;) {
    const auto kind = static_cast<LatticeKind>(uniform_below(rng, 3));
    const auto bc = static_cast<BoundaryCondition>(uniform_below(rng, 3));
    const int r = 2 + static_cast<int>(uniform_below(rng, 5));
    const int c = 2 + static_cast<int>(uniform_below(rng, 6));
    if (static_cast<std::size_t>(r * c) > max_sites) continue;
    try {
      auto lat = build_lattice(kind, r, c, bc);
      if (bernoulli(rng, 0.25)) lat = dilute(lat, {0.85, 0.9, rng()});
      return lat;
    } catch (const InputError&) {
    }
  }
}

}  // namespace

TEST_CASE("textbook cases") {
  const auto sq = build_lattice(LatticeKind::Square, 2, 2, BoundaryCondition::Free);
  auto J = ferromagnetic(sq);
  auto r = enumerate_exhaustive(sq, J);
  CHECK(r.energy == -4);
  CHECK(r.degeneracy == 2);
  J.set(1, -1);
  r = enumerate_exhaustive(sq, J);
  CHECK(r.energy == -2);
  CHECK(r.degeneracy == 8);

  Engine rng = make_engine(2, 2);
  for (int n = 2; n <= 20; ++n) {
    std::vector<std::pair<SiteId, SiteId>> chain;
    for (int i = 0; i + 1 < n; ++i) chain.emplace_back(i, i + 1);
    const auto lat = Lattice::from_graph(n, chain);
    const auto Jc = random_couplings(lat, 0.5, rng);
    const auto res = enumerate_exhaustive(lat, Jc);
    CHECK(res.degeneracy == 2);
    CHECK(res.energy == -(n - 1));
    CHECK(branch_and_bound_enumerate(lat, Jc).degeneracy == 2);
  }
}

TEST_CASE("backends agree with brute force") {
  Engine rng = make_engine(17, 0);
  for (int t = 0; t < 300; ++t) {
    const auto lat = random_small(rng, 16);
    const auto J = random_couplings(lat, uniform01(rng), rng);
    const Brute ref = brute_force(lat, J);
    SearchOptions opt;
    opt.collect_states = true;
    CAPTURE(t);
    for (unsigned threads : {1U, 3U}) {
      opt.threads = threads;
      const auto ex = enumerate_exhaustive(lat, J, opt);
      CHECK(ex.energy == ref.energy);
      CHECK(ex.degeneracy == ref.states.size());
      CHECK(*ex.states == ref.states);
      for (auto mode : {BoundMode::Simple, BoundMode::Plaquette, BoundMode::RussianDoll}) {
        opt.bound = mode;
        const auto bb = branch_and_bound_enumerate(lat, J, opt);
        CHECK(bb.energy == ref.energy);
        CHECK(*bb.states == ref.states);
      }
    }
    if (supports_transfer(lat)) {
      const auto tm = transfer_matrix_count(lat, J);
      CHECK(tm.energy == ref.energy);
      CHECK(tm.degeneracy == ref.states.size());
    }
  }
}

TEST_CASE("ground-state invariants") {
  Engine rng = make_engine(23, 0);
  for (int t = 0; t < 100; ++t) {
    const auto lat = random_small(rng, 20);
    const auto J = random_couplings(lat, 0.5, rng);
    SearchOptions opt;
    opt.collect_states = true;
    const auto r = solve_ground_state(lat, J, opt);
    CHECK(r.degeneracy >= 2);
    CHECK(r.degeneracy % 2 == 0);
    CHECK((r.energy + static_cast<long>(lat.num_bonds())) % 2 == 0);
    CHECK(r.energy >= -static_cast<long>(lat.num_bonds()));
    const std::vector<SiteId> all(lat.sites().begin(), lat.sites().end());
    const auto pattern = plaquette_frustration(lat, J);
    for (const auto& s : *r.states) {
      CHECK(energy(lat, J, s) == r.energy);
      CHECK(std::binary_search(r.states->begin(), r.states->end(), flip(s, all)));
      for (const auto& p : lat.plaquettes()) {
        if (pattern[static_cast<std::size_t>(p.id)] != Frustration::Frustrated) continue;
        CHECK(std::any_of(p.bonds.begin(), p.bonds.end(),
                          [&](BondId b) { return is_unhappy(lat, J, s, b); }));
      }
    }
  }
}

TEST_CASE("transfer matrix on strips") {
  Engine rng = make_engine(29, 0);
  for (auto kind : {LatticeKind::Square, LatticeKind::Triangular}) {
    const auto strip = build_lattice(kind, 6, 30, BoundaryCondition::Cylindrical);
    const auto r = transfer_matrix_count(strip, ferromagnetic(strip));
    CHECK(r.energy == -static_cast<long>(strip.num_bonds()));
    CHECK(r.degeneracy == 2);
  }
  // Larger than exhaustive search, checked against branch and bound.
  for (int t = 0; t < 10; ++t) {
    const auto lat = build_lattice(t % 2 ? LatticeKind::Square : LatticeKind::Triangular, 5, 8,
                                   t % 3 == 0 ? BoundaryCondition::Toroidal
                                              : BoundaryCondition::Free);
    const auto J = random_couplings(lat, 0.5, rng);
    const auto a = transfer_matrix_count(lat, J);
    const auto b = branch_and_bound_enumerate(lat, J);
    CHECK(a.energy == b.energy);
    CHECK(a.degeneracy == b.degeneracy);
  }
  // A planted square module forces a nontrivial flip on top of the global one.
  const auto& spec = builtin_spec("square");
  const auto lat = build_lattice(LatticeKind::Square, 5, 10, BoundaryCondition::Free);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto J = random_couplings(lat, 0.5, rng);
    const auto placed = place(spec, lat, lat.site_at(0, 3), 0);
    REQUIRE(placed);
    embed(spec, lat, *placed, realize_coupling(spec, seed), J);
    CHECK(transfer_matrix_count(lat, J).degeneracy >= 4);
  }

  const auto wide = build_lattice(LatticeKind::Square, 15, 3, BoundaryCondition::Free);
  CHECK_THROWS_AS(transfer_matrix_count(wide, ferromagnetic(wide)), CapacityError);
  const auto hex = build_lattice(LatticeKind::Hexagonal, 4, 4, BoundaryCondition::Free);
  CHECK_THROWS_AS(transfer_matrix_count(hex, ferromagnetic(hex)), InputError);
  const auto dil = dilute(build_lattice(LatticeKind::Square, 4, 4, BoundaryCondition::Free),
                          {0.8, 1.0, 1});
  CHECK_FALSE(supports_transfer(dil));
}

TEST_CASE("caps") {
  const auto big = build_lattice(LatticeKind::Square, 6, 6, BoundaryCondition::Free);
  CHECK_THROWS_AS(enumerate_exhaustive(big, ferromagnetic(big)), CapacityError);
  const auto huge = build_lattice(LatticeKind::Hexagonal, 8, 10, BoundaryCondition::Free);
  CHECK_THROWS_AS(branch_and_bound_enumerate(huge, ferromagnetic(huge)), CapacityError);
  CHECK_THROWS_AS(solve_ground_state(huge, ferromagnetic(huge)), CapacityError);

  // Antiferromagnetic triangles on a torus are massively degenerate (a free
  // parallelogram is not: its dimer cover is unique).
  const auto tri = build_lattice(LatticeKind::Triangular, 4, 6, BoundaryCondition::Toroidal);
  auto J = ferromagnetic(tri);
  for (BondId b = 0; b < tri.num_bonds(); ++b) J.set(b, -1);
  SearchOptions opt;
  opt.collect_states = true;
  opt.max_states = 4;
  CHECK_THROWS_AS(enumerate_exhaustive(tri, J, opt), CapacityError);
  CHECK_THROWS_AS(branch_and_bound_enumerate(tri, J, opt), CapacityError);
}

TEST_CASE("branch and bound on a ferromagnet") {
  const auto lat = build_lattice(LatticeKind::Hexagonal, 6, 10, BoundaryCondition::Free);
  const auto r = branch_and_bound_enumerate(lat, ferromagnetic(lat));
  CHECK(r.energy == -static_cast<long>(lat.num_bonds()));
  CHECK(r.degeneracy == 2);
}

TEST_CASE("hexagonal module block regression") {
  const auto& spec = builtin_spec("hexagonal");
  const Lattice block = block_lattice(spec);
  REQUIRE(block.num_sites() == 54);
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const auto J = realize_coupling(spec, seed);
    const auto bb = branch_and_bound_enumerate(block, J);
    const auto [e, n] = column_count(block, J);
    CHECK(bb.energy == e);
    CHECK(bb.degeneracy == n);
    // Every plaquette is specified, so all realizations are gauge equivalent.
    CHECK(bb.energy == -56);
    CHECK(bb.degeneracy == 576);
  }
}

TEST_CASE("grouping by exterior") {
  const auto lat = build_lattice(LatticeKind::Square, 3, 3, BoundaryCondition::Free);
  SearchOptions opt;
  opt.collect_states = true;
  const auto r = enumerate_exhaustive(lat, ferromagnetic(lat), opt);
  REQUIRE(r.states->size() == 2);
  const std::vector<SiteId> all(lat.sites().begin(), lat.sites().end());
  CHECK(group_by_exterior(*r.states, all).size() == 1);
  CHECK(group_by_exterior(*r.states, {}).size() == 2);
  const std::vector<SiteId> some{0, 4};
  CHECK(group_by_exterior(*r.states, some) ==
        std::vector<std::vector<std::size_t>>{{0}, {1}});

  Engine rng = make_engine(31, 0);
  std::vector<SpinState> states;
  for (int i = 0; i < 40; ++i) states.push_back(random_spins(lat, rng));
  const std::vector<SiteId> inside{1, 2, 5};
  const auto groups = group_by_exterior(states, inside);
  std::size_t total = 0;
  for (const auto& g : groups) {
    total += g.size();
    for (std::size_t i : g) {
      for (SiteId v : lat.sites()) {
        if (std::count(inside.begin(), inside.end(), v)) continue;
        CHECK(states[i][v] == states[g.front()][v]);
      }
    }
  }
  CHECK(total == states.size());
}

TEST_CASE("result json") {
  const auto lat = build_lattice(LatticeKind::Square, 2, 3, BoundaryCondition::Free);
  const auto doc = to_json(enumerate_exhaustive(lat, ferromagnetic(lat)));
  CHECK(doc["energy"] == -7);
  CHECK(doc["degeneracy"] == "2");
  CHECK(doc["backend"] == "exhaustive");
}

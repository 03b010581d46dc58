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
#include <set>

#include "doctest.h"
#include "flab/errors.hpp"
#include "flab/ising.hpp"
#include "flab/rng.hpp"

using namespace flab;

namespace {

// Plain-int reference: H = -sum J s s.
long naive_energy(const Lattice& lat, const CouplingConfig& J, const SpinState& s) {
  long h = 0;
  for (BondId b = 0; b < lat.num_bonds(); ++b) {
    h -= J[b] * s[lat.bond(b).a] * s[lat.bond(b).b];
  }
  return h;
}

Lattice random_lattice(Engine& rng) {
  for (;;) {
    const auto kind = static_cast<LatticeKind>(uniform_below(rng, 3));
    const auto bc = static_cast<BoundaryCondition>(uniform_below(rng, 3));
    const int r = 2 + static_cast<int>(uniform_below(rng, 7));
    const int c = 2 + static_cast<int>(uniform_below(rng, 7));
    try {
      auto lat = build_lattice(kind, r, c, bc);
      if (bernoulli(rng, 0.3)) lat = dilute(lat, {0.85, 0.9, rng()});
      return lat;
    } catch (const InputError&) {
    }
  }
}

std::vector<SiteId> random_subset(const Lattice& lat, Engine& rng) {
  std::vector<SiteId> s;
  const double p = uniform01(rng);
  for (SiteId v : lat.sites()) {
    if (bernoulli(rng, p)) s.push_back(v);
  }
  return s;
}

}  // namespace

TEST_CASE("energy examples") {
  const auto lat = build_lattice(LatticeKind::Square, 2, 2, BoundaryCondition::Free);
  auto J = ferromagnetic(lat);
  const auto up = uniform_spins(lat);
  CHECK(energy(lat, J, up) == -4);
  J.set(0, -1);
  CHECK(energy(lat, J, up) == -2);
  CHECK(energy_from_unhappy(lat, J, up) == -2);
  CHECK(unhappy_bonds(lat, J, up) == std::vector<BondId>{0});

  auto all_neg = ferromagnetic(lat);
  for (BondId b = 0; b < lat.num_bonds(); ++b) all_neg.set(b, -1);
  CHECK(unhappy_bonds(lat, all_neg, up).size() == lat.num_bonds());
  CHECK(unhappy_bonds(lat, ferromagnetic(lat), up).empty());
}

TEST_CASE("energy identities on random instances") {
  Engine rng = make_engine(101, 0);
  for (int t = 0; t < 2000; ++t) {
    const auto lat = random_lattice(rng);
    const auto J = random_couplings(lat, uniform01(rng), rng);
    const auto s = random_spins(lat, rng);
    const long h = energy(lat, J, s);
    CHECK(h == naive_energy(lat, J, s));
    CHECK(h == energy_from_unhappy(lat, J, s));
    CHECK(unhappy_bonds(lat, J, s).size() ==
          static_cast<std::size_t>((static_cast<long>(lat.num_bonds()) + h) / 2));
    std::vector<SiteId> all(lat.sites().begin(), lat.sites().end());
    CHECK(energy(lat, J, flip(s, all)) == h);
  }
}

TEST_CASE("closed-curve parity") {
  const auto lat = build_lattice(LatticeKind::Square, 6, 6, BoundaryCondition::Toroidal);
  Engine rng = make_engine(7, 1);
  for (int t = 0; t < 2000; ++t) {
    const auto J = random_couplings(lat, 0.5, rng);
    const auto s = random_spins(lat, rng);
    // Random walk that returns home along its own path, plus a plaquette.
    Curve c;
    SiteId v = static_cast<SiteId>(uniform_below(rng, lat.num_sites()));
    c.sites.push_back(v);
    const int len = 1 + static_cast<int>(uniform_below(rng, 10));
    for (int i = 0; i < len; ++i) {
      const auto inc = lat.incident(v);
      v = lat.bond(inc[uniform_below(rng, inc.size())]).other(v);
      c.sites.push_back(v);
    }
    const auto& p = lat.plaquettes()[uniform_below(rng, lat.plaquettes().size())];
    std::vector<SiteId> back(c.sites.rbegin(), c.sites.rend());
    // splice a plaquette loop at the far end when it touches it
    if (std::find(p.sites.begin(), p.sites.end(), v) != p.sites.end()) {
      auto at = std::find(p.sites.begin(), p.sites.end(), v) - p.sites.begin();
      for (std::size_t k = 1; k <= p.sites.size(); ++k) {
        c.sites.push_back(p.sites[(static_cast<std::size_t>(at) + k) % p.sites.size()]);
      }
    }
    c.sites.insert(c.sites.end(), back.begin() + 1, back.end());
    REQUIRE(c.closed());
    CHECK(curve_parity_check(lat, J, s, c));

    Curve loop{p.sites};
    loop.sites.push_back(p.sites.front());
    CHECK(curve_parity_check(lat, J, s, loop));
    // Frustrated plaquettes always carry an odd number of unhappy bonds.
    int unhappy = 0;
    int negative = 0;
    for (BondId b : p.bonds) {
      unhappy += is_unhappy(lat, J, s, b) ? 1 : 0;
      negative += J.negative(b) ? 1 : 0;
    }
    CHECK(unhappy % 2 == negative % 2);
  }
  const auto J = ferromagnetic(lat);
  const auto s = uniform_spins(lat);
  CHECK_THROWS_AS(curve_parity_check(lat, J, s, Curve{{0, 1, 2}}), InputError);
  CHECK_THROWS_AS(curve_parity_check(lat, J, s, Curve{{0, 7, 0}}), InputError);
  CHECK(curve_parity_check(lat, J, s, Curve{{0, 1, 0}}));
}

TEST_CASE("plaquette frustration") {
  const auto lat = build_lattice(LatticeKind::Square, 5, 5, BoundaryCondition::Free);
  auto J = ferromagnetic(lat);
  for (auto f : plaquette_frustration(lat, J)) CHECK(f == Frustration::Unfrustrated);

  // An interior bond lies on exactly two plaquettes.
  const BondId b = *lat.find_bond(lat.site_at(2, 2), lat.site_at(2, 3));
  J.set(b, -1);
  const auto pattern = plaquette_frustration(lat, J);
  CHECK(std::count(pattern.begin(), pattern.end(), Frustration::Frustrated) == 2);
  for (const auto& p : lat.plaquettes()) {
    const bool has = std::count(p.bonds.begin(), p.bonds.end(), b) > 0;
    CHECK((pattern[static_cast<std::size_t>(p.id)] == Frustration::Frustrated) == has);
  }

  Engine rng = make_engine(3, 3);
  for (int t = 0; t < 300; ++t) {
    const auto lat2 = random_lattice(rng);
    const auto J2 = random_couplings(lat2, 0.5, rng);
    const SiteId v = lat2.sites()[uniform_below(rng, lat2.num_sites())];
    CHECK(plaquette_frustration(lat2, gauge_flip(lat2, J2, v)) == plaquette_frustration(lat2, J2));
  }

  const std::vector<std::pair<SiteId, SiteId>> edges{{0, 1}, {1, 2}};
  const auto chain = Lattice::from_graph(3, edges);
  CHECK_THROWS_AS(plaquette_frustration(chain, ferromagnetic(chain)), InputError);
}

TEST_CASE("flips and entropic sets") {
  Engine rng = make_engine(9, 9);
  for (int t = 0; t < 2000; ++t) {
    const auto lat = random_lattice(rng);
    const auto J = random_couplings(lat, 0.5, rng);
    const auto s = random_spins(lat, rng);
    const auto S = random_subset(lat, rng);
    const auto fs = flip(s, S);
    CHECK(flip(fs, S) == s);
    for (SiteId v : lat.sites()) {
      const bool in = std::count(S.begin(), S.end(), v) > 0;
      CHECK(fs[v] == (in ? -s[v] : s[v]));
    }
    const auto U = unhappy_bonds(lat, J, s);
    const auto BS = boundary_bonds(lat, S);
    std::set<BondId> u(U.begin(), U.end()), bs(BS.begin(), BS.end());
    std::set<BondId> expected;
    std::size_t in_u = 0;
    for (BondId b : u) {
      if (!bs.count(b)) expected.insert(b);
    }
    for (BondId b : bs) {
      if (!u.count(b)) expected.insert(b);
      else ++in_u;
    }
    const auto after = unhappy_bonds(lat, J, fs);
    CHECK(std::set<BondId>(after.begin(), after.end()) == expected);
    CHECK(after.size() == U.size() - in_u + (bs.size() - in_u));
    CHECK(is_entropic(lat, J, s, S) == (energy(lat, J, fs) == energy(lat, J, s)));
    CHECK(is_entropic(lat, J, s, S) == (in_u * 2 == bs.size()));
  }
  const auto lat = build_lattice(LatticeKind::Square, 3, 3, BoundaryCondition::Free);
  const auto J = ferromagnetic(lat);
  const auto s = uniform_spins(lat);
  CHECK(is_entropic(lat, J, s, {}));
  std::vector<SiteId> all(lat.sites().begin(), lat.sites().end());
  CHECK(is_entropic(lat, J, s, all));
  CHECK(flip(s, {}) == s);
}

TEST_CASE("json round trips") {
  Engine rng = make_engine(1, 1);
  const auto lat = dilute(build_lattice(LatticeKind::Hexagonal, 6, 8, BoundaryCondition::Free),
                          {0.9, 0.9, 4});
  const auto J = random_couplings(lat, 0.5, rng);
  const auto s = random_spins(lat, rng);
  CHECK(couplings_from_json(lat, nlohmann::json::parse(to_json(lat, J).dump())) == J);
  CHECK(spins_from_json(lat, nlohmann::json::parse(to_json(lat, s).dump())) == s);
  CHECK(to_json(lat, s)["spins"].size() == lat.num_sites());
  CHECK_THROWS_AS(couplings_from_json(lat, nlohmann::json::parse(R"({"bonds":[]})")),
                  InputError);
}

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
#include <utility>

#include "doctest.h"
#include "flab/errors.hpp"
#include "flab/lattice.hpp"
#include "flab/rng.hpp"

using namespace flab;

namespace {

constexpr LatticeKind kKinds[] = {LatticeKind::Square, LatticeKind::Triangular,
                                  LatticeKind::Hexagonal};
constexpr BoundaryCondition kBoundaries[] = {
    BoundaryCondition::Free, BoundaryCondition::Cylindrical, BoundaryCondition::Toroidal};

bool wraps_rows(BoundaryCondition b) { return b != BoundaryCondition::Free; }
bool wraps_cols(BoundaryCondition b) { return b == BoundaryCondition::Toroidal; }

bool valid_extent(LatticeKind kind, int n, bool wrapped) {
  if (!wrapped) return n >= 2;
  if (kind == LatticeKind::Hexagonal) return n >= 4 && n % 2 == 0;
  return n >= 3;
}

// Independent neighbour rule on chart positions: decide adjacency for every
// pair from the displacement alone.
std::set<std::pair<SiteId, SiteId>> oracle_bonds(LatticeKind kind, int rows, int cols,
                                                 BoundaryCondition b) {
  std::set<std::pair<SiteId, SiteId>> out;
  const int n = rows * cols;
  auto step = [](int from, int to, int size, bool wrap) {
    // +1 if `to` is one step after `from`, 0 if equal, otherwise something else.
    if (to == from) return 0;
    if (to == from + 1 || (wrap && from == size - 1 && to == 0)) return 1;
    return 9;
  };
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      const int rx = x / cols, cx = x % cols, ry = y / cols, cy = y % cols;
      const int dr = step(rx, ry, rows, wraps_rows(b));
      const int dc = step(cx, cy, cols, wraps_cols(b));
      bool bonded = false;
      switch (kind) {
        case LatticeKind::Square:
          bonded = (dr == 1 && dc == 0) || (dr == 0 && dc == 1);
          break;
        case LatticeKind::Triangular:
          bonded = (dr == 1 && dc == 0) || (dr == 0 && dc == 1) || (dr == 1 && dc == 1);
          break;
        case LatticeKind::Hexagonal:
          bonded = (dr == 0 && dc == 1) || (dr == 1 && dc == 0 && (rx + cx) % 2 == 0);
          break;
        default:
          break;
      }
      if (bonded) out.insert(std::minmax(static_cast<SiteId>(x), static_cast<SiteId>(y)));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("small lattices have the expected counts") {
  const auto a = build_lattice(LatticeKind::Square, 2, 2, BoundaryCondition::Free);
  CHECK(a.num_sites() == 4);
  CHECK(a.num_bonds() == 4);
  CHECK(a.plaquettes().size() == 1);

  const auto b = build_lattice(LatticeKind::Square, 5, 5, BoundaryCondition::Free);
  CHECK(b.num_sites() == 25);
  CHECK(b.num_bonds() == 2 * 5 * 5 - 5 - 5);
  CHECK(b.plaquettes().size() == 16);

  const auto c = build_lattice(LatticeKind::Square, 3, 3, BoundaryCondition::Toroidal);
  CHECK(c.num_sites() == 9);
  CHECK(c.num_bonds() == 18);
  CHECK(c.plaquettes().size() == 9);
}

TEST_CASE("bond sets match the neighbour rule for sizes 2..8") {
  for (auto kind : kKinds) {
    for (auto bc : kBoundaries) {
      for (int r = 2; r <= 8; ++r) {
        for (int c = 2; c <= 8; ++c) {
          CAPTURE(to_string(kind));
          CAPTURE(to_string(bc));
          CAPTURE(r);
          CAPTURE(c);
          if (!valid_extent(kind, r, wraps_rows(bc)) || !valid_extent(kind, c, wraps_cols(bc))) {
            CHECK_THROWS_AS(build_lattice(kind, r, c, bc), InputError);
            continue;
          }
          const auto lat = build_lattice(kind, r, c, bc);
          std::set<std::pair<SiteId, SiteId>> got;
          for (const Bond& bond : lat.bonds()) {
            CHECK(bond.a < bond.b);
            got.insert({bond.a, bond.b});
          }
          CHECK(got.size() == lat.num_bonds());
          CHECK(got == oracle_bonds(kind, r, c, bc));

          // Closed formulas for the square and triangular families.
          const int hr = wraps_rows(bc) ? r : r - 1;  // vertical bonds per column
          const int hc = wraps_cols(bc) ? c : c - 1;  // horizontal bonds per row
          if (kind == LatticeKind::Square) {
            CHECK(lat.num_bonds() == static_cast<std::size_t>(hr * c + hc * r));
            CHECK(lat.plaquettes().size() == static_cast<std::size_t>(hr * hc));
          } else if (kind == LatticeKind::Triangular) {
            CHECK(lat.num_bonds() == static_cast<std::size_t>(hr * c + hc * r + hr * hc));
            CHECK(lat.plaquettes().size() == static_cast<std::size_t>(2 * hr * hc));
          }

          const std::size_t len = kind == LatticeKind::Square       ? 4
                                  : kind == LatticeKind::Triangular ? 3
                                                                    : 6;
          for (const auto& p : lat.plaquettes()) {
            REQUIRE(p.sites.size() == len);
            std::vector<SiteId> walk = p.sites;
            walk.push_back(p.sites.front());
            CHECK(is_closed_curve(lat, walk));
            std::set<SiteId> distinct(p.sites.begin(), p.sites.end());
            CHECK(distinct.size() == len);
            for (std::size_t i = 0; i < len; ++i) {
              const Bond& bond = lat.bond(p.bonds[i]);
              const auto ends = std::minmax(p.sites[i], p.sites[(i + 1) % len]);
              CHECK(ends.first == bond.a);
              CHECK(ends.second == bond.b);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("construction rejects bad dimensions") {
  CHECK_THROWS_AS(build_lattice(LatticeKind::Square, 1, 5, BoundaryCondition::Free), InputError);
  CHECK_THROWS_AS(build_lattice(LatticeKind::Square, 3, 2, BoundaryCondition::Toroidal),
                  InputError);
  CHECK_THROWS_AS(build_lattice(LatticeKind::Hexagonal, 5, 4, BoundaryCondition::Cylindrical),
                  InputError);
  CHECK_THROWS_AS(build_lattice(LatticeKind::General, 3, 3, BoundaryCondition::Free),
                  InputError);
}

TEST_CASE("row-major numbering") {
  const auto lat = build_lattice(LatticeKind::Triangular, 4, 6, BoundaryCondition::Free);
  CHECK(lat.site_at(2, 3) == 15);
  CHECK(lat.row_of(15) == 2);
  CHECK(lat.col_of(15) == 3);
  CHECK(lat.find_bond(lat.site_at(1, 1), lat.site_at(2, 2)).has_value());
  CHECK_FALSE(lat.find_bond(lat.site_at(1, 2), lat.site_at(2, 1)).has_value());
}

TEST_CASE("dilution") {
  const auto lat = build_lattice(LatticeKind::Square, 5, 5, BoundaryCondition::Free);
  CHECK(dilute(lat, {1.0, 1.0, 3}) == lat);
  CHECK_THROWS_AS(dilute(lat, {0.0, 1.0, 3}), InputError);

  const auto a = dilute(lat, {0.9, 0.9, 11});
  const auto b = dilute(lat, {0.9, 0.9, 11});
  CHECK(a == b);
  CHECK(a.num_sites() == b.num_sites());
  CHECK(a.num_bonds() == b.num_bonds());
  CHECK(a.diluted());
  CHECK_THROWS_AS(dilute(a, {0.9, 0.9, 1}), InputError);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto d = dilute(lat, {0.7, 0.8, seed});
    CHECK(largest_component(d).size() == d.num_sites());
    for (const Bond& bond : d.bonds()) {
      CHECK(d.present(bond.a));
      CHECK(d.present(bond.b));
    }
    CHECK(d.num_sites() + d.removed_sites().size() == 25);
    for (const auto& p : d.plaquettes()) {
      for (BondId id : p.bonds) CHECK(id < d.num_bonds());
    }
  }
}

TEST_CASE("boundary bonds") {
  const auto lat = build_lattice(LatticeKind::Square, 2, 2, BoundaryCondition::Free);
  CHECK(boundary_bonds(lat, {}).empty());
  const std::vector<SiteId> all(lat.sites().begin(), lat.sites().end());
  CHECK(boundary_bonds(lat, all).empty());
  const std::vector<SiteId> corner{0};
  const auto b = boundary_bonds(lat, corner);
  CHECK(b.size() == 2);
  for (BondId id : b) CHECK((lat.bond(id).a == 0 || lat.bond(id).b == 0));

  Engine rng = make_engine(5, 0);
  const auto tri = build_lattice(LatticeKind::Triangular, 5, 6, BoundaryCondition::Toroidal);
  for (int t = 0; t < 200; ++t) {
    std::vector<SiteId> s, rest;
    for (SiteId v : tri.sites()) (bernoulli(rng, 0.4) ? s : rest).push_back(v);
    auto x = boundary_bonds(tri, s);
    auto y = boundary_bonds(tri, rest);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    CHECK(x == y);
    for (BondId id : x) {
      const bool ina = std::count(s.begin(), s.end(), tri.bond(id).a) > 0;
      const bool inb = std::count(s.begin(), s.end(), tri.bond(id).b) > 0;
      CHECK(ina != inb);
    }
  }
}

TEST_CASE("curves") {
  const auto lat = build_lattice(LatticeKind::Square, 3, 3, BoundaryCondition::Free);
  const std::vector<SiteId> loop{0, 1, 4, 3, 0};
  const std::vector<SiteId> open{0, 1, 2};
  const std::vector<SiteId> jump{0, 4, 0};
  CHECK(is_closed_curve(lat, loop));
  CHECK_FALSE(is_closed_curve(lat, open));
  CHECK_FALSE(is_closed_curve(lat, jump));
}

TEST_CASE("general graphs") {
  const std::vector<std::pair<SiteId, SiteId>> edges{{0, 1}, {1, 2}, {2, 0}, {2, 3}};
  const std::vector<std::vector<SiteId>> cycles{{0, 1, 2}};
  const auto g = Lattice::from_graph(4, edges, cycles);
  CHECK(g.kind() == LatticeKind::General);
  CHECK(g.num_bonds() == 4);
  CHECK(g.plaquettes().size() == 1);
  const std::vector<std::pair<SiteId, SiteId>> split{{0, 1}, {2, 3}};
  CHECK_THROWS_AS(Lattice::from_graph(4, split), InputError);
  const std::vector<std::vector<SiteId>> bad{{0, 1, 3}};
  CHECK_THROWS_AS(Lattice::from_graph(4, edges, bad), InputError);
}

TEST_CASE("serialization round trips") {
  for (auto kind : kKinds) {
    const auto lat = build_lattice(kind, 4, 6, BoundaryCondition::Toroidal);
    CHECK(lattice_from_json(nlohmann::json::parse(to_json(lat).dump())) == lat);
    const auto d = dilute(build_lattice(kind, 6, 6, BoundaryCondition::Free), {0.85, 0.9, 2});
    const auto doc = to_json(d);
    CHECK(doc.contains("removed_sites"));
    CHECK(lattice_from_json(nlohmann::json::parse(doc.dump())) == d);
  }
  const std::vector<std::pair<SiteId, SiteId>> edges{{0, 1}, {1, 2}, {2, 0}, {2, 3}};
  const auto g = Lattice::from_graph(4, edges).without({}, std::vector<std::pair<SiteId, SiteId>>{{0, 1}});
  CHECK(lattice_from_json(nlohmann::json::parse(to_json(g).dump())) == g);
  CHECK_THROWS_AS(lattice_from_json(nlohmann::json::parse(R"({"kind":"square"})")), InputError);
}

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

#include "flab/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "flab/errors.hpp"
#include "flab/rng.hpp"

namespace flab {
namespace {

std::uint64_t pair_key(SiteId a, SiteId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct Offset {
  int dr;
  int dc;
};

// Forward neighbour offsets generating every bond exactly once.
std::vector<Offset> forward_offsets(LatticeKind kind, int row, int col) {
  switch (kind) {
    case LatticeKind::Square:
      return {{0, 1}, {1, 0}};
    case LatticeKind::Triangular:
      return {{0, 1}, {1, 0}, {1, 1}};
    case LatticeKind::Hexagonal:
      if ((row + col) % 2 == 0) return {{0, 1}, {1, 0}};
      return {{0, 1}};
    case LatticeKind::General:
      break;
  }
  return {};
}

// Plaquette cycles anchored at cell (row, col), as chart offsets.
std::vector<std::vector<Offset>> cell_cycles(LatticeKind kind, int row, int col) {
  switch (kind) {
    case LatticeKind::Square:
      return {{{0, 0}, {0, 1}, {1, 1}, {1, 0}}};
    case LatticeKind::Triangular:
      return {{{0, 0}, {1, 1}, {1, 0}}, {{0, 0}, {0, 1}, {1, 1}}};
    case LatticeKind::Hexagonal:
      if ((row + col) % 2 != 0) return {};
      return {{{0, 0}, {0, 1}, {0, 2}, {1, 2}, {1, 1}, {1, 0}}};
    case LatticeKind::General:
      break;
  }
  return {};
}

void check_wrapped_extent(LatticeKind kind, int extent, const char* axis) {
  if (kind == LatticeKind::Hexagonal) {
    if (extent < 4 || extent % 2 != 0) {
      throw InputError(std::string("hexagonal lattice: wrapped ") + axis +
                       " must be even and at least 4, got " +
                       std::to_string(extent));
    }
  } else if (extent < 3) {
    throw InputError(std::string("wrapped ") + axis +
                     " must be at least 3 to avoid doubled bonds, got " +
                     std::to_string(extent));
  }
}

}  // namespace

std::string_view to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Square:
      return "square";
    case LatticeKind::Triangular:
      return "triangular";
    case LatticeKind::Hexagonal:
      return "hexagonal";
    case LatticeKind::General:
      return "general";
  }
  return "general";
}

std::string_view to_string(BoundaryCondition boundary) {
  switch (boundary) {
    case BoundaryCondition::Free:
      return "free";
    case BoundaryCondition::Cylindrical:
      return "cylindrical";
    case BoundaryCondition::Toroidal:
      return "toroidal";
  }
  return "free";
}

LatticeKind parse_kind(std::string_view text) {
  for (auto k : {LatticeKind::Square, LatticeKind::Triangular,
                 LatticeKind::Hexagonal, LatticeKind::General}) {
    if (text == to_string(k)) return k;
  }
  throw InputError("unknown lattice kind '" + std::string(text) + "'");
}

BoundaryCondition parse_boundary(std::string_view text) {
  for (auto b : {BoundaryCondition::Free, BoundaryCondition::Cylindrical,
                 BoundaryCondition::Toroidal}) {
    if (text == to_string(b)) return b;
  }
  throw InputError("unknown boundary condition '" + std::string(text) + "'");
}

bool Lattice::rows_wrap() const {
  return boundary_ != BoundaryCondition::Free;
}

bool Lattice::cols_wrap() const {
  return boundary_ == BoundaryCondition::Toroidal;
}

Lattice Lattice::build(LatticeKind kind, int rows, int cols,
                       BoundaryCondition boundary) {
  if (kind == LatticeKind::General) {
    throw InputError("general lattices are built from an explicit graph");
  }
  if (rows < 2 || cols < 2) {
    throw InputError("lattice needs rows >= 2 and cols >= 2, got " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  Lattice lat;
  lat.kind_ = kind;
  lat.boundary_ = boundary;
  lat.rows_ = rows;
  lat.cols_ = cols;
  if (lat.rows_wrap()) check_wrapped_extent(kind, rows, "rows");
  if (lat.cols_wrap()) check_wrapped_extent(kind, cols, "cols");

  const auto n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  lat.present_.assign(n, true);

  // Maps a chart offset from (r, c) to a site, honouring wrapped axes.
  auto resolve = [&](int r, int c) -> std::optional<SiteId> {
    if (r >= rows) {
      if (!lat.rows_wrap()) return std::nullopt;
      r -= rows;
    }
    if (c >= cols) {
      if (!lat.cols_wrap()) return std::nullopt;
      c -= cols;
    }
    return lat.site_at(r, c);
  };

  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const SiteId s = lat.site_at(r, c);
      for (const Offset& off : forward_offsets(kind, r, c)) {
        const auto t = resolve(r + off.dr, c + off.dc);
        if (!t) continue;
        if (*t == s || lat.bond_index_.count(pair_key(s, *t)) != 0) {
          throw InputError("dimensions " + std::to_string(rows) + "x" +
                           std::to_string(cols) + " produce a doubled bond");
        }
        lat.bond_index_.emplace(pair_key(s, *t), 0);
        lat.bonds_.push_back({std::min(s, *t), std::max(s, *t)});
      }
    }
  }
  lat.index();

  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      for (const auto& cycle : cell_cycles(kind, r, c)) {
        Plaquette p;
        bool ok = true;
        for (const Offset& off : cycle) {
          const auto s = resolve(r + off.dr, c + off.dc);
          if (!s) {
            ok = false;
            break;
          }
          p.sites.push_back(*s);
        }
        if (!ok) continue;
        for (std::size_t i = 0; i < p.sites.size(); ++i) {
          const auto b = lat.find_bond(p.sites[i], p.sites[(i + 1) % p.sites.size()]);
          if (!b) throw InputError("plaquette does not close in this tiling");
          p.bonds.push_back(*b);
        }
        p.id = static_cast<int>(lat.plaquettes_.size());
        lat.plaquettes_.push_back(std::move(p));
      }
    }
  }
  lat.require_connected();
  return lat;
}

Lattice Lattice::from_graph(int n_sites,
                            std::span<const std::pair<SiteId, SiteId>> bonds,
                            std::span<const std::vector<SiteId>> plaquettes,
                            std::span<const SiteId> absent) {
  if (n_sites < 1) throw InputError("graph needs at least one site");
  Lattice lat;
  lat.kind_ = LatticeKind::General;
  lat.rows_ = 1;
  lat.cols_ = n_sites;
  lat.present_.assign(static_cast<std::size_t>(n_sites), true);
  for (SiteId s : absent) {
    if (s >= static_cast<SiteId>(n_sites)) throw InputError("absent site out of range");
    lat.present_[s] = false;
    lat.removed_sites_.push_back(s);
  }
  std::sort(lat.removed_sites_.begin(), lat.removed_sites_.end());
  for (auto [a, b] : bonds) {
    if (a == b) throw InputError("bond endpoints must be distinct");
    if (a >= static_cast<SiteId>(n_sites) || b >= static_cast<SiteId>(n_sites)) {
      throw InputError("bond endpoint out of range");
    }
    if (!lat.present_[a] || !lat.present_[b]) {
      throw InputError("bond touches an absent site");
    }
    if (!lat.bond_index_.emplace(pair_key(a, b), 0).second) {
      throw InputError("duplicate bond " + std::to_string(a) + "-" + std::to_string(b));
    }
    lat.bonds_.push_back({std::min(a, b), std::max(a, b)});
  }
  lat.index();
  for (const auto& cycle : plaquettes) {
    std::vector<SiteId> closed(cycle.begin(), cycle.end());
    if (!closed.empty()) closed.push_back(closed.front());
    if (cycle.size() < 3 || !is_closed_curve(lat, closed)) {
      throw InputError("explicit plaquette is not a closed curve of the graph");
    }
    Plaquette p;
    p.id = static_cast<int>(lat.plaquettes_.size());
    p.sites = cycle;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      p.bonds.push_back(*lat.find_bond(cycle[i], cycle[(i + 1) % cycle.size()]));
    }
    lat.plaquettes_.push_back(std::move(p));
  }
  lat.require_connected();
  return lat;
}

void Lattice::index() {
  sites_.clear();
  for (SiteId s = 0; s < present_.size(); ++s) {
    if (present_[s]) sites_.push_back(s);
  }
  incident_.assign(present_.size(), {});
  bond_index_.clear();
  for (BondId b = 0; b < bonds_.size(); ++b) {
    incident_[bonds_[b].a].push_back(b);
    incident_[bonds_[b].b].push_back(b);
    bond_index_[pair_key(bonds_[b].a, bonds_[b].b)] = b;
  }
}

void Lattice::require_connected() const {
  if (sites_.empty()) throw InputError("lattice has no sites");
  if (largest_component(*this).size() != sites_.size()) {
    throw InputError("lattice is not connected");
  }
}

std::optional<BondId> Lattice::find_bond(SiteId a, SiteId b) const {
  const auto it = bond_index_.find(pair_key(a, b));
  if (it == bond_index_.end()) return std::nullopt;
  return it->second;
}

Lattice Lattice::without(std::span<const SiteId> sites,
                         std::span<const std::pair<SiteId, SiteId>> bonds) const {
  Lattice lat = *this;
  for (SiteId s : sites) {
    if (s >= lat.present_.size()) throw InputError("removed site out of range");
    lat.present_[s] = false;
  }
  std::unordered_map<std::uint64_t, bool> dropped;
  for (auto [a, b] : bonds) {
    if (!find_bond(a, b)) {
      throw InputError("removed bond " + std::to_string(a) + "-" +
                       std::to_string(b) + " is not a bond");
    }
    dropped[pair_key(a, b)] = true;
  }
  lat.bonds_.clear();
  for (const Bond& bd : bonds_) {
    if (!lat.present_[bd.a] || !lat.present_[bd.b]) continue;
    if (dropped.count(pair_key(bd.a, bd.b)) != 0) {
      lat.removed_bonds_.emplace_back(bd.a, bd.b);
      continue;
    }
    lat.bonds_.push_back(bd);
  }
  // Explicit removals recorded earlier may have become implied by a removed site.
  std::erase_if(lat.removed_bonds_, [&](const auto& e) {
    return !lat.present_[e.first] || !lat.present_[e.second];
  });
  std::sort(lat.removed_bonds_.begin(), lat.removed_bonds_.end());
  lat.removed_bonds_.erase(
      std::unique(lat.removed_bonds_.begin(), lat.removed_bonds_.end()),
      lat.removed_bonds_.end());

  lat.removed_sites_.clear();
  for (SiteId s = 0; s < lat.present_.size(); ++s) {
    if (!lat.present_[s]) lat.removed_sites_.push_back(s);
  }
  lat.index();

  std::vector<Plaquette> kept;
  for (const Plaquette& p : plaquettes_) {
    Plaquette q;
    q.sites = p.sites;
    bool ok = true;
    for (std::size_t i = 0; i < p.sites.size() && ok; ++i) {
      const auto b = lat.find_bond(p.sites[i], p.sites[(i + 1) % p.sites.size()]);
      if (b) {
        q.bonds.push_back(*b);
      } else {
        ok = false;
      }
    }
    if (!ok) continue;
    q.id = static_cast<int>(kept.size());
    kept.push_back(std::move(q));
  }
  lat.plaquettes_ = std::move(kept);
  lat.require_connected();
  return lat;
}

bool operator==(const Lattice& x, const Lattice& y) {
  if (x.kind_ != y.kind_ || x.boundary_ != y.boundary_ || x.rows_ != y.rows_ ||
      x.cols_ != y.cols_ || x.present_ != y.present_ || x.bonds_ != y.bonds_ ||
      x.plaquettes_.size() != y.plaquettes_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < x.plaquettes_.size(); ++i) {
    if (x.plaquettes_[i].sites != y.plaquettes_[i].sites) return false;
  }
  return true;
}

std::vector<SiteId> largest_component(const Lattice& lattice) {
  const std::size_t n = lattice.site_capacity();
  std::vector<int> label(n, -1);
  std::vector<SiteId> best;
  int next = 0;
  for (SiteId start : lattice.sites()) {
    if (label[start] >= 0) continue;
    std::vector<SiteId> comp{start};
    label[start] = next;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      const SiteId s = comp[head];
      for (BondId b : lattice.incident(s)) {
        const SiteId t = lattice.bond(b).other(s);
        if (label[t] < 0) {
          label[t] = next;
          comp.push_back(t);
        }
      }
    }
    ++next;
    if (comp.size() > best.size()) best = std::move(comp);
  }
  std::sort(best.begin(), best.end());
  return best;
}

Lattice dilute(const Lattice& lattice, const DilutionParams& params) {
  if (!(params.p_site >= 0.0 && params.p_site <= 1.0) ||
      !(params.p_bond >= 0.0 && params.p_bond <= 1.0)) {
    throw InputError("dilution probabilities must lie in [0, 1]");
  }
  if (lattice.diluted()) throw InputError("dilute expects an undiluted lattice");

  Engine rng = make_engine(params.seed, 0);
  const std::size_t n = lattice.site_capacity();
  std::vector<bool> keep_site(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    keep_site[s] = uniform01(rng) < params.p_site && lattice.present(static_cast<SiteId>(s));
  }
  std::vector<bool> keep_bond(lattice.num_bonds(), false);
  for (BondId b = 0; b < lattice.num_bonds(); ++b) {
    const Bond& bd = lattice.bond(b);
    keep_bond[b] = uniform01(rng) < params.p_bond && keep_site[bd.a] && keep_site[bd.b];
  }

  // Components of the surviving graph (union-find).
  std::vector<SiteId> parent(n);
  std::iota(parent.begin(), parent.end(), SiteId{0});
  auto find = [&](SiteId s) {
    while (parent[s] != s) s = parent[s] = parent[parent[s]];
    return s;
  };
  for (BondId b = 0; b < lattice.num_bonds(); ++b) {
    if (!keep_bond[b]) continue;
    const SiteId ra = find(lattice.bond(b).a);
    const SiteId rb = find(lattice.bond(b).b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<std::size_t> size(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (keep_site[s]) ++size[find(static_cast<SiteId>(s))];
  }
  SiteId root = 0;
  std::size_t best = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (size[s] > best) {
      best = size[s];
      root = static_cast<SiteId>(s);
    }
  }
  if (best == 0) throw InputError("dilution removed every site");

  std::vector<SiteId> removed;
  for (SiteId s = 0; s < n; ++s) {
    if (!keep_site[s] || find(s) != root) removed.push_back(s);
  }
  std::vector<std::pair<SiteId, SiteId>> removed_bonds;
  for (BondId b = 0; b < lattice.num_bonds(); ++b) {
    const Bond& bd = lattice.bond(b);
    if (!keep_bond[b] && keep_site[bd.a] && keep_site[bd.b] && find(bd.a) == root) {
      removed_bonds.emplace_back(bd.a, bd.b);
    }
  }
  return lattice.without(removed, removed_bonds);
}

std::vector<bool> site_mask(const Lattice& lattice, std::span<const SiteId> subset) {
  std::vector<bool> mask(lattice.site_capacity(), false);
  for (SiteId s : subset) {
    if (!lattice.present(s)) {
      throw InputError("site " + std::to_string(s) + " is not in the lattice");
    }
    mask[s] = true;
  }
  return mask;
}

std::vector<BondId> boundary_bonds(const Lattice& lattice,
                                   std::span<const SiteId> subset) {
  const auto in = site_mask(lattice, subset);
  std::vector<BondId> out;
  for (BondId b = 0; b < lattice.num_bonds(); ++b) {
    const Bond& bd = lattice.bond(b);
    if (in[bd.a] != in[bd.b]) out.push_back(b);
  }
  return out;
}

bool is_closed_curve(const Lattice& lattice, std::span<const SiteId> sites) {
  if (sites.size() < 2 || sites.front() != sites.back()) return false;
  for (std::size_t i = 0; i + 1 < sites.size(); ++i) {
    if (!lattice.find_bond(sites[i], sites[i + 1])) return false;
  }
  return true;
}

nlohmann::ordered_json to_json(const Lattice& lattice) {
  nlohmann::ordered_json doc;
  doc["kind"] = to_string(lattice.kind());
  doc["rows"] = lattice.rows();
  doc["cols"] = lattice.cols();
  doc["boundary"] = to_string(lattice.boundary());
  doc["removed_sites"] = std::vector<SiteId>(lattice.removed_sites().begin(),
                                             lattice.removed_sites().end());
  auto removed = nlohmann::ordered_json::array();
  for (auto [a, b] : lattice.removed_bonds()) removed.push_back({a, b});
  doc["removed_bonds"] = removed;
  if (lattice.kind() == LatticeKind::General) {
    // General graphs cannot be regenerated from dimensions.
    auto bonds = nlohmann::ordered_json::array();
    for (const Bond& bd : lattice.bonds()) bonds.push_back({bd.a, bd.b});
    doc["bonds"] = bonds;
    auto plaqs = nlohmann::ordered_json::array();
    for (const Plaquette& p : lattice.plaquettes()) plaqs.push_back(p.sites);
    doc["plaquettes"] = plaqs;
  }
  return doc;
}

Lattice lattice_from_json(const nlohmann::json& doc) {
  try {
    const LatticeKind kind = parse_kind(doc.at("kind").get<std::string>());
    const int rows = doc.at("rows").get<int>();
    const int cols = doc.at("cols").get<int>();
    const auto removed_sites =
        doc.value("removed_sites", std::vector<SiteId>{});
    std::vector<std::pair<SiteId, SiteId>> removed_bonds;
    for (const auto& e : doc.value("removed_bonds", nlohmann::json::array())) {
      removed_bonds.emplace_back(e.at(0).get<SiteId>(), e.at(1).get<SiteId>());
    }
    if (kind == LatticeKind::General) {
      std::vector<std::pair<SiteId, SiteId>> bonds;
      for (const auto& e : doc.at("bonds")) {
        bonds.emplace_back(e.at(0).get<SiteId>(), e.at(1).get<SiteId>());
      }
      // Stored bonds are the present ones; explicitly removed bonds are
      // re-added so that the removal is recorded again.
      bonds.insert(bonds.end(), removed_bonds.begin(), removed_bonds.end());
      const auto plaqs = doc.value("plaquettes", std::vector<std::vector<SiteId>>{});
      Lattice lat = Lattice::from_graph(cols, bonds, plaqs, removed_sites);
      if (removed_bonds.empty()) return lat;
      return lat.without({}, removed_bonds);
    }
    const BoundaryCondition boundary =
        parse_boundary(doc.value("boundary", std::string("free")));
    Lattice lat = Lattice::build(kind, rows, cols, boundary);
    if (removed_sites.empty() && removed_bonds.empty()) return lat;
    return lat.without(removed_sites, removed_bonds);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed lattice document: ") + e.what());
  }
}

}  // namespace flab

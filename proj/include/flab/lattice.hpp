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

#ifndef FLAB_LATTICE_HPP
#define FLAB_LATTICE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

namespace flab {

using SiteId = std::uint32_t;
using BondId = std::uint32_t;

enum class LatticeKind { Square, Triangular, Hexagonal, General };
enum class BoundaryCondition { Free, Cylindrical, Toroidal };

std::string_view to_string(LatticeKind kind);
std::string_view to_string(BoundaryCondition boundary);
LatticeKind parse_kind(std::string_view text);
BoundaryCondition parse_boundary(std::string_view text);

/// Unordered site pair, stored with a < b.
struct Bond {
  SiteId a = 0;
  SiteId b = 0;

  SiteId other(SiteId s) const { return s == a ? b : a; }
  friend bool operator==(const Bond&, const Bond&) = default;
};

/// Minimal cycle of the lattice. `sites` is cyclically ordered and `bonds[i]`
/// joins sites[i] to sites[(i + 1) % size].
struct Plaquette {
  int id = 0;
  std::vector<SiteId> sites;
  std::vector<BondId> bonds;
};

struct DilutionParams {
  double p_site = 1.0;
  double p_bond = 1.0;
  std::uint64_t seed = 0;
};

/// Finite interaction graph with a row-major site chart.
///
/// Site indices are fixed by the chart (`row * cols + col`) and never change:
/// dilution marks sites absent instead of renumbering, so placements computed
/// on the undiluted lattice stay valid. Bond and plaquette ids are dense over
/// the *present* bonds and plaquettes of this particular lattice.
///
/// Square: right and down neighbours. Triangular: square plus the (r+1, c+1)
/// diagonal in every cell. Hexagonal: brick wall, all horizontal bonds plus a
/// rung (r,c)-(r+1,c) whenever r + c is even. Cylindrical wraps rows (every
/// column closes into a ring); toroidal wraps rows and columns.
///
/// Instances are immutable and always connected.
class Lattice {
 public:
  /// Regular lattice in the chart. Throws InputError for dimensions that would
  /// produce doubled bonds or a tiling that does not close under wrapping.
  static Lattice build(LatticeKind kind, int rows, int cols,
                       BoundaryCondition boundary);

  /// General graph on sites 0..n_sites-1. Plaquettes are optional explicit
  /// cycles; each must be a closed curve of the graph. Sites listed in
  /// `absent` keep their index but are not part of the lattice.
  static Lattice from_graph(int n_sites,
                            std::span<const std::pair<SiteId, SiteId>> bonds,
                            std::span<const std::vector<SiteId>> plaquettes = {},
                            std::span<const SiteId> absent = {});

  /// Copy of this lattice with additional sites and bonds removed. Bonds at
  /// removed sites disappear, as do plaquettes that lose a bond. Throws
  /// InputError if the result is empty or disconnected.
  Lattice without(std::span<const SiteId> sites,
                  std::span<const std::pair<SiteId, SiteId>> bonds = {}) const;

  LatticeKind kind() const { return kind_; }
  BoundaryCondition boundary() const { return boundary_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool rows_wrap() const;
  bool cols_wrap() const;

  /// Size of the site chart, present or not.
  std::size_t site_capacity() const { return present_.size(); }
  std::size_t num_sites() const { return sites_.size(); }
  std::size_t num_bonds() const { return bonds_.size(); }
  bool present(SiteId s) const { return s < present_.size() && present_[s]; }
  /// Present sites in ascending order.
  std::span<const SiteId> sites() const { return sites_; }
  std::span<const Bond> bonds() const { return bonds_; }
  const Bond& bond(BondId b) const { return bonds_[b]; }
  std::span<const Plaquette> plaquettes() const { return plaquettes_; }
  std::span<const BondId> incident(SiteId s) const { return incident_[s]; }
  std::optional<BondId> find_bond(SiteId a, SiteId b) const;

  SiteId site_at(int row, int col) const {
    return static_cast<SiteId>(row * cols_ + col);
  }
  int row_of(SiteId s) const { return static_cast<int>(s) / cols_; }
  int col_of(SiteId s) const { return static_cast<int>(s) % cols_; }

  /// Sites and bonds of the undiluted lattice that are missing here.
  std::span<const SiteId> removed_sites() const { return removed_sites_; }
  std::span<const std::pair<SiteId, SiteId>> removed_bonds() const {
    return removed_bonds_;
  }
  bool diluted() const { return !removed_sites_.empty() || !removed_bonds_.empty(); }

  friend bool operator==(const Lattice& x, const Lattice& y);

 private:
  Lattice() = default;
  void index();
  void require_connected() const;

  LatticeKind kind_ = LatticeKind::General;
  BoundaryCondition boundary_ = BoundaryCondition::Free;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<bool> present_;
  std::vector<SiteId> sites_;
  std::vector<Bond> bonds_;
  std::vector<Plaquette> plaquettes_;
  std::vector<std::vector<BondId>> incident_;
  std::unordered_map<std::uint64_t, BondId> bond_index_;
  std::vector<SiteId> removed_sites_;
  std::vector<std::pair<SiteId, SiteId>> removed_bonds_;
};

inline Lattice build_lattice(LatticeKind kind, int rows, int cols,
                             BoundaryCondition boundary) {
  return Lattice::build(kind, rows, cols, boundary);
}

/// Independent site (p_site) then bond (p_bond) retention, restricted to the
/// largest connected component; ties go to the component holding the smallest
/// site index. One draw is consumed per chart site and per original bond, in
/// index order, so the result depends only on the seed.
Lattice dilute(const Lattice& lattice, const DilutionParams& params);

/// Bonds with exactly one endpoint in `subset`.
std::vector<BondId> boundary_bonds(const Lattice& lattice,
                                   std::span<const SiteId> subset);

/// Membership mask over the site chart.
std::vector<bool> site_mask(const Lattice& lattice, std::span<const SiteId> subset);

/// Largest connected component of the present sites.
std::vector<SiteId> largest_component(const Lattice& lattice);

/// Whether consecutive sites are joined by bonds and the walk returns to its
/// start (length >= 1).
bool is_closed_curve(const Lattice& lattice, std::span<const SiteId> sites);

nlohmann::ordered_json to_json(const Lattice& lattice);
Lattice lattice_from_json(const nlohmann::json& doc);

}  // namespace flab

#endif  // FLAB_LATTICE_HPP

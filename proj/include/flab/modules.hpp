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

#ifndef FLAB_MODULES_HPP
#define FLAB_MODULES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flab/ground_state.hpp"
#include "flab/ising.hpp"
#include "flab/lattice.hpp"

namespace flab {

/// A block of sites with prescribed plaquette frustrations, drawn in a local
/// copy of the lattice chart. Sites and plaquettes keep the labels of the
/// drawing they were transcribed from.
struct ModuleSpec {
  struct Site {
    int label = 0;
    int row = 0;
    int col = 0;
  };
  struct Cell {
    int label = 0;
    std::vector<int> sites;  // cyclic order, by site label
  };

  std::string name;
  LatticeKind kind = LatticeKind::Square;
  std::vector<Site> sites;
  std::vector<std::pair<int, int>> bonds;
  std::vector<Cell> plaquettes;
  /// Only Frustrated / Unfrustrated entries; everything else is unspecified.
  std::map<int, Frustration> constraints;
  /// Symmetry images that count as the module: identity, rot90, rot180, rot270.
  std::vector<std::string> orientations{"identity"};

  int box_rows() const;
  int box_cols() const;
  std::size_t num_specified() const { return constraints.size(); }
  std::size_t index_of(int site_label) const;
};

ModuleSpec module_from_json(const nlohmann::json& doc);
nlohmann::ordered_json to_json(const ModuleSpec& spec);

/// The square, triangular and hexagonal modules, in that order. The data is
/// compiled in and cross-checked against the case analysis of the proofs.
const std::vector<ModuleSpec>& builtin_specs();
const ModuleSpec& builtin_spec(std::string_view name);

/// Same spec with the constraint of one plaquette reversed.
ModuleSpec corrupt(const ModuleSpec& spec, int plaquette_label);

/// The block alone as a free lattice in its bounding box. Site i of the spec
/// is `block_site(spec, i)`; the bonds are exactly the spec's bonds.
Lattice block_lattice(const ModuleSpec& spec);
SiteId block_site(const ModuleSpec& spec, std::size_t index);

/// Order of the specified plaquettes in which each owns a bond absent from
/// all earlier ones, if there is one. Licenses f(1/2) = 2^-m.
std::optional<std::vector<int>> degree_of_freedom_order(const ModuleSpec& spec);

/// Random couplings on block_lattice(spec) meeting every constraint. Bonds
/// are drawn from the seed, then one private bond per specified plaquette is
/// adjusted in degree-of-freedom order. Throws InputError with an
/// inconsistent plaquette combination when no such coupling exists.
CouplingConfig realize_coupling(const ModuleSpec& spec, std::uint64_t seed);

/// Chart sites of one orientation of the block with its bounding box at
/// `anchor` (indexed like spec.sites), or nothing if the image leaves a free
/// axis. Hexagonal anchors must have even row + col.
struct Placement {
  std::size_t orientation = 0;
  std::vector<SiteId> sites;
};
std::optional<Placement> place(const ModuleSpec& spec, const Lattice& lattice,
                               SiteId anchor, std::size_t orientation);

/// Whether the couplings around `anchor` satisfy the constraints in at least
/// one orientation. Missing sites or bonds mean no match. Throws InputError
/// when the anchor is outside the chart or no orientation fits.
bool matches(const ModuleSpec& spec, const Lattice& lattice, const CouplingConfig& J,
             SiteId anchor);
std::optional<std::size_t> matching_orientation(const ModuleSpec& spec,
                                                const Lattice& lattice,
                                                const CouplingConfig& J, SiteId anchor);

/// Copies block couplings onto the placed block inside `J`.
void embed(const ModuleSpec& spec, const Lattice& lattice, const Placement& placement,
           const CouplingConfig& block_J, CouplingConfig& J);

struct VerifyOptions {
  int collar = 1;
  int samples = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Hosts up to this size use exhaustive enumeration, larger ones branch and bound.
  std::size_t exhaustive_sites = 30;
  std::size_t max_states = std::size_t{1} << 22;
};

struct SampleRecord {
  int sample = 0;
  std::vector<SiteId> collar_sites;
  std::size_t host_sites = 0;
  std::size_t host_bonds = 0;
  long energy = 0;
  Count degeneracy = 0;
  std::size_t classes = 0;
  std::size_t smallest_class = 0;
  Backend backend = Backend::Exhaustive;
  bool pass = false;
};

struct VerificationReport {
  std::string spec;
  LatticeKind kind = LatticeKind::Square;
  int ambient_rows = 0;
  int ambient_cols = 0;
  int collar = 0;
  std::uint64_t seed = 0;
  std::vector<SampleRecord> records;
  bool pass = false;
  std::size_t failures() const;
};

/// Checks the module property on random hosts. The ambient lattice is the
/// bounding box grown by two sites on every side (free boundary) with the
/// block at (2, 2). Each sample grows a connected host from the block by
/// `collar` random frontier sites of the ambient lattice, draws J_M from
/// realize_coupling and uniform couplings elsewhere, enumerates every ground
/// state and groups them by their spins outside the block. A sample passes iff
/// no group is a singleton.
VerificationReport verify_module(const ModuleSpec& spec, const VerifyOptions& options);

nlohmann::ordered_json to_json(const VerificationReport& report);

}  // namespace flab

#endif  // FLAB_MODULES_HPP

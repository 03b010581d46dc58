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

#ifndef FLAB_GROUND_STATE_HPP
#define FLAB_GROUND_STATE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "flab/ising.hpp"
#include "flab/lattice.hpp"

namespace flab {

/// Exact state counts; long strips overflow 64 bits.
using Count = boost::multiprecision::cpp_int;

enum class Backend { Exhaustive, TransferMatrix, BranchAndBound };
std::string_view to_string(Backend backend);

/// Lower bound used by branch and bound for bonds among undecided sites.
enum class BoundMode {
  Simple,       // zero unhappy bonds
  Plaquette,    // one per bond-disjoint frustrated plaquette
  RussianDoll,  // exact minimum of the undecided suffix, solved first
};

struct GroundStateResult {
  long energy = 0;
  Count degeneracy = 0;
  /// All ground states in ascending bit order, when requested.
  std::optional<std::vector<SpinState>> states;
  Backend backend = Backend::Exhaustive;
};

struct SearchOptions {
  bool collect_states = false;
  /// Site cap for the exhaustive backend.
  std::size_t max_sites = 30;
  /// Cap on the number of collected states (both gauge copies counted).
  std::size_t max_states = std::size_t{1} << 22;
  /// Worker threads; results do not depend on this.
  unsigned threads = 1;
  BoundMode bound = BoundMode::RussianDoll;
};

inline constexpr int kMaxTransferWidth = 14;
inline constexpr std::size_t kMaxBranchSites = 64;

/// Visits all 2^(n-1) states with site 0 pinned in Gray-code order, doubling
/// the count. Throws CapacityError above `options.max_sites`.
GroundStateResult enumerate_exhaustive(const Lattice& lattice, const CouplingConfig& J,
                                       const SearchOptions& options = {});

/// Column-by-column min-plus dynamic programme over the 2^rows states of a
/// column. Square and triangular lattices without dilution, rows <= 14;
/// toroidal lattices loop over the first column's state.
GroundStateResult transfer_matrix_count(const Lattice& lattice, const CouplingConfig& J);
bool supports_transfer(const Lattice& lattice);

/// Depth-first search in breadth-first site order, pruning only branches whose
/// lower bound exceeds the best energy found.
GroundStateResult branch_and_bound_enumerate(const Lattice& lattice,
                                             const CouplingConfig& J,
                                             const SearchOptions& options = {});

/// Picks exhaustive for <= 25 sites, the transfer matrix for supported strips,
/// branch and bound otherwise.
GroundStateResult solve_ground_state(const Lattice& lattice, const CouplingConfig& J,
                                     const SearchOptions& options = {});

/// Indices of `states` grouped by their restriction to the complement of
/// `inside`; groups appear in order of first occurrence.
std::vector<std::vector<std::size_t>> group_by_exterior(std::span<const SpinState> states,
                                                        std::span<const SiteId> inside);

nlohmann::ordered_json to_json(const GroundStateResult& result);

}  // namespace flab

#endif  // FLAB_GROUND_STATE_HPP

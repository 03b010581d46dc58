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

#ifndef FLAB_BOUNDS_HPP
#define FLAB_BOUNDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "flab/ground_state.hpp"
#include "flab/modules.hpp"

namespace flab {

using Rational = boost::multiprecision::cpp_rational;

struct LemmaCounts {
  Count odd;
  Count even;
};

/// Completions of the n - q free bonds of a closed curve, split by the parity
/// of the total number of negative bonds, given `specified_negatives` among the
/// q fixed ones. Throws InputError unless 0 <= q < n.
LemmaCounts lemma_counts(int n, int q, int specified_negatives);

/// Number of orientations, after checking that no two can hold at once (some
/// plaquette is constrained both ways). Throws SelfCheckError otherwise.
int orientation_factor(const ModuleSpec& spec);

/// 2^-m for m specified plaquettes. Throws InputError if the spec fails the
/// degree-of-freedom check.
Rational f_of_half(const ModuleSpec& spec);

struct DensityEstimate {
  double p = 0.5;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;  // binomial, sqrt(q(1-q)/n)
};

/// Fraction of random block couplings (each bond negative with probability
/// p) matching the spec in some orientation. Deterministic in the seed; the
/// thread count only changes the speed.
DensityEstimate empirical_module_density(const ModuleSpec& spec, double p,
                                         std::uint64_t samples, std::uint64_t seed,
                                         unsigned threads = 1);

struct Tile {
  SiteId anchor = 0;
  std::optional<std::size_t> orientation;  // set when the tile is a module
};

struct LowerBoundCertificate {
  int n_found = 0;
  std::vector<Tile> tiles;
  std::vector<SiteId> anchors() const;  // matching anchors only
};

/// Tiles the chart with block translates anchored on a grid starting at site 0
/// (strides are the bounding box, widened by one column for hexagonal blocks
/// to keep anchors on even sites) and counts the tiles that are modules; the
/// degeneracy is then at least 2^n_found. Throws InputError when the lattice
/// dimensions are not multiples of the strides.
LowerBoundCertificate degeneracy_lower_bound(const ModuleSpec& spec, const Lattice& lattice,
                                             const CouplingConfig& J);
std::pair<int, int> tile_strides(const ModuleSpec& spec);

struct BoundParams {
  double p = 0.5;
  double p_site = 1.0;
  double p_bond = 1.0;
  double epsilon = 0.01;
  double delta = 0.01;
  /// Monte Carlo draws when p != 1/2.
  std::uint64_t samples = 10'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct BoundReport {
  std::string spec;
  std::size_t lattice_size = 0;
  std::size_t block_sites = 0;
  std::size_t block_bonds = 0;
  std::size_t k = 0;
  int orientations = 1;
  BoundParams params;
  std::string method;  // closed_form | monte_carlo
  double f = 0.0;
  std::optional<Rational> f_exact;
  double q = 0.0;
  double exponent = 0.0;
  double density = 0.0;
  /// q / |M|: the density as epsilon -> 0 on lattices tiled exactly.
  double density_limit = 0.0;
  std::optional<Rational> density_constant;
  std::uint64_t samples = 0;
  double stderr_ = 0.0;
  /// Blocks sufficient for the (epsilon, delta) statement by Hoeffding's bound.
  std::optional<double> k0;
};

/// Fills a BoundReport for k = floor(lattice_size / |M|) blocks.
BoundReport theorem4_report(const ModuleSpec& spec, std::size_t lattice_size,
                            const BoundParams& params);

/// log2(degeneracy) / |sites|.
double entropy_density(const Lattice& lattice, const CouplingConfig& J,
                       const Count& degeneracy);
double log2(const Count& n);

nlohmann::ordered_json to_json(const BoundReport& report);
std::string csv_header();
std::string to_csv_row(const BoundReport& report);

}  // namespace flab

#endif  // FLAB_BOUNDS_HPP

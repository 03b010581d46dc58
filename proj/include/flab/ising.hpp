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

#ifndef FLAB_ISING_HPP
#define FLAB_ISING_HPP

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "flab/lattice.hpp"
#include "flab/rng.hpp"
#include "json.hpp"

namespace flab {

/// Packed vector of ±1 values. Bit 0 encodes +1 and bit 1 encodes -1, so the
/// product of two signs is the XOR of their bits.
template <class Tag>
class Signs {
 public:
  Signs() = default;
  explicit Signs(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool negative(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  int operator[](std::size_t i) const { return negative(i) ? -1 : 1; }
  void set(std::size_t i, int value) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value < 0) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  std::size_t count_negative() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const Signs&, const Signs&) = default;
  friend auto operator<=>(const Signs& x, const Signs& y) {
    return x.words_ <=> y.words_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BondTag {};
struct SiteTag {};

/// J: one sign per bond id of a lattice.
using CouplingConfig = Signs<BondTag>;
/// sigma: one sign per chart site; absent sites stay +1 and are ignored.
using SpinState = Signs<SiteTag>;

CouplingConfig ferromagnetic(const Lattice& lattice);
/// Each bond negative independently with probability p.
CouplingConfig random_couplings(const Lattice& lattice, double p, Engine& rng);
SpinState uniform_spins(const Lattice& lattice);
SpinState random_spins(const Lattice& lattice, Engine& rng);

/// Sequence s_0..s_n of sites with consecutive pairs bonded.
struct Curve {
  std::vector<SiteId> sites;
  bool closed() const { return sites.size() >= 2 && sites.front() == sites.back(); }
};

enum class Frustration : std::uint8_t { Unfrustrated, Frustrated, Unspecified };
using FrustrationPattern = std::vector<Frustration>;

/// -sum J_ij s_i s_j, evaluated term by term.
long energy(const Lattice& lattice, const CouplingConfig& J, const SpinState& sigma);
/// 2|U| - |B|; equal to energy() for every input.
long energy_from_unhappy(const Lattice& lattice, const CouplingConfig& J,
                         const SpinState& sigma);

bool is_unhappy(const Lattice& lattice, const CouplingConfig& J,
                const SpinState& sigma, BondId b);
/// Bonds with J_ij s_i s_j = -1, ascending.
std::vector<BondId> unhappy_bonds(const Lattice& lattice, const CouplingConfig& J,
                                  const SpinState& sigma);

/// Parity of negative couplings along a closed curve equals the parity of
/// unhappy bonds along it (bonds counted with multiplicity). Always true; throws
/// InputError for open curves or steps that are not bonds.
bool curve_parity_check(const Lattice& lattice, const CouplingConfig& J,
                        const SpinState& sigma, const Curve& curve);

/// Frustrated iff the product of J around the plaquette is -1.
FrustrationPattern plaquette_frustration(const Lattice& lattice, const CouplingConfig& J);

/// sigma with the spins of `subset` reversed.
SpinState flip(const SpinState& sigma, std::span<const SiteId> subset);

/// |B_S ∩ U| == |B_S \ U|. The empty set (and the whole lattice) qualify.
bool is_entropic(const Lattice& lattice, const CouplingConfig& J,
                 const SpinState& sigma, std::span<const SiteId> subset);

/// Gauge transformation at one site: every incident coupling changes sign.
CouplingConfig gauge_flip(const Lattice& lattice, const CouplingConfig& J, SiteId site);

void check_sizes(const Lattice& lattice, const CouplingConfig& J);
void check_sizes(const Lattice& lattice, const SpinState& sigma);

nlohmann::ordered_json to_json(const Lattice& lattice, const CouplingConfig& J);
CouplingConfig couplings_from_json(const Lattice& lattice, const nlohmann::json& doc);
nlohmann::ordered_json to_json(const Lattice& lattice, const SpinState& sigma);
SpinState spins_from_json(const Lattice& lattice, const nlohmann::json& doc);

}  // namespace flab

#endif  // FLAB_ISING_HPP

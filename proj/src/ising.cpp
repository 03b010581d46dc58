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

#include "flab/ising.hpp"

#include <string>

#include "flab/errors.hpp"

namespace flab {

void check_sizes(const Lattice& lattice, const CouplingConfig& J) {
  if (J.size() != lattice.num_bonds()) {
    throw InputError("coupling configuration has " + std::to_string(J.size()) +
                     " entries, lattice has " + std::to_string(lattice.num_bonds()) +
                     " bonds");
  }
}

void check_sizes(const Lattice& lattice, const SpinState& sigma) {
  if (sigma.size() != lattice.site_capacity()) {
    throw InputError("spin state has " + std::to_string(sigma.size()) +
                     " entries, lattice chart has " +
                     std::to_string(lattice.site_capacity()) + " sites");
  }
}

CouplingConfig ferromagnetic(const Lattice& lattice) {
  return CouplingConfig(lattice.num_bonds());
}

CouplingConfig random_couplings(const Lattice& lattice, double p, Engine& rng) {
  CouplingConfig J(lattice.num_bonds());
  for (BondId b = 0; b < lattice.num_bonds(); ++b) {
    if (uniform01(rng) < p) J.set(b, -1);
  }
  return J;
}

SpinState uniform_spins(const Lattice& lattice) {
  return SpinState(lattice.site_capacity());
}

SpinState random_spins(const Lattice& lattice, Engine& rng) {
  SpinState sigma(lattice.site_capacity());
  for (SiteId s : lattice.sites()) {
    if (rng() >> 63) sigma.set(s, -1);
  }
  return sigma;
}

long energy(const Lattice& lattice, const CouplingConfig& J, const SpinState& sigma) {
  check_sizes(lattice, J);
  check_sizes(lattice, sigma);
  long h = 0;
  for (BondId b = 0; b < lattice.num_bonds(); ++b) {
    const Bond& bd = lattice.bond(b);
    h -= J[b] * sigma[bd.a] * sigma[bd.b];
  }
  return h;
}

bool is_unhappy(const Lattice& lattice, const CouplingConfig& J,
                const SpinState& sigma, BondId b) {
  const Bond& bd = lattice.bond(b);
  return J.negative(b) != (sigma.negative(bd.a) != sigma.negative(bd.b));
}

std::vector<BondId> unhappy_bonds(const Lattice& lattice, const CouplingConfig& J,
                                  const SpinState& sigma) {
  check_sizes(lattice, J);
  check_sizes(lattice, sigma);
  std::vector<BondId> out;
  for (BondId b = 0; b < lattice.num_bonds(); ++b) {
    if (is_unhappy(lattice, J, sigma, b)) out.push_back(b);
  }
  return out;
}

long energy_from_unhappy(const Lattice& lattice, const CouplingConfig& J,
                         const SpinState& sigma) {
  const auto u = static_cast<long>(unhappy_bonds(lattice, J, sigma).size());
  return 2 * u - static_cast<long>(lattice.num_bonds());
}

bool curve_parity_check(const Lattice& lattice, const CouplingConfig& J,
                        const SpinState& sigma, const Curve& curve) {
  check_sizes(lattice, J);
  check_sizes(lattice, sigma);
  if (!curve.closed()) throw InputError("parity check needs a closed curve");
  bool negative_parity = false;
  bool unhappy_parity = false;
  for (std::size_t i = 0; i + 1 < curve.sites.size(); ++i) {
    const auto b = lattice.find_bond(curve.sites[i], curve.sites[i + 1]);
    if (!b) {
      throw InputError("curve step " + std::to_string(curve.sites[i]) + "-" +
                       std::to_string(curve.sites[i + 1]) + " is not a bond");
    }
    negative_parity ^= J.negative(*b);
    unhappy_parity ^= is_unhappy(lattice, J, sigma, *b);
  }
  return negative_parity == unhappy_parity;
}

FrustrationPattern plaquette_frustration(const Lattice& lattice, const CouplingConfig& J) {
  check_sizes(lattice, J);
  if (lattice.kind() == LatticeKind::General && lattice.plaquettes().empty()) {
    throw InputError("general lattice has no plaquettes to evaluate");
  }
  FrustrationPattern out;
  out.reserve(lattice.plaquettes().size());
  for (const Plaquette& p : lattice.plaquettes()) {
    bool odd = false;
    for (BondId b : p.bonds) odd ^= J.negative(b);
    out.push_back(odd ? Frustration::Frustrated : Frustration::Unfrustrated);
  }
  return out;
}

SpinState flip(const SpinState& sigma, std::span<const SiteId> subset) {
  SpinState out = sigma;
  std::vector<bool> seen(sigma.size(), false);
  for (SiteId s : subset) {
    if (s >= sigma.size()) throw InputError("flip: site out of range");
    if (seen[s]) continue;
    seen[s] = true;
    out.flip(s);
  }
  return out;
}

bool is_entropic(const Lattice& lattice, const CouplingConfig& J,
                 const SpinState& sigma, std::span<const SiteId> subset) {
  check_sizes(lattice, J);
  check_sizes(lattice, sigma);
  long balance = 0;  // |B_S ∩ U| - |B_S \ U|
  for (BondId b : boundary_bonds(lattice, subset)) {
    balance += is_unhappy(lattice, J, sigma, b) ? 1 : -1;
  }
  return balance == 0;
}

CouplingConfig gauge_flip(const Lattice& lattice, const CouplingConfig& J, SiteId site) {
  check_sizes(lattice, J);
  CouplingConfig out = J;
  for (BondId b : lattice.incident(site)) out.flip(b);
  return out;
}

nlohmann::ordered_json to_json(const Lattice& lattice, const CouplingConfig& J) {
  check_sizes(lattice, J);
  auto bonds = nlohmann::ordered_json::array();
  for (BondId b = 0; b < lattice.num_bonds(); ++b) {
    bonds.push_back({lattice.bond(b).a, lattice.bond(b).b, J[b]});
  }
  nlohmann::ordered_json doc;
  doc["bonds"] = bonds;
  return doc;
}

CouplingConfig couplings_from_json(const Lattice& lattice, const nlohmann::json& doc) {
  CouplingConfig J(lattice.num_bonds());
  std::vector<bool> seen(lattice.num_bonds(), false);
  try {
    for (const auto& e : doc.at("bonds")) {
      const auto a = e.at(0).get<SiteId>();
      const auto b = e.at(1).get<SiteId>();
      const int v = e.at(2).get<int>();
      const auto id = lattice.find_bond(a, b);
      if (!id) {
        throw InputError("coupling given for non-bond " + std::to_string(a) + "-" +
                         std::to_string(b));
      }
      if (v != 1 && v != -1) throw InputError("coupling values must be +1 or -1");
      if (seen[*id]) throw InputError("bond listed twice in coupling file");
      seen[*id] = true;
      J.set(*id, v);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed coupling document: ") + e.what());
  }
  for (bool s : seen) {
    if (!s) throw InputError("coupling file does not cover every bond");
  }
  return J;
}

nlohmann::ordered_json to_json(const Lattice& lattice, const SpinState& sigma) {
  check_sizes(lattice, sigma);
  std::vector<int> spins;
  spins.reserve(lattice.num_sites());
  for (SiteId s : lattice.sites()) spins.push_back(sigma[s]);
  nlohmann::ordered_json doc;
  doc["spins"] = spins;
  return doc;
}

SpinState spins_from_json(const Lattice& lattice, const nlohmann::json& doc) {
  SpinState sigma(lattice.site_capacity());
  try {
    const auto spins = doc.at("spins").get<std::vector<int>>();
    if (spins.size() != lattice.num_sites()) {
      throw InputError("spin file must list one spin per present site");
    }
    for (std::size_t i = 0; i < spins.size(); ++i) {
      if (spins[i] != 1 && spins[i] != -1) throw InputError("spins must be +1 or -1");
      sigma.set(lattice.sites()[i], spins[i]);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed spin document: ") + e.what());
  }
  return sigma;
}

}  // namespace flab

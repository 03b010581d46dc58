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

#include "flab/bounds.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>

#include "flab/errors.hpp"
#include "flab/rng.hpp"

namespace flab {
namespace {

Count binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Count c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// One constrained plaquette of one orientation, over block bond bits.
struct ParityCheck {
  std::array<std::uint64_t, 2> mask{};
  bool odd = false;
};

struct Orientation {
  std::vector<ParityCheck> checks;
};

std::vector<Orientation> compile(const ModuleSpec& spec, const Lattice& block) {
  if (block.num_bonds() > 128) {
    throw CapacityError("module blocks above 128 bonds are not supported by the sampler");
  }
  std::vector<Orientation> out;
  for (std::size_t o = 0; o < spec.orientations.size(); ++o) {
    const auto placed = place(spec, block, 0, o);
    if (!placed) {
      throw InputError("orientation '" + spec.orientations[o] +
                       "' does not map the block onto itself");
    }
    Orientation orient;
    for (const auto& [label, value] : spec.constraints) {
      const auto cell = std::find_if(spec.plaquettes.begin(), spec.plaquettes.end(),
                                     [&](const auto& c) { return c.label == label; });
      ParityCheck check;
      check.odd = value == Frustration::Frustrated;
      const std::size_t len = cell->sites.size();
      for (std::size_t i = 0; i < len; ++i) {
        const auto bond = block.find_bond(placed->sites[spec.index_of(cell->sites[i])],
                                          placed->sites[spec.index_of(cell->sites[(i + 1) % len])]);
        if (!bond) {
          throw InputError("orientation '" + spec.orientations[o] +
                           "' moves a plaquette outside the block");
        }
        check.mask[*bond >> 6] ^= std::uint64_t{1} << (*bond & 63);
      }
      orient.checks.push_back(check);
    }
    out.push_back(std::move(orient));
  }
  return out;
}

bool any_match(const std::vector<Orientation>& orientations,
               const std::array<std::uint64_t, 2>& J) {
  for (const auto& o : orientations) {
    bool ok = true;
    for (const auto& c : o.checks) {
      const int n = std::popcount(J[0] & c.mask[0]) + std::popcount(J[1] & c.mask[1]);
      if (((n & 1) != 0) != c.odd) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

// Shortest text that reads back to the same double.
std::string format_double(double x) {
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, x).ptr;
  return std::string(buf, end);
}

}  // namespace

LemmaCounts lemma_counts(int n, int q, int specified_negatives) {
  if (q < 0 || n < 1 || q >= n) {
    throw InputError("lemma needs 0 <= q < n (at least one free bond)");
  }
  if (specified_negatives < 0 || specified_negatives > q) {
    throw InputError("specified negatives must lie in [0, q]");
  }
  LemmaCounts out{0, 0};
  const int free = n - q;
  for (int j = 0; j <= free; ++j) {
    if ((j + specified_negatives) % 2 == 1) {
      out.odd += binomial(free, j);
    } else {
      out.even += binomial(free, j);
    }
  }
  return out;
}

int orientation_factor(const ModuleSpec& spec) {
  const Lattice block = block_lattice(spec);
  const auto compiled = compile(spec, block);
  for (std::size_t a = 0; a < compiled.size(); ++a) {
    for (std::size_t b = a + 1; b < compiled.size(); ++b) {
      bool exclusive = false;
      for (const auto& x : compiled[a].checks) {
        for (const auto& y : compiled[b].checks) {
          if (x.mask == y.mask && x.odd != y.odd) exclusive = true;
        }
      }
      if (!exclusive) {
        throw SelfCheckError("orientations '" + spec.orientations[a] + "' and '" +
                             spec.orientations[b] + "' of module '" + spec.name +
                             "' are not mutually exclusive; their probabilities do not add");
      }
    }
  }
  return static_cast<int>(compiled.size());
}

Rational f_of_half(const ModuleSpec& spec) {
  if (!degree_of_freedom_order(spec)) {
    throw InputError("module '" + spec.name +
                     "' fails the degree-of-freedom check; f(1/2) = 2^-m does not apply");
  }
  return Rational(Count(1), Count(1) << spec.num_specified());
}

DensityEstimate empirical_module_density(const ModuleSpec& spec, double p,
                                         std::uint64_t samples, std::uint64_t seed,
                                         unsigned threads) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0, 1]");
  if (samples < 1) throw InputError("need at least one sample");
  const Lattice block = block_lattice(spec);
  const auto compiled = compile(spec, block);
  const std::size_t nb = block.num_bonds();
  const std::array<std::uint64_t, 2> used{
      nb >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nb) - 1,
      nb <= 64 ? 0 : (nb >= 128 ? ~std::uint64_t{0} : (std::uint64_t{1} << (nb - 64)) - 1)};

  // A fixed number of streams keeps the result independent of the thread count.
  constexpr std::size_t kStreams = 64;
  std::array<std::uint64_t, kStreams> hits{};
  auto run = [&](std::size_t stream) {
    const std::uint64_t n = samples / kStreams + (stream < samples % kStreams ? 1 : 0);
    Engine rng = make_engine(seed, stream);
    std::uint64_t h = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      std::array<std::uint64_t, 2> J{};
      if (p == 0.5) {
        J[0] = rng() & used[0];
        if (used[1] != 0) J[1] = rng() & used[1];
      } else {
        for (std::size_t b = 0; b < nb; ++b) {
          if (bernoulli(rng, p)) J[b >> 6] |= std::uint64_t{1} << (b & 63);
        }
      }
      h += any_match(compiled, J) ? 1 : 0;
    }
    hits[stream] = h;
  };
  const std::size_t workers = std::min<std::size_t>(std::max(1U, threads), kStreams);
  if (workers <= 1) {
    for (std::size_t s = 0; s < kStreams; ++s) run(s);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < kStreams; s += workers) run(s);
      });
    }
    for (auto& t : pool) t.join();
  }

  DensityEstimate out;
  out.p = p;
  out.samples = samples;
  for (auto h : hits) out.hits += h;
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
  return out;
}

std::vector<SiteId> LowerBoundCertificate::anchors() const {
  std::vector<SiteId> out;
  for (const auto& t : tiles) {
    if (t.orientation) out.push_back(t.anchor);
  }
  return out;
}

std::pair<int, int> tile_strides(const ModuleSpec& spec) {
  int rows = spec.box_rows();
  int cols = spec.box_cols();
  if (spec.kind == LatticeKind::Hexagonal) {
    rows += rows % 2;
    cols += cols % 2;
  }
  return {rows, cols};
}

LowerBoundCertificate degeneracy_lower_bound(const ModuleSpec& spec, const Lattice& lattice,
                                             const CouplingConfig& J) {
  check_sizes(lattice, J);
  const auto [sr, sc] = tile_strides(spec);
  if (lattice.rows() % sr != 0 || lattice.cols() % sc != 0) {
    throw InputError("a " + std::to_string(lattice.rows()) + "x" +
                     std::to_string(lattice.cols()) + " lattice cannot be tiled by " +
                     std::to_string(sr) + "x" + std::to_string(sc) + " blocks");
  }
  LowerBoundCertificate cert;
  for (int r = 0; r < lattice.rows(); r += sr) {
    for (int c = 0; c < lattice.cols(); c += sc) {
      Tile tile;
      tile.anchor = lattice.site_at(r, c);
      tile.orientation = matching_orientation(spec, lattice, J, tile.anchor);
      if (tile.orientation) ++cert.n_found;
      cert.tiles.push_back(tile);
    }
  }
  return cert;
}

BoundReport theorem4_report(const ModuleSpec& spec, std::size_t lattice_size,
                            const BoundParams& params) {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!(params.epsilon > 0.0 && params.epsilon < 1.0)) {
    throw InputError("epsilon must lie in (0, 1)");
  }
  if (!(params.delta > 0.0 && params.delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (!unit(params.p) || !unit(params.p_site) || !unit(params.p_bond)) {
    throw InputError("probabilities must lie in [0, 1]");
  }
  if (lattice_size < 1) throw InputError("lattice size must be positive");

  const Lattice block = block_lattice(spec);
  BoundReport r;
  r.spec = spec.name;
  r.lattice_size = lattice_size;
  r.block_sites = spec.sites.size();
  r.block_bonds = block.num_bonds();
  r.k = lattice_size / r.block_sites;
  r.orientations = orientation_factor(spec);
  r.params = params;

  double per_block = 0.0;  // probability a block is a module, before dilution
  if (params.p == 0.5) {
    r.method = "closed_form";
    r.f_exact = f_of_half(spec);
    r.f = r.f_exact->convert_to<double>();
    per_block = r.orientations * r.f;
  } else {
    r.method = "monte_carlo";
    const auto est = empirical_module_density(spec, params.p, params.samples, params.seed,
                                              params.threads);
    r.samples = est.samples;
    r.stderr_ = est.stderr_;
    per_block = est.estimate;
    r.f = est.estimate / r.orientations;
  }
  const double dilution = std::pow(params.p_site, static_cast<double>(r.block_sites)) *
                          std::pow(params.p_bond, static_cast<double>(r.block_bonds));
  r.q = per_block * dilution;
  r.exponent = static_cast<double>(r.k) * r.q * (1.0 - params.epsilon);
  r.density = r.exponent / static_cast<double>(lattice_size);
  r.density_limit = r.q / static_cast<double>(r.block_sites);
  if (r.f_exact && params.p_site == 1.0 && params.p_bond == 1.0) {
    r.density_constant = *r.f_exact * r.orientations / static_cast<long>(r.block_sites);
  }
  if (r.q > 0.0) {
    const double qe = r.q * params.epsilon;
    r.k0 = std::ceil(std::log(1.0 / params.delta) / (2.0 * qe * qe));
  }
  return r;
}

double log2(const Count& n) {
  if (n <= 0) throw InputError("log2 of a non-positive count");
  const auto top = static_cast<long>(boost::multiprecision::msb(n));
  if (top < 53) return std::log2(n.convert_to<double>());
  const Count head = n >> static_cast<unsigned>(top - 52);
  return std::log2(head.convert_to<double>()) + static_cast<double>(top - 52);
}

double entropy_density(const Lattice& lattice, const CouplingConfig& J,
                       const Count& degeneracy) {
  check_sizes(lattice, J);
  if (degeneracy < 1) throw InputError("degeneracy must be at least 1");
  return log2(degeneracy) / static_cast<double>(lattice.num_sites());
}

nlohmann::ordered_json to_json(const BoundReport& r) {
  nlohmann::ordered_json doc;
  doc["spec"] = r.spec;
  doc["lattice_size"] = r.lattice_size;
  doc["block_sites"] = r.block_sites;
  doc["block_bonds"] = r.block_bonds;
  doc["k"] = r.k;
  doc["orientations"] = r.orientations;
  doc["p"] = r.params.p;
  doc["p_s"] = r.params.p_site;
  doc["p_b"] = r.params.p_bond;
  doc["epsilon"] = r.params.epsilon;
  doc["delta"] = r.params.delta;
  doc["method"] = r.method;
  doc["f"] = r.f;
  doc["f_exact"] = r.f_exact ? nlohmann::ordered_json(r.f_exact->str()) : nullptr;
  doc["q"] = r.q;
  doc["exponent"] = r.exponent;
  doc["density"] = r.density;
  doc["density_limit"] = r.density_limit;
  doc["density_constant"] =
      r.density_constant ? nlohmann::ordered_json(r.density_constant->str()) : nullptr;
  doc["samples"] = r.samples;
  doc["stderr"] = r.stderr_;
  doc["k0"] = r.k0 ? nlohmann::ordered_json(*r.k0) : nullptr;
  doc["seed"] = r.params.seed;
  return doc;
}

std::string csv_header() {
  return "spec,p,p_s,p_b,k,q,epsilon,delta,exponent,density,method,samples,stderr";
}

std::string to_csv_row(const BoundReport& r) {
  std::ostringstream os;
  os << r.spec << ',' << format_double(r.params.p) << ',' << format_double(r.params.p_site)
     << ',' << format_double(r.params.p_bond) << ',' << r.k << ',' << format_double(r.q)
     << ',' << format_double(r.params.epsilon) << ',' << format_double(r.params.delta) << ','
     << format_double(r.exponent) << ',' << format_double(r.density) << ',' << r.method
     << ',' << r.samples << ',' << format_double(r.stderr_);
  return os.str();
}

}  // namespace flab

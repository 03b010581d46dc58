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

#include "flab/ground_state.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <climits>
#include <cmath>
#include <map>
#include <string>
#include <thread>

#include "flab/errors.hpp"

namespace flab {
namespace {

constexpr int kInfinity = INT_MAX / 4;

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

std::uint64_t low_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : bit(n) - 1; }

// Spins and couplings re-indexed by a site order, as 64-bit neighbour masks.
struct LocalGraph {
  std::size_t n = 0;
  std::size_t num_bonds = 0;
  std::vector<SiteId> site;
  std::vector<std::uint64_t> nbr;
  std::vector<std::uint64_t> neg;
  std::vector<int> degree;
};

LocalGraph make_local(const Lattice& lattice, const CouplingConfig& J,
                      std::span<const SiteId> order) {
  LocalGraph g;
  g.n = order.size();
  g.num_bonds = lattice.num_bonds();
  g.site.assign(order.begin(), order.end());
  g.nbr.assign(g.n, 0);
  g.neg.assign(g.n, 0);
  g.degree.assign(g.n, 0);
  std::vector<int> pos(lattice.site_capacity(), -1);
  for (std::size_t i = 0; i < g.n; ++i) pos[order[i]] = static_cast<int>(i);
  for (BondId b = 0; b < lattice.num_bonds(); ++b) {
    const auto pa = static_cast<std::size_t>(pos[lattice.bond(b).a]);
    const auto pb = static_cast<std::size_t>(pos[lattice.bond(b).b]);
    g.nbr[pa] |= bit(pb);
    g.nbr[pb] |= bit(pa);
    if (J.negative(b)) {
      g.neg[pa] |= bit(pb);
      g.neg[pb] |= bit(pa);
    }
    ++g.degree[pa];
    ++g.degree[pb];
  }
  return g;
}

// Unhappy bonds at position v in the packed state.
inline int unhappy_at(const LocalGraph& g, std::uint64_t state, std::size_t v) {
  const std::uint64_t self = ((state >> v) & 1U) ? ~std::uint64_t{0} : 0;
  return std::popcount((state ^ self ^ g.neg[v]) & g.nbr[v]);
}

int total_unhappy(const LocalGraph& g, std::uint64_t state) {
  int twice = 0;
  for (std::size_t v = 0; v < g.n; ++v) twice += unhappy_at(g, state, v);
  return twice / 2;
}

// Running (minimum, count, optional witnesses) for one slice of a search.
struct Tally {
  int best = kInfinity;
  std::uint64_t count = 0;
  std::vector<std::uint64_t> states;
  bool overflow = false;

  void offer(int u, std::uint64_t state, bool collect, std::size_t cap) {
    if (u < best) {
      best = u;
      count = 0;
      states.clear();
      overflow = false;
    }
    if (u != best) return;
    ++count;
    if (!collect) return;
    if (states.size() < cap) {
      states.push_back(state);
    } else {
      overflow = true;
    }
  }
};

template <class Fn>
void run_tasks(std::size_t tasks, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1U, threads), tasks);
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < tasks; t = next++) fn(t);
    });
  }
  for (auto& th : pool) th.join();
}

std::size_t prefix_bits(std::size_t free_bits, unsigned threads) {
  if (threads <= 1) return 0;
  const auto want = static_cast<std::size_t>(std::bit_width(4U * threads - 1U));
  return std::min(free_bits, want);
}

// Merges slices, doubles for the pinned gauge spin and expands witnesses.
GroundStateResult finish(const Lattice& lattice, const LocalGraph& g,
                         std::span<const Tally> parts, const SearchOptions& options,
                         Backend backend) {
  int best = kInfinity;
  for (const Tally& t : parts) best = std::min(best, t.best);
  std::uint64_t count = 0;
  std::vector<std::uint64_t> found;
  for (const Tally& t : parts) {
    if (t.best != best) continue;
    count += t.count;
    if (t.overflow) {
      throw CapacityError("more than " + std::to_string(options.max_states) +
                          " ground states; raise the state cap or disable collection");
    }
    found.insert(found.end(), t.states.begin(), t.states.end());
  }
  GroundStateResult result;
  result.backend = backend;
  result.energy = 2L * best - static_cast<long>(g.num_bonds);
  result.degeneracy = Count(count) * 2;
  if (options.collect_states) {
    const std::uint64_t full = low_mask(g.n);
    std::vector<SpinState> states;
    states.reserve(found.size() * 2);
    for (std::uint64_t s : found) {
      for (std::uint64_t bits : {s, ~s & full}) {
        SpinState sigma(lattice.site_capacity());
        for (std::size_t v = 0; v < g.n; ++v) {
          if ((bits >> v) & 1U) sigma.set(g.site[v], -1);
        }
        states.push_back(std::move(sigma));
      }
    }
    std::sort(states.begin(), states.end());
    result.states = std::move(states);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Branch and bound.

struct Later {
  std::uint32_t pos;
  std::uint32_t neg;
};

class BranchSearch {
 public:
  BranchSearch(const LocalGraph& g, const std::vector<std::vector<Later>>& later,
               const std::vector<int>& suffix_bound, std::size_t start)
      : g_(g),
        later_(later),
        suffix_bound_(suffix_bound),
        start_(start),
        a_(g.n, 0),
        dd_(g.n, 0) {}

  /// Exact minimum of the sub-problem on positions >= start.
  int minimise(int upper, int target) {
    counting_ = false;
    target_ = target;
    tally_.best = upper;
    descend(start_);
    return tally_.best;
  }

  /// Every optimum at or below `upper`; positions start+1..start+k are forced
  /// to the bits of `prefix`.
  Tally enumerate(int upper, std::uint64_t prefix, std::size_t k, bool collect,
                  std::size_t cap) {
    counting_ = true;
    collect_ = collect;
    cap_ = cap;
    prefix_ = prefix;
    forced_ = k;
    tally_.best = upper;
    descend(start_);
    return std::move(tally_);
  }

 private:
  static int cheaper(int a, int d) { return std::min(a, d - a); }

  void descend(std::size_t d) {
    if (d == g_.n) {
      if (counting_) {
        tally_.offer(decided_, state_, collect_, cap_);
      } else if (decided_ < tally_.best) {
        tally_.best = decided_;
        if (tally_.best <= target_) stop_ = true;
      }
      return;
    }
    int first = 0;
    int last = 1;
    if (d == start_) {
      last = 0;  // gauge: the first spin of the sub-problem stays +1
    } else if (counting_ && d - start_ <= forced_) {
      first = last = static_cast<int>((prefix_ >> (d - start_ - 1)) & 1U);
    } else if (dd_[d] - a_[d] < a_[d]) {
      // Try the locally cheaper orientation first.
      first = 1;
      last = 0;
    }
    const int step = first <= last ? 1 : -1;
    for (int val = first;; val += step) {
      visit(d, val);
      if (stop_ || val == last) break;
    }
  }

  void visit(std::size_t d, int val) {
    const int cost = val ? dd_[d] - a_[d] : a_[d];
    cross_ -= cheaper(a_[d], dd_[d]);
    decided_ += cost;
    if (val) state_ |= bit(d);
    for (const Later& w : later_[d]) {
      const int before = cheaper(a_[w.pos], dd_[w.pos]);
      ++dd_[w.pos];
      a_[w.pos] += static_cast<int>(static_cast<std::uint32_t>(val) ^ w.neg);
      cross_ += cheaper(a_[w.pos], dd_[w.pos]) - before;
    }
    const int bound = decided_ + cross_ + suffix_bound_[d + 1];
    if (counting_ ? bound <= tally_.best : bound < tally_.best) descend(d + 1);
    for (const Later& w : later_[d]) {
      const int before = cheaper(a_[w.pos], dd_[w.pos]);
      --dd_[w.pos];
      a_[w.pos] -= static_cast<int>(static_cast<std::uint32_t>(val) ^ w.neg);
      cross_ += cheaper(a_[w.pos], dd_[w.pos]) - before;
    }
    if (val) state_ &= ~bit(d);
    decided_ -= cost;
    cross_ += cheaper(a_[d], dd_[d]);
  }

  const LocalGraph& g_;
  const std::vector<std::vector<Later>>& later_;
  const std::vector<int>& suffix_bound_;
  std::size_t start_;
  std::vector<int> a_;   // unhappy bonds to decided neighbours if the spin is +1
  std::vector<int> dd_;  // decided neighbours
  int cross_ = 0;        // sum over undecided sites of min(a, dd - a)
  int decided_ = 0;      // unhappy bonds between decided sites
  std::uint64_t state_ = 0;
  bool counting_ = false;
  bool collect_ = false;
  bool stop_ = false;
  int target_ = 0;
  std::size_t cap_ = 0;
  std::uint64_t prefix_ = 0;
  std::size_t forced_ = 0;
  Tally tally_;
};

std::vector<SiteId> breadth_first_order(const Lattice& lattice) {
  std::vector<SiteId> order;
  std::vector<bool> seen(lattice.site_capacity(), false);
  const SiteId root = lattice.sites().front();
  order.push_back(root);
  seen[root] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    std::vector<SiteId> next;
    for (BondId b : lattice.incident(order[head])) {
      const SiteId t = lattice.bond(b).other(order[head]);
      if (!seen[t]) next.push_back(t);
    }
    std::sort(next.begin(), next.end());
    for (SiteId t : next) {
      if (!seen[t]) {
        seen[t] = true;
        order.push_back(t);
      }
    }
  }
  return order;
}

// Greedy bond-disjoint frustrated plaquettes lying entirely in each suffix.
std::vector<int> plaquette_suffix_bound(const Lattice& lattice, const CouplingConfig& J,
                                        const LocalGraph& g) {
  std::vector<int> bound(g.n + 1, 0);
  if (lattice.plaquettes().empty()) return bound;
  std::vector<int> pos(lattice.site_capacity(), 0);
  for (std::size_t i = 0; i < g.n; ++i) pos[g.site[i]] = static_cast<int>(i);
  const auto pattern = plaquette_frustration(lattice, J);
  for (std::size_t d = 0; d < g.n; ++d) {
    std::vector<bool> used(lattice.num_bonds(), false);
    int n = 0;
    for (const Plaquette& p : lattice.plaquettes()) {
      if (pattern[static_cast<std::size_t>(p.id)] != Frustration::Frustrated) continue;
      const bool inside = std::all_of(p.sites.begin(), p.sites.end(), [&](SiteId s) {
        return pos[s] >= static_cast<int>(d);
      });
      const bool disjoint = std::none_of(p.bonds.begin(), p.bonds.end(),
                                         [&](BondId b) { return used[b]; });
      if (!inside || !disjoint) continue;
      for (BondId b : p.bonds) used[b] = true;
      ++n;
    }
    bound[d] = n;
  }
  return bound;
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::Exhaustive:
      return "exhaustive";
    case Backend::TransferMatrix:
      return "transfer";
    case Backend::BranchAndBound:
      return "bnb";
  }
  return "exhaustive";
}

GroundStateResult enumerate_exhaustive(const Lattice& lattice, const CouplingConfig& J,
                                       const SearchOptions& options) {
  check_sizes(lattice, J);
  const std::size_t n = lattice.num_sites();
  if (n > options.max_sites || n > 63) {
    throw CapacityError("exhaustive enumeration is capped at " +
                        std::to_string(std::min<std::size_t>(options.max_sites, 63)) +
                        " sites, lattice has " + std::to_string(n));
  }
  const LocalGraph g = make_local(lattice, J, lattice.sites());
  const std::size_t free_bits = n - 1;
  const std::size_t outer = prefix_bits(free_bits, options.threads);
  const std::size_t inner = free_bits - outer;
  const std::size_t cap = options.max_states / 2;

  std::vector<Tally> parts(std::size_t{1} << outer);
  run_tasks(parts.size(), options.threads, [&](std::size_t task) {
    Tally& tally = parts[task];
    std::uint64_t state = static_cast<std::uint64_t>(task) << (inner + 1);
    int u = total_unhappy(g, state);
    tally.offer(u, state, options.collect_states, cap);
    const std::uint64_t steps = std::uint64_t{1} << inner;
    for (std::uint64_t i = 1; i < steps; ++i) {
      const auto v = static_cast<std::size_t>(std::countr_zero(i)) + 1;
      u += g.degree[v] - 2 * unhappy_at(g, state, v);
      state ^= bit(v);
      if (u <= tally.best) tally.offer(u, state, options.collect_states, cap);
    }
  });
  return finish(lattice, g, parts, options, Backend::Exhaustive);
}

bool supports_transfer(const Lattice& lattice) {
  return (lattice.kind() == LatticeKind::Square ||
          lattice.kind() == LatticeKind::Triangular) &&
         !lattice.diluted() && lattice.rows() <= kMaxTransferWidth;
}

GroundStateResult transfer_matrix_count(const Lattice& lattice, const CouplingConfig& J) {
  check_sizes(lattice, J);
  if (lattice.kind() != LatticeKind::Square && lattice.kind() != LatticeKind::Triangular) {
    throw InputError("transfer matrix supports square and triangular lattices only");
  }
  if (lattice.diluted()) throw InputError("transfer matrix needs an undiluted lattice");
  const int rows = lattice.rows();
  const int cols = lattice.cols();
  if (rows > kMaxTransferWidth) {
    throw CapacityError("transfer matrix width is capped at " +
                        std::to_string(kMaxTransferWidth) + " rows, lattice has " +
                        std::to_string(rows));
  }
  const std::size_t states = std::size_t{1} << rows;
  const std::uint32_t full = static_cast<std::uint32_t>(states - 1);

  // Per-column bond masks: bit r refers to the bond leaving row r.
  std::uint32_t vmask = 0;
  std::vector<std::uint32_t> vneg(cols, 0), hmask(cols, 0), hneg(cols, 0),
      dmask(cols, 0), dneg(cols, 0);
  auto next_row = [&](int r) { return lattice.rows_wrap() ? (r + 1) % rows : r + 1; };
  auto next_col = [&](int c) { return lattice.cols_wrap() ? (c + 1) % cols : c + 1; };
  for (BondId b = 0; b < lattice.num_bonds(); ++b) {
    SiteId x = lattice.bond(b).a;
    SiteId y = lattice.bond(b).b;
    const bool negative = J.negative(b);
    if (lattice.col_of(x) == lattice.col_of(y)) {
      if (next_row(lattice.row_of(x)) != lattice.row_of(y)) std::swap(x, y);
      const auto r = static_cast<std::uint32_t>(lattice.row_of(x));
      vmask |= 1U << r;
      if (negative) vneg[lattice.col_of(x)] |= 1U << r;
      continue;
    }
    if (next_col(lattice.col_of(x)) != lattice.col_of(y)) std::swap(x, y);
    const int c = lattice.col_of(x);
    const auto r = static_cast<std::uint32_t>(lattice.row_of(x));
    if (lattice.row_of(x) == lattice.row_of(y)) {
      hmask[c] |= 1U << r;
      if (negative) hneg[c] |= 1U << r;
    } else if (next_row(lattice.row_of(x)) == lattice.row_of(y)) {
      dmask[c] |= 1U << r;
      if (negative) dneg[c] |= 1U << r;
    } else {
      throw SelfCheckError("unexpected bond geometry in transfer matrix " + std::to_string(x) + "-" + std::to_string(y) + " " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }

  // rot[t] bit r = bit (r + 1) mod rows of t.
  std::vector<std::uint32_t> rot(states);
  for (std::uint32_t t = 0; t < states; ++t) {
    rot[t] = ((t >> 1) | ((t & 1U) << (rows - 1))) & full;
  }
  auto intra = [&](int c, std::uint32_t t) {
    return std::popcount((t ^ rot[t] ^ vneg[c]) & vmask);
  };
  auto inter = [&](int c, std::uint32_t s, std::uint32_t t) {
    return std::popcount((s ^ t ^ hneg[c]) & hmask[c]) +
           std::popcount((s ^ rot[t] ^ dneg[c]) & dmask[c]);
  };

  std::vector<int> energy(states), next_energy(states);
  std::vector<Count> count(states), next_count(states);
  auto advance = [&](int c) {  // column c-1 -> column c
    for (std::uint32_t t = 0; t < states; ++t) {
      int best = kInfinity;
      for (std::uint32_t s = 0; s < states; ++s) {
        if (energy[s] >= kInfinity) continue;
        best = std::min(best, energy[s] + inter(c - 1, s, t));
      }
      Count total = 0;
      if (best < kInfinity) {
        for (std::uint32_t s = 0; s < states; ++s) {
          if (energy[s] < kInfinity && energy[s] + inter(c - 1, s, t) == best) {
            total += count[s];
          }
        }
        best += intra(c, t);
      }
      next_energy[t] = best;
      next_count[t] = std::move(total);
    }
    energy.swap(next_energy);
    count.swap(next_count);
  };

  int best = kInfinity;
  Count degeneracy = 0;
  auto accept = [&](int e, const Count& n) {
    if (e < best) {
      best = e;
      degeneracy = n;
    } else if (e == best) {
      degeneracy += n;
    }
  };

  if (!lattice.cols_wrap()) {
    for (std::uint32_t t = 0; t < states; ++t) {
      energy[t] = intra(0, t);
      count[t] = 1;
    }
    for (int c = 1; c < cols; ++c) advance(c);
    for (std::uint32_t t = 0; t < states; ++t) accept(energy[t], count[t]);
  } else {
    for (std::uint32_t seam = 0; seam < states; ++seam) {
      std::fill(energy.begin(), energy.end(), kInfinity);
      std::fill(count.begin(), count.end(), Count(0));
      energy[seam] = intra(0, seam);
      count[seam] = 1;
      for (int c = 1; c < cols; ++c) advance(c);
      for (std::uint32_t t = 0; t < states; ++t) {
        if (energy[t] < kInfinity) accept(energy[t] + inter(cols - 1, t, seam), count[t]);
      }
    }
  }

  GroundStateResult result;
  result.backend = Backend::TransferMatrix;
  result.energy = 2L * best - static_cast<long>(lattice.num_bonds());
  result.degeneracy = std::move(degeneracy);
  return result;
}

GroundStateResult branch_and_bound_enumerate(const Lattice& lattice,
                                             const CouplingConfig& J,
                                             const SearchOptions& options) {
  check_sizes(lattice, J);
  const std::size_t n = lattice.num_sites();
  if (n > kMaxBranchSites) {
    throw CapacityError("branch and bound is capped at " +
                        std::to_string(kMaxBranchSites) + " sites, lattice has " +
                        std::to_string(n));
  }
  const auto order = breadth_first_order(lattice);
  const LocalGraph g = make_local(lattice, J, order);

  std::vector<std::vector<Later>> later(n);
  for (std::size_t d = 0; d < n; ++d) {
    for (std::size_t w = d + 1; w < n; ++w) {
      if ((g.nbr[d] >> w) & 1U) {
        later[d].push_back({static_cast<std::uint32_t>(w),
                            static_cast<std::uint32_t>((g.neg[d] >> w) & 1U)});
      }
    }
  }

  std::vector<int> suffix(n + 1, 0);
  int upper = kInfinity;
  switch (options.bound) {
    case BoundMode::Simple:
      break;
    case BoundMode::Plaquette:
      suffix = plaquette_suffix_bound(lattice, J, g);
      break;
    case BoundMode::RussianDoll:
      // suffix[i] = exact minimum on positions >= i, solved from the back so
      // each sub-problem can use the bounds of the smaller ones.
      for (std::size_t i = n; i-- > 0;) {
        const int edges = std::popcount(g.nbr[i] & ~low_mask(i + 1));
        BranchSearch sub(g, later, suffix, i);
        suffix[i] = sub.minimise(suffix[i + 1] + edges + 1, suffix[i + 1]);
      }
      upper = suffix[0];
      break;
  }

  const std::size_t forced = prefix_bits(n - 1, options.threads);
  std::vector<Tally> parts(std::size_t{1} << forced);
  run_tasks(parts.size(), options.threads, [&](std::size_t task) {
    BranchSearch search(g, later, suffix, 0);
    parts[task] = search.enumerate(upper, task, forced, options.collect_states,
                                   options.max_states / 2);
  });
  return finish(lattice, g, parts, options, Backend::BranchAndBound);
}

GroundStateResult solve_ground_state(const Lattice& lattice, const CouplingConfig& J,
                                     const SearchOptions& options) {
  if (lattice.num_sites() <= 25) {
    SearchOptions capped = options;
    capped.max_sites = std::max<std::size_t>(capped.max_sites, 25);
    return enumerate_exhaustive(lattice, J, capped);
  }
  if (!options.collect_states && supports_transfer(lattice)) {
    const double work = std::ldexp(1.0, 2 * lattice.rows()) * lattice.cols() *
                        (lattice.cols_wrap() ? std::ldexp(1.0, lattice.rows()) : 1.0);
    if (work <= 4e9) return transfer_matrix_count(lattice, J);
  }
  if (lattice.num_sites() <= kMaxBranchSites) {
    return branch_and_bound_enumerate(lattice, J, options);
  }
  throw CapacityError("no exact backend handles " + std::to_string(lattice.num_sites()) +
                      " sites here; use a transfer-matrix strip (square or triangular, "
                      "at most 14 rows) or at most 64 sites");
}

std::vector<std::vector<std::size_t>> group_by_exterior(std::span<const SpinState> states,
                                                        std::span<const SiteId> inside) {
  std::vector<std::vector<std::size_t>> groups;
  if (states.empty()) return groups;
  const std::size_t size = states.front().size();
  std::vector<std::uint64_t> keep((size + 63) / 64, ~std::uint64_t{0});
  for (SiteId s : inside) {
    if (s >= size) throw InputError("group_by_exterior: site out of range");
    keep[s >> 6] &= ~bit(s & 63);
  }
  std::map<std::vector<std::uint64_t>, std::size_t> where;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].size() != size) throw InputError("states differ in size");
    std::vector<std::uint64_t> key(keep.size());
    const auto words = states[i].words();
    for (std::size_t w = 0; w < key.size(); ++w) key[w] = words[w] & keep[w];
    const auto [it, fresh] = where.emplace(std::move(key), groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

nlohmann::ordered_json to_json(const GroundStateResult& result) {
  nlohmann::ordered_json doc;
  doc["energy"] = result.energy;
  doc["degeneracy"] = result.degeneracy.str();
  doc["backend"] = to_string(result.backend);
  return doc;
}

}  // namespace flab

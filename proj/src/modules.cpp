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

#include "flab/modules.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include <boost/dynamic_bitset.hpp>

#include "flab/errors.hpp"
#include "flab/rng.hpp"

namespace flab {
namespace detail {
std::string_view builtin_asset(std::string_view name);
}  // namespace detail

namespace {

// Free rows/columns around the block in verification hosts; even, so that
// hexagonal blocks keep their rung parity.
constexpr int kMargin = 2;

// (row, col) of site i after applying an orientation to a rows x cols box.
std::pair<int, int> orient(std::string_view how, int rows, int cols, int r, int c) {
  if (how == "identity") return {r, c};
  if (how == "rot90") return {c, rows - 1 - r};
  if (how == "rot180") return {rows - 1 - r, cols - 1 - c};
  if (how == "rot270") return {cols - 1 - c, r};
  throw InputError("unknown orientation '" + std::string(how) + "'");
}

Frustration parse_constraint(const std::string& text) {
  if (text == "F") return Frustration::Frustrated;
  if (text == "U") return Frustration::Unfrustrated;
  throw InputError("constraint must be \"F\" or \"U\", got \"" + text + "\"");
}

// Bond ids of block_lattice(spec) around one plaquette.
std::vector<BondId> cell_bonds(const ModuleSpec& spec, const Lattice& block,
                               const ModuleSpec::Cell& cell) {
  std::vector<BondId> out;
  for (std::size_t i = 0; i < cell.sites.size(); ++i) {
    const SiteId a = block_site(spec, spec.index_of(cell.sites[i]));
    const SiteId b =
        block_site(spec, spec.index_of(cell.sites[(i + 1) % cell.sites.size()]));
    const auto bond = block.find_bond(a, b);
    if (!bond) {
      throw InputError("plaquette " + std::to_string(cell.label) +
                       " of module '" + spec.name + "' is not a closed curve of bonds");
    }
    out.push_back(*bond);
  }
  return out;
}

const ModuleSpec::Cell& cell_of(const ModuleSpec& spec, int label) {
  for (const auto& cell : spec.plaquettes) {
    if (cell.label == label) return cell;
  }
  throw InputError("constraint names unknown plaquette " + std::to_string(label));
}

bool odd_negatives(const CouplingConfig& J, std::span<const BondId> bonds) {
  bool odd = false;
  for (BondId b : bonds) odd ^= J.negative(b);
  return odd;
}

// Peels specified plaquettes that own a bond no other remaining one uses.
// Returns (order, private bond per entry) or nothing.
std::optional<std::pair<std::vector<int>, std::vector<BondId>>> peel(
    const ModuleSpec& spec, const Lattice& block) {
  std::vector<int> remaining;
  std::map<int, std::vector<BondId>> bonds;
  for (const auto& [label, value] : spec.constraints) {
    remaining.push_back(label);
    bonds[label] = cell_bonds(spec, block, cell_of(spec, label));
  }
  std::vector<int> order;
  std::vector<BondId> own;
  while (!remaining.empty()) {
    std::vector<int> uses(block.num_bonds(), 0);
    for (int label : remaining) {
      for (BondId b : bonds[label]) ++uses[b];
    }
    bool peeled = false;
    for (auto it = remaining.begin(); it != remaining.end(); ++it) {
      const auto& mine = bonds[*it];
      const auto spare =
          std::find_if(mine.begin(), mine.end(), [&](BondId b) { return uses[b] == 1; });
      if (spare == mine.end()) continue;
      order.push_back(*it);
      own.push_back(*spare);
      remaining.erase(it);
      peeled = true;
      break;
    }
    if (!peeled) return std::nullopt;
  }
  std::reverse(order.begin(), order.end());
  std::reverse(own.begin(), own.end());
  return std::make_pair(order, own);
}

// Solves the plaquette parity system over GF(2), starting from J. Throws with
// a contradictory combination of plaquettes if there is no solution.
void solve_parities(const ModuleSpec& spec, const Lattice& block, CouplingConfig& J) {
  const std::size_t nb = block.num_bonds();
  const std::size_t m = spec.constraints.size();
  struct Row {
    boost::dynamic_bitset<> bonds;
    boost::dynamic_bitset<> mix;
    bool rhs = false;
  };
  std::vector<Row> rows;
  std::vector<int> labels;
  for (const auto& [label, value] : spec.constraints) {
    Row row{boost::dynamic_bitset<>(nb), boost::dynamic_bitset<>(m), false};
    const auto bonds = cell_bonds(spec, block, cell_of(spec, label));
    for (BondId b : bonds) row.bonds.flip(b);
    row.mix.set(labels.size());
    row.rhs = (value == Frustration::Frustrated) != odd_negatives(J, bonds);
    labels.push_back(label);
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> pivot_col;
  std::vector<Row> basis;
  for (Row& row : rows) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (row.bonds.test(pivot_col[k])) {
        row.bonds ^= basis[k].bonds;
        row.mix ^= basis[k].mix;
        row.rhs ^= basis[k].rhs;
      }
    }
    if (row.bonds.none()) {
      if (!row.rhs) continue;
      std::string which;
      for (std::size_t i = 0; i < m; ++i) {
        if (row.mix.test(i)) which += (which.empty() ? "" : ", ") + std::to_string(labels[i]);
      }
      throw InputError("module '" + spec.name + "' is infeasible: plaquettes {" + which +
                       "} cover every bond an even number of times but their "
                       "constraints demand an odd number of frustrated ones");
    }
    const std::size_t col = row.bonds.find_first();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (basis[k].bonds.test(col)) {
        basis[k].bonds ^= row.bonds;
        basis[k].mix ^= row.mix;
        basis[k].rhs ^= row.rhs;
      }
    }
    pivot_col.push_back(col);
    basis.push_back(std::move(row));
  }
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis[k].rhs) J.flip(pivot_col[k]);
  }
}

std::vector<ModuleSpec> load_builtins() {
  std::vector<ModuleSpec> specs;
  for (const char* name : {"square", "triangular", "hexagonal"}) {
    specs.push_back(module_from_json(nlohmann::json::parse(detail::builtin_asset(name))));
  }
  // Facts the proofs rely on; a failure here means the figures were misread.
  struct Expect {
    std::size_t spec;
    int plaquette;
    Frustration value;
  };
  constexpr auto F = Frustration::Frustrated;
  constexpr auto U = Frustration::Unfrustrated;
  const Expect facts[] = {{0, 5, F},  {1, 11, F}, {1, 5, U},  {1, 4, U},
                          {1, 1, U},  {1, 3, F},  {2, 1, F},  {2, 12, F},
                          {2, 13, F}, {2, 14, F}, {2, 3, U}};
  for (const auto& e : facts) {
    const auto& c = specs[e.spec].constraints;
    const auto it = c.find(e.plaquette);
    if (it == c.end() || it->second != e.value) {
      throw SelfCheckError("built-in module '" + specs[e.spec].name +
                           "' disagrees with its proof at plaquette " +
                           std::to_string(e.plaquette));
    }
  }
  const std::size_t sizes[][2] = {{25, 14}, {21, 19}, {54, 19}};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].sites.size() != sizes[i][0] || specs[i].num_specified() != sizes[i][1]) {
      throw SelfCheckError("built-in module '" + specs[i].name + "' has the wrong size");
    }
    if (!degree_of_freedom_order(specs[i])) {
      throw SelfCheckError("built-in module '" + specs[i].name +
                           "' fails the degree-of-freedom check");
    }
  }
  return specs;
}

template <class Fn>
void run_samples(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1U, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

int ModuleSpec::box_rows() const {
  int r = 0;
  for (const auto& s : sites) r = std::max(r, s.row + 1);
  return r;
}

int ModuleSpec::box_cols() const {
  int c = 0;
  for (const auto& s : sites) c = std::max(c, s.col + 1);
  return c;
}

std::size_t ModuleSpec::index_of(int site_label) const {
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].label == site_label) return i;
  }
  throw InputError("module '" + name + "' has no site " + std::to_string(site_label));
}

ModuleSpec module_from_json(const nlohmann::json& doc) {
  ModuleSpec spec;
  try {
    spec.name = doc.value("name", std::string("custom"));
    spec.kind = parse_kind(doc.at("kind").get<std::string>());
    if (spec.kind == LatticeKind::General) throw InputError("modules need a regular lattice kind");
    for (const auto& s : doc.at("sites")) {
      const auto pos = s.at("pos");
      spec.sites.push_back({s.at("id").get<int>(), pos.at(0).get<int>(), pos.at(1).get<int>()});
    }
    for (const auto& b : doc.at("bonds")) {
      spec.bonds.emplace_back(b.at(0).get<int>(), b.at(1).get<int>());
    }
    for (const auto& p : doc.at("plaquettes")) {
      spec.plaquettes.push_back({p.at("id").get<int>(), p.at("sites").get<std::vector<int>>()});
    }
    for (const auto& [key, value] : doc.at("constraints").items()) {
      spec.constraints[std::stoi(key)] = parse_constraint(value.get<std::string>());
    }
    if (doc.contains("orientations")) {
      spec.orientations = doc.at("orientations").get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed module document: ") + e.what());
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const InputError*>(&e)) throw;
    throw InputError(std::string("malformed module document: ") + e.what());
  }

  if (spec.sites.empty()) throw InputError("module has no sites");
  std::set<int> labels;
  std::set<std::pair<int, int>> cells;
  for (const auto& s : spec.sites) {
    if (s.row < 0 || s.col < 0) throw InputError("module positions must be nonnegative");
    if (!labels.insert(s.label).second || !cells.insert({s.row, s.col}).second) {
      throw InputError("module sites must have distinct ids and positions");
    }
  }
  if (spec.orientations.empty()) throw InputError("module needs at least one orientation");
  for (const auto& o : spec.orientations) {
    orient(o, 1, 1, 0, 0);  // validates the name
    if (o != "identity" && spec.kind != LatticeKind::Square) {
      throw InputError("only square modules may list rotated orientations");
    }
  }
  // Structure checks: bonds exist in the chart, plaquettes are closed curves.
  const Lattice block = block_lattice(spec);
  for (const auto& cell : spec.plaquettes) cell_bonds(spec, block, cell);
  for (const auto& [label, value] : spec.constraints) cell_of(spec, label);
  return spec;
}

nlohmann::ordered_json to_json(const ModuleSpec& spec) {
  nlohmann::ordered_json doc;
  doc["name"] = spec.name;
  doc["kind"] = to_string(spec.kind);
  doc["sites"] = nlohmann::ordered_json::array();
  for (const auto& s : spec.sites) {
    doc["sites"].push_back({{"id", s.label}, {"pos", {s.row, s.col}}});
  }
  doc["bonds"] = nlohmann::ordered_json::array();
  for (const auto& [a, b] : spec.bonds) doc["bonds"].push_back({a, b});
  doc["plaquettes"] = nlohmann::ordered_json::array();
  for (const auto& p : spec.plaquettes) {
    doc["plaquettes"].push_back({{"id", p.label}, {"sites", p.sites}});
  }
  doc["constraints"] = nlohmann::ordered_json::object();
  for (const auto& [label, value] : spec.constraints) {
    doc["constraints"][std::to_string(label)] = value == Frustration::Frustrated ? "F" : "U";
  }
  doc["orientations"] = spec.orientations;
  return doc;
}

const std::vector<ModuleSpec>& builtin_specs() {
  static const std::vector<ModuleSpec> specs = load_builtins();
  return specs;
}

const ModuleSpec& builtin_spec(std::string_view name) {
  for (const auto& spec : builtin_specs()) {
    if (spec.name == name) return spec;
  }
  throw InputError("unknown module '" + std::string(name) +
                   "' (expected square, triangular or hexagonal)");
}

ModuleSpec corrupt(const ModuleSpec& spec, int plaquette_label) {
  ModuleSpec out = spec;
  const auto it = out.constraints.find(plaquette_label);
  if (it == out.constraints.end()) {
    throw InputError("plaquette " + std::to_string(plaquette_label) + " is not specified");
  }
  it->second = it->second == Frustration::Frustrated ? Frustration::Unfrustrated
                                                     : Frustration::Frustrated;
  out.name = spec.name + "-corrupt-p" + std::to_string(plaquette_label);
  return out;
}

SiteId block_site(const ModuleSpec& spec, std::size_t index) {
  const auto& s = spec.sites.at(index);
  return static_cast<SiteId>(s.row * spec.box_cols() + s.col);
}

Lattice block_lattice(const ModuleSpec& spec) {
  const int rows = std::max(2, spec.box_rows());
  const int cols = std::max(2, spec.box_cols());
  const Lattice box = Lattice::build(spec.kind, rows, cols, BoundaryCondition::Free);
  std::vector<bool> keep(box.site_capacity(), false);
  for (std::size_t i = 0; i < spec.sites.size(); ++i) {
    keep[static_cast<std::size_t>(spec.sites[i].row * cols + spec.sites[i].col)] = true;
  }
  std::vector<SiteId> drop;
  for (SiteId s : box.sites()) {
    if (!keep[s]) drop.push_back(s);
  }
  auto chart = [&](int label) {
    const auto& s = spec.sites[spec.index_of(label)];
    return static_cast<SiteId>(s.row * cols + s.col);
  };
  std::set<std::pair<SiteId, SiteId>> wanted;
  for (const auto& [a, b] : spec.bonds) {
    const SiteId x = chart(a);
    const SiteId y = chart(b);
    if (!box.find_bond(x, y)) {
      throw InputError("module bond " + std::to_string(a) + "-" + std::to_string(b) +
                       " is not a bond of the " + std::string(to_string(spec.kind)) +
                       " lattice");
    }
    wanted.insert(std::minmax(x, y));
  }
  std::vector<std::pair<SiteId, SiteId>> extra;
  for (const Bond& b : box.bonds()) {
    if (keep[b.a] && keep[b.b] && !wanted.count({b.a, b.b})) extra.emplace_back(b.a, b.b);
  }
  return box.without(drop, extra);
}

std::optional<std::vector<int>> degree_of_freedom_order(const ModuleSpec& spec) {
  const auto peeled = peel(spec, block_lattice(spec));
  if (!peeled) return std::nullopt;
  return peeled->first;
}

CouplingConfig realize_coupling(const ModuleSpec& spec, std::uint64_t seed) {
  const Lattice block = block_lattice(spec);
  Engine rng = make_engine(seed, 0);
  CouplingConfig J = random_couplings(block, 0.5, rng);
  if (const auto peeled = peel(spec, block)) {
    const auto& [order, own] = *peeled;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto bonds = cell_bonds(spec, block, cell_of(spec, order[i]));
      const bool want = spec.constraints.at(order[i]) == Frustration::Frustrated;
      if (odd_negatives(J, bonds) != want) J.flip(own[i]);
    }
  } else {
    solve_parities(spec, block, J);
  }
  for (const auto& [label, value] : spec.constraints) {
    const auto bonds = cell_bonds(spec, block, cell_of(spec, label));
    if (odd_negatives(J, bonds) != (value == Frustration::Frustrated)) {
      throw SelfCheckError("realized coupling misses plaquette " + std::to_string(label));
    }
  }
  return J;
}

std::optional<Placement> place(const ModuleSpec& spec, const Lattice& lattice,
                               SiteId anchor, std::size_t orientation) {
  if (anchor >= lattice.site_capacity()) {
    throw InputError("anchor " + std::to_string(anchor) + " is outside the lattice");
  }
  if (lattice.kind() != spec.kind) {
    throw InputError("module '" + spec.name + "' is for " +
                     std::string(to_string(spec.kind)) + " lattices");
  }
  const int r0 = lattice.row_of(anchor);
  const int c0 = lattice.col_of(anchor);
  if (spec.kind == LatticeKind::Hexagonal && (r0 + c0) % 2 != 0) return std::nullopt;
  const std::string& how = spec.orientations.at(orientation);
  Placement out;
  out.orientation = orientation;
  for (const auto& s : spec.sites) {
    const auto [dr, dc] = orient(how, spec.box_rows(), spec.box_cols(), s.row, s.col);
    int r = r0 + dr;
    int c = c0 + dc;
    if (lattice.rows_wrap()) r %= lattice.rows();
    if (lattice.cols_wrap()) c %= lattice.cols();
    if (r >= lattice.rows() || c >= lattice.cols()) return std::nullopt;
    out.sites.push_back(lattice.site_at(r, c));
  }
  std::vector<SiteId> sorted = out.sites;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return std::nullopt;  // the block wraps onto itself
  }
  return out;
}

std::optional<std::size_t> matching_orientation(const ModuleSpec& spec,
                                                const Lattice& lattice,
                                                const CouplingConfig& J, SiteId anchor) {
  check_sizes(lattice, J);
  bool fits = false;
  for (std::size_t o = 0; o < spec.orientations.size(); ++o) {
    const auto placed = place(spec, lattice, anchor, o);
    if (!placed) continue;
    fits = true;
    bool ok = true;
    for (const auto& [label, value] : spec.constraints) {
      const auto& cell = cell_of(spec, label);
      bool odd = false;
      for (std::size_t i = 0; ok && i < cell.sites.size(); ++i) {
        const SiteId a = placed->sites[spec.index_of(cell.sites[i])];
        const SiteId b =
            placed->sites[spec.index_of(cell.sites[(i + 1) % cell.sites.size()])];
        const auto bond = lattice.present(a) && lattice.present(b)
                              ? lattice.find_bond(a, b)
                              : std::nullopt;
        if (!bond) ok = false;
        else odd ^= J.negative(*bond);
      }
      if (!ok || odd != (value == Frustration::Frustrated)) {
        ok = false;
        break;
      }
    }
    if (ok) return o;
  }
  if (!fits) {
    throw InputError("module '" + spec.name + "' does not fit at anchor " +
                     std::to_string(anchor));
  }
  return std::nullopt;
}

bool matches(const ModuleSpec& spec, const Lattice& lattice, const CouplingConfig& J,
             SiteId anchor) {
  return matching_orientation(spec, lattice, J, anchor).has_value();
}

void embed(const ModuleSpec& spec, const Lattice& lattice, const Placement& placement,
           const CouplingConfig& block_J, CouplingConfig& J) {
  check_sizes(lattice, J);
  const Lattice block = block_lattice(spec);
  check_sizes(block, block_J);
  for (const auto& [a, b] : spec.bonds) {
    const std::size_t i = spec.index_of(a);
    const std::size_t j = spec.index_of(b);
    const auto host = lattice.find_bond(placement.sites[i], placement.sites[j]);
    if (!host) throw InputError("placed module bond is missing from the lattice");
    J.set(*host, block_J[*block.find_bond(block_site(spec, i), block_site(spec, j))]);
  }
}

std::size_t VerificationReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.pass; }));
}

VerificationReport verify_module(const ModuleSpec& spec, const VerifyOptions& options) {
  if (options.collar < 1) throw InputError("collar must be at least 1");
  if (options.samples < 1) throw InputError("need at least one sample");

  VerificationReport report;
  report.spec = spec.name;
  report.kind = spec.kind;
  report.ambient_rows = spec.box_rows() + 2 * kMargin;
  report.ambient_cols = spec.box_cols() + 2 * kMargin;
  report.collar = options.collar;
  report.seed = options.seed;

  const Lattice ambient = Lattice::build(spec.kind, report.ambient_rows,
                                         report.ambient_cols, BoundaryCondition::Free);
  const auto placed = place(spec, ambient, ambient.site_at(kMargin, kMargin), 0);
  if (!placed) throw SelfCheckError("block does not fit its ambient lattice");
  std::vector<bool> in_block(ambient.site_capacity(), false);
  for (SiteId s : placed->sites) in_block[s] = true;

  // Bonds between block sites that the block itself does not have.
  std::set<std::pair<SiteId, SiteId>> own;
  for (const auto& [a, b] : spec.bonds) {
    own.insert(std::minmax(placed->sites[spec.index_of(a)], placed->sites[spec.index_of(b)]));
  }
  std::vector<std::pair<SiteId, SiteId>> foreign;
  for (const Bond& b : ambient.bonds()) {
    if (in_block[b.a] && in_block[b.b] && !own.count({b.a, b.b})) foreign.emplace_back(b.a, b.b);
  }
  if (static_cast<std::size_t>(options.collar) >
      ambient.num_sites() - spec.sites.size()) {
    throw InputError("collar exceeds the ambient lattice");
  }
  const std::size_t host_size = spec.sites.size() + static_cast<std::size_t>(options.collar);
  if (host_size > kMaxBranchSites) {
    throw CapacityError("host of " + std::to_string(host_size) +
                        " sites exceeds the exact backends");
  }

  report.records.resize(static_cast<std::size_t>(options.samples));
  run_samples(report.records.size(), options.threads, [&](std::size_t i) {
    Engine rng = make_engine(options.seed, i);
    // Grow the host one random frontier site at a time.
    std::vector<bool> keep = in_block;
    std::vector<SiteId> collar;
    for (int k = 0; k < options.collar; ++k) {
      std::vector<SiteId> frontier;
      for (SiteId s : ambient.sites()) {
        if (keep[s]) continue;
        const auto inc = ambient.incident(s);
        if (std::any_of(inc.begin(), inc.end(),
                        [&](BondId b) { return keep[ambient.bond(b).other(s)]; })) {
          frontier.push_back(s);
        }
      }
      if (frontier.empty()) throw InputError("collar exceeds the ambient lattice");
      const SiteId pick = frontier[uniform_below(rng, frontier.size())];
      keep[pick] = true;
      collar.push_back(pick);
    }
    std::sort(collar.begin(), collar.end());
    std::vector<SiteId> drop;
    for (SiteId s : ambient.sites()) {
      if (!keep[s]) drop.push_back(s);
    }
    const Lattice host = ambient.without(drop, foreign);

    const CouplingConfig block_J = realize_coupling(spec, rng());
    CouplingConfig J = random_couplings(host, 0.5, rng);
    embed(spec, host, *placed, block_J, J);

    SearchOptions search;
    search.collect_states = true;
    search.max_sites = options.exhaustive_sites;
    search.max_states = options.max_states;
    const GroundStateResult result = host.num_sites() <= options.exhaustive_sites
                                         ? enumerate_exhaustive(host, J, search)
                                         : branch_and_bound_enumerate(host, J, search);
    const auto groups = group_by_exterior(*result.states, placed->sites);

    SampleRecord& rec = report.records[i];
    rec.sample = static_cast<int>(i);
    rec.collar_sites = collar;
    rec.host_sites = host.num_sites();
    rec.host_bonds = host.num_bonds();
    rec.energy = result.energy;
    rec.degeneracy = result.degeneracy;
    rec.backend = result.backend;
    rec.classes = groups.size();
    rec.smallest_class = groups.empty() ? 0 : groups.front().size();
    for (const auto& g : groups) rec.smallest_class = std::min(rec.smallest_class, g.size());
    rec.pass = rec.smallest_class >= 2;
  });
  report.pass = report.failures() == 0;
  return report;
}

nlohmann::ordered_json to_json(const VerificationReport& report) {
  nlohmann::ordered_json doc;
  doc["spec"] = report.spec;
  doc["host"] = {{"kind", to_string(report.kind)},
                 {"ambient_rows", report.ambient_rows},
                 {"ambient_cols", report.ambient_cols},
                 {"boundary", "free"},
                 {"block_anchor", {kMargin, kMargin}},
                 {"collar", report.collar}};
  doc["seed"] = report.seed;
  doc["samples"] = report.records.size();
  doc["records"] = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    doc["records"].push_back({{"sample", r.sample},
                              {"collar_sites", r.collar_sites},
                              {"host_sites", r.host_sites},
                              {"host_bonds", r.host_bonds},
                              {"energy", r.energy},
                              {"degeneracy", r.degeneracy.str()},
                              {"backend", to_string(r.backend)},
                              {"classes", r.classes},
                              {"smallest_class", r.smallest_class},
                              {"pass", r.pass}});
  }
  doc["failures"] = report.failures();
  doc["verdict"] = report.pass ? "pass" : "fail";
  return doc;
}

}  // namespace flab

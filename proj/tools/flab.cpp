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

// flab: command-line front end.
//
//   flab lattice --kind square --rows 5 --cols 5 --boundary free
//   flab solve --lattice lat.json --p 0.5 --seed 3 --check
//   flab verify-module --spec square --samples 100 --seed 7
//   flab bound --spec square --p 0.5
//
// Exit codes: 0 ok, 2 bad input, 3 resource cap, 4 self-check failure.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flab/bounds.hpp"
#include "flab/errors.hpp"
#include "flab/ground_state.hpp"
#include "flab/ising.hpp"
#include "flab/lattice.hpp"
#include "flab/modules.hpp"
#include "flab/rng.hpp"

namespace {

using flab::InputError;
using json = nlohmann::ordered_json;

struct Common {
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("FRUSTRATION_LAB_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    throw InputError("FRUSTRATION_LAB_THREADS must be a positive integer");
  }
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Whole file or nothing: write beside the target, then rename over it.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const std::string tmp = path + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
    if (!out.flush()) throw InputError("cannot write '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot write '" + path + "'");
  }
}

std::uint64_t count_arg(double value, const char* what) {
  if (!(value >= 1.0) || value > 1e15 || value != std::floor(value)) {
    throw InputError(std::string(what) + " must be a positive integer");
  }
  return static_cast<std::uint64_t>(value);
}

// Lattice from --lattice FILE or from inline --kind/--rows/--cols/--boundary.
struct LatticeArgs {
  std::string file;
  std::string kind = "square";
  int rows = 0;
  int cols = 0;
  std::string boundary = "free";

  void add(CLI::App* app) {
    app->add_option("--lattice", file, "lattice JSON file");
    app->add_option("--kind", kind, "square | triangular | hexagonal");
    app->add_option("--rows", rows);
    app->add_option("--cols", cols);
    app->add_option("--boundary", boundary, "free | cylindrical | toroidal");
  }

  flab::Lattice load() const {
    if (!file.empty()) return flab::lattice_from_json(read_json(file));
    if (rows == 0 || cols == 0) throw InputError("give --lattice FILE or --rows and --cols");
    return flab::build_lattice(flab::parse_kind(kind), rows, cols,
                               flab::parse_boundary(boundary));
  }
};

flab::CouplingConfig load_couplings(const flab::Lattice& lattice, const std::string& file,
                                    std::optional<double> p, std::uint64_t seed) {
  if (!file.empty()) return flab::couplings_from_json(lattice, read_json(file));
  if (!p) throw InputError("give --couplings FILE or --p");
  if (!(*p >= 0.0 && *p <= 1.0)) throw InputError("--p must lie in [0, 1]");
  flab::Engine rng = flab::make_engine(seed, 0);
  return flab::random_couplings(lattice, *p, rng);
}

flab::ModuleSpec load_spec(const std::string& name, const std::string& file, int corrupt) {
  flab::ModuleSpec spec = file.empty() ? flab::builtin_spec(name)
                                       : flab::module_from_json(read_json(file));
  if (corrupt > 0) spec = flab::corrupt(spec, corrupt);
  return spec;
}

int run(int argc, char** argv) {
  CLI::App app{"frustration-lab: ground-state degeneracy bounds for +-J Ising models"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--out", common.out, "output file (default stdout)");
    sub->add_option("--seed", common.seed, "master seed");
    sub->add_option("--threads", common.threads,
                    "worker threads (default $FRUSTRATION_LAB_THREADS or 1)");
  };

  // lattice
  auto* lat_cmd = app.add_subcommand("lattice", "build and serialize a lattice");
  LatticeArgs lat_args;
  lat_args.add(lat_cmd);
  std::vector<double> dilution;
  lat_cmd->add_option("--dilute", dilution, "site and bond retention probabilities")
      ->expected(2);
  add_common(lat_cmd);

  // couplings
  auto* cpl_cmd = app.add_subcommand("couplings", "draw random couplings for a lattice");
  LatticeArgs cpl_lat;
  cpl_lat.add(cpl_cmd);
  double cpl_p = 0.5;
  cpl_cmd->add_option("--p", cpl_p, "probability of a negative bond");
  add_common(cpl_cmd);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "exact ground-state energy and degeneracy");
  LatticeArgs solve_lat;
  solve_lat.add(solve_cmd);
  std::string couplings_file;
  std::optional<double> solve_p;
  std::string backend = "auto";
  std::string bound_mode = "russian-doll";
  bool want_states = false;
  bool check = false;
  bool timing = false;
  std::size_t max_sites = 30;
  solve_cmd->add_option("--couplings", couplings_file, "couplings JSON file");
  solve_cmd->add_option("--p", solve_p, "draw couplings with this negative probability");
  solve_cmd->add_option("--backend", backend, "auto | exhaustive | transfer | bnb");
  solve_cmd->add_option("--bound", bound_mode, "simple | plaquette | russian-doll");
  solve_cmd->add_flag("--states", want_states, "list every ground state");
  solve_cmd->add_flag("--check", check, "cross-check every applicable backend");
  solve_cmd->add_flag("--timing", timing, "add elapsed_ms to the output");
  solve_cmd->add_option("--max-sites", max_sites, "exhaustive site cap");
  add_common(solve_cmd);

  // verify-module
  auto* verify_cmd = app.add_subcommand("verify-module", "check the module property");
  std::string spec_name = "square";
  std::string spec_file;
  int corrupt_label = 0;
  int collar = 0;
  int verify_samples = 100;
  verify_cmd->add_option("--spec", spec_name, "square | triangular | hexagonal");
  verify_cmd->add_option("--spec-file", spec_file, "module JSON file");
  verify_cmd->add_option("--corrupt", corrupt_label, "reverse this plaquette's constraint");
  verify_cmd->add_option("--collar", collar, "extra host sites (default by kind)");
  verify_cmd->add_option("--samples", verify_samples);
  add_common(verify_cmd);

  // density
  auto* density_cmd = app.add_subcommand("density", "Monte Carlo module frequency");
  std::string density_spec = "square";
  double density_p = 0.5;
  double density_samples = 1e6;
  density_cmd->add_option("--spec", density_spec);
  density_cmd->add_option("--p", density_p);
  density_cmd->add_option("--samples", density_samples);
  add_common(density_cmd);

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "degeneracy and entropy-density bounds");
  std::vector<std::string> bound_specs;
  flab::BoundParams params;
  double bound_samples = 1e7;
  double size = 0;
  std::string format = "json";
  bound_cmd->add_option("--spec", bound_specs, "module name(s); default all three");
  bound_cmd->add_option("--p", params.p);
  bound_cmd->add_option("--p-s", params.p_site, "site retention probability");
  bound_cmd->add_option("--p-b", params.p_bond, "bond retention probability");
  bound_cmd->add_option("--epsilon", params.epsilon);
  bound_cmd->add_option("--delta", params.delta);
  bound_cmd->add_option("--size", size, "lattice size |Lambda| (default 10^6 blocks)");
  bound_cmd->add_option("--samples", bound_samples, "Monte Carlo draws when p != 1/2");
  bound_cmd->add_option("--format", format, "json | csv");
  add_common(bound_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const unsigned threads = resolve_threads(common.threads);

  if (*lat_cmd) {
    flab::Lattice lattice = lat_args.load();
    if (!dilution.empty()) {
      lattice = flab::dilute(lattice, {dilution[0], dilution[1], common.seed});
    }
    emit(common.out, flab::to_json(lattice).dump(2) + "\n");
    return 0;
  }

  if (*cpl_cmd) {
    const flab::Lattice lattice = cpl_lat.load();
    const auto J = load_couplings(lattice, "", cpl_p, common.seed);
    emit(common.out, flab::to_json(lattice, J).dump() + "\n");
    return 0;
  }

  if (*solve_cmd) {
    const flab::Lattice lattice = solve_lat.load();
    const auto J = load_couplings(lattice, couplings_file, solve_p, common.seed);
    flab::SearchOptions options;
    options.collect_states = want_states;
    options.max_sites = max_sites;
    options.threads = threads;
    if (bound_mode == "simple") {
      options.bound = flab::BoundMode::Simple;
    } else if (bound_mode == "plaquette") {
      options.bound = flab::BoundMode::Plaquette;
    } else if (bound_mode != "russian-doll") {
      throw InputError("unknown --bound '" + bound_mode + "'");
    }
    auto solve_with = [&](std::string_view which) {
      if (which == "exhaustive") return flab::enumerate_exhaustive(lattice, J, options);
      if (which == "transfer") {
        if (want_states) throw InputError("the transfer matrix does not list states");
        return flab::transfer_matrix_count(lattice, J);
      }
      if (which == "bnb") return flab::branch_and_bound_enumerate(lattice, J, options);
      if (which == "auto") return flab::solve_ground_state(lattice, J, options);
      throw InputError("unknown --backend '" + std::string(which) + "'");
    };
    const auto start = std::chrono::steady_clock::now();
    const flab::GroundStateResult result = solve_with(backend);
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    json doc = flab::to_json(result);
    if (check) {
      json checked = json::array();
      flab::SearchOptions counting = options;
      counting.collect_states = false;
      auto compare = [&](const flab::GroundStateResult& other) {
        if (other.energy != result.energy || other.degeneracy != result.degeneracy) {
          throw flab::SelfCheckError(
              "backends disagree: " + std::string(flab::to_string(result.backend)) + " (" +
              std::to_string(result.energy) + ", " + result.degeneracy.str() + ") vs " +
              std::string(flab::to_string(other.backend)) + " (" +
              std::to_string(other.energy) + ", " + other.degeneracy.str() + ")");
        }
        checked.push_back(flab::to_string(other.backend));
      };
      if (lattice.num_sites() <= options.max_sites && lattice.num_sites() <= 63) {
        compare(flab::enumerate_exhaustive(lattice, J, counting));
      }
      if (flab::supports_transfer(lattice)) compare(flab::transfer_matrix_count(lattice, J));
      if (lattice.num_sites() <= flab::kMaxBranchSites) {
        compare(flab::branch_and_bound_enumerate(lattice, J, counting));
      }
      doc["checked"] = checked;
    }
    if (result.states) {
      json states = json::array();
      for (const auto& s : *result.states) states.push_back(flab::to_json(lattice, s)["spins"]);
      doc["states"] = states;
    }
    if (timing) doc["elapsed_ms"] = elapsed;
    emit(common.out, doc.dump() + "\n");
    return 0;
  }

  if (*verify_cmd) {
    const flab::ModuleSpec spec = load_spec(spec_name, spec_file, corrupt_label);
    flab::VerifyOptions options;
    options.collar = collar > 0 ? collar : (spec.kind == flab::LatticeKind::Hexagonal ? 10 : 20);
    options.samples = verify_samples;
    options.seed = common.seed;
    options.threads = threads;
    options.exhaustive_sites = 0;
    const auto report = flab::verify_module(spec, options);
    emit(common.out, flab::to_json(report).dump() + "\n");
    return 0;
  }

  if (*density_cmd) {
    const auto& spec = flab::builtin_spec(density_spec);
    const auto est = flab::empirical_module_density(
        spec, density_p, count_arg(density_samples, "--samples"), common.seed, threads);
    json doc;
    doc["spec"] = spec.name;
    doc["p"] = est.p;
    doc["samples"] = est.samples;
    doc["hits"] = est.hits;
    doc["estimate"] = est.estimate;
    doc["stderr"] = est.stderr_;
    doc["seed"] = common.seed;
    emit(common.out, doc.dump() + "\n");
    return 0;
  }

  if (*bound_cmd) {
    if (bound_specs.empty()) bound_specs = {"square", "triangular", "hexagonal"};
    if (format != "json" && format != "csv") throw InputError("--format must be json or csv");
    params.samples = count_arg(bound_samples, "--samples");
    params.seed = common.seed;
    params.threads = threads;
    std::vector<flab::BoundReport> reports;
    for (const auto& name : bound_specs) {
      const auto& spec = flab::builtin_spec(name);
      const std::size_t n =
          size > 0 ? count_arg(size, "--size") : spec.sites.size() * 1'000'000;
      reports.push_back(flab::theorem4_report(spec, n, params));
    }
    std::string text;
    if (format == "csv") {
      text = flab::csv_header() + "\n";
      for (const auto& r : reports) text += flab::to_csv_row(r) + "\n";
    } else {
      json doc = json::array();
      for (const auto& r : reports) doc.push_back(flab::to_json(r));
      text = (reports.size() == 1 ? doc[0] : doc).dump(2) + "\n";
    }
    emit(common.out, text);
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const flab::InputError& e) {
    std::cerr << "flab: " << e.what() << "\n";
    return 2;
  } catch (const flab::CapacityError& e) {
    std::cerr << "flab: " << e.what() << "\n";
    return 3;
  } catch (const flab::SelfCheckError& e) {
    std::cerr << "flab: self-check failed: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "flab: internal error: " << e.what() << "\n";
    return 4;
  }
}

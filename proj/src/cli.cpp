// Copyright 2026 The qsm authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsm/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsm/errors.hpp"
#include "qsm/heisenberg.hpp"
#include "qsm/interval.hpp"
#include "qsm/io.hpp"
#include "qsm/moments.hpp"
#include "qsm/presets.hpp"
#include "qsm/qsf.hpp"
#include "qsm/qvc.hpp"
#include "qsm/renyi.hpp"
#include "qsm/version.hpp"
#include "qsm/weighted.hpp"

namespace qsm::cli {

namespace {

std::shared_ptr<const sim::MixedState> load_state(const ExperimentConfig& cfg) {
  if (cfg.state_spec.empty()) throw ConfigError("missing --state");
  return std::make_shared<const sim::MixedState>(parse_state_preset(cfg.state_spec));
}

std::vector<double> parse_coeff_list(const std::string& text) {
  std::vector<double> coeffs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0') {
      throw ConfigError("malformed coefficient '" + item + "'");
    }
    coeffs.push_back(v);
  }
  if (coeffs.empty()) throw ConfigError("empty coefficient list");
  return coeffs;
}

// Refuses configurations whose total prepared copies exceed the guard and
// prints the accounting line either way.
void check_copy_budget(const ExperimentConfig& cfg, double copies) {
  std::cout << "total prepared copies: " << io::format_double(copies) << "\n";
  if (copies > cfg.copy_budget) {
    throw BudgetError("copy budget exceeded: " + io::format_double(copies) +
                      " > " + io::format_double(cfg.copy_budget));
  }
}

std::string config_line(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "command=" << cfg.subcommand << " seed=" << cfg.seed;
  if (!cfg.state_spec.empty()) out << " state=" << cfg.state_spec;
  return out.str();
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void run_moments(const ExperimentConfig& cfg) {
  const auto rho = load_state(cfg);
  moments::MomentPlan plan;
  plan.k = cfg.k;
  plan.epsilon = cfg.epsilon;
  plan.seed = cfg.seed;
  plan.shots =
      cfg.shots > 0 ? cfg.shots : moments::required_shots(cfg.k, cfg.epsilon);
  check_copy_budget(cfg, static_cast<double>(plan.shots) * cfg.k);

  const auto est = moments::estimate_moments(rho, plan, cfg.threads);
  const auto exact = moments::exact_moments(*rho, cfg.k);

  std::ostringstream cmd;
  cmd << config_line(cfg) << " k=" << cfg.k << " eps=" << cfg.epsilon
      << " shots=" << plan.shots;
  io::CsvReport csv(cmd.str(), {"order", "estimate", "stderr", "exact"});
  for (int j = 2; j <= cfg.k; ++j) {
    csv.add_numeric_row({static_cast<double>(j),
                         est.estimates[static_cast<std::size_t>(j - 2)],
                         est.stderrs[static_cast<std::size_t>(j - 2)],
                         exact[static_cast<std::size_t>(j - 2)]});
  }
  csv.write(out_path(cfg, "moments.csv"));

  nlohmann::json j;
  j["version"] = kVersion;
  j["config"] = {{"state", cfg.state_spec}, {"k", cfg.k},
                 {"eps", cfg.epsilon},      {"threads", cfg.threads}};
  j["k"] = est.k;
  j["shots"] = est.shots;
  j["seed"] = est.seed;
  j["estimates"] = est.estimates;
  j["stderr"] = est.stderrs;
  j["exact"] = exact;
  io::write_text_file(out_path(cfg, "moments.json"), j.dump(2) + "\n");
}

void run_qsf(const ExperimentConfig& cfg) {
  if (cfg.coefficient_sets.size() != 1) {
    throw ConfigError("qsf needs exactly one --coeffs list");
  }
  if (cfg.shots < 1) throw ConfigError("qsf needs --shots");
  const auto rho = load_state(cfg);
  const qsf::PolynomialFunctional f(parse_coeff_list(cfg.coefficient_sets[0]));
  check_copy_budget(cfg, static_cast<double>(cfg.shots) * f.degree());

  const auto est = qsf::estimate_functional(rho, f, cfg.shots, cfg.seed, cfg.threads);
  const auto exact_m = moments::exact_moments(*rho, std::max(2, f.degree()));
  const double exact = f.evaluate(exact_m);

  std::ostringstream cmd;
  cmd << config_line(cfg) << " coeffs=" << cfg.coefficient_sets[0]
      << " shots=" << cfg.shots;
  io::CsvReport csv(cmd.str(),
                    {"degree", "l1_norm", "estimate", "stderr", "exact"});
  csv.add_numeric_row({static_cast<double>(f.degree()), f.l1_norm(), est.value,
                       est.stderr, exact});
  csv.write(out_path(cfg, "qsf.csv"));
}

void run_multi(const ExperimentConfig& cfg) {
  if (cfg.coefficient_sets.empty()) {
    throw ConfigError("multi needs at least one --coeffs list");
  }
  if (cfg.shots < 1) throw ConfigError("multi needs --shots");
  const auto rho = load_state(cfg);
  std::vector<qsf::PolynomialFunctional> fs;
  int max_k = 1;
  for (const auto& text : cfg.coefficient_sets) {
    fs.emplace_back(parse_coeff_list(text));
    max_k = std::max(max_k, fs.back().degree());
  }
  check_copy_budget(cfg, static_cast<double>(cfg.shots) * max_k);

  const auto strategy = [&] {
    if (cfg.strategy == "moment-reuse") return qsf::MultiStrategy::kMomentReuse;
    if (cfg.strategy == "parallel-circuit") return qsf::MultiStrategy::kParallelCircuit;
    throw ConfigError("unknown strategy '" + cfg.strategy + "'");
  }();
  const auto estimates = qsf::estimate_multiple_functionals(
      rho, fs, cfg.shots, cfg.seed, strategy, cfg.threads);

  std::ostringstream cmd;
  cmd << config_line(cfg) << " strategy=" << cfg.strategy << " shots=" << cfg.shots;
  io::CsvReport csv(cmd.str(),
                    {"functional", "degree", "estimate", "stderr", "exact"});
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto exact_m = moments::exact_moments(*rho, std::max(2, fs[i].degree()));
    csv.add_numeric_row({static_cast<double>(i), static_cast<double>(fs[i].degree()),
                         estimates[i].value, estimates[i].stderr,
                         fs[i].evaluate(exact_m)});
  }
  csv.write(out_path(cfg, "multi.csv"));
}

void run_weighted(const ExperimentConfig& cfg) {
  if (cfg.observable_path.empty()) throw ConfigError("weighted needs --observable");
  if (cfg.shots < 1) throw ConfigError("weighted needs --shots");
  const auto rho = load_state(cfg);
  const auto o =
      obs::PauliObservable::parse_text(io::read_text_file(cfg.observable_path));
  const auto scheme = [&] {
    if (cfg.scheme == "pauli") return obs::Scheme::kPauli;
    if (cfg.scheme == "lcu") return obs::Scheme::kLcu;
    throw ConfigError("unknown scheme '" + cfg.scheme + "'");
  }();
  check_copy_budget(cfg, static_cast<double>(cfg.shots) * cfg.k);

  const auto wm = obs::estimate_weighted_moments(rho, o, cfg.k, cfg.shots,
                                                 cfg.seed, scheme, cfg.threads);
  const auto exact = obs::exact_weighted_moments(*rho, o, cfg.k);

  std::ostringstream cmd;
  cmd << config_line(cfg) << " observable=" << cfg.observable_path
      << " scheme=" << cfg.scheme << " k=" << cfg.k << " shots=" << cfg.shots;
  io::CsvReport csv(cmd.str(), {"order", "estimate", "stderr", "exact"});
  for (int j = 1; j <= cfg.k; ++j) {
    csv.add_numeric_row({static_cast<double>(j),
                         wm.estimates[static_cast<std::size_t>(j - 1)],
                         wm.stderrs[static_cast<std::size_t>(j - 1)],
                         exact[static_cast<std::size_t>(j - 1)]});
  }
  csv.write(out_path(cfg, "weighted.csv"));
}

void run_eig_interval(const ExperimentConfig& cfg) {
  check_copy_budget(cfg, 0.0);
  const auto rows = apps::interval_study(cfg.ranks, cfg.eps_grid, cfg.trials,
                                         cfg.k, cfg.seed, cfg.threads);
  std::ostringstream cmd;
  cmd << config_line(cfg) << " trials=" << cfg.trials << " k=" << cfg.k;
  io::CsvReport csv(cmd.str(),
                    {"rank", "eps", "mean_width", "sd_width", "containment"});
  for (const auto& row : rows) {
    csv.add_numeric_row({static_cast<double>(row.rank), row.epsilon,
                         row.mean_width, row.sd_width, row.containment});
  }
  csv.write(out_path(cfg, "interval_study.csv"));
}

void run_qvc(const ExperimentConfig& cfg) {
  if (cfg.shots < 1) throw ConfigError("qvc needs --shots");
  const apps::HeisenbergSpec spec{cfg.sites, cfg.coupling, cfg.field};
  const auto hamiltonian = apps::heisenberg_hamiltonian(spec);
  const auto rho = apps::gibbs_state(hamiltonian, cfg.beta);
  check_copy_budget(cfg, static_cast<double>(cfg.shots) * cfg.k * cfg.runs *
                             (cfg.baseline ? 2.0 : 1.0));

  const auto chain = apps::virtual_cooling_estimate(
      rho, hamiltonian, cfg.k, cfg.shots, cfg.runs, cfg.seed,
      apps::QvcScheme::kChain, cfg.threads);

  std::ostringstream cmd;
  cmd << config_line(cfg) << " n=" << cfg.sites << " beta=" << cfg.beta
      << " k=" << cfg.k << " shots=" << cfg.shots << " runs=" << cfg.runs
      << " baseline=" << (cfg.baseline ? 1 : 0);
  io::CsvReport csv(cmd.str(), {"n", "k", "scheme", "mean_E", "sigma_E", "mad",
                                "exact_E", "invalid_runs"});
  auto emit = [&](const apps::QvcResult& r, const char* scheme_name) {
    for (std::size_t j = 0; j < r.orders.size(); ++j) {
      csv.add_row({std::to_string(cfg.sites), std::to_string(r.orders[j]),
                   scheme_name, io::format_double(r.mean_energy[j]),
                   io::format_double(r.sigma_energy[j]), io::format_double(r.mad[j]),
                   io::format_double(r.exact_energy[j]),
                   std::to_string(r.invalid_runs[j])});
    }
  };
  emit(chain, "chain");
  if (cfg.baseline) {
    const auto base = apps::virtual_cooling_estimate(
        rho, hamiltonian, cfg.k, cfg.shots, cfg.runs, derive_seed(cfg.seed, 999),
        apps::QvcScheme::kSwapBaseline, cfg.threads);
    emit(base, "swap-baseline");
  }
  csv.write(out_path(cfg, "qvc.csv"));
}

void run_scaling(const ExperimentConfig& cfg) {
  const apps::HeisenbergSpec spec{cfg.sites, cfg.coupling, cfg.field};
  double total_shots = 0.0;
  for (const auto n : cfg.shot_grid) total_shots += static_cast<double>(n);
  check_copy_budget(cfg, total_shots * cfg.k * cfg.runs);

  const auto result = apps::error_scaling_study(spec, cfg.beta, cfg.k,
                                                cfg.shot_grid, cfg.runs,
                                                cfg.seed, cfg.threads);
  std::ostringstream cmd;
  cmd << config_line(cfg) << " n=" << cfg.sites << " beta=" << cfg.beta
      << " k=" << cfg.k << " runs=" << cfg.runs;
  io::CsvReport csv(cmd.str(), {"n", "k", "shots", "mean_abs_err", "slope"});
  for (const auto& point : result.points) {
    csv.add_numeric_row({static_cast<double>(result.sites),
                         static_cast<double>(point.k),
                         static_cast<double>(point.shots), point.mean_abs_error,
                         result.slopes[static_cast<std::size_t>(point.k - 1)]});
  }
  csv.write(out_path(cfg, "scaling.csv"));
}

void run_renyi(const ExperimentConfig& cfg) {
  if (cfg.shots < 1) throw ConfigError("renyi needs --shots");
  if (cfg.alphas.empty()) throw ConfigError("renyi needs --alpha");
  int alpha_max = 2;
  for (int a : cfg.alphas) {
    if (a < 2) throw ConfigError("Renyi orders must be >= 2");
    alpha_max = std::max(alpha_max, a);
  }
  check_copy_budget(cfg, static_cast<double>(cfg.shots) * alpha_max);

  const auto estimates = apps::renyi_experiment(cfg.beta, alpha_max, cfg.shots,
                                                cfg.seed, cfg.base_two, cfg.threads);
  std::ostringstream cmd;
  cmd << config_line(cfg) << " beta=" << cfg.beta << " shots=" << cfg.shots
      << " base2=" << (cfg.base_two ? 1 : 0);
  io::CsvReport csv(cmd.str(),
                    {"alpha", "moment", "moment_stderr", "estimate", "exact"});
  for (int a : cfg.alphas) {
    const auto& est = estimates[static_cast<std::size_t>(a - 2)];
    csv.add_numeric_row(
        {static_cast<double>(a), est.moment, est.moment_stderr, est.entropy,
         est.exact_entropy});
  }
  csv.write(out_path(cfg, "renyi.csv"));
}

}  // namespace

int run(const ExperimentConfig& cfg) {
  try {
    if (cfg.subcommand == "moments") {
      run_moments(cfg);
    } else if (cfg.subcommand == "qsf") {
      run_qsf(cfg);
    } else if (cfg.subcommand == "multi") {
      run_multi(cfg);
    } else if (cfg.subcommand == "weighted") {
      run_weighted(cfg);
    } else if (cfg.subcommand == "eig-interval") {
      run_eig_interval(cfg);
    } else if (cfg.subcommand == "qvc") {
      run_qvc(cfg);
    } else if (cfg.subcommand == "scaling") {
      run_scaling(cfg);
    } else if (cfg.subcommand == "renyi") {
      run_renyi(cfg);
    } else {
      throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
    }
  } catch (const BudgetError& e) {
    std::cerr << "qsm: error: budget: " << e.what() << "\n";
    return kExitBudget;
  } catch (const NumericalError& e) {
    std::cerr << "qsm: error: numerical: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ConfigError& e) {
    std::cerr << "qsm: error: config: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

int main_entry(int argc, const char* const* argv) {
  CLI::App app{"Reset-chain estimation of quantum state moments and functionals"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ExperimentConfig cfg;
  // Shot counts go through doubles so that 1e5-style values parse.
  double shots_raw = -1.0;
  std::vector<double> shot_grid_raw;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Master seed (required; no wall-clock)")
        ->required();
    sub->add_option("--out", cfg.out_dir, "Output directory");
    sub->add_option("--threads", cfg.threads,
                    "Worker threads (0 = hardware); never changes results");
    sub->add_option("--max-copies", cfg.copy_budget, "Copy budget guard");
  };

  auto* moments_cmd = app.add_subcommand("moments", "Simultaneous moment estimation");
  moments_cmd->add_option("--state", cfg.state_spec, "State preset")->required();
  moments_cmd->add_option("--k", cfg.k, "Highest moment order");
  moments_cmd->add_option("--eps", cfg.epsilon, "Target additive error");
  moments_cmd->add_option("--shots", shots_raw,
                          "Shot count (default: derived from k and eps)");
  add_common(moments_cmd);

  auto* qsf_cmd = app.add_subcommand("qsf", "Polynomial functional estimation");
  qsf_cmd->add_option("--state", cfg.state_spec, "State preset")->required();
  qsf_cmd->add_option("--coeffs", cfg.coefficient_sets,
                      "Comma-separated coefficients a1,a2,...")
      ->required();
  qsf_cmd->add_option("--shots", shots_raw, "Shot count")->required();
  add_common(qsf_cmd);

  auto* multi_cmd = app.add_subcommand("multi", "Multiple functionals at once");
  multi_cmd->add_option("--state", cfg.state_spec, "State preset")->required();
  multi_cmd->add_option("--coeffs", cfg.coefficient_sets,
                        "Coefficient list (repeat per functional)")
      ->required();
  multi_cmd->add_option("--strategy", cfg.strategy,
                        "moment-reuse | parallel-circuit");
  multi_cmd->add_option("--shots", shots_raw, "Shot count")->required();
  add_common(multi_cmd);

  auto* weighted_cmd =
      app.add_subcommand("weighted", "Observable-weighted moments");
  weighted_cmd->add_option("--state", cfg.state_spec, "State preset")->required();
  weighted_cmd->add_option("--observable", cfg.observable_path,
                           "Observable text file")
      ->required();
  weighted_cmd->add_option("--k", cfg.k, "Highest order");
  weighted_cmd->add_option("--scheme", cfg.scheme, "lcu | pauli");
  weighted_cmd->add_option("--shots", shots_raw, "Shot count")->required();
  add_common(weighted_cmd);

  auto* interval_cmd =
      app.add_subcommand("eig-interval", "Monte Carlo eigenvalue intervals");
  interval_cmd->add_option("--ranks", cfg.ranks, "Spectrum ranks")->delimiter(',');
  interval_cmd->add_option("--eps-grid", cfg.eps_grid, "Moment error bounds")->delimiter(',');
  interval_cmd->add_option("--trials", cfg.trials, "Trials per setting");
  interval_cmd->add_option("--k", cfg.k, "Highest moment order");
  add_common(interval_cmd);

  auto* qvc_cmd = app.add_subcommand("qvc", "Virtual cooling of the Heisenberg chain");
  qvc_cmd->add_option("--n", cfg.sites, "Chain sites");
  qvc_cmd->add_option("--beta", cfg.beta, "Inverse temperature");
  qvc_cmd->add_option("--coupling", cfg.coupling, "Coupling J");
  qvc_cmd->add_option("--field", cfg.field, "Field h");
  qvc_cmd->add_option("--k", cfg.k, "Cooling order");
  qvc_cmd->add_option("--shots", shots_raw, "Shots per run")->required();
  qvc_cmd->add_option("--runs", cfg.runs, "Independent runs");
  qvc_cmd->add_flag("--baseline", cfg.baseline,
                    "Also run the generalized SWAP-test baseline");
  add_common(qvc_cmd);

  auto* scaling_cmd = app.add_subcommand("scaling", "Shot-noise scaling study");
  scaling_cmd->add_option("--n", cfg.sites, "Chain sites");
  scaling_cmd->add_option("--beta", cfg.beta, "Inverse temperature");
  scaling_cmd->add_option("--k", cfg.k, "Highest cooling order");
  scaling_cmd->add_option("--shot-grid", shot_grid_raw, "Shot counts")->delimiter(',');
  scaling_cmd->add_option("--runs", cfg.runs, "Runs per point");
  add_common(scaling_cmd);

  auto* renyi_cmd = app.add_subcommand("renyi", "Renyi entropy of Gibbs-Z");
  renyi_cmd->add_option("--beta", cfg.beta, "Inverse temperature");
  renyi_cmd->add_option("--alpha", cfg.alphas, "Renyi orders (>= 2)")->delimiter(',');
  renyi_cmd->add_option("--shots", shots_raw, "Shot count")->required();
  renyi_cmd->add_flag("--base2", cfg.base_two, "Report entropies in bits");
  add_common(renyi_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "qsm: error: config: " << e.what() << "\n";
    return kExitConfig;
  }

  for (auto* sub : {moments_cmd, qsf_cmd, multi_cmd, weighted_cmd, interval_cmd,
                    qvc_cmd, scaling_cmd, renyi_cmd}) {
    if (sub->parsed()) cfg.subcommand = sub->get_name();
  }
  if (shots_raw >= 0.0) cfg.shots = static_cast<std::int64_t>(std::llround(shots_raw));
  if (!shot_grid_raw.empty()) {
    cfg.shot_grid.clear();
    for (double v : shot_grid_raw) {
      cfg.shot_grid.push_back(static_cast<std::int64_t>(std::llround(v)));
    }
  }
  return run(cfg);
}

}  // namespace qsm::cli

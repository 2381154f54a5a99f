#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xrpt/baselines/baselines.hpp"
#include "xrpt/sut/simulated_sut.hpp"

namespace xrpt {

struct SutSpec {
  enum class Kind { Simulated, Tcp, Command };
  Kind kind = Kind::Simulated;
  RivalPolicy policy = RivalPolicy::Uniform;
  /// tcp://host:port for Tcp, a shell command line for Command.
  std::string endpoint;
};

struct ExperimentSpec {
  std::string model_path;
  std::string goal;
  Strategy strategy = Strategy::Xrpt;
  int depth_bound = 2;
  std::size_t candidates = 5;
  std::vector<std::uint64_t> seeds{0};
  SutSpec sut;
  /// Per-seed reports are written here when non-empty.
  std::string output_dir;
  std::size_t max_steps = 10'000;
  TabuDetail tabu = TabuDetail::StateAndInput;
  /// Re-runs after a finish with discarded traps.
  std::size_t replay_rounds = 1;

  /// Throws Error when depth_bound < 1, N < 1 or no seed is given.
  void validate() const;
};

/// Keys: model, goal, strategy, depth, candidates, seeds (list, or
/// {"from": a, "count": n}), sut ("simulated" | "tcp://..." | {"cmd": ...}),
/// policy, out, max_steps, tabu, replay_rounds. Relative model paths are
/// resolved against `base`.
ExperimentSpec parse_experiment_spec(const nlohmann::json& doc, const std::filesystem::path& base = {});
/// A single spec object or {"experiments": [...]}.
std::vector<ExperimentSpec> load_bench_file(const std::filesystem::path& path);

struct RunSummary {
  std::size_t runs = 0;
  std::size_t covered_runs = 0;
  std::size_t failed_runs = 0;
  std::size_t min_length = 0;
  double avg_length = 0;
  std::size_t max_length = 0;
  double avg_strategy_steps = 0;
  double avg_rpt_steps = 0;
  double mean_decision_ms = 0;
  double avg_online_ms = 0;
};

RunSummary summarize_runs(const std::vector<TestReport>& reports);

struct ExperimentResult {
  ExperimentSpec spec;
  double offline_ms = 0;
  std::vector<TestReport> reports;  // one per seed
  RunSummary summary;
};

/// Opens the SUT of `spec` for one seed.
std::unique_ptr<SutPort> open_sut(const SutSpec& spec, const EfsmModel& m, std::uint64_t seed);

/// One run of `strategy`. For xrpt, traps discarded in a finished run are
/// restored and the SUT is reset for up to `replay_rounds` further runs while
/// they make progress. `offline` is required for xrpt and rpt-only.
TestReport run_strategy(const EfsmModel& m, const TestGoal& goal, Strategy strategy, const OfflineArtifacts* offline,
                        SutPort& sut, std::uint64_t seed, const EngineConfig& config, std::size_t replay_rounds);

/// Off-line phase once, then one on-line run per seed. Writes
/// <out>/offline.json and <out>/report_<seed>.json when an output directory
/// is set.
ExperimentResult run_experiment(const ExperimentSpec& spec, const EfsmModel& m);
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Aligned plain-text table, one row per experiment.
std::string comparison_table(const std::vector<ExperimentResult>& results);
std::string comparison_csv(const std::vector<ExperimentResult>& results);

}  // namespace xrpt

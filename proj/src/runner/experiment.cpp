#include "xrpt/runner/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "xrpt/efsm/io.hpp"
#include "xrpt/error.hpp"
#include "xrpt/sut/external_sut.hpp"

namespace xrpt {

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
  return doc.contains(key) ? doc.at(key).get<T>() : fallback;
}

std::size_t covered_count(const Session& s) {
  return static_cast<std::size_t>(std::count(s.statuses().begin(), s.statuses().end(), TrapStatus::Covered));
}

bool any_discarded(const Session& s) {
  return std::find(s.statuses().begin(), s.statuses().end(), TrapStatus::Discarded) != s.statuses().end();
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace

void ExperimentSpec::validate() const {
  if (depth_bound < 1) throw Error("depth bound must be at least 1");
  if (candidates < 1) throw Error("the candidate budget N must be at least 1");
  if (seeds.empty()) throw Error("at least one seed is required");
  if (max_steps < 1) throw Error("max_steps must be at least 1");
}

ExperimentSpec parse_experiment_spec(const json& doc, const std::filesystem::path& base) {
  try {
    ExperimentSpec spec;
    std::filesystem::path model = doc.at("model").get<std::string>();
    if (model.is_relative() && !base.empty()) model = base / model;
    spec.model_path = model.string();
    spec.goal = doc.at("goal").get<std::string>();
    spec.strategy = parse_strategy(get_or<std::string>(doc, "strategy", "xrpt"));
    spec.depth_bound = get_or(doc, "depth", 2);
    spec.candidates = get_or<std::size_t>(doc, "candidates", 5);
    spec.max_steps = get_or<std::size_t>(doc, "max_steps", 10'000);
    spec.replay_rounds = get_or<std::size_t>(doc, "replay_rounds", 1);
    spec.tabu = parse_tabu_detail(get_or<std::string>(doc, "tabu", "state-input"));
    spec.output_dir = get_or<std::string>(doc, "out", "");
    if (doc.contains("seeds")) {
      const json& seeds = doc.at("seeds");
      if (seeds.is_object()) {
        const auto from = seeds.at("from").get<std::uint64_t>();
        const auto count = seeds.at("count").get<std::uint64_t>();
        spec.seeds.clear();
        for (std::uint64_t k = 0; k < count; ++k) spec.seeds.push_back(from + k);
      } else {
        spec.seeds = seeds.get<std::vector<std::uint64_t>>();
      }
    }
    spec.sut.policy = parse_rival_policy(get_or<std::string>(doc, "policy", "uniform"));
    if (doc.contains("sut")) {
      const json& sut = doc.at("sut");
      if (sut.is_object()) {
        spec.sut.kind = SutSpec::Kind::Command;
        spec.sut.endpoint = sut.at("cmd").get<std::string>();
      } else if (sut.get<std::string>() != "simulated") {
        spec.sut.kind = SutSpec::Kind::Tcp;
        spec.sut.endpoint = sut.get<std::string>();
      }
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed experiment spec: ") + e.what());
  }
}

std::vector<ExperimentSpec> load_bench_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  std::vector<ExperimentSpec> specs;
  const auto base = path.parent_path();
  if (doc.contains("experiments")) {
    for (const json& e : doc.at("experiments")) specs.push_back(parse_experiment_spec(e, base));
  } else {
    specs.push_back(parse_experiment_spec(doc, base));
  }
  return specs;
}

RunSummary summarize_runs(const std::vector<TestReport>& reports) {
  RunSummary s;
  s.runs = reports.size();
  if (reports.empty()) return s;
  s.min_length = reports.front().path.size();
  double decisions_ms = 0;
  std::size_t steps = 0;
  for (const TestReport& r : reports) {
    const std::size_t len = r.path.size();
    s.covered_runs += r.all_covered() ? 1 : 0;
    s.failed_runs += r.verdict == Verdict::Failed ? 1 : 0;
    s.min_length = std::min(s.min_length, len);
    s.max_length = std::max(s.max_length, len);
    s.avg_length += static_cast<double>(len);
    s.avg_strategy_steps += static_cast<double>(r.strategy_steps);
    s.avg_rpt_steps += static_cast<double>(r.rpt_steps);
    s.avg_online_ms += r.online_ms;
    decisions_ms += r.mean_decision_ms * static_cast<double>(len);
    steps += len;
  }
  const double n = static_cast<double>(reports.size());
  s.avg_length /= n;
  s.avg_strategy_steps /= n;
  s.avg_rpt_steps /= n;
  s.avg_online_ms /= n;
  s.mean_decision_ms = steps ? decisions_ms / static_cast<double>(steps) : 0;
  return s;
}

std::unique_ptr<SutPort> open_sut(const SutSpec& spec, const EfsmModel& m, std::uint64_t seed) {
  switch (spec.kind) {
    case SutSpec::Kind::Simulated: return std::make_unique<SimulatedSut>(m, spec.policy, seed);
    case SutSpec::Kind::Tcp: return connect_sut(spec.endpoint);
    case SutSpec::Kind::Command: return std::make_unique<ProcessSut>(spec.endpoint);
  }
  throw Error("unknown SUT kind");
}

TestReport run_strategy(const EfsmModel& m, const TestGoal& goal, Strategy strategy, const OfflineArtifacts* offline,
                        SutPort& sut, std::uint64_t seed, const EngineConfig& config, std::size_t replay_rounds) {
  if (strategy != Strategy::Xrpt) {
    BaselineConfig bc;
    bc.seed = seed;
    bc.max_steps = config.max_steps;
    return run_baseline(m, goal, strategy, offline, sut, bc);
  }
  if (!offline) throw Error("xrpt needs off-line artifacts");
  TestReport report;
  report.strategy = "xrpt";
  report.offline_ms = offline->elapsed_ms;
  Session session(m, sut, config.max_steps);
  const auto start = std::chrono::steady_clock::now();
  try {
    for (std::size_t round = 0;; ++round) {
      Engine engine(m, *offline, goal, config);
      const std::size_t before = covered_count(session);
      report.verdict = engine.run(session, config.record_decisions ? &report.log : nullptr);
      if (report.verdict != Verdict::Finished || !any_discarded(session) || round >= replay_rounds) break;
      if (round > 0 && covered_count(session) == before) break;
      spdlog::debug("replaying with discarded traps restored (round {})", round + 1);
      session.restore_discarded();
      session.reset();
    }
  } catch (const StepBudgetExceeded& e) {
    report.verdict = Verdict::Error;
    report.error = e.what();
  }
  report.online_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  summarize(report, m, goal, session);
  report.decisions = static_cast<std::size_t>(std::count_if(
      report.log.begin(), report.log.end(), [](const Decision& d) { return d.kind == Decision::Kind::Candidates; }));
  return report;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const EfsmModel& m) {
  spec.validate();
  auto it = m.goals().find(spec.goal);
  if (it == m.goals().end()) throw Error("unknown goal '" + spec.goal + "'");
  const TestGoal& goal = it->second;
  ExperimentResult result;
  result.spec = spec;
  std::optional<OfflineArtifacts> offline;
  if (spec.strategy == Strategy::Xrpt || spec.strategy == Strategy::RptOnly) {
    ReachabilityOptions opts;
    opts.depth_bound = spec.depth_bound;
    offline = run_offline(m, goal, opts);
    result.offline_ms = offline->elapsed_ms;
  }
  if (!spec.output_dir.empty()) {
    std::filesystem::create_directories(spec.output_dir);
    if (offline) write_json(std::filesystem::path(spec.output_dir) / "offline.json", offline->to_json(m));
  }
  EngineConfig config;
  config.candidates = spec.candidates;
  config.max_steps = spec.max_steps;
  config.tabu = spec.tabu;
  for (std::uint64_t seed : spec.seeds) {
    auto sut = open_sut(spec.sut, m, seed);
    sut->reset();
    TestReport r = run_strategy(m, goal, spec.strategy, offline ? &*offline : nullptr, *sut, seed, config,
                                spec.replay_rounds);
    spdlog::info("{} {} seed {}: {} length {} ({} + {})", spec.goal, to_string(spec.strategy), seed,
                 to_string(r.verdict), r.path.size(), r.strategy_steps, r.rpt_steps);
    if (!spec.output_dir.empty()) {
      json doc = r.to_json(m);
      doc["seed"] = seed;
      write_json(std::filesystem::path(spec.output_dir) / fmt::format("report_{}.json", seed), doc);
    }
    result.reports.push_back(std::move(r));
  }
  result.summary = summarize_runs(result.reports);
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  return run_experiment(spec, load_model(spec.model_path));
}

std::string comparison_table(const std::vector<ExperimentResult>& results) {
  std::string out = fmt::format("{:<14} {:<10} {:>5} {:>5} {:>7} {:>22} {:>16} {:>12} {:>12}\n", "goal", "strategy",
                                "depth", "runs", "covered", "length min/avg/max", "online split", "offline ms",
                                "ms/decision");
  for (const ExperimentResult& r : results) {
    const RunSummary& s = r.summary;
    out += fmt::format("{:<14} {:<10} {:>5} {:>5} {:>7} {:>22} {:>16} {:>12.2f} {:>12.3f}\n", r.spec.goal,
                       to_string(r.spec.strategy), r.spec.depth_bound, s.runs, s.covered_runs,
                       fmt::format("{} / {:.1f} / {}", s.min_length, s.avg_length, s.max_length),
                       fmt::format("{:.1f} + {:.1f}", s.avg_strategy_steps, s.avg_rpt_steps), r.offline_ms,
                       s.mean_decision_ms);
  }
  return out;
}

std::string comparison_csv(const std::vector<ExperimentResult>& results) {
  std::string out =
      "goal,strategy,depth,runs,covered,failed,min_length,avg_length,max_length,avg_strategy_steps,avg_rpt_steps,"
      "offline_ms,mean_decision_ms\n";
  for (const ExperimentResult& r : results) {
    const RunSummary& s = r.summary;
    out += fmt::format("{},{},{},{},{},{},{},{:.3f},{},{:.3f},{:.3f},{:.3f},{:.4f}\n", r.spec.goal,
                       to_string(r.spec.strategy), r.spec.depth_bound, s.runs, s.covered_runs, s.failed_runs,
                       s.min_length, s.avg_length, s.max_length, s.avg_strategy_steps, s.avg_rpt_steps, r.offline_ms,
                       s.mean_decision_ms);
  }
  return out;
}

}  // namespace xrpt

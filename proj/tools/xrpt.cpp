#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "xrpt/analysis/offline.hpp"
#include "xrpt/efsm/io.hpp"
#include "xrpt/runner/experiment.hpp"
#include "xrpt/runner/generators.hpp"
#include "xrpt/sut/external_sut.hpp"

namespace {

using namespace xrpt;

constexpr int kArtifactError = 3;

void setup_logging() {
  spdlog::set_default_logger(spdlog::stderr_color_mt("xrpt"));
  spdlog::set_level(spdlog::level::warn);
  if (const char* levels = std::getenv("XRPT_LOG")) spdlog::cfg::helpers::load_levels(levels);
}

const TestGoal& require_goal(const EfsmModel& m, const std::string& name) {
  auto it = m.goals().find(name);
  if (it == m.goals().end()) throw Error("unknown goal '" + name + "'");
  return it->second;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

struct OfflineArgs {
  std::string model, goal, out;
  int depth = 2;
};

int run_offline_cmd(const OfflineArgs& a) {
  const EfsmModel m = load_model(a.model);
  ReachabilityOptions opts;
  opts.depth_bound = a.depth;
  const OfflineArtifacts art = run_offline(m, require_goal(m, a.goal), opts);
  const std::string text = art.to_json(m).dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::filesystem::create_directories(a.out);
    write_file(std::filesystem::path(a.out) / "offline.json", text);
    fmt::print("off-line phase done in {:.2f} ms, written to {}\n", art.elapsed_ms, a.out);
  }
  return 0;
}

struct TestArgs {
  std::string model, goal, strategy = "xrpt", sut, sut_cmd, policy = "uniform", tabu = "state-input", out;
  int depth = 2;
  std::size_t candidates = 5;
  std::uint64_t seed = 0;
  std::size_t max_steps = 10'000;
  std::size_t replay_rounds = 1;
};

int run_test_cmd(const TestArgs& a) {
  ExperimentSpec spec;
  spec.model_path = a.model;
  spec.goal = a.goal;
  spec.strategy = parse_strategy(a.strategy);
  spec.depth_bound = a.depth;
  spec.candidates = a.candidates;
  spec.seeds = {a.seed};
  spec.max_steps = a.max_steps;
  spec.replay_rounds = a.replay_rounds;
  spec.tabu = parse_tabu_detail(a.tabu);
  spec.sut.policy = parse_rival_policy(a.policy);
  if (!a.sut.empty()) {
    spec.sut.kind = SutSpec::Kind::Tcp;
    spec.sut.endpoint = a.sut;
  } else if (!a.sut_cmd.empty()) {
    spec.sut.kind = SutSpec::Kind::Command;
    spec.sut.endpoint = a.sut_cmd;
  }
  const EfsmModel m = load_model(spec.model_path);
  const ExperimentResult r = run_experiment(spec, m);
  const TestReport& report = r.reports.front();
  nlohmann::json doc = report.to_json(m);
  doc["seed"] = a.seed;
  const std::string text = doc.dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file(a.out, text);
    fmt::print("{}: path length {} ({} + {}), report written to {}\n", to_string(report.verdict),
               report.path.size(), report.strategy_steps, report.rpt_steps, a.out);
  }
  return report.exit_code();
}

struct BenchArgs {
  std::string spec, csv;
};

int run_bench_cmd(const BenchArgs& a) {
  std::vector<ExperimentResult> results;
  for (const ExperimentSpec& spec : load_bench_file(a.spec)) results.push_back(run_experiment(spec));
  std::cout << comparison_table(results);
  if (!a.csv.empty()) write_file(a.csv, comparison_csv(results));
  int code = 0;
  for (const ExperimentResult& r : results)
    for (const TestReport& t : r.reports) code = std::max(code, t.exit_code());
  return code;
}

struct GenArgs {
  SyntheticShape shape;
  std::string out;
};

int run_gen_cmd(const GenArgs& a) {
  const std::string text = to_json(generate_synthetic_model(a.shape)).dump(2) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    write_file(a.out, text);
  return 0;
}

struct ServeArgs {
  std::string model, policy = "uniform";
  std::uint64_t seed = 0;
  int port = -1;
  std::size_t connections = 0;
};

int run_serve_cmd(const ServeArgs& a) {
  const EfsmModel m = load_model(a.model);
  SimulatedSut sut(m, parse_rival_policy(a.policy), a.seed);
  sut.reset();
  if (a.port < 0) {
    serve_line_protocol(sut, std::cin, std::cout);
  } else {
    serve_tcp(sut, static_cast<std::uint16_t>(a.port), a.connections,
              [](std::uint16_t port) { spdlog::info("listening on port {}", port); });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"On-line constraint-guided EFSM tester"};
  app.require_subcommand(1);

  OfflineArgs off;
  auto* offline = app.add_subcommand("offline", "Run the off-line phase and print its artifacts");
  offline->add_option("model", off.model, "Model file")->required()->check(CLI::ExistingFile);
  offline->add_option("goal", off.goal, "Goal name")->required();
  offline->add_option("--depth", off.depth, "Depth bound")->check(CLI::PositiveNumber);
  offline->add_option("--out", off.out, "Output directory");

  TestArgs t;
  auto* test = app.add_subcommand("test", "Run one on-line test");
  test->add_option("model", t.model, "Model file")->required()->check(CLI::ExistingFile);
  test->add_option("goal", t.goal, "Goal name")->required();
  test->add_option("--strategy", t.strategy, "xrpt | rpt-only | anti-ant | random");
  test->add_option("--depth", t.depth, "Depth bound")->check(CLI::PositiveNumber);
  test->add_option("--candidates", t.candidates, "Solution candidates per decision")->check(CLI::PositiveNumber);
  test->add_option("--seed", t.seed, "Seed of the simulated SUT and the baselines");
  auto* sut_opt = test->add_option("--sut", t.sut, "External SUT endpoint tcp://host:port");
  test->add_option("--sut-cmd", t.sut_cmd, "External SUT command speaking the line protocol")->excludes(sut_opt);
  test->add_option("--policy", t.policy, "Rival policy of the simulated SUT: uniform | first | hostile");
  test->add_option("--tabu", t.tabu, "Tabu projection: state-input | state | transition");
  test->add_option("--max-steps", t.max_steps, "Step watchdog")->check(CLI::PositiveNumber);
  test->add_option("--replay-rounds", t.replay_rounds, "Re-runs for discarded traps");
  test->add_option("--out", t.out, "Report file");

  BenchArgs b;
  auto* bench = app.add_subcommand("bench", "Run a benchmark spec and print a comparison table");
  bench->add_option("spec", b.spec, "Benchmark spec file")->required()->check(CLI::ExistingFile);
  bench->add_option("--csv", b.csv, "Also write the table as CSV");

  GenArgs g;
  auto* gen = app.add_subcommand("gen-model", "Generate a synthetic model");
  gen->add_option("--locations", g.shape.locations)->check(CLI::PositiveNumber);
  gen->add_option("--transitions", g.shape.transitions);
  gen->add_option("--vars", g.shape.vars)->check(CLI::PositiveNumber);
  gen->add_option("--domain-width", g.shape.domain_width)->check(CLI::PositiveNumber);
  gen->add_option("--guard-atoms", g.shape.guard_atoms, "Mean atoms per guard");
  gen->add_option("--chain", g.shape.chain, "Length of the chained goal");
  gen->add_option("--seed", g.shape.seed);
  gen->add_option("--out", g.out, "Model file");

  ServeArgs s;
  auto* serve = app.add_subcommand("serve-sut", "Serve a simulated SUT over stdio or TCP");
  serve->add_option("model", s.model, "Model file")->required()->check(CLI::ExistingFile);
  serve->add_option("--policy", s.policy, "uniform | first | hostile");
  serve->add_option("--seed", s.seed);
  serve->add_option("--port", s.port, "TCP port (0 picks one); stdio when omitted");
  serve->add_option("--connections", s.connections, "Stop after this many connections");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kArtifactError;
  }

  try {
    if (*offline) return run_offline_cmd(off);
    if (*test) return run_test_cmd(t);
    if (*bench) return run_bench_cmd(b);
    if (*gen) return run_gen_cmd(g);
    if (*serve) return run_serve_cmd(s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kArtifactError;
  }
  return kArtifactError;
}

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xrpt/analysis/offline.hpp"
#include "xrpt/constraint/solver.hpp"
#include "xrpt/sut/session.hpp"

namespace xrpt {

/// What a tabu element fixes besides the transition.
enum class TabuDetail {
  /// Pre-state values, the input label and its parameters.
  StateAndInput,
  /// Pre-state values only; any input for the same move is blocked.
  State,
  /// Nothing: the transition is blocked for the trap in that location until
  /// the tabu list is emptied.
  Transition,
};
std::string_view to_string(TabuDetail d);
/// Throws Error on an unknown name.
TabuDetail parse_tabu_detail(std::string_view text);

struct EngineConfig {
  /// Candidates re-solved with Optimize_Model per decision.
  std::size_t candidates = 5;
  /// Step watchdog.
  std::size_t max_steps = 10'000;
  /// RPT hand-offs for a trap that end Stuck before the hand-off is no
  /// longer attempted for it.
  std::size_t rpt_stuck_limit = 3;
  TabuDetail tabu = TabuDetail::StateAndInput;
  SolveOptions solve;
  bool record_decisions = true;
};

/// Solution candidate (t, alpha_i, l_C, tr, f) with the parts of f.
struct Candidate {
  TransitionId transition;
  Assignment input;
  LocationId target_location;  // l_C
  TrapId trap;
  std::int64_t dist = 0;
  std::int64_t viol = 0;
  std::int64_t f = 0;
};

/// Heap order: f, then transition index, then l_C index, then trap index.
bool candidate_less(const Candidate& a, const Candidate& b);

/// One recorded move: transition, pre-state and the transmitted input.
struct TabuEntry {
  TransitionId transition;
  Assignment state;
  Assignment input;
  friend bool operator==(const TabuEntry&, const TabuEntry&) = default;
};

/// Tabu_{tr,l} lists and the L^T_tr sets.
class TabuStore {
 public:
  const std::vector<TabuEntry>& entries(TrapId tr, LocationId l) const;
  bool contains(TrapId tr, LocationId l, const TabuEntry& e) const;
  void add(TrapId tr, LocationId l, TabuEntry e);
  /// Empties Tabu_{tr,l} and adds l to L^T_tr.
  void clear(TrapId tr, LocationId l);
  bool emptied(TrapId tr, LocationId l) const;
  /// Conjunction of the negated entries of Tabu_{tr,l} recorded for t.
  Constraint negated_for(const EfsmModel& m, TrapId tr, LocationId l, TransitionId t) const;

 private:
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<TabuEntry>> lists_;
  std::set<std::pair<std::uint32_t, std::uint32_t>> emptied_;
};

/// The transition, pre-state and the label part of the input that identify a
/// move; parameters of other labels are dropped. With TabuDetail::State the
/// input is left empty, with TabuDetail::Transition both are.
TabuEntry make_move(const EfsmModel& m, TransitionId t, const Assignment& state, const Assignment& input,
                    TabuDetail detail = TabuDetail::StateAndInput);
/// actual when it is not yet recorded in `tabu`, otherwise best.
TabuEntry make_tabu_element(const TabuEntry& actual, const TabuEntry& best, const std::vector<TabuEntry>& tabu);

/// What happened in one state of the run.
struct Decision {
  enum class Kind { Candidates, Handoff, Discard };
  Kind kind = Kind::Candidates;
  EfsmState state;
  /// Handoff/Discard: the trap concerned.
  std::optional<TrapId> trap;
  /// Transitions of out(l) whose strengthened guard was unsatisfiable, per trap.
  std::vector<std::pair<TrapId, TransitionId>> excluded;
  /// Heap contents before optimization, in heap order.
  std::vector<Candidate> generated;
  /// Candidates after Optimize_Model, in examination order.
  std::vector<Candidate> optimized;
  std::optional<Candidate> chosen;
  double ms = 0;
};

enum class Verdict { Finished, Failed, Error };
std::string_view to_string(Verdict v);

struct TestReport {
  Verdict verdict = Verdict::Finished;
  std::string strategy;
  std::string goal;
  std::vector<TrapStatus> trap_status;  // goal traps, in goal order
  std::vector<std::string> trap_names;
  std::vector<ExecutedStep> path;
  std::vector<std::string> path_ids;
  std::size_t strategy_steps = 0;  // steps not taken by the RPT on-line algorithm
  std::size_t rpt_steps = 0;
  std::size_t decisions = 0;
  double offline_ms = 0;
  double online_ms = 0;
  double mean_decision_ms = 0;
  std::optional<Nonconformance> failure;
  std::string error;
  std::vector<Decision> log;

  bool all_covered() const;
  /// 0 all covered, 1 finished with uncovered or discarded traps, 2 failed,
  /// 3 artifact error.
  int exit_code() const;
  nlohmann::json to_json(const EfsmModel& m) const;
};

/// Fills path, per-trap statuses and the step split from a session.
void summarize(TestReport& report, const EfsmModel& m, const TestGoal& goal, const Session& session);

class Engine {
 public:
  Engine(const EfsmModel& m, const OfflineArtifacts& offline, const TestGoal& goal, EngineConfig config = {});

  /// Runs the on-line algorithm against `sut`, which must be at its initial
  /// state.
  TestReport run(SutPort& sut);
  /// Runs on an existing session (used for replays). Throws StepBudgetExceeded.
  Verdict run(Session& session, std::vector<Decision>* log);

  /// Subroutine #2 at the session's current state. Discarded traps are
  /// marked in the session. Returns candidates in heap order.
  std::vector<Candidate> generate_solution_candidates(Session& session, Decision* record);
  /// Subroutine #3.
  Candidate choose_most_promising(const std::vector<Candidate>& heap, const Session& session, Decision* record);
  /// Subroutine #4. Returns false on nonconformance.
  bool interact_with_sut(Session& session, const Candidate& best, double decision_ms);

  const TabuStore& tabu() const { return tabu_; }

 private:
  Constraint candidate_formula(const Session& s, TrapId tr, TransitionId t) const;
  Candidate score(const Session& s, TransitionId t, const Assignment& input, LocationId lc, TrapId tr) const;

  const EfsmModel& m_;
  const OfflineArtifacts& offline_;
  const TestGoal& goal_;
  EngineConfig config_;
  TabuStore tabu_;
  std::vector<Constraint> nnf_star_;  // per trap and location, flattened
  std::vector<VarId> inputs_;
};

}  // namespace xrpt

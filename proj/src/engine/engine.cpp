#include "xrpt/engine/engine.hpp"

#include <algorithm>
#include <chrono>

#include "xrpt/error.hpp"
#include "xrpt/rpt/online.hpp"

namespace xrpt {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

Constraint equals(VarId v, std::int64_t value) {
  return Constraint::compare(LinearExpr::variable(v), Relation::Eq, LinearExpr::constant(value));
}

nlohmann::json message_json(const Message& msg) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : msg.params) params[k] = v;
  return {{"label", msg.label}, {"params", params}};
}

}  // namespace

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.f != b.f) return a.f < b.f;
  if (a.transition != b.transition) return a.transition < b.transition;
  if (a.target_location != b.target_location) return a.target_location < b.target_location;
  return a.trap < b.trap;
}

const std::vector<TabuEntry>& TabuStore::entries(TrapId tr, LocationId l) const {
  static const std::vector<TabuEntry> kEmpty;
  auto it = lists_.find({tr.value, l.value});
  return it == lists_.end() ? kEmpty : it->second;
}

bool TabuStore::contains(TrapId tr, LocationId l, const TabuEntry& e) const {
  const auto& list = entries(tr, l);
  return std::find(list.begin(), list.end(), e) != list.end();
}

void TabuStore::add(TrapId tr, LocationId l, TabuEntry e) {
  if (!contains(tr, l, e)) lists_[{tr.value, l.value}].push_back(std::move(e));
}

void TabuStore::clear(TrapId tr, LocationId l) {
  lists_.erase({tr.value, l.value});
  emptied_.insert({tr.value, l.value});
}

bool TabuStore::emptied(TrapId tr, LocationId l) const { return emptied_.contains({tr.value, l.value}); }

Constraint TabuStore::negated_for(const EfsmModel& m, TrapId tr, LocationId l, TransitionId t) const {
  (void)m;
  std::vector<Constraint> parts;
  for (const TabuEntry& e : entries(tr, l)) {
    if (e.transition != t) continue;
    std::vector<Constraint> move;
    for (VarId v : e.state.variables()) move.push_back(equals(v, e.state.at(v)));
    for (VarId v : e.input.variables()) move.push_back(equals(v, e.input.at(v)));
    parts.push_back(!Constraint::conjunction(std::move(move)));
  }
  return Constraint::conjunction(std::move(parts));
}

std::string_view to_string(TabuDetail d) {
  switch (d) {
    case TabuDetail::StateAndInput: return "state-input";
    case TabuDetail::State: return "state";
    case TabuDetail::Transition: return "transition";
  }
  return "state-input";
}

TabuDetail parse_tabu_detail(std::string_view text) {
  if (text == "state") return TabuDetail::State;
  if (text == "state-input") return TabuDetail::StateAndInput;
  if (text == "transition") return TabuDetail::Transition;
  throw Error("unknown tabu detail '" + std::string(text) + "'");
}

TabuEntry make_move(const EfsmModel& m, TransitionId t, const Assignment& state, const Assignment& input,
                    TabuDetail detail) {
  if (detail == TabuDetail::Transition) return TabuEntry{t, Assignment{}, Assignment{}};
  if (detail == TabuDetail::State) return TabuEntry{t, state.restricted(m.state_vars()), Assignment{}};
  std::vector<VarId> keep{m.label_selector()};
  for (VarId p : m.inputs()[m.transition(t).input.index()].params) keep.push_back(p);
  return TabuEntry{t, state.restricted(m.state_vars()), input.restricted(keep)};
}

TabuEntry make_tabu_element(const TabuEntry& actual, const TabuEntry& best, const std::vector<TabuEntry>& tabu) {
  return std::find(tabu.begin(), tabu.end(), actual) == tabu.end() ? actual : best;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Finished: return "TEST_FINISHED";
    case Verdict::Failed: return "TEST_FAILED";
    case Verdict::Error: return "ERROR";
  }
  return "?";
}

bool TestReport::all_covered() const {
  return std::all_of(trap_status.begin(), trap_status.end(), [](TrapStatus s) { return s == TrapStatus::Covered; });
}

int TestReport::exit_code() const {
  switch (verdict) {
    case Verdict::Finished: return all_covered() ? 0 : 1;
    case Verdict::Failed: return 2;
    case Verdict::Error: return 3;
  }
  return 3;
}

nlohmann::json TestReport::to_json(const EfsmModel& m) const {
  using nlohmann::json;
  json traps = json::array();
  for (std::size_t k = 0; k < trap_names.size(); ++k)
    traps.push_back({{"name", trap_names[k]}, {"status", std::string(xrpt::to_string(trap_status[k]))}});
  json steps = json::array();
  for (const ExecutedStep& s : path) {
    json covered = json::array();
    for (TrapId t : s.covered) covered.push_back(m.trap(t).name);
    steps.push_back({{"transition", m.transition(s.transition).id},
                     {"input", message_json(s.input)},
                     {"output", message_json(s.output)},
                     {"origin", std::string(xrpt::to_string(s.origin))},
                     {"decision_ms", s.decision_ms},
                     {"covered", covered}});
  }
  json doc{{"verdict", std::string(xrpt::to_string(verdict))},
           {"strategy", strategy},
           {"goal", goal},
           {"traps", traps},
           {"path_length", path.size()},
           {"path", steps},
           {"online_split", {{"strategy", strategy_steps}, {"rpt", rpt_steps}}},
           {"decisions", decisions},
           {"offline_ms", offline_ms},
           {"online_ms", online_ms},
           {"mean_decision_ms", mean_decision_ms}};
  if (failure) {
    doc["failure"] = {{"location", m.location_name(failure->state.location)},
                      {"input", message_json(failure->input)},
                      {"observed", message_json(failure->observed)},
                      {"intended", m.transition(failure->intended).id}};
  }
  if (!error.empty()) doc["error"] = error;
  return doc;
}

void summarize(TestReport& report, const EfsmModel& m, const TestGoal& goal, const Session& session) {
  report.goal = goal.name;
  report.trap_names.clear();
  report.trap_status.clear();
  for (TrapId t : goal.traps) {
    report.trap_names.push_back(m.trap(t).name);
    report.trap_status.push_back(session.status(t));
  }
  report.path = session.path();
  report.path_ids.clear();
  report.strategy_steps = report.rpt_steps = 0;
  double total = 0;
  for (const ExecutedStep& s : report.path) {
    report.path_ids.push_back(m.transition(s.transition).id);
    (s.origin == StepOrigin::Rpt ? report.rpt_steps : report.strategy_steps) += 1;
    total += s.decision_ms;
  }
  report.mean_decision_ms = report.path.empty() ? 0 : total / static_cast<double>(report.path.size());
  report.failure = session.failure();
}

Engine::Engine(const EfsmModel& m, const OfflineArtifacts& offline, const TestGoal& goal, EngineConfig config)
    : m_(m), offline_(offline), goal_(goal), config_(config), inputs_(m.input_vars()) {
  if (config_.candidates == 0) throw Error("the candidate budget N must be at least 1");
  const std::size_t n = m.location_count();
  nnf_star_.assign(m.traps().size() * n, Constraint::falsity());
  for (TrapId tr : goal.traps)
    for (std::size_t l = 0; l < n; ++l)
      nnf_star_[tr.index() * n + l] = push_negations(offline.reachability(tr).c_star(LocationId{l}));
}

Constraint Engine::candidate_formula(const Session& s, TrapId tr, TransitionId t) const {
  std::vector<Constraint> parts{m_.guard_full(t), m_.post_domain(t)};
  for (TransitionId r : m_.rivals(t)) parts.push_back(!m_.guard_full(r));
  parts.push_back(tabu_.negated_for(m_, tr, s.state().location, t));
  return Constraint::conjunction(std::move(parts));
}

Candidate Engine::score(const Session& s, TransitionId t, const Assignment& input, LocationId lc, TrapId tr) const {
  const Transition& tx = m_.transition(t);
  Candidate c{t, input, lc, tr, 0, 0, 0};
  c.dist = 1 + static_cast<std::int64_t>(offline_.dist.at(tx.target, lc));
  const Assignment post = s.state().alpha.merged(update_values(m_, s.state(), t, input)).merged(s.trap_values());
  c.viol = violations_degree(nnf_star_[tr.index() * m_.location_count() + lc.index()], post);
  c.f = checked_add(checked_mul(c.dist, c.dist), checked_mul(c.viol, c.viol));
  return c;
}

std::vector<Candidate> Engine::generate_solution_candidates(Session& session, Decision* record) {
  const LocationId l = session.state().location;
  const Assignment context = session.state().alpha.merged(session.trap_values());
  std::vector<Candidate> heap;
  for (int run = 0; run < 2; ++run) {
    const TrapPartition part = update_neighbourhood(m_, goal_, session.statuses());
    for (TrapId tr : part.plus) {
      std::vector<Candidate> local;
      for (TransitionId t : m_.out(l)) {
        const auto input = sat_model(m_.vars(), inputs_, context, candidate_formula(session, tr, t), config_.solve);
        if (!input) {
          if (record && run == 0) record->excluded.emplace_back(tr, t);
          continue;
        }
        const Transition& tx = m_.transition(t);
        for (LocationId lc : offline_.neighbourhood.at(tr, l)) {
          if (run == 1 && tabu_.emptied(tr, tx.target) && tabu_.emptied(tr, tx.source)) continue;
          if (offline_.dist.at(tx.target, lc) == DistMatrix::kInfinity) continue;
          local.push_back(score(session, t, *input, lc, tr));
        }
      }
      if (!local.empty()) {
        heap.insert(heap.end(), local.begin(), local.end());
      } else if (run == 0) {
        tabu_.clear(tr, l);
      } else {
        session.set_discarded(tr);
      }
    }
    if (!heap.empty()) break;
  }
  std::sort(heap.begin(), heap.end(), candidate_less);
  if (record) record->generated = heap;
  return heap;
}

Candidate Engine::choose_most_promising(const std::vector<Candidate>& heap, const Session& session, Decision* record) {
  if (heap.empty()) throw Error("no solution candidates to choose from");
  const Assignment context = session.state().alpha.merged(session.trap_values());
  std::optional<Candidate> best;
  const std::size_t n = std::min(config_.candidates, heap.size());
  for (std::size_t k = 0; k < n; ++k) {
    const Candidate& c = heap[k];
    const Constraint objective =
        substitute(offline_.reachability(c.trap).c_star(c.target_location), m_.transition(c.transition).update);
    const auto input = optimize_model(m_.vars(), inputs_, context, candidate_formula(session, c.trap, c.transition),
                                      objective, config_.solve);
    const Candidate scored = input ? score(session, c.transition, *input, c.target_location, c.trap) : c;
    if (record) record->optimized.push_back(scored);
    if (!best || scored.f < best->f) best = scored;
  }
  if (record) record->chosen = best;
  return *best;
}

bool Engine::interact_with_sut(Session& session, const Candidate& best, double decision_ms) {
  const EfsmState before = session.state();
  const auto step = session.execute(best.transition, best.input, StepOrigin::Xrpt, decision_ms);
  if (!step.conformed()) return false;
  const TabuEntry actual = make_move(m_, *step.actual, before.alpha, best.input, config_.tabu);
  const TabuEntry planned = make_move(m_, best.transition, before.alpha, best.input, config_.tabu);
  tabu_.add(best.trap, before.location,
            make_tabu_element(actual, planned, tabu_.entries(best.trap, before.location)));
  return true;
}

Verdict Engine::run(Session& session, std::vector<Decision>* log) {
  std::vector<std::size_t> stuck(m_.traps().size(), 0);
  for (;;) {
    if (update_neighbourhood(m_, goal_, session.statuses()).plus.empty()) return Verdict::Finished;

    // Subroutine #1: hand over to the RPT on-line algorithm while some
    // reachability constraint holds.
    for (;;) {
      const TrapPartition part = update_neighbourhood(m_, goal_, session.statuses());
      const Assignment context = session.state().alpha.merged(session.trap_values());
      std::optional<TrapId> pick;
      int shortest = 0;
      for (TrapId tr : part.plus) {
        if (stuck[tr.index()] >= config_.rpt_stuck_limit) continue;
        const auto len = offline_.reachability(tr).satisfied_length(session.state().location, context);
        if (len && (!pick || *len < shortest)) {
          pick = tr;
          shortest = *len;
        }
      }
      if (!pick) break;
      if (log) {
        Decision d;
        d.kind = Decision::Kind::Handoff;
        d.state = session.state();
        d.trap = pick;
        log->push_back(std::move(d));
      }
      const RptResult r = rpt_online_step(m_, offline_.reachability(*pick), session, config_.solve);
      if (r.outcome == RptOutcome::Failed) return Verdict::Failed;
      if (r.outcome == RptOutcome::Stuck) {
        ++stuck[pick->index()];
        break;
      }
    }
    if (update_neighbourhood(m_, goal_, session.statuses()).plus.empty()) return Verdict::Finished;

    const auto start = Clock::now();
    Decision d;
    d.state = session.state();
    Decision* rec = log && config_.record_decisions ? &d : nullptr;
    const std::vector<TrapStatus> before = session.statuses();
    const auto heap = generate_solution_candidates(session, rec);
    if (log)
      for (std::size_t k = 0; k < before.size(); ++k)
        if (before[k] != session.statuses()[k]) {
          Decision discard;
          discard.kind = Decision::Kind::Discard;
          discard.state = session.state();
          discard.trap = TrapId{k};
          log->push_back(std::move(discard));
        }
    if (heap.empty()) continue;
    const Candidate best = choose_most_promising(heap, session, rec);
    d.ms = elapsed_ms(start);
    if (log && config_.record_decisions) log->push_back(std::move(d));
    if (!interact_with_sut(session, best, elapsed_ms(start))) return Verdict::Failed;
  }
}

TestReport Engine::run(SutPort& sut) {
  TestReport report;
  report.strategy = "xrpt";
  report.offline_ms = offline_.elapsed_ms;
  Session session(m_, sut, config_.max_steps);
  const auto start = Clock::now();
  try {
    report.verdict = run(session, config_.record_decisions ? &report.log : nullptr);
  } catch (const StepBudgetExceeded& e) {
    report.verdict = Verdict::Error;
    report.error = e.what();
  }
  report.online_ms = elapsed_ms(start);
  summarize(report, m_, goal_, session);
  report.decisions = static_cast<std::size_t>(
      std::count_if(report.log.begin(), report.log.end(), [](const Decision& d) { return d.kind == Decision::Kind::Candidates; }));
  if (!config_.record_decisions) report.decisions = report.strategy_steps;
  return report;
}

}  // namespace xrpt

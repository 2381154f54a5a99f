#include "xrpt/sut/simulated_sut.hpp"

#include <deque>
#include <limits>

#include "xrpt/error.hpp"

namespace xrpt {

namespace {

constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

std::vector<std::vector<std::uint32_t>> location_distances(const EfsmModel& m) {
  const std::size_t n = m.location_count();
  std::vector<std::vector<std::uint32_t>> dist(n, std::vector<std::uint32_t>(n, kUnreachable));
  for (std::size_t from = 0; from < n; ++from) {
    std::deque<std::size_t> queue{from};
    dist[from][from] = 0;
    while (!queue.empty()) {
      const std::size_t l = queue.front();
      queue.pop_front();
      for (TransitionId t : m.out(LocationId{l})) {
        const std::size_t next = m.transition(t).target.index();
        if (dist[from][next] != kUnreachable) continue;
        dist[from][next] = dist[from][l] + 1;
        queue.push_back(next);
      }
    }
  }
  return dist;
}

}  // namespace

std::string_view to_string(RivalPolicy p) {
  switch (p) {
    case RivalPolicy::Uniform: return "uniform";
    case RivalPolicy::First: return "first";
    case RivalPolicy::Hostile: return "hostile";
  }
  return "?";
}

RivalPolicy parse_rival_policy(std::string_view text) {
  if (text == "uniform") return RivalPolicy::Uniform;
  if (text == "first") return RivalPolicy::First;
  if (text == "hostile") return RivalPolicy::Hostile;
  throw Error("unknown rival policy '" + std::string(text) + "'");
}

SimulatedSut::SimulatedSut(EfsmModel model, RivalPolicy policy, std::uint64_t seed)
    : model_(std::move(model)), policy_(policy), seed_(seed), rng_(seed), state_(model_.initial_state()) {
  if (policy_ == RivalPolicy::Hostile) dist_ = location_distances(model_);
}

void SimulatedSut::reset() {
  state_ = model_.initial_state();
  rng_.seed(seed_);
  expected_.reset();
}

std::size_t SimulatedSut::pick(const std::vector<TransitionId>& enabled, const EfsmState& s, const Assignment& input) {
  if (enabled.size() == 1) return 0;
  switch (policy_) {
    case RivalPolicy::First: return 0;
    case RivalPolicy::Uniform: {
      std::uniform_int_distribution<std::size_t> d(0, enabled.size() - 1);
      return d(rng_);
    }
    case RivalPolicy::Hostile: {
      std::optional<std::size_t> intended;
      if (expected_)
        for (std::size_t k = 0; k < enabled.size(); ++k)
          if (output_message(model_, s, enabled[k], input) == *expected_) intended = k;
      if (!intended) return 0;
      const std::size_t aim = model_.transition(enabled[*intended]).target.index();
      std::size_t best = *intended;
      std::int64_t best_score = -1;
      for (std::size_t k = 0; k < enabled.size(); ++k) {
        if (k == *intended) continue;
        const std::uint32_t d = dist_[aim][model_.transition(enabled[k]).target.index()];
        const std::int64_t score = d == kUnreachable ? std::numeric_limits<std::int64_t>::max() : d;
        if (score > best_score) {
          best_score = score;
          best = k;
        }
      }
      return best;
    }
  }
  return 0;
}

Message SimulatedSut::send(const Message& input) {
  ++sends_;
  const Assignment in = input_assignment(model_, input);
  const auto en = enabled(model_, state_, in);
  if (en.empty()) {
    expected_.reset();
    return Message{kNoResponse, {}};
  }
  const TransitionId t = en[pick(en, state_, in)];
  expected_.reset();
  Message out = output_message(model_, state_, t, in);
  state_ = apply_transition(model_, state_, t, in);
  return out;
}

}  // namespace xrpt

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "xrpt/sut/sut_port.hpp"

namespace xrpt {

/// How a simulated SUT picks among several enabled transitions.
enum class RivalPolicy {
  /// Uniformly at random with the seeded generator.
  Uniform,
  /// First in declaration order.
  First,
  /// A transition whose output differs from the expected one, preferring the
  /// target farthest from the expected target in the control graph.
  Hostile,
};

std::string_view to_string(RivalPolicy p);
/// Throws Error on an unknown name.
RivalPolicy parse_rival_policy(std::string_view text);

/// In-process SUT executing an EFSM. The model may differ from the tester's.
class SimulatedSut : public SutPort {
 public:
  SimulatedSut(EfsmModel model, RivalPolicy policy = RivalPolicy::Uniform, std::uint64_t seed = 0);

  void reset() override;
  /// Throws UnknownLabelError for a label outside the model's inputs.
  Message send(const Message& input) override;
  void expect(const Message& output) override { expected_ = output; }

  const EfsmState& state() const { return state_; }
  const EfsmModel& model() const { return model_; }
  std::size_t sends() const { return sends_; }

 private:
  std::size_t pick(const std::vector<TransitionId>& enabled, const EfsmState& s, const Assignment& input);

  EfsmModel model_;
  RivalPolicy policy_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  EfsmState state_;
  std::optional<Message> expected_;
  std::vector<std::vector<std::uint32_t>> dist_;
  std::size_t sends_ = 0;
};

}  // namespace xrpt

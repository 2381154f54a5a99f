#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "xrpt/efsm/model.hpp"
#include "xrpt/error.hpp"
#include "xrpt/sut/session.hpp"

namespace xrpt {

class InfeasibleShape : public Error {
 public:
  using Error::Error;
};

struct SyntheticShape {
  std::size_t locations = 13;
  std::size_t transitions = 43;
  std::size_t vars = 10;
  std::int64_t domain_width = 32'000;
  /// Mean number of atoms per guard; most atoms mention two variables.
  double guard_atoms = 4.0;
  /// Traps in the generated "chain" sequence goal; 0 for none.
  std::size_t chain = 6;
  std::uint64_t seed = 0;
};

/// Connected, output-observable model with unit-coefficient guards over
/// state variables and two parameters per input label. When transitions >=
/// locations a Hamiltonian cycle keeps the control graph strongly connected.
/// The "chain" goal follows transitions of a feasible random walk in order.
/// Throws InfeasibleShape.
EfsmModel generate_synthetic_model(const SyntheticShape& shape);

/// Small random model: up to 6 locations, up to 2 state variables on [0,5],
/// at most one input parameter on [0,5], one trap with goal "trap". Every
/// location is reachable in the control graph.
EfsmModel generate_small_model(std::uint64_t seed);

enum class MutantKind { LabelSwap, GuardWidening };

struct Mutant {
  EfsmModel model;
  MutantKind kind;
  std::string transition;
  std::string description;
};

/// Mutant SUT model that a tester repeating `path` (steps executed from the
/// initial state against the original model) must catch. Only steps where
/// the executed transition was the single enabled one are mutated. A label
/// swap gives that transition an output no transition of its source emits; a
/// guard widening makes a same-input sibling always enabled, so a hostile SUT
/// takes it there. nullopt when no step qualifies.
std::optional<Mutant> make_mutant(const EfsmModel& m, const std::vector<ExecutedStep>& path, MutantKind kind,
                                  std::mt19937_64& rng);

}  // namespace xrpt

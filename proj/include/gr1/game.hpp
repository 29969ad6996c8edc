#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gr1/counterstrategy.hpp"
#include "gr1/formula.hpp"
#include "gr1/predicate.hpp"

namespace gr1 {

struct GameOptions {
  std::size_t var_cap = 16;
};

using State = std::uint64_t;

/// Explicit game graph. A state packs the inputs into the low bits and the
/// outputs above them: `s = x | (y << input_count())`.
class Arena {
 public:
  Arena(const Gr1Spec& spec, const GameOptions& options);

  const std::shared_ptr<const Universe>& universe() const noexcept { return universe_; }
  unsigned input_count() const noexcept { return nx_; }
  unsigned output_count() const noexcept { return ny_; }
  std::size_t state_count() const noexcept { return std::size_t{1} << (nx_ + ny_); }
  State compose(std::uint64_t x, std::uint64_t y) const noexcept { return x | (y << nx_); }
  std::uint64_t inputs_of(State s) const noexcept { return s & ((std::uint64_t{1} << nx_) - 1); }
  std::uint64_t outputs_of(State s) const noexcept { return s >> nx_; }

  /// Input valuation x' allowed by the assumption invariants from s.
  bool env_ok(State s, std::uint64_t x) const;
  /// Transition s -> t allowed by the guarantee invariants.
  bool sys_ok(State s, State t) const;

  std::vector<std::uint64_t> env_moves(State s) const;
  std::vector<std::uint64_t> sys_moves(State s, std::uint64_t x) const;

  bool env_init(State s) const { return env_init_(s); }
  bool sys_init(State s) const { return sys_init_(s); }

  /// Fairness predicates; a side without fairness conditions gets a single
  /// predicate that is always true.
  std::size_t env_fair_count() const noexcept { return std::max<std::size_t>(1, env_fair_.size()); }
  std::size_t sys_fair_count() const noexcept { return std::max<std::size_t>(1, sys_fair_.size()); }
  bool env_fair(std::size_t i, State s) const { return env_fair_.empty() || env_fair_[i](s); }
  bool sys_fair(std::size_t j, State s) const { return sys_fair_.empty() || sys_fair_[j](s); }

 private:
  std::shared_ptr<const Universe> universe_;
  unsigned nx_ = 0;
  unsigned ny_ = 0;
  Conjunction env_init_;
  Conjunction sys_init_;
  Conjunction env_inv_;
  Conjunction sys_inv_;
  std::vector<Predicate> env_fair_;
  std::vector<Predicate> sys_fair_;
  // Cached move relations for small arenas; empty when evaluated lazily.
  std::vector<std::uint64_t> env_table_;
  std::vector<std::uint64_t> sys_table_;
};

/// Throws CapExceeded above the variable cap and SpecError for assumption
/// invariants that read next-state outputs.
Arena build_arena(const Gr1Spec& spec, const GameOptions& options = {});

/// Solves the game once; realizability and counterstrategy extraction share
/// the fixpoints.
class GameSolver {
 public:
  explicit GameSolver(const Gr1Spec& spec, const GameOptions& options = {});
  ~GameSolver();
  GameSolver(GameSolver&&) noexcept;
  GameSolver& operator=(GameSolver&&) noexcept;

  const Arena& arena() const noexcept;
  bool realizable() const noexcept;

  /// States from which the system wins.
  const std::vector<char>& winning_region() const noexcept;
  /// States from which the environment can keep every assumption whatever the
  /// system does.
  const std::vector<char>& assumption_region() const noexcept;

  /// Throws RealizableSpec if the specification is realizable.
  Counterstrategy counterstrategy() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool realizable(const Gr1Spec& spec, const GameOptions& options = {});

Counterstrategy compute_counterstrategy(const Gr1Spec& spec, const GameOptions& options = {});

/// True iff some infinite word over `variables` satisfies every element.
bool assumptions_satisfiable(std::span<const Gr1Element> assumptions,
                             std::span<const Variable> variables,
                             const GameOptions& options = {});

}  // namespace gr1

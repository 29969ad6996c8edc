#pragma once

#include <span>
#include <string>
#include <vector>

#include "gr1/counterstrategy.hpp"
#include "gr1/formula.hpp"
#include "gr1/game.hpp"

namespace gr1 {

struct BiasConfig {
  std::size_t width = 5;
  bool fairness = true;
  bool invariant = true;
  bool initial = true;
  /// Literals allowed left of the implication in invariant templates.
  std::size_t max_left_literals = 1;
};

struct Template {
  Gr1Element element;
  std::string canonical;
  /// Number of literals.
  std::size_t size = 0;
};

/// Candidate assumptions in generation order: GF over input literals, GF over
/// output literals, G (L -> X l) with l an input literal, then input literals
/// as initial conditions. Within each group variables keep declaration order
/// and a variable's positive literal comes right before its negative one.
std::vector<Template> enumerate_templates(const Gr1Spec& spec, const BiasConfig& config);

/// Up to `width` templates, ordered by size then canonical form, that
/// eliminate `c`, are not already assumed, and keep the specification's
/// assumptions plus `current` satisfiable.
std::vector<Gr1Element> apply_bias(const Counterstrategy& c, std::span<const Gr1Element> current,
                                   const Gr1Spec& spec, const BiasConfig& config,
                                   const GameOptions& options = {});

}  // namespace gr1

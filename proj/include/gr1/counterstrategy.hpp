#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gr1/formula.hpp"

namespace gr1 {

using StateId = std::uint32_t;

/// Environment strategy as a finite labelled transition system. Every state is
/// labelled with a valuation over the spec variables followed by the memory
/// variables.
struct Counterstrategy {
  std::shared_ptr<const Universe> universe;
  std::vector<std::string> memory_vars;
  std::vector<std::uint64_t> labels;
  std::vector<std::vector<StateId>> successors;
  std::vector<StateId> initial;

  std::size_t size() const noexcept { return labels.size(); }
  Valuation label(StateId q) const { return {universe, labels.at(q)}; }
};

/// Structural problems (empty initial set, dangling ids, reachable states
/// without successors, unknown memory variables). Empty when well formed.
std::vector<std::string> validate(const Counterstrategy& c);

/// Graphviz rendering; nodes list their true variables, initial nodes are
/// drawn with a double border.
std::string to_dot(const Counterstrategy& c);

/// `{states:[{id,label:{var:bool}}], transitions:[[from,to]], initial:[id],
/// memory_vars:[string]}` with labels in universe order.
std::string to_json(const Counterstrategy& c, int indent = 2);

/// Inverse of to_json. Throws std::invalid_argument on schema violations.
Counterstrategy counterstrategy_from_json(std::string_view text);

}  // namespace gr1

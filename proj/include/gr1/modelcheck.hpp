#pragma once

#include <vector>

#include "gr1/counterstrategy.hpp"
#include "gr1/formula.hpp"

namespace gr1 {

/// Ids reachable from the initial states, ascending.
std::vector<StateId> reachable(const Counterstrategy& c);

/// True iff every play of `c` satisfies `a`. Throws std::invalid_argument if
/// `a` mentions a memory variable or a name outside the labelling, or if a
/// reachable state has no successor.
bool satisfies(const Counterstrategy& c, const Gr1Element& a);

inline bool eliminates(const Gr1Element& a, const Counterstrategy& c) { return !satisfies(c, a); }

}  // namespace gr1

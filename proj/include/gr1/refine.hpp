#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "gr1/counterstrategy.hpp"
#include "gr1/formula.hpp"

namespace gr1 {

using CounterstrategyId = std::uint32_t;
using IdSet = std::set<CounterstrategyId>;

/// A candidate refinement: assumption i eliminates exactly the
/// counterstrategies in eliminated[i] among those observed so far.
struct RefinementEntry {
  std::vector<Gr1Element> assumptions;
  std::vector<IdSet> eliminated;

  std::size_t size() const noexcept { return assumptions.size(); }
  /// Union of all eliminated sets.
  IdSet covered() const;

  friend bool operator==(const RefinementEntry&, const RefinementEntry&) = default;
};

/// Returns true iff counterstrategy `id` violates the element.
using EliminationCheck = std::function<bool(CounterstrategyId, const Gr1Element&)>;

/// Number of sets that contain `c`.
std::size_t count_sets(std::span<const IdSet> sets, CounterstrategyId c);

/// Appends `add` with the set of counterstrategies among covered() plus `fresh`
/// that it eliminates, without removing anything. Throws
/// std::invalid_argument if `fresh` is already covered or `add` does not
/// eliminate it.
RefinementEntry extend_refinement(const RefinementEntry& entry, const Gr1Element& add,
                                  CounterstrategyId fresh, const EliminationCheck& check);

/// extend_refinement followed by a single ascending pass that drops every
/// earlier assumption whose counterstrategies are all eliminated by some
/// other kept assumption.
RefinementEntry minimal_refinement(const RefinementEntry& entry, const Gr1Element& add,
                                   CounterstrategyId fresh, const EliminationCheck& check);

/// Every counterstrategy of assumption i is eliminated by at least one other
/// assumption. Throws std::out_of_range for a bad index.
bool is_redundant(std::size_t i, const RefinementEntry& entry);

bool is_minimal(const RefinementEntry& entry);

/// For all i and all covered c: c in eliminated[i] iff check(c, assumption i).
bool edge_consistent(const RefinementEntry& entry, const EliminationCheck& check);

/// Assumption/counterstrategy incidence graph in Graphviz syntax.
std::string bipartite_dot(const RefinementEntry& entry);

/// Counterstrategies of one search, numbered densely from 0 in insertion
/// order. Safe for concurrent readers with one writer.
class CounterstrategyStore {
 public:
  CounterstrategyId add(Counterstrategy c);
  /// References stay valid for the lifetime of the store.
  const Counterstrategy& get(CounterstrategyId id) const;
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::deque<Counterstrategy> items_;
};

/// Memoized model checking of (counterstrategy, assumption) pairs keyed by
/// canonical form. Thread safe.
class EliminationCache {
 public:
  explicit EliminationCache(const CounterstrategyStore& store) : store_(store) {}

  bool operator()(CounterstrategyId id, const Gr1Element& a) const;
  std::size_t size() const;

 private:
  const CounterstrategyStore& store_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::pair<CounterstrategyId, std::string>, bool> memo_;
};

}  // namespace gr1

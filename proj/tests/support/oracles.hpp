#pragma once

// Reference implementations used to cross-check the library. They are written
// for clarity over speed and share no code with src/ beyond the data types.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gr1/counterstrategy.hpp"
#include "gr1/formula.hpp"
#include "gr1/refine.hpp"

namespace oracle {

using Assignment = std::map<std::string, bool>;

/// Recursive evaluation over name maps. Missing names throw std::out_of_range.
bool eval(const gr1::Expr& e, const Assignment& now, const Assignment& next = {});

/// All 2^n assignments of `names`, in counting order (names[0] is bit 0).
std::vector<Assignment> all_assignments(const std::vector<std::string>& names);

/// Closure of an adjacency matrix by repeated boolean squaring; the result
/// has r[i][j] set iff j is reachable from i in one or more steps.
std::vector<std::vector<char>> transitive_closure(std::vector<std::vector<char>> adj);

/// Reachable ids of `c` (including the initial states), computed from the
/// matrix closure.
std::vector<gr1::StateId> reachable(const gr1::Counterstrategy& c);

/// Finite labelled graph whose infinite paths from an initial node are the
/// words under consideration.
struct Graph {
  std::vector<Assignment> labels;
  std::vector<std::vector<std::size_t>> successors;
  std::vector<std::size_t> initial;
};

Graph graph_of(const gr1::Counterstrategy& c);

/// Word stem . loop^omega; loop is non-empty and its last node steps back to
/// loop.front().
struct Lasso {
  std::vector<std::size_t> stem;
  std::vector<std::size_t> loop;
};

/// Truth of `a` on the word spelled by `lasso`, straight from the semantics
/// of initial, invariant and fairness conditions.
bool holds_on(const Graph& g, const Lasso& lasso, const gr1::Gr1Element& a);

/// Enumerates every lasso of `c` whose nodes are pairwise distinct and whose
/// length is at most `max_len`; true iff none violates `a`. Throws
/// std::invalid_argument when max_len < 2|Q|+1.
bool lasso_oracle(const gr1::Counterstrategy& c, const gr1::Gr1Element& a, std::size_t max_len);

/// A lasso of `c` violating `a`, built by graph search, or nullopt.
std::optional<Lasso> violating_lasso(const gr1::Counterstrategy& c, const gr1::Gr1Element& a);

/// A lasso of `g` from an initial node satisfying every element, found by
/// searching (node, fairness-mask) pairs; nullopt if none exists.
std::optional<Lasso> satisfying_lasso(const Graph& g, std::span<const gr1::Gr1Element> elements);

/// Graph of all valuations of `variables` with every transition allowed.
Graph complete_graph(std::span<const gr1::Variable> variables);

/// Definition of redundancy applied directly: every observed counterstrategy
/// violates the conjunction of the other assumptions, according to `table`.
bool redundant_by_definition(std::size_t i, const gr1::RefinementEntry& entry,
                             const gr1::EliminationCheck& table);

/// Deletes each assumption in turn and re-checks that the rest still covers
/// every observed counterstrategy; minimal iff no deletion does.
bool minimal_by_deletion(const gr1::RefinementEntry& entry, const gr1::EliminationCheck& table);

}  // namespace oracle

namespace gen {

using Rng = std::mt19937_64;

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }
inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Random expression over `names`; `Next` leaves draw from `next_names`.
gr1::Expr expr(Rng& rng, const std::vector<std::string>& names,
               const std::vector<std::string>& next_names, int depth);

/// Random initial, invariant or fairness element over `names`.
gr1::Gr1Element element(Rng& rng, const std::vector<std::string>& names, int depth = 3);

/// Random counterstrategy over `names` plus up to one memory variable, with
/// 1..max_states states and 1..max_out successors per state.
gr1::Counterstrategy counterstrategy(Rng& rng, const std::vector<std::string>& names,
                                     std::size_t max_states, std::size_t max_out = 3);

/// Random specification with 2..max_vars variables (at least one input and
/// one output) and at most max_fair fairness conditions per side. Assumption
/// invariants only read next inputs.
gr1::Gr1Spec spec(Rng& rng, std::size_t max_vars = 4, std::size_t max_fair = 2);

/// Mock refinement instance: assumptions GF v0, GF v1, ... with a random
/// elimination table, an entry consistent with it, and a fresh
/// counterstrategy that only `add` eliminates.
struct BipartiteInstance {
  std::vector<gr1::Gr1Element> assumptions;
  gr1::Gr1Element add;
  std::map<std::string, std::set<gr1::CounterstrategyId>> table;  // by canonical form
  gr1::RefinementEntry entry;
  gr1::CounterstrategyId fresh = 0;

  gr1::EliminationCheck check() const;
};

BipartiteInstance bipartite(Rng& rng, std::size_t max_assumptions = 6, std::size_t max_cs = 8);

}  // namespace gen

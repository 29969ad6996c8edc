#include "gr1/modelcheck.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "gr1/predicate.hpp"

namespace gr1 {

namespace {

std::vector<char> reachable_mask(const Counterstrategy& c) {
  std::vector<char> seen(c.size(), 0);
  std::deque<StateId> frontier;
  for (StateId q : c.initial) {
    if (q >= c.size()) throw std::invalid_argument("initial state out of range");
    if (!seen[q]) {
      seen[q] = 1;
      frontier.push_back(q);
    }
  }
  while (!frontier.empty()) {
    const StateId q = frontier.front();
    frontier.pop_front();
    for (StateId t : c.successors.at(q)) {
      if (t >= c.size()) throw std::invalid_argument("transition target out of range");
      if (!seen[t]) {
        seen[t] = 1;
        frontier.push_back(t);
      }
    }
  }
  return seen;
}

void check_vocabulary(const Counterstrategy& c, const Gr1Element& a) {
  for (const std::string& name : variables_of(a.body)) {
    if (name.starts_with("_mem_") ||
        std::find(c.memory_vars.begin(), c.memory_vars.end(), name) != c.memory_vars.end()) {
      throw std::invalid_argument("'" + name + "' is a memory variable");
    }
    if (!c.universe->index_of(name)) {
      throw std::invalid_argument("'" + name + "' is not labelled by the counterstrategy");
    }
  }
}

// Kahn's algorithm on the subgraph induced by `inside`; leftovers lie on or
// lead into a cycle.
bool has_cycle(const Counterstrategy& c, const std::vector<char>& inside) {
  std::vector<std::size_t> indegree(c.size(), 0);
  std::size_t remaining = 0;
  for (std::size_t q = 0; q < c.size(); ++q) {
    if (!inside[q]) continue;
    ++remaining;
    for (StateId t : c.successors[q]) {
      if (inside[t]) ++indegree[t];
    }
  }
  std::vector<StateId> ready;
  for (std::size_t q = 0; q < c.size(); ++q) {
    if (inside[q] && indegree[q] == 0) ready.push_back(static_cast<StateId>(q));
  }
  while (!ready.empty()) {
    const StateId q = ready.back();
    ready.pop_back();
    --remaining;
    for (StateId t : c.successors[q]) {
      if (inside[t] && --indegree[t] == 0) ready.push_back(t);
    }
  }
  return remaining != 0;
}

}  // namespace

std::vector<StateId> reachable(const Counterstrategy& c) {
  const std::vector<char> seen = reachable_mask(c);
  std::vector<StateId> out;
  for (std::size_t q = 0; q < seen.size(); ++q) {
    if (seen[q]) out.push_back(static_cast<StateId>(q));
  }
  return out;
}

bool satisfies(const Counterstrategy& c, const Gr1Element& a) {
  if (!c.universe) throw std::invalid_argument("counterstrategy without universe");
  check_vocabulary(c, a);
  const std::vector<char> seen = reachable_mask(c);
  for (std::size_t q = 0; q < seen.size(); ++q) {
    if (seen[q] && c.successors[q].empty()) {
      throw std::invalid_argument("reachable state " + std::to_string(q) + " has no successor");
    }
  }
  const Predicate body(a.body, *c.universe);
  switch (a.kind) {
    case ElementClass::Initial:
      return std::all_of(c.initial.begin(), c.initial.end(),
                         [&](StateId q) { return body(c.labels[q]); });
    case ElementClass::Invariant:
      for (std::size_t q = 0; q < c.size(); ++q) {
        if (!seen[q]) continue;
        for (StateId t : c.successors[q]) {
          if (!body(c.labels[q], c.labels[t])) return false;
        }
      }
      return true;
    case ElementClass::Fairness: {
      std::vector<char> bad(c.size(), 0);
      for (std::size_t q = 0; q < c.size(); ++q) bad[q] = seen[q] && !body(c.labels[q]);
      return !has_cycle(c, bad);
    }
  }
  return false;
}

}  // namespace gr1

#include "gr1/refine.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "gr1/modelcheck.hpp"

namespace gr1 {

IdSet RefinementEntry::covered() const {
  IdSet out;
  for (const IdSet& s : eliminated) out.insert(s.begin(), s.end());
  return out;
}

std::size_t count_sets(std::span<const IdSet> sets, CounterstrategyId c) {
  return static_cast<std::size_t>(
      std::count_if(sets.begin(), sets.end(), [c](const IdSet& s) { return s.contains(c); }));
}

RefinementEntry extend_refinement(const RefinementEntry& entry, const Gr1Element& add,
                                  CounterstrategyId fresh, const EliminationCheck& check) {
  if (entry.assumptions.size() != entry.eliminated.size()) {
    throw std::invalid_argument("assumption and eliminated lists differ in length");
  }
  IdSet seen = entry.covered();
  if (seen.contains(fresh)) {
    throw std::invalid_argument("counterstrategy " + std::to_string(fresh) +
                                " is already eliminated by the refinement");
  }
  if (!check(fresh, add)) {
    throw std::invalid_argument("'" + canonical_form(add) +
                                "' does not eliminate counterstrategy " + std::to_string(fresh));
  }
  IdSet killed{fresh};
  for (CounterstrategyId c : seen) {
    if (check(c, add)) killed.insert(c);
  }
  RefinementEntry out = entry;
  out.assumptions.push_back(add);
  out.eliminated.push_back(std::move(killed));
  return out;
}

RefinementEntry minimal_refinement(const RefinementEntry& entry, const Gr1Element& add,
                                   CounterstrategyId fresh, const EliminationCheck& check) {
  RefinementEntry grown = extend_refinement(entry, add, fresh, check);
  std::map<CounterstrategyId, std::size_t> degree;
  for (const IdSet& s : grown.eliminated) {
    for (CounterstrategyId c : s) ++degree[c];
  }
  const std::size_t k = entry.size();
  std::vector<char> removed(grown.size(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    const IdSet& ci = grown.eliminated[i];
    const bool redundant =
        std::all_of(ci.begin(), ci.end(), [&](CounterstrategyId c) { return degree[c] >= 2; });
    if (!redundant) continue;
    removed[i] = 1;
    for (CounterstrategyId c : ci) --degree[c];
  }
  RefinementEntry out;
  for (std::size_t i = 0; i < grown.size(); ++i) {
    if (removed[i]) continue;
    out.assumptions.push_back(std::move(grown.assumptions[i]));
    out.eliminated.push_back(std::move(grown.eliminated[i]));
  }
  return out;
}

bool is_redundant(std::size_t i, const RefinementEntry& entry) {
  if (i >= entry.eliminated.size()) throw std::out_of_range("assumption index out of range");
  const IdSet& ci = entry.eliminated[i];
  return std::all_of(ci.begin(), ci.end(), [&](CounterstrategyId c) {
    return count_sets(entry.eliminated, c) >= 2;
  });
}

bool is_minimal(const RefinementEntry& entry) {
  for (std::size_t i = 0; i < entry.eliminated.size(); ++i) {
    if (is_redundant(i, entry)) return false;
  }
  return true;
}

bool edge_consistent(const RefinementEntry& entry, const EliminationCheck& check) {
  if (entry.assumptions.size() != entry.eliminated.size()) return false;
  const IdSet all = entry.covered();
  for (std::size_t i = 0; i < entry.size(); ++i) {
    for (CounterstrategyId c : all) {
      if (entry.eliminated[i].contains(c) != check(c, entry.assumptions[i])) return false;
    }
  }
  return true;
}

std::string bipartite_dot(const RefinementEntry& entry) {
  std::ostringstream out;
  out << "graph refinement {\n";
  for (std::size_t i = 0; i < entry.size(); ++i) {
    std::string label = to_string(entry.assumptions[i]);
    std::string escaped;
    for (char ch : label) {
      if (ch == '"' || ch == '\\') escaped += '\\';
      escaped += ch;
    }
    out << "  a" << i << " [shape=box, label=\"" << escaped << "\"];\n";
  }
  for (CounterstrategyId c : entry.covered()) {
    out << "  c" << c << " [shape=ellipse, label=\"c" << c << "\"];\n";
  }
  for (std::size_t i = 0; i < entry.size(); ++i) {
    for (CounterstrategyId c : entry.eliminated[i]) out << "  a" << i << " -- c" << c << ";\n";
  }
  out << "}\n";
  return out.str();
}

CounterstrategyId CounterstrategyStore::add(Counterstrategy c) {
  std::unique_lock lock(mutex_);
  items_.push_back(std::move(c));
  return static_cast<CounterstrategyId>(items_.size() - 1);
}

const Counterstrategy& CounterstrategyStore::get(CounterstrategyId id) const {
  std::shared_lock lock(mutex_);
  return items_.at(id);
}

std::size_t CounterstrategyStore::size() const {
  std::shared_lock lock(mutex_);
  return items_.size();
}

bool EliminationCache::operator()(CounterstrategyId id, const Gr1Element& a) const {
  auto key = std::make_pair(id, canonical_form(a));
  {
    std::shared_lock lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  const bool result = eliminates(a, store_.get(id));
  std::unique_lock lock(mutex_);
  memo_.emplace(std::move(key), result);
  return result;
}

std::size_t EliminationCache::size() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

}  // namespace gr1

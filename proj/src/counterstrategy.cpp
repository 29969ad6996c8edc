#include "gr1/counterstrategy.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gr1 {

std::vector<std::string> validate(const Counterstrategy& c) {
  std::vector<std::string> problems;
  if (!c.universe) {
    problems.emplace_back("missing universe");
    return problems;
  }
  if (c.successors.size() != c.labels.size()) {
    problems.emplace_back("successor table size differs from state count");
    return problems;
  }
  if (c.initial.empty()) problems.emplace_back("no initial states");
  const std::size_t n = c.size();
  for (StateId q : c.initial) {
    if (q >= n) problems.push_back("initial state " + std::to_string(q) + " out of range");
  }
  for (std::size_t q = 0; q < n; ++q) {
    for (StateId t : c.successors[q]) {
      if (t >= n) {
        problems.push_back("transition " + std::to_string(q) + " -> " +
                           std::to_string(t) + " out of range");
      }
    }
  }
  const std::size_t width = c.universe->size();
  if (width < 64) {
    for (std::size_t q = 0; q < n; ++q) {
      if (c.labels[q] >> width) {
        problems.push_back("label of state " + std::to_string(q) +
                           " sets bits outside the universe");
      }
    }
  }
  for (const std::string& m : c.memory_vars) {
    if (!c.universe->index_of(m)) problems.push_back("memory variable '" + m + "' not in universe");
  }
  if (!problems.empty()) return problems;

  std::vector<bool> seen(n, false);
  std::deque<StateId> frontier(c.initial.begin(), c.initial.end());
  for (StateId q : c.initial) seen[q] = true;
  while (!frontier.empty()) {
    const StateId q = frontier.front();
    frontier.pop_front();
    if (c.successors[q].empty()) {
      problems.push_back("reachable state " + std::to_string(q) + " has no successor");
    }
    for (StateId t : c.successors[q]) {
      if (!seen[t]) {
        seen[t] = true;
        frontier.push_back(t);
      }
    }
  }
  return problems;
}

std::string to_dot(const Counterstrategy& c) {
  std::ostringstream out;
  out << "digraph counterstrategy {\n  rankdir=LR;\n  node [shape=ellipse];\n";
  for (std::size_t q = 0; q < c.size(); ++q) {
    out << "  " << q << " [label=\"{";
    bool first = true;
    for (std::size_t b = 0; b < c.universe->size(); ++b) {
      if (((c.labels[q] >> b) & 1U) == 0) continue;
      if (!first) out << ", ";
      out << c.universe->name(b);
      first = false;
    }
    out << "}\"";
    if (std::find(c.initial.begin(), c.initial.end(), q) != c.initial.end()) {
      out << ", peripheries=2";
    }
    out << "];\n";
  }
  for (std::size_t q = 0; q < c.size(); ++q) {
    for (StateId t : c.successors[q]) out << "  " << q << " -> " << t << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_json(const Counterstrategy& c, int indent) {
  nlohmann::ordered_json doc;
  doc["states"] = nlohmann::ordered_json::array();
  for (std::size_t q = 0; q < c.size(); ++q) {
    nlohmann::ordered_json label = nlohmann::ordered_json::object();
    for (std::size_t b = 0; b < c.universe->size(); ++b) {
      label[c.universe->name(b)] = ((c.labels[q] >> b) & 1U) != 0;
    }
    doc["states"].push_back({{"id", q}, {"label", std::move(label)}});
  }
  doc["transitions"] = nlohmann::ordered_json::array();
  for (std::size_t q = 0; q < c.size(); ++q) {
    for (StateId t : c.successors[q]) doc["transitions"].push_back({q, t});
  }
  doc["initial"] = c.initial;
  doc["memory_vars"] = c.memory_vars;
  return doc.dump(indent);
}

Counterstrategy counterstrategy_from_json(std::string_view text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("counterstrategy JSON: ") + e.what());
  }
  auto require = [&doc](const char* key, bool (nlohmann::ordered_json::*is)() const noexcept) {
    if (!doc.contains(key) || !(doc[key].*is)()) {
      throw std::invalid_argument(std::string("counterstrategy JSON: missing or malformed '") +
                                  key + "'");
    }
  };
  require("states", &nlohmann::ordered_json::is_array);
  require("transitions", &nlohmann::ordered_json::is_array);
  require("initial", &nlohmann::ordered_json::is_array);
  require("memory_vars", &nlohmann::ordered_json::is_array);

  Counterstrategy c;
  std::vector<std::string> names;
  std::map<long long, StateId> ids;
  try {
    for (const auto& state : doc["states"]) {
      const long long id = state.at("id").get<long long>();
      const auto& label = state.at("label");
      if (!label.is_object()) throw std::invalid_argument("label must be an object");
      if (names.empty() && ids.empty()) {
        for (const auto& [name, value] : label.items()) names.push_back(name);
      }
      if (!ids.emplace(id, static_cast<StateId>(ids.size())).second) {
        throw std::invalid_argument("duplicate state id " + std::to_string(id));
      }
      if (label.size() != names.size()) {
        throw std::invalid_argument("labels must assign every variable");
      }
      std::uint64_t bits = 0;
      for (std::size_t b = 0; b < names.size(); ++b) {
        if (!label.contains(names[b])) {
          throw std::invalid_argument("label of state " + std::to_string(id) +
                                      " lacks '" + names[b] + "'");
        }
        if (label[names[b]].get<bool>()) bits |= std::uint64_t{1} << b;
      }
      c.labels.push_back(bits);
    }
    c.universe = std::make_shared<const Universe>(names);
    c.successors.resize(c.labels.size());
    auto lookup = [&ids](long long id) {
      auto it = ids.find(id);
      if (it == ids.end()) throw std::invalid_argument("unknown state id " + std::to_string(id));
      return it->second;
    };
    for (const auto& t : doc["transitions"]) {
      if (!t.is_array() || t.size() != 2) {
        throw std::invalid_argument("transitions must be [from, to] pairs");
      }
      c.successors[lookup(t[0].get<long long>())].push_back(lookup(t[1].get<long long>()));
    }
    for (const auto& q : doc["initial"]) c.initial.push_back(lookup(q.get<long long>()));
    for (const auto& m : doc["memory_vars"]) c.memory_vars.push_back(m.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("counterstrategy JSON: ") + e.what());
  }
  return c;
}

}  // namespace gr1

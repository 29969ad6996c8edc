#include "gr1/replay.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "json.hpp"

namespace gr1 {

namespace {

using Json = nlohmann::ordered_json;

const Json& field(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw TraceError(std::string("trace lacks '") + key + "'");
  return doc[key];
}

std::vector<std::string> strings(const Json& value, const char* what) {
  if (!value.is_array()) throw TraceError(std::string(what) + " must be a list of strings");
  std::vector<std::string> out;
  for (const Json& v : value) {
    if (!v.is_string()) throw TraceError(std::string(what) + " must be a list of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::set<std::string> name_set(const Json& value, const char* what) {
  const std::vector<std::string> v = strings(value, what);
  return {v.begin(), v.end()};
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void check_known(const Trace& t, const std::string& name) {
  const bool known = std::any_of(t.assumptions.begin(), t.assumptions.end(),
                                 [&](const auto& p) { return p.first == name; });
  if (!known) throw TraceError("unknown assumption '" + name + "'");
}

bool eliminated_by(const Trace& t, const std::string& assumption, const std::string& cs) {
  auto it = t.eliminates.find(assumption);
  return it != t.eliminates.end() && it->second.contains(cs);
}

}  // namespace

Trace parse_trace(std::string_view text) {
  Trace t;
  if (std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
    return t;
  }
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw TraceError(std::string("malformed trace JSON: ") + e.what());
  }
  if ((doc.is_object() || doc.is_array()) && doc.empty()) return t;
  if (!doc.is_object()) throw TraceError("trace must be a JSON object");

  const Json& kind = field(doc, "kind");
  if (kind == "minimal_refinement") {
    t.kind = Trace::Kind::MinimalRefinement;
  } else if (kind == "search") {
    t.kind = Trace::Kind::Search;
  } else {
    throw TraceError("unknown trace kind " + kind.dump());
  }

  const Json& vars = field(doc, "variables");
  if (!vars.is_object()) throw TraceError("'variables' must be an object");
  for (const std::string& n : strings(vars.value("inputs", Json::array()), "'inputs'")) {
    t.variables.push_back({n, VarKind::Input});
  }
  for (const std::string& n : strings(vars.value("outputs", Json::array()), "'outputs'")) {
    t.variables.push_back({n, VarKind::Output});
  }

  const Json& assumptions = field(doc, "assumptions");
  if (!assumptions.is_object()) throw TraceError("'assumptions' must map names to formulas");
  std::set<std::string> forms;
  for (const auto& [name, formula] : assumptions.items()) {
    if (!formula.is_string()) throw TraceError("formula of '" + name + "' must be a string");
    try {
      Gr1Element e = parse_element(formula.get<std::string>(), t.variables);
      if (!forms.insert(canonical_form(e)).second) {
        throw TraceError("assumption '" + name + "' repeats another formula");
      }
      t.assumptions.emplace_back(name, std::move(e));
    } catch (const ParseError& e) {
      throw TraceError("formula of '" + name + "': " + e.what());
    }
  }

  const Json& table = field(doc, "eliminates");
  if (!table.is_object()) throw TraceError("'eliminates' must map names to counterstrategies");
  for (const auto& [name, list] : table.items()) {
    check_known(t, name);
    t.eliminates[name] = name_set(list, "'eliminates' entries");
  }

  if (t.kind == Trace::Kind::MinimalRefinement) {
    const Json& entry = field(doc, "entry");
    if (!entry.is_array()) throw TraceError("'entry' must be a list");
    for (const Json& item : entry) {
      if (!item.is_object() || !item.contains("assumption") || !item["assumption"].is_string()) {
        throw TraceError("'entry' items need an 'assumption' name");
      }
      const std::string name = item["assumption"].get<std::string>();
      check_known(t, name);
      t.entry.emplace_back(name, name_set(field(item, "eliminated"), "'eliminated'"));
    }
    const Json& add = field(doc, "add");
    const Json& cs = field(doc, "counterstrategy");
    if (!add.is_string() || !cs.is_string()) {
      throw TraceError("'add' and 'counterstrategy' must be names");
    }
    t.add = add.get<std::string>();
    t.counterstrategy = cs.get<std::string>();
    check_known(t, t.add);
    return t;
  }

  if (doc.contains("mode")) {
    const auto mode = doc["mode"].is_string() ? parse_mode(doc["mode"].get<std::string>())
                                              : std::nullopt;
    if (!mode) throw TraceError("'mode' must be bfs, minimal or hybrid");
    t.config.mode = *mode;
  }
  if (doc.contains("max_expansions")) {
    const Json& m = doc["max_expansions"];
    if (!m.is_number_unsigned() || m.get<std::size_t>() == 0) {
      throw TraceError("'max_expansions' must be a positive integer");
    }
    t.config.max_expansions = m.get<std::size_t>();
  }
  t.config.bias_width = SIZE_MAX;
  t.config.record_trace = true;

  const Json& expansions = field(doc, "expansions");
  if (!expansions.is_array()) throw TraceError("'expansions' must be a list");
  std::set<std::vector<std::string>> scripted;
  for (const Json& item : expansions) {
    if (!item.is_object()) throw TraceError("'expansions' items must be objects");
    Trace::Expansion x;
    x.refinement = strings(field(item, "refinement"), "'refinement'");
    std::sort(x.refinement.begin(), x.refinement.end());
    for (const std::string& n : x.refinement) check_known(t, n);
    const Json& cs = field(item, "counterstrategy");
    if (!cs.is_string()) throw TraceError("'counterstrategy' must be a name");
    x.counterstrategy = cs.get<std::string>();
    x.bias = strings(field(item, "bias"), "'bias'");
    for (const std::string& n : x.refinement) {
      if (eliminated_by(t, n, x.counterstrategy)) {
        throw TraceError("counterstrategy " + x.counterstrategy + " is already eliminated by '" +
                         n + "'");
      }
    }
    for (const std::string& n : x.bias) {
      check_known(t, n);
      if (!eliminated_by(t, n, x.counterstrategy)) {
        throw TraceError("'" + n + "' does not eliminate " + x.counterstrategy);
      }
    }
    if (!scripted.insert(x.refinement).second) {
      throw TraceError("refinement {" + join(x.refinement, ", ") + "} scripted twice");
    }
    t.expansions.push_back(std::move(x));
  }
  for (const char* key : {"solutions", "unsatisfiable"}) {
    if (!doc.contains(key)) continue;
    if (!doc[key].is_array()) throw TraceError(std::string("'") + key + "' must be a list");
    for (const Json& set : doc[key]) {
      std::set<std::string> names = name_set(set, key);
      for (const std::string& n : names) check_known(t, n);
      (std::string_view(key) == "solutions" ? t.solutions : t.unsatisfiable)
          .push_back(std::move(names));
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// ScriptedProblem

ScriptedProblem::ScriptedProblem(const Trace& trace) : trace_(trace) {
  for (const auto& [name, element] : trace.assumptions) {
    name_by_form_[canonical_form(element)] = name;
    element_by_name_.emplace(name, element);
  }
}

std::set<std::string> ScriptedProblem::names_of(std::span<const Gr1Element> refinement) const {
  std::set<std::string> out;
  for (const Gr1Element& e : refinement) out.insert(assumption_name(e));
  return out;
}

bool ScriptedProblem::realizable(std::span<const Gr1Element> refinement) {
  const std::set<std::string> have = names_of(refinement);
  return std::any_of(trace_.solutions.begin(), trace_.solutions.end(), [&](const auto& s) {
    return std::includes(have.begin(), have.end(), s.begin(), s.end());
  });
}

bool ScriptedProblem::satisfiable(std::span<const Gr1Element> refinement) {
  const std::set<std::string> have = names_of(refinement);
  return std::none_of(trace_.unsatisfiable.begin(), trace_.unsatisfiable.end(), [&](const auto& s) {
    return std::includes(have.begin(), have.end(), s.begin(), s.end());
  });
}

CounterstrategyId ScriptedProblem::counterstrategy(std::span<const Gr1Element> refinement) {
  const std::set<std::string> have = names_of(refinement);
  const std::vector<std::string> key(have.begin(), have.end());
  for (const Trace::Expansion& x : trace_.expansions) {
    if (x.refinement == key) return id_of(x.counterstrategy);
  }
  throw TraceError("no counterstrategy scripted for refinement {" + join(key, ", ") + "}");
}

std::vector<Gr1Element> ScriptedProblem::bias(CounterstrategyId c,
                                              std::span<const Gr1Element> refinement,
                                              std::size_t width) {
  const std::set<std::string> have = names_of(refinement);
  const std::vector<std::string> key(have.begin(), have.end());
  for (const Trace::Expansion& x : trace_.expansions) {
    if (x.refinement != key || x.counterstrategy != counterstrategy_name(c)) continue;
    std::vector<Gr1Element> out;
    for (const std::string& n : x.bias) {
      if (out.size() >= width) break;
      out.push_back(element(n));
    }
    return out;
  }
  throw TraceError("no bias scripted for refinement {" + join(key, ", ") + "}");
}

bool ScriptedProblem::eliminates(CounterstrategyId c, const Gr1Element& a) {
  return eliminated_by(trace_, assumption_name(a), counterstrategy_name(c));
}

std::string ScriptedProblem::counterstrategy_name(CounterstrategyId c) const {
  return cs_names_.at(c);
}

std::string ScriptedProblem::assumption_name(const Gr1Element& a) const {
  auto it = name_by_form_.find(canonical_form(a));
  if (it == name_by_form_.end()) throw TraceError("assumption outside the trace: " + to_string(a));
  return it->second;
}

CounterstrategyId ScriptedProblem::id_of(const std::string& name) {
  auto [it, fresh] = cs_ids_.emplace(name, static_cast<CounterstrategyId>(cs_names_.size()));
  if (fresh) cs_names_.push_back(name);
  return it->second;
}

const Gr1Element& ScriptedProblem::element(const std::string& name) const {
  auto it = element_by_name_.find(name);
  if (it == element_by_name_.end()) throw TraceError("unknown assumption '" + name + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// Reports

std::string describe(const RefinementEntry& entry, const RefinementProblem& problem) {
  std::vector<std::string> names;
  for (const Gr1Element& a : entry.assumptions) names.push_back(problem.assumption_name(a));
  std::vector<std::string> cs;
  for (CounterstrategyId c : entry.covered()) cs.push_back(problem.counterstrategy_name(c));
  return "(" + (names.empty() ? std::string("-") : join(names, " & ")) + " | " +
         (cs.empty() ? std::string("-") : join(cs, " ")) + ")";
}

namespace {

std::string replay_minimal(const Trace& t) {
  ScriptedProblem problem(t);
  RefinementEntry entry;
  for (const auto& [name, set] : t.entry) {
    entry.assumptions.push_back(problem.element(name));
    IdSet ids;
    for (const std::string& c : set) ids.insert(problem.id_of(c));
    entry.eliminated.push_back(std::move(ids));
  }
  const CounterstrategyId fresh = problem.id_of(t.counterstrategy);
  const EliminationCheck check = [&problem](CounterstrategyId c, const Gr1Element& a) {
    return problem.eliminates(c, a);
  };
  if (!edge_consistent(entry, check)) {
    throw TraceError("entry disagrees with the elimination table");
  }
  RefinementEntry out;
  try {
    out = minimal_refinement(entry, problem.element(t.add), fresh, check);
  } catch (const std::invalid_argument& e) {
    throw TraceError(e.what());
  }
  auto line = [&](const RefinementEntry& e) {
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
      std::vector<std::string> cs;
      for (CounterstrategyId c : e.eliminated[i]) cs.push_back(problem.counterstrategy_name(c));
      if (i) s += ' ';
      s += "(" + problem.assumption_name(e.assumptions[i]) + ": " + join(cs, " ") + ")";
    }
    return s.empty() ? std::string("-") : s;
  };
  std::vector<std::string> removed;
  for (const auto& [name, set] : t.entry) {
    const bool kept = std::any_of(out.assumptions.begin(), out.assumptions.end(), [&](const auto& a) {
      return problem.assumption_name(a) == name;
    });
    if (!kept) removed.push_back(name);
  }
  std::ostringstream report;
  report << "input:   " << line(entry) << '\n';
  report << "add:     " << t.add << " for " << t.counterstrategy << '\n';
  report << "result:  " << line(out) << '\n';
  report << "removed: " << (removed.empty() ? std::string("-") : join(removed, " ")) << '\n';
  return report.str();
}

std::string replay_search(const Trace& t) {
  ScriptedProblem problem(t);
  SearchResult result;
  try {
    result = refinement_search(problem, t.config);
  } catch (const std::invalid_argument& e) {
    throw TraceError(e.what());
  }
  std::ostringstream report;
  report << "mode: " << to_string(result.mode) << '\n';
  for (const ExpansionRecord& r : result.trace) {
    report << r.step << "  pop " << describe(r.popped, problem);
    switch (r.outcome) {
      case ExpansionRecord::Outcome::Duplicate:
        report << "  duplicate";
        break;
      case ExpansionRecord::Outcome::Solution:
        report << "  solution";
        break;
      case ExpansionRecord::Outcome::Unsatisfiable:
        report << "  unsatisfiable";
        break;
      case ExpansionRecord::Outcome::Budget:
        report << "  expansion budget reached";
        break;
      case ExpansionRecord::Outcome::Expanded: {
        std::vector<std::string> bias;
        for (const Gr1Element& a : r.bias) bias.push_back(problem.assumption_name(a));
        std::vector<std::string> queued;
        for (const RefinementEntry& e : r.enqueued) queued.push_back(describe(e, problem));
        report << "  cs " << problem.counterstrategy_name(*r.counterstrategy) << "  bias "
               << (bias.empty() ? std::string("-") : join(bias, ", ")) << "  enqueue "
               << (queued.empty() ? std::string("-") : join(queued, ", "));
        break;
      }
    }
    report << '\n';
  }
  report << "terminated_by: " << to_string(result.terminated_by) << '\n';
  for (const auto& solution : result.solutions) {
    std::vector<std::string> names;
    for (const Gr1Element& a : solution) names.push_back(problem.assumption_name(a));
    report << "solution: " << join(names, " & ") << '\n';
  }
  return report.str();
}

}  // namespace

std::string replay(const Trace& trace) {
  switch (trace.kind) {
    case Trace::Kind::Empty:
      return "";
    case Trace::Kind::MinimalRefinement:
      return replay_minimal(trace);
    case Trace::Kind::Search:
      return replay_search(trace);
  }
  return "";
}

}  // namespace gr1

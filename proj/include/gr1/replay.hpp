#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gr1/formula.hpp"
#include "gr1/refine.hpp"
#include "gr1/search.hpp"

namespace gr1 {

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scripted run: named assumptions with a fixed elimination table, and, for
/// searches, the counterstrategy and bias output for each refinement.
struct Trace {
  enum class Kind { Empty, MinimalRefinement, Search };

  struct Expansion {
    std::vector<std::string> refinement;  // sorted assumption names
    std::string counterstrategy;
    std::vector<std::string> bias;
  };

  Kind kind = Kind::Empty;
  std::vector<Variable> variables;
  std::vector<std::pair<std::string, Gr1Element>> assumptions;
  std::map<std::string, std::set<std::string>> eliminates;

  // MinimalRefinement
  std::vector<std::pair<std::string, std::set<std::string>>> entry;
  std::string add;
  std::string counterstrategy;

  // Search
  std::vector<Expansion> expansions;
  std::vector<std::set<std::string>> solutions;
  std::vector<std::set<std::string>> unsatisfiable;
  SearchConfig config;
};

/// Throws TraceError on malformed JSON or inconsistent scripts.
Trace parse_trace(std::string_view text);

/// Answers every search query from a trace.
class ScriptedProblem : public RefinementProblem {
 public:
  explicit ScriptedProblem(const Trace& trace);

  bool realizable(std::span<const Gr1Element> refinement) override;
  bool satisfiable(std::span<const Gr1Element> refinement) override;
  CounterstrategyId counterstrategy(std::span<const Gr1Element> refinement) override;
  std::vector<Gr1Element> bias(CounterstrategyId c, std::span<const Gr1Element> refinement,
                               std::size_t width) override;
  bool eliminates(CounterstrategyId c, const Gr1Element& a) override;

  std::string counterstrategy_name(CounterstrategyId c) const override;
  std::string assumption_name(const Gr1Element& a) const override;

  /// Dense id for a counterstrategy name, assigned on first use.
  CounterstrategyId id_of(const std::string& name);
  const Gr1Element& element(const std::string& name) const;

 private:
  std::set<std::string> names_of(std::span<const Gr1Element> refinement) const;

  const Trace& trace_;
  std::map<std::string, std::string> name_by_form_;
  std::map<std::string, Gr1Element> element_by_name_;
  std::vector<std::string> cs_names_;
  std::map<std::string, CounterstrategyId> cs_ids_;
};

/// Plain-text rendering of an entry: `(a & b | c1 c2)`.
std::string describe(const RefinementEntry& entry, const RefinementProblem& problem);

/// Runs a trace and returns the report; empty for an empty trace.
std::string replay(const Trace& trace);

}  // namespace gr1

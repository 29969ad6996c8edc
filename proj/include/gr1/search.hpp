#pragma once

#include <chrono>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gr1/bias.hpp"
#include "gr1/formula.hpp"
#include "gr1/game.hpp"
#include "gr1/refine.hpp"

namespace gr1 {

enum class SearchMode { Bfs, Minimal, Hybrid };

std::string_view to_string(SearchMode mode);
std::optional<SearchMode> parse_mode(std::string_view text);

enum class Termination { Exhausted, MaxExpansions, Timeout, Vacuous };

std::string_view to_string(Termination t);

struct SearchConfig {
  SearchMode mode = SearchMode::Minimal;
  std::size_t max_expansions = 100;
  std::optional<std::chrono::milliseconds> wall_clock_limit;
  std::size_t bias_width = 5;
  /// Workers for the per-candidate minimization of one expansion.
  std::size_t threads = 1;
  bool record_trace = false;
};

/// The oracles the search consults. Refinements are passed as the added
/// assumptions only; the implementation supplies the original specification.
class RefinementProblem {
 public:
  virtual ~RefinementProblem() = default;

  virtual bool realizable(std::span<const Gr1Element> refinement) = 0;
  virtual bool satisfiable(std::span<const Gr1Element> refinement) = 0;
  /// Computes and registers a counterstrategy for an unrealizable refinement.
  virtual CounterstrategyId counterstrategy(std::span<const Gr1Element> refinement) = 0;
  virtual std::vector<Gr1Element> bias(CounterstrategyId c,
                                       std::span<const Gr1Element> refinement,
                                       std::size_t width) = 0;
  /// Must be safe to call concurrently.
  virtual bool eliminates(CounterstrategyId c, const Gr1Element& a) = 0;

  virtual std::string counterstrategy_name(CounterstrategyId c) const {
    return "c" + std::to_string(c + 1);
  }
  virtual std::string assumption_name(const Gr1Element& a) const { return canonical_form(a); }
};

/// Refinement problem backed by the game solver, model checker and template
/// bias.
class SpecProblem : public RefinementProblem {
 public:
  explicit SpecProblem(Gr1Spec spec, BiasConfig bias = {}, GameOptions options = {});

  bool realizable(std::span<const Gr1Element> refinement) override;
  bool satisfiable(std::span<const Gr1Element> refinement) override;
  CounterstrategyId counterstrategy(std::span<const Gr1Element> refinement) override;
  std::vector<Gr1Element> bias(CounterstrategyId c, std::span<const Gr1Element> refinement,
                               std::size_t width) override;
  bool eliminates(CounterstrategyId c, const Gr1Element& a) override;

  const Gr1Spec& spec() const noexcept { return spec_; }
  const CounterstrategyStore& store() const noexcept { return store_; }
  /// The specification with `refinement` appended to its assumptions.
  Gr1Spec refined(std::span<const Gr1Element> refinement) const;

 private:
  const GameSolver& solver(std::span<const Gr1Element> refinement);

  Gr1Spec spec_;
  BiasConfig bias_;
  GameOptions options_;
  CounterstrategyStore store_;
  EliminationCache cache_{store_};
  std::vector<std::string> solved_key_;
  std::optional<GameSolver> solved_;
};

struct DuplicateKey {
  std::vector<std::string> assumptions;  // sorted canonical forms
  std::size_t cs_count = 0;

  friend auto operator<=>(const DuplicateKey&, const DuplicateKey&) = default;
};

DuplicateKey duplicate_key(const RefinementEntry& entry);

struct SearchStats {
  std::size_t explored_refs = 0;
  std::size_t expanded_refs = 0;
  std::size_t sol = 0;
  std::optional<std::size_t> min_len, max_len, mode_len;
  std::optional<std::size_t> min_sol_len, max_sol_len, mode_sol_len;
  std::size_t false_count = 0;
  std::size_t duplicate_refs = 0;
  /// Assumptions removed by one minimization -> number of minimizations.
  std::map<std::size_t, std::size_t> redundant_removed_histogram;
  std::chrono::milliseconds wall_clock{0};
};

/// One dequeue of the search loop.
struct ExpansionRecord {
  enum class Outcome { Duplicate, Expanded, Solution, Unsatisfiable, Budget };

  std::size_t step = 0;
  RefinementEntry popped;
  Outcome outcome = Outcome::Expanded;
  std::optional<CounterstrategyId> counterstrategy;
  std::vector<Gr1Element> bias;
  std::vector<RefinementEntry> enqueued;
};

struct SearchResult {
  SearchMode mode = SearchMode::Minimal;
  Termination terminated_by = Termination::Exhausted;
  std::vector<std::vector<Gr1Element>> solutions;
  SearchStats stats;
  std::vector<ExpansionRecord> trace;
};

SearchResult refinement_search(RefinementProblem& problem, const SearchConfig& config);

SearchResult refinement_search(const Gr1Spec& spec, const SearchConfig& config,
                               const GameOptions& options = {});

/// Mode of a multiset of lengths, ties broken toward the smaller value.
std::optional<std::size_t> mode_of(const std::map<std::size_t, std::size_t>& counts);

/// `{mode, terminated_by, solutions, stats}`; wall_clock_ms is written as 0
/// when `timing` is false.
std::string to_json(const SearchResult& result, bool timing = true, int indent = 2);

/// One row per statistic, one column per result.
std::string to_csv(std::span<const SearchResult> results);

}  // namespace gr1

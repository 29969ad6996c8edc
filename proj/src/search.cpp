#include "gr1/search.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gr1 {

std::string_view to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::Bfs:
      return "bfs";
    case SearchMode::Minimal:
      return "minimal";
    case SearchMode::Hybrid:
      return "hybrid";
  }
  return "?";
}

std::optional<SearchMode> parse_mode(std::string_view text) {
  if (text == "bfs") return SearchMode::Bfs;
  if (text == "minimal") return SearchMode::Minimal;
  if (text == "hybrid") return SearchMode::Hybrid;
  return std::nullopt;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Exhausted:
      return "exhausted";
    case Termination::MaxExpansions:
      return "max_expansions";
    case Termination::Timeout:
      return "timeout";
    case Termination::Vacuous:
      return "vacuous";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// SpecProblem

namespace {

std::vector<std::string> sorted_forms(std::span<const Gr1Element> elements) {
  std::vector<std::string> out;
  out.reserve(elements.size());
  for (const Gr1Element& e : elements) out.push_back(canonical_form(e));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SpecProblem::SpecProblem(Gr1Spec spec, BiasConfig bias, GameOptions options)
    : spec_(std::move(spec)), bias_(bias), options_(options) {}

Gr1Spec SpecProblem::refined(std::span<const Gr1Element> refinement) const {
  Gr1Spec out = spec_;
  out.assumptions.insert(out.assumptions.end(), refinement.begin(), refinement.end());
  return out;
}

const GameSolver& SpecProblem::solver(std::span<const Gr1Element> refinement) {
  std::vector<std::string> key = sorted_forms(refinement);
  if (!solved_ || key != solved_key_) {
    solved_.emplace(refined(refinement), options_);
    solved_key_ = std::move(key);
  }
  return *solved_;
}

bool SpecProblem::realizable(std::span<const Gr1Element> refinement) {
  return solver(refinement).realizable();
}

bool SpecProblem::satisfiable(std::span<const Gr1Element> refinement) {
  const Gr1Spec s = refined(refinement);
  const std::vector<Variable> vars = s.variables();
  return assumptions_satisfiable(s.assumptions, vars, options_);
}

CounterstrategyId SpecProblem::counterstrategy(std::span<const Gr1Element> refinement) {
  return store_.add(solver(refinement).counterstrategy());
}

std::vector<Gr1Element> SpecProblem::bias(CounterstrategyId c,
                                          std::span<const Gr1Element> refinement,
                                          std::size_t width) {
  BiasConfig config = bias_;
  config.width = width;
  const Gr1Spec s = refined(refinement);
  return apply_bias(store_.get(c), s.assumptions, spec_, config, options_);
}

bool SpecProblem::eliminates(CounterstrategyId c, const Gr1Element& a) { return cache_(c, a); }

// ---------------------------------------------------------------------------
// Search

DuplicateKey duplicate_key(const RefinementEntry& entry) {
  return DuplicateKey{sorted_forms(entry.assumptions), entry.covered().size()};
}

std::optional<std::size_t> mode_of(const std::map<std::size_t, std::size_t>& counts) {
  std::optional<std::size_t> best;
  std::size_t best_count = 0;
  for (const auto& [value, count] : counts) {
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

namespace {

void summarize(const std::map<std::size_t, std::size_t>& counts, std::optional<std::size_t>& lo,
               std::optional<std::size_t>& hi, std::optional<std::size_t>& mode) {
  if (counts.empty()) return;
  lo = counts.begin()->first;
  hi = counts.rbegin()->first;
  mode = mode_of(counts);
}

}  // namespace

SearchResult refinement_search(RefinementProblem& problem, const SearchConfig& config) {
  if (config.max_expansions == 0) throw std::invalid_argument("max_expansions must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  SearchResult result;
  result.mode = config.mode;

  std::map<std::size_t, std::size_t> lengths;
  std::map<std::size_t, std::size_t> sol_lengths;
  std::set<std::vector<std::string>> seen_solutions;
  std::set<DuplicateKey> explored;
  std::deque<RefinementEntry> queue{RefinementEntry{}};
  std::size_t step = 0;
  const EliminationCheck check = [&problem](CounterstrategyId c, const Gr1Element& a) {
    return problem.eliminates(c, a);
  };

  auto finish = [&]() {
    SearchStats& s = result.stats;
    summarize(lengths, s.min_len, s.max_len, s.mode_len);
    summarize(sol_lengths, s.min_sol_len, s.max_sol_len, s.mode_sol_len);
    s.sol = result.solutions.size();
    s.wall_clock = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    return result;
  };

  if (!problem.satisfiable({})) {
    result.terminated_by = Termination::Vacuous;
    return finish();
  }

  while (!queue.empty()) {
    if (config.wall_clock_limit &&
        std::chrono::steady_clock::now() - start >= *config.wall_clock_limit) {
      result.terminated_by = Termination::Timeout;
      return finish();
    }
    RefinementEntry entry = std::move(queue.front());
    queue.pop_front();
    ExpansionRecord record;
    record.step = ++step;
    if (config.record_trace) record.popped = entry;

    DuplicateKey key = duplicate_key(entry);
    if (explored.contains(key)) {
      ++result.stats.duplicate_refs;
      record.outcome = ExpansionRecord::Outcome::Duplicate;
      if (config.record_trace) result.trace.push_back(std::move(record));
      continue;
    }
    ++result.stats.explored_refs;
    ++lengths[entry.size()];

    if (!problem.realizable(entry.assumptions)) {
      if (result.stats.expanded_refs >= config.max_expansions) {
        record.outcome = ExpansionRecord::Outcome::Budget;
        if (config.record_trace) result.trace.push_back(std::move(record));
        result.terminated_by = Termination::MaxExpansions;
        return finish();
      }
      ++result.stats.expanded_refs;
      const CounterstrategyId c = problem.counterstrategy(entry.assumptions);
      std::vector<Gr1Element> alternatives = problem.bias(c, entry.assumptions, config.bias_width);

      // Each candidate is independent; results are merged in candidate order.
      std::vector<std::vector<RefinementEntry>> produced(alternatives.size());
      std::vector<std::optional<std::size_t>> removed(alternatives.size());
      auto work = [&](std::size_t k) {
        const Gr1Element& add = alternatives[k];
        if (config.mode == SearchMode::Bfs) {
          RefinementEntry plain = entry;
          plain.assumptions.push_back(add);
          plain.eliminated.push_back(IdSet{c});
          produced[k].push_back(std::move(plain));
          return;
        }
        RefinementEntry minimal = minimal_refinement(entry, add, c, check);
        removed[k] = entry.size() + 1 - minimal.size();
        produced[k].push_back(minimal);
        if (config.mode == SearchMode::Hybrid) {
          RefinementEntry full = entry;
          full.assumptions.push_back(add);
          full.eliminated.push_back(minimal.eliminated.back());
          produced[k].push_back(std::move(full));
        }
      };
      const std::size_t workers = std::max<std::size_t>(1, config.threads);
      if (workers == 1 || alternatives.size() < 2) {
        for (std::size_t k = 0; k < alternatives.size(); ++k) work(k);
      } else {
        for (std::size_t base = 0; base < alternatives.size(); base += workers) {
          std::vector<std::future<void>> batch;
          for (std::size_t k = base; k < std::min(base + workers, alternatives.size()); ++k) {
            batch.push_back(std::async(std::launch::async, work, k));
          }
          for (auto& f : batch) f.get();
        }
      }
      for (std::size_t k = 0; k < alternatives.size(); ++k) {
        if (removed[k]) ++result.stats.redundant_removed_histogram[*removed[k]];
        for (RefinementEntry& e : produced[k]) {
          if (config.record_trace) record.enqueued.push_back(e);
          queue.push_back(std::move(e));
        }
      }
      record.outcome = ExpansionRecord::Outcome::Expanded;
      record.counterstrategy = c;
      if (config.record_trace) record.bias = std::move(alternatives);
    } else if (problem.satisfiable(entry.assumptions)) {
      record.outcome = ExpansionRecord::Outcome::Solution;
      if (seen_solutions.insert(key.assumptions).second) {
        ++sol_lengths[entry.size()];
        result.solutions.push_back(entry.assumptions);
      }
    } else {
      record.outcome = ExpansionRecord::Outcome::Unsatisfiable;
      ++result.stats.false_count;
    }
    explored.insert(std::move(key));
    if (config.record_trace) result.trace.push_back(std::move(record));
  }
  result.terminated_by = Termination::Exhausted;
  return finish();
}

SearchResult refinement_search(const Gr1Spec& spec, const SearchConfig& config,
                               const GameOptions& options) {
  BiasConfig bias;
  bias.width = config.bias_width;
  SpecProblem problem(spec, bias, options);
  return refinement_search(problem, config);
}

// ---------------------------------------------------------------------------
// Reports

namespace {

nlohmann::ordered_json optional_json(const std::optional<std::size_t>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::string triple(const std::optional<std::size_t>& lo, const std::optional<std::size_t>& hi,
                   const std::optional<std::size_t>& mode) {
  if (!lo) return "N/A";
  return std::to_string(*lo) + "/" + std::to_string(*hi) + "/" + std::to_string(*mode);
}

}  // namespace

std::string to_json(const SearchResult& result, bool timing, int indent) {
  nlohmann::ordered_json doc;
  doc["mode"] = std::string(to_string(result.mode));
  doc["terminated_by"] = std::string(to_string(result.terminated_by));
  doc["solutions"] = nlohmann::ordered_json::array();
  for (const auto& solution : result.solutions) doc["solutions"].push_back(sorted_forms(solution));
  const SearchStats& s = result.stats;
  nlohmann::ordered_json stats;
  stats["explored_refs"] = s.explored_refs;
  stats["expanded_refs"] = s.expanded_refs;
  stats["sol"] = s.sol;
  stats["min_len"] = optional_json(s.min_len);
  stats["max_len"] = optional_json(s.max_len);
  stats["mode_len"] = optional_json(s.mode_len);
  stats["min_sol_len"] = optional_json(s.min_sol_len);
  stats["max_sol_len"] = optional_json(s.max_sol_len);
  stats["mode_sol_len"] = optional_json(s.mode_sol_len);
  stats["false_count"] = s.false_count;
  stats["duplicate_refs"] = s.duplicate_refs;
  stats["wall_clock_ms"] = timing ? s.wall_clock.count() : 0;
  doc["stats"] = std::move(stats);
  return doc.dump(indent);
}

std::string to_csv(std::span<const SearchResult> results) {
  std::ostringstream out;
  out << "Statistics";
  for (const SearchResult& r : results) out << ',' << to_string(r.mode);
  out << '\n';
  auto row = [&](const char* label, auto&& cell) {
    out << label;
    for (const SearchResult& r : results) out << ',' << cell(r.stats);
    out << '\n';
  };
  row("ExploredRefs", [](const SearchStats& s) { return std::to_string(s.explored_refs); });
  row("Min/Max/ModeLength",
      [](const SearchStats& s) { return triple(s.min_len, s.max_len, s.mode_len); });
  row("Min/Max/ModeRedundAssump", [](const SearchStats& s) {
    std::optional<std::size_t> lo, hi, mode;
    summarize(s.redundant_removed_histogram, lo, hi, mode);
    return triple(lo, hi, mode);
  });
  row("Sol", [](const SearchStats& s) { return std::to_string(s.sol); });
  row("Min/Max/ModeSolLength",
      [](const SearchStats& s) { return triple(s.min_sol_len, s.max_sol_len, s.mode_sol_len); });
  row("ExpandedRefs", [](const SearchStats& s) { return std::to_string(s.expanded_refs); });
  row("False", [](const SearchStats& s) { return std::to_string(s.false_count); });
  row("DuplicateRefs", [](const SearchStats& s) { return std::to_string(s.duplicate_refs); });
  return out.str();
}

}  // namespace gr1

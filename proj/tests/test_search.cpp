#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "gr1/game.hpp"
#include "gr1/search.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "testing.hpp"

using namespace gr1;

namespace {

SearchResult run(const Gr1Spec& spec, SearchMode mode, std::size_t budget = 100, std::size_t width = 5) {
  SearchConfig config;
  config.mode = mode;
  config.max_expansions = budget;
  config.bias_width = width;
  config.record_trace = true;
  return refinement_search(spec, config);
}

// Properties every run must have, whatever the mode.
void expect_run_invariants(const Gr1Spec& spec, const SearchResult& r, std::size_t budget) {
  const SearchStats& s = r.stats;
  EXPECT_LE(s.expanded_refs, s.explored_refs);
  EXPECT_LE(s.expanded_refs, budget);
  EXPECT_EQ(s.sol, r.solutions.size());
  std::size_t duplicates = 0, expanded = 0, explored = 0, unsat = 0;
  std::set<DuplicateKey> seen;
  for (const ExpansionRecord& rec : r.trace) {
    if (rec.outcome == ExpansionRecord::Outcome::Duplicate) {
      ++duplicates;
      EXPECT_TRUE(seen.contains(duplicate_key(rec.popped)));
      continue;
    }
    ++explored;
    EXPECT_TRUE(seen.insert(duplicate_key(rec.popped)).second) << "key explored twice";
    if (rec.outcome == ExpansionRecord::Outcome::Expanded) ++expanded;
    if (rec.outcome == ExpansionRecord::Outcome::Unsatisfiable) ++unsat;
    if (r.mode != SearchMode::Bfs && rec.outcome == ExpansionRecord::Outcome::Expanded) {
      for (std::size_t k = 0; k < rec.enqueued.size(); k += r.mode == SearchMode::Hybrid ? 2 : 1) {
        EXPECT_TRUE(is_minimal(rec.enqueued[k]));
      }
    }
  }
  EXPECT_EQ(duplicates, s.duplicate_refs);
  EXPECT_EQ(explored, s.explored_refs);
  EXPECT_EQ(expanded, s.expanded_refs);
  EXPECT_EQ(unsat, s.false_count);
  std::set<std::vector<std::string>> distinct;
  for (const auto& solution : r.solutions) {
    Gr1Spec refined = spec;
    refined.assumptions.insert(refined.assumptions.end(), solution.begin(), solution.end());
    EXPECT_TRUE(realizable(refined));
    EXPECT_TRUE(oracle::satisfying_lasso(oracle::complete_graph(spec.variables()), refined.assumptions));
    std::vector<std::string> forms;
    for (const auto& a : solution) forms.push_back(canonical_form(a));
    std::sort(forms.begin(), forms.end());
    EXPECT_TRUE(distinct.insert(forms).second);
  }
}

}  // namespace

TEST(Search, MinimalFindsLengthOneSolutions) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  const SearchResult r = run(spec, SearchMode::Minimal);
  ASSERT_GE(r.stats.sol, 1U);
  EXPECT_EQ(r.stats.min_sol_len, 1U);
  EXPECT_TRUE(r.stats.redundant_removed_histogram.contains(1));
  EXPECT_GE(r.stats.redundant_removed_histogram.at(1), 1U);
  expect_run_invariants(spec, r, 100);
}

TEST(Search, MinimalWithWideBiasFindsPsi2) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  const SearchResult r = run(spec, SearchMode::Minimal, 100, 60);
  const std::string psi2 = canonical_form(parse_element("G (!val -> X !cl)", spec.variables()));
  bool found = false;
  for (const auto& solution : r.solutions) {
    found = found || (solution.size() == 1 && canonical_form(solution[0]) == psi2);
  }
  EXPECT_TRUE(found);
  expect_run_invariants(spec, r, 100);
}

TEST(Search, BfsKeepsRedundantAssumptions) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  const SearchResult r = run(spec, SearchMode::Bfs);
  expect_run_invariants(spec, r, 100);
  std::size_t last = 0;
  for (const ExpansionRecord& rec : r.trace) {
    EXPECT_GE(rec.popped.size(), last);
    last = rec.popped.size();
  }
  bool redundant = false;
  for (const auto& solution : r.solutions) {
    if (solution.size() < 2) continue;
    for (std::size_t drop = 0; drop < solution.size(); ++drop) {
      Gr1Spec refined = spec;
      for (std::size_t k = 0; k < solution.size(); ++k) {
        if (k != drop) refined.assumptions.push_back(solution[k]);
      }
      redundant = redundant || realizable(refined);
    }
  }
  EXPECT_TRUE(redundant);
}

TEST(Search, HybridRuns) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  const SearchResult r = run(spec, SearchMode::Hybrid);
  EXPECT_GE(r.stats.sol, 1U);
  expect_run_invariants(spec, r, 100);
}

TEST(Search, RealizableSpecAcceptsEmptyRefinement) {
  const Gr1Spec spec = testing_support::load_spec("request_grant_psi2.spec");
  const SearchResult r = run(spec, SearchMode::Minimal);
  ASSERT_EQ(r.solutions.size(), 1U);
  EXPECT_TRUE(r.solutions[0].empty());
  EXPECT_EQ(r.stats.explored_refs, 1U);
  EXPECT_EQ(r.stats.duplicate_refs, 0U);
  EXPECT_EQ(r.stats.min_sol_len, 0U);
  EXPECT_EQ(r.terminated_by, Termination::Exhausted);
}

TEST(Search, UnsatisfiableAssumptionsAreVacuous) {
  const Gr1Spec spec = parse_spec("INPUT a\nOUTPUT b\nASSUMPTION G a\nASSUMPTION GF !a\nGUARANTEE GF b\n");
  const SearchResult r = run(spec, SearchMode::Minimal);
  EXPECT_EQ(r.terminated_by, Termination::Vacuous);
  EXPECT_TRUE(r.solutions.empty());
  EXPECT_EQ(r.stats.explored_refs, 0U);
}

TEST(Search, BudgetStopsTheSearch) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  for (std::size_t budget : {1U, 2U, 3U}) {
    const SearchResult r = run(spec, SearchMode::Bfs, budget);
    EXPECT_EQ(r.terminated_by, Termination::MaxExpansions);
    EXPECT_EQ(r.stats.expanded_refs, budget);
    expect_run_invariants(spec, r, budget);
  }
}

TEST(Search, ZeroTimeoutStopsImmediately) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  SearchConfig config;
  config.wall_clock_limit = std::chrono::milliseconds(0);
  const SearchResult r = refinement_search(spec, config);
  EXPECT_EQ(r.terminated_by, Termination::Timeout);
  EXPECT_EQ(r.stats.explored_refs, 0U);
}

TEST(Search, ThreadsDoNotChangeTheResult) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  for (SearchMode mode : {SearchMode::Minimal, SearchMode::Hybrid}) {
    SearchConfig config;
    config.mode = mode;
    config.bias_width = 8;
    const std::string one = to_json(refinement_search(spec, config), false);
    config.threads = 4;
    EXPECT_EQ(to_json(refinement_search(spec, config), false), one);
  }
}

TEST(Search, RandomSpecsKeepInvariants) {
  gen::Rng rng(5150);
  int searched = 0;
  for (int n = 0; n < 150; ++n) {
    const Gr1Spec spec = gen::spec(rng, 3, 2);
    if (realizable(spec)) continue;
    ++searched;
    const SearchMode mode = static_cast<SearchMode>(n % 3);
    expect_run_invariants(spec, run(spec, mode, 15, 3), 15);
  }
  EXPECT_GT(searched, 10);
}

TEST(DuplicateKey, Examples) {
  const std::vector<Variable> vars = {{"a", VarKind::Input}, {"b", VarKind::Input}};
  const Gr1Element psi1 = parse_element("GF a", vars);
  const Gr1Element psi2 = parse_element("GF b", vars);
  EXPECT_NE(duplicate_key({{psi2}, {{0}}}), duplicate_key({{psi2}, {{0, 1}}}));
  EXPECT_EQ(duplicate_key({{psi1, psi2}, {{0}, {1}}}), duplicate_key({{psi2, psi1}, {{1}, {0}}}));
  EXPECT_EQ(duplicate_key({{psi2}, {{0, 1}}}), duplicate_key({{psi2}, {{2, 3}}}));
}

TEST(Report, ModeOfBreaksTiesLow) {
  EXPECT_FALSE(mode_of({}).has_value());
  EXPECT_EQ(mode_of({{1, 2}, {2, 2}, {3, 1}}), 1U);
  EXPECT_EQ(mode_of({{1, 1}, {4, 3}}), 4U);
}

TEST(Report, ModeNames) {
  for (SearchMode m : {SearchMode::Bfs, SearchMode::Minimal, SearchMode::Hybrid}) {
    EXPECT_EQ(parse_mode(to_string(m)), m);
  }
  EXPECT_FALSE(parse_mode("dfs").has_value());
  EXPECT_EQ(to_string(Termination::MaxExpansions), "max_expansions");
  EXPECT_EQ(to_string(Termination::Timeout), "timeout");
}

TEST(Report, JsonFollowsTheSchema) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  const SearchResult r = run(spec, SearchMode::Minimal);
  const auto doc = nlohmann::json::parse(to_json(r));
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"mode", "solutions", "stats", "terminated_by"}));
  std::vector<std::string> stats;
  for (const auto& [k, v] : doc["stats"].items()) stats.push_back(k);
  std::sort(stats.begin(), stats.end());
  EXPECT_EQ(stats, (std::vector<std::string>{"duplicate_refs", "expanded_refs", "explored_refs", "false_count",
                                             "max_len", "max_sol_len", "min_len", "min_sol_len", "mode_len",
                                             "mode_sol_len", "sol", "wall_clock_ms"}));
  EXPECT_EQ(doc["mode"], "minimal");
  EXPECT_EQ(doc["solutions"].size(), r.solutions.size());
  EXPECT_EQ(doc["stats"]["sol"], r.stats.sol);
  for (const auto& solution : doc["solutions"]) {
    std::vector<std::string> forms = solution.get<std::vector<std::string>>();
    EXPECT_TRUE(std::is_sorted(forms.begin(), forms.end()));
  }
}

TEST(Report, AbsentLengthsAreNull) {
  const Gr1Spec spec = parse_spec("INPUT a\nOUTPUT b\nASSUMPTION G a\nASSUMPTION GF !a\nGUARANTEE GF b\n");
  const auto doc = nlohmann::json::parse(to_json(run(spec, SearchMode::Minimal), false));
  EXPECT_TRUE(doc["stats"]["min_sol_len"].is_null());
  EXPECT_TRUE(doc["stats"]["mode_len"].is_null());
  EXPECT_EQ(doc["stats"]["wall_clock_ms"], 0);
  EXPECT_EQ(doc["terminated_by"], "vacuous");
}

TEST(Report, CsvHasOneColumnPerResult) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  const std::vector<SearchResult> results = {run(spec, SearchMode::Bfs), run(spec, SearchMode::Minimal)};
  const std::string csv = to_csv(results);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 2);
  EXPECT_NE(header.find("bfs"), std::string::npos);
  EXPECT_NE(header.find("minimal"), std::string::npos);
  for (const char* row : {"ExploredRefs", "ExpandedRefs", "False", "DuplicateRefs"}) {
    EXPECT_NE(csv.find(std::string("\n") + row + ","), std::string::npos) << row;
  }
}

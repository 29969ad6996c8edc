// gr1refine: realizability checks, counterstrategies and assumption
// refinement search for GR(1) specifications.
//
// Exit codes: 0 ok, 2 bad input or usage, 3 unrealizable, 4 variable cap
// exceeded, 5 counterstrategy requested for a realizable specification.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gr1/bias.hpp"
#include "gr1/counterstrategy.hpp"
#include "gr1/game.hpp"
#include "gr1/replay.hpp"
#include "gr1/search.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kBadInput = 2;
constexpr int kUnrealizable = 3;
constexpr int kCapExceeded = 4;
constexpr int kRealizable = 5;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

gr1::GameOptions game_options() {
  gr1::GameOptions options;
  if (const char* cap = std::getenv("GR1_VAR_CAP")) {
    try {
      std::size_t used = 0;
      const unsigned long value = std::stoul(cap, &used);
      if (used != std::string(cap).size()) throw std::invalid_argument(cap);
      options.var_cap = value;
    } catch (const std::exception&) {
      throw InputError(std::string("GR1_VAR_CAP is not a number: ") + cap);
    }
  }
  return options;
}

gr1::Gr1Spec load_spec(const std::string& path) { return gr1::parse_spec(read_file(path)); }

int cmd_check(const std::string& path, bool json) {
  const gr1::GameSolver solver(load_spec(path), game_options());
  const bool ok = solver.realizable();
  if (json) {
    std::cout << "{\"realizable\": " << (ok ? "true" : "false") << "}\n";
  } else {
    std::cout << (ok ? "realizable" : "unrealizable") << '\n';
  }
  return ok ? kOk : kUnrealizable;
}

int cmd_counterstrategy(const std::string& path, const std::string& format) {
  const gr1::GameSolver solver(load_spec(path), game_options());
  if (solver.realizable()) {
    std::cerr << "error: the specification is realizable; there is no counterstrategy\n";
    return kRealizable;
  }
  const gr1::Counterstrategy c = solver.counterstrategy();
  if (format == "json") {
    std::cout << gr1::to_json(c) << '\n';
  } else {
    std::cout << gr1::to_dot(c);
  }
  return kOk;
}

struct SearchFlags {
  std::string mode = "minimal";
  std::size_t max_expansions = 100;
  double timeout = 0;
  std::size_t bias_width = 5;
  std::string json_out;
  std::string csv_out;
  bool no_timing = false;
  std::size_t threads = 1;
};

int cmd_search(const std::string& path, const SearchFlags& flags) {
  gr1::SearchConfig config;
  config.mode = *gr1::parse_mode(flags.mode);
  config.max_expansions = flags.max_expansions;
  config.bias_width = flags.bias_width;
  config.threads = flags.threads;
  if (flags.timeout > 0) {
    config.wall_clock_limit = std::chrono::milliseconds(static_cast<long long>(flags.timeout * 1000));
  }
  const gr1::SearchResult result = gr1::refinement_search(load_spec(path), config, game_options());
  if (!flags.json_out.empty()) write_file(flags.json_out, gr1::to_json(result, !flags.no_timing));
  if (!flags.csv_out.empty()) write_file(flags.csv_out, gr1::to_csv({&result, 1}));
  std::cout << "solutions: " << result.solutions.size() << '\n';
  std::cout << "terminated_by: " << gr1::to_string(result.terminated_by) << '\n';
  for (const auto& solution : result.solutions) {
    std::string line;
    for (const gr1::Gr1Element& a : solution) {
      if (!line.empty()) line += "  &  ";
      line += gr1::canonical_form(a);
    }
    std::cout << "  " << line << '\n';
  }
  return kOk;
}

int cmd_replay(const std::string& path) {
  std::cout << gr1::replay(gr1::parse_trace(read_file(path)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GR(1) realizability checking and assumption refinement search"};
  app.require_subcommand(1, 1);

  std::string spec_path;
  bool check_json = false;
  auto* check = app.add_subcommand("check", "Decide realizability");
  check->add_option("spec", spec_path, "Specification file")->required();
  check->add_flag("--json", check_json, "Print {\"realizable\": bool}");

  std::string format = "dot";
  auto* counter = app.add_subcommand("counterstrategy", "Print a counterstrategy");
  counter->add_option("spec", spec_path, "Specification file")->required();
  counter->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}));

  SearchFlags flags;
  auto* search = app.add_subcommand("search", "Search for assumption refinements");
  search->add_option("spec", spec_path, "Specification file")->required();
  search->add_option("--mode", flags.mode, "bfs, minimal or hybrid")
      ->check(CLI::IsMember({"bfs", "minimal", "hybrid"}));
  search->add_option("--max-expansions", flags.max_expansions, "Expansion budget")
      ->check(CLI::PositiveNumber);
  search->add_option("--timeout", flags.timeout, "Wall-clock limit in seconds")
      ->check(CLI::NonNegativeNumber);
  search->add_option("--bias-width", flags.bias_width, "Alternatives per counterstrategy")
      ->check(CLI::PositiveNumber);
  search->add_option("--json", flags.json_out, "Write the result as JSON");
  search->add_option("--csv", flags.csv_out, "Write the statistics as CSV");
  search->add_flag("--no-timing", flags.no_timing, "Write wall_clock_ms as 0");
  search->add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber);

  std::string trace_path;
  auto* replay = app.add_subcommand("replay", "Replay a scripted trace");
  replay->add_option("trace", trace_path, "Trace JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*check) return cmd_check(spec_path, check_json);
    if (*counter) return cmd_counterstrategy(spec_path, format);
    if (*search) return cmd_search(spec_path, flags);
    if (*replay) return cmd_replay(trace_path);
  } catch (const gr1::ParseError& e) {
    std::cerr << spec_path << ": " << e.what() << '\n';
    return kBadInput;
  } catch (const gr1::CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const gr1::SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const gr1::TraceError& e) {
    std::cerr << trace_path << ": " << e.what() << '\n';
    return kBadInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}

#include "gr1/game.hpp"

#include <bit>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

namespace gr1 {

namespace {

// Move relations are tabulated up to this many variables (2^24 bits).
constexpr std::size_t kTableVars = 12;
// Enumerating 2^n x 2^n transitions beyond this is hopeless anyway.
constexpr std::size_t kHardCap = 30;

using Set = std::vector<char>;

void check_cap(std::size_t n, const GameOptions& options) {
  if (n > options.var_cap || n > kHardCap) {
    throw CapExceeded(std::to_string(n) + " variables exceed the cap of " +
                      std::to_string(std::min(options.var_cap, kHardCap)));
  }
}

bool test_bit(const std::vector<std::uint64_t>& words, std::size_t i) {
  return (words[i >> 6] >> (i & 63)) & 1U;
}

void set_bit(std::vector<std::uint64_t>& words, std::size_t i) {
  words[i >> 6] |= std::uint64_t{1} << (i & 63);
}

// Throws if a fixpoint runs longer than its lattice height allows.
void bound(std::size_t& iterations, std::size_t states) {
  if (++iterations > states + 1) throw std::logic_error("fixpoint failed to converge");
}

unsigned bits_for(std::size_t count) {
  return count <= 1 ? 0U : static_cast<unsigned>(std::bit_width(count - 1));
}

std::optional<std::string> next_output(const Expr& e, const Universe& u, unsigned nx) {
  if (e.op() == Op::Next) {
    const auto idx = u.index_of(e.name());
    if (idx && *idx >= nx) return e.name();
    return std::nullopt;
  }
  for (const Expr& c : e.operands()) {
    if (auto found = next_output(c, u, nx)) return found;
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// Arena

Arena::Arena(const Gr1Spec& spec, const GameOptions& options) {
  const std::vector<Variable> vars = spec.variables();
  check_cap(vars.size(), options);
  std::vector<std::string> names;
  names.reserve(vars.size());
  for (const Variable& v : vars) names.push_back(v.name);
  universe_ = std::make_shared<const Universe>(std::move(names));
  nx_ = static_cast<unsigned>(spec.inputs.size());
  ny_ = static_cast<unsigned>(spec.outputs.size());

  for (const Gr1Element& a : spec.assumptions) {
    switch (a.kind) {
      case ElementClass::Initial:
        env_init_.add(Predicate(a.body, *universe_));
        break;
      case ElementClass::Invariant:
        if (const auto out = next_output(a.body, *universe_, nx_)) {
          throw SpecError("assumption '" + to_string(a) +
                          "' constrains the next value of output '" + *out + "'");
        }
        env_inv_.add(Predicate(a.body, *universe_));
        break;
      case ElementClass::Fairness:
        env_fair_.emplace_back(a.body, *universe_);
        break;
    }
  }
  for (const Gr1Element& g : spec.guarantees) {
    switch (g.kind) {
      case ElementClass::Initial:
        sys_init_.add(Predicate(g.body, *universe_));
        break;
      case ElementClass::Invariant:
        sys_inv_.add(Predicate(g.body, *universe_));
        break;
      case ElementClass::Fairness:
        sys_fair_.emplace_back(g.body, *universe_);
        break;
    }
  }

  if (vars.size() > kTableVars) return;
  const std::size_t n = state_count();
  const std::size_t nxv = std::size_t{1} << nx_;
  env_table_.assign((n * nxv + 63) / 64, 0);
  sys_table_.assign((n * n + 63) / 64, 0);
  for (State s = 0; s < n; ++s) {
    for (std::uint64_t x = 0; x < nxv; ++x) {
      if (env_inv_(s, x)) set_bit(env_table_, s * nxv + x);
    }
    for (State t = 0; t < n; ++t) {
      if (sys_inv_(s, t)) set_bit(sys_table_, s * n + t);
    }
  }
}

bool Arena::env_ok(State s, std::uint64_t x) const {
  if (!env_table_.empty()) return test_bit(env_table_, (s << nx_) + x);
  return env_inv_(s, x);
}

bool Arena::sys_ok(State s, State t) const {
  if (!sys_table_.empty()) return test_bit(sys_table_, s * state_count() + t);
  return sys_inv_(s, t);
}

std::vector<std::uint64_t> Arena::env_moves(State s) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << nx_); ++x) {
    if (env_ok(s, x)) out.push_back(x);
  }
  return out;
}

std::vector<std::uint64_t> Arena::sys_moves(State s, std::uint64_t x) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << ny_); ++y) {
    if (sys_ok(s, compose(x, y))) out.push_back(y);
  }
  return out;
}

Arena build_arena(const Gr1Spec& spec, const GameOptions& options) { return Arena(spec, options); }

// ---------------------------------------------------------------------------
// Solver
//
// Semantics of a play: the system wins iff the assumptions are violated or the
// guarantees hold. E is where the environment can keep the assumptions against
// any output sequence, including ones that break the guarantees; from outside
// E the system can force an assumption violation, so moving there always wins
// for the system. The main fixpoint is the usual three-nested GR(1) formula
// with that escape folded into the controllable predecessor.

struct GameSolver::Impl {
  Arena arena;
  std::size_t n = 0;
  std::size_t nxv = 0;
  std::size_t nyv = 0;
  std::size_t env_k = 1;  // assumption fairness count (>= 1)
  std::size_t sys_k = 1;  // guarantee fairness count (>= 1)

  Set keep;                                        // E
  std::vector<char> escape;                        // per x': some y' leaves E
  std::vector<std::vector<std::uint32_t>> keep_layer;  // [i][s]
  Set win;                                         // W
  bool is_realizable = false;

  // Environment attractor stages: ybar[k-1][j] and xlayer[k-1][j][i][s].
  std::vector<std::vector<Set>> ybar;
  std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>> xlayer;
  std::vector<std::uint32_t> rank;  // 0 for system-winning states

  Impl(const Gr1Spec& spec, const GameOptions& options) : arena(spec, options) {
    n = arena.state_count();
    nxv = std::size_t{1} << arena.input_count();
    nyv = std::size_t{1} << arena.output_count();
    env_k = arena.env_fair_count();
    sys_k = arena.sys_fair_count();
    solve_keep();
    solve_win();
    solve_counter();
    decide();
  }

  State st(std::uint64_t x, std::uint64_t y) const { return arena.compose(x, y); }

  // Order in which the environment's candidate inputs are tried.
  std::uint64_t preferred(std::size_t idx) const { return nxv - 1 - idx; }

  // Exists a legal x' such that every y' lands in S.
  Set apre(const Set& s_set) const {
    std::vector<char> all(nxv, 1);
    for (std::uint64_t x = 0; x < nxv; ++x) {
      for (std::uint64_t y = 0; y < nyv && all[x]; ++y) all[x] = s_set[st(x, y)];
    }
    Set out(n, 0);
    for (State s = 0; s < n; ++s) {
      for (std::uint64_t x = 0; x < nxv; ++x) {
        if (all[x] && arena.env_ok(s, x)) {
          out[s] = 1;
          break;
        }
      }
    }
    return out;
  }

  // For every legal x': escape, or some legal y' lands in S.
  Set cpre(const Set& s_set) const {
    Set out(n, 1);
    for (State s = 0; s < n; ++s) {
      for (std::uint64_t x = 0; x < nxv && out[s]; ++x) {
        if (!arena.env_ok(s, x) || escape[x]) continue;
        bool reply = false;
        for (std::uint64_t y = 0; y < nyv && !reply; ++y) {
          const State t = st(x, y);
          reply = s_set[t] && arena.sys_ok(s, t);
        }
        out[s] = reply;
      }
    }
    return out;
  }

  template <class Target>
  bool forces(State s, std::uint64_t x, const Target& target) const {
    if (!arena.env_ok(s, x) || escape[x]) return false;
    for (std::uint64_t y = 0; y < nyv; ++y) {
      const State t = st(x, y);
      if (arena.sys_ok(s, t) && !target(t)) return false;
    }
    return true;
  }

  // Exists a legal, non-escaping x' such that every legal y' lands in S.
  Set epre(const Set& s_set) const {
    Set out(n, 0);
    auto in = [&s_set](State t) { return s_set[t] != 0; };
    for (State s = 0; s < n; ++s) {
      for (std::uint64_t x = 0; x < nxv && !out[s]; ++x) out[s] = forces(s, x, in);
    }
    return out;
  }

  void solve_keep() {
    Set z(n, 1);
    std::size_t outer = 0;
    for (;;) {
      bound(outer, n);
      const Set az = apre(z);
      Set z_new(n, 1);
      std::vector<std::vector<std::uint32_t>> layers(env_k, std::vector<std::uint32_t>(n, 0));
      for (std::size_t i = 0; i < env_k; ++i) {
        Set y(n, 0);
        std::size_t inner = 0;
        for (std::uint32_t level = 1;; ++level) {
          bound(inner, n);
          const Set ay = apre(y);
          Set y_new(n, 0);
          for (State s = 0; s < n; ++s) {
            y_new[s] = (arena.env_fair(i, s) && az[s]) || ay[s];
            if (y_new[s] && !y[s]) layers[i][s] = level;
          }
          if (y_new == y) break;
          y = std::move(y_new);
        }
        for (State s = 0; s < n; ++s) z_new[s] = z_new[s] && y[s];
      }
      if (z_new == z) {
        keep_layer = std::move(layers);
        break;
      }
      z = std::move(z_new);
    }
    keep = std::move(z);
    escape.assign(nxv, 0);
    for (std::uint64_t x = 0; x < nxv; ++x) {
      for (std::uint64_t y = 0; y < nyv && !escape[x]; ++y) escape[x] = !keep[st(x, y)];
    }
  }

  void solve_win() {
    Set z(n, 1);
    std::size_t outer = 0;
    for (;;) {
      bound(outer, n);
      const Set cz = cpre(z);
      Set z_new(n, 1);
      for (std::size_t j = 0; j < sys_k; ++j) {
        Set y(n, 0);
        std::size_t middle = 0;
        for (;;) {
          bound(middle, n);
          const Set cy = cpre(y);
          Set y_new(n, 0);
          for (std::size_t i = 0; i < env_k; ++i) {
            Set x(n, 1);
            std::size_t inner = 0;
            for (;;) {
              bound(inner, n);
              const Set cx = cpre(x);
              Set x_new(n, 0);
              for (State s = 0; s < n; ++s) {
                x_new[s] = (arena.sys_fair(j, s) && cz[s]) || cy[s] ||
                           (!arena.env_fair(i, s) && cx[s]);
              }
              if (x_new == x) break;
              x = std::move(x_new);
            }
            for (State s = 0; s < n; ++s) y_new[s] = y_new[s] || x[s];
          }
          if (y_new == y) break;
          y = std::move(y_new);
        }
        for (State s = 0; s < n; ++s) z_new[s] = z_new[s] && y[s];
      }
      if (z_new == z) break;
      z = std::move(z_new);
    }
    win = std::move(z);
  }

  // Complement of W computed as an increasing sequence of stages so that a
  // strategy can be read off the intermediate sets.
  void solve_counter() {
    Set prev(n, 0);
    rank.assign(n, 0);
    std::size_t outer = 0;
    for (std::uint32_t k = 1;; ++k) {
      bound(outer, n);
      const Set ep = epre(prev);
      Set zb(prev);
      std::vector<Set> stage_y;
      std::vector<std::vector<std::vector<std::uint32_t>>> stage_layers;
      for (std::size_t j = 0; j < sys_k; ++j) {
        Set a(n, 0);
        for (State s = 0; s < n; ++s) a[s] = !arena.sys_fair(j, s) || ep[s];
        Set yb(n, 1);
        std::vector<std::vector<std::uint32_t>> layers;
        std::size_t middle = 0;
        for (;;) {
          bound(middle, n);
          const Set ey = epre(yb);
          Set y_new(n, 1);
          layers.assign(env_k, std::vector<std::uint32_t>(n, 0));
          for (std::size_t i = 0; i < env_k; ++i) {
            Set xb(n, 0);
            std::size_t inner = 0;
            for (std::uint32_t level = 1;; ++level) {
              bound(inner, n);
              const Set ex = epre(xb);
              Set x_new(n, 0);
              for (State s = 0; s < n; ++s) {
                x_new[s] = a[s] && ey[s] && (arena.env_fair(i, s) || ex[s]);
                if (x_new[s] && !xb[s]) layers[i][s] = level;
              }
              if (x_new == xb) break;
              xb = std::move(x_new);
            }
            for (State s = 0; s < n; ++s) y_new[s] = y_new[s] && xb[s];
          }
          if (y_new == yb) break;
          yb = std::move(y_new);
        }
        for (State s = 0; s < n; ++s) zb[s] = zb[s] || yb[s];
        stage_y.push_back(std::move(yb));
        stage_layers.push_back(std::move(layers));
      }
      if (zb == prev) break;
      for (State s = 0; s < n; ++s) {
        if (zb[s] && !prev[s]) rank[s] = k;
      }
      ybar.push_back(std::move(stage_y));
      xlayer.push_back(std::move(stage_layers));
      prev = std::move(zb);
    }
    for (State s = 0; s < n; ++s) {
      if ((prev[s] != 0) == (win[s] != 0)) {
        throw std::logic_error("environment and system regions are not complementary");
      }
    }
  }

  // First x, in preference order, whose every completion y loses for the system.
  std::optional<std::uint64_t> env_initial() const {
    for (std::uint64_t idx = 0; idx < nxv; ++idx) {
      const std::uint64_t x = preferred(idx);
      bool blocks = true;
      for (std::uint64_t y = 0; y < nyv && blocks; ++y) {
        const State s = st(x, y);
        blocks = arena.env_init(s) && keep[s] && (!arena.sys_init(s) || !win[s]);
      }
      if (blocks) return x;
    }
    return std::nullopt;
  }

  void decide() { is_realizable = !env_initial().has_value(); }

  std::uint32_t first_j(State s) const {
    const auto& ys = ybar.at(rank[s] - 1);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      if (ys[j][s]) return static_cast<std::uint32_t>(j);
    }
    throw std::logic_error("ranked state outside every stage set");
  }

  Counterstrategy extract() const;
};

namespace {

struct Node {
  bool counter;
  State s;
  std::uint32_t k;
  std::uint32_t j;
  std::uint32_t i;

  auto key() const { return std::tie(counter, s, k, j, i); }
  friend bool operator<(const Node& a, const Node& b) { return a.key() < b.key(); }
};

}  // namespace

Counterstrategy GameSolver::Impl::extract() const {
  const auto x0 = env_initial();
  if (!x0) throw RealizableSpec("specification is realizable");

  const std::size_t nv = arena.universe()->size();
  const unsigned jb = bits_for(sys_k);
  const unsigned ib = bits_for(env_k);
  Counterstrategy c;
  std::vector<std::string> names = arena.universe()->names();
  for (unsigned b = 0; b < jb; ++b) c.memory_vars.push_back("_mem_j_" + std::to_string(b));
  for (unsigned b = 0; b < ib; ++b) c.memory_vars.push_back("_mem_i_" + std::to_string(b));
  names.insert(names.end(), c.memory_vars.begin(), c.memory_vars.end());
  c.universe = std::make_shared<const Universe>(std::move(names));

  std::map<Node, StateId> ids;
  std::vector<Node> nodes;
  auto intern = [&](const Node& node) {
    auto [it, fresh] = ids.emplace(node, static_cast<StateId>(nodes.size()));
    if (fresh) {
      nodes.push_back(node);
      std::uint64_t label = node.s;
      label |= static_cast<std::uint64_t>(node.counter ? node.j : 0) << nv;
      label |= static_cast<std::uint64_t>(node.i) << (nv + jb);
      c.labels.push_back(label);
      c.successors.emplace_back();
    }
    return it->second;
  };
  auto counter_node = [&](State t) { return Node{true, t, rank[t], first_j(t), 0}; };

  bool any_legal = false;
  for (std::uint64_t y = 0; y < nyv; ++y) any_legal = any_legal || arena.sys_init(st(*x0, y));
  for (std::uint64_t y = 0; y < nyv; ++y) {
    const State s = st(*x0, y);
    if (any_legal && !arena.sys_init(s)) continue;
    c.initial.push_back(intern(any_legal ? counter_node(s) : Node{false, s, 0, 0, 0}));
  }

  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const Node node = nodes[q];
    const State s = node.s;
    std::vector<Node> next;
    if (!node.counter) {
      const auto& layer = keep_layer[node.i];
      const std::uint32_t l = layer[s];
      const bool visit = l == 1;
      std::optional<std::uint64_t> pick;
      for (std::uint64_t idx = 0; idx < nxv && !pick; ++idx) {
        const std::uint64_t x = preferred(idx);
        if (!arena.env_ok(s, x)) continue;
        bool ok = true;
        for (std::uint64_t y = 0; y < nyv && ok; ++y) {
          const State t = st(x, y);
          ok = visit ? keep[t] != 0 : (layer[t] != 0 && layer[t] < l);
        }
        if (ok) pick = x;
      }
      if (!pick) throw std::logic_error("no assumption-keeping move");
      const std::uint32_t i = visit ? static_cast<std::uint32_t>((node.i + 1) % env_k) : node.i;
      for (std::uint64_t y = 0; y < nyv; ++y) next.push_back(Node{false, st(*pick, y), 0, 0, i});
    } else {
      const std::uint32_t k = node.k;
      const auto& layer = xlayer[k - 1][node.j][node.i];
      const auto& ys = ybar[k - 1][node.j];
      const std::uint32_t l = layer[s];
      // A first-layer state that is not fair for i got there by a deadlock
      // move; Descend with l == 1 only accepts moves with no legal reply.
      enum { Progress, Visit, Descend } step;
      if (arena.sys_fair(node.j, s)) {
        step = Progress;
      } else if (l == 1 && arena.env_fair(node.i, s)) {
        step = Visit;
      } else {
        step = Descend;
      }
      auto target = [&](State t) {
        switch (step) {
          case Progress:
            return rank[t] != 0 && rank[t] < k;
          case Visit:
            return ys[t] != 0;
          case Descend:
            return layer[t] != 0 && layer[t] < l;
        }
        return false;
      };
      std::optional<std::uint64_t> pick;
      for (std::uint64_t idx = 0; idx < nxv && !pick; ++idx) {
        const std::uint64_t x = preferred(idx);
        if (forces(s, x, target)) pick = x;
      }
      if (!pick) throw std::logic_error("no winning environment move");
      bool legal = false;
      for (std::uint64_t y = 0; y < nyv; ++y) {
        const State t = st(*pick, y);
        if (!arena.sys_ok(s, t)) continue;
        legal = true;
        if (step == Progress || rank[t] < k) {
          next.push_back(counter_node(t));
        } else if (step == Visit) {
          next.push_back(Node{true, t, k, node.j, static_cast<std::uint32_t>((node.i + 1) % env_k)});
        } else {
          next.push_back(Node{true, t, k, node.j, node.i});
        }
      }
      if (!legal) {
        for (std::uint64_t y = 0; y < nyv; ++y) next.push_back(Node{false, st(*pick, y), 0, 0, 0});
      }
    }
    std::vector<StateId> succ;
    succ.reserve(next.size());
    for (const Node& t : next) succ.push_back(intern(t));
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    c.successors[q] = std::move(succ);
  }
  return c;
}

GameSolver::GameSolver(const Gr1Spec& spec, const GameOptions& options)
    : impl_(std::make_unique<Impl>(spec, options)) {}
GameSolver::~GameSolver() = default;
GameSolver::GameSolver(GameSolver&&) noexcept = default;
GameSolver& GameSolver::operator=(GameSolver&&) noexcept = default;

const Arena& GameSolver::arena() const noexcept { return impl_->arena; }
bool GameSolver::realizable() const noexcept { return impl_->is_realizable; }
const std::vector<char>& GameSolver::winning_region() const noexcept { return impl_->win; }
const std::vector<char>& GameSolver::assumption_region() const noexcept { return impl_->keep; }
Counterstrategy GameSolver::counterstrategy() const { return impl_->extract(); }

bool realizable(const Gr1Spec& spec, const GameOptions& options) {
  return GameSolver(spec, options).realizable();
}

Counterstrategy compute_counterstrategy(const Gr1Spec& spec, const GameOptions& options) {
  return GameSolver(spec, options).counterstrategy();
}

// ---------------------------------------------------------------------------
// Satisfiability

bool assumptions_satisfiable(std::span<const Gr1Element> assumptions,
                             std::span<const Variable> variables, const GameOptions& options) {
  check_cap(variables.size(), options);
  std::vector<std::string> names;
  for (const Variable& v : variables) names.push_back(v.name);
  const Universe universe(std::move(names));
  Conjunction init;
  Conjunction inv;
  std::vector<Predicate> fair;
  for (const Gr1Element& a : assumptions) {
    switch (a.kind) {
      case ElementClass::Initial:
        init.add(Predicate(a.body, universe));
        break;
      case ElementClass::Invariant:
        inv.add(Predicate(a.body, universe));
        break;
      case ElementClass::Fairness:
        fair.emplace_back(a.body, universe);
        break;
    }
  }
  const std::size_t n = std::size_t{1} << variables.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  std::vector<char> seen(n, 0);
  std::deque<std::uint32_t> frontier;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (init(s)) {
      seen[s] = 1;
      frontier.push_back(s);
    }
  }
  while (!frontier.empty()) {
    const std::uint32_t s = frontier.front();
    frontier.pop_front();
    for (std::uint32_t t = 0; t < n; ++t) {
      if (!inv(s, t)) continue;
      adj[s].push_back(t);
      if (!seen[t]) {
        seen[t] = 1;
        frontier.push_back(t);
      }
    }
  }

  // Iterative Tarjan over the reachable part.
  constexpr std::uint32_t kUnvisited = UINT32_MAX;
  std::vector<std::uint32_t> index(n, kUnvisited);
  std::vector<std::uint32_t> low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> calls;
  std::uint32_t counter = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (!seen[root] || index[root] != kUnvisited) continue;
    calls.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!calls.empty()) {
      auto& [v, pos] = calls.back();
      if (pos < adj[v].size()) {
        const std::uint32_t w = adj[v][pos++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          calls.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::uint32_t done = v;
      calls.pop_back();
      if (!calls.empty()) {
        const std::uint32_t parent = calls.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] != index[done]) continue;
      std::vector<std::uint32_t> component;
      std::uint32_t w = 0;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        component.push_back(w);
      } while (w != done);
      const bool cyclic = component.size() > 1 ||
                          std::find(adj[done].begin(), adj[done].end(), done) != adj[done].end();
      if (!cyclic) continue;
      const bool fair_ok = std::all_of(fair.begin(), fair.end(), [&](const Predicate& p) {
        return std::any_of(component.begin(), component.end(),
                           [&](std::uint32_t q) { return p(q); });
      });
      if (fair_ok) return true;
    }
  }
  return false;
}

}  // namespace gr1

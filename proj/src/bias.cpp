#include "gr1/bias.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "gr1/modelcheck.hpp"

namespace gr1 {

namespace {

Expr literal(const std::string& name, bool positive, bool next = false) {
  Expr v = next ? Expr::next(name) : Expr::var(name);
  return positive ? v : Expr::negate(std::move(v));
}

// Calls fn(indices) for every ascending index combination of length m.
template <class Fn>
void combinations(std::size_t n, std::size_t m, Fn&& fn) {
  if (m == 0 || m > n) return;
  std::vector<std::size_t> pick(m);
  for (std::size_t i = 0; i < m; ++i) pick[i] = i;
  for (;;) {
    fn(pick);
    std::size_t i = m;
    while (i > 0 && pick[i - 1] == n - m + i - 1) --i;
    if (i == 0) return;
    ++pick[i - 1];
    for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace

std::vector<Template> enumerate_templates(const Gr1Spec& spec, const BiasConfig& config) {
  std::vector<Template> out;
  std::set<std::string> seen;
  auto emit = [&](Gr1Element e, std::size_t size) {
    std::string key = canonical_form(e);
    if (!seen.insert(key).second) return;
    out.push_back(Template{std::move(e), std::move(key), size});
  };

  if (config.fairness) {
    for (const auto* side : {&spec.inputs, &spec.outputs}) {
      for (const Variable& v : *side) {
        for (bool positive : {true, false}) emit(Gr1Element::fairness(literal(v.name, positive)), 1);
      }
    }
  }
  if (config.invariant && !spec.inputs.empty()) {
    const std::vector<Variable> vars = spec.variables();
    for (std::size_t m = 1; m <= config.max_left_literals; ++m) {
      combinations(vars.size(), m, [&](const std::vector<std::size_t>& pick) {
        for (std::size_t signs = 0; signs < (std::size_t{1} << m); ++signs) {
          Expr left;
          for (std::size_t k = 0; k < m; ++k) {
            Expr lit = literal(vars[pick[k]].name, ((signs >> k) & 1U) == 0);
            left = k == 0 ? std::move(lit) : Expr::binary(Op::And, std::move(left), std::move(lit));
          }
          for (const Variable& in : spec.inputs) {
            for (bool positive : {true, false}) {
              emit(Gr1Element::invariant(
                       Expr::binary(Op::Implies, left, literal(in.name, positive, true))),
                   m + 1);
            }
          }
        }
      });
    }
  }
  if (config.initial) {
    for (const Variable& v : spec.inputs) {
      for (bool positive : {true, false}) emit(Gr1Element::initial(literal(v.name, positive)), 1);
    }
  }
  return out;
}

std::vector<Gr1Element> apply_bias(const Counterstrategy& c, std::span<const Gr1Element> current,
                                   const Gr1Spec& spec, const BiasConfig& config,
                                   const GameOptions& options) {
  if (config.width == 0) throw std::invalid_argument("bias width must be at least 1");
  std::vector<Template> candidates = enumerate_templates(spec, config);
  std::stable_sort(candidates.begin(), candidates.end(), [](const Template& a, const Template& b) {
    return a.size != b.size ? a.size < b.size : a.canonical < b.canonical;
  });
  // The specification's own assumptions always hold alongside the refinement.
  std::vector<Gr1Element> trial = spec.assumptions;
  trial.insert(trial.end(), current.begin(), current.end());
  std::set<std::string> present;
  for (const Gr1Element& a : trial) present.insert(canonical_form(a));
  const std::vector<Variable> vars = spec.variables();

  std::vector<Gr1Element> out;
  for (const Template& t : candidates) {
    if (out.size() >= config.width) break;
    if (present.contains(t.canonical)) continue;
    if (!eliminates(t.element, c)) continue;
    trial.push_back(t.element);
    const bool consistent = assumptions_satisfiable(trial, vars, options);
    trial.pop_back();
    if (consistent) out.push_back(t.element);
  }
  return out;
}

}  // namespace gr1

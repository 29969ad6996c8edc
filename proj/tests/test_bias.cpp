#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "gr1/bias.hpp"
#include "gr1/game.hpp"
#include "gr1/modelcheck.hpp"
#include "oracles.hpp"
#include "testing.hpp"

using namespace gr1;

namespace {

bool contains(const std::vector<Template>& ts, const std::string& canonical) {
  return std::any_of(ts.begin(), ts.end(), [&](const Template& t) { return t.canonical == canonical; });
}

bool contains(const std::vector<Gr1Element>& es, const Gr1Element& e) {
  return std::any_of(es.begin(), es.end(),
                     [&](const Gr1Element& x) { return canonical_form(x) == canonical_form(e); });
}

std::size_t literal_count(const Expr& e) {
  if (e.op() == Op::Var || e.op() == Op::Next) return 1;
  std::size_t n = 0;
  for (const Expr& o : e.operands()) n += literal_count(o);
  return n;
}

void expect_sound(const Counterstrategy& c, const std::vector<Gr1Element>& current, const Gr1Spec& spec,
                  const std::vector<Gr1Element>& out, std::size_t width) {
  EXPECT_LE(out.size(), width);
  std::vector<std::pair<std::size_t, std::string>> keys;
  for (const Gr1Element& a : out) {
    EXPECT_TRUE(oracle::violating_lasso(c, a).has_value()) << canonical_form(a);
    EXPECT_FALSE(contains(current, a)) << canonical_form(a);
    std::vector<Gr1Element> all = spec.assumptions;
    all.insert(all.end(), current.begin(), current.end());
    all.push_back(a);
    EXPECT_TRUE(oracle::satisfying_lasso(oracle::complete_graph(spec.variables()), all).has_value())
        << canonical_form(a);
    keys.emplace_back(literal_count(a.body), canonical_form(a));
  }
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
}

}  // namespace

TEST(Templates, RequestGrantContainsKnownRefinements) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  const auto ts = enumerate_templates(spec, {});
  EXPECT_TRUE(contains(ts, canonical_form(parse_element("GF !cl", spec.variables()))));
  EXPECT_TRUE(contains(ts, canonical_form(parse_element("G (!val -> X !cl)", spec.variables()))));
}

TEST(Templates, OrderAndUniqueness) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  const auto ts = enumerate_templates(spec, {});
  std::set<std::string> seen;
  for (const Template& t : ts) {
    EXPECT_TRUE(seen.insert(t.canonical).second) << t.canonical;
    EXPECT_EQ(t.canonical, canonical_form(t.element));
    EXPECT_EQ(t.size, literal_count(t.element.body));
  }
  // 2 inputs and 3 outputs, two polarities each.
  ASSERT_GE(ts.size(), 10U);
  EXPECT_EQ(ts[0].canonical, canonical_form(parse_element("GF req", spec.variables())));
  EXPECT_EQ(ts[1].canonical, canonical_form(parse_element("GF !req", spec.variables())));
  EXPECT_EQ(ts[2].canonical, canonical_form(parse_element("GF cl", spec.variables())));
  auto rank = [](ElementClass k) { return k == ElementClass::Fairness ? 0 : k == ElementClass::Invariant ? 1 : 2; };
  for (std::size_t i = 1; i < ts.size(); ++i) EXPECT_LE(rank(ts[i - 1].element.kind), rank(ts[i].element.kind));
  // Invariant right-hand sides are next inputs only.
  for (const Template& t : ts) {
    if (t.element.kind != ElementClass::Invariant) continue;
    const Expr& rhs = t.element.body.operand(1);
    const Expr& leaf = rhs.op() == Op::Not ? rhs.operand(0) : rhs;
    ASSERT_EQ(leaf.op(), Op::Next);
    EXPECT_TRUE(leaf.name() == "req" || leaf.name() == "cl");
  }
}

TEST(Templates, ZeroInputsLeavesOnlyOutputFairness) {
  const Gr1Spec spec = parse_spec("OUTPUT g h\nGUARANTEE GF g\n");
  const auto ts = enumerate_templates(spec, {});
  ASSERT_EQ(ts.size(), 4U);
  for (const Template& t : ts) EXPECT_EQ(t.element.kind, ElementClass::Fairness);
}

TEST(Templates, AmbaStyleHready) {
  const Gr1Spec spec = parse_spec("INPUT hready hbusreq\nOUTPUT hgrant\nGUARANTEE GF hgrant\n");
  const auto ts = enumerate_templates(spec, {});
  EXPECT_TRUE(contains(ts, canonical_form(parse_element("G (!hready -> X hready)", spec.variables()))));
}

TEST(Templates, ClassSelectionAndWiderLeftSides) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  BiasConfig only_initial;
  only_initial.fairness = false;
  only_initial.invariant = false;
  const auto ts = enumerate_templates(spec, only_initial);
  EXPECT_EQ(ts.size(), 4U);
  BiasConfig wide;
  wide.max_left_literals = 2;
  EXPECT_TRUE(contains(enumerate_templates(spec, wide),
                       canonical_form(parse_element("G ((val & gr) -> X !cl)", spec.variables()))));
  EXPECT_FALSE(contains(ts, canonical_form(parse_element("G ((val & gr) -> X !cl)", spec.variables()))));
}

TEST(ApplyBias, FirstCounterstrategyYieldsGfNotCl) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  const Counterstrategy c1 = compute_counterstrategy(spec);
  BiasConfig config;
  const auto out = apply_bias(c1, {}, spec, config);
  EXPECT_TRUE(contains(out, parse_element("GF !cl", spec.variables())));
  expect_sound(c1, {}, spec, out, config.width);
}

TEST(ApplyBias, SecondCounterstrategyYieldsPsi2) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  const std::vector<Gr1Element> current = {parse_element("GF !cl", spec.variables())};
  Gr1Spec refined = spec;
  refined.assumptions.insert(refined.assumptions.end(), current.begin(), current.end());
  const Counterstrategy c2 = compute_counterstrategy(refined);
  BiasConfig config;
  config.width = 60;
  const auto out = apply_bias(c2, current, spec, config);
  EXPECT_TRUE(contains(out, parse_element("G (!val -> X !cl)", spec.variables())));
  expect_sound(c2, current, spec, out, config.width);
  EXPECT_EQ(out, apply_bias(c2, current, spec, config));
}

TEST(ApplyBias, NothingEliminatesAnAlternatingCounterstrategy) {
  const Gr1Spec spec = parse_spec("INPUT a\nOUTPUT b\nGUARANTEE GF b\n");
  Counterstrategy c;
  c.universe = std::make_shared<const Universe>(std::vector<std::string>{"a", "b"});
  c.labels = {0, 1, 2, 3};
  c.successors = {{1}, {2}, {3}, {0}};
  c.initial = {0};
  BiasConfig config;
  config.invariant = false;
  config.initial = false;
  EXPECT_TRUE(apply_bias(c, {}, spec, config).empty());
}

TEST(ApplyBias, KeepsAssumptionsSatisfiable) {
  const Gr1Spec spec = parse_spec("INPUT a\nOUTPUT b\nGUARANTEE GF b\n");
  Counterstrategy c;
  c.universe = std::make_shared<const Universe>(std::vector<std::string>{"a", "b"});
  c.labels = {1};
  c.successors = {{0}};
  c.initial = {0};
  const std::vector<Gr1Element> current = {parse_element("G a", spec.variables())};
  BiasConfig config;
  config.width = 100;
  const auto out = apply_bias(c, current, spec, config);
  EXPECT_FALSE(contains(out, parse_element("GF !a", spec.variables())));
  EXPECT_FALSE(contains(out, parse_element("!a", spec.variables())));
  expect_sound(c, current, spec, out, config.width);
}

TEST(ApplyBias, ZeroWidthIsRejected) {
  const Gr1Spec spec = testing_support::load_spec("request_grant.spec");
  BiasConfig config;
  config.width = 0;
  EXPECT_THROW(apply_bias(compute_counterstrategy(spec), {}, spec, config), std::invalid_argument);
}

TEST(ApplyBias, RandomCounterstrategiesAreSound) {
  gen::Rng rng(31);
  const Gr1Spec spec = parse_spec("INPUT a b\nOUTPUT c\nGUARANTEE GF c\n");
  for (int n = 0; n < 100; ++n) {
    const Counterstrategy c = gen::counterstrategy(rng, {"a", "b", "c"}, 6, 2);
    std::vector<Gr1Element> current;
    if (gen::coin(rng)) current.push_back(gen::element(rng, {"a", "b"}, 1));
    if (!oracle::satisfying_lasso(oracle::complete_graph(spec.variables()), current)) continue;
    BiasConfig config;
    config.width = 8;
    expect_sound(c, current, spec, apply_bias(c, current, spec, config), config.width);
  }
}

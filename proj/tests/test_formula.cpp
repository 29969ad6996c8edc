#include <gtest/gtest.h>

#include <memory>

#include "gr1/formula.hpp"
#include "gr1/predicate.hpp"
#include "oracles.hpp"
#include "testing.hpp"

using namespace gr1;
using testing_support::load_spec;

namespace {

std::size_t count_next(const Expr& e) {
  std::size_t n = e.op() == Op::Next ? 1 : 0;
  for (const Expr& o : e.operands()) n += count_next(o);
  return n;
}

const std::vector<Variable> kRequestGrant = {{"req", VarKind::Input},
                                             {"cl", VarKind::Input},
                                             {"gr", VarKind::Output},
                                             {"val", VarKind::Output},
                                             {"pend", VarKind::Output}};

}  // namespace

TEST(Parse, RequestGrantFixture) {
  const Gr1Spec spec = load_spec("request_grant.spec");
  ASSERT_EQ(spec.inputs.size(), 2U);
  ASSERT_EQ(spec.outputs.size(), 3U);
  EXPECT_EQ(spec.inputs[0].name, "req");
  EXPECT_EQ(spec.inputs[1].name, "cl");
  ASSERT_EQ(spec.assumptions.size(), 1U);
  EXPECT_EQ(spec.assumptions[0].kind, ElementClass::Fairness);
  EXPECT_EQ(spec.guarantees.size(), 6U);
  std::size_t fairness = 0;
  for (const Gr1Element& g : spec.guarantees) fairness += g.kind == ElementClass::Fairness;
  EXPECT_EQ(fairness, 2U);
}

TEST(Parse, MinimalInvariantGuarantee) {
  const Gr1Spec spec = parse_spec("INPUT a\nGUARANTEE G (a -> X !a)\n");
  ASSERT_EQ(spec.guarantees.size(), 1U);
  EXPECT_EQ(spec.guarantees[0].kind, ElementClass::Invariant);
  EXPECT_EQ(count_next(spec.guarantees[0].body), 1U);
  EXPECT_TRUE(spec.outputs.empty());
}

TEST(Parse, NextInsideFairnessIsRejected) {
  try {
    parse_spec("INPUT a\nASSUMPTION GF (X a)\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2U);
    EXPECT_GE(e.column(), 1U);
  }
}

TEST(Parse, NextInsideInitialIsRejected) {
  EXPECT_THROW(parse_spec("INPUT a\nGUARANTEE X a\n"), ParseError);
}

TEST(Parse, NestedNextIsRejected) {
  EXPECT_THROW(parse_spec("INPUT a\nGUARANTEE G (X X a)\n"), ParseError);
}

TEST(Parse, UndeclaredVariableIsRejected) {
  EXPECT_THROW(parse_spec("INPUT a\nGUARANTEE GF b\n"), ParseError);
}

TEST(Parse, DuplicateDeclarationIsRejected) {
  EXPECT_THROW(parse_spec("INPUT a\nOUTPUT a\n"), ParseError);
}

TEST(Parse, UnbalancedParenthesisReportsPosition) {
  try {
    parse_spec("INPUT a\n\nGUARANTEE G (a -> X a\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3U);
  }
}

TEST(Parse, SpecRoundTripsThroughText) {
  const Gr1Spec spec = load_spec("request_grant.spec");
  EXPECT_EQ(parse_spec(to_string(spec)), spec);
}

TEST(Parse, ElementWithScope) {
  const Gr1Element e = parse_element("G (!val -> X !cl)", kRequestGrant);
  EXPECT_EQ(e.kind, ElementClass::Invariant);
  EXPECT_THROW(parse_element("GF nope", kRequestGrant), ParseError);
}

TEST(Parse, RandomElementsRoundTrip) {
  gen::Rng rng(11);
  const std::vector<std::string> names = {"a", "b", "c"};
  const std::vector<Variable> scope = {{"a", VarKind::Input}, {"b", VarKind::Input}, {"c", VarKind::Output}};
  for (int i = 0; i < 2000; ++i) {
    const Gr1Element e = gen::element(rng, names, 5);
    const std::string text = to_string(e);
    EXPECT_EQ(parse_element(text, scope), e) << text;
  }
}

TEST(Eval, ConstantTrue) {
  auto u = std::make_shared<const Universe>(std::vector<std::string>{"a"});
  EXPECT_TRUE(eval(Expr::constant(true), Valuation(u, 0)));
  EXPECT_TRUE(eval(Expr::constant(true), Valuation(u, 1)));
}

TEST(Eval, Psi2Body) {
  auto u = std::make_shared<const Universe>(std::vector<std::string>{"val", "cl"});
  const Expr body = Expr::binary(Op::Implies, Expr::negate(Expr::var("val")), Expr::negate(Expr::next("cl")));
  Valuation now(u), next(u);
  now.set("val", false);
  next.set("cl", false);
  EXPECT_TRUE(eval(body, now, &next));
  next.set("cl", true);
  EXPECT_FALSE(eval(body, now, &next));
}

TEST(Eval, NextWithoutNextValuationThrows) {
  auto u = std::make_shared<const Universe>(std::vector<std::string>{"a"});
  EXPECT_THROW(eval(Expr::next("a"), Valuation(u)), std::invalid_argument);
}

TEST(Eval, UnknownNameThrows) {
  auto u = std::make_shared<const Universe>(std::vector<std::string>{"a"});
  EXPECT_THROW(eval(Expr::var("b"), Valuation(u)), std::out_of_range);
  EXPECT_THROW(Valuation(u).at("b"), std::out_of_range);
}

TEST(Eval, AgreesWithTruthTableEvaluator) {
  gen::Rng rng(3);
  const std::vector<std::string> names = {"p", "q", "r"};
  auto u = std::make_shared<const Universe>(names);
  const auto rows = oracle::all_assignments(names);
  for (int i = 0; i < 400; ++i) {
    const Expr e = gen::expr(rng, names, names, 6);
    const Predicate pred(e, *u);
    for (std::uint64_t now = 0; now < rows.size(); ++now) {
      for (std::uint64_t next = 0; next < rows.size(); ++next) {
        const Valuation vn(u, now), vx(u, next);
        const bool expected = oracle::eval(e, rows[now], rows[next]);
        ASSERT_EQ(eval(e, vn, &vx), expected) << to_string(e);
        ASSERT_EQ(pred(now, next), expected) << to_string(e);
      }
    }
  }
}

TEST(Expr, ToNextRewritesLeaves) {
  const Expr e = Expr::binary(Op::And, Expr::var("a"), Expr::negate(Expr::var("b")));
  const Expr n = to_next(e);
  EXPECT_TRUE(contains_next(n));
  EXPECT_EQ(count_next(n), 2U);
  EXPECT_THROW(to_next(n), std::invalid_argument);
}

TEST(Expr, VariablesInFirstOccurrenceOrder) {
  const Expr e = Expr::binary(Op::Or, Expr::var("b"), Expr::binary(Op::And, Expr::next("a"), Expr::var("b")));
  EXPECT_EQ(variables_of(e), (std::vector<std::string>{"b", "a"}));
}

TEST(Canonical, WhitespaceInsensitive) {
  const Gr1Element a = parse_element("GF !cl", kRequestGrant);
  const Gr1Element b = parse_element("GF    (  ! cl )", kRequestGrant);
  EXPECT_EQ(canonical_form(a), canonical_form(b));
}

TEST(Canonical, OperandOrderInsensitive) {
  const std::vector<Variable> vars = {{"a", VarKind::Input}, {"b", VarKind::Input}};
  EXPECT_EQ(canonical_form(parse_element("G (a & b)", vars)), canonical_form(parse_element("G (b & a)", vars)));
  EXPECT_EQ(canonical_form(parse_element("G (a | (b | a))", vars)),
            canonical_form(parse_element("G ((a | b) | a)", vars)));
}

TEST(Canonical, DoubleNegationDropped) {
  const std::vector<Variable> vars = {{"a", VarKind::Input}};
  EXPECT_EQ(canonical_form(parse_element("GF !!a", vars)), canonical_form(parse_element("GF a", vars)));
}

TEST(Canonical, SemanticallyEqualButSyntacticallyDifferent) {
  const std::vector<Variable> vars = {{"r1", VarKind::Input}, {"h", VarKind::Input}};
  EXPECT_NE(canonical_form(parse_element("GF (!r1)", vars)),
            canonical_form(parse_element("GF (!r1 & !(r1 & !h))", vars)));
}

TEST(Canonical, ClassesStayDistinct) {
  const std::vector<Variable> vars = {{"a", VarKind::Input}};
  EXPECT_NE(canonical_form(parse_element("a", vars)), canonical_form(parse_element("G a", vars)));
  EXPECT_NE(canonical_form(parse_element("G a", vars)), canonical_form(parse_element("GF a", vars)));
}

TEST(Canonical, ReparsesToSameClassAndForm) {
  gen::Rng rng(5);
  const std::vector<std::string> names = {"a", "b", "c"};
  const std::vector<Variable> scope = {{"a", VarKind::Input}, {"b", VarKind::Input}, {"c", VarKind::Output}};
  for (int i = 0; i < 2000; ++i) {
    const Gr1Element e = gen::element(rng, names, 4);
    const std::string form = canonical_form(e);
    const Gr1Element back = parse_element(form, scope);
    EXPECT_EQ(back.kind, e.kind) << form;
    EXPECT_EQ(canonical_form(back), form);
  }
}

TEST(Canonical, PreservesMeaning) {
  gen::Rng rng(8);
  const std::vector<std::string> names = {"a", "b", "c"};
  const std::vector<Variable> scope = {{"a", VarKind::Input}, {"b", VarKind::Input}, {"c", VarKind::Output}};
  const auto rows = oracle::all_assignments(names);
  for (int i = 0; i < 500; ++i) {
    const Gr1Element e = gen::element(rng, names, 4);
    const Gr1Element back = parse_element(canonical_form(e), scope);
    for (const auto& now : rows) {
      for (const auto& next : rows) {
        ASSERT_EQ(oracle::eval(e.body, now, next), oracle::eval(back.body, now, next)) << canonical_form(e);
      }
    }
  }
}

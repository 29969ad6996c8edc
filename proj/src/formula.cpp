#include "gr1/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace gr1 {

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// Expr

Expr Expr::var(std::string name) {
  Expr e;
  e.op_ = Op::Var;
  e.name_ = std::move(name);
  return e;
}

Expr Expr::next(std::string name) {
  Expr e;
  e.op_ = Op::Next;
  e.name_ = std::move(name);
  return e;
}

Expr Expr::constant(bool value) {
  Expr e;
  e.op_ = Op::Const;
  e.value_ = value;
  return e;
}

Expr Expr::negate(Expr operand) {
  Expr e;
  e.op_ = Op::Not;
  e.operands_.push_back(std::move(operand));
  return e;
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (op != Op::And && op != Op::Or && op != Op::Implies && op != Op::Iff) {
    throw std::invalid_argument("Expr::binary: not a binary operator");
  }
  Expr e;
  e.op_ = op;
  e.operands_.reserve(2);
  e.operands_.push_back(std::move(lhs));
  e.operands_.push_back(std::move(rhs));
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.op_ != b.op_) return false;
  switch (a.op_) {
    case Op::Var:
    case Op::Next:
      return a.name_ == b.name_;
    case Op::Const:
      return a.value_ == b.value_;
    default:
      return a.operands_ == b.operands_;
  }
}

bool contains_next(const Expr& e) {
  if (e.op() == Op::Next) return true;
  return std::any_of(e.operands().begin(), e.operands().end(),
                     [](const Expr& c) { return contains_next(c); });
}

Expr to_next(const Expr& e) {
  switch (e.op()) {
    case Op::Var:
      return Expr::next(e.name());
    case Op::Next:
      throw std::invalid_argument("nested X operator");
    case Op::Const:
      return e;
    case Op::Not:
      return Expr::negate(to_next(e.operand(0)));
    default:
      return Expr::binary(e.op(), to_next(e.operand(0)), to_next(e.operand(1)));
  }
}

namespace {

void collect_names(const Expr& e, std::vector<std::string>& out) {
  if (e.op() == Op::Var || e.op() == Op::Next) {
    if (std::find(out.begin(), out.end(), e.name()) == out.end()) {
      out.push_back(e.name());
    }
    return;
  }
  for (const Expr& c : e.operands()) collect_names(c, out);
}

int precedence(Op op) {
  switch (op) {
    case Op::Iff:
      return 1;
    case Op::Implies:
      return 2;
    case Op::Or:
      return 3;
    case Op::And:
      return 4;
    default:
      return 5;
  }
}

const char* symbol(Op op) {
  switch (op) {
    case Op::And:
      return " & ";
    case Op::Or:
      return " | ";
    case Op::Implies:
      return " -> ";
    case Op::Iff:
      return " <-> ";
    default:
      return "";
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::Var:
      out += e.name();
      return;
    case Op::Next:
      out += "X ";
      out += e.name();
      return;
    case Op::Const:
      out += e.value() ? "TRUE" : "FALSE";
      return;
    case Op::Not: {
      const Expr& inner = e.operand(0);
      if (inner.op() == Op::Next) {
        out += "X !";
        out += inner.name();
        return;
      }
      out += '!';
      if (precedence(inner.op()) < 5) {
        out += '(';
        print(inner, out);
        out += ')';
      } else {
        print(inner, out);
      }
      return;
    }
    default: {
      const int p = precedence(e.op());
      const bool right_assoc = e.op() == Op::Implies;
      const Expr& lhs = e.operand(0);
      const Expr& rhs = e.operand(1);
      const bool wrap_lhs = precedence(lhs.op()) < p ||
                            (right_assoc && precedence(lhs.op()) == p);
      const bool wrap_rhs = precedence(rhs.op()) < p ||
                            (!right_assoc && precedence(rhs.op()) == p);
      if (wrap_lhs) out += '(';
      print(lhs, out);
      if (wrap_lhs) out += ')';
      out += symbol(e.op());
      if (wrap_rhs) out += '(';
      print(rhs, out);
      if (wrap_rhs) out += ')';
      return;
    }
  }
}

const Expr& strip_double_negation(const Expr& e) {
  const Expr* cur = &e;
  while (cur->op() == Op::Not && cur->operand(0).op() == Op::Not) {
    cur = &cur->operand(0).operand(0);
  }
  return *cur;
}

void flatten(const Expr& e, Op op, std::vector<const Expr*>& out) {
  const Expr& s = strip_double_negation(e);
  if (s.op() == op) {
    for (const Expr& c : s.operands()) flatten(c, op, out);
  } else {
    out.push_back(&s);
  }
}

std::string canonical(const Expr& raw) {
  const Expr& e = strip_double_negation(raw);
  switch (e.op()) {
    case Op::Var:
      return e.name();
    case Op::Next:
      return "X " + e.name();
    case Op::Const:
      return e.value() ? "TRUE" : "FALSE";
    case Op::Not: {
      const Expr& inner = e.operand(0);
      if (inner.op() == Op::Next) return "X !" + inner.name();
      return "!" + canonical(inner);
    }
    case Op::And:
    case Op::Or: {
      std::vector<const Expr*> parts;
      flatten(e, e.op(), parts);
      std::vector<std::string> strings;
      strings.reserve(parts.size());
      for (const Expr* p : parts) strings.push_back(canonical(*p));
      std::sort(strings.begin(), strings.end());
      std::string out = "(";
      for (std::size_t i = 0; i < strings.size(); ++i) {
        if (i > 0) out += symbol(e.op());
        out += strings[i];
      }
      out += ')';
      return out;
    }
    default:
      return "(" + canonical(e.operand(0)) + symbol(e.op()) +
             canonical(e.operand(1)) + ")";
  }
}

}  // namespace

std::vector<std::string> variables_of(const Expr& e) {
  std::vector<std::string> out;
  collect_names(e, out);
  return out;
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::string canonical_form(const Expr& e) { return canonical(e); }

// ---------------------------------------------------------------------------
// Gr1Element / Gr1Spec

Gr1Element Gr1Element::initial(Expr body) {
  if (contains_next(body)) {
    throw std::invalid_argument("initial condition must not contain X");
  }
  return {ElementClass::Initial, std::move(body)};
}

Gr1Element Gr1Element::invariant(Expr body) {
  return {ElementClass::Invariant, std::move(body)};
}

Gr1Element Gr1Element::fairness(Expr body) {
  if (contains_next(body)) {
    throw std::invalid_argument("fairness condition must not contain X");
  }
  return {ElementClass::Fairness, std::move(body)};
}

namespace {

std::string with_prefix(ElementClass kind, const std::string& body,
                        bool binary_top) {
  switch (kind) {
    case ElementClass::Initial:
      return body;
    case ElementClass::Invariant:
      return binary_top ? "G (" + body + ")" : "G " + body;
    case ElementClass::Fairness:
      return binary_top ? "GF (" + body + ")" : "GF " + body;
  }
  return body;
}

}  // namespace

std::string to_string(const Gr1Element& e) {
  const bool binary_top = precedence(e.body.op()) < 5;
  return with_prefix(e.kind, to_string(e.body), binary_top);
}

std::string canonical_form(const Gr1Element& e) {
  // Binary canonical bodies already carry their own parentheses.
  return with_prefix(e.kind, canonical(e.body), false);
}

std::vector<Variable> Gr1Spec::variables() const {
  std::vector<Variable> all = inputs;
  all.insert(all.end(), outputs.begin(), outputs.end());
  return all;
}

std::string to_string(const Gr1Spec& spec) {
  std::ostringstream out;
  auto declare = [&out](const char* keyword, const std::vector<Variable>& vars) {
    if (vars.empty()) return;
    out << keyword;
    for (const Variable& v : vars) out << ' ' << v.name;
    out << '\n';
  };
  declare("INPUT", spec.inputs);
  declare("OUTPUT", spec.outputs);
  for (const Gr1Element& a : spec.assumptions) {
    out << "ASSUMPTION " << to_string(a) << '\n';
  }
  for (const Gr1Element& g : spec.guarantees) {
    out << "GUARANTEE " << to_string(g) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Lexer and parser

namespace {

enum class Tok : std::uint8_t {
  Ident,
  Not,
  And,
  Or,
  Implies,
  Iff,
  LParen,
  RParen,
  End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> lex(std::string_view line, std::size_t line_no) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    const std::size_t col = i + 1;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else if (is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < line.size() && is_ident_char(line[j])) ++j;
      tokens.push_back({Tok::Ident, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (c == '!') {
      tokens.push_back({Tok::Not, "!", col});
      ++i;
    } else if (c == '&') {
      tokens.push_back({Tok::And, "&", col});
      ++i;
    } else if (c == '|') {
      tokens.push_back({Tok::Or, "|", col});
      ++i;
    } else if (c == '(') {
      tokens.push_back({Tok::LParen, "(", col});
      ++i;
    } else if (c == ')') {
      tokens.push_back({Tok::RParen, ")", col});
      ++i;
    } else if (line.substr(i, 2) == "->") {
      tokens.push_back({Tok::Implies, "->", col});
      i += 2;
    } else if (line.substr(i, 3) == "<->") {
      tokens.push_back({Tok::Iff, "<->", col});
      i += 3;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'",
                       line_no, col);
    }
  }
  tokens.push_back({Tok::End, "", line.size() + 1});
  return tokens;
}

bool is_keyword(std::string_view s) {
  static const std::unordered_set<std::string_view> kKeywords = {
      "G", "F", "X", "GF", "U", "TRUE", "FALSE", "true", "false"};
  return kKeywords.contains(s);
}

constexpr std::string_view kMemoryPrefix = "_mem_";

class FormulaParser {
 public:
  FormulaParser(std::vector<Token> tokens, std::size_t first, std::size_t line,
                const std::unordered_map<std::string, VarKind>& scope)
      : tokens_(std::move(tokens)), pos_(first), line_(line), scope_(scope) {}

  Gr1Element element() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "GF") {
      ++pos_;
      return finish(ElementClass::Fairness, t.column);
    }
    if (t.kind == Tok::Ident && t.text == "G") {
      ++pos_;
      if (peek().kind == Tok::Ident && peek().text == "F") {
        ++pos_;
        return finish(ElementClass::Fairness, t.column);
      }
      if (peek().kind == Tok::Ident && peek().text == "GF") {
        fail("nested temporal operator", peek());
      }
      return finish(ElementClass::Invariant, t.column);
    }
    if (t.kind == Tok::Ident && t.text == "F") {
      fail("F (eventually) outside GF is not GR(1); encode it with an "
           "auxiliary variable",
           t);
    }
    return finish(ElementClass::Initial, t.column);
  }

 private:
  [[noreturn]] void fail(const std::string& message, const Token& at) const {
    throw ParseError(message, line_, at.column);
  }

  const Token& peek() const { return tokens_[pos_]; }

  void expect(Tok kind, const char* what) {
    const Token& t = peek();
    if (t.kind == kind) {
      ++pos_;
      return;
    }
    if (t.kind == Tok::Ident && t.text == "U") {
      fail("U (until) is not GR(1); encode it with an auxiliary variable", t);
    }
    fail(std::string("expected ") + what, t);
  }

  Gr1Element finish(ElementClass kind, std::size_t column) {
    Expr body = iff();
    expect(Tok::End, "end of formula");
    if (kind != ElementClass::Invariant && contains_next(body)) {
      throw ParseError(kind == ElementClass::Fairness
                           ? "X is not allowed inside a fairness condition"
                           : "X is not allowed inside an initial condition",
                       line_, column);
    }
    return {kind, std::move(body)};
  }

  Expr iff() {
    Expr lhs = implies();
    while (peek().kind == Tok::Iff) {
      ++pos_;
      lhs = Expr::binary(Op::Iff, std::move(lhs), implies());
    }
    return lhs;
  }

  Expr implies() {
    Expr lhs = disjunction();
    if (peek().kind == Tok::Implies) {
      ++pos_;
      return Expr::binary(Op::Implies, std::move(lhs), implies());
    }
    return lhs;
  }

  Expr disjunction() {
    Expr lhs = conjunction();
    while (peek().kind == Tok::Or) {
      ++pos_;
      lhs = Expr::binary(Op::Or, std::move(lhs), conjunction());
    }
    return lhs;
  }

  Expr conjunction() {
    Expr lhs = unary();
    while (peek().kind == Tok::And) {
      ++pos_;
      lhs = Expr::binary(Op::And, std::move(lhs), unary());
    }
    return lhs;
  }

  Expr unary() {
    const Token& t = peek();
    if (t.kind == Tok::Not) {
      ++pos_;
      return Expr::negate(unary());
    }
    if (t.kind == Tok::Ident && t.text == "X") {
      ++pos_;
      Expr operand = unary();
      if (contains_next(operand)) fail("nested X operator", t);
      return to_next(operand);
    }
    return atom();
  }

  Expr atom() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      ++pos_;
      Expr inner = iff();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind != Tok::Ident) fail("expected expression", t);
    ++pos_;
    if (t.text == "TRUE" || t.text == "true") return Expr::constant(true);
    if (t.text == "FALSE" || t.text == "false") return Expr::constant(false);
    if (t.text == "G" || t.text == "GF") fail("nested temporal operator", t);
    if (t.text == "F") {
      fail("F (eventually) outside GF is not GR(1); encode it with an "
           "auxiliary variable",
           t);
    }
    if (t.text == "U") {
      fail("U (until) is not GR(1); encode it with an auxiliary variable", t);
    }
    if (!scope_.contains(t.text)) fail("undeclared variable '" + t.text + "'", t);
    return Expr::var(t.text);
  }

  std::vector<Token> tokens_;
  std::size_t pos_;
  std::size_t line_;
  const std::unordered_map<std::string, VarKind>& scope_;
};

struct PendingFormula {
  bool assumption;
  std::size_t line;
  std::vector<Token> tokens;
};

}  // namespace

Gr1Spec parse_spec(std::string_view text) {
  Gr1Spec spec;
  std::unordered_map<std::string, VarKind> scope;
  std::vector<PendingFormula> formulas;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::vector<Token> tokens = lex(line, line_no);
    if (tokens.front().kind == Tok::End) continue;

    const Token& head = tokens.front();
    if (head.kind != Tok::Ident) {
      throw ParseError("expected INPUT, OUTPUT, ASSUMPTION or GUARANTEE",
                       line_no, head.column);
    }
    if (head.text == "INPUT" || head.text == "OUTPUT") {
      const VarKind kind = head.text == "INPUT" ? VarKind::Input : VarKind::Output;
      if (tokens.size() == 2) {
        throw ParseError("expected variable name", line_no, tokens[1].column);
      }
      for (std::size_t i = 1; tokens[i].kind != Tok::End; ++i) {
        const Token& t = tokens[i];
        if (t.kind != Tok::Ident) {
          throw ParseError("expected variable name", line_no, t.column);
        }
        if (is_keyword(t.text)) {
          throw ParseError("'" + t.text + "' is a reserved word", line_no,
                           t.column);
        }
        if (t.text.starts_with(kMemoryPrefix)) {
          throw ParseError("names starting with '_mem_' are reserved",
                           line_no, t.column);
        }
        if (!scope.emplace(t.text, kind).second) {
          throw ParseError("duplicate variable '" + t.text + "'", line_no,
                           t.column);
        }
        (kind == VarKind::Input ? spec.inputs : spec.outputs)
            .push_back({t.text, kind});
      }
    } else if (head.text == "ASSUMPTION" || head.text == "GUARANTEE") {
      formulas.push_back({head.text == "ASSUMPTION", line_no, std::move(tokens)});
    } else {
      throw ParseError("expected INPUT, OUTPUT, ASSUMPTION or GUARANTEE",
                       line_no, head.column);
    }
    if (end == text.size()) break;
  }

  for (PendingFormula& f : formulas) {
    FormulaParser parser(std::move(f.tokens), 1, f.line, scope);
    Gr1Element element = parser.element();
    (f.assumption ? spec.assumptions : spec.guarantees).push_back(std::move(element));
  }
  return spec;
}

Gr1Element parse_element(std::string_view text, std::span<const Variable> scope) {
  std::unordered_map<std::string, VarKind> names;
  for (const Variable& v : scope) names.emplace(v.name, v.kind);
  FormulaParser parser(lex(text, 1), 0, 1, names);
  return parser.element();
}

// ---------------------------------------------------------------------------
// Universe / Valuation / eval

Universe::Universe(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > 64) {
    throw std::invalid_argument("Universe: at most 64 variables");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw std::invalid_argument("Universe: duplicate name '" + names_[i] + "'");
    }
  }
}

std::optional<std::size_t> Universe::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Valuation::Valuation(std::shared_ptr<const Universe> universe, std::uint64_t bits)
    : universe_(std::move(universe)), bits_(bits) {
  if (!universe_) throw std::invalid_argument("Valuation: null universe");
  if (universe_->size() < 64) bits_ &= (std::uint64_t{1} << universe_->size()) - 1;
}

bool Valuation::at(std::string_view name) const {
  const auto i = universe_->index_of(name);
  if (!i) throw std::out_of_range("variable '" + std::string(name) + "' not in universe");
  return (*this)[*i];
}

void Valuation::set(std::string_view name, bool value) {
  const auto i = universe_->index_of(name);
  if (!i) throw std::out_of_range("variable '" + std::string(name) + "' not in universe");
  const std::uint64_t mask = std::uint64_t{1} << *i;
  bits_ = value ? (bits_ | mask) : (bits_ & ~mask);
}

namespace {

bool evaluate(const Expr& expr, const Valuation& now, const Valuation* next) {
  switch (expr.op()) {
    case Op::Var:
      return now.at(expr.name());
    case Op::Next:
      return next->at(expr.name());
    case Op::Const:
      return expr.value();
    case Op::Not:
      return !evaluate(expr.operand(0), now, next);
    case Op::And:
      return evaluate(expr.operand(0), now, next) && evaluate(expr.operand(1), now, next);
    case Op::Or:
      return evaluate(expr.operand(0), now, next) || evaluate(expr.operand(1), now, next);
    case Op::Implies:
      return !evaluate(expr.operand(0), now, next) || evaluate(expr.operand(1), now, next);
    case Op::Iff:
      return evaluate(expr.operand(0), now, next) == evaluate(expr.operand(1), now, next);
  }
  return false;
}

}  // namespace

bool eval(const Expr& expr, const Valuation& now, const Valuation* next) {
  if (next == nullptr && contains_next(expr)) {
    throw std::invalid_argument("eval: next-state valuation required");
  }
  return evaluate(expr, now, next);
}

}  // namespace gr1

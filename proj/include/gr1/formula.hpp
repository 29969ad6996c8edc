#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gr1/errors.hpp"

namespace gr1 {

enum class VarKind : std::uint8_t { Input, Output, Memory };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Input;

  friend bool operator==(const Variable&, const Variable&) = default;
};

enum class Op : std::uint8_t { Var, Next, Const, Not, And, Or, Implies, Iff };

/// Boolean expression over current-state (`Var`) and next-state (`Next`)
/// variable references. Immutable value type; children are owned.
class Expr {
 public:
  Expr() = default;

  static Expr var(std::string name);
  static Expr next(std::string name);
  static Expr constant(bool value);
  static Expr negate(Expr operand);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  Op op() const noexcept { return op_; }
  /// Variable name of a `Var` or `Next` leaf.
  const std::string& name() const noexcept { return name_; }
  bool value() const noexcept { return value_; }
  const std::vector<Expr>& operands() const noexcept { return operands_; }
  const Expr& operand(std::size_t i) const { return operands_.at(i); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  Op op_ = Op::Const;
  bool value_ = true;
  std::string name_;
  std::vector<Expr> operands_;
};

bool contains_next(const Expr& e);

/// Rewrites every `Var` leaf into a `Next` leaf. Throws std::invalid_argument
/// if `e` already contains a `Next` (nested X).
Expr to_next(const Expr& e);

/// Distinct variable names mentioned by `e`, in first-occurrence order.
std::vector<std::string> variables_of(const Expr& e);

/// Concrete syntax with the minimum parentheses needed to re-parse the same
/// tree.
std::string to_string(const Expr& e);

enum class ElementClass : std::uint8_t { Initial, Invariant, Fairness };

/// One assumption or guarantee: `B` (initial), `G B` (invariant) or `GF B`
/// (fairness). Only invariants may reference next-state variables.
struct Gr1Element {
  ElementClass kind = ElementClass::Initial;
  Expr body;

  static Gr1Element initial(Expr body);
  static Gr1Element invariant(Expr body);
  static Gr1Element fairness(Expr body);

  friend bool operator==(const Gr1Element&, const Gr1Element&) = default;
};

std::string to_string(const Gr1Element& e);

/// Syntactic normal form used as assumption identity: associative And/Or are
/// flattened with operands sorted, double negations dropped. Every binary
/// subterm is parenthesised so the string re-parses to the same element class.
std::string canonical_form(const Gr1Element& e);
std::string canonical_form(const Expr& e);

struct Gr1Spec {
  std::vector<Variable> inputs;
  std::vector<Variable> outputs;
  std::vector<Gr1Element> assumptions;
  std::vector<Gr1Element> guarantees;

  /// Inputs followed by outputs.
  std::vector<Variable> variables() const;

  friend bool operator==(const Gr1Spec&, const Gr1Spec&) = default;
};

std::string to_string(const Gr1Spec& spec);

Gr1Spec parse_spec(std::string_view text);

/// Parses a single element (e.g. `G (!val -> X !cl)`) whose variables must be
/// among `scope`.
Gr1Element parse_element(std::string_view text, std::span<const Variable> scope);

/// Ordered variable names with O(1) lookup. At most 64 names.
class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const Universe& a, const Universe& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Total assignment over a universe, stored as a bit vector (bit i is the
/// value of universe name i).
class Valuation {
 public:
  Valuation(std::shared_ptr<const Universe> universe, std::uint64_t bits = 0);

  const Universe& universe() const noexcept { return *universe_; }
  std::uint64_t bits() const noexcept { return bits_; }

  bool operator[](std::size_t i) const { return (bits_ >> i) & 1U; }
  /// Throws std::out_of_range for names outside the universe.
  bool at(std::string_view name) const;
  void set(std::string_view name, bool value);

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.bits_ == b.bits_ && *a.universe_ == *b.universe_;
  }

 private:
  std::shared_ptr<const Universe> universe_;
  std::uint64_t bits_;
};

/// Evaluates `expr` with `Var` leaves read from `now` and `Next` leaves from
/// `next`. Throws std::invalid_argument if `expr` has a `Next` leaf and `next`
/// is null, std::out_of_range for variables outside the universe.
bool eval(const Expr& expr, const Valuation& now, const Valuation* next = nullptr);

}  // namespace gr1

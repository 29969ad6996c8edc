#pragma once

#include <cstdint>
#include <vector>

#include "gr1/formula.hpp"

namespace gr1 {

/// An expression bound to the bit positions of a universe. Evaluates over
/// packed current/next words via a truth table on its support, falling back to
/// tree walking for very wide supports.
class Predicate {
 public:
  /// Throws std::out_of_range if `expr` mentions a name outside `universe`.
  Predicate(const Expr& expr, const Universe& universe);

  bool operator()(std::uint64_t now, std::uint64_t next = 0) const;

  bool uses_next() const noexcept { return uses_next_; }

 private:
  struct Slot {
    unsigned bit;
    bool next;
  };

  bool walk(const Expr& e, std::uint64_t now, std::uint64_t next) const;

  static constexpr std::size_t kMaxTableSupport = 16;

  std::vector<Slot> support_;
  std::vector<std::uint8_t> table_;
  Expr expr_;
  std::vector<std::pair<std::string, unsigned>> bits_;
  bool uses_next_ = false;
};

/// Conjunction of predicates; true when empty.
class Conjunction {
 public:
  void add(Predicate p) { parts_.push_back(std::move(p)); }
  bool empty() const noexcept { return parts_.empty(); }
  bool operator()(std::uint64_t now, std::uint64_t next = 0) const {
    for (const Predicate& p : parts_) {
      if (!p(now, next)) return false;
    }
    return true;
  }

 private:
  std::vector<Predicate> parts_;
};

}  // namespace gr1

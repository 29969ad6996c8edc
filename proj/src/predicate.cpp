#include "gr1/predicate.hpp"

#include <algorithm>
#include <stdexcept>

namespace gr1 {

namespace {

void collect_slots(const Expr& e, std::vector<std::pair<std::string, bool>>& out) {
  if (e.op() == Op::Var || e.op() == Op::Next) {
    std::pair<std::string, bool> key{e.name(), e.op() == Op::Next};
    if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
    return;
  }
  for (const Expr& c : e.operands()) collect_slots(c, out);
}

}  // namespace

Predicate::Predicate(const Expr& expr, const Universe& universe) : expr_(expr) {
  std::vector<std::pair<std::string, bool>> leaves;
  collect_slots(expr, leaves);
  for (const auto& [name, next] : leaves) {
    const auto bit = universe.index_of(name);
    if (!bit) throw std::out_of_range("variable '" + name + "' not in universe");
    support_.push_back({static_cast<unsigned>(*bit), next});
    uses_next_ = uses_next_ || next;
    if (std::none_of(bits_.begin(), bits_.end(),
                     [&](const auto& p) { return p.first == name; })) {
      bits_.emplace_back(name, static_cast<unsigned>(*bit));
    }
  }
  if (support_.size() > kMaxTableSupport) return;

  table_.resize(std::size_t{1} << support_.size());
  for (std::size_t a = 0; a < table_.size(); ++a) {
    std::uint64_t now = 0;
    std::uint64_t nxt = 0;
    for (std::size_t k = 0; k < support_.size(); ++k) {
      if (((a >> k) & 1U) == 0) continue;
      (support_[k].next ? nxt : now) |= std::uint64_t{1} << support_[k].bit;
    }
    table_[a] = walk(expr_, now, nxt) ? 1 : 0;
  }
}

bool Predicate::operator()(std::uint64_t now, std::uint64_t next) const {
  if (table_.empty()) return walk(expr_, now, next);
  std::size_t index = 0;
  for (std::size_t k = 0; k < support_.size(); ++k) {
    const std::uint64_t word = support_[k].next ? next : now;
    index |= static_cast<std::size_t>((word >> support_[k].bit) & 1U) << k;
  }
  return table_[index] != 0;
}

bool Predicate::walk(const Expr& e, std::uint64_t now, std::uint64_t next) const {
  switch (e.op()) {
    case Op::Var:
    case Op::Next: {
      const auto it = std::find_if(bits_.begin(), bits_.end(),
                                   [&](const auto& p) { return p.first == e.name(); });
      const std::uint64_t word = e.op() == Op::Next ? next : now;
      return (word >> it->second) & 1U;
    }
    case Op::Const:
      return e.value();
    case Op::Not:
      return !walk(e.operand(0), now, next);
    case Op::And:
      return walk(e.operand(0), now, next) && walk(e.operand(1), now, next);
    case Op::Or:
      return walk(e.operand(0), now, next) || walk(e.operand(1), now, next);
    case Op::Implies:
      return !walk(e.operand(0), now, next) || walk(e.operand(1), now, next);
    case Op::Iff:
      return walk(e.operand(0), now, next) == walk(e.operand(1), now, next);
  }
  return false;
}

}  // namespace gr1

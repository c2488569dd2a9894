#pragma once

#include <algorithm>
#include <iterator>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace corgal {

using Group = std::set<std::string>;

enum class Op : std::uint8_t {
  Atom,
  Top,
  Bot,
  Not,
  And,
  Or,
  Imp,
  Iff,
  Know,
  KnowDual,
  Ann,
  AnnDual,
  RelGroup,
  RelGroupDual,
  Coal,
  CoalDual,
};

// Language strata, ordered by inclusion.
enum class Stratum : std::uint8_t { EL = 0, PAL = 1, RGAL = 2, CoRGAL = 3 };

inline const char* to_string(Stratum s) {
  switch (s) {
    case Stratum::EL: return "EL";
    case Stratum::PAL: return "PAL";
    case Stratum::RGAL: return "RGAL";
    case Stratum::CoRGAL: return "CoRGAL";
  }
  return "?";
}

/// Immutable formula handle. Copies share structure; subterms may be shared
/// between formulas, so the tree is really a DAG.
///
/// Child layout by operator:
///   Not, Know, KnowDual, Coal, CoalDual: `arg()`
///   And, Or, Imp, Iff:                   `lhs()`, `rhs()`
///   Ann, AnnDual:                        `announcement()`, `body()`
///   RelGroup, RelGroupDual:              `condition()` (the relativising
///                                        formula), `body()`
class Formula {
 public:
  static Formula atom(std::string name) { return make(Op::Atom, std::move(name), {}, {}, {}); }
  static Formula top() {
    static const Formula t = make(Op::Top, {}, {}, {}, {});
    return t;
  }
  static Formula bot() {
    static const Formula b = make(Op::Bot, {}, {}, {}, {});
    return b;
  }
  static Formula neg(Formula f) { return make(Op::Not, {}, {}, std::move(f.node_), {}); }
  static Formula conj(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
  static Formula disj(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }
  static Formula imp(Formula a, Formula b) { return binary(Op::Imp, std::move(a), std::move(b)); }
  static Formula iff(Formula a, Formula b) { return binary(Op::Iff, std::move(a), std::move(b)); }
  static Formula know(std::string agent, Formula f) {
    return make(Op::Know, std::move(agent), {}, std::move(f.node_), {});
  }
  static Formula know_dual(std::string agent, Formula f) {
    return make(Op::KnowDual, std::move(agent), {}, std::move(f.node_), {});
  }
  static Formula ann(Formula announcement, Formula body) {
    return binary(Op::Ann, std::move(announcement), std::move(body));
  }
  static Formula ann_dual(Formula announcement, Formula body) {
    return binary(Op::AnnDual, std::move(announcement), std::move(body));
  }
  static Formula rel_group(Group g, Formula condition, Formula body) {
    return make(Op::RelGroup, {}, std::move(g), std::move(condition.node_), std::move(body.node_));
  }
  static Formula rel_group_dual(Group g, Formula condition, Formula body) {
    return make(Op::RelGroupDual, {}, std::move(g), std::move(condition.node_),
                std::move(body.node_));
  }
  static Formula coal(Group g, Formula body) {
    return make(Op::Coal, {}, std::move(g), std::move(body.node_), {});
  }
  static Formula coal_dual(Group g, Formula body) {
    return make(Op::CoalDual, {}, std::move(g), std::move(body.node_), {});
  }

  // Left-folded conjunction; Top when empty.
  static Formula conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
  }
  // Left-folded disjunction; Bot when empty.
  static Formula disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
  }

  Op op() const { return node_->op; }
  // Atom name or agent name (Know/KnowDual).
  const std::string& name() const { return node_->name; }
  const std::string& agent() const { return node_->name; }
  const Group& group() const { return node_->group; }

  Formula arg() const { return Formula(node_->first); }
  Formula lhs() const { return Formula(node_->first); }
  Formula rhs() const { return Formula(node_->second); }
  Formula announcement() const { return Formula(node_->first); }
  Formula condition() const { return Formula(node_->first); }
  Formula body() const {
    return (op() == Op::Coal || op() == Op::CoalDual) ? Formula(node_->first)
                                                       : Formula(node_->second);
  }

  bool is_quantified() const {
    return op() == Op::RelGroup || op() == Op::RelGroupDual || op() == Op::Coal ||
           op() == Op::CoalDual;
  }

  // Node identity, stable for the lifetime of any handle sharing the node.
  const void* id() const { return node_.get(); }
  std::shared_ptr<const void> pin() const { return node_; }

  friend bool operator==(const Formula& a, const Formula& b) { return equal(a.node_.get(), b.node_.get()); }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  template <typename Fn>
  void for_each_child(Fn&& fn) const {
    if (node_->first) fn(Formula(node_->first));
    if (node_->second) fn(Formula(node_->second));
  }

 private:
  struct Node {
    Op op;
    std::string name;
    Group group;
    std::shared_ptr<const Node> first;
    std::shared_ptr<const Node> second;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula make(Op op, std::string name, Group g, std::shared_ptr<const Node> a,
                      std::shared_ptr<const Node> b) {
    return Formula(std::make_shared<const Node>(
        Node{op, std::move(name), std::move(g), std::move(a), std::move(b)}));
  }
  static Formula binary(Op op, Formula a, Formula b) {
    return make(op, {}, {}, std::move(a.node_), std::move(b.node_));
  }

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->op == b->op && a->name == b->name && a->group == b->group &&
           equal(a->first.get(), b->first.get()) && equal(a->second.get(), b->second.get());
  }

  std::shared_ptr<const Node> node_;
};

/// ψ_G = ⋀_{i∈G} K_i φ_i with every φ_i epistemic. Empty bindings denote Top.
struct GroupKnowledgeFormula {
  std::map<std::string, Formula> bindings;

  Group group() const {
    Group g;
    for (const auto& [agent, _] : bindings) g.insert(agent);
    return g;
  }

  Formula denotation() const {
    std::vector<Formula> parts;
    parts.reserve(bindings.size());
    for (const auto& [agent, f] : bindings) parts.push_back(Formula::know(agent, f));
    return Formula::conj_all(parts);
  }

  // Every agent in `g` announces K_i ⊤.
  static GroupKnowledgeFormula silence(const Group& g) {
    GroupKnowledgeFormula out;
    for (const auto& a : g) out.bindings.emplace(a, Formula::top());
    return out;
  }
};

inline Group group_union(const Group& a, const Group& b) {
  Group out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline Group group_minus(const Group& a, const Group& b) {
  Group out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline bool groups_disjoint(const Group& a, const Group& b) {
  for (const auto& x : a)
    if (b.count(x)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Strata

inline Stratum stratum(const Formula& f) {
  Stratum own = Stratum::EL;
  switch (f.op()) {
    case Op::Ann:
    case Op::AnnDual: own = Stratum::PAL; break;
    case Op::RelGroup:
    case Op::RelGroupDual: own = Stratum::RGAL; break;
    case Op::Coal:
    case Op::CoalDual: own = Stratum::CoRGAL; break;
    default: break;
  }
  f.for_each_child([&](const Formula& c) { own = std::max(own, stratum(c)); });
  return own;
}

// ---------------------------------------------------------------------------
// Sugar expansion

namespace detail {

// Expands only the outermost constructor; children are left untouched.
inline Formula expand_head(const Formula& f) {
  switch (f.op()) {
    case Op::Or:
      return Formula::neg(Formula::conj(Formula::neg(f.lhs()), Formula::neg(f.rhs())));
    case Op::Imp:
      return Formula::neg(Formula::conj(f.lhs(), Formula::neg(f.rhs())));
    case Op::Iff:
      return Formula::conj(Formula::neg(Formula::conj(f.lhs(), Formula::neg(f.rhs()))),
                           Formula::neg(Formula::conj(f.rhs(), Formula::neg(f.lhs()))));
    case Op::KnowDual:
      return Formula::neg(Formula::know(f.agent(), Formula::neg(f.arg())));
    case Op::AnnDual:
      return Formula::neg(Formula::ann(f.announcement(), Formula::neg(f.body())));
    case Op::RelGroupDual:
      return Formula::neg(Formula::rel_group(f.group(), f.condition(), Formula::neg(f.body())));
    case Op::CoalDual:
      return Formula::neg(Formula::coal(f.group(), Formula::neg(f.body())));
    default:
      return f;
  }
}

}  // namespace detail

/// Rewrites every dual and every derived connective into the core
/// Atom/Top/Bot/Not/And/Know/Ann/RelGroup/Coal constructors.
inline Formula desugar(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot: return f;
    case Op::Not: return Formula::neg(desugar(f.arg()));
    case Op::And: return Formula::conj(desugar(f.lhs()), desugar(f.rhs()));
    case Op::Know: return Formula::know(f.agent(), desugar(f.arg()));
    case Op::Ann: return Formula::ann(desugar(f.announcement()), desugar(f.body()));
    case Op::RelGroup:
      return Formula::rel_group(f.group(), desugar(f.condition()), desugar(f.body()));
    case Op::Coal: return Formula::coal(f.group(), desugar(f.arg()));
    default: return desugar(detail::expand_head(f));
  }
}

inline bool is_core(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
    case Op::Not:
    case Op::And:
    case Op::Know:
    case Op::Ann:
    case Op::RelGroup:
    case Op::Coal: break;
    default: return false;
  }
  bool ok = true;
  f.for_each_child([&](const Formula& c) { ok = ok && is_core(c); });
  return ok;
}

// ---------------------------------------------------------------------------
// Complexity measures. Defined on core formulas; anything else is desugared
// first. Top and Bot count like atoms.

namespace detail {

inline std::uint64_t size_core(const Formula& f) {
  switch (f.op()) {
    case Op::Not:
    case Op::Know:
    case Op::Coal: return size_core(f.arg()) + 1;
    // The relativising formula does not contribute.
    case Op::RelGroup: return size_core(f.body()) + 1;
    case Op::And: return size_core(f.lhs()) + size_core(f.rhs()) + 1;
    case Op::Ann: return size_core(f.announcement()) + 3 * size_core(f.body());
    default: return 1;
  }
}

inline std::uint64_t depth_box_core(const Formula& f) {
  switch (f.op()) {
    case Op::Not:
    case Op::Know:
    case Op::Coal: return depth_box_core(f.arg());
    case Op::And: return std::max(depth_box_core(f.lhs()), depth_box_core(f.rhs()));
    case Op::Ann: return depth_box_core(f.announcement()) + depth_box_core(f.body());
    case Op::RelGroup: return depth_box_core(f.condition()) + depth_box_core(f.body()) + 1;
    default: return 0;
  }
}

inline std::uint64_t depth_coal_core(const Formula& f) {
  switch (f.op()) {
    case Op::Not:
    case Op::Know: return depth_coal_core(f.arg());
    case Op::Coal: return depth_coal_core(f.arg()) + 1;
    case Op::And: return std::max(depth_coal_core(f.lhs()), depth_coal_core(f.rhs()));
    case Op::Ann: return depth_coal_core(f.announcement()) + depth_coal_core(f.body());
    case Op::RelGroup: return depth_coal_core(f.condition()) + depth_coal_core(f.body());
    default: return 0;
  }
}

inline const Formula& core_or(const Formula& f, Formula& scratch) {
  if (is_core(f)) return f;
  scratch = desugar(f);
  return scratch;
}

}  // namespace detail

inline std::uint64_t size(const Formula& f) {
  Formula scratch = f;
  return detail::size_core(detail::core_or(f, scratch));
}

/// Nesting depth of relativised group operators.
inline std::uint64_t depth_box(const Formula& f) {
  Formula scratch = f;
  return detail::depth_box_core(detail::core_or(f, scratch));
}

/// Nesting depth of coalition operators.
inline std::uint64_t depth_coal(const Formula& f) {
  Formula scratch = f;
  return detail::depth_coal_core(detail::core_or(f, scratch));
}

/// Lexicographic order on (coalition depth, group depth, size).
inline bool order_lt(const Formula& f, const Formula& g) {
  const auto cf = depth_coal(f), cg = depth_coal(g);
  if (cf != cg) return cf < cg;
  const auto bf = depth_box(f), bg = depth_box(g);
  if (bf != bg) return bf < bg;
  return size(f) < size(g);
}

// ---------------------------------------------------------------------------
// Necessity forms: contexts with exactly one hole, built from implications,
// knowledge and announcement boxes.

class NecessityForm {
 public:
  enum class Kind : std::uint8_t { Hole, Imp, Know, Ann };

  static NecessityForm hole() { return NecessityForm(Kind::Hole, std::nullopt, {}, nullptr); }
  // φ → η
  static NecessityForm imp(Formula antecedent, NecessityForm inner) {
    return NecessityForm(Kind::Imp, std::move(antecedent), {}, wrap(std::move(inner)));
  }
  static NecessityForm know(std::string agent, NecessityForm inner) {
    return NecessityForm(Kind::Know, std::nullopt, std::move(agent), wrap(std::move(inner)));
  }
  // [φ]η
  static NecessityForm ann(Formula announcement, NecessityForm inner) {
    return NecessityForm(Kind::Ann, std::move(announcement), {}, wrap(std::move(inner)));
  }

  Kind kind() const { return kind_; }
  const Formula& formula() const { return *formula_; }
  const std::string& agent() const { return agent_; }
  const NecessityForm& inner() const { return *inner_; }

  std::size_t depth() const { return kind_ == Kind::Hole ? 0 : 1 + inner_->depth(); }

  std::size_t hole_count() const { return kind_ == Kind::Hole ? 1 : inner_->hole_count(); }

  Formula instantiate(const Formula& f) const {
    switch (kind_) {
      case Kind::Hole: return f;
      case Kind::Imp: return Formula::imp(*formula_, inner_->instantiate(f));
      case Kind::Know: return Formula::know(agent_, inner_->instantiate(f));
      case Kind::Ann: return Formula::ann(*formula_, inner_->instantiate(f));
    }
    return f;
  }

 private:
  NecessityForm(Kind k, std::optional<Formula> f, std::string agent,
                std::shared_ptr<const NecessityForm> inner)
      : kind_(k), formula_(std::move(f)), agent_(std::move(agent)), inner_(std::move(inner)) {}

  static std::shared_ptr<const NecessityForm> wrap(NecessityForm n) {
    return std::make_shared<const NecessityForm>(std::move(n));
  }

  Kind kind_;
  std::optional<Formula> formula_;
  std::string agent_;
  std::shared_ptr<const NecessityForm> inner_;
};

inline Formula nf_instantiate(const NecessityForm& eta, const Formula& f) { return eta.instantiate(f); }

// Agents and atoms occurring anywhere in a formula.
inline void collect_symbols(const Formula& f, std::set<std::string>& atoms, std::set<std::string>& agents) {
  switch (f.op()) {
    case Op::Atom: atoms.insert(f.name()); break;
    case Op::Know:
    case Op::KnowDual: agents.insert(f.agent()); break;
    case Op::RelGroup:
    case Op::RelGroupDual:
    case Op::Coal:
    case Op::CoalDual: agents.insert(f.group().begin(), f.group().end()); break;
    default: break;
  }
  f.for_each_child([&](const Formula& c) { collect_symbols(c, atoms, agents); });
}

}  // namespace corgal

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corgal/errors.hpp"
#include "corgal/formula.hpp"
#include "corgal/model.hpp"

namespace corgal {

struct CheckerOptions {
  // Maximum number of choice-set decompositions per quantifier.
  std::uint64_t cap = kDefaultEnumerationCap;
};

struct TraceEntry {
  std::string op;
  // agent -> chosen union, by state name
  std::map<std::string, std::vector<std::string>> decomposition;
  bool verdict = false;
};

struct WitnessReport {
  bool verdict = false;
  // Present when an existential operator holds or a universal one fails.
  std::optional<GroupKnowledgeFormula> witness;
  // The responsible choice set, over the contracted model.
  std::optional<ChoiceSet> choice;
  std::vector<TraceEntry> trace;
  // The witness was substituted back and reproduced the verdict.
  bool rechecked = false;
};

/// Model checker with truth-set memoisation keyed by (model identity,
/// formula node). Quantified operators are evaluated on the bisimulation
/// contraction of the current model, enumerating announcements as choice
/// sets. Not thread-safe; use one instance per thread.
class Checker {
 public:
  explicit Checker(CheckerOptions opts = {}) : opts_(opts) {}

  const CheckerOptions& options() const { return opts_; }

  StateSet truth_set(const EpistemicModel& m, const Formula& f) {
    check_symbols(m, f);
    return truth(intern(m), f);
  }

  bool eval(const EpistemicModel& m, std::size_t w, const Formula& f) {
    if (w >= m.num_states()) throw UndeclaredSymbol("state index out of range");
    return truth_set(m, f).contains(w);
  }
  bool eval(const EpistemicModel& m, std::string_view w, const Formula& f) {
    return eval(m, m.require_state(w), f);
  }

  WitnessReport eval_witness(const EpistemicModel& m, std::size_t w, const Formula& f);
  WitnessReport eval_witness(const EpistemicModel& m, std::string_view w, const Formula& f) {
    return eval_witness(m, m.require_state(w), f);
  }

  /// Coalition operators through the relativised-group reformulation:
  /// [⟨G⟩]φ iff every ψ_G has ⟨A∖G, ψ_G⟩φ, and ⟨[G]⟩φ iff some ψ_G has
  /// [A∖G, ψ_G]φ, with ψ_G ranging over definable formulas of the
  /// contracted model.
  bool eval_coalition_alt(const EpistemicModel& m, std::size_t w, const Formula& f);
  bool eval_coalition_alt(const EpistemicModel& m, std::string_view w, const Formula& f) {
    return eval_coalition_alt(m, m.require_state(w), f);
  }

  /// The contracted model that witness choice sets refer to.
  const EpistemicModel& contracted(const EpistemicModel& m) { return *reduced(intern(m)).model; }

  void clear() {
    memo_.clear();
    models_.clear();
    reduced_.clear();
    restricted_.clear();
    characteristic_.clear();
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  using ModelPtr = std::shared_ptr<const EpistemicModel>;

  struct Reduced {
    ModelPtr model;
    std::vector<std::size_t> image;
  };

  struct MemoKey {
    std::uint64_t model;
    const void* node;
    bool operator==(const MemoKey& o) const { return model == o.model && node == o.node; }
  };
  struct MemoKeyHash {
    std::size_t operator()(const MemoKey& k) const {
      return std::hash<std::uint64_t>{}(k.model) * 31 + std::hash<const void*>{}(k.node);
    }
  };
  struct MemoEntry {
    std::shared_ptr<const void> pin;  // keeps the node address from being reused
    StateSet value;
  };

  struct RestrictKey {
    std::uint64_t model;
    StateSet subset;
    bool operator==(const RestrictKey& o) const { return model == o.model && subset == o.subset; }
  };
  struct RestrictKeyHash {
    std::size_t operator()(const RestrictKey& k) const { return k.subset.hash() * 31 + k.model; }
  };

  static void check_symbols(const EpistemicModel& m, const Formula& f) {
    std::set<std::string> atoms, agents;
    collect_symbols(f, atoms, agents);
    for (const auto& p : atoms)
      if (!m.atom_index(p)) throw UndeclaredSymbol("undeclared atom '" + p + "'");
    for (const auto& a : agents)
      if (!m.agent_index(a)) throw UndeclaredSymbol("undeclared agent '" + a + "'");
  }

  ModelPtr intern(const EpistemicModel& m) {
    auto it = models_.find(m.id());
    if (it != models_.end()) return it->second;
    auto p = std::make_shared<const EpistemicModel>(m);
    models_.emplace(m.id(), p);
    return p;
  }

  const Reduced& reduced(const ModelPtr& m) {
    auto it = reduced_.find(m->id());
    if (it != reduced_.end()) return it->second;
    auto c = contract(*m);
    Reduced r;
    if (c.quotient.num_states() == m->num_states()) {
      r.model = m;
      r.image.resize(m->num_states());
      for (std::size_t i = 0; i < r.image.size(); ++i) r.image[i] = i;
    } else {
      r.model = intern(c.quotient);
      r.image = std::move(c.image);
    }
    return reduced_.emplace(m->id(), std::move(r)).first->second;
  }

  ModelPtr restricted(const ModelPtr& m, const StateSet& s) {
    if (s.is_full()) return m;
    RestrictKey key{m->id(), s};
    auto it = restricted_.find(key);
    if (it != restricted_.end()) return it->second;
    auto p = intern(update(*m, s));
    restricted_.emplace(std::move(key), p);
    return p;
  }

  const std::vector<Formula>& characteristic(const ModelPtr& m) {
    auto it = characteristic_.find(m->id());
    if (it != characteristic_.end()) return it->second;
    return characteristic_.emplace(m->id(), characteristic_formulas(*m)).first->second;
  }

  // Truth set of `body` after announcing `s`, expressed over m's states.
  StateSet after(const ModelPtr& m, const StateSet& s, const Formula& body) {
    if (s.empty()) return StateSet(m->num_states());
    auto sub = restricted(m, s);
    if (sub == m) return truth(m, body);
    return lift_from(truth(sub, body), s);
  }

  StateSet truth(const ModelPtr& m, const Formula& f) {
    MemoKey key{m->id(), f.id()};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second.value;
    StateSet v = compute(m, f);
    memo_.emplace(key, MemoEntry{f.pin(), v});
    return v;
  }

  StateSet compute(const ModelPtr& m, const Formula& f) {
    const std::size_t n = m->num_states();
    switch (f.op()) {
      case Op::Atom: {
        auto p = m->atom_index(f.name());
        if (!p) throw UndeclaredSymbol("undeclared atom '" + f.name() + "'");
        return m->truth(*p);
      }
      case Op::Top: return StateSet::full(n);
      case Op::Bot: return StateSet(n);
      case Op::Not: return truth(m, f.arg()).complement();
      case Op::And: return truth(m, f.lhs()) & truth(m, f.rhs());
      case Op::Or: return truth(m, f.lhs()) | truth(m, f.rhs());
      case Op::Imp: return truth(m, f.lhs()).complement() | truth(m, f.rhs());
      case Op::Iff: {
        const auto a = truth(m, f.lhs()), b = truth(m, f.rhs());
        return (a & b) | (a.complement() & b.complement());
      }
      case Op::Know:
      case Op::KnowDual: {
        const auto a = m->require_agent(f.agent());
        const auto inner = truth(m, f.arg());
        StateSet out(n);
        for (const auto& b : m->blocks(a)) {
          const bool holds = f.op() == Op::Know ? b.subset_of(inner) : b.intersects(inner);
          if (holds) out |= b;
        }
        return out;
      }
      case Op::Ann:
      case Op::AnnDual: {
        const auto pre = truth(m, f.announcement());
        const auto post = after(m, pre, f.body());
        return f.op() == Op::Ann ? (pre.complement() | post) : post;
      }
      default: break;
    }
    // Quantified operators: evaluate on the contraction, pull back.
    const Reduced& r = reduced(m);
    const ModelPtr model = r.model;
    const auto image = r.image;
    const StateSet on_quotient = quantified(model, f);
    if (model == m) return on_quotient;
    StateSet out(n);
    for (std::size_t w = 0; w < n; ++w)
      if (on_quotient.contains(image[w])) out.insert(w);
    return out;
  }

  // Memoised "body holds after announcing s" for one operator evaluation.
  class Outcomes {
   public:
    Outcomes(Checker& c, ModelPtr m, Formula body) : c_(c), m_(std::move(m)), body_(std::move(body)) {}
    const StateSet& operator()(const StateSet& s) {
      auto it = cache_.find(s);
      if (it != cache_.end()) return it->second;
      return cache_.emplace(s, c_.after(m_, s, body_)).first->second;
    }

   private:
    Checker& c_;
    ModelPtr m_;
    Formula body_;
    std::unordered_map<StateSet, StateSet, StateSetHash> cache_;
  };

  // `m` is contracted.
  StateSet quantified(const ModelPtr& m, const Formula& f) {
    const std::size_t n = m->num_states();
    Outcomes good(*this, m, f.body());
    switch (f.op()) {
      case Op::RelGroup: {
        const auto cond = truth(m, f.condition());
        StateSet out = cond;
        for (const auto& c : distinct_choices(*m, f.group(), opts_.cap)) {
          const auto s = c.extension & cond;
          if (s.empty()) continue;
          // states of s where the body fails after the announcement
          StateSet bad = s & good(s).complement();
          out &= bad.complement();
        }
        return out;
      }
      case Op::RelGroupDual: {
        const auto cond = truth(m, f.condition());
        StateSet out = cond.complement();
        for (const auto& c : distinct_choices(*m, f.group(), opts_.cap)) {
          const auto s = c.extension & cond;
          if (s.empty()) continue;
          out |= s & good(s);
        }
        return out;
      }
      case Op::Coal:
      case Op::CoalDual: {
        const Group rest = group_minus(m->agent_group(), f.group());
        const auto mine = distinct_choices(*m, f.group(), opts_.cap);
        const auto theirs = distinct_choices(*m, rest, opts_.cap);
        StateSet out = f.op() == Op::Coal ? StateSet::full(n) : StateSet(n);
        for (const auto& x : mine) {
          if (f.op() == Op::Coal) {
            // states of x with some response y keeping the body true
            StateSet answered(n);
            for (const auto& y : theirs) {
              const auto s = x.extension & y.extension;
              if (s.empty()) continue;
              answered |= s & good(s);
            }
            out &= (x.extension & answered.complement()).complement();
          } else {
            // states of x where every response keeps the body true
            StateSet forced = x.extension;
            for (const auto& y : theirs) {
              const auto s = x.extension & y.extension;
              if (s.empty()) continue;
              forced &= (s & good(s).complement()).complement();
            }
            out |= forced;
          }
        }
        return out;
      }
      default:
        throw Error("internal: not a quantified operator");
    }
  }

  static std::map<std::string, std::vector<std::string>> describe(const EpistemicModel& m, const ChoiceSet& c) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [agent, u] : c.per_agent_union) {
      auto& names = out[agent];
      for (auto s : u.members()) names.push_back(m.state_name(s));
    }
    return out;
  }

  static ChoiceSet silent_choice(const EpistemicModel& m, const Group& g) {
    ChoiceSet c{g, {}, m.all_states()};
    for (const auto& a : g) c.per_agent_union.emplace(a, m.all_states());
    return c;
  }

  CheckerOptions opts_;
  std::unordered_map<MemoKey, MemoEntry, MemoKeyHash> memo_;
  std::unordered_map<std::uint64_t, ModelPtr> models_;
  std::unordered_map<std::uint64_t, Reduced> reduced_;
  std::unordered_map<RestrictKey, ModelPtr, RestrictKeyHash> restricted_;
  std::unordered_map<std::uint64_t, std::vector<Formula>> characteristic_;
};

inline WitnessReport Checker::eval_witness(const EpistemicModel& m0, std::size_t w, const Formula& f) {
  if (!f.is_quantified())
    throw NotQuantified("outermost operator is not a group or coalition announcement");
  WitnessReport rep;
  rep.verdict = eval(m0, w, f);

  const ModelPtr m = intern(m0);
  const Reduced& r = reduced(m);
  const ModelPtr n = r.model;
  const std::size_t v = r.image[w];
  Outcomes good(*this, n, f.body());

  const char* op_name = f.op() == Op::RelGroup       ? "[G,chi]"
                        : f.op() == Op::RelGroupDual ? "<G,chi>"
                        : f.op() == Op::Coal         ? "[<G>]"
                                                     : "<[G]>";
  std::optional<ChoiceSet> found;
  bool vacuous = false;

  if (f.op() == Op::RelGroup || f.op() == Op::RelGroupDual) {
    const auto cond = truth(n, f.condition());
    if (!cond.contains(v)) {
      vacuous = true;
    } else {
      for (const auto& c : distinct_choices(*n, f.group(), opts_.cap)) {
        if (!c.extension.contains(v)) continue;
        const bool holds = good(c.extension & cond).contains(v);
        rep.trace.push_back({op_name, describe(*n, c), holds});
        const bool responsible = f.op() == Op::RelGroup ? !holds : holds;
        if (responsible && !found) found = c;
      }
    }
  } else {
    const Group rest = group_minus(n->agent_group(), f.group());
    const auto theirs = distinct_choices(*n, rest, opts_.cap);
    for (const auto& x : distinct_choices(*n, f.group(), opts_.cap)) {
      if (!x.extension.contains(v)) continue;
      bool some = false, all = true;
      for (const auto& y : theirs) {
        if (!y.extension.contains(v)) continue;
        const bool holds = good(x.extension & y.extension).contains(v);
        some = some || holds;
        all = all && holds;
      }
      const bool holds = f.op() == Op::Coal ? some : all;
      rep.trace.push_back({op_name, describe(*n, x), holds});
      // [⟨G⟩] is refuted by an x no response can answer; ⟨[G]⟩ is
      // witnessed by an x every response keeps good.
      const bool responsible = f.op() == Op::Coal ? !some : all;
      if (responsible && !found) found = x;
    }
  }

  const bool admits = (f.op() == Op::RelGroupDual || f.op() == Op::CoalDual) ? rep.verdict : !rep.verdict;
  if (!admits) return rep;

  if (vacuous) {
    rep.witness = GroupKnowledgeFormula::silence(f.group());
    rep.choice = silent_choice(*n, f.group());
  } else {
    if (!found) throw Error("internal: verdict admits a witness but none was enumerated");
    rep.choice = *found;
    rep.witness = definable_formula(*n, *found, characteristic(n));
  }

  // Substitute the witness back and re-evaluate on the original model.
  const Formula psi = rep.witness->denotation();
  Formula check = Formula::top();
  bool expected = true;
  switch (f.op()) {
    case Op::RelGroup:
      check = Formula::conj(f.condition(), Formula::ann(Formula::conj(psi, f.condition()), f.body()));
      expected = false;
      break;
    case Op::RelGroupDual:
      check = Formula::imp(f.condition(), Formula::ann_dual(Formula::conj(psi, f.condition()), f.body()));
      expected = true;
      break;
    case Op::Coal:
      check = Formula::rel_group_dual(group_minus(m0.agent_group(), f.group()), psi, f.body());
      expected = false;
      break;
    default:
      check = Formula::rel_group(group_minus(m0.agent_group(), f.group()), psi, f.body());
      expected = true;
      break;
  }
  if (eval(m0, w, check) != expected) throw Error("internal: witness failed its self-check");
  rep.rechecked = true;
  return rep;
}

inline bool Checker::eval_coalition_alt(const EpistemicModel& m0, std::size_t w, const Formula& f) {
  if (f.op() != Op::Coal && f.op() != Op::CoalDual)
    throw NotQuantified("outermost operator is not a coalition announcement");
  check_symbols(m0, f);
  const ModelPtr m = intern(m0);
  const Reduced& r = reduced(m);
  const ModelPtr n = r.model;
  const auto& deltas = characteristic(n);
  const Group rest = group_minus(m0.agent_group(), f.group());
  for (const auto& c : distinct_choices(*n, f.group(), opts_.cap)) {
    const Formula psi = definable_formula(*n, c, deltas).denotation();
    if (f.op() == Op::Coal) {
      if (!eval(m0, w, Formula::rel_group_dual(rest, psi, f.body()))) return false;
    } else {
      if (eval(m0, w, Formula::rel_group(rest, psi, f.body()))) return true;
    }
  }
  return f.op() == Op::Coal;
}

}  // namespace corgal

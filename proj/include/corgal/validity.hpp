#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "corgal/checker.hpp"
#include "corgal/errors.hpp"
#include "corgal/figures.hpp"
#include "corgal/formula.hpp"
#include "corgal/model.hpp"
#include "corgal/parser.hpp"
#include "corgal/translate.hpp"

namespace corgal {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Vocabulary {
  std::vector<std::string> atoms;
  std::vector<std::string> agents;

  static Vocabulary of(const EpistemicModel& m) { return {m.atoms(), m.agents()}; }
  Group all() const { return Group(agents.begin(), agents.end()); }
};

// ---------------------------------------------------------------------------
// Random formulas

namespace detail {

inline std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(uniform_below(rng, n)); }

inline bool coin(Rng& rng, std::size_t num, std::size_t den) { return pick(rng, den) < num; }

}  // namespace detail

/// Each agent joins with probability 1/2, so the empty group appears with
/// probability 2^-|A|.
inline Group random_group(Rng& rng, const std::vector<std::string>& agents) {
  Group g;
  for (const auto& a : agents)
    if (detail::coin(rng, 1, 2)) g.insert(a);
  return g;
}

inline Formula random_formula(Rng& rng, Stratum stratum, std::size_t depth, const Vocabulary& v) {
  using detail::pick;
  auto leaf = [&]() {
    const auto r = pick(rng, 10);
    if (r == 0 || v.atoms.empty()) return Formula::top();
    if (r == 1) return Formula::bot();
    return Formula::atom(v.atoms[pick(rng, v.atoms.size())]);
  };
  if (depth == 0 || detail::coin(rng, 1, 5)) return leaf();

  enum Kind { Not, And, Or, Imp, Iff, Know, KnowDual, Ann, AnnDual, Rel, RelDual, Coal, CoalDual };
  std::vector<Kind> kinds{Not, And, Or, Imp, Iff};
  if (!v.agents.empty()) kinds.insert(kinds.end(), {Know, Know, KnowDual});
  if (stratum >= Stratum::PAL) kinds.insert(kinds.end(), {Ann, AnnDual});
  if (stratum >= Stratum::RGAL && !v.agents.empty()) kinds.insert(kinds.end(), {Rel, RelDual});
  if (stratum >= Stratum::CoRGAL && !v.agents.empty()) kinds.insert(kinds.end(), {Coal, CoalDual});

  auto sub = [&]() { return random_formula(rng, stratum, depth - 1, v); };
  auto agent = [&]() { return v.agents[pick(rng, v.agents.size())]; };
  switch (kinds[pick(rng, kinds.size())]) {
    case Not: return Formula::neg(sub());
    case And: { auto a = sub(); return Formula::conj(a, sub()); }
    case Or: { auto a = sub(); return Formula::disj(a, sub()); }
    case Imp: { auto a = sub(); return Formula::imp(a, sub()); }
    case Iff: { auto a = sub(); return Formula::iff(a, sub()); }
    case Know: { auto a = agent(); return Formula::know(a, sub()); }
    case KnowDual: { auto a = agent(); return Formula::know_dual(a, sub()); }
    case Ann: { auto a = sub(); return Formula::ann(a, sub()); }
    case AnnDual: { auto a = sub(); return Formula::ann_dual(a, sub()); }
    case Rel:
    case RelDual: {
      auto g = random_group(rng, v.agents);
      auto cond = detail::coin(rng, 1, 2) ? Formula::top() : sub();
      auto body = sub();
      return detail::coin(rng, 1, 2) ? Formula::rel_group(g, cond, body) : Formula::rel_group_dual(g, cond, body);
    }
    case Coal: { auto g = random_group(rng, v.agents); return Formula::coal(g, sub()); }
    case CoalDual: { auto g = random_group(rng, v.agents); return Formula::coal_dual(g, sub()); }
  }
  return leaf();
}

/// Deterministic in `seed`; stratum at most `s`; constructor nesting at most
/// `max_depth`.
inline Formula gen_formula(std::uint64_t seed, Stratum s, std::size_t max_depth,
                           const std::vector<std::string>& atoms, const std::vector<std::string>& agents) {
  Rng rng(seed);
  return random_formula(rng, s, max_depth, Vocabulary{atoms, agents});
}

/// Height of the syntax tree (leaves are 0).
inline std::size_t formula_height(const Formula& f) {
  std::size_t h = 0;
  f.for_each_child([&](const Formula& c) { h = std::max(h, formula_height(c) + 1); });
  return h;
}

inline GroupKnowledgeFormula random_group_knowledge(Rng& rng, const Group& g, std::size_t depth,
                                                    const Vocabulary& v) {
  GroupKnowledgeFormula out;
  for (const auto& a : g) out.bindings.emplace(a, random_formula(rng, Stratum::EL, depth, v));
  return out;
}

// ---------------------------------------------------------------------------
// Axiom schemas

/// Metavariable assignment for one axiom schema instance. A0/C0 use a
/// propositional skeleton over atoms x0, x1, ... that `meta` replaces.
struct Bindings {
  std::optional<Formula> phi, psi, chi;
  std::optional<std::string> agent;
  std::optional<std::string> atom;
  std::optional<Group> group, group2;
  std::optional<GroupKnowledgeFormula> psi_g;
  std::optional<Formula> skeleton;
  std::vector<Formula> meta;
  Group all_agents;
};

inline const std::vector<std::string>& axiom_ids() {
  static const std::vector<std::string> ids{"A0", "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8",
                                            "A9", "A10", "A11", "C0", "C1", "C2", "C3", "C4", "C5"};
  return ids;
}

namespace detail {

template <typename T>
const T& need(const std::optional<T>& v, const std::string& id, const char* what) {
  if (!v) throw MissingBinding(id + " needs binding '" + what + "'");
  return *v;
}

inline Formula substitute_meta(const Formula& f, const std::vector<Formula>& meta) {
  switch (f.op()) {
    case Op::Atom: {
      const auto& n = f.name();
      if (n.size() >= 2 && n[0] == 'x') {
        const auto i = std::stoul(n.substr(1));
        if (i < meta.size()) return meta[i];
        throw MissingBinding("skeleton variable " + n + " has no substitution");
      }
      return f;
    }
    case Op::Top:
    case Op::Bot: return f;
    case Op::Not: return Formula::neg(substitute_meta(f.arg(), meta));
    case Op::And: return Formula::conj(substitute_meta(f.lhs(), meta), substitute_meta(f.rhs(), meta));
    case Op::Or: return Formula::disj(substitute_meta(f.lhs(), meta), substitute_meta(f.rhs(), meta));
    case Op::Imp: return Formula::imp(substitute_meta(f.lhs(), meta), substitute_meta(f.rhs(), meta));
    case Op::Iff: return Formula::iff(substitute_meta(f.lhs(), meta), substitute_meta(f.rhs(), meta));
    default: throw MissingBinding("tautology skeleton must be propositional");
  }
}

}  // namespace detail

/// Closed instance of an axiom schema.
inline Formula axiom_instance(const std::string& id, const Bindings& b) {
  using detail::need;
  using F = Formula;
  if (id == "A0" || id == "C0") return detail::substitute_meta(need(b.skeleton, id, "skeleton"), b.meta);
  if (id == "A1") {
    const auto& a = need(b.agent, id, "agent");
    const auto& p = need(b.phi, id, "phi");
    const auto& q = need(b.psi, id, "psi");
    return F::imp(F::know(a, F::imp(p, q)), F::imp(F::know(a, p), F::know(a, q)));
  }
  if (id == "A2") {
    const auto& a = need(b.agent, id, "agent");
    const auto& p = need(b.phi, id, "phi");
    return F::imp(F::know(a, p), p);
  }
  if (id == "A3") {
    const auto& a = need(b.agent, id, "agent");
    const auto& p = need(b.phi, id, "phi");
    return F::imp(F::know(a, p), F::know(a, F::know(a, p)));
  }
  if (id == "A4") {
    const auto& a = need(b.agent, id, "agent");
    const auto& p = need(b.phi, id, "phi");
    return F::imp(F::neg(F::know(a, p)), F::know(a, F::neg(F::know(a, p))));
  }
  if (id == "A5") {
    const auto& p = need(b.phi, id, "phi");
    const auto atom = F::atom(need(b.atom, id, "atom"));
    return F::iff(F::ann(p, atom), F::imp(p, atom));
  }
  if (id == "A6") {
    const auto& p = need(b.phi, id, "phi");
    const auto& q = need(b.psi, id, "psi");
    return F::iff(F::ann(p, F::neg(q)), F::imp(p, F::neg(F::ann(p, q))));
  }
  if (id == "A7") {
    const auto& p = need(b.phi, id, "phi");
    const auto& q = need(b.psi, id, "psi");
    const auto& r = need(b.chi, id, "chi");
    return F::iff(F::ann(p, F::conj(q, r)), F::conj(F::ann(p, q), F::ann(p, r)));
  }
  if (id == "A8") {
    const auto& a = need(b.agent, id, "agent");
    const auto& p = need(b.phi, id, "phi");
    const auto& q = need(b.psi, id, "psi");
    return F::iff(F::ann(p, F::know(a, q)), F::imp(p, F::know(a, F::ann(p, q))));
  }
  if (id == "A9") {
    const auto& p = need(b.phi, id, "phi");
    const auto& q = need(b.psi, id, "psi");
    const auto& r = need(b.chi, id, "chi");
    return F::iff(F::ann(p, F::ann(q, r)), F::ann(F::conj(p, F::ann(p, q)), r));
  }
  if (id == "A10") {
    const auto& g = need(b.group, id, "group");
    const auto& c = need(b.chi, id, "chi");
    const auto& p = need(b.phi, id, "phi");
    const auto& pg = need(b.psi_g, id, "psi_g");
    if (pg.group() != g) throw MissingBinding("A10 needs psi_g over exactly the group");
    return F::imp(F::rel_group(g, c, p), F::conj(c, F::ann(F::conj(pg.denotation(), c), p)));
  }
  if (id == "A11") {
    const auto& g = need(b.group, id, "group");
    const auto& p = need(b.phi, id, "phi");
    const auto& pg = need(b.psi_g, id, "psi_g");
    if (pg.group() != g) throw MissingBinding("A11 needs psi_g over exactly the group");
    return F::imp(F::coal(g, p), F::rel_group_dual(group_minus(b.all_agents, g), pg.denotation(), p));
  }
  if (id == "C1") return F::neg(F::coal_dual(need(b.group, id, "group"), F::bot()));
  if (id == "C2") return F::coal_dual(need(b.group, id, "group"), F::top());
  if (id == "C3") {
    const auto& p = need(b.phi, id, "phi");
    return F::imp(F::neg(F::coal_dual(Group{}, F::neg(p))), F::coal_dual(b.all_agents, p));
  }
  if (id == "C4") {
    const auto& g = need(b.group, id, "group");
    const auto& p = need(b.phi, id, "phi");
    const auto& q = need(b.psi, id, "psi");
    return F::imp(F::coal_dual(g, F::conj(p, q)), F::coal_dual(g, p));
  }
  if (id == "C5") {
    const auto& g = need(b.group, id, "group");
    const auto& h = need(b.group2, id, "group2");
    const auto& p = need(b.phi, id, "phi");
    const auto& q = need(b.psi, id, "psi");
    if (!groups_disjoint(g, h)) throw DisjointnessViolation("C5 needs disjoint groups");
    return F::imp(F::conj(F::coal_dual(g, p), F::coal_dual(h, q)), F::coal_dual(group_union(g, h), F::conj(p, q)));
  }
  throw MissingBinding("unknown axiom '" + id + "'");
}

namespace detail {

inline bool is_tautology(const Formula& f, std::size_t vars) {
  for (std::uint64_t row = 0; row < (std::uint64_t{1} << vars); ++row) {
    std::function<bool(const Formula&)> ev = [&](const Formula& g) -> bool {
      switch (g.op()) {
        case Op::Atom: return row >> std::stoul(g.name().substr(1)) & 1U;
        case Op::Top: return true;
        case Op::Bot: return false;
        case Op::Not: return !ev(g.arg());
        case Op::And: return ev(g.lhs()) && ev(g.rhs());
        case Op::Or: return ev(g.lhs()) || ev(g.rhs());
        case Op::Imp: return !ev(g.lhs()) || ev(g.rhs());
        case Op::Iff: return ev(g.lhs()) == ev(g.rhs());
        default: return false;
      }
    };
    if (!ev(f)) return false;
  }
  return true;
}

// A propositional tautology over x0..x2 found by rejection sampling against
// its truth table; falls back to a Hilbert axiom.
inline Formula random_tautology(Rng& rng) {
  const Vocabulary meta{{"x0", "x1", "x2"}, {}};
  for (int attempt = 0; attempt < 400; ++attempt) {
    auto f = random_formula(rng, Stratum::EL, 3, meta);
    if (f.op() != Op::Top && is_tautology(f, 3)) return f;
  }
  static const std::array<const char*, 3> fallback{"x0 -> (x1 -> x0)", "(x0 -> (x1 -> x2)) -> ((x0 -> x1) -> (x0 -> x2))",
                                                   "(~x0 -> ~x1) -> (x1 -> x0)"};
  const auto f = fallback[pick(rng, fallback.size())];
  return parse_formula(f);
}

}  // namespace detail

/// Random metavariable assignment for `id`. Formula metavariables are drawn
/// up to `depth`; ψ_G formulas are epistemic.
inline Bindings random_bindings(Rng& rng, const std::string& id, const Vocabulary& v, std::size_t depth) {
  Bindings b;
  b.all_agents = v.all();
  auto f = [&]() { return random_formula(rng, Stratum::CoRGAL, depth, v); };
  b.phi = f();
  b.psi = f();
  b.chi = f();
  b.agent = v.agents[detail::pick(rng, v.agents.size())];
  b.atom = v.atoms[detail::pick(rng, v.atoms.size())];
  b.group = random_group(rng, v.agents);
  Group h;
  for (const auto& a : v.agents)
    if (!b.group->count(a) && detail::coin(rng, 1, 2)) h.insert(a);
  b.group2 = h;
  b.psi_g = random_group_knowledge(rng, *b.group, depth, v);
  if (id == "A0" || id == "C0") {
    b.skeleton = detail::random_tautology(rng);
    b.meta = {f(), f(), f()};
  }
  return b;
}

// ---------------------------------------------------------------------------
// Suites

struct SuiteConfig {
  std::uint64_t seed = 1;
  std::size_t model_count = 500;
  std::size_t max_states = 5;
  std::size_t n_agents = 3;
  std::size_t n_atoms = 3;
  std::size_t formula_depth = 3;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t bindings_per_model = 20;
  std::size_t nf_depth = 2;
  // Refuted quantified conclusions required per infinitary rule.
  std::size_t min_refutations = 200;
  // Sample count for the translation and measure properties.
  std::size_t samples = 1000;
};

inline constexpr std::size_t kMaxSuiteStates = 6;

inline void validate(const SuiteConfig& cfg) {
  if (cfg.max_states == 0 || cfg.n_agents == 0 || cfg.n_atoms == 0 || cfg.formula_depth == 0 ||
      cfg.enumeration_cap == 0)
    throw Error("suite configuration values must be positive");
  if (cfg.max_states > kMaxSuiteStates)
    throw Error("max_states may not exceed " + std::to_string(kMaxSuiteStates));
}

struct Failure {
  std::string claim;
  std::string model;  // model document
  std::string state;
  std::string formula;
  std::string witness;  // witness or counterexample detail; may be empty
};

struct SuiteReport {
  std::string suite;
  std::size_t cases_run = 0;
  std::size_t skipped = 0;
  std::vector<std::string> skip_notes;
  std::vector<Failure> failures;
  // Countermodels for open conjectures; never counted as failures.
  std::vector<Failure> findings;
  // Named tallies, such as refuted conclusions per rule.
  std::map<std::string, std::size_t> counters;

  bool passed() const { return failures.empty(); }
};

inline nlohmann::ordered_json failure_to_json(const Failure& f) {
  nlohmann::ordered_json j;
  j["claim"] = f.claim;
  j["model"] = nlohmann::ordered_json::parse(f.model);
  j["state"] = f.state;
  j["formula"] = f.formula;
  if (!f.witness.empty()) j["witness"] = f.witness;
  return j;
}

inline nlohmann::ordered_json report_to_json(const SuiteReport& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["passed"] = r.passed();
  j["cases_run"] = r.cases_run;
  j["skipped"] = r.skipped;
  j["skip_notes"] = r.skip_notes;
  if (!r.counters.empty()) j["counters"] = r.counters;
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : r.failures) j["failures"].push_back(failure_to_json(f));
  j["findings"] = nlohmann::ordered_json::array();
  for (const auto& f : r.findings) j["findings"].push_back(failure_to_json(f));
  return j;
}

inline std::string report_summary(const SuiteReport& r) {
  return r.suite + ": " + (r.passed() ? "PASS" : "FAIL") + " (" + std::to_string(r.cases_run) + " cases, " +
         std::to_string(r.failures.size()) + " failures, " + std::to_string(r.skipped) + " skipped" +
         (r.findings.empty() ? "" : ", " + std::to_string(r.findings.size()) + " findings") + ")";
}

namespace detail {

inline EpistemicModel suite_model(const SuiteConfig& cfg, std::size_t index) {
  const auto seed = splitmix64(cfg.seed * 0x100000001b3ULL + index);
  const std::size_t n = 1 + static_cast<std::size_t>(splitmix64(seed) % cfg.max_states);
  return random_model(seed, n, cfg.n_agents, cfg.n_atoms);
}

inline Rng suite_rng(const SuiteConfig& cfg, std::size_t index, std::uint64_t salt) {
  return Rng(splitmix64(splitmix64(cfg.seed + salt) ^ index));
}

// Checks that `f` holds at every state; records one case per state.
inline void expect_valid_on(SuiteReport& rep, Checker& ck, const EpistemicModel& m, const std::string& claim,
                            const Formula& f) {
  StateSet t;
  try {
    t = ck.truth_set(m, f);
  } catch (const EnumerationCapExceeded& e) {
    ++rep.skipped;
    rep.skip_notes.push_back(claim + ": " + e.what());
    return;
  }
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    ++rep.cases_run;
    if (!t.contains(s)) rep.failures.push_back({claim, render_model(m), m.state_name(s), render_formula(f), ""});
  }
}

}  // namespace detail

using AxiomFn = std::function<Formula(const Bindings&)>;
using AxiomTable = std::vector<std::pair<std::string, AxiomFn>>;

inline AxiomTable default_axiom_table() {
  AxiomTable t;
  for (const auto& id : axiom_ids()) t.emplace_back(id, [id](const Bindings& b) { return axiom_instance(id, b); });
  return t;
}

/// Every axiom instance must hold at every state of every sampled model.
inline SuiteReport run_axiom_suite(const SuiteConfig& cfg, const AxiomTable& table = default_axiom_table()) {
  validate(cfg);
  SuiteReport rep;
  rep.suite = "axioms";
  for (std::size_t i = 0; i < cfg.model_count; ++i) {
    const auto m = detail::suite_model(cfg, i);
    const auto voc = Vocabulary::of(m);
    Rng rng = detail::suite_rng(cfg, i, 11);
    Checker ck({cfg.enumeration_cap});
    for (const auto& [id, make] : table) {
      for (std::size_t k = 0; k < cfg.bindings_per_model; ++k) {
        auto b = random_bindings(rng, id, voc, cfg.formula_depth);
        if (id == "C5" && !groups_disjoint(*b.group, *b.group2)) continue;
        detail::expect_valid_on(rep, ck, m, id, make(b));
      }
    }
  }
  return rep;
}

/// Generates a formula that is valid by construction.
using PremiseFn = std::function<Formula(Rng&, const Vocabulary&, std::size_t depth)>;

inline std::vector<PremiseFn> default_premise_pool() {
  std::vector<PremiseFn> pool;
  for (const auto& id : axiom_ids())
    pool.push_back([id](Rng& rng, const Vocabulary& v, std::size_t depth) {
      auto b = random_bindings(rng, id, v, depth);
      if (id == "C5") b.group2 = group_minus(*b.group2, *b.group);
      return axiom_instance(id, b);
    });
  return pool;
}

/// Necessitation-style rules applied to valid premises must give formulas
/// true everywhere on the sampled models.
inline SuiteReport run_rule_suite(const SuiteConfig& cfg, const std::vector<PremiseFn>& pool = default_premise_pool()) {
  validate(cfg);
  SuiteReport rep;
  rep.suite = "rules";
  if (pool.empty()) return rep;
  // Premises are built at depth 1 so that conclusions stay within the
  // formula envelope after wrapping.
  const std::size_t pdepth = std::max<std::size_t>(1, cfg.formula_depth - 2);
  for (std::size_t i = 0; i < cfg.model_count; ++i) {
    const auto m = detail::suite_model(cfg, i);
    const auto voc = Vocabulary::of(m);
    Rng rng = detail::suite_rng(cfg, i, 23);
    Checker ck({cfg.enumeration_cap});
    for (std::size_t k = 0; k < cfg.bindings_per_model; ++k) {
      const Formula premise = pool[detail::pick(rng, pool.size())](rng, voc, pdepth);
      const Formula other = random_formula(rng, Stratum::CoRGAL, pdepth, voc);
      const Formula cond = random_formula(rng, Stratum::CoRGAL, pdepth, voc);
      const Group g = random_group(rng, voc.agents);
      const auto& a = voc.agents[detail::pick(rng, voc.agents.size())];
      // R0: from φ and φ → (φ ∨ θ), conclude φ ∨ θ.
      detail::expect_valid_on(rep, ck, m, "R0", Formula::disj(premise, other));
      detail::expect_valid_on(rep, ck, m, "R1", Formula::know(a, premise));
      detail::expect_valid_on(rep, ck, m, "R2", Formula::ann(other, premise));
      const auto before = rep.failures.size();
      detail::expect_valid_on(rep, ck, m, "R3", Formula::rel_group(g, cond, premise));
      for (auto j = before; j < rep.failures.size(); ++j) {
        const bool holds = ck.eval(m, rep.failures[j].state, cond);
        rep.failures[j].witness = std::string("condition ") + (holds ? "true" : "false") + " at this state";
      }
      detail::expect_valid_on(rep, ck, m, "R4", Formula::coal(g, premise));
    }
  }
  return rep;
}

inline NecessityForm random_necessity_form(Rng& rng, std::size_t depth, const Vocabulary& v, std::size_t fdepth) {
  if (depth == 0) return NecessityForm::hole();
  const std::size_t d = detail::pick(rng, depth + 1);
  NecessityForm eta = NecessityForm::hole();
  std::vector<std::function<NecessityForm(NecessityForm)>> layers;
  for (std::size_t i = 0; i < d; ++i) {
    switch (detail::pick(rng, 3)) {
      case 0: {
        auto f = random_formula(rng, Stratum::CoRGAL, fdepth, v);
        layers.push_back([f](NecessityForm in) { return NecessityForm::imp(f, std::move(in)); });
        break;
      }
      case 1: {
        auto a = v.agents[detail::pick(rng, v.agents.size())];
        layers.push_back([a](NecessityForm in) { return NecessityForm::know(a, std::move(in)); });
        break;
      }
      default: {
        auto f = random_formula(rng, Stratum::CoRGAL, fdepth, v);
        layers.push_back([f](NecessityForm in) { return NecessityForm::ann(f, std::move(in)); });
        break;
      }
    }
  }
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) eta = (*it)(std::move(eta));
  return eta;
}

/// Follows a refutation of η(q) at (m, w) down to the hole and returns the
/// witness that refutes q there. Requires η(q) to be false at (m, w).
inline std::optional<GroupKnowledgeFormula> refute_through(Checker& ck, const EpistemicModel& m, std::size_t w,
                                                           const NecessityForm& eta, const Formula& q) {
  switch (eta.kind()) {
    case NecessityForm::Kind::Hole: return ck.eval_witness(m, w, q).witness;
    case NecessityForm::Kind::Imp: return refute_through(ck, m, w, eta.inner(), q);
    case NecessityForm::Kind::Know: {
      const Formula inner = eta.inner().instantiate(q);
      const auto a = m.require_agent(eta.agent());
      for (auto v : m.block_containing(a, w).members())
        if (!ck.eval(m, v, inner)) return refute_through(ck, m, v, eta.inner(), q);
      return std::nullopt;
    }
    case NecessityForm::Kind::Ann: {
      const auto t = ck.truth_set(m, eta.formula());
      const auto sub = update(m, t);
      return refute_through(ck, sub, t.rank(w), eta.inner(), q);
    }
  }
  return std::nullopt;
}

/// Contrapositive content of the infinitary rules: whenever η([G,χ]φ) or
/// η([⟨G⟩]φ) fails, a concrete ψ_G refutes the corresponding premise
/// instance η(χ ∧ [ψ_G ∧ χ]φ) or η(⟨A∖G, ψ_G⟩φ).
inline SuiteReport run_quantifier_rule_suite(const SuiteConfig& cfg) {
  validate(cfg);
  SuiteReport rep;
  rep.suite = "quantifier-rules";
  std::size_t refuted_r5 = 0, refuted_r6 = 0;
  const std::size_t fdepth = std::max<std::size_t>(1, cfg.formula_depth - 1);
  const std::size_t limit = std::max<std::size_t>(cfg.model_count, 1) * 20;
  for (std::size_t i = 0; i < limit; ++i) {
    const bool enough = refuted_r5 >= cfg.min_refutations && refuted_r6 >= cfg.min_refutations;
    if (i >= cfg.model_count && enough) break;
    const auto m = detail::suite_model(cfg, i);
    const auto voc = Vocabulary::of(m);
    Rng rng = detail::suite_rng(cfg, i, 37);
    Checker ck({cfg.enumeration_cap});
    for (std::size_t k = 0; k < cfg.bindings_per_model; ++k) {
      const auto eta = random_necessity_form(rng, cfg.nf_depth, voc, 1);
      const Group g = random_group(rng, voc.agents);
      const Formula chi = detail::coin(rng, 1, 2) ? Formula::top() : random_formula(rng, Stratum::CoRGAL, fdepth, voc);
      const Formula phi = random_formula(rng, Stratum::CoRGAL, fdepth, voc);
      const std::size_t w = detail::pick(rng, m.num_states());
      const bool r5 = detail::coin(rng, 1, 2);
      const Formula q = r5 ? Formula::rel_group(g, chi, phi) : Formula::coal(g, phi);
      const Formula conclusion = eta.instantiate(q);
      try {
        ++rep.cases_run;
        if (ck.eval(m, w, conclusion)) continue;
        auto psi = refute_through(ck, m, w, eta, q);
        const std::string claim = r5 ? "R5" : "R6";
        if (!psi) {
          rep.failures.push_back({claim, render_model(m), m.state_name(w), render_formula(conclusion), "no witness"});
          continue;
        }
        const Formula premise =
            r5 ? eta.instantiate(Formula::conj(chi, Formula::ann(Formula::conj(psi->denotation(), chi), phi)))
               : eta.instantiate(Formula::rel_group_dual(group_minus(voc.all(), g), psi->denotation(), phi));
        // Independent re-evaluation with a fresh checker.
        Checker fresh({cfg.enumeration_cap});
        if (fresh.eval(m, w, premise)) {
          rep.failures.push_back({claim, render_model(m), m.state_name(w), render_formula(conclusion),
                                  render_formula(psi->denotation())});
          continue;
        }
        (r5 ? refuted_r5 : refuted_r6)++;
      } catch (const EnumerationCapExceeded& e) {
        ++rep.skipped;
        rep.skip_notes.push_back(std::string(r5 ? "R5" : "R6") + ": " + e.what());
      }
    }
  }
  if (refuted_r5 < cfg.min_refutations || refuted_r6 < cfg.min_refutations)
    rep.failures.push_back({"refutation-count", render_model(figures::train()), "w", "top",
                            "R5 refutations " + std::to_string(refuted_r5) + ", R6 refutations " +
                                std::to_string(refuted_r6) + ", required " + std::to_string(cfg.min_refutations)});
  rep.counters["refuted R5"] = refuted_r5;
  rep.counters["refuted R6"] = refuted_r6;
  return rep;
}

struct TheoremInstances {
  Formula group_exchange, monotone, repeated, nested, gal_idempotent, gal_union;
};

/// The proven validities relating group and coalition operators.
inline TheoremInstances theorem_instances(const Group& all, const Group& g, const Group& h, const Formula& phi) {
  using F = Formula;
  const auto top = F::top();
  return {
      F::imp(F::coal_dual(g, phi), F::rel_group_dual(g, top, F::rel_group(group_minus(all, g), top, phi))),
      F::imp(F::coal_dual(g, phi), F::coal_dual(group_union(g, h), phi)),
      F::imp(F::coal_dual(g, F::coal_dual(g, phi)), F::coal(group_minus(all, g), phi)),
      F::imp(F::coal_dual(g, F::coal_dual(h, phi)), F::coal(group_minus(all, group_union(g, h)), phi)),
      F::iff(F::rel_group_dual(g, top, phi), F::rel_group_dual(g, top, F::rel_group_dual(g, top, phi))),
      F::imp(F::rel_group_dual(g, top, F::rel_group_dual(h, top, phi)), F::rel_group_dual(group_union(g, h), top, phi)),
  };
}

inline SuiteReport run_theorem_suite(const SuiteConfig& cfg) {
  validate(cfg);
  SuiteReport rep;
  rep.suite = "theorems";
  for (std::size_t i = 0; i < cfg.model_count; ++i) {
    const auto m = detail::suite_model(cfg, i);
    const auto voc = Vocabulary::of(m);
    Rng rng = detail::suite_rng(cfg, i, 41);
    Checker ck({cfg.enumeration_cap});
    for (std::size_t k = 0; k < cfg.bindings_per_model; ++k) {
      const Formula phi = random_formula(rng, Stratum::CoRGAL, cfg.formula_depth - 1, voc);
      const Group g = random_group(rng, voc.agents);
      const Group h = random_group(rng, voc.agents);
      const auto t = theorem_instances(voc.all(), g, h, phi);
      detail::expect_valid_on(rep, ck, m, "coalition-group-exchange", t.group_exchange);
      detail::expect_valid_on(rep, ck, m, "coalition-monotone", t.monotone);
      detail::expect_valid_on(rep, ck, m, "coalition-repeated", t.repeated);
      detail::expect_valid_on(rep, ck, m, "coalition-nested", t.nested);
      detail::expect_valid_on(rep, ck, m, "gal-idempotent", t.gal_idempotent);
      detail::expect_valid_on(rep, ck, m, "gal-union", t.gal_union);
    }
  }
  return rep;
}

/// Searches for countermodels to schemas whose validity is open. Anything
/// found is reported under `findings`; the suite itself always passes.
inline SuiteReport run_open_question_suite(const SuiteConfig& cfg) {
  validate(cfg);
  SuiteReport rep;
  rep.suite = "open-questions";
  for (std::size_t i = 0; i < cfg.model_count; ++i) {
    const auto m = detail::suite_model(cfg, i);
    const auto voc = Vocabulary::of(m);
    Rng rng = detail::suite_rng(cfg, i, 43);
    Checker ck({cfg.enumeration_cap});
    for (std::size_t k = 0; k < cfg.bindings_per_model; ++k) {
      const Formula phi = random_formula(rng, Stratum::CoRGAL, cfg.formula_depth - 1, voc);
      const Group g = random_group(rng, voc.agents);
      const Group h = random_group(rng, voc.agents);
      const Group all = voc.all();
      using F = Formula;
      const std::vector<std::pair<std::string, Formula>> targets{
          {"coalition-idempotent", F::imp(F::coal_dual(g, F::coal_dual(g, phi)), F::coal_dual(g, phi))},
          {"group-exchange-converse", F::imp(F::rel_group_dual(g, F::top(), F::rel_group(group_minus(all, g), F::top(), phi)),
                                    F::coal_dual(g, phi))},
          {"coalition-union", F::imp(F::coal_dual(g, F::coal_dual(h, phi)), F::coal_dual(group_union(g, h), phi))},
      };
      for (const auto& [claim, f] : targets) {
        SuiteReport scratch;
        detail::expect_valid_on(scratch, ck, m, claim, f);
        rep.cases_run += scratch.cases_run;
        rep.skipped += scratch.skipped;
        rep.skip_notes.insert(rep.skip_notes.end(), scratch.skip_notes.begin(), scratch.skip_notes.end());
        rep.findings.insert(rep.findings.end(), scratch.failures.begin(), scratch.failures.end());
      }
    }
  }
  return rep;
}

namespace detail {

inline void expect_verdict(SuiteReport& rep, Checker& ck, const EpistemicModel& m, const std::string& state,
                           const std::string& claim, const std::string& text, bool expected) {
  ++rep.cases_run;
  const Formula f = parse_formula(text);
  if (ck.eval(m, state, f) != expected)
    rep.failures.push_back({claim, render_model(m), state, render_formula(f),
                            std::string("expected ") + (expected ? "true" : "false")});
}

}  // namespace detail

/// Exact verdicts on the train example and the counterexample model.
inline SuiteReport run_counterexample_repro(const EpistemicModel& train = figures::train(),
                                            const EpistemicModel& counter = figures::counterexample()) {
  SuiteReport rep;
  rep.suite = "repro";
  Checker ck;
  detail::expect_verdict(rep, ck, train, "w", "train-announce", "[! ~p] K c ~p", true);
  detail::expect_verdict(rep, ck, train, "w", "train-cath-alone", "[{c}, top] (~K c ~p & ~K c p)", true);
  detail::expect_verdict(rep, ck, train, "w", "train-ann-bob", "<[{a,b}]> (~K c ~p & ~K c p)", true);
  detail::expect_verdict(rep, ck, train, "w", "train-ann-cath", "[<{a,c}>] (K c ~p | K c p)", true);

  const std::string goal = std::string("(") + figures::kGoalText + ")";
  detail::expect_verdict(rep, ck, counter, "pqr", "united-coalition", "<[{a,b}]> " + goal, true);
  detail::expect_verdict(rep, ck, counter, "pqr", "split-coalition", "[<{a}>] [<{b}>] ~" + goal, true);
  detail::expect_verdict(rep, ck, counter, "pqr", "split-coalition-dual", "<[{a}]> <[{b}]> " + goal, false);
  detail::expect_verdict(rep, ck, counter, "pqr", "outsider-coalition", "[<{c}>] " + goal, true);
  // Both non-validities: antecedent true, consequent false at pqr.
  detail::expect_verdict(rep, ck, counter, "pqr", "split-nonvalidity",
                         "<[{a,b}]> " + goal + " -> <[{a}]> <[{b}]> " + goal, false);
  detail::expect_verdict(rep, ck, counter, "pqr", "corollary-nonvalidity",
                         "[<{c}>] " + goal + " -> <[{a}]> <[{b}]> " + goal, false);

  // The synthesised witness must carve out the same states as K_a q ∧ K_b ⊤.
  ++rep.cases_run;
  try {
    const auto w = ck.eval_witness(counter, "pqr", parse_formula("<[{a,b}]> " + goal));
    const auto expected = ck.truth_set(counter, parse_formula("K a q & K b top"));
    if (!w.verdict || !w.witness || ck.truth_set(counter, w.witness->denotation()) != expected)
      rep.failures.push_back({"united-witness", render_model(counter), "pqr", "<[{a,b}]> " + goal,
                              w.witness ? render_formula(w.witness->denotation()) : "no witness"});
  } catch (const Error& e) {
    rep.failures.push_back({"united-witness", render_model(counter), "pqr", "<[{a,b}]> " + goal, e.what()});
  }
  return rep;
}

/// PAL translation equivalence plus the measure inequalities used by the
/// truth-lemma induction.
inline SuiteReport run_translation_and_measure_suite(const SuiteConfig& cfg) {
  validate(cfg);
  SuiteReport rep;
  rep.suite = "translation-measures";
  Rng rng(splitmix64(cfg.seed + 53));

  std::size_t triples = 0;
  for (std::size_t i = 0; triples < cfg.samples; ++i) {
    const auto m = detail::suite_model(cfg, i);
    const auto voc = Vocabulary::of(m);
    const Formula f = random_formula(rng, Stratum::PAL, cfg.formula_depth, voc);
    const Formula t = pal_to_el(f);
    Checker ck({cfg.enumeration_cap});
    const auto a = ck.truth_set(m, f), b = ck.truth_set(m, t);
    if (stratum(t) != Stratum::EL)
      rep.failures.push_back({"translation-stratum", render_model(m), m.state_name(0), render_formula(f), render_formula(t)});
    for (std::size_t s = 0; s < m.num_states(); ++s) {
      ++rep.cases_run;
      ++triples;
      if (a.contains(s) != b.contains(s))
        rep.failures.push_back({"translation", render_model(m), m.state_name(s), render_formula(f), render_formula(t)});
    }
  }

  const Vocabulary voc{{"p", "q", "r"}, [&] {
                         std::vector<std::string> a;
                         for (std::size_t i = 0; i < cfg.n_agents; ++i) a.push_back(agent_name(i));
                         return a;
                       }()};
  const std::string dummy_model = render_model(figures::train());
  auto record = [&](const std::string& claim, bool ok, const Formula& lhs, const Formula& rhs) {
    ++rep.cases_run;
    if (!ok) rep.failures.push_back({claim, dummy_model, "w", render_formula(lhs), render_formula(rhs)});
  };
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const auto tau = random_formula(rng, Stratum::CoRGAL, cfg.formula_depth, voc);
    const auto chi = random_formula(rng, Stratum::CoRGAL, cfg.formula_depth, voc);
    const auto phi = random_formula(rng, Stratum::CoRGAL, cfg.formula_depth, voc);
    const auto g = random_group(rng, voc.agents);
    const auto psi = random_group_knowledge(rng, g, cfg.formula_depth, voc).denotation();
    const auto rest = group_minus(voc.all(), g);

    const auto rel = Formula::rel_group(g, chi, phi);
    const auto unfolded = Formula::conj(chi, Formula::ann(Formula::conj(psi, chi), phi));
    const auto coal = Formula::coal(g, phi);
    const auto answered = Formula::rel_group_dual(rest, psi, phi);
    record("measure-1", order_lt(unfolded, rel), unfolded, rel);
    record("measure-2", order_lt(Formula::ann(tau, unfolded), Formula::ann(tau, rel)), Formula::ann(tau, unfolded),
           Formula::ann(tau, rel));
    record("measure-3", order_lt(answered, coal), answered, coal);
    record("measure-4", order_lt(Formula::ann(tau, answered), Formula::ann(tau, coal)), Formula::ann(tau, answered),
           Formula::ann(tau, coal));

    record("order-irreflexive", !order_lt(tau, tau), tau, tau);
    if (order_lt(tau, chi) && order_lt(chi, phi)) record("order-transitive", order_lt(tau, phi), tau, phi);
  }
  return rep;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"axioms", "rules", "quantifier-rules", "theorems",
                                              "repro", "translation-measures", "open-questions"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  if (name == "axioms") return run_axiom_suite(cfg);
  if (name == "rules") return run_rule_suite(cfg);
  if (name == "quantifier-rules") return run_quantifier_rule_suite(cfg);
  if (name == "theorems") return run_theorem_suite(cfg);
  if (name == "repro") return run_counterexample_repro();
  if (name == "translation-measures") return run_translation_and_measure_suite(cfg);
  if (name == "open-questions") return run_open_question_suite(cfg);
  throw Error("unknown suite '" + name + "'");
}

}  // namespace corgal

#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corgal/errors.hpp"
#include "corgal/formula.hpp"

namespace corgal {

/// Subset of a model's states, as a fixed-universe bitset.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe) : n_(universe), words_((universe + 63) / 64, 0) {}

  static StateSet full(std::size_t universe) {
    StateSet s(universe);
    for (std::size_t i = 0; i < universe; ++i) s.insert(i);
    return s;
  }
  static StateSet of(std::size_t universe, std::initializer_list<std::size_t> members) {
    StateSet s(universe);
    for (auto m : members) s.insert(m);
    return s;
  }

  std::size_t universe() const { return n_; }
  bool contains(std::size_t i) const { return i < n_ && ((words_[i / 64] >> (i % 64)) & 1U); }
  void insert(std::size_t i) { words_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
  void erase(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  bool is_full() const { return count() == n_; }

  bool subset_of(const StateSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool intersects(const StateSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  StateSet& operator&=(const StateSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  StateSet& operator|=(const StateSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }

  StateSet complement() const {
    StateSet out(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    out.trim();
    return out;
  }

  // Number of members strictly below i: the index of i inside a restriction.
  std::size_t rank(std::size_t i) const {
    std::size_t r = 0;
    for (std::size_t w = 0; w < i / 64; ++w) r += static_cast<std::size_t>(std::popcount(words_[w]));
    if (i % 64) r += static_cast<std::size_t>(std::popcount(words_[i / 64] & ((std::uint64_t{1} << (i % 64)) - 1)));
    return r;
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  std::optional<std::size_t> first() const {
    for (std::size_t i = 0; i < n_; ++i)
      if (contains(i)) return i;
    return std::nullopt;
  }

  std::size_t hash() const {
    std::size_t h = std::hash<std::size_t>{}(n_);
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  friend bool operator==(const StateSet& a, const StateSet& b) { return a.n_ == b.n_ && a.words_ == b.words_; }
  friend bool operator!=(const StateSet& a, const StateSet& b) { return !(a == b); }
  // Orders by membership of the lowest differing state (members first).
  friend bool operator<(const StateSet& a, const StateSet& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    for (std::size_t i = 0; i < a.n_; ++i) {
      const bool x = a.contains(i), y = b.contains(i);
      if (x != y) return x;
    }
    return false;
  }

 private:
  void trim() {
    if (n_ % 64 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct StateSetHash {
  std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

inline bool valid_symbol(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

/// Finite multi-agent S5 model: states, one partition per agent, valuation.
/// Immutable. Every constructed model gets a fresh identity; copies share it.
class EpistemicModel {
 public:
  EpistemicModel(std::vector<std::string> agents, std::vector<std::string> atoms,
                 std::vector<std::string> states, std::vector<std::vector<StateSet>> partitions,
                 std::vector<StateSet> valuation, std::optional<std::string> designated = std::nullopt)
      : agents_(std::move(agents)),
        atoms_(std::move(atoms)),
        states_(std::move(states)),
        partitions_(std::move(partitions)),
        valuation_(std::move(valuation)),
        designated_(std::move(designated)),
        id_(next_id()) {
    validate();
    index();
  }

  std::uint64_t id() const { return id_; }

  std::size_t num_states() const { return states_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(std::size_t i) const { return states_.at(i); }
  std::optional<std::size_t> state_index(std::string_view name) const { return find(states_, name); }
  std::size_t require_state(std::string_view name) const {
    auto i = state_index(name);
    if (!i) throw UndeclaredSymbol("unknown state '" + std::string(name) + "'");
    return *i;
  }

  const std::vector<std::string>& agents() const { return agents_; }
  std::optional<std::size_t> agent_index(std::string_view name) const { return find(agents_, name); }
  std::size_t require_agent(std::string_view name) const {
    auto i = agent_index(name);
    if (!i) throw UndeclaredSymbol("undeclared agent '" + std::string(name) + "'");
    return *i;
  }
  Group agent_group() const { return Group(agents_.begin(), agents_.end()); }

  const std::vector<std::string>& atoms() const { return atoms_; }
  std::optional<std::size_t> atom_index(std::string_view name) const { return find(atoms_, name); }

  // Blocks ordered by their lowest state.
  const std::vector<StateSet>& blocks(std::size_t agent) const { return partitions_.at(agent); }
  std::size_t block_of(std::size_t agent, std::size_t state) const { return block_index_[agent][state]; }
  const StateSet& block_containing(std::size_t agent, std::size_t state) const {
    return partitions_[agent][block_index_[agent][state]];
  }

  const StateSet& truth(std::size_t atom) const { return valuation_.at(atom); }
  const std::vector<StateSet>& valuation() const { return valuation_; }

  const std::optional<std::string>& designated() const { return designated_; }

  StateSet all_states() const { return StateSet::full(states_.size()); }

  bool same_valuation(std::size_t s, std::size_t t) const {
    return std::all_of(valuation_.begin(), valuation_.end(),
                       [&](const StateSet& v) { return v.contains(s) == v.contains(t); });
  }

 private:
  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
  }

  static std::optional<std::size_t> find(const std::vector<std::string>& v, std::string_view name) {
    auto it = std::find(v.begin(), v.end(), name);
    if (it == v.end()) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
  }

  static void check_names(const std::vector<std::string>& names, const char* what) {
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (!valid_symbol(sorted[i])) throw ModelError(std::string("invalid ") + what + " name '" + sorted[i] + "'");
      if (i > 0 && sorted[i] == sorted[i - 1])
        throw ModelError(std::string("duplicate ") + what + " '" + sorted[i] + "'");
    }
  }

  void validate() {
    if (states_.empty()) throw ModelError("model has no states");
    check_names(states_, "state");
    check_names(agents_, "agent");
    check_names(atoms_, "atom");
    const std::size_t n = states_.size();
    if (partitions_.size() != agents_.size()) throw ModelError("one partition per agent required");
    if (valuation_.size() != atoms_.size()) throw ModelError("one truth set per atom required");
    for (const auto& v : valuation_)
      if (v.universe() != n) throw ModelError("valuation refers to states outside the model");
    for (std::size_t a = 0; a < agents_.size(); ++a) {
      StateSet seen(n);
      for (const auto& b : partitions_[a]) {
        if (b.universe() != n) throw ModelError("block refers to states outside the model");
        if (b.empty()) throw ModelError("partition of agent '" + agents_[a] + "' has an empty block");
        if (b.intersects(seen)) throw ModelError("partition of agent '" + agents_[a] + "' has overlapping blocks");
        seen |= b;
      }
      if (!seen.is_full()) throw ModelError("partition of agent '" + agents_[a] + "' does not cover all states");
      std::sort(partitions_[a].begin(), partitions_[a].end(),
                [](const StateSet& x, const StateSet& y) { return *x.first() < *y.first(); });
    }
    if (designated_ && !state_index(*designated_))
      throw ModelError("designated state '" + *designated_ + "' is not declared");
  }

  void index() {
    block_index_.assign(agents_.size(), std::vector<std::size_t>(states_.size(), 0));
    for (std::size_t a = 0; a < agents_.size(); ++a)
      for (std::size_t b = 0; b < partitions_[a].size(); ++b)
        for (auto s : partitions_[a][b].members()) block_index_[a][s] = b;
  }

  std::vector<std::string> agents_;
  std::vector<std::string> atoms_;
  std::vector<std::string> states_;
  std::vector<std::vector<StateSet>> partitions_;
  std::vector<std::vector<std::size_t>> block_index_;
  std::vector<StateSet> valuation_;
  std::optional<std::string> designated_;
  std::uint64_t id_;
};

// ---------------------------------------------------------------------------
// Public announcement update

/// Re-expresses `s` (a subset of the parent) in the restricted model's indices.
inline StateSet restrict_to(const StateSet& s, const StateSet& domain) {
  StateSet out(domain.count());
  std::size_t k = 0;
  for (auto i : domain.members()) {
    if (s.contains(i)) out.insert(k);
    ++k;
  }
  return out;
}

/// Inverse of `restrict_to`: lifts a subset of the restricted model back.
inline StateSet lift_from(const StateSet& sub, const StateSet& domain) {
  StateSet out(domain.universe());
  std::size_t k = 0;
  for (auto i : domain.members()) {
    if (sub.contains(k)) out.insert(i);
    ++k;
  }
  return out;
}

/// Restriction of `m` to the states in `keep`.
inline EpistemicModel update(const EpistemicModel& m, const StateSet& keep) {
  if (keep.universe() != m.num_states()) throw ModelError("announcement extension is over a different model");
  if (keep.empty()) throw ModelError("cannot update with an empty announcement extension");
  std::vector<std::string> states;
  for (auto i : keep.members()) states.push_back(m.state_name(i));
  std::vector<std::vector<StateSet>> parts(m.agents().size());
  for (std::size_t a = 0; a < m.agents().size(); ++a)
    for (const auto& b : m.blocks(a)) {
      if (!b.intersects(keep)) continue;
      parts[a].push_back(restrict_to(b & keep, keep));
    }
  std::vector<StateSet> val;
  for (const auto& v : m.valuation()) val.push_back(restrict_to(v & keep, keep));
  std::optional<std::string> designated;
  if (m.designated() && keep.contains(*m.state_index(*m.designated()))) designated = m.designated();
  return EpistemicModel(m.agents(), m.atoms(), std::move(states), std::move(parts), std::move(val),
                        std::move(designated));
}

// ---------------------------------------------------------------------------
// Bisimulation contraction by partition refinement

/// Class id of every state after each refinement round. Round 0 groups states
/// by valuation; each later round splits a class when its members see
/// different sets of classes through some agent. The last entry is stable.
struct Refinement {
  std::vector<std::vector<std::size_t>> rounds;

  const std::vector<std::size_t>& final_classes() const { return rounds.back(); }
  std::size_t class_count(std::size_t round) const {
    return rounds[round].empty() ? 0 : *std::max_element(rounds[round].begin(), rounds[round].end()) + 1;
  }
  std::size_t rounds_used() const { return rounds.size() - 1; }
};

inline Refinement refine(const EpistemicModel& m) {
  const std::size_t n = m.num_states();
  Refinement r;

  std::vector<std::size_t> cls(n);
  {
    std::vector<std::size_t> reps;
    for (std::size_t s = 0; s < n; ++s) {
      auto it = std::find_if(reps.begin(), reps.end(), [&](std::size_t t) { return m.same_valuation(s, t); });
      if (it == reps.end()) {
        cls[s] = reps.size();
        reps.push_back(s);
      } else {
        cls[s] = static_cast<std::size_t>(it - reps.begin());
      }
    }
  }
  r.rounds.push_back(cls);

  for (;;) {
    using Signature = std::pair<std::size_t, std::vector<std::vector<std::size_t>>>;
    std::map<Signature, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      Signature sig{cls[s], {}};
      for (std::size_t a = 0; a < m.agents().size(); ++a) {
        std::vector<std::size_t> seen;
        for (auto t : m.block_containing(a, s).members()) seen.push_back(cls[t]);
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        sig.second.push_back(std::move(seen));
      }
      auto [it, inserted] = ids.emplace(std::move(sig), ids.size());
      next[s] = it->second;
    }
    if (ids.size() == r.class_count(r.rounds.size() - 1)) break;
    // Renumber by first occurrence so ids are canonical.
    std::vector<std::size_t> renum(ids.size(), std::numeric_limits<std::size_t>::max());
    std::size_t fresh = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (renum[next[s]] == std::numeric_limits<std::size_t>::max()) renum[next[s]] = fresh++;
      next[s] = renum[next[s]];
    }
    cls = next;
    r.rounds.push_back(cls);
  }
  return r;
}

inline bool is_contracted(const EpistemicModel& m) {
  const auto r = refine(m);
  return r.class_count(r.rounds.size() - 1) == m.num_states();
}

struct Contraction {
  EpistemicModel quotient;
  std::vector<std::size_t> image;  // original state index -> quotient state index
  std::size_t rounds = 0;

  std::map<std::string, std::string> state_map(const EpistemicModel& original) const {
    std::map<std::string, std::string> out;
    for (std::size_t s = 0; s < image.size(); ++s) out[original.state_name(s)] = quotient.state_name(image[s]);
    return out;
  }
};

/// Quotient by the largest bisimulation. Each quotient state keeps the name
/// of the first original state in its class.
inline Contraction contract(const EpistemicModel& m) {
  const auto r = refine(m);
  const auto& cls = r.final_classes();
  const std::size_t k = r.class_count(r.rounds.size() - 1);
  std::vector<std::size_t> rep(k, std::numeric_limits<std::size_t>::max());
  for (std::size_t s = 0; s < m.num_states(); ++s)
    if (rep[cls[s]] == std::numeric_limits<std::size_t>::max()) rep[cls[s]] = s;

  std::vector<std::string> states;
  for (auto s : rep) states.push_back(m.state_name(s));

  std::vector<std::vector<StateSet>> parts;
  for (std::size_t a = 0; a < m.agents().size(); ++a) {
    // Images of blocks; images of distinct blocks are either equal or disjoint.
    std::vector<StateSet> blocks;
    for (const auto& b : m.blocks(a)) {
      StateSet img(k);
      for (auto s : b.members()) img.insert(cls[s]);
      bool merged = false;
      for (auto& existing : blocks)
        if (existing.intersects(img)) {
          existing |= img;
          merged = true;
        }
      if (!merged) blocks.push_back(img);
    }
    parts.push_back(std::move(blocks));
  }

  std::vector<StateSet> val;
  for (const auto& v : m.valuation()) {
    StateSet img(k);
    for (std::size_t c = 0; c < k; ++c)
      if (v.contains(rep[c])) img.insert(c);
    val.push_back(img);
  }

  std::optional<std::string> designated;
  if (m.designated()) designated = states[cls[*m.state_index(*m.designated())]];

  return Contraction{EpistemicModel(m.agents(), m.atoms(), std::move(states), std::move(parts),
                                    std::move(val), std::move(designated)),
                     cls, r.rounds_used()};
}

// ---------------------------------------------------------------------------
// Characteristic formulas

inline Formula valuation_description(const EpistemicModel& m, std::size_t s) {
  std::vector<Formula> lits;
  for (std::size_t p = 0; p < m.atoms().size(); ++p) {
    auto a = Formula::atom(m.atoms()[p]);
    lits.push_back(m.truth(p).contains(s) ? a : Formula::neg(a));
  }
  return Formula::conj_all(lits);
}

/// One epistemic formula per state, true exactly at that state. Requires a
/// contracted model. Uses as many rounds as refinement needed to separate
/// all states.
inline std::vector<Formula> characteristic_formulas(const EpistemicModel& m) {
  const auto r = refine(m);
  if (r.class_count(r.rounds.size() - 1) != m.num_states())
    throw ModelError("characteristic formulas need a bisimulation-contracted model");

  std::vector<Formula> cur;  // by class id of the current round
  {
    std::vector<bool> done(r.class_count(0), false);
    cur.assign(r.class_count(0), Formula::top());
    for (std::size_t s = 0; s < m.num_states(); ++s)
      if (!done[r.rounds[0][s]]) {
        cur[r.rounds[0][s]] = valuation_description(m, s);
        done[r.rounds[0][s]] = true;
      }
  }

  for (std::size_t k = 0; k + 1 < r.rounds.size(); ++k) {
    const auto& cls = r.rounds[k];
    const auto& next_cls = r.rounds[k + 1];
    std::vector<Formula> next(r.class_count(k + 1), Formula::top());
    std::vector<bool> done(next.size(), false);
    for (std::size_t s = 0; s < m.num_states(); ++s) {
      if (done[next_cls[s]]) continue;
      done[next_cls[s]] = true;
      std::vector<Formula> parts{cur[cls[s]]};
      for (std::size_t a = 0; a < m.agents().size(); ++a) {
        std::vector<std::size_t> seen;
        for (auto t : m.block_containing(a, s).members()) seen.push_back(cls[t]);
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        std::vector<Formula> options;
        for (auto c : seen) {
          parts.push_back(Formula::know_dual(m.agents()[a], cur[c]));
          options.push_back(cur[c]);
        }
        parts.push_back(Formula::know(m.agents()[a], Formula::disj_all(options)));
      }
      next[next_cls[s]] = Formula::conj_all(parts);
    }
    cur = std::move(next);
  }

  std::vector<Formula> out;
  out.reserve(m.num_states());
  for (std::size_t s = 0; s < m.num_states(); ++s) out.push_back(cur[r.final_classes()[s]]);
  return out;
}

// ---------------------------------------------------------------------------
// Choice sets: extensional realisation of announcements ψ_G

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// All non-empty unions of the agent's blocks, by descending block mask: the
/// full state set (silence) comes first, the lowest block alone comes last.
inline std::vector<StateSet> agent_unions(const EpistemicModel& m, std::size_t agent,
                                          std::uint64_t cap = kDefaultEnumerationCap) {
  const auto& blocks = m.blocks(agent);
  const std::size_t k = blocks.size();
  if (k >= 63 || ((std::uint64_t{1} << k) - 1) > cap)
    throw EnumerationCapExceeded(k >= 63 ? std::numeric_limits<std::uint64_t>::max() : (std::uint64_t{1} << k) - 1, cap);
  std::vector<StateSet> out;
  out.reserve((std::size_t{1} << k) - 1);
  for (std::uint64_t mask = (std::uint64_t{1} << k) - 1; mask >= 1; --mask) {
    StateSet u(m.num_states());
    for (std::size_t j = 0; j < k; ++j)
      if (mask >> j & 1U) u |= blocks[j];
    out.push_back(std::move(u));
  }
  return out;
}

inline std::vector<StateSet> agent_unions(const EpistemicModel& m, std::string_view agent,
                                          std::uint64_t cap = kDefaultEnumerationCap) {
  return agent_unions(m, m.require_agent(agent), cap);
}

struct ChoiceSet {
  Group group;
  std::map<std::string, StateSet> per_agent_union;
  StateSet extension;
};

/// Number of decompositions the product over `g` would enumerate (saturating).
inline std::uint64_t choice_product_size(const EpistemicModel& m, const Group& g) {
  std::uint64_t total = 1;
  for (const auto& a : g) {
    const std::size_t k = m.blocks(m.require_agent(a)).size();
    if (k >= 63) return std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t unions = (std::uint64_t{1} << k) - 1;
    if (total > std::numeric_limits<std::uint64_t>::max() / unions) return std::numeric_limits<std::uint64_t>::max();
    total *= unions;
  }
  return total;
}

namespace detail {

inline void check_cap(const EpistemicModel& m, const Group& g, std::uint64_t cap) {
  const auto need = choice_product_size(m, g);
  if (need > cap) throw EnumerationCapExceeded(need, cap);
}

}  // namespace detail

/// Every decomposition (one union of blocks per agent of `g`), in
/// lexicographic order of union indices with agents in name order.
inline std::vector<ChoiceSet> choice_sets(const EpistemicModel& m, const Group& g,
                                          std::uint64_t cap = kDefaultEnumerationCap) {
  detail::check_cap(m, g, cap);
  std::vector<ChoiceSet> out{ChoiceSet{g, {}, m.all_states()}};
  for (const auto& a : g) {
    const auto unions = agent_unions(m, a, cap);
    std::vector<ChoiceSet> next;
    next.reserve(out.size() * unions.size());
    for (const auto& c : out)
      for (const auto& u : unions) {
        ChoiceSet d = c;
        d.per_agent_union.emplace(a, u);
        d.extension &= u;
        next.push_back(std::move(d));
      }
    out = std::move(next);
  }
  return out;
}

/// One choice set per distinct extension, each carrying the
/// lexicographically first decomposition that produces it. Ordered by that
/// decomposition.
inline std::vector<ChoiceSet> distinct_choices(const EpistemicModel& m, const Group& g,
                                               std::uint64_t cap = kDefaultEnumerationCap) {
  detail::check_cap(m, g, cap);
  std::vector<ChoiceSet> out{ChoiceSet{g, {}, m.all_states()}};
  for (const auto& a : g) {
    const auto unions = agent_unions(m, a, cap);
    std::vector<ChoiceSet> next;
    std::unordered_map<StateSet, std::size_t, StateSetHash> seen;
    for (const auto& c : out)
      for (const auto& u : unions) {
        StateSet ext = c.extension & u;
        if (!seen.emplace(ext, next.size()).second) continue;
        ChoiceSet d = c;
        d.per_agent_union.emplace(a, u);
        d.extension = std::move(ext);
        next.push_back(std::move(d));
      }
    out = std::move(next);
  }
  return out;
}

/// Converts a choice set back into ψ_G: agent i announces
/// K_i(⋁_{s ∈ union_i} δ_s). Needs a contracted model.
inline GroupKnowledgeFormula definable_formula(const EpistemicModel& m, const ChoiceSet& c,
                                               const std::vector<Formula>& characteristic) {
  GroupKnowledgeFormula out;
  for (const auto& [agent, u] : c.per_agent_union) {
    std::vector<Formula> ds;
    for (auto s : u.members()) ds.push_back(characteristic.at(s));
    out.bindings.emplace(agent, Formula::disj_all(ds));
  }
  (void)m;
  return out;
}

inline GroupKnowledgeFormula definable_formula(const EpistemicModel& m, const ChoiceSet& c) {
  if (c.per_agent_union.empty()) return {};
  return definable_formula(m, c, characteristic_formulas(m));
}

// ---------------------------------------------------------------------------
// Random models

inline std::string nth_name(const char* alphabet, std::size_t i) {
  const std::string letters(alphabet);
  if (i < letters.size()) return std::string(1, letters[i]);
  return std::string(1, letters[0]) + std::to_string(i);
}

inline std::string agent_name(std::size_t i) { return nth_name("abcdefghij", i); }
inline std::string atom_name(std::size_t i) { return nth_name("pqrstuvwxyz", i); }

namespace detail {

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  // Rejection sampling; portable across standard libraries.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % n;
}

// Uniform set partition of {0..n-1} as a restricted growth string.
inline std::vector<std::size_t> random_set_partition(std::mt19937_64& rng, std::size_t n) {
  // completions[m][k]: ways to label m more elements when k blocks exist.
  std::vector<std::vector<std::uint64_t>> completions(n + 1, std::vector<std::uint64_t>(n + 2, 0));
  for (std::size_t k = 0; k <= n + 1; ++k) completions[0][k] = 1;
  for (std::size_t m = 1; m <= n; ++m)
    for (std::size_t k = 0; k + 1 <= n + 1; ++k)
      completions[m][k] = k * completions[m - 1][k] + completions[m - 1][k + 1];
  std::vector<std::size_t> label(n, 0);
  std::size_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t rest = n - i - 1;
    const std::uint64_t total = used * completions[rest][used] + completions[rest][used + 1];
    const std::uint64_t x = uniform_below(rng, total);
    if (x < used * completions[rest][used]) {
      label[i] = static_cast<std::size_t>(x / completions[rest][used]);
    } else {
      label[i] = used++;
    }
  }
  return label;
}

}  // namespace detail

/// Deterministic in `seed`. Agents a, b, c, ...; atoms p, q, r, ...;
/// states s0, s1, ...
inline EpistemicModel random_model(std::uint64_t seed, std::size_t n_states, std::size_t n_agents,
                                   std::size_t n_atoms) {
  if (n_states == 0 || n_agents == 0 || n_atoms == 0) throw ModelError("random_model needs positive counts");
  if (n_states > 20) throw ModelError("random_model supports at most 20 states");
  std::mt19937_64 rng(seed);
  std::vector<std::string> agents, atoms, states;
  for (std::size_t i = 0; i < n_agents; ++i) agents.push_back(agent_name(i));
  for (std::size_t i = 0; i < n_atoms; ++i) atoms.push_back(atom_name(i));
  for (std::size_t i = 0; i < n_states; ++i) states.push_back("s" + std::to_string(i));

  std::vector<std::vector<StateSet>> parts;
  for (std::size_t a = 0; a < n_agents; ++a) {
    const auto label = detail::random_set_partition(rng, n_states);
    const std::size_t k = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<StateSet> blocks(k, StateSet(n_states));
    for (std::size_t s = 0; s < n_states; ++s) blocks[label[s]].insert(s);
    parts.push_back(std::move(blocks));
  }
  std::vector<StateSet> val;
  for (std::size_t p = 0; p < n_atoms; ++p) {
    StateSet v(n_states);
    for (std::size_t s = 0; s < n_states; ++s)
      if (rng() & 1U) v.insert(s);
    val.push_back(v);
  }
  return EpistemicModel(std::move(agents), std::move(atoms), std::move(states), std::move(parts), std::move(val));
}

}  // namespace corgal

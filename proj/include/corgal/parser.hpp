#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "corgal/errors.hpp"
#include "corgal/formula.hpp"
#include "corgal/model.hpp"

namespace corgal {

// ---------------------------------------------------------------------------
// Formula syntax
//
//   formula := iff
//   iff     := imp { "<->" imp }
//   imp     := or [ "->" imp ]
//   or      := and { "|" and }
//   and     := unary { "&" unary }
//   unary   := "~" unary | "K" AGENT unary | "M" AGENT unary
//            | "[!" formula "]" unary | "<!" formula ">" unary
//            | "[" group [ "," formula ] "]" unary
//            | "<" group [ "," formula ] ">" unary
//            | "[<" group ">]" unary | "<[" group "]>" unary
//            | "(" formula ")" | "top" | "bot" | ATOM
//   group   := "{" [ AGENT { "," AGENT } ] "}"
//
// "M a φ" is the dual of "K a φ".

namespace detail {

enum class Tok : std::uint8_t {
  End,
  Ident,
  Not,          // ~
  Know,         // K
  KnowDual,     // M
  AnnOpen,      // [!
  AnnDualOpen,  // <!
  LBracket,     // [
  RBracket,     // ]
  LAngle,       // <
  RAngle,       // >
  CoalOpen,     // [<
  CoalClose,    // >]
  CoalDualOpen,   // <[
  CoalDualClose,  // ]>
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  And,
  Or,
  Imp,
  Iff,
  Top,
  Bot,
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Not: return "'~'";
    case Tok::Know: return "'K'";
    case Tok::KnowDual: return "'M'";
    case Tok::AnnOpen: return "'[!'";
    case Tok::AnnDualOpen: return "'<!'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LAngle: return "'<'";
    case Tok::RAngle: return "'>'";
    case Tok::CoalOpen: return "'[<'";
    case Tok::CoalClose: return "'>]'";
    case Tok::CoalDualOpen: return "'<['";
    case Tok::CoalDualClose: return "']>'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Imp: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::Top: return "'top'";
    case Tok::Bot: return "'bot'";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      const std::size_t l = line_, c = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", l, c});
        return out;
      }
      const char ch = src_[pos_];
      const char nx = pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
      const char nx2 = pos_ + 2 < src_.size() ? src_[pos_ + 2] : '\0';
      auto emit = [&](Tok k, std::size_t len) {
        out.push_back({k, std::string(src_.substr(pos_, len)), l, c});
        advance(len);
      };
      if (ch >= 'a' && ch <= 'z') {
        std::size_t len = 0;
        while (pos_ + len < src_.size() && valid_symbol(src_.substr(pos_, len + 1))) ++len;
        const auto word = src_.substr(pos_, len);
        emit(word == "top" ? Tok::Top : word == "bot" ? Tok::Bot : Tok::Ident, len);
        continue;
      }
      switch (ch) {
        case '~': emit(Tok::Not, 1); break;
        case 'K': emit(Tok::Know, 1); break;
        case 'M': emit(Tok::KnowDual, 1); break;
        case '(': emit(Tok::LParen, 1); break;
        case ')': emit(Tok::RParen, 1); break;
        case '{': emit(Tok::LBrace, 1); break;
        case '}': emit(Tok::RBrace, 1); break;
        case ',': emit(Tok::Comma, 1); break;
        case '&': emit(Tok::And, 1); break;
        case '|': emit(Tok::Or, 1); break;
        case '[':
          if (nx == '!') emit(Tok::AnnOpen, 2);
          else if (nx == '<') emit(Tok::CoalOpen, 2);
          else emit(Tok::LBracket, 1);
          break;
        case ']':
          if (nx == '>') emit(Tok::CoalDualClose, 2);
          else emit(Tok::RBracket, 1);
          break;
        case '<':
          if (nx == '-' && nx2 == '>') emit(Tok::Iff, 3);
          else if (nx == '!') emit(Tok::AnnDualOpen, 2);
          else if (nx == '[') emit(Tok::CoalDualOpen, 2);
          else emit(Tok::LAngle, 1);
          break;
        case '>':
          if (nx == ']') emit(Tok::CoalClose, 2);
          else emit(Tok::RAngle, 1);
          break;
        case '-':
          if (nx == '>') {
            emit(Tok::Imp, 2);
            break;
          }
          [[fallthrough]];
        default:
          throw ParseError(l, c, std::string("unknown operator '") + ch + "'");
      }
    }
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
      advance(1);
  }
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class FormulaParser {
 public:
  explicit FormulaParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse_all() {
    Formula f = iff();
    expect(Tok::End);
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const auto& t = peek();
    std::string msg = "unexpected " + (t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'");
    if (!expected.empty()) {
      msg += ", expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? " or " : "") + expected[i];
    }
    throw ParseError(t.line, t.column, msg, std::move(expected));
  }
  Token expect(Tok k) {
    if (peek().kind != k) fail({describe(k)});
    return toks_[pos_++];
  }

  Formula iff() {
    Formula f = imp();
    while (accept(Tok::Iff)) f = Formula::iff(f, imp());
    return f;
  }
  Formula imp() {
    Formula f = disj();
    if (accept(Tok::Imp)) return Formula::imp(f, imp());
    return f;
  }
  Formula disj() {
    Formula f = conj();
    while (accept(Tok::Or)) f = Formula::disj(f, conj());
    return f;
  }
  Formula conj() {
    Formula f = unary();
    while (accept(Tok::And)) f = Formula::conj(f, unary());
    return f;
  }

  Group group() {
    expect(Tok::LBrace);
    Group g;
    if (accept(Tok::RBrace)) return g;
    do g.insert(expect(Tok::Ident).text);
    while (accept(Tok::Comma));
    expect(Tok::RBrace);
    return g;
  }

  Formula unary() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Not: ++pos_; return Formula::neg(unary());
      case Tok::Know: {
        ++pos_;
        auto a = expect(Tok::Ident).text;
        return Formula::know(std::move(a), unary());
      }
      case Tok::KnowDual: {
        ++pos_;
        auto a = expect(Tok::Ident).text;
        return Formula::know_dual(std::move(a), unary());
      }
      case Tok::AnnOpen: {
        ++pos_;
        Formula ann = iff();
        expect(Tok::RBracket);
        return Formula::ann(ann, unary());
      }
      case Tok::AnnDualOpen: {
        ++pos_;
        Formula ann = iff();
        expect(Tok::RAngle);
        return Formula::ann_dual(ann, unary());
      }
      case Tok::LBracket: {
        ++pos_;
        Group g = group();
        Formula cond = accept(Tok::Comma) ? iff() : Formula::top();
        expect(Tok::RBracket);
        return Formula::rel_group(std::move(g), cond, unary());
      }
      case Tok::LAngle: {
        ++pos_;
        Group g = group();
        Formula cond = accept(Tok::Comma) ? iff() : Formula::top();
        expect(Tok::RAngle);
        return Formula::rel_group_dual(std::move(g), cond, unary());
      }
      case Tok::CoalOpen: {
        ++pos_;
        Group g = group();
        expect(Tok::CoalClose);
        return Formula::coal(std::move(g), unary());
      }
      case Tok::CoalDualOpen: {
        ++pos_;
        Group g = group();
        expect(Tok::CoalDualClose);
        return Formula::coal_dual(std::move(g), unary());
      }
      case Tok::LParen: {
        ++pos_;
        Formula f = iff();
        expect(Tok::RParen);
        return f;
      }
      case Tok::Top: ++pos_; return Formula::top();
      case Tok::Bot: ++pos_; return Formula::bot();
      case Tok::Ident: ++pos_; return Formula::atom(t.text);
      default:
        fail({"formula"});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline bool is_binary(Op op) { return op == Op::And || op == Op::Or || op == Op::Imp || op == Op::Iff; }

inline std::string render_group(const Group& g) {
  std::string s = "{";
  bool first = true;
  for (const auto& a : g) {
    if (!first) s += ",";
    s += a;
    first = false;
  }
  return s + "}";
}

inline void render(const Formula& f, bool nested, std::string& out) {
  auto sub = [&](const Formula& g) { render(g, true, out); };
  auto top = [&](const Formula& g) { render(g, false, out); };
  switch (f.op()) {
    case Op::Atom: out += f.name(); return;
    case Op::Top: out += "top"; return;
    case Op::Bot: out += "bot"; return;
    case Op::Not: out += "~"; sub(f.arg()); return;
    case Op::Know: out += "K " + f.agent() + " "; sub(f.arg()); return;
    case Op::KnowDual: out += "M " + f.agent() + " "; sub(f.arg()); return;
    case Op::Ann: out += "[! "; top(f.announcement()); out += "] "; sub(f.body()); return;
    case Op::AnnDual: out += "<! "; top(f.announcement()); out += "> "; sub(f.body()); return;
    case Op::RelGroup:
      out += "[" + render_group(f.group()) + ", ";
      top(f.condition());
      out += "] ";
      sub(f.body());
      return;
    case Op::RelGroupDual:
      out += "<" + render_group(f.group()) + ", ";
      top(f.condition());
      out += "> ";
      sub(f.body());
      return;
    case Op::Coal: out += "[<" + render_group(f.group()) + ">] "; sub(f.arg()); return;
    case Op::CoalDual: out += "<[" + render_group(f.group()) + "]> "; sub(f.arg()); return;
    default: break;
  }
  const char* sym = f.op() == Op::And ? " & " : f.op() == Op::Or ? " | " : f.op() == Op::Imp ? " -> " : " <-> ";
  if (nested) out += "(";
  sub(f.lhs());
  out += sym;
  sub(f.rhs());
  if (nested) out += ")";
}

}  // namespace detail

inline Formula parse_formula(std::string_view text) {
  return detail::FormulaParser(detail::Lexer(text).run()).parse_all();
}

/// Canonical text: binary connectives below the top level are parenthesised.
inline std::string render_formula(const Formula& f) {
  std::string out;
  detail::render(f, false, out);
  return out;
}

// ---------------------------------------------------------------------------
// Model documents (JSON)
//
// {
//   "agents": ["a", "b"],
//   "atoms": ["p"],
//   "states": ["w", "v"],
//   "valuation": {"w": [], "v": ["p"]},
//   "partitions": {"a": [["w"], ["v"]], "b": [["w", "v"]]},
//   "designated": "w"            (optional)
// }

struct ModelDocument {
  std::vector<std::string> agents;
  std::vector<std::string> atoms;
  std::vector<std::string> states;
  std::map<std::string, std::vector<std::string>> valuation;
  std::map<std::string, std::vector<std::vector<std::string>>> partitions;
  std::optional<std::string> designated;
};

namespace detail {

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ModelError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("field '") + key + "' has the wrong shape");
  }
}

}  // namespace detail

inline ModelDocument parse_model_document(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is one past the offending character.
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(line, column, "malformed model document");
  }
  if (!j.is_object()) throw ModelError("model document must be an object");
  ModelDocument doc;
  doc.agents = detail::field<std::vector<std::string>>(j, "agents");
  doc.atoms = detail::field<std::vector<std::string>>(j, "atoms");
  doc.states = detail::field<std::vector<std::string>>(j, "states");
  doc.valuation = detail::field<std::map<std::string, std::vector<std::string>>>(j, "valuation");
  doc.partitions = detail::field<std::map<std::string, std::vector<std::vector<std::string>>>>(j, "partitions");
  if (j.contains("designated") && !j.at("designated").is_null())
    doc.designated = detail::field<std::string>(j, "designated");
  return doc;
}

/// Validates a document and builds the model it describes.
inline EpistemicModel build_model(const ModelDocument& doc) {
  const std::size_t n = doc.states.size();
  auto state_idx = [&](const std::string& s) {
    auto it = std::find(doc.states.begin(), doc.states.end(), s);
    if (it == doc.states.end()) throw ModelError("unknown state '" + s + "'");
    return static_cast<std::size_t>(it - doc.states.begin());
  };
  {
    std::set<std::string> uniq(doc.states.begin(), doc.states.end());
    if (uniq.size() != n) throw ModelError("duplicate state name");
  }

  std::vector<StateSet> val(doc.atoms.size(), StateSet(n));
  for (const auto& [state, atoms] : doc.valuation) {
    const auto s = state_idx(state);
    for (const auto& p : atoms) {
      auto it = std::find(doc.atoms.begin(), doc.atoms.end(), p);
      if (it == doc.atoms.end()) throw ModelError("undeclared atom '" + p + "' in valuation of '" + state + "'");
      val[static_cast<std::size_t>(it - doc.atoms.begin())].insert(s);
    }
  }
  for (const auto& s : doc.states)
    if (!doc.valuation.count(s)) throw ModelError("valuation missing for state '" + s + "'");

  std::vector<std::vector<StateSet>> parts;
  for (const auto& a : doc.agents) {
    auto it = doc.partitions.find(a);
    if (it == doc.partitions.end()) throw ModelError("partition missing for agent '" + a + "'");
    std::vector<StateSet> blocks;
    StateSet seen(n);
    for (const auto& names : it->second) {
      StateSet b(n);
      for (const auto& s : names) {
        const auto i = state_idx(s);
        if (seen.contains(i) || b.contains(i))
          throw ModelError("partition of agent '" + a + "' is not a partition: '" + s + "' appears twice");
        b.insert(i);
      }
      if (b.empty()) throw ModelError("partition of agent '" + a + "' has an empty block");
      seen |= b;
      blocks.push_back(b);
    }
    if (!seen.is_full()) throw ModelError("partition of agent '" + a + "' does not cover all states");
    parts.push_back(std::move(blocks));
  }
  for (const auto& [a, _] : doc.partitions)
    if (std::find(doc.agents.begin(), doc.agents.end(), a) == doc.agents.end())
      throw ModelError("partition given for undeclared agent '" + a + "'");

  return EpistemicModel(doc.agents, doc.atoms, doc.states, std::move(parts), std::move(val), doc.designated);
}

inline EpistemicModel parse_model(std::string_view text) { return build_model(parse_model_document(text)); }

inline nlohmann::ordered_json model_to_json(const EpistemicModel& m) {
  nlohmann::ordered_json j;
  j["agents"] = m.agents();
  j["atoms"] = m.atoms();
  j["states"] = m.states();
  nlohmann::ordered_json val = nlohmann::ordered_json::object();
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    std::vector<std::string> atoms;
    for (std::size_t p = 0; p < m.atoms().size(); ++p)
      if (m.truth(p).contains(s)) atoms.push_back(m.atoms()[p]);
    val[m.state_name(s)] = atoms;
  }
  j["valuation"] = val;
  nlohmann::ordered_json parts = nlohmann::ordered_json::object();
  for (std::size_t a = 0; a < m.agents().size(); ++a) {
    nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
    for (const auto& b : m.blocks(a)) {
      std::vector<std::string> names;
      for (auto s : b.members()) names.push_back(m.state_name(s));
      blocks.push_back(names);
    }
    parts[m.agents()[a]] = blocks;
  }
  j["partitions"] = parts;
  if (m.designated()) j["designated"] = *m.designated();
  return j;
}

inline std::string render_model(const EpistemicModel& m) { return model_to_json(m).dump(2) + "\n"; }

/// Same states (by name), agents, atoms, partitions and valuation.
inline bool same_model(const EpistemicModel& x, const EpistemicModel& y) {
  return render_model(x) == render_model(y);
}

}  // namespace corgal

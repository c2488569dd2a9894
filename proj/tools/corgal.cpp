#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "corgal/checker.hpp"
#include "corgal/parser.hpp"
#include "corgal/translate.hpp"
#include "corgal/validity.hpp"

namespace {

enum Exit { kTrue = 0, kFalse = 1, kInput = 2, kCap = 3, kSuite = 4 };

struct InputError : corgal::Error {
  using corgal::Error::Error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string formula_text(const std::string& flag) {
  if (!flag.empty()) return flag;
  std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw InputError("no formula given");
  return text;
}

std::string set_text(const std::vector<std::string>& names) {
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out + "}";
}

void print_trace(const std::vector<corgal::TraceEntry>& trace) {
  for (const auto& t : trace) {
    std::cout << t.op;
    for (const auto& [agent, states] : t.decomposition) std::cout << ' ' << agent << '=' << set_text(states);
    std::cout << " -> " << (t.verdict ? "true" : "false") << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model checker for coalition and relativised group announcement logic"};
  app.require_subcommand(1);

  std::string model_path, state, formula, out_path;
  std::uint64_t cap = corgal::kDefaultEnumerationCap;
  bool trace = false;

  auto* check = app.add_subcommand("check", "evaluate a formula at a state");
  check->add_option("--model", model_path, "model document")->required();
  check->add_option("--state", state, "evaluation state")->required();
  check->add_option("--formula", formula, "formula (read from stdin if absent)");
  check->add_option("--cap", cap, "choice-set enumeration cap");
  check->add_flag("--trace", trace, "print quantifier decompositions");

  auto* witness = app.add_subcommand("witness", "synthesise the announcement behind a quantified verdict");
  witness->add_option("--model", model_path, "model document")->required();
  witness->add_option("--state", state, "evaluation state")->required();
  witness->add_option("--formula", formula, "formula (read from stdin if absent)");
  witness->add_option("--cap", cap, "choice-set enumeration cap");
  witness->add_flag("--trace", trace, "print quantifier decompositions");

  auto* contract = app.add_subcommand("contract", "write the bisimulation contraction");
  contract->add_option("--model", model_path, "model document")->required();
  contract->add_option("--out", out_path, "output document")->required();

  auto* translate = app.add_subcommand("translate", "reduce a public announcement formula to epistemic logic");
  translate->add_option("--formula", formula, "formula (read from stdin if absent)");

  std::string suite_name;
  corgal::SuiteConfig cfg;
  auto* suite = app.add_subcommand("suite", "run a validity suite");
  suite->add_option("name", suite_name, "suite name")->required()->check(CLI::IsMember(corgal::suite_names()));
  suite->add_option("--seed", cfg.seed, "random seed");
  suite->add_option("--count", cfg.model_count, "number of sampled models");
  suite->add_option("--max-states", cfg.max_states, "largest sampled model")
      ->check(CLI::Range(std::size_t{1}, corgal::kMaxSuiteStates));
  suite->add_option("--cap", cfg.enumeration_cap, "choice-set enumeration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kTrue : kInput;
  }

  try {
    if (*check || *witness) {
      const auto m = corgal::parse_model(slurp(model_path));
      const auto f = corgal::parse_formula(formula_text(formula));
      const auto w = m.require_state(state);
      corgal::Checker ck({cap});
      if (*check) {
        const bool verdict = ck.eval(m, w, f);
        std::cout << (verdict ? "true" : "false") << '\n';
        if (trace && f.is_quantified()) print_trace(ck.eval_witness(m, w, f).trace);
        return verdict ? kTrue : kFalse;
      }
      const auto rep = ck.eval_witness(m, w, f);
      std::cout << (rep.verdict ? "true" : "false") << '\n';
      if (rep.witness) {
        std::cout << "witness: " << corgal::render_formula(rep.witness->denotation()) << '\n';
        if (rep.choice) {
          for (const auto& [agent, set] : rep.choice->per_agent_union) {
            std::vector<std::string> names;
            for (auto s : set.members()) names.push_back(ck.contracted(m).state_name(s));
            std::cout << "  " << agent << ": " << set_text(names) << '\n';
          }
        }
      } else {
        std::cout << "witness: none\n";
      }
      if (trace) print_trace(rep.trace);
      return rep.verdict ? kTrue : kFalse;
    }
    if (*contract) {
      const auto m = corgal::parse_model(slurp(model_path));
      const auto c = corgal::contract(m);
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw InputError("cannot write '" + out_path + "'");
      out << corgal::render_model(c.quotient);
      for (const auto& [from, to] : c.state_map(m)) std::cout << from << " -> " << to << '\n';
      std::cout << m.num_states() << " states -> " << c.quotient.num_states() << " states\n";
      return kTrue;
    }
    if (*translate) {
      std::cout << corgal::render_formula(corgal::pal_to_el(corgal::parse_formula(formula_text(formula)))) << '\n';
      return kTrue;
    }
    if (*suite) {
      const auto rep = corgal::run_suite(suite_name, cfg);
      std::cout << corgal::report_to_json(rep).dump(2) << '\n';
      std::cerr << corgal::report_summary(rep) << '\n';
      return rep.passed() ? kTrue : kSuite;
    }
  } catch (const corgal::ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.message() << '\n';
    return kInput;
  } catch (const corgal::EnumerationCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const corgal::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kTrue;
}

#pragma once

#include <string>

#include "corgal/parser.hpp"

namespace corgal::figures {

// Train example: c cannot tell w (not yet in Manchester) from v; a and b can.
inline const char* const kTrainDocument = R"({
  "agents": ["a", "b", "c"],
  "atoms": ["p"],
  "states": ["w", "v"],
  "valuation": {"w": [], "v": ["p"]},
  "partitions": {
    "a": [["w"], ["v"]],
    "b": [["w"], ["v"]],
    "c": [["w", "v"]]
  },
  "designated": "w"
}
)";

// Counterexample model. State names spell the valuation; an "n" negates the
// following atom (pnqr: p, not q, r).
inline const char* const kCounterexampleDocument = R"({
  "agents": ["a", "b", "c"],
  "atoms": ["p", "q", "r"],
  "states": ["pqr", "pqnr", "npqr", "pnqr"],
  "valuation": {
    "pqr": ["p", "q", "r"],
    "pqnr": ["p", "q"],
    "npqr": ["q", "r"],
    "pnqr": ["p", "r"]
  },
  "partitions": {
    "a": [["pqr", "npqr"], ["pqnr"], ["pnqr"]],
    "b": [["pqr", "pnqr"], ["pqnr"], ["npqr"]],
    "c": [["pqr", "pqnr", "npqr"], ["pnqr"]]
  },
  "designated": "pqr"
}
)";

inline EpistemicModel train() { return parse_model(kTrainDocument); }
inline EpistemicModel counterexample() { return parse_model(kCounterexampleDocument); }

// b knows p∧q∧r while neither a nor c does.
inline const char* const kGoalText = "K b (p & q & r) & ~K a (p & q & r) & ~K c (p & q & r)";

}  // namespace corgal::figures

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "symgame/types.hpp"

namespace symgame {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Game files are JSON:
//   {"horizon": H, "num_actions": n, "layers": [["id", ...], ...],
//    "transitions": {"s|a1|a2": [["s'", p], ...]}, "payoff": {"s|a1|a2": x}}
// State ids are strings, actions 1-based. Missing payoff entries default to 0.
// Transition rows must sum to 1 within 1e-9 and are renormalized on load so
// the in-memory game meets the tighter row-sum invariant.
std::pair<LayeredGame, PayoffTensor> load_game_file(const std::string& path);
void save_game_file(const LayeredGame& g, const PayoffTensor& u, const std::string& path);

// Standalone payoff tensor for an already-loaded game: {"payoff": {"s|a1|a2": x}}.
PayoffTensor load_payoff_file(const LayeredGame& g, const std::string& path);
void save_payoff_file(const LayeredGame& g, const PayoffTensor& u, const std::string& path);

// Markov policy: {"policy": {"state-id": [p1, ..., pn], ...}}.
MarkovPolicy load_policy_file(const LayeredGame& g, const std::string& path);

}  // namespace symgame

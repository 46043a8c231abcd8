#pragma once

#include "dynkin/game.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <utility>

namespace dynkin {

/// Parses a game description. Accepts explicit "player1"/"player2"
/// payoff blocks, or the shorthands "zero_sum" (player 2 gets the
/// negated, role-swapped triple) and "symmetric" (identical triples).
DynkinGame parse_game(const nlohmann::json& doc);

/// Reads a game file; throws ParseError on malformed JSON and
/// SchemaError on missing or ill-typed fields.
DynkinGame load_game(const std::string& path);

nlohmann::json game_to_json(const DynkinGame& game);
void save_game(const std::string& path, const DynkinGame& game);

/// Profiles file: { "p1": [...], "p2": [...] } in declared state order.
/// Also accepts the same keys nested under "profiles" or "equilibrium",
/// so an emitted run report can be fed back directly.
std::pair<StoppingProfile, StoppingProfile> load_profiles(
    const std::string& path, const ValidatedGame& game);

std::pair<StoppingProfile, StoppingProfile> parse_profiles(
    const nlohmann::json& doc, const ValidatedGame& game);

}  // namespace dynkin

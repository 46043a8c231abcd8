#include "dynkin/game_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace dynkin {

namespace {

using nlohmann::json;

const json& require(const json& doc, const std::string& key) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        throw SchemaError("missing required key \"" + key + "\"");
    }
    return *it;
}

double require_number(const json& doc, const std::string& key) {
    const json& v = require(doc, key);
    if (!v.is_number()) {
        throw SchemaError("key \"" + key + "\" must be a number");
    }
    return v.get<double>();
}

Vec read_vector(const json& node, const std::string& what) {
    if (!node.is_array()) {
        throw SchemaError(what + " must be an array of numbers");
    }
    Vec out(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number()) {
            throw SchemaError(what + "[" + std::to_string(i) + "] must be a number");
        }
        out[static_cast<Eigen::Index>(i)] = node[i].get<double>();
    }
    return out;
}

PayoffTriple read_triple(const json& node, const std::string& who) {
    if (!node.is_object()) {
        throw SchemaError(who + " must be an object with keys f, g, h");
    }
    PayoffTriple t;
    t.f = read_vector(require(node, "f"), who + ".f");
    t.g = read_vector(require(node, "g"), who + ".g");
    t.h = read_vector(require(node, "h"), who + ".h");
    return t;
}

json triple_to_json(const PayoffTriple& t) {
    json node;
    node["f"] = std::vector<double>(t.f.begin(), t.f.end());
    node["g"] = std::vector<double>(t.g.begin(), t.g.end());
    node["h"] = std::vector<double>(t.h.begin(), t.h.end());
    return node;
}

}  // namespace

DynkinGame parse_game(const json& doc) {
    if (!doc.is_object()) {
        throw SchemaError("game document must be a JSON object");
    }

    DynkinGame game;

    const json& states = require(doc, "states");
    if (!states.is_array() || states.empty()) {
        throw SchemaError("\"states\" must be a non-empty array of labels");
    }
    if (states.size() > static_cast<std::size_t>(kMaxStates)) {
        std::ostringstream msg;
        msg << "game declares " << states.size()
            << " states, above the supported limit of " << kMaxStates;
        throw ExplicitLimitError(msg.str());
    }
    for (const auto& s : states) {
        if (s.is_string()) {
            game.space.labels.push_back(s.get<std::string>());
        } else if (s.is_number()) {
            game.space.labels.push_back(s.dump());
        } else {
            throw SchemaError("state labels must be strings");
        }
    }
    const int n = static_cast<int>(game.space.labels.size());

    game.alpha = require_number(doc, "alpha");

    const json& kernel = require(doc, "kernel");
    if (!kernel.is_array() || kernel.size() != static_cast<std::size_t>(n)) {
        throw SchemaError("\"kernel\" must have one row per state");
    }
    game.kernel.resize(n, n);
    for (int i = 0; i < n; ++i) {
        Vec row = read_vector(kernel[i], "kernel[" + std::to_string(i) + "]");
        if (row.size() != n) {
            throw SchemaError("kernel row " + std::to_string(i) + " has " +
                              std::to_string(row.size()) + " entries, expected " +
                              std::to_string(n));
        }
        game.kernel.row(i) = row.transpose();
    }

    const bool has_players = doc.contains("player1") || doc.contains("player2");
    const bool has_zero_sum = doc.contains("zero_sum");
    const bool has_symmetric = doc.contains("symmetric");
    if (has_players + has_zero_sum + has_symmetric != 1) {
        throw SchemaError(
            "exactly one of player1/player2, zero_sum, or symmetric must be given");
    }

    const auto check_triple = [n](const PayoffTriple& t, const std::string& who) {
        for (const auto& [v, name] : {std::pair<const Vec&, const char*>{t.f, "f"},
                                      {t.g, "g"},
                                      {t.h, "h"}}) {
            if (v.size() != n) {
                throw SchemaError(who + "." + name + " has " +
                                  std::to_string(v.size()) + " entries, expected " +
                                  std::to_string(n));
            }
        }
    };

    if (has_zero_sum) {
        PayoffTriple t = read_triple(doc["zero_sum"], "zero_sum");
        check_triple(t, "zero_sum");
        game.player1 = t;
        game.player2 = PayoffTriple{-t.g, -t.f, -t.h};
    } else if (has_symmetric) {
        PayoffTriple t = read_triple(doc["symmetric"], "symmetric");
        check_triple(t, "symmetric");
        game.player1 = t;
        game.player2 = std::move(t);
    } else {
        game.player1 = read_triple(require(doc, "player1"), "player1");
        game.player2 = read_triple(require(doc, "player2"), "player2");
        check_triple(game.player1, "player1");
        check_triple(game.player2, "player2");
    }
    return game;
}

DynkinGame load_game(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open game file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ParseError("while reading '" + path + "': " + err.what());
    }
    return parse_game(doc);
}

json game_to_json(const DynkinGame& game) {
    json doc;
    doc["states"] = game.space.labels;
    doc["alpha"] = game.alpha;
    json rows = json::array();
    for (Eigen::Index i = 0; i < game.kernel.rows(); ++i) {
        rows.push_back(std::vector<double>(game.kernel.row(i).begin(),
                                           game.kernel.row(i).end()));
    }
    doc["kernel"] = std::move(rows);
    doc["player1"] = triple_to_json(game.player1);
    doc["player2"] = triple_to_json(game.player2);
    return doc;
}

void save_game(const std::string& path, const DynkinGame& game) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write game file '" + path + "'");
    }
    out << game_to_json(game).dump(2) << '\n';
}

std::pair<StoppingProfile, StoppingProfile> parse_profiles(
    const json& doc, const ValidatedGame& game) {
    if (!doc.is_object()) {
        throw SchemaError("profiles document must be a JSON object");
    }
    const json* node = &doc;
    for (const char* key : {"profiles", "equilibrium"}) {
        if (!node->contains("p1") && node->contains(key)) {
            node = &(*node)[key];
        }
    }
    Vec p1 = read_vector(require(*node, "p1"), "p1");
    Vec p2 = read_vector(require(*node, "p2"), "p2");
    return {game.make_profile(std::move(p1)), game.make_profile(std::move(p2))};
}

std::pair<StoppingProfile, StoppingProfile> load_profiles(
    const std::string& path, const ValidatedGame& game) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open profiles file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ParseError("while reading '" + path + "': " + err.what());
    }
    return parse_profiles(doc, game);
}

}  // namespace dynkin

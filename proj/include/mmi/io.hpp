#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmi/rational.hpp"
#include "mmi/space.hpp"
#include "mmi/spaces.hpp"

namespace mmi {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

inline Mass mass_from_json(const Json& v) {
    if (v.is_string()) return mass_from_string(v.get<std::string>());
    if (v.is_number_integer()) return Mass(v.get<long long>());
    if (v.is_number()) return mass_from_double(v.get<double>());
    throw ParseError("expected a number or numeric string");
}

inline double double_from_json(const Json& v) {
    if (v.is_string()) return std::stod(v.get<std::string>());
    if (v.is_number()) return v.get<double>();
    throw ParseError("expected a number");
}

// One top-level object: either labels/dist/weights (+optional coords) or a
// generator description.
inline FiniteMMSpace parse_space_document(const Json& doc) {
    if (!doc.is_object()) throw ParseError("document must be a JSON object");
    if (doc.contains("generator")) {
        const auto& g = doc["generator"];
        std::string kind = g.value("kind", "");
        std::uint64_t seed = g.value("seed", 0ULL);
        if (kind == "sphere")
            return sphere_sample(g.value("dimension", 2ULL), g.value("radius", 1.0),
                                 g.value("count", 32ULL), seed);
        if (kind == "grid") return grid_cube(g.value("dimension", 2ULL), g.value("k", 2ULL));
        if (kind == "random_discrete")
            return random_discrete(g.value("count", 6ULL), seed, g.value("atomic_bias", 0.0));
        if (kind == "perturbed") {
            if (!g.contains("base")) throw ParseError("perturbed generator needs a base document");
            auto base = parse_space_document(g["base"]);
            return perturb_weights(base, g.value("delta", 0.0), seed);
        }
        throw ParseError("unknown generator kind: " + kind);
    }
    if (!doc.contains("labels") || !doc.contains("dist") || !doc.contains("weights"))
        throw ParseError("document needs labels, dist and weights (or a generator)");
    std::vector<std::string> labels = doc["labels"].get<std::vector<std::string>>();
    std::vector<std::vector<double>> dist;
    for (const auto& row : doc["dist"]) {
        std::vector<double> r;
        for (const auto& v : row) r.push_back(double_from_json(v));
        dist.push_back(std::move(r));
    }
    std::vector<Mass> weights;
    for (const auto& v : doc["weights"]) weights.push_back(mass_from_json(v));
    std::vector<std::vector<double>> coords;
    if (doc.contains("coords"))
        for (const auto& row : doc["coords"]) {
            std::vector<double> r;
            for (const auto& v : row) r.push_back(double_from_json(v));
            coords.push_back(std::move(r));
        }
    auto res = validate_space(std::move(labels), std::move(dist), std::move(weights),
                              std::move(coords));
    if (!res.ok()) {
        std::string msg = "invalid space:";
        for (const auto& v : res.violations) msg += " " + v.message + ";";
        throw ParseError(msg);
    }
    return *res.space;
}

inline FiniteMMSpace load_space(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return parse_space_document(doc);
}

// Canonical serialization: weights as exact rational strings so a round trip
// reproduces identical invariant values.
inline Json space_to_json(const FiniteMMSpace& X) {
    Json doc;
    doc["labels"] = X.labels;
    doc["dist"] = X.dist;
    Json w = Json::array();
    for (const auto& m : X.weight) w.push_back(mass_to_string(m));
    doc["weights"] = w;
    if (!X.coords.empty()) doc["coords"] = X.coords;
    return doc;
}

// FNV-1a digest of a string, as a fixed-width hex token for manifests.
inline std::string digest(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

struct RunManifest {
    std::string command;
    std::string input_digest;
    std::uint64_t seed = 0;
    std::string mode;  // exact | heuristic | rational
    std::vector<std::string> caps_hit;
    double wall_seconds = 0.0;
    bool uncertified = false;  // caps overridden via environment

    // Rational mode omits wall time: outputs must be byte-identical across
    // runs.
    Json to_json() const {
        Json j;
        j["command"] = command;
        j["input_digest"] = input_digest;
        j["seed"] = seed;
        j["mode"] = mode;
        j["caps_hit"] = caps_hit;
        if (mode != "rational") j["wall_seconds"] = wall_seconds;
        if (uncertified) j["uncertified"] = true;
        return j;
    }
};

}  // namespace mmi

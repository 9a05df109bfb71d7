#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "martinpot/domain.hpp"
#include "martinpot/point.hpp"
#include "martinpot/process_model.hpp"

// JSON encodings of processes, domains and profiles.
//
// Process: {"model": "stable", "alpha": 1.5, "d": 2}
//          {"model": "geometric_stable", "alpha": 1.5, "d": 3, "iterations": 2}
// Profile: "log_power:0.2", "power:0.5:zero", or
//          {"kind": "table", "nodes": [[t, f], ...], "regime": "infinity"}
// Domain:  {"type": "ball", "center": [0, 0], "radius": 1}
//          {"type": "halfspace", "normal": [1, 0], "offset": 0}
//          {"type": "slab", "normal": [1, 0], "lo": 0, "hi": 2}
//          {"type": "thorn", "profile": ..., "origin": [...], "axis": [...], "t_min": 2, "t_max": null}
//          {"type": "standard_thorn" | "standard_finite_thorn", "profile": ..., "d": 3}
//          {"type": "union" | "intersection", "parts": [...]}
//          {"type": "complement", "of": {...}}
//          {"type": "difference", "a": {...}, "b": {...}}
//          {"type": "truncate_inside" | "truncate_outside", "domain": {...}, "z0": [...], "p": 1}
//          {"type": "annulus", "domain": {...}, "z0": [...], "p": 1, "q": 2}

namespace martinpot::cli {

using Json = nlohmann::json;

Point point_from_json(const Json& j);
Json point_to_json(const Point& p);

ProcessSpec process_from_json(const Json& j);
Json process_to_json(const ProcessSpec& spec);

Profile profile_from_json(const Json& j);
Profile parse_profile(const std::string& text);
Json profile_to_json(const Profile& f);

Domain domain_from_json(const Json& j);
// Canonical AST form (composite builders are expanded into their primitives).
Json domain_to_json(const Domain& d);

// Parses JSON text; on failure throws std::invalid_argument whose message
// carries the line and column of the error.
Json parse_json_text(const std::string& text, const std::string& source);

}  // namespace martinpot::cli

#include "martinpot_cli/json_io.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace martinpot::cli {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\" in " + j.dump());
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) fail(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

ThornRegime regime_from(const std::string& s) {
  if (s == "infinity") return ThornRegime::infinity;
  if (s == "zero") return ThornRegime::zero;
  fail("profile regime must be \"infinity\" or \"zero\", got \"" + s + "\"");
}

std::string regime_name(ThornRegime r) { return r == ThornRegime::infinity ? "infinity" : "zero"; }

}  // namespace

Point point_from_json(const Json& j) {
  if (j.is_string()) return parse_point(j.get<std::string>());
  if (!j.is_array() || j.empty()) fail("point must be a nonempty array of numbers");
  std::vector<double> c;
  for (const auto& x : j) {
    if (!x.is_number()) fail("point coordinates must be numbers");
    c.push_back(x.get<double>());
  }
  return Point(std::span<const double>(c));
}

Json point_to_json(const Point& p) {
  Json a = Json::array();
  for (double c : p.coords()) a.push_back(c);
  return a;
}

ProcessSpec process_from_json(const Json& j) {
  const std::string kind = j.value("model", std::string("stable"));
  const double alpha = number(j, "alpha");
  const Json& dj = field(j, "d");
  if (!dj.is_number_integer()) fail("process field \"d\" must be an integer");
  const int d = dj.get<int>();
  if (kind == "stable") return make_stable(alpha, d);
  if (kind == "geometric_stable") return make_geometric_stable(alpha, d, j.value("iterations", 1));
  fail("unknown process model \"" + kind + "\" (stable | geometric_stable)");
}

Json process_to_json(const ProcessSpec& spec) {
  Json j;
  switch (spec.tag().kind) {
    case ModelKind::stable:
      j["model"] = "stable";
      break;
    case ModelKind::geometric_stable:
      j["model"] = "geometric_stable";
      j["iterations"] = spec.tag().iterations;
      break;
    case ModelKind::custom:
      j["model"] = "custom";
      break;
  }
  j["alpha"] = spec.alpha();
  j["d"] = spec.d();
  return j;
}

Profile parse_profile(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() < 2 || parts.size() > 3) fail("profile must look like kind:beta[:regime], got \"" + text + "\"");
  double beta = 0.0;
  try {
    std::size_t used = 0;
    beta = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    fail("profile exponent \"" + parts[1] + "\" is not a number");
  }
  const ThornRegime regime = parts.size() == 3 ? regime_from(parts[2]) : ThornRegime::infinity;
  if (parts[0] == "power") return Profile::power(beta, regime);
  if (parts[0] == "log_power") return Profile::log_power(beta, regime);
  fail("unknown profile kind \"" + parts[0] + "\" (power | log_power)");
}

Profile profile_from_json(const Json& j) {
  if (j.is_string()) return parse_profile(j.get<std::string>());
  const std::string kind = field(j, "kind").get<std::string>();
  const ThornRegime regime = regime_from(j.value("regime", std::string("infinity")));
  if (kind == "power") return Profile::power(number(j, "beta"), regime);
  if (kind == "log_power") return Profile::log_power(number(j, "beta"), regime);
  if (kind == "table") {
    std::vector<std::pair<double, double>> nodes;
    for (const auto& n : field(j, "nodes")) {
      if (!n.is_array() || n.size() != 2) fail("table nodes must be [t, f] pairs");
      nodes.emplace_back(n[0].get<double>(), n[1].get<double>());
    }
    return Profile::table(std::move(nodes), regime);
  }
  fail("unknown profile kind \"" + kind + "\"");
}

Json profile_to_json(const Profile& f) {
  Json j;
  j["regime"] = regime_name(f.regime());
  switch (f.kind()) {
    case ProfileKind::power:
      j["kind"] = "power";
      j["beta"] = f.beta();
      break;
    case ProfileKind::log_power:
      j["kind"] = "log_power";
      j["beta"] = f.beta();
      break;
    case ProfileKind::table: {
      j["kind"] = "table";
      Json nodes = Json::array();
      for (const auto& [lt, lf] : f.nodes()) nodes.push_back({std::exp(lt), std::exp(lf)});
      j["nodes"] = nodes;
      break;
    }
  }
  return j;
}

Domain domain_from_json(const Json& j) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "ball") return ball(point_from_json(field(j, "center")), number(j, "radius"));
  if (type == "halfspace") return halfspace(point_from_json(field(j, "normal")), j.value("offset", 0.0));
  if (type == "slab") return slab(point_from_json(field(j, "normal")), number(j, "lo"), number(j, "hi"));
  if (type == "thorn") {
    const Json& hi = j.contains("t_max") ? j.at("t_max") : Json();
    return thorn(profile_from_json(field(j, "profile")), point_from_json(field(j, "origin")),
                 point_from_json(field(j, "axis")), number(j, "t_min"),
                 hi.is_number() ? hi.get<double>() : std::numeric_limits<double>::infinity());
  }
  if (type == "standard_thorn" || type == "standard_finite_thorn") {
    const int d = field(j, "d").get<int>();
    const Profile f = profile_from_json(field(j, "profile"));
    return type == "standard_thorn" ? standard_thorn(f, d) : standard_finite_thorn(f, d);
  }
  if (type == "union" || type == "intersection") {
    std::vector<Domain> parts;
    for (const auto& p : field(j, "parts")) parts.push_back(domain_from_json(p));
    if (parts.empty()) fail("set operation needs at least one part");
    return type == "union" ? unite(std::move(parts)) : intersect(std::move(parts));
  }
  if (type == "complement") return complement(domain_from_json(field(j, "of")));
  if (type == "difference") return subtract(domain_from_json(field(j, "a")), domain_from_json(field(j, "b")));
  if (type == "truncate_inside" || type == "truncate_outside") {
    const Domain inner = domain_from_json(field(j, "domain"));
    const Point z0 = point_from_json(field(j, "z0"));
    const double p = number(j, "p");
    return type == "truncate_inside" ? truncate_inside(inner, z0, p) : truncate_outside(inner, z0, p);
  }
  if (type == "annulus")
    return truncate_annulus(domain_from_json(field(j, "domain")), point_from_json(field(j, "z0")), number(j, "p"),
                            number(j, "q"));
  fail("unknown domain type \"" + type + "\"");
}

Json domain_to_json(const Domain& d) {
  const DomainNode& n = d.node();
  Json j;
  switch (n.kind()) {
    case NodeKind::ball: {
      const auto& b = static_cast<const BallNode&>(n);
      j = {{"type", "ball"}, {"center", point_to_json(b.center)}, {"radius", b.radius}};
      break;
    }
    case NodeKind::halfspace: {
      const auto& h = static_cast<const HalfspaceNode&>(n);
      j = {{"type", "halfspace"}, {"normal", point_to_json(h.normal)}, {"offset", h.offset}};
      break;
    }
    case NodeKind::thorn: {
      const auto& t = static_cast<const ThornNode&>(n);
      j = {{"type", "thorn"},
           {"profile", profile_to_json(t.profile)},
           {"origin", point_to_json(t.origin)},
           {"axis", point_to_json(t.axis)},
           {"t_min", t.t_min}};
      j["t_max"] = std::isfinite(t.t_max) ? Json(t.t_max) : Json();
      break;
    }
    case NodeKind::unite:
    case NodeKind::intersect: {
      const auto& s = static_cast<const SetNode&>(n);
      Json parts = Json::array();
      for (const auto& p : s.parts) parts.push_back(domain_to_json(p));
      j = {{"type", n.kind() == NodeKind::unite ? "union" : "intersection"}, {"parts", parts}};
      break;
    }
    case NodeKind::complement:
      j = {{"type", "complement"}, {"of", domain_to_json(static_cast<const ComplementNode&>(n).inner)}};
      break;
    case NodeKind::truncate_inside:
    case NodeKind::truncate_outside: {
      const auto& t = static_cast<const TruncateNode&>(n);
      j = {{"type", n.kind() == NodeKind::truncate_inside ? "truncate_inside" : "truncate_outside"},
           {"domain", domain_to_json(t.inner)},
           {"z0", point_to_json(t.z0)},
           {"p", t.p}};
      break;
    }
  }
  return j;
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Byte offset to 1-based line and column.
    const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw std::invalid_argument("malformed JSON in " + source + " at line " + std::to_string(line) + ", column " +
                                std::to_string(col));
  }
}

}  // namespace martinpot::cli

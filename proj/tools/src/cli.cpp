#include "martinpot_cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "martinpot/accessibility.hpp"
#include "martinpot/closed_forms.hpp"
#include "martinpot/martin.hpp"
#include "martinpot/simulation.hpp"
#include "martinpot/special.hpp"
#include "martinpot/thinness.hpp"
#include "martinpot_cli/json_io.hpp"

namespace martinpot::cli {

namespace {

// ------------------------------------------------------------ errors

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InconclusiveResult {};

// ------------------------------------------------------------ option schema

enum class Kind { number, integer, text, point, points, json };

struct OptDef {
  std::string name;
  Kind kind;
  std::string help;
};

const std::vector<OptDef>& common_options() {
  static const std::vector<OptDef> opts = {
      {"seed", Kind::integer, "RNG seed (mandatory for Monte Carlo commands)"},
      {"workers", Kind::integer, "worker threads (env MARTINPOT_WORKERS when absent)"},
      {"out", Kind::text, "output file (default stdout)"},
      {"format", Kind::text, "csv | json"},
  };
  return opts;
}

const std::vector<OptDef>& process_options() {
  static const std::vector<OptDef> opts = {
      {"process", Kind::json, "process JSON object"},
      {"model", Kind::text, "stable | geometric_stable"},
      {"alpha", Kind::number, "stability index"},
      {"d", Kind::integer, "dimension"},
      {"iterations", Kind::integer, "geometric stable composition depth"},
  };
  return opts;
}

struct CommandDef {
  std::string name;
  std::string help;
  bool needs_process;
  bool needs_seed;
  std::string default_format;
  std::vector<OptDef> options;
};

const std::vector<CommandDef>& commands() {
  static const std::vector<CommandDef> defs = {
      {"oracle",
       "tabulate closed forms on balls and the whole space",
       true,
       false,
       "csv",
       {{"quantity", Kind::text, "poisson | green | exit | martin | riesz | constants"},
        {"center", Kind::point, "ball centre (default origin)"},
        {"radius", Kind::number, "ball radius (default 1)"},
        {"x", Kind::points, "evaluation points, ';'-separated"},
        {"y", Kind::point, "second point (green, riesz)"},
        {"z", Kind::point, "exterior or boundary point (poisson, martin)"},
        {"x0", Kind::point, "reference point (martin)"}}},
      {"simulate",
       "walk-on-spheres estimators",
       true,
       true,
       "csv",
       {{"estimator", Kind::text, "exit_time | harmonic_measure | poisson | green"},
        {"domain", Kind::json, "domain JSON (default unit ball)"},
        {"x", Kind::point, "start point"},
        {"y", Kind::point, "pole (green)"},
        {"z", Kind::point, "exterior point (poisson)"},
        {"target", Kind::json, "target set JSON (harmonic_measure)"},
        {"n", Kind::integer, "replicates"},
        {"excl", Kind::number, "exclusion radius (green)"},
        {"max_steps", Kind::integer, "walk-on-spheres step cap"},
        {"far_cutoff", Kind::number, "escape radius"}}},
      {"access",
       "Monte Carlo accessibility tests",
       true,
       true,
       "json",
       {{"domain", Kind::json, "domain JSON"},
        {"target", Kind::text, "boundary point or 'infinity'"},
        {"n", Kind::integer, "samples per shell"},
        {"shells", Kind::integer, "number of dyadic shells"}}},
      {"thorn",
       "thorn integral tests by quadrature",
       true,
       false,
       "json",
       {{"profile", Kind::text, "kind:beta[:regime], e.g. log_power:0.2"},
        {"at", Kind::text, "infinity | zero (default from the profile regime)"},
        {"levels", Kind::integer, "truncation levels"},
        {"growth", Kind::number, "truncation growth factor in log t"}}},
      {"martin",
       "Martin kernel estimates from Green ratios",
       true,
       true,
       "csv",
       {{"domain", Kind::json, "domain JSON (default unit ball)"},
        {"target", Kind::text, "boundary point or 'infinity'"},
        {"probes", Kind::points, "probe points, ';'-separated"},
        {"x0", Kind::point, "reference point"},
        {"approach", Kind::text, "levels separated by '|', points by ';'"},
        {"n", Kind::integer, "chains per approach point"},
        {"ro_tol", Kind::number, "oscillation tolerance for the converged flag"}}},
      {"schedule",
       "contraction schedule of the oscillation reduction",
       false,
       false,
       "json",
       {{"eta", Kind::number, "target oscillation slack"}, {"C", Kind::number, "boundary Harnack constant"}}},
      {"thinness",
       "minimal thinness tests and locality experiments",
       true,
       true,
       "json",
       {{"domain", Kind::json, "domain D"},
        {"F", Kind::json, "test set F (omit for the empty set)"},
        {"E", Kind::json, "subdomain E for a locality experiment"},
        {"radius", Kind::number, "agreement radius of E and D near the target"},
        {"target", Kind::text, "boundary point or 'infinity'"},
        {"probes", Kind::points, "probe points"},
        {"x0", Kind::point, "reference point"},
        {"approach", Kind::points, "approach points ordered toward the target"},
        {"n", Kind::integer, "chains"}}},
  };
  return defs;
}

// ------------------------------------------------------------ value normalisation

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_points_text(const std::string& text) {
  Json arr = Json::array();
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(';', start);
    const std::string item = text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    if (!item.empty()) arr.push_back(point_to_json(parse_point(item)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (arr.empty()) throw UsageError("empty point list");
  return arr;
}

Json normalise(const OptDef& def, const Json& raw, const std::string& source) {
  try {
    switch (def.kind) {
      case Kind::number:
        if (raw.is_number()) return raw.get<double>();
        if (raw.is_string()) {
          std::size_t used = 0;
          const double v = std::stod(raw.get<std::string>(), &used);
          if (used != raw.get<std::string>().size()) break;
          return v;
        }
        break;
      case Kind::integer:
        if (raw.is_number_integer()) return raw.get<std::int64_t>();
        if (raw.is_string()) {
          std::size_t used = 0;
          const long long v = std::stoll(raw.get<std::string>(), &used);
          if (used != raw.get<std::string>().size()) break;
          return static_cast<std::int64_t>(v);
        }
        break;
      case Kind::text:
        if (raw.is_string()) return raw;
        break;
      case Kind::point:
        return point_to_json(point_from_json(raw));
      case Kind::points:
        if (raw.is_string()) return parse_points_text(raw.get<std::string>());
        if (raw.is_array()) {
          Json arr = Json::array();
          for (const auto& p : raw) arr.push_back(point_to_json(point_from_json(p)));
          return arr;
        }
        break;
      case Kind::json:
        if (raw.is_string()) {
          const std::string s = raw.get<std::string>();
          if (!s.empty() && s[0] == '@') return parse_json_text(read_file(s.substr(1)), s.substr(1));
          return parse_json_text(s, "--" + def.name);
        }
        return raw;
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("invalid value for " + def.name + " in " + source + ": " + e.what());
  }
  throw UsageError("invalid value for " + def.name + " in " + source + ": " + raw.dump());
}

// ------------------------------------------------------------ parameters

class Params {
 public:
  explicit Params(Json j) : j_(std::move(j)) {}
  bool has(const std::string& k) const { return j_.contains(k); }
  const Json& raw() const { return j_; }
  double num(const std::string& k) const { return req(k).get<double>(); }
  double num(const std::string& k, double dflt) const { return has(k) ? num(k) : dflt; }
  std::int64_t integer(const std::string& k) const { return req(k).get<std::int64_t>(); }
  std::int64_t integer(const std::string& k, std::int64_t dflt) const { return has(k) ? integer(k) : dflt; }
  std::string text(const std::string& k) const { return req(k).get<std::string>(); }
  std::string text(const std::string& k, const std::string& dflt) const { return has(k) ? text(k) : dflt; }
  Point point(const std::string& k) const { return point_from_json(req(k)); }
  std::vector<Point> points(const std::string& k) const {
    std::vector<Point> out;
    for (const auto& p : req(k)) out.push_back(point_from_json(p));
    return out;
  }
  const Json& req(const std::string& k) const {
    if (!has(k)) throw UsageError("missing required parameter --" + k);
    return j_.at(k);
  }

 private:
  Json j_;
};

ProcessSpec process_of(const Params& p) {
  if (p.has("process")) return process_from_json(p.req("process"));
  Json j;
  j["model"] = p.text("model", "stable");
  j["alpha"] = p.num("alpha");
  j["d"] = p.integer("d");
  if (p.has("iterations")) j["iterations"] = p.integer("iterations");
  return process_from_json(j);
}

Domain domain_of(const Params& p, const std::string& key, int d) {
  if (!p.has(key)) {
    if (key == "domain") return ball(Point(d), 1.0);
    throw UsageError("missing required parameter --" + key);
  }
  const Domain dom = domain_from_json(p.req(key));
  if (dom.dim() != d) throw UsageError("--" + key + " has dimension " + std::to_string(dom.dim()) + ", process has " + std::to_string(d));
  return dom;
}

MartinTarget target_of(const Params& p) {
  const std::string t = p.text("target");
  if (t == "infinity" || t == "inf") return MartinTarget::infinity();
  return MartinTarget::at(parse_point(t));
}

McConfig mc_of(const Params& p, int workers, std::int64_t default_n) {
  McConfig c;
  c.n = p.integer("n", default_n);
  if (c.n <= 0) throw UsageError("--n must be positive");
  c.seed = static_cast<std::uint64_t>(p.integer("seed", 0));
  c.workers = workers;
  return c;
}

// ------------------------------------------------------------ output

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Row {
  std::string op;
  Json params;
  double value = 0.0;
  double stderr_ = 0.0;
  std::int64_t n = 0;
  std::string flags;
};

struct Output {
  std::vector<Row> rows;
  Json doc = Json::object();
  bool inconclusive = false;
};

std::string flag_list(std::initializer_list<std::pair<const char*, std::string>> items) {
  std::string s;
  for (const auto& [k, v] : items) {
    if (!s.empty()) s += ';';
    s += k;
    s += '=';
    s += v;
  }
  return s;
}

Json estimate_json(const Estimate& e) {
  return {{"value", e.value},
          {"stderr", e.std_error},
          {"n", e.n},
          {"diverged", e.diverged},
          {"truncated_fraction", e.truncated_fraction},
          {"escaped_fraction", e.escaped_fraction}};
}

Json divergence_json(const DivergenceReport& r) {
  return {{"integrand", r.integrand},
          {"variable", r.variable},
          {"truncations", r.truncations},
          {"partials", r.partials},
          {"increments", r.increments},
          {"increment_ratios", r.increment_ratios},
          {"growth_exponent", r.growth_exponent},
          {"verdict", to_string(r.verdict)},
          {"note", r.note}};
}

Json points_json(const std::vector<Point>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(point_to_json(p));
  return a;
}

Json target_json(const MartinTarget& t) { return t.point ? point_to_json(*t.point) : Json("infinity"); }

// ------------------------------------------------------------ commands

using Handler = std::function<Output(const Params&, const Json&, int)>;

Output cmd_oracle(const Params& p, const Json& echo, int) {
  const ProcessSpec spec = process_of(p);
  const int d = spec.d();
  const double alpha = spec.alpha();
  const std::string q = p.text("quantity");
  Output o;
  Json values = Json::array();
  auto emit = [&](const std::string& what, Json extra, double v) {
    Json params = echo;
    for (auto& [k, val] : extra.items()) params[k] = val;
    o.rows.push_back({"oracle." + what, params, v, 0.0, 1, ""});
    extra["value"] = v;
    values.push_back(extra);
  };
  if (q == "constants") {
    emit("levy_constant", Json::object(), special::stable_levy_constant(d, alpha));
    emit("poisson_constant", Json::object(), special::stable_poisson_constant(d, alpha));
    emit("green_constant", Json::object(), special::stable_green_constant(d, alpha));
    emit("exit_constant", Json::object(), special::stable_exit_constant(d, alpha));
    if (alpha < d) emit("riesz_constant", Json::object(), special::stable_riesz_constant(d, alpha));
  } else {
    const BallSpec b(p.has("center") ? p.point("center") : Point(d), p.num("radius", 1.0), alpha);
    for (const Point& x : p.points("x")) {
      const Json at = {{"at", point_to_json(x)}};
      if (q == "poisson")
        emit(q, at, ball_poisson_kernel(b, x, p.point("z")));
      else if (q == "green")
        emit(q, at, ball_green(b, x, p.point("y")));
      else if (q == "exit")
        emit(q, at, ball_expected_exit(b, x));
      else if (q == "martin")
        emit(q, at, ball_martin_kernel(b, x, p.point("z"), p.point("x0")));
      else if (q == "riesz")
        emit(q, at, riesz_green(alpha, d, x, p.point("y")));
      else
        throw UsageError("unknown --quantity \"" + q + "\"");
    }
  }
  o.doc = {{"op", "oracle." + q}, {"values", values}};
  return o;
}

Output cmd_simulate(const Params& p, const Json& echo, int workers) {
  const ProcessSpec spec = process_of(p);
  const Domain dom = domain_of(p, "domain", spec.d());
  const McConfig cfg = mc_of(p, workers, 10000);
  WosOptions wos;
  wos.max_steps = p.integer("max_steps", wos.max_steps);
  wos.far_cutoff = p.num("far_cutoff", wos.far_cutoff);
  const std::string est = p.text("estimator");
  const Point x = p.point("x");
  Estimate e;
  if (est == "exit_time")
    e = estimate_exit_time(spec, dom, x, cfg, wos);
  else if (est == "harmonic_measure")
    e = estimate_harmonic_measure(spec, dom, x, domain_of(p, "target", spec.d()), cfg, wos);
  else if (est == "poisson")
    e = estimate_poisson_kernel(spec, dom, x, p.point("z"), cfg, wos);
  else if (est == "green")
    e = estimate_green(spec, dom, x, p.point("y"), cfg, p.num("excl", 0.0), wos);
  else
    throw UsageError("unknown --estimator \"" + est + "\"");
  Output o;
  o.rows.push_back({"simulate." + est, echo, e.value, e.std_error, e.n,
                    flag_list({{"truncated_frac", fmt(e.truncated_fraction)},
                               {"escaped_frac", fmt(e.escaped_fraction)},
                               {"diverged", e.diverged ? "1" : "0"}})});
  o.doc = {{"op", "simulate." + est}, {"estimate", estimate_json(e)}};
  o.inconclusive = e.diverged;
  return o;
}

Output cmd_access(const Params& p, const Json& echo, int workers) {
  const ProcessSpec spec = process_of(p);
  const Domain dom = domain_of(p, "domain", spec.d());
  const McConfig cfg = mc_of(p, workers, 4000);
  ShellTestOptions opt;
  opt.shells = static_cast<int>(p.integer("shells", opt.shells));
  const MartinTarget t = target_of(p);
  const AccessVerdict v = t.point ? finite_point_test(spec, dom, *t.point, cfg, opt) : infinity_test(spec, dom, cfg, opt);
  Output o;
  for (std::size_t k = 0; k < v.evidence.partials.size(); ++k) {
    Json params = echo;
    params["shell"] = k;
    params["truncation"] = v.evidence.truncations[k];
    o.rows.push_back({"access.shell", params, v.evidence.partials[k], v.shell_std_errors[k], cfg.n,
                      flag_list({{"verdict", to_string(v.verdict)}})});
  }
  o.doc = {{"op", "access"},
           {"target", target_json(t)},
           {"verdict", to_string(v.verdict)},
           {"method", v.method},
           {"evidence", divergence_json(v.evidence)},
           {"shell_stderr", v.shell_std_errors}};
  o.inconclusive = v.verdict == Accessibility::inconclusive;
  return o;
}

Output cmd_thorn(const Params& p, const Json& echo, int) {
  const ProcessSpec spec = process_of(p);
  const Profile f = parse_profile(p.text("profile"));
  ThornTestOptions opt;
  opt.levels = static_cast<int>(p.integer("levels", opt.levels));
  opt.growth = p.num("growth", opt.growth);
  const std::string at = p.text("at", f.regime() == ThornRegime::zero ? "zero" : "infinity");
  if (at != "infinity" && at != "zero") throw UsageError("--at must be infinity or zero");
  const DivergenceReport r = at == "zero" ? thorn_finite_test(spec, f, opt) : thorn_infinity_test(spec, f, opt);
  Output o;
  for (std::size_t k = 0; k < r.partials.size(); ++k) {
    Json params = echo;
    params["level"] = k;
    params["truncation"] = r.truncations[k];
    o.rows.push_back({"thorn.partial", params, r.partials[k], 0.0, 1, flag_list({{"verdict", to_string(r.verdict)}})});
  }
  o.doc = {{"op", "thorn"}, {"at", at}, {"profile", profile_to_json(f)}, {"verdict", to_string(r.verdict)},
           {"report", divergence_json(r)}};
  o.inconclusive = r.verdict == Divergence::inconclusive;
  return o;
}

std::vector<ApproachLevel> approach_of(const Params& p, const MartinTarget& t, const Point& x0) {
  std::vector<ApproachLevel> levels;
  if (p.has("approach")) {
    const std::string text = p.text("approach");
    std::size_t start = 0;
    while (true) {
      const auto pos = text.find('|', start);
      const std::string item = text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
      ApproachLevel lvl;
      for (const auto& pt : parse_points_text(item)) lvl.v.push_back(point_from_json(pt));
      levels.push_back(lvl);
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return levels;
  }
  if (!t.point) throw UsageError("--approach is required for the target at infinity");
  const Point dir = normalized(x0 - *t.point);
  for (double h : {0.1, 0.05, 0.025}) levels.push_back({{*t.point + dir * h}});
  return levels;
}

Output cmd_martin(const Params& p, const Json& echo, int workers) {
  const ProcessSpec spec = process_of(p);
  const Domain dom = domain_of(p, "domain", spec.d());
  const McConfig cfg = mc_of(p, workers, 20000);
  const MartinTarget t = target_of(p);
  const Point x0 = p.has("x0") ? p.point("x0") : Point(spec.d());
  const std::vector<Point> probes = p.points("probes");
  MartinOptions opt;
  opt.ro_tol = p.num("ro_tol", opt.ro_tol);
  const auto levels = approach_of(p, t, x0);
  const MartinEstimate est = estimate_martin_kernel(spec, dom, probes, x0, t, levels, cfg, opt);
  Output o;
  Json lv = Json::array();
  for (std::size_t j = 0; j < est.levels.size(); ++j) {
    const auto& L = est.levels[j];
    for (std::size_t i = 0; i < probes.size(); ++i) {
      Json params = echo;
      params["level"] = j;
      params["probe"] = point_to_json(probes[i]);
      params["v"] = points_json(L.v);
      o.rows.push_back({"martin.level", params, L.ratio[i], L.ratio_se[i], cfg.n,
                        flag_list({{"ro", fmt(L.ro)}, {"ro_se", fmt(L.ro_se)}})});
    }
    lv.push_back({{"level", j}, {"v", points_json(L.v)}, {"ratio", L.ratio}, {"stderr", L.ratio_se}, {"ro", L.ro},
                  {"ro_se", L.ro_se}, {"diverged", L.diverged}});
  }
  for (std::size_t i = 0; i < probes.size(); ++i) {
    Json params = echo;
    params["probe"] = point_to_json(probes[i]);
    o.rows.push_back({"martin.kernel", params, est.kernel[i], est.kernel_se[i], cfg.n,
                      flag_list({{"converged", est.converged ? "1" : "0"}})});
  }
  o.doc = {{"op", "martin"},      {"target", target_json(t)},  {"x0", point_to_json(x0)},
           {"probes", points_json(probes)}, {"levels", lv}, {"kernel", est.kernel},
           {"kernel_stderr", est.kernel_se}, {"converged", est.converged}, {"note", est.note}};
  o.inconclusive = est.inconclusive || !est.converged;
  return o;
}

Output cmd_schedule(const Params& p, const Json& echo, int) {
  const Schedule s = contraction_schedule(p.num("eta"), p.num("C"));
  Output o;
  o.rows.push_back({"schedule", echo, s.fixed_point, 0.0, 1,
                    flag_list({{"l", std::to_string(s.l)},
                               {"eps", fmt(s.eps)},
                               {"k", std::to_string(s.k)},
                               {"n", std::to_string(s.n)},
                               {"phi_l_of_C", fmt(s.phi_l_of_C)}})});
  o.doc = {{"op", "schedule"}, {"eta", s.eta}, {"C", s.C},     {"l", s.l},
           {"eps", s.eps},     {"k", s.k},     {"n", s.n},     {"fixed_point", s.fixed_point},
           {"phi_l_of_C", s.phi_l_of_C}, {"radius_multipliers", Json::array({8.0})},
           {"note", "radius multipliers beyond q_0 need a domain mass function and are produced by the library"}};
  return o;
}

Json thinness_json(const ThinnessReport& r) {
  Json probes = Json::array();
  for (const auto& q : r.probes)
    probes.push_back({{"x", point_to_json(q.x)},
                      {"martin", q.martin},
                      {"martin_stderr", q.martin_se},
                      {"reduced", q.reduced},
                      {"reduced_stderr", q.reduced_se},
                      {"fraction", q.fraction},
                      {"fraction_stderr", q.fraction_se}});
  return {{"target", target_json(r.target)}, {"x0", point_to_json(r.x0)},
          {"approach", point_to_json(r.approach)}, {"verdict", to_string(r.verdict)},
          {"thin_fraction", r.thin_fraction}, {"martin_converged", r.martin_converged},
          {"truncated_fraction", r.truncated_fraction}, {"note", r.note}, {"probes", probes}};
}

Output cmd_thinness(const Params& p, const Json& echo, int workers) {
  const ProcessSpec spec = process_of(p);
  const int d = spec.d();
  const Domain dom = domain_of(p, "domain", d);
  const std::optional<Domain> F = p.has("F") ? std::optional<Domain>(domain_of(p, "F", d)) : std::nullopt;
  const McConfig cfg = mc_of(p, workers, 20000);
  const MartinTarget t = target_of(p);
  const Point x0 = p.has("x0") ? p.point("x0") : Point(d);
  const std::vector<Point> probes = p.points("probes");
  std::vector<Point> approach;
  if (p.has("approach")) {
    approach = p.points("approach");
  } else {
    for (const auto& lvl : approach_of(p, t, x0)) approach.push_back(lvl.v.front());
  }
  Output o;
  auto rows_of = [&](const ThinnessReport& r, const std::string& where) {
    for (const auto& q : r.probes) {
      Json params = echo;
      params["probe"] = point_to_json(q.x);
      params["in"] = where;
      o.rows.push_back({"thinness.probe", params, q.fraction, q.fraction_se, cfg.n,
                        flag_list({{"verdict", to_string(r.verdict)}})});
    }
  };
  if (p.has("E")) {
    const Domain E = domain_of(p, "E", d);
    const LocalityReport L = locality_experiment(spec, dom, E, F, t, p.num("radius"), probes, x0, approach, cfg);
    rows_of(L.in_E, "E");
    rows_of(L.in_D, "D");
    o.doc = {{"op", "locality"}, {"in_E", thinness_json(L.in_E)}, {"in_D", thinness_json(L.in_D)}, {"agree", L.agree}};
    o.inconclusive = !L.agree || L.in_E.verdict == Thinness::inconclusive || L.in_D.verdict == Thinness::inconclusive;
  } else {
    const ThinnessReport r = thinness_test(spec, dom, F, t, probes, x0, approach, cfg);
    rows_of(r, "D");
    o.doc = thinness_json(r);
    o.doc["op"] = "thinness";
    o.inconclusive = r.verdict == Thinness::inconclusive;
  }
  return o;
}

Handler handler_for(const std::string& name) {
  static const std::map<std::string, Handler> table = {
      {"oracle", cmd_oracle}, {"simulate", cmd_simulate}, {"access", cmd_access},    {"thorn", cmd_thorn},
      {"martin", cmd_martin}, {"schedule", cmd_schedule}, {"thinness", cmd_thinness},
  };
  return table.at(name);
}

// ------------------------------------------------------------ driver

int resolve_workers(const Params& p) {
  if (p.has("workers")) return static_cast<int>(std::max<std::int64_t>(1, p.integer("workers")));
  if (const char* env = std::getenv("MARTINPOT_WORKERS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw UsageError(std::string("MARTINPOT_WORKERS is not an integer: ") + env);
    }
  }
  return 1;
}

void write_output(const Output& o, const std::string& format, const Json& echo, std::int64_t seed, long long wall_ms,
                  std::ostream& out) {
  if (format == "json") {
    Json doc = o.doc;
    doc["version"] = kVersion;
    doc["seed"] = seed;
    doc["params"] = echo;
    out << doc.dump(2) << "\n";
    return;
  }
  out << "op,params_json,value,stderr,n,seed,flags,wall_ms\n";
  for (const auto& r : o.rows) {
    Json params = r.params;
    params["version"] = kVersion;
    out << r.op << ',' << csv_quote(params.dump()) << ',' << fmt(r.value) << ',' << fmt(r.stderr_) << ',' << r.n << ','
        << seed << ',' << csv_quote(r.flags) << ',' << wall_ms << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"martinpot: potential theory of stable processes", "martinpot"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Slot {
    const OptDef* def;
    std::string value;
    CLI::Option* opt;
  };
  std::map<std::string, std::vector<Slot>> slots;
  std::map<std::string, std::string> config_paths;
  for (const auto& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    auto& list = slots[cmd.name];
    list.reserve(common_options().size() + process_options().size() + cmd.options.size());
    sub->add_option("--config", config_paths[cmd.name], "JSON config; keys mirror the flags");
    auto add = [&](const OptDef& d) {
      list.push_back({&d, "", nullptr});
      list.back().opt = sub->add_option("--" + d.name, list.back().value, d.help);
    };
    for (const auto& d : common_options()) add(d);
    if (cmd.needs_process)
      for (const auto& d : process_options()) add(d);
    for (const auto& d : cmd.options) add(d);
  }

  if (!args.empty() && !args.front().empty() && args.front()[0] != '-') {
    const auto& cs = commands();
    if (std::none_of(cs.begin(), cs.end(), [&](const CommandDef& c) { return c.name == args.front(); })) {
      err << "usage error: unknown subcommand '" << args.front() << "'\n";
      return kUsage;
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  const CommandDef* cmd = nullptr;
  for (const auto& c : commands())
    if (app.got_subcommand(c.name)) cmd = &c;
  auto& list = slots[cmd->name];

  std::string out_path;
  try {
    Json params = Json::object();
    if (!config_paths[cmd->name].empty()) {
      const std::string& path = config_paths[cmd->name];
      Json cfg = parse_json_text(read_file(path), path);
      if (!cfg.is_object()) throw UsageError("config " + path + " must be a JSON object");
      for (auto& [key, val] : cfg.items()) {
        auto it = std::find_if(list.begin(), list.end(), [&](const Slot& s) { return s.def->name == key; });
        if (it == list.end()) throw UsageError("unknown key \"" + key + "\" in config " + path);
        params[key] = normalise(*it->def, val, path);
      }
    }
    for (const auto& s : list)
      if (s.opt->count() > 0) params[s.def->name] = normalise(*s.def, Json(s.value), "--" + s.def->name);

    const Params p(params);
    if (cmd->needs_seed && !p.has("seed")) throw UsageError(cmd->name + " requires --seed");
    const std::string format = p.text("format", cmd->default_format);
    if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
    out_path = p.text("out", "");
    const int workers = resolve_workers(p);

    // Execution settings do not change results and stay out of the echo.
    Json echo = params;
    for (const char* k : {"workers", "out", "format"}) echo.erase(k);

    const auto t0 = std::chrono::steady_clock::now();
    const Output o = handler_for(cmd->name)(p, echo, workers);
    const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();

    const std::int64_t seed = p.integer("seed", 0);
    if (out_path.empty()) {
      write_output(o, format, echo, seed, static_cast<long long>(wall), out);
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + out_path);
      write_output(o, format, echo, seed, static_cast<long long>(wall), f);
    }
    return o.inconclusive ? kInconclusive : kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace martinpot::cli

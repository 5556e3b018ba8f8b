#include "gbo/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gbo/error.hpp"

namespace gbo {

using nlohmann::json;

namespace {

// Reads fields from one JSON object and rejects whatever was not consumed.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InvalidArgument(where("") + "expected a JSON object");
  }

  void number(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) fail(key, "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(key, "must be finite");
    }
  }
  template <class U>
  void unsigned_int(const char* key, U& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) fail(key, "expected a nonnegative integer");
      out = static_cast<U>(v->get<std::uint64_t>());
    }
  }
  void integer(const char* key, int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      out = v->get<int>();
    }
  }
  void boolean(const char* key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) fail(key, "expected true or false");
      out = v->get<bool>();
    }
  }
  void string(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) fail(key, "expected a string");
      out = v->get<std::string>();
    }
  }
  void numbers(const char* key, std::vector<double>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array() || v->empty()) fail(key, "expected a nonempty array of numbers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) fail(key, "expected a nonempty array of numbers");
        out.push_back(e.get<double>());
      }
    }
  }
  void counts(const char* key, std::vector<std::size_t>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array() || v->empty()) fail(key, "expected a nonempty array of integers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number_unsigned()) fail(key, "expected a nonempty array of integers");
        out.push_back(e.get<std::size_t>());
      }
    }
  }
  void strings(const char* key, std::vector<std::string>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) fail(key, "expected an array of strings");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_string()) fail(key, "expected an array of strings");
        out.push_back(e.get<std::string>());
      }
    }
  }
  const json* object(const char* key) {
    const json* v = take(key);
    if (v && !v->is_object()) fail(key, "expected a JSON object");
    return v;
  }
  const json* raw(const char* key) { return take(key); }

  std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw InvalidArgument("unknown key '" + child(it.key().c_str()) + "'");
  }

  [[noreturn]] void fail(const char* key, const std::string& msg) const {
    throw InvalidArgument("field '" + child(key) + "': " + msg);
  }

 private:
  const json* take(const char* key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  std::string where(const std::string& key) const {
    const std::string p = key.empty() ? path_ : child(key.c_str());
    return p.empty() ? "" : "field '" + p + "': ";
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void read_data(const json& j, InitialData& d) {
  Fields f(j, "data");
  f.string("family", d.family);
  f.number("amp", d.amp);
  f.number("width", d.width);
  if (const json* x0 = f.raw("x0")) {
    if (x0->is_null()) {
      d.x0 = std::nan("");
    } else {
      if (!x0->is_number()) f.fail("x0", "expected a number or null");
      d.x0 = x0->get<double>();
    }
  }
  f.number("carrier", d.carrier);
  f.unsigned_int("max_mode", d.max_mode);
  f.number("decay", d.decay);
  f.unsigned_int("seed", d.seed);
  f.finish();
}

RunConfig from_json(const json& doc) {
  RunConfig c;
  Fields f(doc, "");
  SimConfig& s = c.sim;

  // k is checked first so its message is not masked by derived checks.
  f.integer("k", s.k);
  require_valid_power(s.k);

  f.unsigned_int("N", s.N);
  f.number("L", s.L);
  f.unsigned_int("pad", s.pad);
  f.number("dt", s.dt);
  f.number("t_end", s.t_end);
  std::string integ = to_string(s.integrator);
  f.string("integrator", integ);
  try {
    s.integrator = integrator_from_string(integ);
  } catch (const InvalidArgument& e) {
    f.fail("integrator", e.what());
  }
  if (const json* d = f.object("data")) read_data(*d, s.data);
  f.number("snapshot_dt", s.snapshot_dt);
  f.number("checkpoint_dt", s.checkpoint_dt);
  f.number("R", s.R);
  f.number("R1", s.R1);
  f.boolean("focusing", s.focusing);
  f.boolean("linear_only", s.linear_only);
  f.number("guard_tol", s.guard_tol);
  f.number("cfl_max", s.cfl_max);
  f.number("blowup_factor", s.blowup_factor);

  f.strings("suites", c.suites);
  for (const auto& name : c.suites) {
    bool ok = false;
    for (const auto& k : known_suites()) ok = ok || k == name;
    if (!ok) f.fail("suites", "unknown suite '" + name + "'");
  }
  f.string("out", c.out);
  f.unsigned_int("seed", c.seed);
  f.unsigned_int("workers", c.workers);
  if (c.workers < 1) f.fail("workers", "must be >= 1");

  if (const json* o = f.object("conservation")) {
    Fields g(*o, "conservation");
    g.number("tol", c.conservation.tol);
    g.finish();
  }
  if (const json* o = f.object("monotonicity")) {
    Fields g(*o, "monotonicity");
    auto& m = c.monotonicity;
    g.unsigned_int("samples", m.samples);
    g.unsigned_int("N", m.N);
    g.number("L", m.L);
    g.unsigned_int("max_mode", m.max_mode);
    g.number("gap_tol", m.gap_tol);
    g.number("drift_tol", m.drift_tol);
    g.finish();
  }
  if (const json* o = f.object("local")) {
    Fields g(*o, "local");
    auto& m = c.local;
    g.numbers("radii", m.radii);
    g.number("fft_tol", m.fft_tol);
    g.number("sup_slack", m.sup_slack);
    g.boolean("budget", m.budget);
    g.finish();
    for (double r : m.radii)
      if (!(r > 0.0)) g.fail("radii", "radii must be positive");
  }
  if (const json* o = f.object("positivity")) {
    Fields g(*o, "positivity");
    auto& m = c.positivity;
    g.counts("N_modes", m.N_modes);
    g.integer("restarts", m.restarts);
    g.number("tol", m.tol);
    g.integer("max_iter", m.max_iter);
    g.unsigned_int("samples", m.samples);
    g.unsigned_int("falsifier_N", m.falsifier_N);
    g.number("chi_beta", m.chi_beta);
    g.integer("chi_n", m.chi_n);
    g.boolean("precondition", m.precondition);
    g.number("f_floor", m.f_floor);
    g.number("identity_tol", m.identity_tol);
    g.finish();
    if (m.restarts < 1) g.fail("restarts", "must be >= 1");
    if (m.samples < 1) g.fail("samples", "must be >= 1");
    for (auto n : m.N_modes)
      if (n < 1) g.fail("N_modes", "entries must be >= 1");
  }
  if (const json* o = f.object("norms")) {
    Fields g(*o, "norms");
    auto& m = c.norms;
    g.unsigned_int("samples", m.samples);
    g.unsigned_int("N", m.N);
    g.number("L", m.L);
    g.unsigned_int("max_mode", m.max_mode);
    g.integer("J", m.J);
    g.integer("C_k", m.C_k);
    g.number("eps", m.eps);
    g.number("identity_tol", m.identity_tol);
    g.finish();
  }
  if (const json* sw = f.raw("sweep")) {
    if (!sw->is_array()) f.fail("sweep", "expected an array of override objects");
    for (const auto& e : *sw) {
      if (!e.is_object()) f.fail("sweep", "expected an array of override objects");
      if (e.contains("sweep")) f.fail("sweep", "overrides may not nest 'sweep'");
      c.sweep.push_back(e.dump());
    }
  }
  f.finish();

  validate(s);
  json base = doc;
  base.erase("sweep");
  c.base_json = base.dump();
  return c;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("config parse error: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) { return from_json(parse_json(text)); }

RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig apply_override(const RunConfig& base, const std::string& override_json) {
  json doc = parse_json(base.base_json);
  doc.merge_patch(parse_json(override_json));
  return from_json(doc);
}

std::string to_json(const RunConfig& c) {
  const SimConfig& s = c.sim;
  json data = {{"family", s.data.family}, {"amp", s.data.amp},       {"width", s.data.width},
               {"carrier", s.data.carrier}, {"max_mode", s.data.max_mode},
               {"decay", s.data.decay},     {"seed", s.data.seed}};
  data["x0"] = std::isnan(s.data.x0) ? json(nullptr) : json(s.data.x0);
  json j = {{"k", s.k},
            {"N", s.N},
            {"L", s.L},
            {"pad", s.pad},
            {"dt", s.dt},
            {"t_end", s.t_end},
            {"integrator", to_string(s.integrator)},
            {"data", data},
            {"snapshot_dt", s.snapshot_dt},
            {"checkpoint_dt", s.checkpoint_dt},
            {"R", s.R},
            {"R1", s.effective_R1()},
            {"focusing", s.focusing},
            {"linear_only", s.linear_only},
            {"guard_tol", s.guard_tol},
            {"cfl_max", s.cfl_max},
            {"blowup_factor", s.blowup_factor},
            {"suites", c.suites},
            {"seed", c.seed}};
  j["conservation"] = {{"tol", c.conservation.tol}};
  const auto& m = c.monotonicity;
  j["monotonicity"] = {{"samples", m.samples},   {"N", m.N},           {"L", m.L},
                       {"max_mode", m.max_mode}, {"gap_tol", m.gap_tol}, {"drift_tol", m.drift_tol}};
  j["local"] = {{"radii", c.local.radii},
                {"fft_tol", c.local.fft_tol},
                {"sup_slack", c.local.sup_slack},
                {"budget", c.local.budget}};
  const auto& p = c.positivity;
  j["positivity"] = {{"N_modes", p.N_modes},         {"restarts", p.restarts},
                     {"tol", p.tol},                 {"max_iter", p.max_iter},
                     {"samples", p.samples},         {"falsifier_N", p.falsifier_N},
                     {"chi_beta", p.chi_beta},       {"chi_n", p.chi_n},
                     {"precondition", p.precondition}, {"f_floor", p.f_floor},
                     {"identity_tol", p.identity_tol}};
  const auto& n = c.norms;
  j["norms"] = {{"samples", n.samples}, {"N", n.N},   {"L", n.L},     {"max_mode", n.max_mode},
                {"J", n.J},             {"C_k", n.C_k}, {"eps", n.eps}, {"identity_tol", n.identity_tol}};
  return j.dump(2);
}

}  // namespace gbo

#include "mhd2d/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mhd2d/error.hpp"

namespace mhd2d {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  return k.find("..") == std::string::npos;
}

bool parse_number(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  const auto r = std::from_chars(b, e, out);
  return r.ec == std::errc{} && r.ptr == e && std::isfinite(out);
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text, const std::string& origin) {
  ConfigDocument doc;
  doc.origin_ = origin;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw FormatError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull()) return doc;
  if (!root.IsMap()) throw FormatError(origin + ": top level must be a mapping");
  doc.flatten(root, "");
  return doc;
}

void ConfigDocument::flatten(const YAML::Node& node, const std::string& prefix) {
  for (const auto& item : node) {
    const int line = item.first.Mark().line + 1;
    const std::string name = item.first.Scalar();
    const std::string key = prefix.empty() ? name : prefix + "." + name;
    auto error = [&](const std::string& what) {
      throw FormatError(origin_ + ":" + std::to_string(line) + ": " + key + ": " + what);
    };
    if (!valid_key(name)) error("invalid key");
    const YAML::Node& value = item.second;
    if (value.IsMap()) {
      flatten(value, key);
      continue;
    }
    std::string text;
    if (value.IsScalar()) {
      text = value.Scalar();
    } else if (value.IsSequence()) {
      text = "[";
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].IsScalar()) error("lists may only hold scalars");
        text += (i ? ", " : "") + value[i].Scalar();
      }
      text += "]";
    } else {
      error("missing value");
    }
    if (entries_.count(key)) error("duplicate key");
    entries_[key] = text;
    lines_[key] = line;
  }
}

ConfigDocument ConfigDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

void ConfigDocument::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw FormatError("invalid key '" + key + "'");
  entries_[key] = value;
  lines_[key] = 0;
}

const std::string* ConfigDocument::find(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

void ConfigDocument::fail(const std::string& key, const std::string& expected) const {
  const int line = lines_.count(key) ? lines_.at(key) : 0;
  std::string where = origin_;
  if (line > 0) where += ":" + std::to_string(line);
  throw FormatError(where + ": " + key + ": expected " + expected + ", got '" +
                    entries_.at(key) + "'");
}

double ConfigDocument::get_double(const std::string& key, double fallback) const {
  const std::string* e = find(key);
  if (!e) return fallback;
  double v = 0.0;
  if (!parse_number((*e), v)) fail(key, "a finite number");
  return v;
}

std::int64_t ConfigDocument::get_int(const std::string& key, std::int64_t fallback) const {
  const std::string* e = find(key);
  if (!e) return fallback;
  std::int64_t v = 0;
  const char* b = (*e).data();
  const char* end = b + (*e).size();
  const auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc{} || r.ptr != end) fail(key, "an integer");
  return v;
}

bool ConfigDocument::get_bool(const std::string& key, bool fallback) const {
  const std::string* e = find(key);
  if (!e) return fallback;
  if ((*e) == "true") return true;
  if ((*e) == "false") return false;
  fail(key, "true or false");
}

std::string ConfigDocument::get_string(const std::string& key, const std::string& fallback) const {
  const std::string* e = find(key);
  return e ? (*e) : fallback;
}

std::vector<double> ConfigDocument::get_double_list(const std::string& key,
                                                    const std::vector<double>& fallback) const {
  const std::string* e = find(key);
  if (!e) return fallback;
  std::string body = (*e);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    fail(key, "a list like [1, 2, 3]");
  body = body.substr(1, body.size() - 2);
  std::vector<double> out;
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    double v = 0.0;
    if (!parse_number(item, v)) fail(key, "a list of finite numbers");
    out.push_back(v);
  }
  return out;
}

void ConfigDocument::require_all_used() const {
  std::string unknown;
  for (const auto& [key, value] : entries_) {
    if (used_.count(key)) continue;
    if (!unknown.empty()) unknown += ", ";
    const int line = lines_.at(key);
    unknown += key + (line > 0 ? " (line " + std::to_string(line) + ")" : "");
  }
  if (!unknown.empty()) throw FormatError(origin_ + ": unknown keys: " + unknown);
}

StepControl SimConfig::step_control(double dt_value) const {
  StepControl c;
  c.dt = dt_value;
  c.scheme = scheme;
  c.dealias = dealias;
  c.odevity_project = odevity_project;
  c.elliptic.tolerance = pressure_tolerance;
  c.elliptic.max_iterations = max_iterations;
  return c;
}

std::string to_string(DataFamily f) {
  switch (f) {
    case DataFamily::cellular: return "cellular";
    case DataFamily::random_symmetric: return "random_symmetric";
    case DataFamily::from_file: return "from_file";
  }
  return "?";
}

std::string to_string(Scheme s) { return s == Scheme::etd_rk4 ? "etd_rk4" : "imex_bdf2"; }

std::string to_string(SweepScaling s) {
  return s == SweepScaling::fixed_energy ? "fixed_energy" : "fixed_data";
}

SimConfig sim_config_from(const ConfigDocument& doc) {
  SimConfig c;
  auto fail = [&](const std::string& key, const std::string& expected) {
    throw FormatError(key + ": expected " + expected + ", got '" + doc.get_string(key, "") + "'");
  };

  c.n = static_cast<int>(doc.get_int("grid.n", c.n));
  c.period = doc.get_double("grid.L", c.period);

  c.kappa = doc.get_double("physics.kappa", c.kappa);
  c.nu = doc.get_double("physics.nu", c.kappa > 0.0 ? 0.0 : c.nu);
  c.m = doc.get_double("physics.m", c.m);

  const std::string family = doc.get_string("data.family", "cellular");
  if (family == "cellular") c.data.family = DataFamily::cellular;
  else if (family == "random_symmetric") c.data.family = DataFamily::random_symmetric;
  else if (family == "from_file") c.data.family = DataFamily::from_file;
  else fail("data.family", "cellular, random_symmetric or from_file");
  const std::string eps_mode = doc.get_string("data.epsilon_mode", "fixed");
  if (eps_mode == "inverse_m") c.data.epsilon = -1.0;
  else if (eps_mode == "fixed") c.data.epsilon = doc.get_double("data.epsilon", c.data.epsilon);
  else fail("data.epsilon_mode", "fixed or inverse_m");
  if (eps_mode == "inverse_m" && doc.has("data.epsilon"))
    throw FormatError("data.epsilon: not allowed together with data.epsilon_mode = inverse_m");
  const std::int64_t seed = doc.get_int("data.seed", static_cast<std::int64_t>(c.data.seed));
  if (seed < 0) fail("data.seed", "a nonnegative integer");
  c.data.seed = static_cast<std::uint64_t>(seed);
  c.data.band = static_cast<int>(doc.get_int("data.band", c.data.band));
  c.data.velocity_scale = doc.get_double("data.velocity_scale", c.data.velocity_scale);
  c.data.path = doc.get_string("data.path", c.data.path);

  c.dt = doc.get_double("stepping.dt", c.dt);
  const std::string scheme = doc.get_string("stepping.scheme", "etd_rk4");
  if (scheme == "etd_rk4") c.scheme = Scheme::etd_rk4;
  else if (scheme == "imex_bdf2") c.scheme = Scheme::imex_bdf2;
  else fail("stepping.scheme", "etd_rk4 or imex_bdf2");
  c.t_end = doc.get_double("stepping.t_end", c.t_end);
  c.record_every = static_cast<int>(doc.get_int("stepping.record_every", c.record_every));
  c.odevity_project = doc.get_bool("stepping.odevity_project", c.odevity_project);
  c.dealias = doc.get_bool("stepping.dealias", c.dealias);
  c.pressure_tolerance = doc.get_double("stepping.pressure_tolerance", c.pressure_tolerance);
  c.max_iterations = static_cast<int>(doc.get_int("stepping.max_iterations", c.max_iterations));

  c.eulerian_norms = doc.get_bool("diagnostics.eulerian_norms", c.eulerian_norms);
  c.damped_norms = doc.get_bool("diagnostics.damped_norms", c.damped_norms);

  c.fit_start = doc.get_double("decay.fit_start", c.fit_start);
  c.fit_end = doc.get_double("decay.fit_end", c.fit_end);
  c.reference_end = doc.get_double("decay.reference_end", c.reference_end);
  c.slope_tolerance = doc.get_double("decay.slope_tolerance", c.slope_tolerance);
  c.weighted_growth_limit = doc.get_double("decay.weighted_growth_limit", c.weighted_growth_limit);
  c.velocity_margin = doc.get_double("decay.velocity_margin", c.velocity_margin);
  c.damped_fit_start = doc.get_double("decay.damped_fit_start", c.damped_fit_start);
  c.min_r_squared = doc.get_double("decay.min_r_squared", c.min_r_squared);
  c.stability_factor = doc.get_double("decay.stability_factor", c.stability_factor);
  c.stability_window = doc.get_double("decay.stability_window", c.stability_window);
  c.companion_m = doc.get_double("decay.companion_m", c.companion_m);
  c.rate_agreement = doc.get_double("decay.rate_agreement", c.rate_agreement);

  c.m_list = doc.get_double_list("sweep.m_list", c.m_list);
  const std::string scaling = doc.get_string("sweep.scaling", "fixed_energy");
  if (scaling == "fixed_energy") c.scaling = SweepScaling::fixed_energy;
  else if (scaling == "fixed_data") c.scaling = SweepScaling::fixed_data;
  else fail("sweep.scaling", "fixed_energy or fixed_data");
  c.sweep_slope_target = doc.get_double("sweep.slope_target", c.viscous() ? -1.0 : -2.0);
  c.sweep_slope_tolerance = doc.get_double("sweep.slope_tolerance", c.sweep_slope_tolerance);

  c.compare_coarse_n = static_cast<int>(doc.get_int("compare.coarse_n", c.compare_coarse_n));
  c.compare_coarse_dt = doc.get_double("compare.coarse_dt", c.compare_coarse_dt);
  c.compare_tolerance = doc.get_double("compare.tolerance", c.compare_tolerance);
  c.frozen_in_tolerance = doc.get_double("compare.frozen_in_tolerance", c.frozen_in_tolerance);
  c.tracker_stride = static_cast<int>(doc.get_int("compare.tracker_stride", c.tracker_stride));

  doc.require_all_used();
  return c;
}

void validate_config(const SimConfig& c, bool lagrangian_run) {
  auto check = [](bool ok, const std::string& key, const std::string& why) {
    if (!ok) throw FormatError(key + ": " + why);
  };
  check(c.n >= 8 && c.n % 2 == 0, "grid.n", "must be an even integer >= 8");
  check(c.period > 0.0, "grid.L", "must be positive");
  check(c.nu >= 0.0, "physics.nu", "must be nonnegative");
  check(c.kappa >= 0.0, "physics.kappa", "must be nonnegative");
  check(c.m > 0.0, "physics.m", "must be positive");
  if (lagrangian_run)
    check((c.nu > 0.0) != (c.kappa > 0.0), "physics.nu",
          "exactly one of physics.nu and physics.kappa must be positive");
  check(c.t_end > 0.0, "stepping.t_end", "must be positive");
  check(c.record_every >= 1, "stepping.record_every", "must be >= 1");
  check(c.dealias, "stepping.dealias", "only dealiased products are supported");
  check(c.pressure_tolerance > 0.0, "stepping.pressure_tolerance", "must be positive");
  check(c.max_iterations >= 1, "stepping.max_iterations", "must be >= 1");
  check(c.data.band >= 1, "data.band", "must be >= 1");
  check(c.data.velocity_scale >= 0.0, "data.velocity_scale", "must be nonnegative");
  check(c.data.family != DataFamily::from_file || !c.data.path.empty(), "data.path",
        "required when data.family = from_file");
  check(c.m_list.size() >= 3, "sweep.m_list", "needs at least 3 values");
  for (std::size_t i = 1; i < c.m_list.size(); ++i)
    check(c.m_list[i] > c.m_list[i - 1], "sweep.m_list", "must be strictly increasing");
  check(c.m_list.front() > 0.0, "sweep.m_list", "values must be positive");
  check(c.compare_coarse_n >= 8 && c.compare_coarse_n % 2 == 0, "compare.coarse_n",
        "must be an even integer >= 8");
  check(c.compare_coarse_dt > 0.0, "compare.coarse_dt", "must be positive");
  check(c.tracker_stride >= 1, "compare.tracker_stride", "must be >= 1");
  check(c.companion_m >= 0.0, "decay.companion_m", "must be nonnegative");
  check(c.rate_agreement > 0.0, "decay.rate_agreement", "must be positive");
  check(c.stability_window > 0.0, "decay.stability_window", "must be positive");
}

}  // namespace mhd2d

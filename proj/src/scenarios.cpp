#include "mhd2d/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "mhd2d/error.hpp"
#include "mhd2d/eulerian_stepper.hpp"
#include "mhd2d/flow_map.hpp"
#include "mhd2d/io.hpp"
#include "mhd2d/lagrangian_stepper.hpp"
#include "mhd2d/linear.hpp"
#include "mhd2d/spectral_ops.hpp"

namespace mhd2d {
namespace {

using Clock = std::chrono::steady_clock;

constexpr int kSchemaVersion = 1;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Claim tested by each emitted quantity.
const std::map<std::string, std::string>& claim_map() {
  static const std::map<std::string, std::string> claims{
      {"energy", "basic energy identity"},
      {"dissipation", "basic energy identity"},
      {"energy_identity", "basic energy identity"},
      {"E_2_0", "global stability estimate"},
      {"E_2_1", "global stability estimate"},
      {"v_H1", "Eulerian algebraic decay of the velocity"},
      {"v_H2", "Eulerian algebraic decay of the velocity"},
      {"b_H2", "Eulerian algebraic decay of the magnetic perturbation"},
      {"damped_energy", "exponential decay of the damped system"},
      {"det_drift", "volume preservation of the flow map"},
      {"div_A", "incompressibility in label coordinates"},
      {"odevity", "preservation of the odevity conditions"},
      {"eta_d_H3_sq", "strong-field limit towards the linearized system"},
      {"um_d_H2_sq", "strong-field limit towards the linearized system"},
      {"um_d_H2_sq_weighted", "strong-field limit, extra regularity variant"},
      {"damped_error", "strong-field limit of the damped system"},
      {"velocity_norm_difference", "Eulerian pullback of the Lagrangian solution"},
      {"frozen_in", "frozen-in law (differential magnetic flux conservation)"},
      {"flow_map_difference", "Eulerian pullback of the Lagrangian solution"},
  };
  return claims;
}

std::string claim_for(const std::string& quantity) {
  const auto it = claim_map().find(quantity);
  return it == claim_map().end() ? "artifact plumbing" : it->second;
}

Json claims_json(const std::vector<std::string>& quantities) {
  Json out = Json::object();
  for (const auto& q : quantities) out[q] = claim_for(q);
  return out;
}

std::vector<std::string> record_labels(std::span<const EnergyRecord> records) {
  std::vector<std::string> labels;
  if (records.empty()) return labels;
  for (const auto& [k, v] : records.front().norms) labels.push_back(k);
  for (const auto& [k, v] : records.front().residuals) labels.push_back(k);
  return labels;
}

std::vector<double> column(std::span<const EnergyRecord> records, const std::string& label) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    auto it = r.norms.find(label);
    if (it == r.norms.end()) {
      it = r.residuals.find(label);
      if (it == r.residuals.end()) throw StructuralError("missing record label " + label);
    }
    out.push_back(it->second);
  }
  return out;
}

std::vector<double> times(std::span<const EnergyRecord> records) {
  std::vector<double> out;
  for (const auto& r : records) out.push_back(r.t);
  return out;
}

double dissipation_rate(const GeometryBundle& geo, const FlowMapState& s) {
  double d = 0.0;
  if (s.nu != 0.0) {
    double grad_sq = 0.0;
    for (int c = 0; c < 2; ++c) grad_sq += sobolev_norm_sq(grad_A(geo, s.u[c]), 0);
    d += 2.0 * s.nu * grad_sq;
  }
  if (s.kappa != 0.0) d += 2.0 * s.kappa * sobolev_norm_sq(s.u, 0);
  return d;
}

double relative_l2(const VectorField& a, const VectorField& b) {
  const double scale = std::max(sobolev_norm(a, 0), sobolev_norm(b, 0));
  const double diff = sobolev_norm(a - b, 0);
  return scale > 0.0 ? diff / scale : diff;
}

Json base_summary(const std::string& command, const SimConfig& cfg) {
  Json s;
  s["schema_version"] = kSchemaVersion;
  s["command"] = command;
  s["config"] = config_to_json(cfg);
  s["residuals"] = Json::object();
  s["fits"] = Json::array();
  s["gates"] = Json::array();
  s["claims"] = Json::object();
  s["outputs"] = Json::array();
  return s;
}

void finalize(ScenarioResult& result, const std::filesystem::path& out, Clock::time_point start) {
  Json gates = Json::array();
  for (const Gate& g : result.gates) gates.push_back(gate_to_json(g));
  result.summary["gates"] = gates;
  result.summary["passed"] = result.passed();
  result.summary["wall_seconds"] = seconds_since(start);
  result.summary["outputs"].push_back("summary.json");
  write_text(out / "summary.json", result.summary.dump(2) + "\n");
}

Json trajectory_residuals(const Trajectory& tr) {
  return Json{{"energy_identity", tr.energy_residual},
              {"det_drift_sup", tr.max_det_drift},
              {"div_A_sup", tr.max_div_A},
              {"odevity_sup", tr.max_odevity},
              {"steps", tr.steps},
              {"dt", tr.dt},
              {"pressure_iterations", tr.pressure_iterations}};
}

void energy_samples_as_records(const Trajectory& tr, std::vector<EnergyRecord>& out) {
  for (const auto& e : tr.energy) {
    EnergyRecord r;
    r.t = e.t;
    r.norms["energy"] = e.energy;
    r.norms["dissipation"] = e.dissipation;
    out.push_back(std::move(r));
  }
}

// Corrector-adjusted data for the linear evolution. The final Leray
// projection only removes the aliasing residual of the corrector products,
// which is 1e-8 at n = 32 and below 1e-12 at n = 64.
LinearFields linear_data(const FlowMapState& s0) {
  const GeometryBundle geo0 = build_geometry(s0.eta);
  const Correctors corr = compute_correctors(s0.eta, s0.u, geo0);
  return LinearFields{leray_project(s0.eta + corr.eta_r), leray_project(s0.u + corr.u_r)};
}

}  // namespace

PreparedData prepare_initial_state(const SimConfig& cfg, double m) {
  return prepare_initial_state(cfg, m, Grid(cfg.n, cfg.period));
}

PreparedData prepare_initial_state(const SimConfig& cfg, double m, const Grid& grid) {
  PreparedData out(grid);
  InitialDataSpec spec = cfg.data;
  spec.epsilon = cfg.epsilon_for(m);
  spec.m = m;
  switch (spec.family) {
    case DataFamily::cellular: {
      InitialData d = generate_cellular(spec.epsilon, grid);
      out.state = FlowMapState(d.eta, d.u, 0.0, cfg.nu, cfg.kappa, m);
      out.constraint_iterations = d.constraint_iterations;
      out.velocity_iterations = d.velocity_iterations;
      break;
    }
    case DataFamily::random_symmetric: {
      InitialData d = generate_random_symmetric(spec, grid);
      out.state = FlowMapState(d.eta, d.u, 0.0, cfg.nu, cfg.kappa, m);
      out.constraint_iterations = d.constraint_iterations;
      out.velocity_iterations = d.velocity_iterations;
      break;
    }
    case DataFamily::from_file: {
      FlowMapState s = load_checkpoint(spec.path);
      if (!(s.grid() == grid))
        throw FormatError("data.path: checkpoint grid " + std::to_string(s.grid().n()) +
                          " does not match grid.n = " + std::to_string(grid.n()) +
                          " and grid.L");
      s.nu = cfg.nu;
      s.kappa = cfg.kappa;
      s.m = m;
      out.state = std::move(s);
      break;
    }
  }
  out.validation = validate(out.state.eta, out.state.u, m);
  return out;
}

Trajectory run_trajectory(const FlowMapState& initial, const SimConfig& cfg,
                          const TrajectoryOptions& options) {
  const auto start = Clock::now();
  const Grid& grid = initial.grid();
  Trajectory tr(grid);
  double dt = cfg.dt > 0.0 ? cfg.dt : LagrangianStepper::default_dt(initial);
  const int steps = std::max(1, static_cast<int>(std::ceil(cfg.t_end / dt - 1e-9)));
  dt = cfg.t_end / steps;
  tr.dt = dt;
  tr.steps = steps;
  const StepControl control = cfg.step_control(dt);
  LagrangianStepper stepper(grid);
  const double t0 = initial.t;

  auto observe = [&](const FlowMapState& s, bool record) {
    const GeometryBundle geo = build_geometry(s.eta, 0.0);
    tr.energy.push_back(EnergySample{s.t, mechanical_energy(s), dissipation_rate(geo, s)});
    const double det = std::max(std::abs(geo.min_jacobian - 1.0), std::abs(geo.max_jacobian - 1.0));
    const double div = sobolev_norm(div_A(geo, s.u), 0);
    const double odd = std::max(odevity_residual(s.eta), odevity_residual(s.u));
    tr.max_det_drift = std::max(tr.max_det_drift, det);
    tr.max_div_A = std::max(tr.max_div_A, div);
    tr.max_odevity = std::max(tr.max_odevity, odd);
    if (!record) return;
    EnergyRecord rec;
    rec.t = s.t;
    rec.norms["E_2_0"] = energy_functional(s, 2, 0);
    rec.norms["E_2_1"] = energy_functional(s, 2, 1);
    rec.norms["energy"] = tr.energy.back().energy;
    rec.norms["dissipation"] = tr.energy.back().dissipation;
    if (options.eulerian_norms) {
      rec.norms["v_H1"] = eulerian_sobolev_norm(geo, s.u, 1);
      rec.norms["v_H2"] = eulerian_sobolev_norm(geo, s.u, 2);
      rec.norms["b_H2"] = eulerian_sobolev_norm(geo, magnetic_perturbation(s), 2);
    }
    if (options.damped_norms) rec.norms["damped_energy"] = damped_energy(s);
    rec.residuals["det_drift"] = det;
    rec.residuals["div_A"] = div;
    rec.residuals["odevity"] = odd;
    rec.residuals["energy_identity"] =
        tr.energy.size() >= 3 ? energy_identity_residual(tr.energy) : 0.0;
    tr.records.push_back(std::move(rec));
    if (options.keep_states) tr.states.push_back(s);
    if (options.on_record) options.on_record(s, tr.records.back());
  };

  FlowMapState s = initial;
  observe(s, true);
  for (int i = 1; i <= steps; ++i) {
    try {
      s = stepper.step(s, control);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << e.what() << " (step " << i << ", t = " << s.t << ", m = " << s.m << ")";
      throw Error(msg.str());
    }
    s.t = t0 + i * dt;
    tr.pressure_iterations += stepper.last_report().pressure_iterations;
    observe(s, i % cfg.record_every == 0 || i == steps);
  }
  tr.energy_residual = tr.energy.size() >= 3 ? energy_identity_residual(tr.energy) : 0.0;
  tr.final_state = std::move(s);
  tr.wall_seconds = seconds_since(start);
  return tr;
}

Gate make_gate(std::string name, std::string claim, double value, std::string relation,
               double threshold) {
  Gate g{std::move(name), std::move(claim), value, std::move(relation), threshold, false};
  if (g.relation == "<=") g.passed = value <= threshold;
  else if (g.relation == "<") g.passed = value < threshold;
  else if (g.relation == ">=") g.passed = value >= threshold;
  else if (g.relation == ">") g.passed = value > threshold;
  else throw StructuralError("make_gate: unknown relation " + g.relation);
  if (!std::isfinite(value)) g.passed = false;
  return g;
}

Json gate_to_json(const Gate& g) {
  return Json{{"name", g.name},         {"claim", g.claim},
              {"value", g.value},       {"relation", g.relation},
              {"threshold", g.threshold}, {"passed", g.passed}};
}

Json fit_to_json(const std::string& quantity, const DecayFit& f) {
  return Json{{"quantity", quantity},
              {"kind", f.kind == DecayKind::power ? "power" : "exponential"},
              {"exponent_or_rate", f.exponent_or_rate},
              {"standard_error", f.standard_error},
              {"intercept", f.intercept},
              {"window", {f.t_min, f.t_max}},
              {"r_squared", f.r_squared},
              {"samples", f.samples},
              {"claim", claim_for(quantity)}};
}

DecayAnalysis analyze_viscous_decay(std::span<const EnergyRecord> records, const SimConfig& cfg) {
  if (records.size() < 8) throw PreconditionError("analyze_viscous_decay: too few records");
  DecayAnalysis out;
  const auto t = times(records);
  const double t_first = t.front(), t_last = t.back();
  const double lo = cfg.fit_start >= 0.0 ? cfg.fit_start : t_first + 0.4 * (t_last - t_first);
  const double hi = cfg.fit_end >= 0.0 ? cfg.fit_end : t_last;
  struct Target {
    const char* quantity;
    double exponent;
    double weight;
  };
  const Target targets[] = {{"v_H1", -1.5, 1.5}, {"v_H2", -1.0, 1.0}, {"b_H2", -0.5, 0.5}};
  Json weighted = Json::object();
  for (const Target& tg : targets) {
    const auto values = column(records, tg.quantity);
    const DecayFit fit = fit_decay(t, values, DecayKind::power, lo, hi);
    out.fits.emplace_back(tg.quantity, fit);
    out.gates.push_back(make_gate(std::string("slope_") + tg.quantity, claim_for(tg.quantity),
                                  fit.exponent_or_rate, "<=", tg.exponent + cfg.slope_tolerance));
    // <t>^w N(t): its value at the end against its maximum over [0, reference_end]
    double early_max = 0.0;
    double final_value = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double w = std::pow(1.0 + t[i], tg.weight) * values[i];
      if (t[i] <= cfg.reference_end + 1e-12) early_max = std::max(early_max, w);
      final_value = w;
    }
    const double ratio = early_max > 0.0 ? final_value / early_max : INFINITY;
    weighted[tg.quantity] = Json{{"weight_exponent", tg.weight},
                                 {"early_max", early_max},
                                 {"final", final_value},
                                 {"ratio", ratio}};
    out.gates.push_back(make_gate(std::string("weighted_") + tg.quantity, claim_for(tg.quantity),
                                  ratio, "<=", cfg.weighted_growth_limit));
  }
  const double slope_v2 = out.fits[1].second.exponent_or_rate;
  const double slope_b2 = out.fits[2].second.exponent_or_rate;
  out.gates.push_back(make_gate("velocity_faster_than_field",
                                "velocity decays faster than the magnetic perturbation",
                                slope_v2 - slope_b2, "<=", -cfg.velocity_margin));

  const auto e20 = column(records, "E_2_0");
  double early = 0.0, later = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] <= t_first + cfg.stability_window + 1e-12) early = std::max(early, e20[i]);
    later = std::max(later, e20[i]);
  }
  const double growth = early > 0.0 ? later / early : INFINITY;
  out.gates.push_back(make_gate("stability_E_2_0", claim_for("E_2_0"), growth, "<=",
                                cfg.stability_factor));
  out.details = Json{{"fit_window", {lo, hi}},
                     {"weighted", weighted},
                     {"E_2_0_early_sup", early},
                     {"E_2_0_sup", later}};
  return out;
}

DecayAnalysis analyze_damped_decay(std::span<const EnergyRecord> records, const SimConfig& cfg) {
  DecayAnalysis out;
  const auto t = times(records);
  const double hi = cfg.fit_end >= 0.0 ? cfg.fit_end : t.back();
  const DecayFit fit =
      fit_decay(t, column(records, "damped_energy"), DecayKind::exponential, cfg.damped_fit_start, hi);
  out.fits.emplace_back("damped_energy", fit);
  out.gates.push_back(make_gate("damped_rate_positive", claim_for("damped_energy"),
                                fit.exponent_or_rate, ">", 0.0));
  out.gates.push_back(make_gate("damped_fit_r_squared", claim_for("damped_energy"),
                                fit.r_squared, ">", cfg.min_r_squared));
  out.details = Json{{"fit_window", {cfg.damped_fit_start, hi}}};
  return out;
}

double sweep_epsilon(const SimConfig& cfg, double m) {
  if (cfg.scaling == SweepScaling::fixed_data) return cfg.epsilon_for(cfg.m);
  const double reference = cfg.data.epsilon > 0.0 ? cfg.data.epsilon * cfg.m : 1.0;
  return reference / m;
}

SweepMember run_sweep_member(const SimConfig& base, double m) {
  const auto start = Clock::now();
  SimConfig cfg = base;
  cfg.m = m;
  cfg.data.epsilon = sweep_epsilon(base, m);
  const PreparedData data = prepare_initial_state(cfg, m);
  const FlowMapState& s0 = data.state;
  const LinearFields data_l = linear_data(s0);
  const VectorField& eta_l = data_l.eta;
  const VectorField& u_l = data_l.u;
  LinearParams params;
  params.kind = cfg.viscous() ? Dissipation::viscous : Dissipation::damped;
  params.coefficient = cfg.viscous() ? cfg.nu : cfg.kappa;
  params.m = m;

  SweepMember member;
  member.m = m;
  member.epsilon = cfg.data.epsilon;
  TrajectoryOptions options;
  options.on_record = [&](const FlowMapState& s, EnergyRecord&) {
    LinearFields lin = evolve_linear_field(eta_l, u_l, params, s.t - s0.t);
    const FlowMapState linear(std::move(lin.eta), std::move(lin.u), s.t, s.nu, s.kappa, s.m);
    member.records.push_back(linear_error_record(s, linear));
  };
  const Trajectory tr = run_trajectory(s0, cfg, options);
  member.summary = summarize_linear_errors(member.records);
  member.value = cfg.viscous() ? member.summary.viscous_metric() : member.summary.sup_damped_error;
  member.max_det_drift = tr.max_det_drift;
  member.wall_seconds = seconds_since(start);
  return member;
}

SweepOutcome run_msweep(const SimConfig& cfg, int threads) {
  SweepOutcome out;
  out.members.resize(cfg.m_list.size());
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::string failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.m_list.size(); i = next++) {
      try {
        out.members[i] = run_sweep_member(cfg, cfg.m_list[i]);
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (failure.empty()) failure = "sweep member m = " + format_double(cfg.m_list[i]) + ": " + e.what();
      }
    }
  };
  const int count = std::clamp(threads, 1, static_cast<int>(cfg.m_list.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < count; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (!failure.empty()) throw Error(failure);
  std::vector<SweepPoint> points;
  for (const auto& mem : out.members) points.push_back(SweepPoint{mem.m, mem.value});
  out.fit = msweep_slope(points);
  return out;
}

CompareResolution run_compare_at(const SimConfig& base, int n, double dt) {
  SimConfig cfg = base;
  cfg.n = n;
  cfg.dt = dt;
  const Grid grid(n, cfg.period);
  const PreparedData data = prepare_initial_state(cfg, cfg.m, grid);
  const FlowMapState& s0 = data.state;
  const int steps = static_cast<int>(std::lround(cfg.t_end / dt));
  const int stride = cfg.tracker_stride;
  if (steps < 2 * stride || steps % (2 * stride) != 0 ||
      std::abs(steps * dt - cfg.t_end) > 1e-9 * cfg.t_end)
    throw FormatError("compare: t_end / dt must be a multiple of 2 * compare.tracker_stride");

  CompareResolution res;
  res.n = n;
  res.dt = dt;

  const Trajectory lag = run_trajectory(s0, cfg);
  res.lagrangian_norm = sobolev_norm(lag.final_state.u, 0);

  const FlowMapInverse inverse = invert_flow_map(s0.eta);
  VectorField v0 = leray_project(pull_to_eulerian(s0.u, inverse));
  VectorField b0 = leray_project(pull_to_eulerian(magnetic_perturbation(s0), inverse));
  v0.truncate();
  b0.truncate();
  v0.zero_mean();
  b0.zero_mean();
  EulerianState e(std::move(v0), std::move(b0), 0.0, cfg.nu, cfg.kappa, cfg.m);
  EulerianStepper stepper(grid);
  const StepControl control = cfg.step_control(dt);
  FlowMapTracker tracker(s0.eta, 0.0);
  std::vector<EulerianState> window{e};
  for (int i = 1; i <= steps; ++i) {
    e = stepper.step(e, control);
    e.t = i * dt;
    if (i % stride == 0) window.push_back(e);
    if (window.size() == 3) {
      tracker.advance(window[0], window[1], window[2]);
      window.erase(window.begin(), window.begin() + 2);
    }
  }
  res.eulerian_norm = sobolev_norm(e.v, 0);
  res.relative_difference =
      std::abs(res.eulerian_norm - res.lagrangian_norm) / std::max(res.lagrangian_norm, 1e-300);
  res.frozen_in = frozen_in_residual(e, tracker);
  res.flow_map_difference = relative_l2(tracker.displacement(), lag.final_state.eta);
  return res;
}

CompareOutcome run_compare(const SimConfig& cfg) {
  CompareOutcome out;
  out.fine = run_compare_at(cfg, cfg.n, cfg.dt);
  out.coarse = run_compare_at(cfg, cfg.compare_coarse_n, cfg.compare_coarse_dt);
  return out;
}

std::vector<EnergyRecord> linear_trajectory(const SimConfig& cfg) {
  const PreparedData data = prepare_initial_state(cfg, cfg.m);
  const FlowMapState& s0 = data.state;
  const LinearFields data_l = linear_data(s0);
  const VectorField& eta_l = data_l.eta;
  const VectorField& u_l = data_l.u;
  LinearParams params;
  params.kind = cfg.viscous() ? Dissipation::viscous : Dissipation::damped;
  params.coefficient = cfg.viscous() ? cfg.nu : cfg.kappa;
  params.m = cfg.m;
  const double dt = cfg.dt > 0.0 ? cfg.dt : 1e-2;
  const int steps = std::max(1, static_cast<int>(std::ceil(cfg.t_end / dt - 1e-9)));
  const double step = cfg.t_end / steps;
  std::vector<EnergyRecord> out;
  for (int i = 0; i <= steps; ++i) {
    if (i % cfg.record_every != 0 && i != steps) continue;
    const double t = i * step;
    LinearFields lin = evolve_linear_field(eta_l, u_l, params, t);
    const FlowMapState s(std::move(lin.eta), std::move(lin.u), s0.t + t, cfg.nu, cfg.kappa, cfg.m);
    EnergyRecord rec;
    rec.t = s.t;
    rec.norms["energy"] = mechanical_energy(s);
    rec.norms["E_2_0"] = energy_functional(s, 2, 0);
    rec.norms["E_2_1"] = energy_functional(s, 2, 1);
    rec.norms["damped_energy"] = damped_energy(s);
    out.push_back(std::move(rec));
  }
  return out;
}

Json config_to_json(const SimConfig& c) {
  return Json{
      {"grid", {{"n", c.n}, {"L", c.period}}},
      {"physics", {{"nu", c.nu}, {"kappa", c.kappa}, {"m", c.m}}},
      {"data",
       {{"family", to_string(c.data.family)},
        {"epsilon", c.data.epsilon},
        {"epsilon_mode", c.data.epsilon > 0.0 ? "fixed" : "inverse_m"},
        {"seed", c.data.seed},
        {"band", c.data.band},
        {"velocity_scale", c.data.velocity_scale},
        {"path", c.data.path}}},
      {"stepping",
       {{"dt", c.dt},
        {"scheme", to_string(c.scheme)},
        {"t_end", c.t_end},
        {"record_every", c.record_every},
        {"odevity_project", c.odevity_project},
        {"dealias", c.dealias},
        {"pressure_tolerance", c.pressure_tolerance},
        {"max_iterations", c.max_iterations}}},
      {"diagnostics", {{"eulerian_norms", c.eulerian_norms}, {"damped_norms", c.damped_norms}}},
      {"decay",
       {{"fit_start", c.fit_start},
        {"fit_end", c.fit_end},
        {"reference_end", c.reference_end},
        {"slope_tolerance", c.slope_tolerance},
        {"weighted_growth_limit", c.weighted_growth_limit},
        {"velocity_margin", c.velocity_margin},
        {"damped_fit_start", c.damped_fit_start},
        {"min_r_squared", c.min_r_squared},
        {"stability_factor", c.stability_factor},
        {"stability_window", c.stability_window},
        {"companion_m", c.companion_m},
        {"rate_agreement", c.rate_agreement}}},
      {"sweep",
       {{"m_list", c.m_list},
        {"scaling", to_string(c.scaling)},
        {"slope_target", c.sweep_slope_target},
        {"slope_tolerance", c.sweep_slope_tolerance}}},
      {"compare",
       {{"coarse_n", c.compare_coarse_n},
        {"coarse_dt", c.compare_coarse_dt},
        {"tolerance", c.compare_tolerance},
        {"frozen_in_tolerance", c.frozen_in_tolerance},
        {"tracker_stride", c.tracker_stride}}}};
}

Json validation_to_json(const ValidationReport& r) {
  return Json{{"det_residual", r.det_residual},
              {"div_A_residual", r.div_A_residual},
              {"odevity_residual", r.odevity_residual},
              {"mean_residual", r.mean_residual},
              {"energy_2_0", r.energy_2_0},
              {"energy_2_1", r.energy_2_1},
              {"norm3", r.norm3},
              {"norm4", r.norm4},
              {"mu", std::isfinite(r.mu) ? Json(r.mu) : Json(nullptr)}};
}

bool ScenarioResult::passed() const {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.passed; });
}

ScenarioResult command_run(const SimConfig& cfg, const std::filesystem::path& out) {
  const auto start = Clock::now();
  validate_config(cfg, true);
  ScenarioResult result;
  result.summary = base_summary("run", cfg);
  const PreparedData data = prepare_initial_state(cfg, cfg.m);
  result.summary["validation"] = validation_to_json(data.validation);
  TrajectoryOptions options;
  options.eulerian_norms = cfg.eulerian_norms;
  options.damped_norms = cfg.damped_norms;
  const Trajectory tr = run_trajectory(data.state, cfg, options);
  write_records_csv(out / "records.csv", tr.records);
  std::vector<EnergyRecord> dense;
  energy_samples_as_records(tr, dense);
  write_records_csv(out / "energy.csv", dense);
  save_checkpoint(out / "final.ckpt", tr.final_state);
  result.summary["residuals"] = trajectory_residuals(tr);
  result.summary["claims"] = claims_json(record_labels(tr.records));
  result.summary["outputs"] = Json{"records.csv", "energy.csv", "final.ckpt"};
  finalize(result, out, start);
  return result;
}

ScenarioResult command_decay(const SimConfig& base, const std::filesystem::path& out) {
  const auto start = Clock::now();
  validate_config(base, true);
  SimConfig cfg = base;
  const bool viscous = cfg.viscous();
  cfg.eulerian_norms = cfg.eulerian_norms || viscous;
  cfg.damped_norms = cfg.damped_norms || !viscous;
  ScenarioResult result;
  result.summary = base_summary("decay", cfg);
  const PreparedData data = prepare_initial_state(cfg, cfg.m);
  result.summary["validation"] = validation_to_json(data.validation);
  TrajectoryOptions options;
  options.eulerian_norms = cfg.eulerian_norms;
  options.damped_norms = cfg.damped_norms;
  const Trajectory tr = run_trajectory(data.state, cfg, options);
  write_records_csv(out / "records.csv", tr.records);
  result.summary["residuals"] = trajectory_residuals(tr);
  result.summary["outputs"] = Json{"records.csv"};

  DecayAnalysis analysis = viscous ? analyze_viscous_decay(tr.records, cfg)
                                   : analyze_damped_decay(tr.records, cfg);
  if (!viscous && cfg.companion_m > 0.0) {
    SimConfig other = cfg;
    other.m = cfg.companion_m;
    const PreparedData data2 = prepare_initial_state(other, other.m);
    const Trajectory tr2 = run_trajectory(data2.state, other, options);
    write_records_csv(out / "records_companion.csv", tr2.records);
    result.summary["outputs"].push_back("records_companion.csv");
    const DecayAnalysis a2 = analyze_damped_decay(tr2.records, other);
    const double r1 = analysis.fits[0].second.exponent_or_rate;
    const double r2 = a2.fits[0].second.exponent_or_rate;
    analysis.fits.emplace_back("damped_energy_companion", a2.fits[0].second);
    for (Gate g : a2.gates) {
      g.name += "_companion";
      analysis.gates.push_back(g);
    }
    const double spread = std::abs(r2 - r1) / std::max(std::abs(r1), 1e-300);
    analysis.gates.push_back(make_gate("damped_rate_agreement", claim_for("damped_energy"), spread,
                                       "<=", cfg.rate_agreement));
    analysis.details["companion_m"] = other.m;
    analysis.details["companion_residuals"] = trajectory_residuals(tr2);
  }
  Json fits = Json::array();
  for (const auto& [q, f] : analysis.fits) fits.push_back(fit_to_json(q, f));
  result.summary["fits"] = fits;
  result.summary["decay"] = analysis.details;
  result.gates = analysis.gates;
  result.summary["claims"] = claims_json(record_labels(tr.records));
  finalize(result, out, start);
  return result;
}

ScenarioResult command_msweep(const SimConfig& cfg, const std::filesystem::path& out,
                              int threads) {
  const auto start = Clock::now();
  validate_config(cfg, true);
  ScenarioResult result;
  result.summary = base_summary("msweep", cfg);
  const SweepOutcome sweep = run_msweep(cfg, threads);
  Json members = Json::array();
  std::vector<EnergyRecord> aggregate;
  for (const SweepMember& m : sweep.members) {
    const std::string name = "member_m" + format_double(m.m) + ".csv";
    write_records_csv(out / name, m.records);
    result.summary["outputs"].push_back(name);
    members.push_back(Json{{"m", m.m},
                           {"epsilon", m.epsilon},
                           {"value", m.value},
                           {"sup_eta_d_H3_sq", m.summary.sup_eta_d_H3_sq},
                           {"integral_um_d_H2_sq", m.summary.integral_um_d_H2_sq},
                           {"sup_damped_error", m.summary.sup_damped_error},
                           {"det_drift_sup", m.max_det_drift},
                           {"wall_seconds", m.wall_seconds}});
    EnergyRecord row;
    row.t = m.m;
    row.norms["value"] = m.value;
    row.norms["epsilon"] = m.epsilon;
    aggregate.push_back(std::move(row));
  }
  // aggregate file: the "t" column holds m
  write_records_csv(out / "sweep.csv", aggregate);
  result.summary["outputs"].push_back("sweep.csv");
  const std::string quantity = cfg.viscous() ? "um_d_H2_sq" : "damped_error";
  result.summary["sweep"] = Json{{"members", members},
                                 {"metric", cfg.viscous() ? "sup eta_d_H3_sq + int um_d_H2_sq"
                                                          : "sup damped_error"},
                                 {"slope", sweep.fit.slope},
                                 {"standard_error", sweep.fit.standard_error},
                                 {"intercept", sweep.fit.intercept},
                                 {"r_squared", sweep.fit.r_squared}};
  result.gates.push_back(make_gate("msweep_slope", claim_for(quantity), sweep.fit.slope, "<=",
                                   cfg.sweep_slope_target + cfg.sweep_slope_tolerance));
  result.summary["claims"] =
      claims_json({"eta_d_H3_sq", "um_d_H2_sq", "um_d_H2_sq_weighted", "damped_error"});
  finalize(result, out, start);
  return result;
}

ScenarioResult command_compare(const SimConfig& cfg, const std::filesystem::path& out) {
  const auto start = Clock::now();
  validate_config(cfg, false);
  ScenarioResult result;
  result.summary = base_summary("compare", cfg);
  const CompareOutcome cmp = run_compare(cfg);
  auto to_json = [](const CompareResolution& r) {
    return Json{{"n", r.n},
                {"dt", r.dt},
                {"lagrangian_velocity_L2", r.lagrangian_norm},
                {"eulerian_velocity_L2", r.eulerian_norm},
                {"velocity_norm_difference", r.relative_difference},
                {"frozen_in", r.frozen_in},
                {"flow_map_difference", r.flow_map_difference}};
  };
  result.summary["compare"] = Json{{"fine", to_json(cmp.fine)}, {"coarse", to_json(cmp.coarse)}};
  // reported against the configured tolerances; gating is left to decay/msweep
  result.summary["compare"]["tolerance"] = cfg.compare_tolerance;
  result.summary["compare"]["frozen_in_tolerance"] = cfg.frozen_in_tolerance;
  result.summary["claims"] =
      claims_json({"velocity_norm_difference", "frozen_in", "flow_map_difference"});
  finalize(result, out, start);
  return result;
}

ScenarioResult command_linear(const SimConfig& cfg, const std::filesystem::path& out) {
  const auto start = Clock::now();
  validate_config(cfg, true);
  ScenarioResult result;
  result.summary = base_summary("linear", cfg);
  const auto records = linear_trajectory(cfg);
  write_records_csv(out / "linear.csv", records);
  result.summary["outputs"] = Json{"linear.csv"};
  result.summary["claims"] = claims_json(record_labels(records));
  finalize(result, out, start);
  return result;
}

ScenarioResult command_gen_ic(const SimConfig& cfg, const std::filesystem::path& out) {
  const auto start = Clock::now();
  validate_config(cfg, false);
  ScenarioResult result;
  result.summary = base_summary("gen-ic", cfg);
  const PreparedData data = prepare_initial_state(cfg, cfg.m);
  save_checkpoint(out / "initial.ckpt", data.state);
  result.summary["validation"] = validation_to_json(data.validation);
  result.summary["residuals"] = Json{{"constraint_iterations", data.constraint_iterations},
                                     {"velocity_iterations", data.velocity_iterations}};
  result.summary["outputs"] = Json{"initial.ckpt"};
  result.summary["claims"] = claims_json({"det_drift", "div_A", "odevity"});
  finalize(result, out, start);
  return result;
}

}  // namespace mhd2d

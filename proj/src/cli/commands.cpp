#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <ostream>

#include <CLI11.hpp>

#include "qpg/cavity_gate.hpp"
#include "qpg/cli.hpp"
#include "qpg/errors.hpp"
#include "qpg/gate_algebra.hpp"
#include "qpg/ion_full_model.hpp"
#include "qpg/ion_gate.hpp"

namespace qpg::cli {

namespace {

constexpr double kIonRunTol = 1e-8;
constexpr double kCavityRunTol = 1e-10;
const std::array<const char*, 4> kIonLabels{"dd", "du", "ud", "uu"};
const std::array<const char*, 4> kCavityLabels{"00", "01", "10", "11"};

const std::map<std::string, Sweep>& default_sweeps() {
  static const std::map<std::string, Sweep> table = {
      {"ion validate", {"omega_ratio", {"0.2", "0.1", "0.05"}}},
      {"cavity validate", {"delta_big", {"10", "30", "100"}}},
  };
  return table;
}

Value typed(const KeySpec& spec, const std::string& v) {
  switch (spec.kind) {
    case ValueKind::real: return std::strtod(v.c_str(), nullptr);
    case ValueKind::integer: return static_cast<long long>(std::strtol(v.c_str(), nullptr, 10));
    case ValueKind::boolean: return v == "true";
  }
  return v;
}

// Resolved parameters of the first point, with swept keys listed instead.
Fields parameter_fields(const Invocation& inv) {
  Fields out;
  if (inv.points.empty()) return out;
  for (const KeySpec& spec : keys_for(inv.command)) {
    bool swept = false;
    for (const Sweep& s : inv.sweeps) swept = swept || s.key == spec.name;
    if (swept) continue;
    const auto it = inv.points.front().find(spec.name);
    if (it != inv.points.front().end()) out.emplace_back(spec.name, typed(spec, it->second));
  }
  for (const Sweep& s : inv.sweeps) {
    std::string list;
    for (std::size_t i = 0; i < s.values.size(); ++i) list += (i ? "," : "") + s.values[i];
    out.emplace_back("sweep." + s.key, list);
  }
  return out;
}

std::string scenario(const Invocation& inv, std::size_t point, const std::string& label) {
  if (inv.points.size() == 1) return label;
  return "p" + std::to_string(point) + (label.empty() ? "" : ":" + label);
}

std::string prefix(const Invocation& inv, std::size_t point) {
  return inv.points.size() == 1 ? "" : "p" + std::to_string(point) + ".";
}

// Runs f on every point concurrently; results come back in sweep order and
// the first failure in sweep order is rethrown.
template <typename R, typename P, typename F>
std::vector<R> map_params(const std::vector<P>& inputs, F f) {
  std::vector<std::future<R>> jobs;
  jobs.reserve(inputs.size());
  for (const P& in : inputs) jobs.push_back(std::async(std::launch::async, f, in));
  std::vector<R> out;
  out.reserve(inputs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

IonGateParams ion_params(const KeyValues& kv, double omega) {
  IonGateParams p;
  p.eta = get_real(kv, "eta");
  p.omega = omega;
  p.delta = get_real(kv, "delta");
  p.phi = get_real(kv, "phi");
  p.g0 = get_real(kv, "g0");
  p.n_max = get_int(kv, "n_max");
  p.n_sel = get_int(kv, "n_sel");
  return p;
}

CavityParams cavity_params(const KeyValues& kv) {
  CavityParams p;
  p.omega_ei = get_real(kv, "omega_ei");
  p.omega_ig = get_real(kv, "omega_ig");
  p.delta_big = get_real(kv, "delta_big");
  p.n_max = get_int(kv, "n_max");
  p.compensate_stark = get_bool(kv, "compensate_stark");
  return p;
}

// "pass" when strictly monotone in the given direction, "n/a" for one point.
std::string monotone_verdict(const std::vector<double>& xs, bool increasing) {
  if (xs.size() < 2) return "n/a";
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const bool ok = increasing ? xs[i] > xs[i - 1] : xs[i] < xs[i - 1];
    if (!ok) return "fail";
  }
  return "pass";
}

void add_amplitudes(Fields& f, const std::array<const char*, 4>& labels, const Vector& amps) {
  for (int i = 0; i < 4; ++i) {
    f.emplace_back(std::string("amp_") + labels[i] + "_re", amps(i).real());
    f.emplace_back(std::string("amp_") + labels[i] + "_im", amps(i).imag());
  }
}

}  // namespace

Invocation make_invocation(const std::string& command, const KeyValues& file,
                           const KeyValues& overrides, std::vector<Sweep> sweeps) {
  const auto& keys = keys_for(command);
  if (sweeps.empty()) {
    const auto it = default_sweeps().find(command);
    if (it != default_sweeps().end() && !file.count(it->second.key) &&
        !overrides.count(it->second.key)) {
      sweeps.push_back(it->second);
    }
  }
  for (std::size_t i = 0; i < sweeps.size(); ++i) {
    bool known = false;
    for (const KeySpec& k : keys) known = known || k.name == sweeps[i].key;
    if (!known) throw InvalidParameter(sweeps[i].key, "unknown sweep key for '" + command + "'");
    for (std::size_t j = 0; j < i; ++j) {
      if (sweeps[j].key == sweeps[i].key) throw InvalidParameter(sweeps[i].key, "swept twice");
    }
  }

  Invocation inv;
  inv.command = command;
  inv.sweeps = sweeps;
  std::vector<std::size_t> idx(sweeps.size(), 0);
  while (true) {
    KeyValues point = overrides;
    for (std::size_t i = 0; i < sweeps.size(); ++i) point[sweeps[i].key] = sweeps[i].values[idx[i]];
    inv.points.push_back(resolve(command, file, point));
    // odometer, last sweep fastest
    std::size_t k = sweeps.size();
    while (k > 0) {
      --k;
      if (++idx[k] < sweeps[k].values.size()) break;
      idx[k] = 0;
      if (k == 0) return inv;
    }
    if (sweeps.empty()) return inv;
  }
}

// ---------------------------------------------------------------------------

Outcome cmd_ion_run(const Invocation& inv) {
  std::vector<IonGateParams> params;
  for (const KeyValues& kv : inv.points) {
    params.push_back(ion_params(kv, get_real(kv, "omega")));
    params.back().validate();
  }
  const auto results = map_params<QpgResult>(params, [](const IonGateParams& p) { return qpg_unitary(p); });

  Outcome o;
  o.report.command = inv.command;
  o.report.parameters = parameter_fields(inv);
  bool all_pass = true;
  for (std::size_t pt = 0; pt < params.size(); ++pt) {
    const IonGateParams& p = params[pt];
    const QpgResult& r = results[pt];
    const auto comp = computational_indices(p.n_max, p.n_sel);
    const Matrix& u = r.corrected.matrix();

    for (int s = 0; s <= 4; ++s) {
      Vector in = Vector::Zero(u.rows());
      Vector ideal = Vector::Zero(4);
      if (s < 4) {
        in(comp[s]) = 1.0;
        ideal(s) = s == 0 ? -1.0 : 1.0;
      } else {
        for (int c = 0; c < 4; ++c) in(comp[c]) = 0.5;
        ideal << -0.5, 0.5, 0.5, 0.5;
      }
      const Vector out = u * in;
      Vector logical(4);
      for (int c = 0; c < 4; ++c) logical(c) = out(comp[c]);
      const double fidelity = std::norm(ideal.dot(logical));
      const double leakage = std::max(0.0, 1.0 - logical.squaredNorm());
      const bool pass = fidelity >= 1.0 - kIonRunTol && r.report.quality_ok;
      all_pass = all_pass && pass;

      Row row;
      row.columns = {
          {"scenario", scenario(inv, pt, s < 4 ? kIonLabels[s] : "uniform")},
          {"eta", p.eta},
          {"omega", p.omega},
          {"delta", p.delta},
          {"n_sel", static_cast<long long>(p.n_sel)},
          {"t_gate", r.report.t_gate},
          {"omega_eff", r.report.omega_eff},
          {"fidelity", fidelity},
          {"leakage", leakage},
          {"pass", pass},
      };
      add_amplitudes(row.extras, kIonLabels, logical);
      o.report.rows.push_back(std::move(row));
    }

    const std::string pre = prefix(inv, pt);
    Fields& sm = o.report.summary;
    for (int c = 0; c < 4; ++c) {
      sm.emplace_back(pre + "raw_phase_" + kIonLabels[c], r.report.raw_local_phases[c]);
    }
    sm.emplace_back(pre + "correction_control", r.report.correction.control);
    sm.emplace_back(pre + "correction_target", r.report.correction.target);
    sm.emplace_back(pre + "correction_global", r.report.correction.global);
    sm.emplace_back(pre + "retuning_offset", r.report.retuning.global_offset);
    sm.emplace_back(pre + "retuning_shift_j", r.report.retuning.shift_j);
    sm.emplace_back(pre + "retuning_shift_k", r.report.retuning.shift_k);
    sm.emplace_back(pre + "residual", r.report.residual);
    sm.emplace_back(pre + "off_diagonal_weight", r.report.off_diagonal_weight);
    sm.emplace_back(pre + "quality_ok", r.report.quality_ok);
    for (const auto& w : r.report.warnings) o.report.warnings.push_back(scenario(inv, pt, "") + " " + w);
  }
  o.report.summary.emplace_back("pass", all_pass);
  o.exit_code = all_pass ? kExitPass : kExitPhysics;
  return o;
}

Outcome cmd_ion_validate(const Invocation& inv) {
  std::vector<FullIonParams> params;
  std::vector<double> ratios;
  for (const KeyValues& kv : inv.points) {
    if (!kv.count("omega_ratio")) throw InvalidParameter("omega_ratio", "required key is missing");
    const double ratio = get_real(kv, "omega_ratio");
    if (!(ratio >= 0.0 && ratio < 1.0)) throw InvalidParameter("omega_ratio", "must satisfy 0 <= Omega/delta < 1");
    FullIonParams f;
    f.base = ion_params(kv, ratio * get_real(kv, "delta"));
    f.dt = get_real(kv, "dt");
    f.t_final = get_real(kv, "t_final");
    f.tol_conv = get_real(kv, "tol_conv");
    f.pad = get_int(kv, "pad");
    f.max_halvings = get_int(kv, "max_halvings");
    f.validate();
    params.push_back(f);
    ratios.push_back(ratio);
  }
  const bool calibrate = get_bool(inv.points.front(), "calibrate");
  const auto reports = map_params<ValidationReport>(params, [calibrate](const FullIonParams& f) {
    return validate_effective(f, ValidationOptions{calibrate});
  });

  Outcome o;
  o.report.command = inv.command;
  o.report.parameters = parameter_fields(inv);
  std::vector<double> infidelities;
  for (std::size_t pt = 0; pt < params.size(); ++pt) {
    const FullIonParams& f = params[pt];
    const ValidationReport& v = reports[pt];
    infidelities.push_back(v.infidelity);
    Row row;
    row.columns = {
        {"scenario", scenario(inv, pt, "")},
        {"eta", f.base.eta},
        {"delta", f.base.delta},
        {"omega_ratio", ratios[pt]},
        {"omega", f.base.omega},
        {"n_sel", static_cast<long long>(f.base.n_sel)},
        {"t_gate", v.t_gate},
        {"omega_eff", v.omega_eff},
        {"coupling_ratio", v.coupling_ratio},
        {"infidelity", v.infidelity},
        {"gate_fidelity", v.gate_fidelity},
        {"gate_fidelity_effective", v.gate_fidelity_effective},
        {"leakage", v.leakage},
        {"dt_used", v.dt_used},
        {"halvings", static_cast<long long>(v.halvings)},
        {"convergence_change", v.convergence_change},
        {"unitarity_defect", v.unitarity_defect},
    };
    for (int c = 0; c < 4; ++c) {
      row.extras.emplace_back(std::string("state_fidelity_full_") + kIonLabels[c], v.state_fidelity_full[c]);
      row.extras.emplace_back(std::string("state_fidelity_effective_") + kIonLabels[c],
                              v.state_fidelity_effective[c]);
    }
    row.extras.emplace_back("retuning_offset", v.retuning.global_offset);
    row.extras.emplace_back("retuning_shift_j", v.retuning.shift_j);
    row.extras.emplace_back("retuning_shift_k", v.retuning.shift_k);
    row.extras.emplace_back("calibration_residual", v.calibration_residual);
    row.extras.emplace_back("correction_control", v.correction.control);
    row.extras.emplace_back("correction_target", v.correction.target);
    row.extras.emplace_back("correction_global", v.correction.global);
    o.report.rows.push_back(std::move(row));
    for (const auto& w : v.warnings) o.report.warnings.push_back(scenario(inv, pt, "") + " " + w);
  }
  const std::string verdict = monotone_verdict(infidelities, false);
  o.report.summary.emplace_back("infidelity_decreasing", verdict);
  o.exit_code = verdict == "fail" ? kExitPhysics : kExitPass;
  return o;
}

Outcome cmd_cavity_run(const Invocation& inv) {
  std::vector<CavityParams> params;
  for (const KeyValues& kv : inv.points) {
    params.push_back(cavity_params(kv));
    params.back().validate();
    if (!(effective_omega(params.back()) > 0.0)) {
      throw InvalidParameter("omega_ig", "effective Rabi frequency vanishes");
    }
  }

  Outcome o;
  o.report.command = inv.command;
  o.report.parameters = parameter_fields(inv);
  bool all_pass = true;
  for (std::size_t pt = 0; pt < params.size(); ++pt) {
    const CavityParams& p = params[pt];
    const HilbertSpace space = cavity_effective_space(p.n_max);
    const auto logical = cavity_logical_indices(space, 0);
    const double w = effective_omega(p);
    for (int s = 0; s <= 4; ++s) {
      Vector in = Vector::Zero(space.dim());
      Vector ideal = Vector::Zero(4);
      if (s < 4) {
        in(logical[s]) = 1.0;
        ideal(s) = s == 3 ? -1.0 : 1.0;
      } else {
        for (int c = 0; c < 4; ++c) in(logical[c]) = 0.5;
        ideal << 0.5, 0.5, 0.5, -0.5;
      }
      const StateVector out = cavity_qpg(p, StateVector(space, in));
      Vector amps(4);
      for (int c = 0; c < 4; ++c) amps(c) = out.amplitude(logical[c]);
      const double deviation = (amps - ideal).cwiseAbs().maxCoeff();
      const double fidelity = std::norm(ideal.dot(amps));
      const double leakage = std::max(0.0, 1.0 - amps.squaredNorm());
      const bool pass = deviation < kCavityRunTol;
      all_pass = all_pass && pass;

      Row row;
      row.columns = {
          {"scenario", scenario(inv, pt, s < 4 ? kCavityLabels[s] : "uniform")},
          {"omega_ei", p.omega_ei},
          {"omega_ig", p.omega_ig},
          {"delta_big", p.delta_big},
          {"t_gate", kPi / w},
          {"omega_eff", w},
      };
      add_amplitudes(row.columns, kCavityLabels, amps);
      row.columns.emplace_back("fidelity", fidelity);
      row.columns.emplace_back("leakage", leakage);
      row.columns.emplace_back("pass", pass);
      o.report.rows.push_back(std::move(row));
    }
    for (const auto& wn : p.warnings()) o.report.warnings.push_back(scenario(inv, pt, "") + " " + wn);
  }
  o.report.summary.emplace_back("pass", all_pass);
  o.exit_code = all_pass ? kExitPass : kExitPhysics;
  return o;
}

Outcome cmd_cavity_validate(const Invocation& inv) {
  std::vector<CavityParams> params;
  for (const KeyValues& kv : inv.points) {
    params.push_back(cavity_params(kv));
    params.back().validate();
    if (!(effective_omega(params.back()) > 0.0)) {
      throw InvalidParameter("omega_ig", "effective Rabi frequency vanishes");
    }
  }
  struct Pair {
    AdiabaticPoint on;
    AdiabaticPoint off;
  };
  const auto pairs = map_params<Pair>(params, [](const CavityParams& p) {
    CavityParams on = p;
    on.compensate_stark = true;
    CavityParams off = p;
    off.compensate_stark = false;
    return Pair{adiabatic_point(on), adiabatic_point(off)};
  });

  Outcome o;
  o.report.command = inv.command;
  o.report.parameters = parameter_fields(inv);
  std::vector<double> fidelities;
  bool compensation_helps = true;
  for (std::size_t pt = 0; pt < params.size(); ++pt) {
    const CavityParams& p = params[pt];
    const AdiabaticPoint& used = p.compensate_stark ? pairs[pt].on : pairs[pt].off;
    fidelities.push_back(used.fidelity);
    compensation_helps = compensation_helps && pairs[pt].on.fidelity > pairs[pt].off.fidelity;
    const bool pass = used.conservation_defect < 1e-12 && used.max_intermediate <= used.intermediate_bound;
    Row row;
    row.columns = {
        {"scenario", scenario(inv, pt, "")},
        {"omega_ei", p.omega_ei},
        {"omega_ig", p.omega_ig},
        {"delta_big", p.delta_big},
        {"compensate_stark", p.compensate_stark},
        {"t_gate", used.t_gate},
        {"omega_eff", effective_omega(p)},
        {"fidelity", used.fidelity},
        {"gate_fidelity", used.gate_fidelity},
        {"fidelity_compensated", pairs[pt].on.fidelity},
        {"fidelity_uncompensated", pairs[pt].off.fidelity},
        {"max_intermediate", used.max_intermediate},
        {"intermediate_bound", used.intermediate_bound},
        {"conservation_defect", used.conservation_defect},
        {"pass", pass},
    };
    o.report.rows.push_back(std::move(row));
    for (const auto& wn : p.warnings()) o.report.warnings.push_back(scenario(inv, pt, "") + " " + wn);
  }
  const std::string verdict = monotone_verdict(fidelities, true);
  o.report.summary.emplace_back("fidelity_increasing", verdict);
  o.report.summary.emplace_back("compensation_helps", compensation_helps);
  o.exit_code = verdict == "fail" || !compensation_helps ? kExitPhysics : kExitPass;
  return o;
}

Outcome cmd_gates_truth_table(const Invocation& inv) {
  Outcome o;
  o.report.command = inv.command;
  o.report.parameters = parameter_fields(inv);

  const TwoQubitGate qpg = ideal_qpg();
  const TwoQubitGate cnot = ideal_cnot();
  const TwoQubitGate composition = target_sandwich(qpg, target_rotation());
  const PhaseEquivalence eq = equal_up_to_local_phases(composition, cnot);
  const TwoQubitGate corrected = apply_local_phases(composition, eq.phases);

  const std::vector<std::pair<std::string, const TwoQubitGate*>> tables = {
      {"qpg", &qpg}, {"cnot", &cnot}, {"composition", &composition}, {"corrected", &corrected}};
  for (const auto& [name, gate] : tables) {
    for (int in = 0; in < 4; ++in) {
      Row row;
      row.columns = {{"table", name}, {"input", std::string(kIonLabels[in])}};
      for (int out = 0; out < 4; ++out) {
        const Complex a = (*gate)(out, in);
        row.columns.emplace_back(std::string("out_") + kIonLabels[out] + "_re", Precise{a.real()});
        row.columns.emplace_back(std::string("out_") + kIonLabels[out] + "_im", Precise{a.imag()});
      }
      o.report.rows.push_back(std::move(row));
    }
  }
  Fields& sm = o.report.summary;
  sm.emplace_back("rotation_order", static_cast<long long>(rotation_order(target_rotation())));
  sm.emplace_back("phase_control_before", Precise{eq.phases.control_before});
  sm.emplace_back("phase_target_before", Precise{eq.phases.target_before});
  sm.emplace_back("phase_control_after", Precise{eq.phases.control_after});
  sm.emplace_back("phase_target_after", Precise{eq.phases.target_after});
  sm.emplace_back("phase_global", Precise{eq.phases.global});
  sm.emplace_back("distance", Precise{eq.distance});
  sm.emplace_back("lower_bound", Precise{eq.lower_bound});
  sm.emplace_back("equivalent", eq.equivalent);
  o.exit_code = eq.equivalent ? kExitPass : kExitPhysics;
  return o;
}

// ---------------------------------------------------------------------------

namespace {

using Handler = std::function<Outcome(const Invocation&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"ion run", cmd_ion_run},
      {"ion validate", cmd_ion_validate},
      {"cavity run", cmd_cavity_run},
      {"cavity validate", cmd_cavity_validate},
      {"gates truth-table", cmd_gates_truth_table},
  };
  return table;
}

// "--key value" and "--key=value" pairs left over by the option parser.
KeyValues parse_overrides(const std::vector<std::string>& extras) {
  KeyValues out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0 || tok.size() < 3) {
      throw InvalidParameter(tok, "unexpected argument (overrides are --key value)");
    }
    std::string key = tok.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.erase(eq);
    } else {
      if (i + 1 >= extras.size()) throw InvalidParameter(key, "missing value");
      value = extras[++i];
    }
    if (!out.emplace(key, value).second) throw InvalidParameter(key, "given twice");
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-pulse quantum phase gate simulator", "qpgsim"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path = "-";
  std::string format = "json";
  std::vector<std::string> sweep_texts;
  std::vector<std::pair<std::string, CLI::App*>> leaves;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* c = parent->add_subcommand(name, help);
    c->add_option("--config", config_path, "flat key = value file");
    c->add_option("--out", out_path, "report path ('-' for stdout)");
    c->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--sweep", sweep_texts, "KEY=v1,v2,... (repeatable)");
    c->allow_extras();
    leaves.emplace_back(parent->get_name() + " " + name, c);
  };
  CLI::App* ion = app.add_subcommand("ion", "trapped-ion gate");
  ion->require_subcommand(1);
  leaf(ion, "run", "effective-model gate on the computational states");
  leaf(ion, "validate", "full time-dependent model against the effective gate");
  CLI::App* cavity = app.add_subcommand("cavity", "cavity QED gate");
  cavity->require_subcommand(1);
  leaf(cavity, "run", "effective two-photon gate");
  leaf(cavity, "validate", "three-level model over the detuning sweep");
  CLI::App* gates = app.add_subcommand("gates", "ideal gate algebra");
  gates->require_subcommand(1);
  leaf(gates, "truth-table", "QPG, CNOT and the rotation recipe");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::string command;
  CLI::App* chosen = nullptr;
  for (const auto& [name, c] : leaves) {
    if (c->parsed()) {
      command = name;
      chosen = c;
    }
  }
  if (!chosen) {
    err << "error: no command given\n";
    return kExitConfig;
  }

  Outcome outcome;
  try {
    const KeyValues file = config_path.empty() ? KeyValues{} : load_config_file(config_path);
    const KeyValues overrides = parse_overrides(chosen->remaining());
    std::vector<Sweep> sweeps;
    for (const auto& s : sweep_texts) sweeps.push_back(parse_sweep(s));
    const Invocation inv = make_invocation(command, file, overrides, sweeps);
    outcome = handlers().at(command)(inv);
  } catch (const InvalidParameter& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << " (last dt " << format_number(e.last_dt())
        << ", last change " << format_number(e.last_change()) << ")\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitConvergence;
  }

  std::string text;
  try {
    text = format == "csv" ? to_csv(outcome.report) : to_json(outcome.report);
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitConvergence;
  }
  if (out_path == "-") {
    out << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "config error: cannot write '" << out_path << "'\n";
      return kExitConfig;
    }
    f << text;
  }
  return outcome.exit_code;
}

}  // namespace qpg::cli

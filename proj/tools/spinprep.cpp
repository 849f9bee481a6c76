#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "spinprep/constants.hpp"
#include "spinprep/entangler.hpp"
#include "spinprep/gate_fidelity.hpp"
#include "spinprep/heisenberg.hpp"
#include "spinprep/run_record.hpp"
#include "spinprep/schmidt.hpp"
#include "spinprep/units.hpp"

namespace {

using namespace spinprep;

constexpr double kPi = std::numbers::pi;

struct GlobalOpts {
  std::string constants_path;
  bool json = false;
};

struct DonorSetup {
  DonorParams params;
  std::string version;
};

// Precedence: registry file (flag or SPINPREP_CONSTANTS) over preset;
// explicit per-value flags override either.
DonorSetup resolve_donor(const GlobalOpts& g, const std::string& preset, const CLI::App* cmd) {
  ConstantsRegistry reg;
  std::string path = g.constants_path;
  if (path.empty()) {
    if (const char* env = std::getenv("SPINPREP_CONSTANTS")) path = env;
  }
  if (!path.empty()) {
    reg = ConstantsRegistry::load(path);
  } else {
    std::string p = preset;
    for (auto& c : p) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (p != "P31") throw std::invalid_argument("unknown preset '" + preset + "'");
    reg = ConstantsRegistry::p31();
  }
  DonorSetup setup{reg.donor_params(), reg.version()};
  bool overridden = false;
  if (cmd->count("--gamma-e")) {
    setup.params.gamma_e = cmd->get_option("--gamma-e")->as<double>();
    overridden = true;
  }
  if (cmd->count("--gamma-n")) {
    setup.params.gamma_n = cmd->get_option("--gamma-n")->as<double>();
    overridden = true;
  }
  if (cmd->count("--A")) {
    setup.params.hyperfine_A = cmd->get_option("--A")->as<double>();
    overridden = true;
  }
  if (overridden) setup.version += "+overrides";
  return setup;
}

void emit_record(const RunRecord& rec, const GlobalOpts& g) {
  if (g.json)
    std::cout << rec.to_json() << "\n";
  else
    std::cout << rec.to_text();
}

void add_state_outputs(RunRecord& rec, const std::string& prefix, const TwoQubitState& v) {
  static const char* kets[4] = {"uu", "ud", "du", "dd"};
  for (int i = 0; i < 4; ++i) {
    rec.add_output(prefix + "_" + kets[i] + "_re", v(i).real(), "dimensionless");
    rec.add_output(prefix + "_" + kets[i] + "_im", v(i).imag(), "dimensionless");
  }
}

void add_plan_outputs(RunRecord& rec, const PreparationPlan& plan) {
  rec.add_output("t1", plan.t1, "s");
  rec.add_output("chi1", plan.pulse1.chi, "rad");
  rec.add_output("theta1", plan.pulse1.theta, "rad");
  rec.add_output("phi1", plan.pulse1.phi, "rad");
  rec.add_output("chi2", plan.pulse2.chi, "rad");
  rec.add_output("theta2", plan.pulse2.theta, "rad");
  rec.add_output("phi2", plan.pulse2.phi, "rad");
}

PreparationPlan read_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read plan file '" + path + "'");
  double A = 0, t1 = 0, chi1 = 0, theta1 = 0, phi1 = 0, chi2 = 0, theta2 = 0, phi2 = 0;
  bool has_A = false;
  std::string key, value;
  while (in >> key >> value) {
    const double v = parse_number(value);
    if (key == "A") {
      A = v;
      has_A = true;
    } else if (key == "t1")
      t1 = v;
    else if (key == "chi1")
      chi1 = v;
    else if (key == "theta1")
      theta1 = v;
    else if (key == "phi1")
      phi1 = v;
    else if (key == "chi2")
      chi2 = v;
    else if (key == "theta2")
      theta2 = v;
    else if (key == "phi2")
      phi2 = v;
    else
      throw std::invalid_argument("unknown plan key '" + key + "'");
  }
  if (!has_A) throw std::invalid_argument("plan file missing A");
  PreparationPlan plan;
  plan.coupling_A = A;
  plan.t1 = t1;
  plan.pulse1 = PulseParams(chi1, theta1, phi1);
  plan.pulse2 = PulseParams(chi2, theta2, phi2);
  return plan;
}

void write_plan_file(const std::string& path, const PreparationPlan& plan) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write plan file '" + path + "'");
  out << "A " << format_number(plan.coupling_A) << "\n";
  out << "t1 " << format_number(plan.t1) << "\n";
  out << "chi1 " << format_number(plan.pulse1.chi) << "\n";
  out << "theta1 " << format_number(plan.pulse1.theta) << "\n";
  out << "phi1 " << format_number(plan.pulse1.phi) << "\n";
  out << "chi2 " << format_number(plan.pulse2.chi) << "\n";
  out << "theta2 " << format_number(plan.pulse2.theta) << "\n";
  out << "phi2 " << format_number(plan.pulse2.phi) << "\n";
}

TwoQubitState parse_target_flag(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(parse_number(tok));
  if (vals.size() != 8)
    throw std::invalid_argument("target must be 8 comma-separated numbers (re,im x4)");
  TwoQubitState v;
  for (int i = 0; i < 4; ++i) v(i) = Complex(vals[2 * i], vals[2 * i + 1]);
  return v;
}

TwoQubitState read_target_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read target file '" + path + "'");
  std::vector<double> vals;
  double x;
  while (in >> x) vals.push_back(x);
  if (vals.size() != 8)
    throw std::invalid_argument("target file must hold 8 numbers (re im per amplitude)");
  TwoQubitState v;
  for (int i = 0; i < 4; ++i) v(i) = Complex(vals[2 * i], vals[2 * i + 1]);
  return v;
}

int run_prepare(const GlobalOpts& g, const std::string& plan_path, double A, const std::string& t1_text,
                const std::vector<double>& angles, bool has_A) {
  PreparationPlan plan;
  if (!plan_path.empty()) {
    plan = read_plan_file(plan_path);
  } else {
    if (!has_A) throw std::invalid_argument("prepare: --A is required (or use --plan)");
    plan.coupling_A = A;
    plan.t1 = parse_time_seconds(t1_text);
    plan.pulse1 = PulseParams(angles[0], angles[1], angles[2]);
    plan.pulse2 = PulseParams(angles[3], angles[4], angles[5]);
  }

  const TwoQubitState state = prepare(plan);
  const SchmidtForm form = decompose(state);

  RunRecord rec;
  rec.command = "prepare";
  rec.constants_version = "n/a";
  rec.add_input("A", plan.coupling_A, "1/s");
  rec.add_input("t1", plan.t1, "s");
  rec.add_input("chi1", plan.pulse1.chi, "rad");
  rec.add_input("theta1", plan.pulse1.theta, "rad");
  rec.add_input("phi1", plan.pulse1.phi, "rad");
  rec.add_input("chi2", plan.pulse2.chi, "rad");
  rec.add_input("theta2", plan.pulse2.theta, "rad");
  rec.add_input("phi2", plan.pulse2.phi, "rad");
  add_state_outputs(rec, "a", state);
  rec.add_output("schmidt_c1", form.c1, "dimensionless");
  rec.add_output("schmidt_c2", form.c2, "dimensionless");
  rec.add_output("concurrence", concurrence(state), "dimensionless");
  rec.add_residual("norm_deviation", std::abs(state.norm() - 1.0), "dimensionless");
  rec.add_residual("schmidt_reconstruction", max_abs_diff(form.reconstruct(), state),
                   "dimensionless");
  emit_record(rec, g);
  return 0;
}

int run_synthesize(const GlobalOpts& g, double A, const std::string& target_text,
                   const std::string& target_path, bool random, unsigned long long seed,
                   const std::string& plan_out) {
  TwoQubitState target;
  if (random) {
    std::mt19937_64 rng(seed);
    target = haar_random_state(rng);
  } else if (!target_path.empty()) {
    target = read_target_file(target_path);
  } else if (!target_text.empty()) {
    target = parse_target_flag(target_text);
  } else {
    throw std::invalid_argument("synthesize: provide --target, --target-file, or --random");
  }

  const SynthesisResult res = synthesize(target, A);

  RunRecord rec;
  rec.command = "synthesize";
  rec.constants_version = "n/a";
  rec.add_input("A", A, "1/s");
  for (int i = 0; i < 4; ++i) {
    static const char* kets[4] = {"uu", "ud", "du", "dd"};
    rec.add_input(std::string("target_") + kets[i] + "_re", target(i).real(), "dimensionless");
    rec.add_input(std::string("target_") + kets[i] + "_im", target(i).imag(), "dimensionless");
  }
  if (random) rec.add_input("seed", static_cast<double>(seed), "dimensionless");
  add_plan_outputs(rec, res.plan);
  rec.add_output("global_phase", res.global_phase, "rad");
  rec.add_output("used_refinement", res.used_refinement ? "true" : "false");
  rec.add_output("feasibility_ok", res.feasibility_ok ? "true" : "false");
  // Recomputed from the emitted plan, not copied from solver state.
  const TwoQubitState again = prepare(res.plan);
  rec.add_residual("residual_fidelity", fidelity_states(target, again), "dimensionless");
  rec.add_residual("norm_deviation", std::abs(again.norm() - 1.0), "dimensionless");
  emit_record(rec, g);
  if (!plan_out.empty()) write_plan_file(plan_out, res.plan);
  return 0;
}

void add_entangle_fields(RunRecord& rec, const DonorParams& d, const EntanglerSpec& spec,
                         const EntanglerReport& rep) {
  rec.add_output("Bz", spec.Bz, "T");
  rec.add_output("Bz_mT", spec.Bz * 1e3, "mT");
  rec.add_output("t", spec.t, "s");
  rec.add_output("t_ns", spec.t * 1e9, "ns");
  rec.add_output("achieved_phase", rep.achieved_phase, "rad");
  rec.add_output("concurrence", rep.achieved_concurrence, "dimensionless");
  rec.add_output("fidelity", rep.fidelity, "dimensionless");
  rec.add_output("conditions_met", rep.conditions_met ? "true" : "false");
  rec.add_output("domain_ok", rep.domain_ok ? "true" : "false");
  rec.add_residual("phase_condition", rep.cot_residual, "dimensionless");
  rec.add_residual("duration_condition", rep.tan_residual, "dimensionless");
  rec.add_residual("domain_margin", rep.domain_margin, "dimensionless");
  rec.add_residual("norm_deviation",
                   std::abs(subspace_state(d, spec.Bz, spec.t).norm() - 1.0), "dimensionless");
}

int run_entangle(const GlobalOpts& g, const DonorSetup& setup, double chi, int branch,
                 const std::string& check_Bz, const std::string& check_t, int sweep, int jobs) {
  const DonorParams& d = setup.params;

  if (sweep > 0) {
    std::vector<EntanglerSpec> specs(static_cast<size_t>(sweep));
    std::vector<EntanglerReport> reports(static_cast<size_t>(sweep));
    const auto worker = [&](int begin, int end) {
      for (int i = begin; i < end; ++i) {
        const double c = -kPi + (i + 0.5) * 2 * kPi / sweep;
        specs[i] = solve_entangler(d, c, branch);
        reports[i] = verify_entangling_conditions(d, specs[i]);
      }
    };
    const int njobs = std::max(1, jobs);
    if (njobs == 1) {
      worker(0, sweep);
    } else {
      std::vector<std::thread> pool;
      const int chunk = (sweep + njobs - 1) / njobs;
      for (int j = 0; j < njobs; ++j) {
        const int b = j * chunk;
        const int e = std::min(sweep, b + chunk);
        if (b < e) pool.emplace_back(worker, b, e);
      }
      for (auto& th : pool) th.join();
    }
    std::cout << "# chi_rad Bz_T t_s concurrence phase_residual duration_residual\n";
    for (int i = 0; i < sweep; ++i) {
      std::cout << format_number(specs[i].chi) << " " << format_number(specs[i].Bz) << " "
                << format_number(specs[i].t) << " "
                << format_number(reports[i].achieved_concurrence) << " "
                << format_number(reports[i].cot_residual) << " "
                << format_number(reports[i].tan_residual) << "\n";
    }
    return 0;
  }

  EntanglerSpec spec;
  bool solved = false;
  if (!check_Bz.empty() || !check_t.empty()) {
    if (check_Bz.empty() || check_t.empty())
      throw std::invalid_argument("entangle: --check-Bz and --check-t must be given together");
    spec.chi = chi;
    spec.Bz = parse_field_tesla(check_Bz);
    spec.t = parse_time_seconds(check_t);
  } else {
    spec = solve_entangler(d, chi, branch);
    solved = true;
  }
  const EntanglerReport rep = verify_entangling_conditions(d, spec);

  RunRecord rec;
  rec.command = "entangle";
  rec.constants_version = setup.version;
  rec.add_input("chi", chi, "rad");
  rec.add_input("branch", static_cast<double>(branch), "dimensionless");
  rec.add_input("gamma_e", d.gamma_e, "1/(T*s)");
  rec.add_input("gamma_n", d.gamma_n, "1/(T*s)");
  rec.add_input("hyperfine_A", d.hyperfine_A, "1/s");
  rec.add_input("mode", solved ? "solve" : "check");
  add_entangle_fields(rec, d, spec, rep);
  emit_record(rec, g);
  if (!rep.domain_ok) return 3;
  return 0;
}

int run_fidelity_curve(const GlobalOpts& g, const DonorSetup& setup, const std::string& tmax_text,
                       int n, const std::string& out_path) {
  const DonorParams& d = setup.params;
  const double t_max = parse_time_seconds(tmax_text);
  const FidelityCurve curve = fidelity_curve(d, t_max, n);

  const double bstar = d.hyperfine_A / (d.gamma_e + d.gamma_n);
  const Mat4 w = gate_W(d);
  double max_dev = 0;
  for (const auto& [t, F] : curve.samples)
    max_dev = std::max(max_dev, std::abs(F - fidelity_trace(split_propagator(d, bstar, t), w)));

  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot write curve file '" + out_path + "'");
  out << "# t_ns F\n";
  for (const auto& [t, F] : curve.samples)
    out << format_number(t * 1e9) << " " << format_number(F) << "\n";
  if (!out.good()) throw std::invalid_argument("write failed for '" + out_path + "'");
  out.close();

  const FidelityPeak peak = find_fidelity_peak(d, t_max, n);

  RunRecord rec;
  rec.command = "fidelity-curve";
  rec.constants_version = setup.version;
  rec.add_input("t_max", t_max, "s");
  rec.add_input("n", static_cast<double>(n), "dimensionless");
  rec.add_input("Bz", bstar, "T");
  rec.add_output("file", out_path);
  rec.add_output("peak_t", peak.t, "s");
  rec.add_output("peak_t_ns", peak.t * 1e9, "ns");
  rec.add_output("peak_F", peak.value, "dimensionless");
  rec.add_output("peak_grid_index", static_cast<double>(peak.grid_index), "dimensionless");
  rec.add_residual("max_trace_deviation", max_dev, "dimensionless");

  std::ofstream side(out_path + ".record");
  if (!side) throw std::invalid_argument("cannot write record file '" + out_path + ".record'");
  side << rec.to_text();
  side.close();

  emit_record(rec, g);
  return 0;
}

int run_spectrum(const GlobalOpts& g, const DonorSetup& setup, const std::string& b_text,
                 double theta, double phi) {
  const DonorParams& d = setup.params;
  const FieldConfig f(parse_field_tesla(b_text), theta, phi);
  const Spectrum sp = spectrum(d, f);
  const DerivedFrequencies fr = derive_frequencies(d, f.B);

  RunRecord rec;
  rec.command = "spectrum";
  rec.constants_version = setup.version;
  rec.add_input("B", f.B, "T");
  rec.add_input("theta", f.theta, "rad");
  rec.add_input("phi", f.phi, "rad");
  rec.add_input("gamma_e", d.gamma_e, "1/(T*s)");
  rec.add_input("gamma_n", d.gamma_n, "1/(T*s)");
  rec.add_input("hyperfine_A", d.hyperfine_A, "1/s");
  for (int k = 0; k < 4; ++k)
    rec.add_output("E" + std::to_string(k + 1), sp.energies[k], "1/s");
  rec.add_output("eta", fr.eta, "rad");
  for (int k = 0; k < 4; ++k)
    add_state_outputs(rec, "psi" + std::to_string(k + 1), sp.states[k]);
  rec.add_residual("eigen_residual", spectrum_residual(d, f), "dimensionless");
  double ortho = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      ortho = std::max(ortho,
                       std::abs(std::abs(sp.states[a].dot(sp.states[b])) - (a == b ? 1.0 : 0.0)));
  rec.add_residual("orthonormality", ortho, "dimensionless");
  emit_record(rec, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-spin state preparation and donor-system toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--constants", g.constants_path,
                 "constants registry file (or set SPINPREP_CONSTANTS)");
  app.add_flag("--json", g.json, "emit records as JSON");

  auto* prep = app.add_subcommand("prepare", "free evolution plus simultaneous pulses");
  double prep_A = 0;
  std::string prep_t1 = "0";
  std::vector<double> prep_angles(6, 0.0);
  std::string prep_plan;
  auto* prep_A_opt = prep->add_option("--A", prep_A, "exchange coupling, 1/s");
  prep->add_option("--t1", prep_t1, "free evolution time (s or ns suffix)");
  prep->add_option("--chi1", prep_angles[0], "pulse area, spin 1 (rad)");
  prep->add_option("--theta1", prep_angles[1], "pulse polar angle, spin 1 (rad)");
  prep->add_option("--phi1", prep_angles[2], "pulse azimuth, spin 1 (rad)");
  prep->add_option("--chi2", prep_angles[3], "pulse area, spin 2 (rad)");
  prep->add_option("--theta2", prep_angles[4], "pulse polar angle, spin 2 (rad)");
  prep->add_option("--phi2", prep_angles[5], "pulse azimuth, spin 2 (rad)");
  prep->add_option("--plan", prep_plan, "plan file (key value lines)");

  auto* synth = app.add_subcommand("synthesize", "invert a target state into a plan");
  double synth_A = 1.0;
  std::string synth_target, synth_target_file, synth_plan_out;
  bool synth_random = false;
  unsigned long long synth_seed = 12345;
  synth->add_option("--A", synth_A, "exchange coupling, 1/s")->required();
  synth->add_option("--target", synth_target, "8 comma-separated numbers: re,im per amplitude");
  synth->add_option("--target-file", synth_target_file, "file with 8 numbers");
  synth->add_flag("--random", synth_random, "draw the target uniformly at random");
  synth->add_option("--seed", synth_seed, "seed for --random");
  synth->add_option("--plan-out", synth_plan_out, "write the solved plan to a file");

  auto* ent = app.add_subcommand("entangle", "field and duration for a balanced flip-flop state");
  std::string ent_preset = "P31";
  double ent_chi = 0, ent_ge = 0, ent_gn = 0, ent_A = 0;
  int ent_branch = 0, ent_sweep = 0, ent_jobs = 1;
  std::string ent_check_Bz, ent_check_t;
  ent->add_option("--preset", ent_preset, "donor preset (P31)");
  ent->add_option("--chi", ent_chi, "target relative phase (rad)");
  ent->add_option("--branch", ent_branch, "half-period branch index (>= 0)");
  ent->add_option("--gamma-e", ent_ge, "electron gyromagnetic ratio, 1/(T*s)");
  ent->add_option("--gamma-n", ent_gn, "nuclear gyromagnetic ratio, 1/(T*s)");
  ent->add_option("--A", ent_A, "hyperfine coupling, 1/s");
  ent->add_option("--check-Bz", ent_check_Bz, "verify this field instead of solving");
  ent->add_option("--check-t", ent_check_t, "verify this duration instead of solving");
  ent->add_option("--sweep", ent_sweep, "sweep N phases over (-pi, pi)");
  ent->add_option("--jobs", ent_jobs, "worker threads for --sweep");

  auto* fid = app.add_subcommand("fidelity-curve", "gate fidelity curve and peak");
  std::string fid_preset = "P31", fid_tmax = "40ns", fid_out = "fidelity_curve.txt";
  double fid_ge = 0, fid_gn = 0, fid_A = 0;
  int fid_n = 1024;
  fid->add_option("--preset", fid_preset, "donor preset (P31)");
  fid->add_option("--t-max", fid_tmax, "curve end time (s or ns suffix)");
  fid->add_option("--n", fid_n, "number of samples (>= 2)");
  fid->add_option("--out", fid_out, "output curve file");
  fid->add_option("--gamma-e", fid_ge, "electron gyromagnetic ratio, 1/(T*s)");
  fid->add_option("--gamma-n", fid_gn, "nuclear gyromagnetic ratio, 1/(T*s)");
  fid->add_option("--A", fid_A, "hyperfine coupling, 1/s");

  auto* spect = app.add_subcommand("spectrum", "energy levels and eigenvectors");
  std::string spect_preset = "P31", spect_B = "0T";
  double spect_theta = 0, spect_phi = 0, spect_ge = 0, spect_gn = 0, spect_A = 0;
  spect->add_option("--preset", spect_preset, "donor preset (P31)");
  spect->add_option("--B", spect_B, "field magnitude (T or mT suffix)")->required();
  spect->add_option("--theta", spect_theta, "field polar angle (rad)");
  spect->add_option("--phi", spect_phi, "field azimuth (rad)");
  spect->add_option("--gamma-e", spect_ge, "electron gyromagnetic ratio, 1/(T*s)");
  spect->add_option("--gamma-n", spect_gn, "nuclear gyromagnetic ratio, 1/(T*s)");
  spect->add_option("--A", spect_A, "hyperfine coupling, 1/s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (prep->parsed())
      return run_prepare(g, prep_plan, prep_A, prep_t1, prep_angles, prep_A_opt->count() > 0);
    if (synth->parsed())
      return run_synthesize(g, synth_A, synth_target, synth_target_file, synth_random, synth_seed,
                            synth_plan_out);
    if (ent->parsed())
      return run_entangle(g, resolve_donor(g, ent_preset, ent), ent_chi, ent_branch, ent_check_Bz,
                          ent_check_t, ent_sweep, ent_jobs);
    if (fid->parsed())
      return run_fidelity_curve(g, resolve_donor(g, fid_preset, fid), fid_tmax, fid_n, fid_out);
    if (spect->parsed())
      return run_spectrum(g, resolve_donor(g, spect_preset, spect), spect_B, spect_theta,
                          spect_phi);
  } catch (const SynthesisFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "best residual fidelity: " << format_number(e.best_result.residual_fidelity)
              << "\n";
    return 4;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

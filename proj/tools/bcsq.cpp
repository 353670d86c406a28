// Command-line front door: single trajectories, spectral-root analysis,
// phase-diagram sweeps, realistic cavity runs and trajectory post-processing.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcsq/cavity.hpp"
#include "bcsq/dynamics.hpp"
#include "bcsq/lax.hpp"
#include "bcsq/model.hpp"
#include "bcsq/observables.hpp"
#include "bcsq/selftest.hpp"
#include "bcsq/sweep.hpp"
#include "bcsq/trajectory_io.hpp"
#include "bcsq/version.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct EvolveArgs {
  std::string family = "azimuthal";
  double angle = 0.0;
  double eps0 = 0.1;
  double w = 0.5;
  int n = 1000;
  double t_max = 200.0;
  int samples = 4096;
  double gamma = 0.0;
  std::string splitting = "equally-spaced";
  std::uint64_t seed = 1;
  std::string out = "trajectory";
  bool json_out = false;
};

int cmd_evolve(const EvolveArgs& a) {
  bcsq::SplittingSpec ss;
  ss.kind = a.splitting == "uniform-random" ? bcsq::SplittingKind::uniform_random
                                            : bcsq::SplittingKind::equally_spaced;
  ss.eps0 = a.eps0;
  ss.w = a.w;
  ss.n_per_ensemble = a.n;
  ss.seed = a.seed;
  const auto eps = bcsq::sample_splittings(ss);

  bcsq::InitialStateSpec is;
  if (a.family == "azimuthal") is.family = bcsq::StateFamily::azimuthal;
  else if (a.family == "elevation") is.family = bcsq::StateFamily::elevation;
  else if (a.family == "bcs") is.family = bcsq::StateFamily::bcs_ground;
  else throw CLI::ValidationError("--family must be azimuthal|elevation|bcs");
  is.angle = a.angle;

  bcsq::ModelParams mp;
  mp.chi = 1.0 / a.n;  // chiN = 1 units
  mp.n_per_ensemble = a.n;
  mp.eps0 = a.eps0;
  mp.w = a.w;

  const bcsq::SpinState st = bcsq::prepare_initial_state(is, eps, mp.chi);

  bcsq::EvolutionConfig ec;
  ec.t_max = a.t_max;
  ec.n_samples = a.samples;
  ec.gamma = a.gamma;

  bcsq::Trajectory traj = bcsq::integrate(st, mp, ec);
  traj.angle = a.angle;
  bcsq::write_trajectory_csv(traj, a.out + ".csv");
  if (a.json_out) bcsq::write_trajectory_json(traj, a.out + ".json");

  const auto m = bcsq::trajectory_metrics(traj);
  std::cout << "wrote " << a.out << ".csv  phase=" << bcsq::to_string(m.label.phase)
            << "  amplitude=" << m.amplitude << "  mean|delta|=" << m.mean_abs_delta << "\n";
  return 0;
}

struct LaxArgs {
  std::string family = "azimuthal";
  double angle = kPi;
  double w = 0.5;
  double eps0 = 0.1;
  std::string method = "numeric";
};

int cmd_lax(const LaxArgs& a) {
  bcsq::LaxProblem p;
  p.chi_n = 1.0;
  p.eps0 = a.eps0;
  p.w = a.w;
  p.family = a.family == "elevation" ? bcsq::StateFamily::elevation
                                     : bcsq::StateFamily::azimuthal;
  p.angle = a.angle;

  bcsq::LaxRootSet roots;
  bool ok = true;
  std::string note;
  if (a.method == "numeric") {
    const auto r = bcsq::find_roots_numeric(p);
    roots = r.roots;
    ok = r.ok;
    note = r.message;
  } else if (a.method == "antipodal") {
    roots = bcsq::analytic_roots_antipodal(p);
  } else if (a.method == "small-w") {
    roots = bcsq::analytic_roots_small_w(p);
  } else if (a.method == "small-eps") {
    roots = bcsq::analytic_roots_small_eps(p);
  } else {
    throw CLI::ValidationError("--method must be numeric|antipodal|small-w|small-eps");
  }

  nlohmann::json j;
  j["angle"] = a.angle;
  j["w_over_chin"] = a.w;
  j["eps0_over_chin"] = a.eps0;
  j["family"] = a.family;
  j["method"] = a.method;
  j["n_pairs"] = roots.n_pairs();
  j["roots"] = nlohmann::json::array();
  for (const auto& u : roots.pairs)
    j["roots"].push_back({{"re", u.real()}, {"im", u.imag()}});
  if (roots.n_pairs() == 2) {
    j["r_plus"] = roots.r_plus();
    j["r_minus"] = roots.r_minus();
    j["r_tilde"] = roots.r_tilde();
  }
  j["phase"] = bcsq::to_string(bcsq::classify_from_roots(roots).phase);
  j["status"] = ok ? "ok" : "undetermined";
  if (!note.empty()) j["note"] = note;
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct CavityArgs {
  double dphi = kPi;
  double eps0 = 0.1;
  double w = 0.1;
  int nsim = 500;
  double tmax_us = 150.0;
  int samples = 8192;
  double gamma_khz = -1.0;  // <0 keeps the default
  std::string ordering = "interleaved";
  std::string out = "cavity_run";
};

int cmd_cavity(const CavityArgs& a) {
  bcsq::CavityParams cp;
  cp.n_sim = a.nsim;
  cp.ordering = a.ordering == "blocked" ? bcsq::SiteOrdering::blocked
                                        : bcsq::SiteOrdering::interleaved;
  if (a.gamma_khz >= 0.0) cp.gamma = 2 * kPi * a.gamma_khz * 1e3;
  const double chin = cp.chi_n_bare();

  bcsq::EvolutionConfig ec;
  ec.t_max = a.tmax_us * 1e-6;
  ec.n_samples = a.samples;
  ec.dt_initial = 1e-9;

  const bcsq::Trajectory traj =
      bcsq::run_cavity_experiment(a.dphi, a.eps0 * chin, a.w * chin, cp, ec);
  bcsq::write_trajectory_csv(traj, a.out + ".csv");

  const auto m = bcsq::analyze_cavity_spectrum(traj, 0.5 * std::max(a.eps0, 0.05) * chin);
  std::cout << "wrote " << a.out << ".csv  chiN/2pi=" << chin / (2 * kPi) << " Hz"
            << "  beat=" << (m.pair_detected ? "yes" : "no")
            << "  beat_freq/chiN=" << m.beat_freq / chin
            << "  coherence_level=" << m.mean_level << "\n";
  return 0;
}

struct SpectrumArgs {
  std::string input;
  std::string column = "abs_delta";
  std::string out;
};

int cmd_spectrum(const SpectrumArgs& a) {
  const auto cols = bcsq::read_csv_columns(a.input);
  if (!cols.count("t")) throw std::runtime_error("spectrum: input lacks a 't' column");
  const auto& t = cols.at("t");
  if (t.size() < 2) throw std::runtime_error("spectrum: too few samples");
  const double dt = t[1] - t[0];

  bcsq::SpectrumResult sp;
  if (a.column == "a") {
    if (!cols.count("re_a") || !cols.count("im_a"))
      throw std::runtime_error("spectrum: no cavity-field columns in input");
    std::vector<std::complex<double>> series(t.size());
    for (size_t i = 0; i < t.size(); ++i)
      series[i] = {cols.at("re_a")[i], cols.at("im_a")[i]};
    sp = bcsq::spectrum(series, dt);
  } else {
    if (!cols.count(a.column))
      throw std::runtime_error("spectrum: no column '" + a.column + "' in input");
    sp = bcsq::spectrum(cols.at(a.column), dt);
  }

  if (!a.out.empty()) {
    std::ofstream f(a.out);
    f << "omega,magnitude\n";
    for (size_t i = 0; i < sp.frequency.size(); ++i) {
      char buf[80];
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", sp.frequency[i], sp.magnitude[i]);
      f << buf;
    }
  }
  std::cout << "peaks (signed omega, height):\n";
  for (const auto& p : sp.peaks)
    std::cout << "  " << sp.signed_frequency(p.frequency) << "  " << p.height << "\n";
  if (sp.peaks.empty()) std::cout << "  none above prominence threshold\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical phases of the quenched pseudospin pairing model: "
               "spectral-root analysis, mean-field evolution and the cavity realization"};
  app.set_version_flag("--version", BCSQ_VERSION);
  app.require_subcommand(1);

  EvolveArgs ev;
  auto* evolve = app.add_subcommand("evolve", "integrate one mean-field trajectory (chiN = 1 units)");
  evolve->add_option("--family", ev.family, "azimuthal|elevation|bcs");
  evolve->add_option("--angle,--dphi,--dtheta", ev.angle, "opening angle in radians");
  evolve->add_option("--eps0-over-chiN", ev.eps0, "ensemble mean separation");
  evolve->add_option("--w-over-chiN", ev.w, "splitting distribution width");
  evolve->add_option("--n", ev.n, "spins per ensemble");
  evolve->add_option("--tmax", ev.t_max, "integration time in 1/(chiN)");
  evolve->add_option("--samples", ev.samples, "output samples");
  evolve->add_option("--gamma-over-chiN", ev.gamma, "spontaneous-emission rate");
  evolve->add_option("--splitting", ev.splitting, "equally-spaced|uniform-random");
  evolve->add_option("--seed", ev.seed, "seed for random splittings");
  evolve->add_option("--out", ev.out, "output path prefix");
  evolve->add_flag("--json", ev.json_out, "also write JSON");

  LaxArgs lx;
  auto* lax = app.add_subcommand("lax", "roots and phase label at one parameter point");
  lax->add_option("--family", lx.family, "azimuthal|elevation");
  lax->add_option("--angle,--dphi,--dtheta", lx.angle, "opening angle in radians");
  lax->add_option("--w-over-chiN", lx.w, "splitting distribution width");
  lax->add_option("--eps0-over-chiN", lx.eps0, "ensemble mean separation");
  lax->add_option("--method", lx.method, "numeric|antipodal|small-w|small-eps");

  std::string config_path;
  int workers_override = -1;
  std::string output_override;
  auto* pd = app.add_subcommand("phase-diagram", "run a sweep from a JSON config");
  pd->add_option("--config", config_path, "sweep config file")->required();
  pd->add_option("--workers", workers_override, "override worker count");
  pd->add_option("--output", output_override, "override output prefix");

  CavityArgs cv;
  auto* cavity = app.add_subcommand("cavity", "realistic cavity run (SI parameters)");
  cavity->add_option("--dphi", cv.dphi, "opening angle in radians");
  cavity->add_option("--eps0-over-chiN", cv.eps0, "mean separation in bare chiN units");
  cavity->add_option("--w-over-chiN", cv.w, "width in bare chiN units");
  cavity->add_option("--nsim", cv.nsim, "simulated atoms per ensemble");
  cavity->add_option("--tmax-us", cv.tmax_us, "integration time in microseconds");
  cavity->add_option("--samples", cv.samples, "output samples");
  cavity->add_option("--gamma-khz", cv.gamma_khz, "override gamma/(2pi) in kHz");
  cavity->add_option("--ordering", cv.ordering, "interleaved|blocked site assignment");
  cavity->add_option("--out", cv.out, "output path prefix");

  SpectrumArgs spa;
  auto* sp = app.add_subcommand("spectrum", "post-process a trajectory file");
  sp->add_option("--input", spa.input, "trajectory CSV")->required();
  sp->add_option("--column", spa.column, "column name, or 'a' for the complex cavity field");
  sp->add_option("--out", spa.out, "write omega,magnitude CSV");

  auto* st = app.add_subcommand("selftest", "run the fast invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*evolve) return cmd_evolve(ev);
    if (*lax) return cmd_lax(lx);
    if (*pd) {
      bcsq::SweepSpec spec = bcsq::load_sweep_spec(config_path);
      if (workers_override > 0) spec.workers = workers_override;
      if (!output_override.empty()) spec.output = output_override;
      const auto sum = bcsq::run_sweep(spec);
      std::cout << "wrote " << sum.csv_path << " (" << sum.cells << " cells, "
                << sum.undetermined << " undetermined, " << sum.wall_time_s << " s"
                << (sum.resumed ? ", resumed" : "") << ")\n";
      return sum.undetermined == sum.cells ? 2 : 0;
    }
    if (*cavity) return cmd_cavity(cv);
    if (*sp) return cmd_spectrum(spa);
    if (*st) return bcsq::run_selftest(std::cout) == 0 ? 0 : 2;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, next to each check.

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bcsq/cavity.hpp"
#include "bcsq/dynamics.hpp"
#include "bcsq/lax.hpp"
#include "bcsq/model.hpp"
#include "bcsq/observables.hpp"
#include "bcsq/special_functions.hpp"
#include "bcsq/sweep.hpp"

using namespace bcsq;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct CheckFailure {
  std::string what;
};

void require(bool ok, const std::string& what, std::string& detail) {
  if (!ok) {
    if (!detail.empty()) detail += "; ";
    detail += "FAILED: " + what;
    throw CheckFailure{what};
  }
}

Trajectory run_ideal(double angle, double eps0, double w, int n, double t_max, int samples,
                     double rel_tol = 1e-8, StateFamily family = StateFamily::azimuthal,
                     int snapshot_stride = 0) {
  SplittingSpec ss;
  ss.eps0 = eps0;
  ss.w = w;
  ss.n_per_ensemble = n;
  InitialStateSpec is;
  is.family = family;
  is.angle = angle;
  const SpinState st = prepare_initial_state(is, sample_splittings(ss));
  ModelParams mp;
  mp.chi = 1.0 / n;
  mp.n_per_ensemble = n;
  mp.eps0 = eps0;
  mp.w = w;
  EvolutionConfig ec;
  ec.t_max = t_max;
  ec.n_samples = samples;
  ec.rel_tol = rel_tol;
  ec.abs_tol = rel_tol * 1e-2;
  ec.snapshot_stride = snapshot_stride;
  Trajectory tr = integrate(st, mp, ec);
  tr.angle = angle;
  return tr;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

// ---------------------------------------------------------------------------
// 1. Numeric roots vs the antipodal closed form over W in (0, 4].
bool criterion_1(std::string& detail) {
  const double step = 0.05;
  std::vector<double> ws;
  for (double w = step; w <= 4.0 + 1e-12; w += step) ws.push_back(w);
  LaxProblem base{1.0, 0.1, 0.0, StateFamily::azimuthal, kPi};
  const auto rows = find_roots_along_w(base, ws);

  double worst_rel = 0.0;
  double last_two = 0.0, first_zero = 0.0;
  for (size_t i = 0; i < ws.size(); ++i) {
    const int n_pairs = rows[i].roots.n_pairs();
    if (n_pairs == 2) last_two = ws[i];
    if (n_pairs == 0 && first_zero == 0.0 && ws[i] > 1.0) first_zero = ws[i];
    if (ws[i] < kPi - step) {
      require(n_pairs == 2, "two pairs expected at W=" + std::to_string(ws[i]), detail);
      LaxProblem p = base;
      p.w = ws[i];
      const auto exact = analytic_roots_antipodal(p);
      for (int k = 0; k < 2; ++k) {
        double best = 1e300;
        for (const auto& e : exact.pairs)
          best = std::min(best, std::abs(rows[i].roots.pairs[k] - e) / std::abs(e));
        worst_rel = std::max(worst_rel, best);
      }
    }
    if (ws[i] > kPi + step)
      require(n_pairs == 0, "no pairs expected at W=" + std::to_string(ws[i]), detail);
  }
  require(worst_rel < 1e-6, "relative root error vs closed form < 1e-6", detail);
  require(std::abs(last_two - kPi) <= step + 1e-9 || std::abs(first_zero - kPi) <= step + 1e-9,
          "roots vanish at W = pi within one grid step", detail);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max rel err %.2e, roots vanish in W = (%.2f, %.2f]",
                worst_rel, last_two, first_zero);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 2. Phase-map topology at eps0 = 0.1 and the II/I boundary law at eps0 = 0.01.
bool criterion_2(std::string& detail) {
  const int na = 40, nw = 40;
  const double eps0 = 0.1, wstep = 0.1;
  std::vector<double> ws;
  for (int j = 0; j < nw; ++j) ws.push_back(wstep * (j + 1));

  int ii_defects = 0, ii_cells = 0;
  for (int i = 0; i < na; ++i) {
    const double angle = -kPi + 2.0 * kPi * i / (na - 1);
    LaxProblem base{1.0, eps0, 0.0, StateFamily::azimuthal, angle};
    const auto rows = find_roots_along_w(base, ws);
    std::vector<Phase> ph(nw);
    for (int j = 0; j < nw; ++j) ph[j] = classify_from_roots(rows[j].roots).phase;

    // below 2*eps0 the map is phase III at every angle
    require(ph[0] == Phase::IIIa || ph[0] == Phase::IIIb,
            "III at W=0.1, angle=" + std::to_string(angle), detail);

    int first_I = nw;
    for (int j = 0; j < nw; ++j)
      if (ph[j] == Phase::I) {
        first_I = j;
        break;
      }

    if (std::abs(angle) > 0.65 * kPi + 1e-9) {
      // near-antipodal rows leave the oscillating region by W = 4 at the latest
      require(ph[nw - 1] == Phase::I, "I at W=4, angle=" + std::to_string(angle), detail);
      continue;
    }

    // away from the antipode: II fills the band between 2*eps0 and the
    // dephasing boundary near 2*pi*cos(angle/2), which crosses the grid
    // edge W = 4 at |angle| ~ 1.76
    const double expect_boundary = 2.0 * kPi * std::cos(angle / 2.0);
    if (expect_boundary < 3.9)
      require(first_I < nw, "phase I reached, angle=" + std::to_string(angle), detail);
    if (expect_boundary > 4.1)
      require(first_I == nw, "no phase I inside the grid, angle=" + std::to_string(angle),
              detail);
    for (int j = 0; j < nw; ++j) {
      const double w = ws[j];
      if (w >= 2.0 * eps0 + wstep && j < first_I - 1) {
        ++ii_cells;
        if (ph[j] != Phase::II) ++ii_defects;
      }
      if (j > first_I && ph[j] != Phase::I) ++ii_defects;
    }
  }
  // the map may carry isolated method artifacts; cap them at 2%
  require(ii_cells > 500, "interior II band sampled", detail);
  require(ii_defects <= 0.02 * ii_cells, "II band and I region clean to 2%", detail);

  // boundary law at small mean splitting
  double worst_rel = 0.0;
  for (double angle : {0.0, kPi / 4, -kPi / 4, kPi / 2, -kPi / 2, 3 * kPi / 4, -3 * kPi / 4}) {
    const double expect = 2.0 * kPi * std::cos(angle / 2.0);
    std::vector<double> scan;
    for (int k = 0; k <= 80; ++k) scan.push_back(expect * (0.90 + 0.0025 * k));
    LaxProblem base{1.0, 0.01, 0.0, StateFamily::azimuthal, angle};
    const auto rows = find_roots_along_w(base, scan);
    double found = 0.0;
    for (size_t k = 0; k < scan.size(); ++k)
      if (rows[k].roots.n_pairs() == 0) {
        found = scan[k];
        break;
      }
    require(found > 0.0, "II->I flip found, angle=" + std::to_string(angle), detail);
    worst_rel = std::max(worst_rel, std::abs(found - expect) / expect);
  }
  require(worst_rel <= 0.02, "II/I boundary tracks 2*pi*cos(angle/2) within 2%", detail);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "II-band defects %d/%d, boundary-law max rel dev %.3f%%",
                ii_defects, ii_cells, 100.0 * worst_rel);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 3. III/II transition at W = 2*eps0 for a range of mean splittings.
bool criterion_3(std::string& detail) {
  std::string log;
  for (double eps0 : {0.02, 0.05, 0.1, 0.2, 0.3}) {
    const double step = 0.1 * eps0;  // = 0.05 * (2 eps0)
    std::vector<double> ws;
    for (double w = eps0; w <= 3.0 * eps0 + 1e-12; w += step) ws.push_back(w);
    LaxProblem base{1.0, eps0, 0.0, StateFamily::azimuthal, 0.0};
    const auto rows = find_roots_along_w(base, ws);
    double flip = 0.0;
    for (size_t k = 1; k < ws.size(); ++k)
      if (rows[k - 1].roots.n_pairs() == 2 && rows[k].roots.n_pairs() == 1) {
        flip = 0.5 * (ws[k - 1] + ws[k]);
        break;
      }
    require(flip > 0.0, "III->II flip found at eps0=" + std::to_string(eps0), detail);
    require(std::abs(flip - 2.0 * eps0) <= step + 1e-12,
            "flip within one grid step of 2*eps0 at eps0=" + std::to_string(eps0), detail);
    char buf[64];
    std::snprintf(buf, sizeof(buf), " %.3f->%.3f", 2.0 * eps0, flip);
    log += buf;
  }
  detail = "W transitions (expected->found):" + log;
  return true;
}

// ---------------------------------------------------------------------------
// 4. Oscillation amplitude vs the elliptic prediction, 2N = 2000.
//
// Deviations are measured in units of chiN (the curve's natural scale, on
// which the near-boundary 5% clause is meaningful: the predicted amplitude
// itself goes to zero there). At small widths, where finite-size wander is
// negligible, the strict 2%-of-value form is asserted as well.
bool criterion_4(std::string& detail) {
  const double eps0 = 0.1;
  double worst_rel = 0.0, worst_band = 0.0, worst_near = 0.0, worst_beyond = 0.0;
  for (double w : {0.3, 0.6, 0.9, 1.2, 1.5, 1.8, 2.1, 2.4, 2.7, 2.9, 3.05, 3.3, 3.6}) {
    const Trajectory tr = run_ideal(kPi, eps0, w, 1000, 200.0, 4096);
    const double amp = amplitude_steady(tr);
    double expect = 0.0;
    if (w < kPi) {
      LaxProblem p{1.0, eps0, w, StateFamily::azimuthal, kPi};
      expect = std::sqrt(analytic_roots_antipodal(p).r_plus());
    }
    if (w <= 1.0) worst_rel = std::max(worst_rel, std::abs(amp - expect) / expect);
    if (w <= 2.8) {
      worst_band = std::max(worst_band, std::abs(amp - expect));
    } else if (w < kPi + 0.25) {
      worst_near = std::max(worst_near, std::abs(amp - expect));
    } else {
      worst_beyond = std::max(worst_beyond, amp);
    }
  }
  require(worst_rel <= 0.02, "amplitude within 2% of value at small widths", detail);
  require(worst_band <= 0.02, "amplitude within 2% of chiN away from the boundary", detail);
  require(worst_near <= 0.05, "amplitude within 5% of chiN near W = pi", detail);
  require(worst_beyond <= 0.02, "dephased amplitude below 2% of chiN", detail);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "dev %.2f%% of value (small W); %.4f (band), %.4f (near), %.4f (beyond) x chiN",
                100 * worst_rel, worst_band, worst_near, worst_beyond);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 5. Sub-phase boundary at the critical splitting, both routes.
bool criterion_5(std::string& detail) {
  std::string log;
  for (double angle : {0.0, kPi / 2, 3 * kPi / 4}) {
    const double ec = critical_splitting(1.0, angle);

    // root route: R-/R+ switches through 1e-4 at the critical splitting
    double lo = 0.3 * ec, hi = 1.8 * ec;
    for (int it = 0; it < 48; ++it) {
      const double mid = 0.5 * (lo + hi);
      LaxProblem p{1.0, mid, 0.0, StateFamily::azimuthal, angle};
      const auto set = analytic_roots_small_w(p);
      const bool below_critical = set.n_pairs() == 2 && set.r_minus() / set.r_plus() > 1e-4;
      (below_critical ? lo : hi) = mid;
    }
    const double ec_roots = 0.5 * (lo + hi);
    require(std::abs(ec_roots - ec) / ec <= 0.01,
            "root-route crossing within 1% at angle=" + std::to_string(angle), detail);

    // trajectory route: the minimum of |Delta| dips to zero above the
    // critical splitting (tol_zero = 0.02 of the maximum)
    lo = 0.3 * ec;
    hi = 1.8 * ec;
    for (int it = 0; it < 9; ++it) {
      const double mid = 0.5 * (lo + hi);
      const Trajectory tr = run_ideal(angle, mid, 0.0, 128, 150.0, 4096);
      const auto m = trajectory_metrics(tr);
      const bool strictly_positive = m.min_over_max >= 0.02;
      (strictly_positive ? lo : hi) = mid;
    }
    const double ec_traj = 0.5 * (lo + hi);
    require(std::abs(ec_traj - ec) / ec <= 0.05,
            "trajectory-route crossing within 5% at angle=" + std::to_string(angle), detail);
    char buf[96];
    std::snprintf(buf, sizeof(buf), " [%.4f: roots %.4f, traj %.4f]", ec, ec_roots, ec_traj);
    log += buf;
  }
  detail = "critical splitting (expected: routes):" + log;
  return true;
}

// ---------------------------------------------------------------------------
// 6. Frequency scalings of the persistent oscillations.
bool criterion_6(std::string& detail) {
  // (a) antipodal, small width: omega ~ eps0^0.5 (both routes)
  std::vector<double> eps_a = {1e-3, 3.16e-3, 1e-2, 3.16e-2, 1e-1};
  std::vector<double> om_ana, om_traj;
  for (double e : eps_a) {
    LaxProblem p{1.0, e, 0.01, StateFamily::azimuthal, kPi};
    const EllipticOrderParameter sol(analytic_roots_antipodal(p));
    om_ana.push_back(2.0 * 2.0 * kPi / sol.period());  // |Delta| fundamental

    const double t_max = std::max(100.0, 14.0 * 0.5 * sol.period());
    const Trajectory tr = run_ideal(kPi, e, 0.01, 200, t_max, 8192);
    const auto w = extract_omega_osc(tr);
    require(w.has_value(), "oscillation detected at eps0=" + std::to_string(e), detail);
    om_traj.push_back(*w);
  }
  const double slope_a_ana = fit_loglog_slope(eps_a, om_ana);
  const double slope_a_traj = fit_loglog_slope(eps_a, om_traj);
  require(std::abs(slope_a_ana - 0.5) <= 0.05, "analytic sqrt scaling", detail);
  require(std::abs(slope_a_traj - 0.5) <= 0.05, "trajectory sqrt scaling", detail);

  // (b) zero angle beyond the critical splitting: omega ~ eps0
  std::vector<double> eps_b = {2.0, 3.16, 5.0, 7.9, 10.0};
  std::vector<double> om_b_ana, om_b_traj;
  for (double e : eps_b) {
    LaxProblem p{1.0, e, 0.01, StateFamily::azimuthal, 0.0};
    const EllipticOrderParameter sol(analytic_roots_small_w(p));
    om_b_ana.push_back(2.0 * 2.0 * kPi / sol.period());

    const Trajectory tr = run_ideal(0.0, e, 0.01, 200, 60.0, 8192);
    const auto w = extract_omega_osc(tr);
    require(w.has_value(), "oscillation detected at eps0=" + std::to_string(e), detail);
    om_b_traj.push_back(*w);
  }
  const double slope_b_ana = fit_loglog_slope(eps_b, om_b_ana);
  const double slope_b_traj = fit_loglog_slope(eps_b, om_b_traj);
  require(std::abs(slope_b_ana - 1.0) <= 0.1, "analytic linear scaling", detail);
  require(std::abs(slope_b_traj - 1.0) <= 0.1, "trajectory linear scaling", detail);

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "slopes: sqrt regime %.3f (ana) %.3f (traj); linear regime %.3f (ana) %.3f (traj)",
                slope_a_ana, slope_a_traj, slope_b_ana, slope_b_traj);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 7. Transient ringing of the constant phase decays as t^(-1/2).
bool criterion_7(std::string& detail) {
  const Trajectory tr = run_ideal(0.0, 0.0, 1.0, 1000, 200.0, 8192);
  const auto slope = fit_envelope_decay(tr, 8.0, 150.0);
  require(slope.has_value(), "envelope peaks found", detail);
  require(std::abs(*slope + 0.5) <= 0.1, "decay exponent -0.5 +- 0.1", detail);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "envelope exponent %.3f", *slope);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 8. Conservation suite on a closed run.
bool criterion_8(std::string& detail) {
  const Trajectory tr = run_ideal(kPi / 2, 0.1, 0.5, 500, 100.0, 512, 1e-10,
                                  StateFamily::azimuthal, /*snapshot_stride=*/32);
  double e_drift = 0.0, n_dev = 0.0;
  for (size_t i = 0; i < tr.times.size(); ++i) {
    e_drift = std::max(e_drift, std::abs(tr.energy[i] - tr.energy[0]) / std::abs(tr.energy[0]));
    n_dev = std::max(n_dev, std::abs(tr.mean_norm[i] - 1.0));
  }
  require(e_drift <= 1e-6, "energy conserved to 1e-6", detail);
  require(n_dev <= 1e-6, "spin norms conserved to 1e-6", detail);

  SplittingSpec ss;
  ss.eps0 = 0.1;
  ss.w = 0.5;
  ss.n_per_ensemble = 500;
  InitialStateSpec is;
  is.angle = kPi / 2;
  const SpinState st0 = prepare_initial_state(is, sample_splittings(ss));
  double q_drift = 0.0;
  for (const auto& snap : tr.snapshots) {
    for (double u : {1.37, 2.11, -1.83, 2.97, -3.41}) {
      const auto q0 = lax_squared_discrete(u, st0, 1.0 / 500);
      const auto qt = lax_squared_discrete(u, snap, 1.0 / 500);
      q_drift = std::max(q_drift, std::abs(qt - q0) / std::abs(q0));
    }
  }
  require(q_drift <= 1e-6, "spectral invariants conserved to 1e-6 at 5 probes", detail);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "drifts: energy %.1e, norm %.1e, Q %.1e", e_drift, n_dev,
                q_drift);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 9. Realistic cavity: oscillation-structure boundaries with paper parameters.
// The interaction-induced carrier chirp smears the line splitting of F[a],
// so the split-spectrum regimes are witnessed on the decay-compensated
// intensity s(t) = |a|^2 e^{gamma t}: phase III at the antipodal angle keeps
// both a persistent coherence level and a beat line (long record), and the
// dual-peak onset along the angle is the appearance of a discernible beat
// line over the pulse-limited record.
bool criterion_9(std::string& detail) {
  CavityParams cp;
  cp.n_sim = 500;
  const double chin = cp.chi_n_bare();
  const double eps0 = 0.1 * chin;
  const double floor = 0.5 * eps0;

  // (a) persistent-oscillation disappearance along W at the antipodal angle
  EvolutionConfig ec_long;
  ec_long.t_max = 150e-6;
  ec_long.n_samples = 8192;
  ec_long.dt_initial = 1e-9;
  const std::vector<double> ws = {0.3, 0.6, 0.9, 1.2, 1.35, 1.5, 1.65, 1.8, 1.95, 2.2};
  double last_with = 0.0, first_without = 0.0;
  for (double w : ws) {
    const Trajectory tr = run_cavity_experiment(kPi, eps0, w * chin, cp, ec_long);
    const auto m = analyze_cavity_spectrum(tr, floor, 3e-4);
    const bool osc = m.pair_detected && m.mean_level >= 0.25;
    if (osc) {
      last_with = w;
    } else if (first_without == 0.0 && last_with > 0.0) {
      first_without = w;
    }
  }
  require(last_with > 0.0 && first_without > last_with, "I/III flip found along W", detail);
  const double lo_a = kPi / 2 * 0.85, hi_a = kPi / 2 * 1.15;
  require(last_with < hi_a && first_without > lo_a,
          "I/III transition bracket intersects pi/2 +- 15%", detail);

  // (b) beat onset along the opening angle
  EvolutionConfig ec_short;
  ec_short.t_max = 40e-6;
  ec_short.n_samples = 4096;
  ec_short.dt_initial = 1e-9;
  const std::vector<double> fs = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  double last_single = 0.0, first_dual = 0.0;
  for (double f : fs) {
    const Trajectory tr = run_cavity_experiment(f * kPi, eps0, 0.1 * chin, cp, ec_short);
    const bool dual = analyze_cavity_spectrum(tr, floor, 1e-3).pair_detected;
    if (!dual) {
      last_single = f * kPi;
    } else if (first_dual == 0.0) {
      first_dual = f * kPi;
    }
  }
  require(first_dual > 0.0, "dual-peak onset found along the angle", detail);
  const double lo_b = kPi / 2 * 0.8, hi_b = kPi / 2 * 1.2;
  require(last_single < hi_b + 1e-9 && first_dual > lo_b,
          "single->dual bracket intersects pi/2 +- 20%", detail);

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "W flip in (%.2f, %.2f] vs pi/2 = 1.571; angle onset in (%.2f, %.2f] rad",
                last_with, first_without, last_single, first_dual);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 10. Engine cross-validation on the phase-map grid.
bool criterion_10(std::string& detail) {
  const int na = 20, nw = 20;
  const double eps0 = 0.1;
  std::vector<double> ws;
  for (int j = 0; j < nw; ++j) ws.push_back(0.1 + (4.0 - 0.1) * j / (nw - 1));

  std::vector<Phase> lax(na * nw);
  for (int i = 0; i < na; ++i) {
    const double angle = -kPi + 2.0 * kPi * i / (na - 1);
    LaxProblem base{1.0, eps0, 0.0, StateFamily::azimuthal, angle};
    const auto rows = find_roots_along_w(base, ws);
    for (int j = 0; j < nw; ++j) lax[i * nw + j] = classify_from_roots(rows[j].roots).phase;
  }

  auto is_boundary = [&](int i, int j) {
    const Phase c = lax[i * nw + j];
    for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const int ii = i + di, jj = j + dj;
      if (ii < 0 || ii >= na || jj < 0 || jj >= nw) continue;
      if (lax[ii * nw + jj] != c) return true;
    }
    return false;
  };

  int compared = 0, agreed = 0;
  for (int i = 0; i < na; ++i) {
    const double angle = -kPi + 2.0 * kPi * i / (na - 1);
    for (int j = 0; j < nw; ++j) {
      if (is_boundary(i, j)) continue;
      // 450 time units: long enough for the constant phase's 1/sqrt(t)
      // ringing to decay below the oscillation threshold
      const Trajectory tr = run_ideal(angle, eps0, ws[j], 300, 450.0, 4096, 1e-7);
      const Phase pt = classify_trajectory(tr).phase;
      ++compared;
      if (pt == lax[i * nw + j]) ++agreed;
    }
  }
  require(compared > 100, "enough non-boundary cells", detail);
  const double frac = double(agreed) / compared;
  require(frac >= 0.90, "agreement >= 90%", detail);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "agreement %d/%d = %.1f%%", agreed, compared, 100.0 * frac);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 11. Special-function and spectral identities.
bool criterion_11(std::string& detail) {
  require(std::abs(elliptic_K(0.0) - kPi / 2) < 1e-12, "K(0) = pi/2", detail);
  for (double u : {0.3, 1.1, 2.9}) {
    require(std::abs(jacobi_sn(u, 0.0) - std::sin(u)) < 1e-12, "sn(u,0) = sin u", detail);
    require(std::abs(jacobi_sn(u, 1.0) - std::tanh(u)) < 1e-12, "sn(u,1) = tanh u", detail);
  }
  for (double m : {-2.0, -0.5, 0.25, 0.9})
    require(std::abs(jacobi_sn(elliptic_K(m), m) - 1.0) < 1e-10, "sn(K(m),m) = 1", detail);

  // windowed Parseval at 1e-10 relative
  const int n = 1024;
  std::vector<std::complex<double>> x(n);
  for (int k = 0; k < n; ++k)
    x[k] = {std::sin(0.37 * k) + 0.2 * std::sin(1.7 * k), 0.3 * std::cos(0.11 * k)};
  std::complex<double> mean = std::accumulate(x.begin(), x.end(), std::complex<double>(0.0));
  mean /= double(n);
  double t_power = 0.0;
  for (int k = 0; k < n; ++k) {
    const double wnd = 0.5 * (1.0 - std::cos(2.0 * kPi * k / (n - 1)));
    t_power += std::norm((x[k] - mean) * wnd);
  }
  const auto sp = spectrum(x, 0.01);
  double f_power = 0.0;
  for (double m : sp.magnitude) f_power += m * m;
  f_power /= n;
  require(std::abs(t_power - f_power) / t_power < 1e-10, "windowed Parseval identity", detail);
  detail = "elliptic identities, quarter periods and Parseval all inside tolerances";
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "analytic-root reproduction along W at the antipodal angle", criterion_1},
      {2, "phase-map topology and the II/I boundary law", criterion_2},
      {3, "III/II transition at W = 2*eps0", criterion_3},
      {4, "oscillation amplitude vs elliptic prediction (2N = 2000)", criterion_4},
      {5, "sub-phase boundary at the critical splitting", criterion_5},
      {6, "oscillation-frequency scalings (sqrt and linear regimes)", criterion_6},
      {7, "transient-ringing decay exponent -1/2", criterion_7},
      {8, "closed-run conservation: energy, norms, spectral invariants", criterion_8},
      {9, "cavity realization: oscillation-structure boundaries", criterion_9},
      {10, "lax vs trajectory phase-map agreement", criterion_10},
      {11, "special-function and spectral identities", criterion_11},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const CheckFailure&) {
      ok = false;
    } catch (const std::exception& e) {
      detail += std::string("exception: ") + e.what();
      ok = false;
    }
    std::printf("[%2d] %s  %s%s%s\n", c.id, ok ? "PASS" : "FAIL", c.name,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%d/%zu acceptance criteria passed\n", int(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

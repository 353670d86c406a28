#include "bcsq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bcsq {

void EvolutionConfig::validate() const {
  if (!(t_max > 0.0)) throw std::invalid_argument("EvolutionConfig: t_max must be > 0");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("EvolutionConfig: tolerances must be > 0");
  if (n_samples < 2) throw std::invalid_argument("EvolutionConfig: n_samples must be >= 2");
  if (gamma < 0.0) throw std::invalid_argument("EvolutionConfig: gamma must be >= 0");
}

std::vector<double> Trajectory::abs_delta() const {
  std::vector<double> out(delta.size());
  for (size_t i = 0; i < delta.size(); ++i) out[i] = std::abs(delta[i]);
  return out;
}

namespace {

// Flat layout [sx..., sy..., sz...] used by the integrator.
struct Rhs {
  const std::vector<double>& eps;
  const std::vector<double>& w;
  double chi_signed;  // -chi attractive, +chi repulsive
  double gamma;
  int m;  // spin count

  void operator()(const double* y, double* dy) const {
    const double* x = y;
    const double* yy = y + m;
    const double* z = y + 2 * m;
    double sx_w = 0.0, sy_w = 0.0;
    for (int j = 0; j < m; ++j) {
      sx_w += w[j] * x[j];
      sy_w += w[j] * yy[j];
    }
    const double hx0 = chi_signed * sx_w;
    const double hy0 = chi_signed * sy_w;
    for (int j = 0; j < m; ++j) {
      const double bx = hx0 * w[j];
      const double by = hy0 * w[j];
      const double bz = 2.0 * eps[j];
      dy[j] = by * z[j] - bz * yy[j];
      dy[m + j] = bz * x[j] - bx * z[j];
      dy[2 * m + j] = bx * yy[j] - by * x[j];
    }
    if (gamma > 0.0) {
      const double half_g = 0.5 * gamma;
      for (int j = 0; j < m; ++j) {
        dy[j] -= half_g * x[j];
        dy[m + j] -= half_g * yy[j];
        dy[2 * m + j] -= gamma * (z[j] + 1.0);
      }
    }
  }
};

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

void bloch_rhs(const SpinState& state, const ModelParams& params, double gamma,
               SpinState& deriv) {
  params.validate();
  const int m = state.size();
  deriv = state;
  std::vector<double> y(3 * m), dy(3 * m);
  std::copy(state.sx.begin(), state.sx.end(), y.begin());
  std::copy(state.sy.begin(), state.sy.end(), y.begin() + m);
  std::copy(state.sz.begin(), state.sz.end(), y.begin() + 2 * m);
  const double cs = params.sign == SignConvention::attractive ? -params.chi : params.chi;
  Rhs rhs{state.eps, state.g_weight, cs, gamma, m};
  rhs(y.data(), dy.data());
  std::copy(dy.begin(), dy.begin() + m, deriv.sx.begin());
  std::copy(dy.begin() + m, dy.begin() + 2 * m, deriv.sy.begin());
  std::copy(dy.begin() + 2 * m, dy.end(), deriv.sz.begin());
}

double energy(const SpinState& state, const ModelParams& params) {
  const int m = state.size();
  double sx_w = 0.0, sy_w = 0.0, ez = 0.0;
  for (int j = 0; j < m; ++j) {
    sx_w += state.g_weight[j] * state.sx[j];
    sy_w += state.g_weight[j] * state.sy[j];
    ez += state.eps[j] * state.sz[j];
  }
  const double s_minus_sq = 0.25 * (sx_w * sx_w + sy_w * sy_w);
  const double s = params.sign == SignConvention::attractive ? -1.0 : 1.0;
  return s * params.chi * s_minus_sq + ez;
}

std::complex<double> pairing_amplitude(const SpinState& state, double chi) {
  double re = 0.0, im = 0.0;
  for (int j = 0; j < state.size(); ++j) {
    re += state.g_weight[j] * state.sx[j];
    im -= state.g_weight[j] * state.sy[j];
  }
  return {0.5 * chi * re, 0.5 * chi * im};
}

double differential_inversion(const SpinState& state) {
  double jz = 0.0;
  for (int j = 0; j < state.size(); ++j) jz += state.ensemble_sign(j) * state.sz[j];
  return 0.5 * jz;
}

Trajectory integrate(const SpinState& state0, const ModelParams& params,
                     const EvolutionConfig& config) {
  params.validate();
  config.validate();
  const int m = state0.size();
  if (m == 0) throw std::invalid_argument("integrate: empty state");

  const double cs = params.sign == SignConvention::attractive ? -params.chi : params.chi;
  Rhs rhs{state0.eps, state0.g_weight, cs, config.gamma, m};

  const int nv = 3 * m;
  std::vector<double> y(nv), ynew(nv), yerr(nv);
  std::vector<double> k1(nv), k2(nv), k3(nv), k4(nv), k5(nv), k6(nv), k7(nv), ytmp(nv);
  std::copy(state0.sx.begin(), state0.sx.end(), y.begin());
  std::copy(state0.sy.begin(), state0.sy.end(), y.begin() + m);
  std::copy(state0.sz.begin(), state0.sz.end(), y.begin() + 2 * m);

  Trajectory traj;
  traj.chi = params.chi;
  traj.chi_n = params.chi_n();
  traj.gamma = config.gamma;
  traj.snapshot_stride = config.snapshot_stride;
  traj.times.reserve(config.n_samples);
  traj.delta.reserve(config.n_samples);

  SpinState snap = state0;  // reused buffer for sampling
  auto record = [&](double t, int sample_idx) {
    std::copy(y.begin(), y.begin() + m, snap.sx.begin());
    std::copy(y.begin() + m, y.begin() + 2 * m, snap.sy.begin());
    std::copy(y.begin() + 2 * m, y.end(), snap.sz.begin());
    traj.times.push_back(t);
    traj.delta.push_back(pairing_amplitude(snap, params.chi));
    traj.jz.push_back(differential_inversion(snap));
    traj.energy.push_back(energy(snap, params));
    double nsum = 0.0;
    for (int j = 0; j < m; ++j) nsum += snap.norm(j);
    traj.mean_norm.push_back(nsum / m);
    if (config.snapshot_stride > 0 && sample_idx % config.snapshot_stride == 0) {
      traj.snapshot_times.push_back(t);
      traj.snapshots.push_back(snap);
    }
  };

  const double dt_out = config.t_max / (config.n_samples - 1);
  record(0.0, 0);

  double t = 0.0;
  double h = std::min(config.dt_initial, dt_out);
  rhs(y.data(), k1.data());  // FSAL: k1 always holds f(y)

  for (int is = 1; is < config.n_samples; ++is) {
    const double t_target = is * dt_out;
    while (t < t_target - 1e-12 * config.t_max) {
      const double hs = std::min(h, t_target - t);
      if (hs < 1e-14 * config.t_max) {
        std::ostringstream msg;
        msg << "integrate: step size underflow at t = " << t;
        throw std::runtime_error(msg.str());
      }
      for (int i = 0; i < nv; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
      rhs(ytmp.data(), k2.data());
      for (int i = 0; i < nv; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
      rhs(ytmp.data(), k3.data());
      for (int i = 0; i < nv; ++i)
        ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      rhs(ytmp.data(), k4.data());
      for (int i = 0; i < nv; ++i)
        ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      rhs(ytmp.data(), k5.data());
      for (int i = 0; i < nv; ++i)
        ytmp[i] =
            y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      rhs(ytmp.data(), k6.data());
      for (int i = 0; i < nv; ++i)
        ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      rhs(ynew.data(), k7.data());

      double err_sq = 0.0;
      for (int i = 0; i < nv; ++i) {
        const double e =
            hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale =
            config.abs_tol + config.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        const double r = e / scale;
        err_sq += r * r;
      }
      const double err = std::sqrt(err_sq / nv);

      const bool accepted = err <= 1.0;
      if (accepted) {
        t += hs;
        std::swap(y, ynew);
        std::swap(k1, k7);  // FSAL
      }
      const double factor =
          err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
      const double h_new = hs * factor;
      // A step clamped to the sample boundary must not shrink the cruise step.
      if (accepted && hs < h)
        h = std::max(h, h_new);
      else
        h = h_new;
    }
    t = t_target;
    record(t, is);
  }
  return traj;
}

}  // namespace bcsq

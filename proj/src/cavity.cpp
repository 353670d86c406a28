#include "bcsq/cavity.hpp"

#include <cmath>
#include <stdexcept>

namespace bcsq {

double CavityParams::chi_pair() const { return g * g / std::abs(delta_c); }

double CavityParams::chi_n_bare() const { return chi_pair() * n_true; }

double CavityParams::adiabaticity() const {
  return std::abs(delta_c) / (g * std::sqrt(2.0 * n_true));
}

void CavityParams::validate() const {
  if (!(g > 0.0)) throw std::invalid_argument("CavityParams: g must be > 0");
  if (gamma < 0.0) throw std::invalid_argument("CavityParams: gamma must be >= 0");
  if (delta_c == 0.0) throw std::invalid_argument("CavityParams: delta_c must be nonzero");
  if (!(kappa > 0.0)) throw std::invalid_argument("CavityParams: kappa must be > 0");
  if (n_sim < 1) throw std::invalid_argument("CavityParams: n_sim must be >= 1");
  if (!(n_true >= n_sim)) throw std::invalid_argument("CavityParams: n_true must be >= n_sim");
  if (adiabaticity() < 1.0)
    throw std::invalid_argument("CavityParams: outside the adiabatic-elimination regime");
}

std::vector<double> coupling_weights(int n_total, double k_d) {
  if (n_total < 1) throw std::invalid_argument("coupling_weights: n_total must be >= 1");
  std::vector<double> w(n_total);
  for (int j = 0; j < n_total; ++j) w[j] = std::cos(k_d * (j + 1));
  return w;
}

namespace {

// Lattice site (1-based) of storage slot j under the chosen ordering.
// Storage is ensemble-major: [0,N) = + ensemble, [N,2N) = -.
int lattice_site(int j, int n, SiteOrdering ordering) {
  if (ordering == SiteOrdering::blocked) return j + 1;
  return j < n ? 2 * j + 1 : 2 * (j - n) + 2;
}

}  // namespace

SpinState prepare_cavity_state(double dphi0, const CavityParams& params,
                               std::span<const double> splittings) {
  params.validate();
  if (splittings.size() % 2 != 0 || splittings.empty())
    throw std::invalid_argument("prepare_cavity_state: need 2N splittings");
  const int total = static_cast<int>(splittings.size());
  const int n = total / 2;
  const double kd = params.k_d();

  SpinState st;
  st.n_per_ensemble = n;
  st.sx.resize(total);
  st.sy.resize(total);
  st.sz.resize(total);
  st.eps.assign(splittings.begin(), splittings.end());
  st.g_weight.resize(total);

  const double ch = std::cos(dphi0 / 2.0);
  const double sh = std::sin(dphi0 / 2.0);
  for (int j = 0; j < total; ++j) {
    const int site = lattice_site(j, n, params.ordering);
    const double w = std::cos(kd * site);
    const double theta = 0.5 * 3.14159265358979323846 * w;
    const double sign = st.ensemble_sign(j);
    st.g_weight[j] = w;
    st.sx[j] = std::sin(theta) * ch;
    st.sy[j] = sign * std::sin(theta) * sh;
    st.sz[j] = -std::cos(theta);
  }
  return st;
}

std::complex<double> intracavity_field(const SpinState& state, const CavityParams& params) {
  std::complex<double> sum = 0.0;
  for (int j = 0; j < state.size(); ++j) {
    // σ⁻ = (σˣ - iσʸ)/2, weighted by g_j = g·w_j
    sum += params.g * state.g_weight[j] *
           std::complex<double>(0.5 * state.sx[j], -0.5 * state.sy[j]);
  }
  const std::complex<double> denom(2.0 * params.delta_c, -params.kappa);
  const double rescale = params.n_true / params.n_sim;
  return -2.0 / denom * sum * rescale;
}

Trajectory run_cavity_experiment(double dphi0, double eps0, double w,
                                 const CavityParams& params, EvolutionConfig config) {
  params.validate();
  SplittingSpec sspec;
  sspec.kind = SplittingKind::equally_spaced;
  sspec.eps0 = eps0;
  sspec.w = w;
  sspec.n_per_ensemble = params.n_sim;
  const auto eps = sample_splittings(sspec);

  SpinState st = prepare_cavity_state(dphi0, params, eps);

  ModelParams mp;
  mp.chi = params.chi_pair() * (params.n_true / params.n_sim);  // χ_sim·n_sim = χ·n_true
  mp.n_per_ensemble = params.n_sim;
  mp.eps0 = eps0;
  mp.w = w;
  mp.sign = SignConvention::attractive;

  config.gamma = params.gamma;
  Trajectory traj = integrate(st, mp, config);
  traj.angle = dphi0;
  traj.chi_n = params.chi_n_bare();  // report against the bare collective scale

  // a(t) is linear in the weighted coherence: recover it from Δ(t).
  const std::complex<double> denom(2.0 * params.delta_c, -params.kappa);
  const std::complex<double> pref =
      -2.0 / denom * params.g * (params.n_true / params.n_sim) / mp.chi;
  traj.cavity_field.resize(traj.delta.size());
  for (size_t i = 0; i < traj.delta.size(); ++i) traj.cavity_field[i] = pref * traj.delta[i];
  return traj;
}

}  // namespace bcsq

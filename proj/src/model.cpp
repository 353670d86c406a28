#include "bcsq/model.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bcsq {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void ModelParams::validate() const {
  if (!(chi > 0.0)) throw std::invalid_argument("ModelParams: chi must be > 0");
  if (n_per_ensemble < 1) throw std::invalid_argument("ModelParams: n_per_ensemble must be >= 1");
  if (w < 0.0) throw std::invalid_argument("ModelParams: w must be >= 0");
  if (eps0 < 0.0) throw std::invalid_argument("ModelParams: eps0 must be >= 0");
}

double SpinState::norm(int j) const {
  return std::sqrt(sx[j] * sx[j] + sy[j] * sy[j] + sz[j] * sz[j]);
}

bool SpinState::homogeneous_weights() const {
  for (double w : g_weight)
    if (w != 1.0) return false;
  return true;
}

std::vector<double> sample_splittings(const SplittingSpec& spec) {
  if (spec.n_per_ensemble < 1) throw std::invalid_argument("sample_splittings: N must be >= 1");
  if (spec.w < 0.0) throw std::invalid_argument("sample_splittings: W must be >= 0");
  const int n = spec.n_per_ensemble;
  std::vector<double> eps;
  eps.reserve(2 * n);

  auto fill_ensemble = [&](double center) {
    if (spec.w == 0.0) {
      eps.insert(eps.end(), n, center);
      return;
    }
    switch (spec.kind) {
      case SplittingKind::equally_spaced: {
        // Midpoint grid of [center - w/4, center + w/4] in n cells. The
        // offsets are pairwise symmetric, so the ensemble mean is exactly
        // the center.
        const double half = spec.w / 4.0;
        for (int k = 0; k < n; ++k) {
          const double offset = half * (2.0 * k + 1.0 - n) / n;
          eps.push_back(center + offset);
        }
        break;
      }
      case SplittingKind::uniform_random: {
        std::mt19937_64 rng(spec.seed ^ (center < 0 ? 0x9e3779b97f4a7c15ull : 0ull));
        std::uniform_real_distribution<double> dist(center - spec.w / 4.0, center + spec.w / 4.0);
        for (int k = 0; k < n; ++k) eps.push_back(dist(rng));
        break;
      }
    }
  };

  fill_ensemble(+spec.eps0 / 2.0);
  fill_ensemble(-spec.eps0 / 2.0);
  return eps;
}

SpinState prepare_initial_state(const InitialStateSpec& spec,
                                std::span<const double> splittings,
                                double chi) {
  if (splittings.empty() || splittings.size() % 2 != 0)
    throw std::invalid_argument("prepare_initial_state: need 2N splittings");
  if (spec.family == StateFamily::cavity_realistic)
    throw std::invalid_argument(
        "prepare_initial_state: cavity_realistic states are prepared by the cavity module");
  if (std::abs(spec.angle) > kPi + 1e-12)
    throw std::invalid_argument("prepare_initial_state: angle outside [-pi, pi]");

  if (spec.family == StateFamily::bcs_ground)
    return bcs_ground_state(chi, splittings, spec.gap);

  const int total = static_cast<int>(splittings.size());
  const int n = total / 2;
  SpinState st;
  st.n_per_ensemble = n;
  st.sx.resize(total);
  st.sy.assign(total, 0.0);
  st.sz.assign(total, 0.0);
  st.eps.assign(splittings.begin(), splittings.end());
  st.g_weight.assign(total, 1.0);

  const double c = std::cos(spec.angle / 2.0);
  const double s = std::sin(spec.angle / 2.0);
  for (int j = 0; j < total; ++j) {
    const double sign = st.ensemble_sign(j);
    st.sx[j] = c;
    if (spec.family == StateFamily::azimuthal) {
      st.sy[j] = sign * s;
    } else {  // elevation
      st.sz[j] = sign * s;
    }
  }
  return st;
}

namespace {

// (χ/2) Σ_j 1/sqrt(Δ²+ε_j²) - 1; strictly decreasing in Δ on (0, ∞).
double gap_residual(double delta, double chi, std::span<const double> eps) {
  double s = 0.0;
  for (double e : eps) s += 1.0 / std::sqrt(delta * delta + e * e);
  return 0.5 * chi * s - 1.0;
}

}  // namespace

double solve_gap(double chi, std::span<const double> splittings) {
  if (!(chi > 0.0)) throw std::invalid_argument("solve_gap: chi must be > 0");
  if (splittings.empty()) throw std::invalid_argument("solve_gap: empty splittings");

  const double total = static_cast<double>(splittings.size());
  double hi = chi * total;  // residual < 0 here: (χ/2)·2N/Δ - 1 < 0 for Δ > χN

  // Only the trivial solution exists when the Δ→0⁺ limit of the residual is
  // non-positive (no ε_j = 0 pole and weak coupling).
  bool has_zero = false;
  for (double e : splittings)
    if (e == 0.0) has_zero = true;
  if (!has_zero && gap_residual(1e-300, chi, splittings) <= 0.0) return 0.0;

  double lo = 0.0;
  if (gap_residual(hi, chi, splittings) > 0.0) {
    std::ostringstream msg;
    msg << "solve_gap: no sign change in bracket (0, " << hi << "]";
    throw std::runtime_error(msg.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap_residual(mid, chi, splittings) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-10 * hi) return 0.5 * (lo + hi);
  }
  std::ostringstream msg;
  msg << "solve_gap: bisection failed to converge, bracket [" << lo << ", " << hi << "]";
  throw std::runtime_error(msg.str());
}

SpinState bcs_ground_state(double chi, std::span<const double> splittings,
                           std::optional<double> gap) {
  const double delta = gap ? *gap : solve_gap(chi, splittings);
  if (!(delta > 0.0))
    throw std::runtime_error(
        "bcs_ground_state: gap is zero (normal state); transverse phases undefined");

  const int total = static_cast<int>(splittings.size());
  SpinState st;
  st.n_per_ensemble = total / 2;
  st.sx.resize(total);
  st.sy.assign(total, 0.0);
  st.sz.resize(total);
  st.eps.assign(splittings.begin(), splittings.end());
  st.g_weight.assign(total, 1.0);
  for (int j = 0; j < total; ++j) {
    const double r = std::sqrt(delta * delta + st.eps[j] * st.eps[j]);
    st.sx[j] = delta / r;
    st.sz[j] = st.eps[j] / r;
  }
  return st;
}

}  // namespace bcsq

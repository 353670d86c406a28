#pragma once

#include <complex>
#include <vector>

#include "bcsq/model.hpp"

namespace bcsq {

/// Integration controls. Times are in whatever unit 1/chi carries (1/(χN)
/// for the ideal model with χN = 1, seconds for cavity runs).
struct EvolutionConfig {
  double t_max = 200.0;
  double dt_initial = 1e-3;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  int n_samples = 4096;       // uniformly spaced output instants, t=0 included
  int snapshot_stride = 0;    // record full spin state every k-th sample; 0 = off
  double gamma = 0.0;         // spontaneous-emission rate, >= 0

  void validate() const;
};

/**
 * Sampled run record. delta is the weighted pairing amplitude
 * Δ(t) = χ Σ_j w_j σ⁻_j(t); jz the differential inversion
 * (Σ_{j∈+} σᶻ_j - Σ_{j∈-} σᶻ_j)/2. energy and mean_norm are integrator
 * diagnostics (both conserved for γ = 0 and homogeneous weights).
 * cavity_field stays empty unless filled by the cavity module.
 */
struct Trajectory {
  std::vector<double> times;
  std::vector<std::complex<double>> delta;
  std::vector<double> jz;
  std::vector<double> energy;
  std::vector<double> mean_norm;
  std::vector<std::complex<double>> cavity_field;

  int snapshot_stride = 0;
  std::vector<double> snapshot_times;
  std::vector<SpinState> snapshots;

  // run context, carried for post-processing and file metadata
  double chi = 1.0;
  double chi_n = 1.0;
  double gamma = 0.0;
  double angle = 0.0;

  std::vector<double> abs_delta() const;
  double dt_sample() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/**
 * Torque form of the mean-field equations: dσ⃗_j/dt = B⃗_j × σ⃗_j with
 *   B⃗_j = (∓χ g_j Σ_k g_k σˣ_k, ∓χ g_j Σ_k g_k σʸ_k, 2ε_j)
 * (upper sign = attractive convention; collective sums keep the self term).
 * γ > 0 adds the spontaneous-emission drift
 *   dσ^{x,y}_j -= (γ/2) σ^{x,y}_j,  dσᶻ_j -= γ(σᶻ_j + 1).
 */
void bloch_rhs(const SpinState& state, const ModelParams& params, double gamma,
               SpinState& deriv);

/// Mean-field energy ∓χ|Σ_j g_j σ⁻_j|² + Σ_j ε_j σᶻ_j (sign per convention).
double energy(const SpinState& state, const ModelParams& params);

/// Pairing amplitude χ Σ_j w_j σ⁻_j of a state.
std::complex<double> pairing_amplitude(const SpinState& state, double chi);

/// Differential inversion (Σ_+ σᶻ - Σ_- σᶻ)/2.
double differential_inversion(const SpinState& state);

/**
 * Adaptive Dormand-Prince 5(4) integration of the Bloch equations from
 * state0, sampling n_samples instants uniformly over [0, t_max].
 * Deterministic for fixed inputs. Throws std::runtime_error naming the
 * failure time if the step size underflows.
 */
Trajectory integrate(const SpinState& state0, const ModelParams& params,
                     const EvolutionConfig& config);

}  // namespace bcsq

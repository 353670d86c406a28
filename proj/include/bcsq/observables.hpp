#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "bcsq/dynamics.hpp"
#include "bcsq/lax.hpp"

namespace bcsq {

/**
 * Hann-windowed DFT magnitudes with simple prominence-based peak detection.
 * Real input yields the one-sided spectrum (bins 0..n/2); complex input
 * yields the full circle in standard DFT order (frequencies ascending from
 * 0 to 2π/dt·(n-1)/n, upper half aliasing the negative frequencies).
 */
struct SpectrumResult {
  std::vector<double> frequency;   // angular frequency, nonnegative ascending
  std::vector<double> magnitude;

  struct Peak {
    double frequency = 0.0;
    double height = 0.0;
    double width = 0.0;            // full width at half prominence
  };
  std::vector<Peak> peaks;         // sorted by height, descending

  bool two_sided = false;
  int n = 0;
  double dt = 0.0;

  /// Signed frequency mapping for two-sided spectra (upper half -> negative).
  double signed_frequency(double freq) const;
};

struct SpectrumOptions {
  bool remove_mean = true;
  double peak_prominence_rel = 0.05;  // relative to the maximum magnitude
  int min_peak_distance_bins = 2;
};

SpectrumResult spectrum(const std::vector<double>& series, double dt,
                        const SpectrumOptions& opts = {});
SpectrumResult spectrum(const std::vector<std::complex<double>>& series, double dt,
                        const SpectrumOptions& opts = {});

/// max - min of |Δ| over the sample index window [lo, hi).
double amplitude(const Trajectory& traj, int lo, int hi);

/// Convenience: window = trailing fraction of the record (default last half).
double amplitude(const Trajectory& traj, double trailing_fraction = 0.5);

/**
 * Finite-size-robust steady amplitude: the window is split into n_chunks
 * blocks and the median of the per-block max-min is returned. The global
 * extremes estimator rides on slow finite-N amplitude wander (a positive
 * bias of order χN/sqrt(2N)); the per-block median reads the typical cycle
 * instead and coincides with max-min in the continuum limit.
 */
double amplitude_steady(const Trajectory& traj, double trailing_fraction = 0.5,
                        int n_chunks = 16);
double amplitude_steady(const Trajectory& traj, int lo, int hi, int n_chunks);

struct OmegaOscOptions {
  double trailing_fraction = 0.75;        // analysis window at the end of the record
  double min_relative_oscillation = 1e-3; // std/mean gate; below it -> no peak
  double peak_prominence_rel = 0.1;
  int skip_dc_bins = 2;
};

/**
 * Dominant oscillation frequency of a real positive series (|Δ| or |a|²):
 * mean-subtracted, Hann-windowed spectrum peak with parabolic sub-bin
 * interpolation. Returns nullopt when no appreciable oscillation exists.
 * Convention: this is the fundamental of |Δ| itself (for the elliptic
 * solution, |Δ| repeats at half the sn period).
 */
std::optional<double> extract_omega_osc(const std::vector<double>& abs_series, double dt,
                                        const OmegaOscOptions& opts = {});
std::optional<double> extract_omega_osc(const Trajectory& traj,
                                        const OmegaOscOptions& opts = {});

struct ClassifyThresholds {
  double tol_I = 0.05;          // mean|Δ| below tol_I·ref -> phase I
  double tol_II = 0.05;         // relative oscillation below tol_II -> phase II
  double tol_zero = 0.02;       // min|Δ| below tol_zero·max|Δ| -> IIIb
  double persist_ratio = 0.8;   // late/mid amplitude ratio below this -> decaying -> II
};

/**
 * Finite-time phase classification over the last quarter of the record.
 * ref is max(|Δ(0)|, χN·|cos(angle/2)|), floored at χN when both are small
 * (near-antipodal states start with vanishing coherence but reach order-χN
 * amplitudes in phase III). An oscillation only counts as phase III when it
 * persists: the constant phase rings at the gap frequency with a 1/sqrt(t)
 * envelope, so its late-window amplitude falls below persist_ratio times
 * the mid-window one, while true persistent oscillations hold steady.
 * Requires the record to span at least 100/χN.
 */
PhaseLabel classify_trajectory(const Trajectory& traj,
                               const ClassifyThresholds& thresholds = {});

/// Summary metrics extracted from a trajectory's steady window.
struct TrajectoryMetrics {
  double amplitude = 0.0;           // max-min of |Δ| over the window
  double mean_abs_delta = 0.0;
  double min_over_max = 0.0;        // min|Δ|/max|Δ| over the window
  std::optional<double> omega_osc;
  std::optional<double> decay_exponent;  // envelope power law, fitted for phase II
  double jz_max = 0.0;                   // max_t |J_z|
  PhaseLabel label;
};

TrajectoryMetrics trajectory_metrics(const Trajectory& traj,
                                     const ClassifyThresholds& thresholds = {});

/**
 * Power-law exponent of the oscillation envelope of ||Δ(t)| - Δ_∞| over
 * [t_lo, t_hi]: least-squares slope of log(peak) vs log(t) through the
 * local maxima. Δ_∞ is estimated from the trailing tenth of the record.
 * Returns nullopt with fewer than four envelope peaks.
 */
std::optional<double> fit_envelope_decay(const Trajectory& traj, double t_lo, double t_hi);

}  // namespace bcsq

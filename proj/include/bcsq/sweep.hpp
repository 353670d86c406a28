#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcsq/cavity.hpp"
#include "bcsq/lax.hpp"
#include "bcsq/observables.hpp"

namespace bcsq {

/// One sweep axis. Axis values override the like-named fixed parameter.
struct SweepAxis {
  std::string param;  // "angle" | "w_over_chin" | "eps0_over_chin"
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  bool log_spacing = false;

  std::vector<double> values() const;
};

/// Trajectory-engine knobs (ideal model, χN = 1 units).
struct TrajectoryEngineConfig {
  int n_per_ensemble = 200;
  double t_max = 150.0;
  int n_samples = 2048;
  double gamma_over_chin = 0.0;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
};

/// Cavity-engine knobs (SI units internally; the grid axes stay in units of
/// the bare χN).
struct CavityEngineConfig {
  int n_sim = 500;
  double t_max_us = 40.0;
  int n_samples = 4096;
  double omega_floor_rel = 0.5;      // beat floor, relative to eps0
  double beat_threshold_rel = 1e-3;  // beat height per sample marking the split regime
  double prominence_rel = 0.02;
};

struct SweepSpec {
  int schema_version = 1;
  std::string engine;  // "lax" | "trajectory" | "cavity"
  StateFamily family = StateFamily::azimuthal;
  std::vector<SweepAxis> axes;  // 1 or 2

  // fixed parameters; an axis with the same name takes precedence
  std::optional<double> angle;
  std::optional<double> w_over_chin;
  std::optional<double> eps0_over_chin;

  TrajectoryEngineConfig trajectory;
  CavityEngineConfig cavity;

  std::string output;  // path prefix for .csv / .manifest.json
  int workers = 0;     // 0 -> BCSQ_WORKERS env or hardware concurrency
  std::uint64_t seed = 0x5eedULL;

  int n_cells() const;
  void validate() const;
  std::string canonical_json() const;
  std::uint64_t content_hash() const;
};

/// Parses and validates a JSON sweep config; unknown keys are rejected with
/// the offending path.
SweepSpec parse_sweep_spec_json(const std::string& json_text);
SweepSpec load_sweep_spec(const std::string& path);

struct SweepSummary {
  int cells = 0;
  int undetermined = 0;
  double wall_time_s = 0.0;
  bool resumed = false;
  std::string csv_path;
  std::string manifest_path;
};

/**
 * Evaluates the grid with the chosen engine and writes <output>.csv plus
 * <output>.manifest.json. Cell results are deterministic and independent of
 * the worker count; per-cell failures become "undetermined" rows rather
 * than aborting the sweep. An interrupted run leaves <output>.partial.csv;
 * rerunning with the same spec skips the completed cells.
 */
SweepSummary run_sweep(const SweepSpec& spec);

/**
 * Oscillation structure of a cavity record. The interaction-induced phase
 * rotation chirps the field spectrum, so the robust witness of the
 * dual-peak (beating) regime is the intensity beat note: the spectrum of
 * the decay-compensated intensity s(t) = |a(t)|² e^{γt}, normalized to its
 * maximum. A beat peak above beat_threshold_rel (per sample) marks the
 * split-line regime; carrier_freq reports the dominant line of F[a] itself.
 */
struct CavitySpectrumMetrics {
  bool pair_detected = false;   // beat note present
  int n_peaks = 0;              // beat-region peaks above threshold
  double beat_freq = 0.0;       // rad/s; 0 when absent
  double beat_height_rel = 0.0; // top beat height / sample count
  double mean_level = 0.0;      // mean of s/max(s): coherence survival
  double carrier_freq = 0.0;    // signed dominant frequency of F[a]
  double carrier_height = 0.0;
};

CavitySpectrumMetrics analyze_cavity_spectrum(const Trajectory& traj, double omega_floor,
                                              double beat_threshold_rel = 1e-3,
                                              double prominence_rel = 0.02);

}  // namespace bcsq

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bcsq {

/// Sign of the collective interaction term in H = ∓χ S⁺S⁻ + Σ_j ε_j σ̂ᶻ_j.
/// The attractive form (-χ) is the default; with it the conserved spectral
/// vector carries a -ẑ/χ offset (see lax.hpp), which the conservation tests
/// verify numerically.
enum class SignConvention { attractive, repulsive };

/**
 * Couplings and splitting-distribution knobs of the pseudospin model.
 *
 * Two ensembles of n_per_ensemble spins each carry mean splittings ±eps0/2;
 * within an ensemble the splittings cover [±eps0/2 - w/4, ±eps0/2 + w/4].
 * The dimensionless controls of the dynamics are w/(χN) and eps0/(χN) with
 * N = n_per_ensemble.
 */
struct ModelParams {
  double chi = 1.0;            // per-pair interaction strength, angular frequency
  int n_per_ensemble = 1;      // N; total spin count is 2N
  double eps0 = 0.0;           // separation of the ensemble means, >= 0
  double w = 0.0;              // characteristic width of the combined distribution
  SignConvention sign = SignConvention::attractive;

  double chi_n() const { return chi * static_cast<double>(n_per_ensemble); }
  void validate() const;  // throws std::invalid_argument on violated invariants
};

/**
 * Mean-field state: one classical Bloch vector per spin plus its splitting
 * and coupling weight. Storage is ensemble-major: entries [0, N) belong to
 * the + ensemble, [N, 2N) to the - ensemble.
 */
struct SpinState {
  std::vector<double> sx, sy, sz;   // Bloch components, |σ⃗_j| = 1 for pure states
  std::vector<double> eps;          // per-spin splitting ε_j
  std::vector<double> g_weight;     // coupling weight g_j/g in [-1, 1]; all 1 when homogeneous
  int n_per_ensemble = 0;

  int size() const { return static_cast<int>(sx.size()); }
  double ensemble_sign(int j) const { return j < n_per_ensemble ? 1.0 : -1.0; }
  double norm(int j) const;
  bool homogeneous_weights() const;
};

enum class SplittingKind { equally_spaced, uniform_random };

/// Recipe for the per-spin splittings. equally_spaced is deterministic
/// (midpoint grid of each ensemble interval); uniform_random draws iid
/// values from the same intervals with the given seed.
struct SplittingSpec {
  SplittingKind kind = SplittingKind::equally_spaced;
  double eps0 = 0.0;
  double w = 0.0;
  int n_per_ensemble = 1;
  std::uint64_t seed = 0;
};

/// Returns 2N splittings, + ensemble first. The midpoint grid has ensemble
/// mean exactly ±eps0/2; W = 0 degenerates to all-±eps0/2.
std::vector<double> sample_splittings(const SplittingSpec& spec);

enum class StateFamily { azimuthal, elevation, bcs_ground, cavity_realistic };

/**
 * Initial-state family selector.
 *
 * azimuthal(Δφ₀):  σ⃗_j(0) = (cos(Δφ₀/2), ±sin(Δφ₀/2), 0)
 * elevation(Δθ₀):  σ⃗_j(0) = (cos(Δθ₀/2), 0, ±sin(Δθ₀/2))
 * bcs_ground:      self-consistent ground state (or a caller-supplied gap)
 *
 * The ± is correlated with the ensemble's sign of eps0. cavity_realistic is
 * handled by the cavity module, not here.
 */
struct InitialStateSpec {
  StateFamily family = StateFamily::azimuthal;
  double angle = 0.0;                 // radians, in [-π, π]
  std::optional<double> gap;          // bcs_ground only; empty = solve self-consistently
};

/// Builds the ideal (homogeneous-weight) initial state for the given
/// splittings. Throws std::invalid_argument for cavity_realistic or an
/// angle outside [-π, π]; chi is used only by the bcs_ground family.
SpinState prepare_initial_state(const InitialStateSpec& spec,
                                std::span<const double> splittings,
                                double chi = 1.0);

/**
 * Positive root of the gap self-consistency condition
 *   Δ = χ Σ_j (1/2) Δ / sqrt(Δ² + ε_j²),
 * found by bisection on (0, χ·2N] to relative tolerance 1e-10. Returns 0
 * when only the trivial solution exists. Throws std::runtime_error with the
 * bracket if bisection fails to converge.
 */
double solve_gap(double chi, std::span<const double> splittings);

/// Ground-state Bloch vectors σˣ_j = Δ/sqrt(Δ²+ε_j²), σʸ_j = 0,
/// σᶻ_j = ε_j/sqrt(Δ²+ε_j²). Throws std::runtime_error if the gap closes
/// (normal state; transverse phases undefined).
SpinState bcs_ground_state(double chi, std::span<const double> splittings,
                           std::optional<double> gap = std::nullopt);

}  // namespace bcsq

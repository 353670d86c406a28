#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "bcsq/model.hpp"

namespace bcsq {

using cplx = std::complex<double>;

/// Dynamical phase of |Δ(t)|: I decays to zero, II settles to a constant,
/// III oscillates persistently. IIIa keeps |Δ| strictly positive; in IIIb
/// |Δ| periodically touches zero.
enum class Phase { I, II, IIIa, IIIb, undetermined };

enum class Provenance { lax, trajectory };

struct PhaseLabel {
  Phase phase = Phase::undetermined;
  Provenance provenance = Provenance::lax;
  std::string detail;
};

std::string to_string(Phase p);

/**
 * Conjugate root pairs of the squared spectral vector norm. Each pair is
 * stored by its upper-half-plane representative u_r + i u_i (u_i > 0); the
 * set is closed under u -> conj(u) and, for the symmetric splitting
 * distributions used here, under u -> -u as well.
 *
 * Derived constants (two-pair case, pairs a ± ib and -a ± ib):
 *   R₊ = (|u1_i| + |u2_i|)², R₋ = (|u1_i| - |u2_i|)², R̃ = (u1_r - u2_r)².
 * R₊ and R₋ bound the oscillations of |Δ(t)|²; R₋ separates the III
 * sub-phases.
 */
struct LaxRootSet {
  std::vector<cplx> pairs;  // 0..2 upper-half-plane representatives

  int n_pairs() const { return static_cast<int>(pairs.size()); }
  double r_plus() const;
  double r_minus() const;
  double r_tilde() const;
};

/**
 * Continuum root-finding problem: interaction scale chi_n = χN, ensemble
 * mean separation eps0, distribution width w, and the initial-state family
 * and opening angle. Works in the attractive convention.
 */
struct LaxProblem {
  double chi_n = 1.0;
  double eps0 = 0.0;
  double w = 0.0;
  StateFamily family = StateFamily::azimuthal;
  double angle = 0.0;
};

/// χ·(Lx, Ly, Lz) of the continuum spectral vector at complex u.
struct LaxComponents {
  cplx lx, ly, lz;
};

/**
 * Closed-form continuum components for the azimuthal and elevation
 * families: each ensemble contributes the interval integral
 *   ∫ dε/(u - ε) = log(u - c + h) - log(u - c - h)
 * over its splitting support (principal logs; branch cuts exactly on the
 * two real support segments). Throws std::domain_error when u is within
 * 1e-12·w of a support segment.
 */
LaxComponents lax_components_continuum(cplx u, const LaxProblem& p);

/// Q(u) = (χLx)² + (χLy)² + (χLz)²; Q -> 1 as |u| -> ∞.
cplx lax_squared(cplx u, const LaxProblem& p);

/// Q(u) evaluated on a discrete spin configuration (any time, any weights
/// all 1): conserved under closed homogeneous dynamics; the conservation
/// test pins the sign convention.
cplx lax_squared_discrete(cplx u, const SpinState& state, double chi,
                          SignConvention sign = SignConvention::attractive);

/**
 * Exact roots for the antipodal azimuthal state (angle = π), valid for all
 * w, eps0. Two conjugate pairs exist iff w/(χN) < π; empty set otherwise.
 */
LaxRootSet analytic_roots_antipodal(const LaxProblem& p);

/**
 * Small-width limit (w ≪ χN, eps0): two conjugate pairs for either family.
 * Elevation rejects angle = ±π (polar state, no transverse structure).
 */
LaxRootSet analytic_roots_small_w(const LaxProblem& p);

/**
 * Small-mean-splitting limit (eps0 ≪ w, χN): a single pair
 *   u± = ± i (w/4) * cot[ (w/(4χN)) * sec(angle/2) ]
 * when w/(χN) < 2π cos(angle/2); empty otherwise. Same form for both
 * families.
 */
LaxRootSet analytic_roots_small_eps(const LaxProblem& p);

struct RootSearchOptions {
  double imag_tol_rel = 1e-6;    // |Im u| < imag_tol_rel·χN counts as a real root
  double residual_tol = 1e-8;    // |Q(u*)| acceptance for reported roots
  double dedup_tol_rel = 1e-6;   // pair-merging distance, relative to χN
  int newton_max_iter = 60;
  int random_seeds = 32;         // extra random starts at the target width
  std::uint64_t seed = 0x5eedULL;
  double w_start = 1e-3;         // continuation start, relative to χN
  int w_steps = 48;              // continuation resolution in w
};

struct RootSearchResult {
  LaxRootSet roots;
  bool ok = true;
  std::string message;
};

/**
 * Numerical root search: complex Newton iteration on Q(u) (numerical
 * derivative), seeded by the small-w closed forms at small width and
 * continued upward in w reusing each step's roots as the next seeds, plus
 * random restarts. Roots are kept only if |Q| < residual_tol and
 * |Im u| ≥ imag_tol; the returned set is deduplicated and conjugate-closed
 * by construction.
 */
RootSearchResult find_roots_numeric(const LaxProblem& p,
                                    const RootSearchOptions& opts = {});

/**
 * Continuation row helper: classifies every w in ws (ascending) for fixed
 * remaining parameters, reusing roots along the row. Returns one result per
 * entry of ws.
 */
std::vector<RootSearchResult> find_roots_along_w(const LaxProblem& base,
                                                 const std::vector<double>& ws,
                                                 const RootSearchOptions& opts = {});

/// 0 pairs -> I; 1 pair -> II; 2 pairs -> IIIa when R₋/R₊ > subphase_tol
/// (|Δ| strictly positive), IIIb otherwise (|Δ| periodically vanishes).
PhaseLabel classify_from_roots(const LaxRootSet& roots, double subphase_tol = 1e-4);

/// Critical splitting ε₀ᶜ = (χN/2)(1 + cos(angle)) separating IIIa from IIIb
/// at small inhomogeneity.
double critical_splitting(double chi_n, double angle);

/**
 * Elliptic solution of the order-parameter equation for the solved case
 * R₋ = 0 (two pairs a ± ib, -a ± ib):
 *   |Δ(t)| = √R₊ |sn(t√R̃, -R₊/R̃)|,
 * amplitude √R₊ and sn-period 4K(-R₊/R̃)/√R̃ (|Δ| repeats at half that).
 * Construction throws std::invalid_argument unless the root set has two
 * pairs with R₋/R₊ below r_minus_tol.
 */
class EllipticOrderParameter {
 public:
  explicit EllipticOrderParameter(const LaxRootSet& roots, double r_minus_tol = 1e-4);

  double operator()(double t) const;  // |Δ(t)|
  double amplitude() const;           // √R₊
  double period() const;              // 4K(m)/√R̃, m = -R₊/R̃
  double r_plus() const { return r_plus_; }
  double r_tilde() const { return r_tilde_; }

 private:
  double r_plus_ = 0.0;
  double r_tilde_ = 0.0;
};

/// |Δ(t)| via EllipticOrderParameter; one-shot convenience form.
double delta_analytic(double t, const LaxRootSet& roots);

}  // namespace bcsq

#pragma once

#include <complex>

namespace bcsq {

/**
 * Complete elliptic integral of the first kind K(m), parameter convention
 * K(m) = ∫_0^{π/2} dθ / sqrt(1 - m sin²θ).
 *
 * Valid for m < 1 (including negative m, which is mapped to (0,1) by the
 * reciprocal-parameter transformation K(m) = K(m/(m-1)) / sqrt(1-m)).
 * Evaluated with the arithmetic-geometric mean; relative accuracy ~1e-15.
 *
 * Throws std::domain_error for m >= 1.
 */
double elliptic_K(double m);

/// sn, cn, dn at the same argument; dn >= sqrt(1-m) > 0 for m < 1.
struct JacobiElliptic {
  double sn;
  double cn;
  double dn;
};

/**
 * Jacobi elliptic functions for real argument u and parameter m <= 1.
 *
 * m in (0,1): descending Landen / AGM chain.
 * m < 0:      imaginary-modulus transformation
 *             sn(u,m) = sd(u√(1-m), -m/(1-m)) / √(1-m), cn = cd, dn = nd,
 *             which reduces the evaluation to a parameter in (0,1).
 * m = 0, 1:   trigonometric / hyperbolic degenerations.
 */
JacobiElliptic jacobi_elliptic(double u, double m);

/// Convenience wrapper returning only sn(u, m).
double jacobi_sn(double u, double m);

/**
 * Principal-branch complex inverse hyperbolic tangent,
 * atanh(z) = [log(1+z) - log(1-z)] / 2.
 *
 * Branch cuts on the real axis for |Re z| >= 1, Im z = 0; satisfies
 * atanh(conj z) = conj(atanh z) off the cuts. Throws std::domain_error
 * at the poles z = ±1.
 */
std::complex<double> complex_atanh(std::complex<double> z);

}  // namespace bcsq

#include "bcsq/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace bcsq {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double elliptic_K(double m) {
  if (m >= 1.0) throw std::domain_error("elliptic_K: parameter m must satisfy m < 1");
  if (m == 0.0) return 0.5 * kPi;
  if (m < 0.0) {
    // Reciprocal-parameter (imaginary-modulus) transformation onto (0,1).
    return elliptic_K(m / (m - 1.0)) / std::sqrt(1.0 - m);
  }
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (a + b);
}

namespace {

// sn, cn, dn for m strictly inside (0,1) via the AGM chain with the
// backward Gauss amplitude recurrence.
JacobiElliptic sncndn_unit_interval(double u, double m) {
  constexpr int kMax = 32;
  double a[kMax], c[kMax];
  a[0] = 1.0;
  c[0] = std::sqrt(m);
  double b = std::sqrt(1.0 - m);
  int n = 0;
  while (n < kMax - 1 && std::abs(c[n]) > 1e-16 * a[n]) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);  // 2^n a_n u
  for (int i = n; i >= 1; --i) {
    double s = c[i] * std::sin(phi) / a[i];
    s = std::fmin(1.0, std::fmax(-1.0, s));
    phi = 0.5 * (phi + std::asin(s));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  const double dn = std::sqrt(std::fmax(1.0 - m * sn * sn, 0.0));
  return {sn, cn, dn};
}

}  // namespace

JacobiElliptic jacobi_elliptic(double u, double m) {
  if (m > 1.0) throw std::domain_error("jacobi_elliptic: parameter m must satisfy m <= 1");
  if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (m >= 1.0 - 1e-14) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }
  if (m < 0.0) {
    // Imaginary-modulus transformation: evaluate at parameter -m/(1-m) in (0,1).
    const double f = std::sqrt(1.0 - m);
    const double m1 = -m / (1.0 - m);
    const JacobiElliptic e = sncndn_unit_interval(u * f, m1);
    return {e.sn / (f * e.dn), e.cn / e.dn, 1.0 / e.dn};
  }
  return sncndn_unit_interval(u, m);
}

double jacobi_sn(double u, double m) { return jacobi_elliptic(u, m).sn; }

std::complex<double> complex_atanh(std::complex<double> z) {
  if (z.imag() == 0.0 && (z.real() == 1.0 || z.real() == -1.0)) {
    throw std::domain_error("complex_atanh: pole at z = ±1");
  }
  return 0.5 * (std::log(1.0 + z) - std::log(1.0 - z));
}

}  // namespace bcsq

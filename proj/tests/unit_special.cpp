#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "bcsq/special_functions.hpp"

using namespace bcsq;
using cplxd = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Quadrature oracle for the elliptic amplitude: u(phi) = F(phi, m) by
// adaptive Simpson, inverted with bisection+Newton; sn = sin(am(u)).
double incomplete_F(double phi, double m) {
  auto f = [m](double t) { return 1.0 / std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); };
  // composite Simpson with enough panels for ~1e-13
  const int n = 4000;
  const double h = phi / n;
  double s = f(0.0) + f(phi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

double sn_oracle(double u, double m) {
  // invert u = F(phi, m) for the amplitude; reflect beyond the quarter period
  const double K = elliptic_K(m);
  if (u > K) return sn_oracle(2.0 * K - u, m);
  if (u < -K) return sn_oracle(-2.0 * K - u, m);
  double lo = -kPi / 2, hi = kPi / 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (incomplete_F(mid, m) < u)
      lo = mid;
    else
      hi = mid;
  }
  return std::sin(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("elliptic_K identities and frozen references") {
  CHECK(std::abs(elliptic_K(0.0) - kPi / 2) < 1e-14);
  // frozen from an independent high-precision evaluation of the AGM
  CHECK(std::abs(elliptic_K(0.5) - 1.8540746773013719) < 1e-12);
  CHECK(std::abs(elliptic_K(-1.0) - 1.3110287771460599) < 1e-12);
  CHECK(std::abs(elliptic_K(-2.0) - 1.1714200841467698) < 1e-12);
  CHECK(std::abs(elliptic_K(0.25) - 1.6857503548125960) < 1e-12);
  CHECK(std::abs(elliptic_K(0.9) - 2.5780921133481733) < 1e-12);
  CHECK_THROWS_AS(elliptic_K(1.0), std::domain_error);
  CHECK_THROWS_AS(elliptic_K(1.5), std::domain_error);
}

TEST_CASE("elliptic_K monotone on (-inf, 1) and continuous at 0") {
  double prev = elliptic_K(-100.0);
  for (double m : {-10.0, -1.0, -0.1, 0.0, 0.1, 0.5, 0.9, 0.99}) {
    const double k = elliptic_K(m);
    CHECK(k > prev);
    prev = k;
  }
  CHECK(std::abs(elliptic_K(-1e-9) - kPi / 2) < 1e-8);
  CHECK(std::abs(elliptic_K(1e-9) - kPi / 2) < 1e-8);
}

TEST_CASE("jacobi_sn degenerate parameters") {
  for (double u : {0.3, 1.1, 2.9}) {
    CHECK(std::abs(jacobi_sn(u, 0.0) - std::sin(u)) < 1e-12);
    CHECK(std::abs(jacobi_sn(u, 1.0) - std::tanh(u)) < 1e-12);
  }
}

TEST_CASE("jacobi_sn quarter-period identity") {
  for (double m : {-2.0, -0.5, 0.25, 0.9}) {
    CHECK(std::abs(jacobi_sn(elliptic_K(m), m) - 1.0) < 1e-10);
  }
}

TEST_CASE("jacobi_sn against the quadrature oracle") {
  for (double m : {-3.0, -0.7, 0.3, 0.8}) {
    const double K = elliptic_K(m);
    for (double frac : {0.2, 0.5, 0.8, 1.3}) {
      const double u = frac * K;
      CHECK(std::abs(jacobi_sn(u, m) - sn_oracle(u, m)) < 1e-9);
    }
  }
}

TEST_CASE("jacobi_sn periodicity and bounds") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> um(-3.0, 0.95), uu(-10.0, 10.0);
  for (int k = 0; k < 200; ++k) {
    const double m = um(rng);
    const double u = uu(rng);
    const double p = 4.0 * elliptic_K(m);
    CHECK(std::abs(jacobi_sn(u + p, m) - jacobi_sn(u, m)) < 1e-10);
    CHECK(std::abs(jacobi_sn(u, m)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("jacobi_sn derivative at the origin is 1") {
  // Richardson-extrapolated central difference.
  for (double m : {-2.0, -0.3, 0.5}) {
    const double h = 1e-4;
    const double d1 = (jacobi_sn(h, m) - jacobi_sn(-h, m)) / (2 * h);
    const double d2 = (jacobi_sn(h / 2, m) - jacobi_sn(-h / 2, m)) / h;
    const double d = (4.0 * d2 - d1) / 3.0;
    CHECK(std::abs(d - 1.0) < 1e-10);
  }
}

TEST_CASE("sn,cn,dn consistency") {
  for (double m : {-1.5, 0.4}) {
    for (double u : {0.3, 1.7, -2.2}) {
      const auto e = jacobi_elliptic(u, m);
      CHECK(std::abs(e.sn * e.sn + e.cn * e.cn - 1.0) < 1e-12);
      CHECK(std::abs(e.dn * e.dn - (1.0 - m * e.sn * e.sn)) < 1e-12);
    }
  }
}

TEST_CASE("complex_atanh values and branch structure") {
  CHECK(std::abs(complex_atanh({0.0, 0.0})) < 1e-15);
  // frozen from the half-log identity at high precision
  CHECK(std::abs(complex_atanh({0.5, 0.0}) - cplxd(0.5493061443340548, 0.0)) < 1e-14);
  CHECK(std::abs(complex_atanh({0.0, 2.0}) - cplxd(0.0, 1.1071487177940904)) < 1e-14);
  CHECK_THROWS_AS(complex_atanh({1.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(complex_atanh({-1.0, 0.0}), std::domain_error);
}

TEST_CASE("complex_atanh conjugation symmetry off the cuts") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(1e-6, 3.0);
  for (int k = 0; k < 10000; ++k) {
    cplxd z(re(rng), im(rng) * (k % 2 ? 1.0 : -1.0));
    const cplxd a = complex_atanh(std::conj(z));
    const cplxd b = std::conj(complex_atanh(z));
    CHECK(std::abs(a - b) < 1e-13);
  }
}

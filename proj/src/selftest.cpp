#include "bcsq/selftest.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "bcsq/dynamics.hpp"
#include "bcsq/lax.hpp"
#include "bcsq/model.hpp"
#include "bcsq/observables.hpp"
#include "bcsq/special_functions.hpp"

namespace bcsq {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

int run_selftest(std::ostream& out) {
  int failures = 0;
  auto check = [&](const char* name, bool ok, double value = 0.0) {
    out << (ok ? "[ ok ] " : "[FAIL] ") << name;
    if (value != 0.0) out << "  (err = " << value << ")";
    out << "\n";
    if (!ok) ++failures;
  };

  // Special functions.
  check("K(0) = pi/2", std::abs(elliptic_K(0.0) - kPi / 2) < 1e-12);
  check("K(0.5) reference", std::abs(elliptic_K(0.5) - 1.8540746773013719) < 1e-12);
  check("K(-1) reference", std::abs(elliptic_K(-1.0) - 1.3110287771460599) < 1e-12);
  {
    double worst = 0.0;
    for (double u : {0.3, 1.1, 2.9}) worst = std::max(worst, std::abs(jacobi_sn(u, 0.0) - std::sin(u)));
    check("sn(u,0) = sin u", worst < 1e-12, worst);
    worst = 0.0;
    for (double m : {-2.0, -0.5, 0.25, 0.9})
      worst = std::max(worst, std::abs(jacobi_sn(elliptic_K(m), m) - 1.0));
    check("sn(K(m),m) = 1", worst < 1e-10, worst);
  }
  {
    const auto v = complex_atanh({0.0, 2.0});
    check("atanh(2i) = i atan 2", std::abs(v - std::complex<double>(0.0, std::atan(2.0))) < 1e-14);
  }

  // Single-spin precession oracle: chi = 0, sigma-(t) = sigma-(0) e^{-2i eps t}.
  {
    SpinState st;
    st.n_per_ensemble = 1;
    st.sx = {1.0, 1.0};
    st.sy = {0.0, 0.0};
    st.sz = {0.0, 0.0};
    st.eps = {0.7, -0.7};
    st.g_weight = {1.0, 1.0};
    ModelParams mp;
    mp.chi = 1e-14;  // effectively free spins
    mp.n_per_ensemble = 1;
    EvolutionConfig ec;
    ec.t_max = 10.0;
    ec.n_samples = 101;
    ec.rel_tol = 1e-10;
    ec.abs_tol = 1e-12;
    const Trajectory tr = integrate(st, mp, ec);
    double worst = 0.0;
    for (size_t i = 0; i < tr.times.size(); ++i) {
      const double t = tr.times[i];
      const std::complex<double> expect =
          0.5 * (std::exp(std::complex<double>(0, -2 * 0.7 * t)) +
                 std::exp(std::complex<double>(0, +2 * 0.7 * t)));
      worst = std::max(worst, std::abs(tr.delta[i] / mp.chi - expect));
    }
    check("free-spin precession at 2*eps", worst < 1e-7, worst);
  }

  // Closed-run conservation (energy, norms, spectral Q at real probes).
  {
    const int n = 100;
    SplittingSpec ss;
    ss.eps0 = 0.1;
    ss.w = 0.5;
    ss.n_per_ensemble = n;
    const auto eps = sample_splittings(ss);
    InitialStateSpec is;
    is.family = StateFamily::azimuthal;
    is.angle = kPi / 2;
    const SpinState st = prepare_initial_state(is, eps);
    ModelParams mp;
    mp.chi = 1.0 / n;
    mp.n_per_ensemble = n;
    mp.eps0 = ss.eps0;
    mp.w = ss.w;
    EvolutionConfig ec;
    ec.t_max = 50.0;
    ec.n_samples = 201;
    ec.rel_tol = 1e-10;
    ec.abs_tol = 1e-12;
    ec.snapshot_stride = 50;
    const Trajectory tr = integrate(st, mp, ec);
    double e_drift = 0.0, n_drift = 0.0, q_drift = 0.0;
    for (size_t i = 0; i < tr.times.size(); ++i) {
      e_drift = std::max(e_drift, std::abs(tr.energy[i] - tr.energy[0]) /
                                      std::max(std::abs(tr.energy[0]), 1e-300));
      n_drift = std::max(n_drift, std::abs(tr.mean_norm[i] - 1.0));
    }
    for (const auto& snap : tr.snapshots) {
      for (double u : {1.37, -1.83, 2.11}) {
        const auto q0 = lax_squared_discrete(u, st, mp.chi);
        const auto qt = lax_squared_discrete(u, snap, mp.chi);
        q_drift = std::max(q_drift, std::abs(qt - q0) / std::abs(q0));
      }
    }
    check("energy conservation", e_drift < 1e-7, e_drift);
    check("spin-norm conservation", n_drift < 1e-7, n_drift);
    check("spectral Q conservation", q_drift < 1e-6, q_drift);
  }

  // Continuum components vs the discrete spectral sum.
  {
    const int n = 1000;
    SplittingSpec ss;
    ss.eps0 = 0.1;
    ss.w = 0.5;
    ss.n_per_ensemble = n;
    const auto eps = sample_splittings(ss);
    InitialStateSpec is;
    is.angle = 1.1;
    const SpinState st = prepare_initial_state(is, eps);
    LaxProblem p{1.0, 0.1, 0.5, StateFamily::azimuthal, 1.1};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.05, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const cplx u(re(rng), im(rng));
      const cplx qd = lax_squared_discrete(u, st, 1.0 / n);
      const cplx qc = lax_squared(u, p);
      worst = std::max(worst, std::abs(qc - qd) / std::abs(qd));
    }
    check("continuum vs discrete spectral norm", worst < 1e-3, worst);
  }

  out << (failures == 0 ? "selftest: all checks passed\n"
                        : "selftest: FAILURES PRESENT\n");
  return failures;
}

}  // namespace bcsq

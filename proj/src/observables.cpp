#include "bcsq/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bcsq {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Iterative radix-2 FFT; falls back to a direct DFT for other lengths.
void fourier_transform(std::vector<std::complex<double>>& x) {
  const size_t n = x.size();
  if (n < 2) return;
  if ((n & (n - 1)) != 0) {
    std::vector<std::complex<double>> out(n);
    for (size_t k = 0; k < n; ++k) {
      std::complex<double> s = 0.0;
      for (size_t j = 0; j < n; ++j)
        s += x[j] * std::polar(1.0, -2.0 * kPi * double(j * k % n) / double(n));
      out[k] = s;
    }
    x = std::move(out);
    return;
  }
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / double(len);
    const std::complex<double> wl = std::polar(1.0, ang);
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w = 1.0;
      for (size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = x[i + j];
        const std::complex<double> v = x[i + j + len / 2] * w;
        x[i + j] = u + v;
        x[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<double> hann_window(size_t n) {
  std::vector<double> w(n);
  for (size_t k = 0; k < n; ++k) w[k] = 0.5 * (1.0 - std::cos(2.0 * kPi * k / (n - 1)));
  return w;
}

void detect_peaks(SpectrumResult& res, const SpectrumOptions& opts) {
  const auto& mag = res.magnitude;
  const int n = static_cast<int>(mag.size());
  if (n < 3) return;
  const double max_mag = *std::max_element(mag.begin(), mag.end());
  if (!(max_mag > 0.0)) return;
  const double prom_min = opts.peak_prominence_rel * max_mag;

  auto at = [&](int i) {
    if (res.two_sided) return mag[(i % n + n) % n];  // circular for full spectra
    return mag[std::clamp(i, 0, n - 1)];
  };

  for (int i = 0; i < n; ++i) {
    if (!res.two_sided && (i == 0 || i == n - 1)) continue;
    if (!(mag[i] > at(i - 1) && mag[i] >= at(i + 1))) continue;
    // Prominence: descend on both sides until a higher bin appears.
    double valley_l = mag[i], valley_r = mag[i];
    for (int j = 1; j < n; ++j) {
      const double v = at(i - j);
      if (v > mag[i]) break;
      valley_l = std::min(valley_l, v);
      if (!res.two_sided && i - j <= 0) break;
    }
    for (int j = 1; j < n; ++j) {
      const double v = at(i + j);
      if (v > mag[i]) break;
      valley_r = std::min(valley_r, v);
      if (!res.two_sided && i + j >= n - 1) break;
    }
    const double prominence = mag[i] - std::max(valley_l, valley_r);
    if (prominence < prom_min) continue;

    const double half = mag[i] - 0.5 * prominence;
    int wl = i, wr = i;
    while (wl > 0 && at(wl - 1) > half && wl > i - n / 2) --wl;
    while (wr < i + n / 2 && at(wr + 1) > half) ++wr;
    SpectrumResult::Peak pk;
    pk.frequency = res.frequency[i];
    pk.height = mag[i];
    pk.width = (wr - wl) * (res.frequency.size() > 1 ? res.frequency[1] - res.frequency[0] : 0.0);
    res.peaks.push_back(pk);
  }
  std::sort(res.peaks.begin(), res.peaks.end(),
            [](const auto& a, const auto& b) { return a.height > b.height; });
  // Enforce minimum separation between reported peaks.
  std::vector<SpectrumResult::Peak> filtered;
  const double min_sep =
      opts.min_peak_distance_bins * (res.frequency.size() > 1 ? res.frequency[1] - res.frequency[0] : 0.0);
  for (const auto& p : res.peaks) {
    bool close = false;
    for (const auto& q : filtered)
      if (std::abs(p.frequency - q.frequency) < min_sep) close = true;
    if (!close) filtered.push_back(p);
  }
  res.peaks = std::move(filtered);
}

SpectrumResult spectrum_impl(std::vector<std::complex<double>> x, double dt, bool two_sided,
                             const SpectrumOptions& opts) {
  const size_t n = x.size();
  if (n < 16) throw std::invalid_argument("spectrum: series shorter than 16 samples");
  if (!(dt > 0.0)) throw std::invalid_argument("spectrum: dt must be > 0");

  if (opts.remove_mean) {
    std::complex<double> mean = std::accumulate(x.begin(), x.end(), std::complex<double>(0.0));
    mean /= double(n);
    for (auto& v : x) v -= mean;
  }
  const auto w = hann_window(n);
  for (size_t k = 0; k < n; ++k) x[k] *= w[k];
  fourier_transform(x);

  SpectrumResult res;
  res.two_sided = two_sided;
  res.n = static_cast<int>(n);
  res.dt = dt;
  const size_t bins = two_sided ? n : n / 2 + 1;
  res.frequency.resize(bins);
  res.magnitude.resize(bins);
  for (size_t k = 0; k < bins; ++k) {
    res.frequency[k] = 2.0 * kPi * double(k) / (double(n) * dt);
    res.magnitude[k] = std::abs(x[k]);
  }
  detect_peaks(res, opts);
  return res;
}

}  // namespace

double SpectrumResult::signed_frequency(double freq) const {
  if (!two_sided) return freq;
  const double fs = 2.0 * kPi / dt;
  return freq > 0.5 * fs ? freq - fs : freq;
}

SpectrumResult spectrum(const std::vector<double>& series, double dt,
                        const SpectrumOptions& opts) {
  std::vector<std::complex<double>> x(series.begin(), series.end());
  return spectrum_impl(std::move(x), dt, /*two_sided=*/false, opts);
}

SpectrumResult spectrum(const std::vector<std::complex<double>>& series, double dt,
                        const SpectrumOptions& opts) {
  return spectrum_impl(series, dt, /*two_sided=*/true, opts);
}

double amplitude(const Trajectory& traj, int lo, int hi) {
  if (lo < 0 || hi > static_cast<int>(traj.delta.size()) || hi <= lo)
    throw std::invalid_argument("amplitude: empty or invalid window");
  double mn = std::abs(traj.delta[lo]), mx = mn;
  for (int i = lo; i < hi; ++i) {
    const double v = std::abs(traj.delta[i]);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  return mx - mn;
}

double amplitude(const Trajectory& traj, double trailing_fraction) {
  const int n = static_cast<int>(traj.delta.size());
  const int lo = static_cast<int>(n * (1.0 - trailing_fraction));
  return amplitude(traj, lo, n);
}

double amplitude_steady(const Trajectory& traj, int lo, int hi, int n_chunks) {
  const int len = (hi - lo) / n_chunks;
  if (len < 4) return amplitude(traj, lo, hi);
  std::vector<double> amps(n_chunks);
  for (int c = 0; c < n_chunks; ++c) amps[c] = amplitude(traj, lo + c * len, lo + (c + 1) * len);
  std::nth_element(amps.begin(), amps.begin() + n_chunks / 2, amps.end());
  const double upper = amps[n_chunks / 2];
  std::nth_element(amps.begin(), amps.begin() + (n_chunks - 1) / 2, amps.end());
  return 0.5 * (upper + amps[(n_chunks - 1) / 2]);
}

double amplitude_steady(const Trajectory& traj, double trailing_fraction, int n_chunks) {
  const int n = static_cast<int>(traj.delta.size());
  const int lo = static_cast<int>(n * (1.0 - trailing_fraction));
  return amplitude_steady(traj, lo, n, n_chunks);
}

std::optional<double> extract_omega_osc(const std::vector<double>& abs_series, double dt,
                                        const OmegaOscOptions& opts) {
  const int n = static_cast<int>(abs_series.size());
  const int lo = static_cast<int>(n * (1.0 - opts.trailing_fraction));
  if (n - lo < 32) return std::nullopt;
  std::vector<double> win(abs_series.begin() + lo, abs_series.end());

  const double mean = std::accumulate(win.begin(), win.end(), 0.0) / win.size();
  double var = 0.0;
  for (double v : win) var += (v - mean) * (v - mean);
  var /= win.size();
  const double rel = std::sqrt(var) / std::max(std::abs(mean), 1e-300);
  if (rel < opts.min_relative_oscillation) return std::nullopt;

  SpectrumOptions sopts;
  sopts.peak_prominence_rel = opts.peak_prominence_rel;
  const SpectrumResult sp = spectrum(win, dt, sopts);

  // Dominant peak away from the DC bins, with parabolic refinement.
  int best = -1;
  for (size_t i = 0; i < sp.magnitude.size(); ++i) {
    if (static_cast<int>(i) < opts.skip_dc_bins) continue;
    if (best < 0 || sp.magnitude[i] > sp.magnitude[best]) best = static_cast<int>(i);
  }
  if (best <= 0 || best >= static_cast<int>(sp.magnitude.size()) - 1) return std::nullopt;
  bool is_peak = sp.magnitude[best] > sp.magnitude[best - 1] &&
                 sp.magnitude[best] >= sp.magnitude[best + 1];
  if (!is_peak) return std::nullopt;

  const double l = std::log(std::max(sp.magnitude[best - 1], 1e-300));
  const double c = std::log(std::max(sp.magnitude[best], 1e-300));
  const double r = std::log(std::max(sp.magnitude[best + 1], 1e-300));
  double shift = 0.0;
  const double denom = l - 2.0 * c + r;
  if (std::abs(denom) > 1e-12) shift = 0.5 * (l - r) / denom;
  shift = std::clamp(shift, -0.5, 0.5);
  const double dbin = sp.frequency[1] - sp.frequency[0];
  return sp.frequency[best] + shift * dbin;
}

std::optional<double> extract_omega_osc(const Trajectory& traj, const OmegaOscOptions& opts) {
  return extract_omega_osc(traj.abs_delta(), traj.dt_sample(), opts);
}

PhaseLabel classify_trajectory(const Trajectory& traj, const ClassifyThresholds& th) {
  const int n = static_cast<int>(traj.delta.size());
  if (n < 8) throw std::invalid_argument("classify_trajectory: record too short");
  if (traj.times.back() * traj.chi_n < 100.0 * (1.0 - 1e-9))
    throw std::invalid_argument("classify_trajectory: window too short (need t_max >= 100/chiN)");

  double ref = std::max(std::abs(traj.delta.front()),
                        traj.chi_n * std::abs(std::cos(traj.angle / 2.0)));
  if (ref < 0.5 * traj.chi_n) ref = traj.chi_n;  // near-antipodal floor

  const int lo = 3 * n / 4;
  double mean = 0.0, mn = std::abs(traj.delta[lo]), mx = mn;
  for (int i = lo; i < n; ++i) {
    const double v = std::abs(traj.delta[i]);
    mean += v;
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  mean /= (n - lo);

  PhaseLabel label;
  label.provenance = Provenance::trajectory;
  std::ostringstream d;
  d << "mean=" << mean << " amp=" << (mx - mn) << " min/max=" << (mx > 0 ? mn / mx : 0.0);
  label.detail = d.str();

  if (mean < th.tol_I * ref) {
    label.phase = Phase::I;
  } else if ((mx - mn) / mean < th.tol_II) {
    label.phase = Phase::II;
  } else {
    // Persistence check: transient ringing decays ~ 1/sqrt(t); compare the
    // typical oscillation in the second and last quarters of the record.
    const double amp_mid = amplitude_steady(traj, n / 4, n / 2, 8);
    const double amp_late = amplitude_steady(traj, 3 * n / 4, n, 8);
    if (amp_late < th.persist_ratio * amp_mid) {
      label.phase = Phase::II;
      label.detail += " decaying";
    } else {
      label.phase = (mn < th.tol_zero * mx) ? Phase::IIIb : Phase::IIIa;
    }
  }
  return label;
}

TrajectoryMetrics trajectory_metrics(const Trajectory& traj, const ClassifyThresholds& th) {
  const int n = static_cast<int>(traj.delta.size());
  const int lo = 3 * n / 4;
  TrajectoryMetrics m;
  double mean = 0.0, mn = std::abs(traj.delta[lo]), mx = mn;
  for (int i = lo; i < n; ++i) {
    const double v = std::abs(traj.delta[i]);
    mean += v;
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  m.mean_abs_delta = mean / (n - lo);
  m.amplitude = mx - mn;
  m.min_over_max = mx > 0 ? mn / mx : 0.0;
  m.omega_osc = extract_omega_osc(traj);
  for (double v : traj.jz) m.jz_max = std::max(m.jz_max, std::abs(v));
  m.label = classify_trajectory(traj, th);
  if (m.label.phase == Phase::II)
    m.decay_exponent = fit_envelope_decay(traj, 0.04 * traj.times.back(), 0.75 * traj.times.back());
  return m;
}

std::optional<double> fit_envelope_decay(const Trajectory& traj, double t_lo, double t_hi) {
  const int n = static_cast<int>(traj.delta.size());
  if (n < 16) return std::nullopt;
  // Asymptote from the trailing tenth, where the envelope is flattest.
  double tail = 0.0;
  int count = 0;
  for (int i = 9 * n / 10; i < n; ++i, ++count) tail += std::abs(traj.delta[i]);
  tail /= std::max(count, 1);

  std::vector<double> lt, lp;
  const auto ad = traj.abs_delta();
  for (int i = 1; i + 1 < n; ++i) {
    const double t = traj.times[i];
    if (t < t_lo || t > t_hi) continue;
    const double d0 = std::abs(ad[i - 1] - tail);
    const double d1 = std::abs(ad[i] - tail);
    const double d2 = std::abs(ad[i + 1] - tail);
    if (d1 > d0 && d1 >= d2 && d1 > 0.0) {
      lt.push_back(std::log(t));
      lp.push_back(std::log(d1));
    }
  }
  if (lt.size() < 4) return std::nullopt;
  const double mt = std::accumulate(lt.begin(), lt.end(), 0.0) / lt.size();
  const double mp = std::accumulate(lp.begin(), lp.end(), 0.0) / lp.size();
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < lt.size(); ++i) {
    sxx += (lt[i] - mt) * (lt[i] - mt);
    sxy += (lt[i] - mt) * (lp[i] - mp);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  return sxy / sxx;
}

}  // namespace bcsq

#include "bcsq/lax.hpp"

#include "bcsq/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bcsq {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::I: return "I";
    case Phase::II: return "II";
    case Phase::IIIa: return "IIIa";
    case Phase::IIIb: return "IIIb";
    default: return "undetermined";
  }
}

double LaxRootSet::r_plus() const {
  if (pairs.size() != 2) throw std::logic_error("LaxRootSet: R+ needs two pairs");
  return std::pow(std::abs(pairs[0].imag()) + std::abs(pairs[1].imag()), 2);
}

double LaxRootSet::r_minus() const {
  if (pairs.size() != 2) throw std::logic_error("LaxRootSet: R- needs two pairs");
  return std::pow(std::abs(pairs[0].imag()) - std::abs(pairs[1].imag()), 2);
}

double LaxRootSet::r_tilde() const {
  if (pairs.size() != 2) throw std::logic_error("LaxRootSet: Rt needs two pairs");
  return std::pow(pairs[0].real() - pairs[1].real(), 2);
}

namespace {

// ∫_{c-h}^{c+h} dε/(u-ε); principal logs put the branch cut on [c-h, c+h].
cplx interval_log(cplx u, double c, double h) {
  return std::log(u - (c - h)) - std::log(u - (c + h));
}

// Distance from u to the real segment [c-h, c+h].
double segment_distance(cplx u, double c, double h) {
  const double x = std::clamp(u.real(), c - h, c + h);
  return std::abs(u - cplx(x, 0.0));
}

// Regroups arbitrary root candidates into deduplicated upper-half-plane
// pair representatives, dropping near-real values.
LaxRootSet canonicalize_pairs(const std::vector<cplx>& roots, double imag_tol,
                              double dedup_tol) {
  std::vector<cplx> reps;
  for (cplx r : roots) {
    if (!(std::abs(r.imag()) >= imag_tol)) continue;
    cplx rep(r.real(), std::abs(r.imag()));
    bool dup = false;
    for (cplx q : reps)
      if (std::abs(q - rep) <= dedup_tol) dup = true;
    if (!dup) reps.push_back(rep);
  }
  std::sort(reps.begin(), reps.end(),
            [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  LaxRootSet set;
  set.pairs = std::move(reps);
  return set;
}

}  // namespace

LaxComponents lax_components_continuum(cplx u, const LaxProblem& p) {
  if (!(p.chi_n > 0.0)) throw std::invalid_argument("LaxProblem: chi_n must be > 0");
  const double ca = std::cos(p.angle / 2.0);
  const double sa = std::sin(p.angle / 2.0);

  cplx ip, im;  // per-ensemble integrals, already divided by the width
  if (p.w > 0.0) {
    const double h = p.w / 4.0;
    const double guard = 1e-12 * p.w;
    if (segment_distance(u, +p.eps0 / 2.0, h) < guard ||
        segment_distance(u, -p.eps0 / 2.0, h) < guard)
      throw std::domain_error("lax_components_continuum: u on a branch-cut segment");
    ip = interval_log(u, +p.eps0 / 2.0, h) / p.w;
    im = interval_log(u, -p.eps0 / 2.0, h) / p.w;
  } else {
    // Width-zero limit: the interval integral collapses to a simple pole.
    if (std::abs(u - cplx(+p.eps0 / 2.0, 0)) == 0.0 ||
        std::abs(u - cplx(-p.eps0 / 2.0, 0)) == 0.0)
      throw std::domain_error("lax_components_continuum: u at a splitting pole");
    ip = 0.5 / (u - p.eps0 / 2.0);
    im = 0.5 / (u + p.eps0 / 2.0);
  }

  LaxComponents c;
  if (p.family == StateFamily::azimuthal) {
    c.lx = p.chi_n * ca * (ip + im);
    c.ly = p.chi_n * sa * (ip - im);
    c.lz = -1.0;
  } else if (p.family == StateFamily::elevation) {
    c.lx = p.chi_n * ca * (ip + im);
    c.ly = 0.0;
    c.lz = p.chi_n * sa * (ip - im) - 1.0;
  } else {
    throw std::invalid_argument("lax_components_continuum: unsupported state family");
  }
  return c;
}

cplx lax_squared(cplx u, const LaxProblem& p) {
  const LaxComponents c = lax_components_continuum(u, p);
  return c.lx * c.lx + c.ly * c.ly + c.lz * c.lz;
}

cplx lax_squared_discrete(cplx u, const SpinState& state, double chi, SignConvention sign) {
  // Conserved spectral vector of H = ∓χS⁺S⁻ + Σεσᶻ carries offset -ẑ/χ_L
  // with χ_L = ±χ (attractive: +χ).
  const double chi_l = sign == SignConvention::attractive ? chi : -chi;
  cplx lx = 0.0, ly = 0.0, lz = -1.0 / chi_l;
  for (int j = 0; j < state.size(); ++j) {
    const cplx d = 0.5 / (u - state.eps[j]);
    lx += state.sx[j] * d;
    ly += state.sy[j] * d;
    lz += state.sz[j] * d;
  }
  lx *= chi_l;
  ly *= chi_l;
  lz *= chi_l;
  return lx * lx + ly * ly + lz * lz;
}

LaxRootSet analytic_roots_antipodal(const LaxProblem& p) {
  if (p.family != StateFamily::azimuthal || std::abs(std::abs(p.angle) - kPi) > 1e-9)
    throw std::invalid_argument("analytic_roots_antipodal: requires azimuthal angle = ±π");
  const double theta = p.w / p.chi_n;
  if (theta >= kPi || p.w == 0.0) return {};

  const double wm = p.w - 2.0 * p.eps0;
  const double wp = p.w + 2.0 * p.eps0;
  const cplx em = std::exp(cplx(0.0, -theta));
  const cplx z1 = (wm * wm - em * wp * wp) / (1.0 - em);
  const cplx u1 = std::sqrt(z1) / 4.0;
  // Four roots ±u1, ±conj(u1) regroup into the pairs (a ± ib), (-a ± ib).
  const double a = std::abs(u1.real());
  const double b = std::abs(u1.imag());
  if (b < 1e-14 * p.chi_n) return {};
  LaxRootSet set;
  if (a < 1e-14 * p.chi_n)
    set.pairs = {cplx(0.0, b)};  // degenerate eps0 = 0: single imaginary pair location
  else
    set.pairs = {cplx(-a, b), cplx(a, b)};
  return set;
}

LaxRootSet analytic_roots_small_w(const LaxProblem& p) {
  const double n = p.chi_n;
  const double e = p.eps0;
  std::vector<cplx> roots;

  if (p.family == StateFamily::azimuthal) {
    // Quadratic in x = 4u² from the width-zero squared norm.
    const double c2 = std::cos(p.angle / 2.0) * std::cos(p.angle / 2.0);
    const cplx inner = std::sqrt(cplx(n * n * c2 * c2 - e * e, 0.0));
    const cplx x1 = e * e - 2.0 * n * n * c2 + 2.0 * n * inner;
    const cplx x2 = e * e - 2.0 * n * n * c2 - 2.0 * n * inner;
    for (cplx x : {x1, x2}) {
      const cplx r = std::sqrt(x) / 2.0;
      roots.push_back(r);
      roots.push_back(-r);
      roots.push_back(std::conj(r));
      roots.push_back(-std::conj(r));
    }
  } else if (p.family == StateFamily::elevation) {
    if (std::abs(std::abs(p.angle) - kPi) < 1e-12)
      throw std::invalid_argument("analytic_roots_small_w: elevation angle ±π is degenerate");
    const double s = std::sin(p.angle / 2.0);
    const double c = std::cos(p.angle / 2.0);
    const cplx g = std::sqrt(
        cplx(4.0 * e * e - 2.0 * n * n - 2.0 * n * (n * std::cos(p.angle) - 4.0 * e * s), 0.0));
    const cplx re = -0.25 * g;
    const cplx imterm(0.0, 0.5 * n * c);
    for (cplx r : {re + imterm, re - imterm, -re + imterm, -re - imterm}) roots.push_back(r);
  } else {
    throw std::invalid_argument("analytic_roots_small_w: unsupported state family");
  }
  return canonicalize_pairs(roots, 1e-12 * n, 1e-12 * n);
}

LaxRootSet analytic_roots_small_eps(const LaxProblem& p) {
  const double c = std::cos(p.angle / 2.0);
  if (!(c > 0.0)) return {};
  if (p.w / p.chi_n >= 2.0 * kPi * c) return {};
  if (p.w == 0.0) return {};
  const double arg = p.w / (4.0 * p.chi_n * c);  // < π/2 inside the existence region
  const double y = 0.25 * p.w / std::tan(arg);
  LaxRootSet set;
  set.pairs = {cplx(0.0, y)};
  return set;
}

namespace {

struct NewtonOutcome {
  cplx root;
  bool converged = false;
  double residual = 0.0;
};

NewtonOutcome newton_polish(cplx u0, const LaxProblem& p, const RootSearchOptions& opts) {
  NewtonOutcome out;
  cplx u = u0;
  const double domain = 10.0 * (p.chi_n + p.w + p.eps0);
  for (int it = 0; it < opts.newton_max_iter; ++it) {
    cplx q;
    try {
      q = lax_squared(u, p);
    } catch (const std::domain_error&) {
      return out;  // walked onto a cut
    }
    if (std::abs(q) < 1e-12) {
      out.root = u;
      out.converged = true;
      out.residual = std::abs(q);
      return out;
    }
    const double h = 1e-7 * std::max(std::abs(u), 1e-3 * p.chi_n);
    cplx qp, qm;
    try {
      qp = lax_squared(u + h, p);
      qm = lax_squared(u - h, p);
    } catch (const std::domain_error&) {
      return out;
    }
    const cplx dq = (qp - qm) / (2.0 * h);
    if (!(std::abs(dq) > 0.0)) return out;
    const cplx step = q / dq;
    u -= step;
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag()) || std::abs(u) > domain) return out;
    if (std::abs(step) < 1e-12 * std::max(std::abs(u), 1e-2 * p.chi_n)) {
      try {
        const double res = std::abs(lax_squared(u, p));
        out.root = u;
        out.converged = res < opts.residual_tol;
        out.residual = res;
      } catch (const std::domain_error&) {
      }
      return out;
    }
  }
  return out;
}

std::vector<cplx> polish_seeds(const std::vector<cplx>& seeds, const LaxProblem& p,
                               const RootSearchOptions& opts) {
  std::vector<cplx> found;
  for (cplx s : seeds) {
    const NewtonOutcome o = newton_polish(s, p, opts);
    if (o.converged) found.push_back(o.root);
  }
  return found;
}

std::vector<cplx> random_seeds(const LaxProblem& p, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double scale = std::max({p.chi_n, p.w, 2.0 * p.eps0});
  std::uniform_real_distribution<double> re(-1.5 * scale, 1.5 * scale);
  std::uniform_real_distribution<double> im(1e-4 * scale, 1.2 * scale);
  std::vector<cplx> s;
  s.reserve(count);
  for (int i = 0; i < count; ++i) s.emplace_back(re(rng), im(rng));
  return s;
}

RootSearchResult search_at_w(const LaxProblem& p, const std::vector<cplx>& carried,
                             int n_random, const RootSearchOptions& opts) {
  std::vector<cplx> seeds = carried;
  const auto rnd = random_seeds(p, n_random, opts.seed ^ std::hash<double>{}(p.w));
  seeds.insert(seeds.end(), rnd.begin(), rnd.end());

  std::vector<cplx> found = polish_seeds(seeds, p, opts);
  const double imag_tol = opts.imag_tol_rel * p.chi_n;
  const double dedup_tol = opts.dedup_tol_rel * p.chi_n;
  LaxRootSet set = canonicalize_pairs(found, imag_tol, dedup_tol);

  RootSearchResult res;
  if (set.n_pairs() > 2) {
    // Keep the two cleanest pairs; more than two indicates seeds trapped on
    // cut-adjacent artifacts.
    std::sort(set.pairs.begin(), set.pairs.end(), [&](cplx a, cplx b) {
      return std::abs(lax_squared(a, p)) < std::abs(lax_squared(b, p));
    });
    set.pairs.resize(2);
    std::sort(set.pairs.begin(), set.pairs.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });
    res.message = "more than two candidate pairs; kept smallest residuals";
  }
  res.roots = std::move(set);
  return res;
}

}  // namespace

RootSearchResult find_roots_numeric(const LaxProblem& p, const RootSearchOptions& opts) {
  std::vector<double> ws = {p.w};
  auto rows = find_roots_along_w(p, ws, opts);
  return rows.front();
}

std::vector<RootSearchResult> find_roots_along_w(const LaxProblem& base,
                                                 const std::vector<double>& ws,
                                                 const RootSearchOptions& opts) {
  std::vector<RootSearchResult> out;
  out.reserve(ws.size());

  // Seed ladder from below the first requested width.
  const double w0 = std::min(opts.w_start * base.chi_n,
                             ws.empty() ? opts.w_start * base.chi_n : std::max(ws.front(), 1e-12));
  LaxProblem p = base;
  std::vector<cplx> carried;
  p.w = w0;
  try {
    const LaxRootSet s = analytic_roots_small_w(p);
    carried.insert(carried.end(), s.pairs.begin(), s.pairs.end());
  } catch (const std::invalid_argument&) {
    // elevation at ±π: rely on random seeding
  }
  {
    const LaxRootSet s = analytic_roots_small_eps(p);
    carried.insert(carried.end(), s.pairs.begin(), s.pairs.end());
  }
  carried = polish_seeds(carried, p, opts);

  double w_prev = w0;
  for (double w_target : ws) {
    // Continuation from w_prev to w_target in bounded relative increments.
    const double dw = std::max((ws.back() - w0) / std::max(opts.w_steps, 1), 1e-6 * base.chi_n);
    double w = w_prev;
    while (w < w_target - 1e-12) {
      w = std::min(w + dw, w_target);
      p.w = w;
      RootSearchResult r = search_at_w(p, carried, 4, opts);
      carried.assign(r.roots.pairs.begin(), r.roots.pairs.end());
    }
    p.w = w_target;
    RootSearchResult r = search_at_w(p, carried, opts.random_seeds, opts);
    carried.assign(r.roots.pairs.begin(), r.roots.pairs.end());
    w_prev = w_target;
    out.push_back(std::move(r));
  }
  return out;
}

PhaseLabel classify_from_roots(const LaxRootSet& roots, double subphase_tol) {
  PhaseLabel label;
  label.provenance = Provenance::lax;
  switch (roots.n_pairs()) {
    case 0:
      label.phase = Phase::I;
      break;
    case 1:
      label.phase = Phase::II;
      break;
    case 2: {
      const double rm = roots.r_minus();
      const double rp = roots.r_plus();
      label.phase = (rp > 0.0 && rm / rp > subphase_tol) ? Phase::IIIa : Phase::IIIb;
      std::ostringstream d;
      d << "R-/R+ = " << (rp > 0.0 ? rm / rp : 0.0);
      label.detail = d.str();
      break;
    }
    default:
      label.phase = Phase::undetermined;
      label.detail = "unexpected pair count";
  }
  return label;
}

double critical_splitting(double chi_n, double angle) {
  return 0.5 * chi_n * (1.0 + std::cos(angle));
}

EllipticOrderParameter::EllipticOrderParameter(const LaxRootSet& roots, double r_minus_tol) {
  if (roots.n_pairs() != 2)
    throw std::invalid_argument("EllipticOrderParameter: needs two root pairs");
  const double rp = roots.r_plus();
  const double rm = roots.r_minus();
  if (!(rp > 0.0) || rm / rp > r_minus_tol)
    throw std::invalid_argument(
        "EllipticOrderParameter: solved case requires R- = 0 (pairing amplitude touching zero)");
  r_plus_ = rp;
  r_tilde_ = roots.r_tilde();
  if (!(r_tilde_ > 0.0))
    throw std::invalid_argument("EllipticOrderParameter: degenerate pairs (Rt = 0)");
}

double EllipticOrderParameter::operator()(double t) const {
  const double m = -r_plus_ / r_tilde_;
  return std::sqrt(r_plus_) * std::abs(jacobi_sn(t * std::sqrt(r_tilde_), m));
}

double EllipticOrderParameter::amplitude() const { return std::sqrt(r_plus_); }

double EllipticOrderParameter::period() const {
  const double m = -r_plus_ / r_tilde_;
  return 4.0 * elliptic_K(m) / std::sqrt(r_tilde_);
}

double delta_analytic(double t, const LaxRootSet& roots) {
  return EllipticOrderParameter(roots)(t);
}

}  // namespace bcsq

#include "bcsq/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "bcsq/version.hpp"

namespace bcsq {

using nlohmann::json;

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    const double f = count > 1 ? double(i) / (count - 1) : 0.0;
    if (log_spacing)
      v[i] = min * std::pow(max / min, f);
    else
      v[i] = min + (max - min) * f;
  }
  return v;
}

int SweepSpec::n_cells() const {
  int n = 1;
  for (const auto& a : axes) n *= a.count;
  return n;
}

void SweepSpec::validate() const {
  if (engine != "lax" && engine != "trajectory" && engine != "cavity")
    throw std::invalid_argument("SweepSpec: engine must be lax|trajectory|cavity");
  if (axes.empty() || axes.size() > 2)
    throw std::invalid_argument("SweepSpec: need 1 or 2 axes");
  for (const auto& a : axes) {
    if (a.count < 2) throw std::invalid_argument("SweepSpec: axis count must be >= 2");
    if (!(a.min < a.max)) throw std::invalid_argument("SweepSpec: axis needs min < max");
    if (a.log_spacing && !(a.min > 0.0))
      throw std::invalid_argument("SweepSpec: log axis needs min > 0");
    if (a.param != "angle" && a.param != "w_over_chin" && a.param != "eps0_over_chin")
      throw std::invalid_argument("SweepSpec: unknown axis param '" + a.param + "'");
  }
  auto have = [&](const std::string& name, const std::optional<double>& fixed) {
    for (const auto& a : axes)
      if (a.param == name) return true;
    return fixed.has_value();
  };
  if (!have("angle", angle) || !have("w_over_chin", w_over_chin) ||
      !have("eps0_over_chin", eps0_over_chin))
    throw std::invalid_argument(
        "SweepSpec: angle, w_over_chin and eps0_over_chin must each come from an axis or a fixed value");
  if (output.empty()) throw std::invalid_argument("SweepSpec: output prefix required");
}

std::string SweepSpec::canonical_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["engine"] = engine;
  j["family"] = family == StateFamily::elevation ? "elevation" : "azimuthal";
  j["axes"] = json::array();
  for (const auto& a : axes)
    j["axes"].push_back({{"param", a.param},
                         {"min", a.min},
                         {"max", a.max},
                         {"count", a.count},
                         {"spacing", a.log_spacing ? "log" : "linear"}});
  json fixed = json::object();
  if (angle) fixed["angle"] = *angle;
  if (w_over_chin) fixed["w_over_chin"] = *w_over_chin;
  if (eps0_over_chin) fixed["eps0_over_chin"] = *eps0_over_chin;
  j["fixed"] = fixed;
  if (engine == "trajectory")
    j["trajectory"] = {{"n_per_ensemble", trajectory.n_per_ensemble},
                       {"t_max", trajectory.t_max},
                       {"n_samples", trajectory.n_samples},
                       {"gamma_over_chin", trajectory.gamma_over_chin},
                       {"rel_tol", trajectory.rel_tol},
                       {"abs_tol", trajectory.abs_tol}};
  if (engine == "cavity")
    j["cavity"] = {{"n_sim", cavity.n_sim},
                   {"t_max_us", cavity.t_max_us},
                   {"n_samples", cavity.n_samples},
                   {"omega_floor_rel", cavity.omega_floor_rel},
                   {"beat_threshold_rel", cavity.beat_threshold_rel},
                   {"prominence_rel", cavity.prominence_rel}};
  j["seed"] = seed;
  return j.dump();
}

std::uint64_t SweepSpec::content_hash() const {
  return std::hash<std::string>{}(canonical_json());
}

namespace {

[[noreturn]] void unknown_key(const std::string& path) {
  throw std::invalid_argument("sweep config: unknown key " + path);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) ok = true;
    if (!ok) unknown_key(path + "." + it.key());
  }
}

}  // namespace

SweepSpec parse_sweep_spec_json(const std::string& json_text) {
  json j = json::parse(json_text);
  check_keys(j, "$",
             {"schema_version", "engine", "family", "axes", "fixed", "trajectory", "cavity",
              "output", "workers", "seed"});
  SweepSpec s;
  s.schema_version = j.value("schema_version", 1);
  if (s.schema_version != 1)
    throw std::invalid_argument("sweep config: unsupported schema_version");
  s.engine = j.value("engine", "");
  if (j.contains("family")) {
    const std::string f = j["family"];
    if (f == "azimuthal")
      s.family = StateFamily::azimuthal;
    else if (f == "elevation")
      s.family = StateFamily::elevation;
    else
      throw std::invalid_argument("sweep config: family must be azimuthal|elevation");
  }
  if (!j.contains("axes") || !j["axes"].is_array())
    throw std::invalid_argument("sweep config: axes array required");
  int ai = 0;
  for (const auto& a : j["axes"]) {
    std::ostringstream path;
    path << "$.axes[" << ai++ << "]";
    check_keys(a, path.str(), {"param", "min", "max", "count", "spacing"});
    SweepAxis ax;
    ax.param = a.at("param");
    ax.min = a.at("min");
    ax.max = a.at("max");
    ax.count = a.at("count");
    const std::string spacing = a.value("spacing", "linear");
    if (spacing != "linear" && spacing != "log")
      throw std::invalid_argument("sweep config: spacing must be linear|log at " + path.str());
    ax.log_spacing = spacing == "log";
    s.axes.push_back(ax);
  }
  if (j.contains("fixed")) {
    check_keys(j["fixed"], "$.fixed", {"angle", "w_over_chin", "eps0_over_chin"});
    const auto& f = j["fixed"];
    if (f.contains("angle")) s.angle = f["angle"].get<double>();
    if (f.contains("w_over_chin")) s.w_over_chin = f["w_over_chin"].get<double>();
    if (f.contains("eps0_over_chin")) s.eps0_over_chin = f["eps0_over_chin"].get<double>();
  }
  if (j.contains("trajectory")) {
    check_keys(j["trajectory"], "$.trajectory",
               {"n_per_ensemble", "t_max", "n_samples", "gamma_over_chin", "rel_tol", "abs_tol"});
    const auto& t = j["trajectory"];
    s.trajectory.n_per_ensemble = t.value("n_per_ensemble", s.trajectory.n_per_ensemble);
    s.trajectory.t_max = t.value("t_max", s.trajectory.t_max);
    s.trajectory.n_samples = t.value("n_samples", s.trajectory.n_samples);
    s.trajectory.gamma_over_chin = t.value("gamma_over_chin", s.trajectory.gamma_over_chin);
    s.trajectory.rel_tol = t.value("rel_tol", s.trajectory.rel_tol);
    s.trajectory.abs_tol = t.value("abs_tol", s.trajectory.abs_tol);
  }
  if (j.contains("cavity")) {
    check_keys(j["cavity"], "$.cavity",
               {"n_sim", "t_max_us", "n_samples", "omega_floor_rel", "beat_threshold_rel",
                "prominence_rel"});
    const auto& c = j["cavity"];
    s.cavity.n_sim = c.value("n_sim", s.cavity.n_sim);
    s.cavity.t_max_us = c.value("t_max_us", s.cavity.t_max_us);
    s.cavity.n_samples = c.value("n_samples", s.cavity.n_samples);
    s.cavity.omega_floor_rel = c.value("omega_floor_rel", s.cavity.omega_floor_rel);
    s.cavity.beat_threshold_rel = c.value("beat_threshold_rel", s.cavity.beat_threshold_rel);
    s.cavity.prominence_rel = c.value("prominence_rel", s.cavity.prominence_rel);
  }
  s.output = j.value("output", "");
  s.workers = j.value("workers", 0);
  s.seed = j.value("seed", std::uint64_t(0x5eedULL));
  s.validate();
  return s;
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_sweep_spec: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_spec_json(ss.str());
}

CavitySpectrumMetrics analyze_cavity_spectrum(const Trajectory& traj, double omega_floor,
                                              double beat_threshold_rel,
                                              double prominence_rel) {
  CavitySpectrumMetrics m;
  const size_t n = traj.cavity_field.size();
  if (n < 16) return m;

  std::vector<double> s(n);
  double smax = 0.0;
  for (size_t i = 0; i < n; ++i) {
    s[i] = std::norm(traj.cavity_field[i]) * std::exp(traj.gamma * traj.times[i]);
    smax = std::max(smax, s[i]);
  }
  if (!(smax > 0.0)) return m;
  double mean = 0.0;
  for (auto& v : s) {
    v /= smax;
    mean += v;
  }
  m.mean_level = mean / n;

  SpectrumOptions so;
  so.peak_prominence_rel = prominence_rel;
  const SpectrumResult sb = spectrum(s, traj.dt_sample(), so);
  for (const auto& p : sb.peaks) {
    if (p.frequency < omega_floor) continue;
    if (p.height / n >= beat_threshold_rel) ++m.n_peaks;
    if (p.height / n > m.beat_height_rel) {
      m.beat_height_rel = p.height / n;
      m.beat_freq = p.frequency;
    }
  }
  m.pair_detected = m.beat_height_rel >= beat_threshold_rel;

  const SpectrumResult sa = spectrum(traj.cavity_field, traj.dt_sample(), so);
  if (!sa.peaks.empty()) {
    m.carrier_freq = sa.signed_frequency(sa.peaks[0].frequency);
    m.carrier_height = sa.peaks[0].height;
  }
  return m;
}

namespace {

struct Cell {
  int index = 0;
  double angle = 0.0, w = 0.0, eps0 = 0.0;  // in units of chiN (bare)
};

struct GridLayout {
  std::vector<Cell> cells;
  int w_axis = -1;  // axis index sweeping w_over_chin, if any
  int count0 = 1, count1 = 1;
};

GridLayout build_grid(const SweepSpec& spec) {
  GridLayout g;
  std::vector<std::vector<double>> axis_vals;
  for (const auto& a : spec.axes) axis_vals.push_back(a.values());
  g.count0 = spec.axes[0].count;
  g.count1 = spec.axes.size() > 1 ? spec.axes[1].count : 1;
  for (size_t k = 0; k < spec.axes.size(); ++k)
    if (spec.axes[k].param == "w_over_chin") g.w_axis = static_cast<int>(k);

  const int n = g.count0 * g.count1;
  g.cells.resize(n);
  for (int i0 = 0; i0 < g.count0; ++i0) {
    for (int i1 = 0; i1 < g.count1; ++i1) {
      Cell c;
      c.index = i0 * g.count1 + i1;
      c.angle = spec.angle.value_or(0.0);
      c.w = spec.w_over_chin.value_or(0.0);
      c.eps0 = spec.eps0_over_chin.value_or(0.0);
      auto apply = [&](const SweepAxis& ax, double v) {
        if (ax.param == "angle") c.angle = v;
        else if (ax.param == "w_over_chin") c.w = v;
        else c.eps0 = v;
      };
      apply(spec.axes[0], axis_vals[0][i0]);
      if (spec.axes.size() > 1) apply(spec.axes[1], axis_vals[1][i1]);
      g.cells[c.index] = c;
    }
  }
  return g;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string lax_row(const Cell& c, const RootSearchResult& r) {
  std::ostringstream os;
  const auto& ps = r.roots.pairs;
  const PhaseLabel label = classify_from_roots(r.roots);
  os << c.index << ',' << fmt(c.angle) << ',' << fmt(c.w) << ',' << fmt(c.eps0) << ','
     << to_string(label.phase) << ',' << r.roots.n_pairs() << ','
     << (ps.size() > 0 ? fmt(ps[0].real()) : "nan") << ','
     << (ps.size() > 0 ? fmt(ps[0].imag()) : "nan") << ','
     << (ps.size() > 1 ? fmt(ps[1].real()) : "nan") << ','
     << (ps.size() > 1 ? fmt(ps[1].imag()) : "nan") << ','
     << (ps.size() == 2 && r.roots.r_plus() > 0 ? fmt(r.roots.r_minus() / r.roots.r_plus())
                                                : "nan")
     << ',' << (r.ok ? "ok" : "undetermined");
  return os.str();
}

std::string undetermined_row(const std::string& engine, const Cell& c, const std::string& why) {
  std::ostringstream os;
  os << c.index << ',' << fmt(c.angle) << ',' << fmt(c.w) << ',' << fmt(c.eps0) << ',';
  if (engine == "lax")
    os << "undetermined,0,nan,nan,nan,nan,nan,undetermined";
  else if (engine == "trajectory")
    os << "undetermined,nan,nan,nan,nan,nan,undetermined";
  else
    os << "0,0,nan,nan,nan,nan,nan,undetermined";
  (void)why;
  return os.str();
}

std::string trajectory_row(const SweepSpec& spec, const Cell& c) {
  const int n = spec.trajectory.n_per_ensemble;
  SplittingSpec ss;
  ss.kind = SplittingKind::equally_spaced;
  ss.eps0 = c.eps0;  // chiN = 1 units
  ss.w = c.w;
  ss.n_per_ensemble = n;
  const auto eps = sample_splittings(ss);

  InitialStateSpec is;
  is.family = spec.family;
  is.angle = c.angle;
  const SpinState st = prepare_initial_state(is, eps);

  ModelParams mp;
  mp.chi = 1.0 / n;
  mp.n_per_ensemble = n;
  mp.eps0 = c.eps0;
  mp.w = c.w;

  EvolutionConfig ec;
  ec.t_max = spec.trajectory.t_max;
  ec.n_samples = spec.trajectory.n_samples;
  ec.rel_tol = spec.trajectory.rel_tol;
  ec.abs_tol = spec.trajectory.abs_tol;
  ec.gamma = spec.trajectory.gamma_over_chin;  // chiN = 1

  Trajectory traj = integrate(st, mp, ec);
  traj.angle = c.angle;
  const TrajectoryMetrics m = trajectory_metrics(traj);

  std::ostringstream os;
  os << c.index << ',' << fmt(c.angle) << ',' << fmt(c.w) << ',' << fmt(c.eps0) << ','
     << to_string(m.label.phase) << ',' << fmt(m.mean_abs_delta) << ',' << fmt(m.amplitude)
     << ',' << fmt(m.min_over_max) << ',' << (m.omega_osc ? fmt(*m.omega_osc) : "nan") << ','
     << fmt(m.jz_max) << ",ok";
  return os.str();
}

std::string cavity_row(const SweepSpec& spec, const Cell& c) {
  CavityParams cp;
  cp.n_sim = spec.cavity.n_sim;
  const double chin = cp.chi_n_bare();

  EvolutionConfig ec;
  ec.t_max = spec.cavity.t_max_us * 1e-6;
  ec.n_samples = spec.cavity.n_samples;
  ec.dt_initial = 1e-9;
  ec.rel_tol = 1e-8;
  ec.abs_tol = 1e-10;

  const Trajectory traj =
      run_cavity_experiment(c.angle, c.eps0 * chin, c.w * chin, cp, ec);
  const double floor = spec.cavity.omega_floor_rel * std::max(c.eps0 * chin, 0.05 * chin);
  const CavitySpectrumMetrics m =
      analyze_cavity_spectrum(traj, floor, spec.cavity.beat_threshold_rel,
                              spec.cavity.prominence_rel);

  std::ostringstream os;
  os << c.index << ',' << fmt(c.angle) << ',' << fmt(c.w) << ',' << fmt(c.eps0) << ','
     << m.n_peaks << ',' << (m.pair_detected ? 1 : 0) << ',' << fmt(m.beat_freq) << ','
     << fmt(m.beat_height_rel) << ',' << fmt(m.carrier_freq) << ',' << fmt(m.carrier_height)
     << ',' << fmt(m.mean_level) << ",ok";
  return os.str();
}

const char* header_for(const std::string& engine) {
  if (engine == "lax")
    return "cell,angle,w_over_chin,eps0_over_chin,phase,n_pairs,u1_re,u1_im,u2_re,u2_im,"
           "r_minus_over_r_plus,status";
  if (engine == "trajectory")
    return "cell,angle,w_over_chin,eps0_over_chin,phase,mean_abs_delta,amplitude,min_over_max,"
           "omega_osc,jz_max,status";
  return "cell,angle,w_over_chin,eps0_over_chin,n_peaks,pair_detected,beat_freq,"
         "beat_height_rel,carrier_freq,carrier_height,mean_level,status";
}

int resolve_workers(const SweepSpec& spec) {
  if (spec.workers > 0) return spec.workers;
  if (const char* env = std::getenv("BCSQ_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 2;
}

}  // namespace

SweepSummary run_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto t_start = std::chrono::steady_clock::now();
  const GridLayout grid = build_grid(spec);
  const int n_cells = static_cast<int>(grid.cells.size());

  const std::string csv_path = spec.output + ".csv";
  const std::string partial_path = spec.output + ".partial.csv";
  const std::string manifest_path = spec.output + ".manifest.json";
  if (!std::filesystem::path(spec.output).parent_path().empty())
    std::filesystem::create_directories(std::filesystem::path(spec.output).parent_path());

  // Resume bookkeeping: a partial file from an identical spec lets finished
  // cells be skipped; anything else starts clean.
  std::vector<std::string> rows(n_cells);
  std::vector<char> done(n_cells, 0);
  bool resumed = false;
  if (std::filesystem::exists(partial_path) && std::filesystem::exists(manifest_path)) {
    try {
      std::ifstream mf(manifest_path);
      json m = json::parse(mf);
      if (m.value("spec_hash", std::string()) == std::to_string(spec.content_hash()) &&
          !m.value("complete", true)) {
        std::ifstream pf(partial_path);
        std::string line;
        while (std::getline(pf, line)) {
          if (line.empty()) continue;
          const int idx = std::atoi(line.c_str());
          if (idx >= 0 && idx < n_cells && !line.ends_with(",undetermined")) {
            rows[idx] = line;
            done[idx] = 1;
            resumed = true;
          }
        }
      }
    } catch (...) {
      resumed = false;
      std::fill(done.begin(), done.end(), 0);
    }
  }

  {
    json m;
    m["schema_version"] = 1;
    m["complete"] = false;
    m["spec"] = json::parse(spec.canonical_json());
    m["spec_hash"] = std::to_string(spec.content_hash());
    m["code_version"] = BCSQ_VERSION;
    std::ofstream mf(manifest_path);
    mf << m.dump(2) << "\n";
  }

  std::ofstream partial(partial_path, std::ios::app);
  std::mutex partial_mutex;
  std::atomic<int> undetermined{0};

  auto eval_cell = [&](const Cell& c) -> std::string {
    try {
      if (spec.engine == "trajectory") return trajectory_row(spec, c);
      if (spec.engine == "cavity") return cavity_row(spec, c);
      LaxProblem p{1.0, c.eps0, c.w, spec.family, c.angle};
      RootSearchOptions opts;
      opts.seed = spec.seed;
      const RootSearchResult r = find_roots_numeric(p, opts);
      if (!r.ok) ++undetermined;
      return lax_row(c, r);
    } catch (const std::exception& e) {
      ++undetermined;
      return undetermined_row(spec.engine, c, e.what());
    }
  };

  auto commit = [&](int index, std::string row) {
    rows[index] = row;
    std::lock_guard<std::mutex> lock(partial_mutex);
    partial << row << "\n";
    partial.flush();
  };

  // Job decomposition: the continuation axis of the lax engine is processed
  // as whole rows (ascending w); everything else is per cell.
  std::vector<std::function<void()>> jobs;
  if (spec.engine == "lax" && grid.w_axis >= 0) {
    const bool w_is_inner = grid.w_axis == 1 || spec.axes.size() == 1;
    const int n_rows = spec.axes.size() == 1 ? 1 : (grid.w_axis == 0 ? grid.count1 : grid.count0);
    for (int row = 0; row < n_rows; ++row) {
      jobs.push_back([&, row]() {
        std::vector<const Cell*> line;
        for (const Cell& c : grid.cells) {
          const int i0 = c.index / grid.count1;
          const int i1 = c.index % grid.count1;
          const int fixed_idx = spec.axes.size() == 1 ? 0 : (grid.w_axis == 0 ? i1 : i0);
          if (fixed_idx == row) line.push_back(&c);
        }
        std::sort(line.begin(), line.end(),
                  [](const Cell* a, const Cell* b) { return a->w < b->w; });
        bool all_done = true;
        for (const Cell* c : line)
          if (!done[c->index]) all_done = false;
        if (all_done) return;

        LaxProblem base{1.0, line.front()->eps0, 0.0, spec.family, line.front()->angle};
        std::vector<double> ws;
        for (const Cell* c : line) ws.push_back(c->w);
        RootSearchOptions opts;
        opts.seed = spec.seed;
        try {
          const auto results = find_roots_along_w(base, ws, opts);
          for (size_t k = 0; k < line.size(); ++k) {
            if (done[line[k]->index]) continue;
            if (!results[k].ok) ++undetermined;
            commit(line[k]->index, lax_row(*line[k], results[k]));
          }
        } catch (const std::exception& e) {
          for (const Cell* c : line)
            if (!done[c->index]) {
              ++undetermined;
              commit(c->index, undetermined_row(spec.engine, *c, e.what()));
            }
        }
        (void)w_is_inner;
      });
    }
  } else {
    for (const Cell& c : grid.cells) {
      if (done[c.index]) continue;
      jobs.push_back([&, &c = grid.cells[c.index]]() { commit(c.index, eval_cell(c)); });
    }
  }

  const int workers = std::min<int>(resolve_workers(spec), std::max<size_t>(jobs.size(), 1));
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      jobs[k]();
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  partial.close();

  std::ofstream out(csv_path);
  out << header_for(spec.engine) << "\n";
  for (const auto& r : rows) out << r << "\n";
  out.close();

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  {
    json m;
    m["schema_version"] = 1;
    m["complete"] = true;
    m["spec"] = json::parse(spec.canonical_json());
    m["spec_hash"] = std::to_string(spec.content_hash());
    m["code_version"] = BCSQ_VERSION;
    m["wall_time_s"] = wall;
    m["cells"] = n_cells;
    m["undetermined"] = undetermined.load();
    m["tolerances"] = {{"classify_tol_I", ClassifyThresholds{}.tol_I},
                       {"classify_tol_II", ClassifyThresholds{}.tol_II},
                       {"classify_tol_zero", ClassifyThresholds{}.tol_zero},
                       {"root_residual_tol", RootSearchOptions{}.residual_tol},
                       {"root_imag_tol_rel", RootSearchOptions{}.imag_tol_rel}};
    std::ofstream mf(manifest_path);
    mf << m.dump(2) << "\n";
  }
  std::filesystem::remove(partial_path);

  SweepSummary sum;
  sum.cells = n_cells;
  sum.undetermined = undetermined.load();
  sum.wall_time_s = wall;
  sum.resumed = resumed;
  sum.csv_path = csv_path;
  sum.manifest_path = manifest_path;
  return sum;
}

}  // namespace bcsq

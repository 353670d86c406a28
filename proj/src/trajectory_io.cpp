#include "bcsq/trajectory_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bcsq {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trajectory_csv: cannot open " + path);
  const bool cavity = !traj.cavity_field.empty();
  out << "t,re_delta,im_delta,abs_delta,jz,energy,mean_norm";
  if (cavity) out << ",re_a,im_a,abs_a_sq";
  out << "\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    out << fmt(traj.times[i]) << ',' << fmt(traj.delta[i].real()) << ','
        << fmt(traj.delta[i].imag()) << ',' << fmt(std::abs(traj.delta[i])) << ','
        << fmt(traj.jz[i]) << ',' << fmt(traj.energy[i]) << ',' << fmt(traj.mean_norm[i]);
    if (cavity) {
      const auto a = traj.cavity_field[i];
      out << ',' << fmt(a.real()) << ',' << fmt(a.imag()) << ',' << fmt(std::norm(a));
    }
    out << "\n";
  }
}

void write_trajectory_json(const Trajectory& traj, const std::string& path) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["meta"] = {{"chi", traj.chi},
               {"chi_n", traj.chi_n},
               {"gamma", traj.gamma},
               {"angle", traj.angle},
               {"n_samples", traj.times.size()}};
  j["t"] = traj.times;
  std::vector<double> re, im, ab;
  re.reserve(traj.delta.size());
  for (auto d : traj.delta) {
    re.push_back(d.real());
    im.push_back(d.imag());
    ab.push_back(std::abs(d));
  }
  j["re_delta"] = re;
  j["im_delta"] = im;
  j["abs_delta"] = ab;
  j["jz"] = traj.jz;
  j["energy"] = traj.energy;
  j["mean_norm"] = traj.mean_norm;
  if (!traj.cavity_field.empty()) {
    std::vector<double> ra, ia, a2;
    for (auto a : traj.cavity_field) {
      ra.push_back(a.real());
      ia.push_back(a.imag());
      a2.push_back(std::norm(a));
    }
    j["re_a"] = ra;
    j["im_a"] = ia;
    j["abs_a_sq"] = a2;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trajectory_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

std::map<std::string, std::vector<double>> read_csv_columns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv_columns: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv_columns: empty file");
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  std::map<std::string, std::vector<double>> cols;
  for (const auto& n : names) cols[n] = {};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    size_t k = 0;
    while (std::getline(ss, cell, ',') && k < names.size()) {
      cols[names[k]].push_back(std::stod(cell));
      ++k;
    }
  }
  return cols;
}

}  // namespace bcsq

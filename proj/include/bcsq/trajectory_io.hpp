#pragma once

#include <map>
#include <string>
#include <vector>

#include "bcsq/dynamics.hpp"

namespace bcsq {

/**
 * Trajectory files. CSV column order is fixed:
 *   t, re_delta, im_delta, abs_delta, jz, energy, mean_norm
 * with re_a, im_a, abs_a_sq appended when the trajectory carries a cavity
 * field. JSON mirrors the same columns as arrays plus run metadata.
 */
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
void write_trajectory_json(const Trajectory& traj, const std::string& path);

/// Named columns of a trajectory-style CSV (header required).
std::map<std::string, std::vector<double>> read_csv_columns(const std::string& path);

}  // namespace bcsq

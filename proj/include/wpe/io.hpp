#pragma once

#include <string>
#include <vector>

#include "wpe/model.hpp"
#include "wpe/ode.hpp"

namespace wpe {

// 17 significant digits: lossless double round trip
std::string format_g17(double x);

// RFC-4180-style CSV, header row, '.' decimal separator; written atomically.
// Columns: t, <state columns>, mu (when logged), C (when logged).
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// sidecar metadata (spec, solver, termination, events)
std::string trajectory_meta_json(const Trajectory& traj);
void write_trajectory_meta(const std::string& csv_path, const Trajectory& traj);

// Reads a trajectory written by the pair above; looks for "<path>.json".
Trajectory read_trajectory(const std::string& csv_path);

std::string reports_to_json(const std::vector<CheckReport>& reports, bool all_ok);

void atomic_write(const std::string& path, const std::string& content);

}  // namespace wpe

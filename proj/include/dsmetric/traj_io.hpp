#pragma once

#include <string>

#include "dsmetric/trajectories.hpp"

namespace dsmetric {

// shortest exact decimal few tools disagree on: 17 significant digits
std::string format_g17(double v);

// Trajectory CSV:
//   # n_seq=<N> len=<T> dim=<d> complex=<0|1>
//   seq_idx,t,re_1[,im_1],...,re_d[,im_d]
// one row per (sequence, time); imaginary columns only when complex=1.
// Observable scales are folded into the values on write.
std::string trajectory_to_csv(const TrajectorySet& ts);
TrajectorySet trajectory_from_csv(const std::string& text, const std::string& origin = "<memory>");

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
TrajectorySet load_trajectory(const std::string& path);

}  // namespace dsmetric

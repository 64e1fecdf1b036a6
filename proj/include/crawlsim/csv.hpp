#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "crawlsim/analysis.hpp"
#include "crawlsim/solver.hpp"

namespace crawlsim {

/// Header `t,x1..xn,v1..vn` (full) or `t,z1..z(n-1),v1..vn` (reduced);
/// floats with 17 significant digits, so emission is byte-deterministic.
std::string trajectory_csv(const Trajectory& traj);

/// Header `t,z1..z(n-1),v1..vn` over one period of the cycle.
std::string cycle_csv(const LimitCycle& cycle);

/// Writes via a temp file in the target directory plus rename.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace crawlsim

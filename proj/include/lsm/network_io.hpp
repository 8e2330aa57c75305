#pragma once

#include <iosfwd>
#include <string>

#include "lsm/generators.hpp"
#include "lsm/trajectory.hpp"

namespace lsm {

/// Parse a network document. Errors are SchemaError naming the offending field.
[[nodiscard]] Problem read_network(std::istream& is);
[[nodiscard]] Problem load_network(const std::string& path);

void write_network(std::ostream& os, const Problem& p);
void save_network(const std::string& path, const Problem& p);

/// time, y_0..y_{m-1} (in R^m), sigma_0..sigma_{m-1}
void write_states_csv(std::ostream& os, const Trajectory& traj, const MovingSetSpec& spec);

} // namespace lsm

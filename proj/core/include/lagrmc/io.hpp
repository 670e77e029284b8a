#pragma once

// Serialization helpers: shortest round-trip decimal formatting (so CSV
// output reparses to the exact same doubles), CSV emitters for event logs
// and checkpoints, and atomic file writes (temp + rename) so readers never
// observe a half-written artifact.

#include <filesystem>
#include <string>
#include <string_view>

#include "lagrmc/simulator.hpp"

namespace lagrmc::io {

// Shortest decimal string that parses back to exactly v.
std::string format_double(double v);

// Writes content to path via a temp file in the same directory plus rename.
// Creates parent directories. Throws IoError on any filesystem failure.
void atomic_write(const std::filesystem::path& path, std::string_view content);

// Boundary events, one row per reflection:
// t,id,hit_0..hit_{d-1},u_minus_0..,u_plus_0..
std::string events_csv(const EventLog& log);

// Particle snapshot at a checkpoint:
// id,x_0..,u_0..,k_0..,jumps
std::string checkpoint_csv(const Checkpoint& cp, int d);

// Canonical file name for a checkpoint time (shortest round-trip digits,
// '.' kept: "checkpoints/<t>.csv").
std::string checkpoint_filename(double t);

} // namespace lagrmc::io

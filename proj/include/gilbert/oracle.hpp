#pragma once

// Reference constructions used to cross-check the event-driven engine.
// Both are quadratic-or-worse and refuse inputs above kOracleMaxSeeds.

#include "gilbert/engine.hpp"

#include <vector>

namespace gilbert::oracle {

inline constexpr std::size_t kOracleMaxSeeds = 200;

/// Lengths indexed 2 * config_index + sign (Plus = 0, Minus = 1).
using LengthTable = std::vector<ExtLength>;

LengthTable lengths_of(const Tessellation& tess);

/// Discrete-time growth: every live tip advances by dt per step and freezes
/// when its swept piece crosses a branch present at the crossing time.
/// Steps that provably contain no contact are skipped in bulk.
LengthTable build_timestep(const MarkedConfig& config, double dt);

/// Jacobi iteration of "earliest valid block" from all-infinite lengths.
LengthTable build_fixedpoint(const MarkedConfig& config);

/// One sweep of the fixed-point map applied to `current`.
LengthTable fixedpoint_sweep(const MarkedConfig& config, const LengthTable& current);

}  // namespace gilbert::oracle

#pragma once

// Serialization: tessellation JSON, SVG renders, CSV tables.
// Floats in data files use 17 significant digits; infinities are "inf".

#include "gilbert/engine.hpp"
#include "gilbert/stats.hpp"
#include "gilbert/window.hpp"

#include <string>
#include <string_view>

namespace gilbert::io {

/// %.17g, with "inf", "-inf" and "nan" spelled out.
std::string format_double(double v);
/// Inverse of format_double; throws IoError on malformed text.
double parse_double(std::string_view text);

/// Seeds, branch lengths, blockers and collision events.
std::string tessellation_json(const Tessellation& tess);

/// Seed file: JSON list of {x, y, alpha}; ids follow list order.
MarkedConfig config_from_json(std::string_view text);
std::string config_to_json(const MarkedConfig& config);

/// One <path> per branch, infinite branches clipped to `window`, seeds as
/// dots, window frame. Output depends only on the inputs.
std::string render_svg(const Tessellation& tess, const Window& window);

/// Columns: lambda, estimate, std_error, target, n_rep, certified_fraction,
/// master_seed.
std::string table_csv(const stats::Table& table);
stats::Table table_from_csv(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace gilbert::io

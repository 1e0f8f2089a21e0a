#ifndef DICKE_TOOLS_SVG_HPP
#define DICKE_TOOLS_SVG_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "dicke/experiments.hpp"

namespace dicke {

// Render columns of a result table as a standalone SVG line plot.
// Deterministic output, no external assets; log axes clip values at
// 1e-16.  Rejects missing columns, fewer than 2 rows, and degenerate
// (all-equal) x ranges.
void emit_svg(const ExperimentResult& table, const std::string& x_col,
              const std::vector<std::string>& y_cols,
              const std::filesystem::path& path, bool log_x = false,
              bool log_y = false);

}  // namespace dicke

#endif

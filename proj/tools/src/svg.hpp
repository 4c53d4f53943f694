#pragma once

#include <string>

#include "nmcopula/matrix.hpp"

namespace nmcopula::cli {

/// Self-contained SVG documents on a fixed 800 x 800 viewBox.

/// Scatter of the first two columns of `points` (values in [0, 1]).
std::string scatter_svg(const RowMatrix& points, const std::string& x_label,
                        const std::string& y_label, const std::string& title);

/// Heatmap of grid(i, j) with i along u1 and j along u2 (row i = column of
/// cells at u1 index i). Large grids are subsampled to at most 200 x 200
/// cells.
std::string heatmap_svg(const RowMatrix& grid, const std::string& title);

std::string xml_escape(const std::string& s);

}  // namespace nmcopula::cli

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "nmcopula/matrix.hpp"
#include "nmcopula/copula_core.hpp"

namespace nmcopula::cli {

/// Runs one command line (without the program name). Returns the process
/// exit status: 0 on success, 1 for usage errors, 2 for library errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Density on the res x res midpoint lattice ((i + 1/2)/res, (j + 1/2)/res).
/// Normal mode cosines are phase-reduced on the integer lattice, so the
/// symmetries cos(k pi (1 - u)) = (-1)^k cos(k pi u) hold bit for bit.
RowMatrix density_grid(const CopulaModel& model, int resolution);

}  // namespace nmcopula::cli

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ddesteps/core.hpp"

namespace ddesteps {

/// Writes `t,x0,...,x{d-1}` rows, one per stored node, times and values
/// printed with 17 significant digits (round-trip exact for doubles).
/// A diverged trajectory gets a trailing `# diverged_at=<flat>` comment.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

/// Parsed form of the CSV above; used for round-trip checks and by tests.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<double> times;
    std::vector<double> values;  ///< rows * dim, row-major
    int dim = 0;
    std::optional<std::size_t> diverged_at;

    [[nodiscard]] std::size_t rows() const { return times.size(); }
};

CsvTable read_trajectory_csv(std::istream& is);

/// One double as the CSV/report writers print it ("%.17g").
std::string format_g17(double x);

}  // namespace ddesteps

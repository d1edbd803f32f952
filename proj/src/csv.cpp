#include "ddesteps/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace ddesteps {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    os << "t";
    for (int i = 0; i < traj.dim; ++i) os << ",x" << i;
    os << "\n";
    for (std::size_t m = 0; m < traj.nodes(); ++m) {
        os << format_g17(traj.mesh.time_at(m));
        auto s = traj.state(m);
        for (double v : s) os << "," << format_g17(v);
        os << "\n";
    }
    if (traj.diverged) os << "# diverged_at=" << traj.diverged_at << "\n";
}

CsvTable read_trajectory_csv(std::istream& is) {
    CsvTable table;
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("empty trajectory CSV");
    {
        std::stringstream header(line);
        std::string cell;
        while (std::getline(header, cell, ',')) table.header.push_back(cell);
    }
    if (table.header.empty() || table.header[0] != "t")
        throw ConfigError("trajectory CSV must start with a 't' column");
    table.dim = static_cast<int>(table.header.size()) - 1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# diverged_at=", 0) == 0) {
            table.diverged_at = std::strtoull(line.c_str() + 14, nullptr, 10);
            continue;
        }
        std::stringstream row(line);
        std::string cell;
        int col = 0;
        while (std::getline(row, cell, ',')) {
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw ConfigError("bad CSV number: " + cell);
            if (col == 0)
                table.times.push_back(v);
            else
                table.values.push_back(v);
            ++col;
        }
        if (col != table.dim + 1) throw ConfigError("ragged trajectory CSV row");
    }
    return table;
}

}  // namespace ddesteps

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "veemap/design.hpp"
#include "veemap/propagate.hpp"

namespace veemap {

// %.15e, '.' decimal point regardless of locale
std::string fmt_real(double x);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// columns: time, pop_<j><n> ..., norm
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);

void write_mapping_csv(std::ostream& os, const std::vector<MappingSolution>& sols);

}  // namespace veemap

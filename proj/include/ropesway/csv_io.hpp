#pragma once

#include <string>

#include "ropesway/simulation.hpp"

namespace ropesway {

// Writes content to path via a temp file in the same directory plus an
// atomic rename, so readers never observe a partial file. Throws IoError.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);  // throws IoError

// CSV serialization: header `t,q1..qN,qd1..qdN,sway_y<probe>,U_cmd,U_app,V,
// in_S1,in_S2`, 17-significant-digit numbers, LF endings.
std::string sim_result_csv(const SimResult& res);

// Scalar run metrics as key=value lines.
std::string summary_text(const SimResult& res);

// Side-by-side probe traces of the modal model and the finite-difference
// oracle (`t,sway_modal,sway_pde`), same number format as sim_result_csv.
struct PdeCompareReport;
std::string pde_compare_csv(const PdeCompareReport& report);

}  // namespace ropesway

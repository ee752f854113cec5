#include "ropesway/csv_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ropesway/errors.hpp"
#include "ropesway/pde_solver.hpp"

namespace fs = std::filesystem;

namespace ropesway {
namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Probe-station column suffix: trailing zeros stripped (195.0 → "195").
std::string station_tag(double y) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", y);
  return buf;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec)
      throw IoError("cannot create directory '" +
                    target.parent_path().string() + "': " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw IoError("write failed for '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move temporary file onto '" + path +
                  "': " + ec.message());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string sim_result_csv(const SimResult& res) {
  std::ostringstream out;
  out << "t";
  for (int j = 1; j <= res.modes; ++j) out << ",q" << j;
  for (int j = 1; j <= res.modes; ++j) out << ",qd" << j;
  out << ",sway_y" << station_tag(res.probe_y) << ",U_cmd,U_app,V,in_S1,in_S2\n";
  for (std::size_t k = 0; k < res.rows(); ++k) {
    out << fmt(res.t[k]);
    for (int j = 0; j < res.modes; ++j) out << "," << fmt(res.q[k](j));
    for (int j = 0; j < res.modes; ++j) out << "," << fmt(res.qd[k](j));
    out << "," << fmt(res.sway_probe[k]) << "," << fmt(res.u_cmd[k]) << ","
        << fmt(res.u_app[k]) << "," << fmt(res.v[k]) << ","
        << int(res.in_s1[k]) << "," << int(res.in_s2[k]) << "\n";
  }
  return out.str();
}

std::string summary_text(const SimResult& res) {
  const SimSummary& s = res.summary;
  const double decay =
      s.v_initial > 0.0 ? s.v_final / s.v_initial : 0.0;
  std::ostringstream out;
  out << "scenario=" << res.scenario << "\n";
  out << "modes=" << res.modes << "\n";
  out << "seed=" << res.seed << "\n";
  out << "dt=" << fmt(res.dt) << "\n";
  out << "probe_y=" << fmt(res.probe_y) << "\n";
  out << "peak_sway=" << fmt(s.peak_sway) << "\n";
  out << "steady_max=" << fmt(s.steady_max) << "\n";
  out << "u_applied_max=" << fmt(s.u_applied_max) << "\n";
  out << "v_initial=" << fmt(s.v_initial) << "\n";
  out << "v_final=" << fmt(s.v_final) << "\n";
  out << "v_decay_ratio=" << fmt(decay) << "\n";
  return out.str();
}

std::string pde_compare_csv(const PdeCompareReport& report) {
  std::ostringstream out;
  out << "t,sway_modal,sway_pde\n";
  for (std::size_t i = 0; i < report.t.size(); ++i)
    out << fmt(report.t[i]) << ',' << fmt(report.modal_trace[i]) << ','
        << fmt(report.pde_trace[i]) << '\n';
  return out.str();
}

}  // namespace ropesway

#pragma once

#include "vpfp/diagnostics.hpp"
#include "vpfp/scenarios.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace vpfp {

/// 17 significant digits, enough to round-trip a double.
std::string format_double(double value);

/// Comma-separated file with a fixed header; every row must match its width.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<double>& values);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t width_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
/// Marker written last; its absence flags an incomplete run.
void write_done(const std::filesystem::path& dir);

// dt,error_l1
void write_convergence_csv(const std::filesystem::path& path, const ConvergenceResult& res);
// t,e_ap_global
void write_ap_csv(const std::filesystem::path& path, const TimeSeries& series);
// t,x,rho,efield
void write_fields_csv(const std::filesystem::path& path, const std::vector<Snapshot>& snaps,
                      const PhaseGrid& grid);
// t,x,v,f
void write_phase_csv(const std::filesystem::path& path, const std::vector<Snapshot>& snaps,
                     const PhaseGrid& grid);
/// Same layout as phase.csv with f = |a - b|.
void write_phase_diff_csv(const std::filesystem::path& path, const std::vector<Snapshot>& a,
                          const std::vector<Snapshot>& b, const PhaseGrid& grid);
// t,x,eps,e_ap
void write_pointwise_ap_csv(const std::filesystem::path& path, const std::vector<Snapshot>& snaps,
                            const Vec& eps, const PhaseGrid& grid);

/// X.csv, S.csv, V.csv (plain matrices) plus factors.json (grid, rank, time).
void write_lowrank_factors(const std::filesystem::path& dir, const LowRankState& state,
                           const PhaseGrid& grid, double time);

nlohmann::json grid_json(const PhaseGrid& grid);
nlohmann::json to_json(const APConstants& c);
nlohmann::json to_json(const CoercivityReport& r);
nlohmann::json to_json(const ProjectionReport& r);
nlohmann::json to_json(const ResidualCertificate& r);

}  // namespace vpfp

#include "vpfp/artifacts.hpp"

#include <cmath>
#include <cstdio>

namespace vpfp {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("artifacts", "cannot write '" + path.string() + "'");
  return out;
}

// JSON has no infinity; +inf becomes null.
nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

CsvWriter::CsvWriter(const fs::path& path, std::vector<std::string> header)
    : path_(path), out_(open_for_write(path)), width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) {
    throw DimensionError("artifacts", "CSV row width mismatch in '" + path_.string() + "'");
  }
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
  if (!out_) throw Error("artifacts", "write failed for '" + path_.string() + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_for_write(path);
  out << text;
  if (!out) throw Error("artifacts", "write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

void write_done(const fs::path& dir) { write_text(dir / "done", "ok\n"); }

void write_convergence_csv(const fs::path& path, const ConvergenceResult& res) {
  CsvWriter csv(path, {"dt", "error_l1"});
  for (std::size_t k = 0; k < res.dts.size(); ++k) csv.row({res.dts[k], res.errors[k]});
}

void write_ap_csv(const fs::path& path, const TimeSeries& series) {
  CsvWriter csv(path, {"t", "e_ap_global"});
  for (std::size_t n = 0; n < series.t.size(); ++n) csv.row({series.t[n], series.value[n]});
}

void write_fields_csv(const fs::path& path, const std::vector<Snapshot>& snaps,
                      const PhaseGrid& grid) {
  CsvWriter csv(path, {"t", "x", "rho", "efield"});
  for (const Snapshot& s : snaps) {
    for (int p = 0; p < grid.nx(); ++p) csv.row({s.t, grid.x()[p], s.rho[p], s.efield[p]});
  }
}

void write_phase_csv(const fs::path& path, const std::vector<Snapshot>& snaps,
                     const PhaseGrid& grid) {
  CsvWriter csv(path, {"t", "x", "v", "f"});
  for (const Snapshot& s : snaps) {
    for (int p = 0; p < grid.nx(); ++p) {
      for (int q = 0; q < grid.nv(); ++q) csv.row({s.t, grid.x()[p], grid.v()[q], s.f(p, q)});
    }
  }
}

void write_phase_diff_csv(const fs::path& path, const std::vector<Snapshot>& a,
                          const std::vector<Snapshot>& b, const PhaseGrid& grid) {
  if (a.size() != b.size()) throw DimensionError("artifacts", "snapshot lists differ in length");
  std::vector<Snapshot> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff[i].t = a[i].t;
    diff[i].f = (a[i].f - b[i].f).cwiseAbs();
  }
  write_phase_csv(path, diff, grid);
}

void write_pointwise_ap_csv(const fs::path& path, const std::vector<Snapshot>& snaps,
                            const Vec& eps, const PhaseGrid& grid) {
  CsvWriter csv(path, {"t", "x", "eps", "e_ap"});
  for (const Snapshot& s : snaps) {
    for (int p = 0; p < grid.nx(); ++p) csv.row({s.t, grid.x()[p], eps[p], s.ap_pointwise[p]});
  }
}

namespace {

void write_matrix(const fs::path& path, const Mat& m) {
  std::ofstream out = open_for_write(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

}  // namespace

void write_lowrank_factors(const fs::path& dir, const LowRankState& state, const PhaseGrid& grid,
                           double time) {
  write_matrix(dir / "X.csv", state.x);
  write_matrix(dir / "S.csv", state.s);
  write_matrix(dir / "V.csv", state.v);
  nlohmann::json j;
  j["grid"] = grid_json(grid);
  j["rank"] = state.rank();
  j["time"] = time;
  j["files"] = {{"x", "X.csv"}, {"s", "S.csv"}, {"v", "V.csv"}};
  write_json(dir / "factors.json", j);
}

nlohmann::json grid_json(const PhaseGrid& grid) {
  return {{"x_min", grid.x_min()}, {"x_max", grid.x_max()}, {"nx", grid.nx()},
          {"v_min", grid.v_min()}, {"v_max", grid.v_max()}, {"nv", grid.nv()},
          {"dx", grid.dx()},       {"dv", grid.dv()}};
}

nlohmann::json to_json(const APConstants& c) {
  return {{"lambda_n", c.lambda_n},
          {"gamma_h", c.gamma_h},
          {"kappa_h", c.kappa_h},
          {"theta", number(c.theta)},
          {"m_min", c.m_min},
          {"m_max", c.m_max},
          {"delta_beta_inf", c.delta_beta_inf},
          {"beta_bar", c.beta_bar},
          {"c_beta", c.c_beta},
          {"alpha_min", c.alpha_min},
          {"alpha_max", c.alpha_max},
          {"assumption_ok", c.assumption_ok}};
}

nlohmann::json to_json(const CoercivityReport& r) {
  return {{"trials", r.trials},
          {"violations", r.violations},
          {"min_ratio", number(r.min_ratio)},
          {"gamma_h", r.gamma_h},
          {"passed", r.passed}};
}

nlohmann::json to_json(const ProjectionReport& r) {
  return {{"trials", r.trials},       {"violations", r.violations}, {"kappa_h", r.kappa_h},
          {"max_lhs", r.max_lhs},     {"max_ratio", r.max_ratio},   {"passed", r.passed}};
}

nlohmann::json to_json(const ResidualCertificate& r) {
  return {{"constants", to_json(r.constants)},
          {"eps", r.eps},
          {"g_norm", r.g_norm},
          {"residual", r.residual},
          {"residual_bound", number(r.residual_bound)},
          {"distance", r.distance},
          {"distance_bound", number(r.distance_bound)},
          {"projected_defect", r.projected_defect},
          {"residual_ok", r.residual_ok},
          {"distance_ok", r.distance_ok},
          {"vacuous", !r.constants.assumption_ok},
          {"passed", r.passed}};
}

}  // namespace vpfp

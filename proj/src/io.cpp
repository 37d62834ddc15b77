#include "burgers/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "burgers/errors.hpp"

namespace burgers::io {

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace

void ensure_writable_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

void write_profile_csv(const fs::path& path, const ModeField& w) {
  std::ofstream out = open_out(path);
  out << "r";
  for (int n = 0; n <= w.n_modes(); ++n) out << ",mode_re_" << n << ",mode_im_" << n;
  out << "\n";
  const Eigen::MatrixXcd c = w.physical();
  const Eigen::VectorXd& r = w.grid().nodes();
  for (int j = 0; j < w.n_r(); ++j) {
    out << r(j);
    for (int n = 0; n <= w.n_modes(); ++n) out << "," << c(j, n).real() << "," << c(j, n).imag();
    out << "\n";
  }
  finish(out, path);
}

void write_field_csv(const fs::path& path, const ModeField& w, int theta_points, double r_limit) {
  std::ofstream out = open_out(path);
  out << "x1,x2,value\n";
  const Eigen::MatrixXd vals = synthesize(w, theta_points);
  const Eigen::VectorXd& r = w.grid().nodes();
  for (int j = 0; j < w.n_r() && r(j) <= r_limit; ++j)
    for (int m = 0; m < theta_points; ++m) {
      const double th = 2.0 * std::numbers::pi * m / theta_points;
      out << r(j) * std::cos(th) << "," << r(j) * std::sin(th) << "," << vals(j, m) << "\n";
    }
  finish(out, path);
}

void write_winfty_csv(const fs::path& path, const WInftyProfile& p) {
  std::ofstream out = open_out(path);
  out << "r,psi_plus,psi_minus,Omega,omega\n";
  const Eigen::VectorXd& r = p.homogeneous.grid->nodes();
  for (Eigen::Index j = 0; j < r.size(); ++j)
    out << r(j) << "," << p.homogeneous.psi_plus(j) << "," << p.homogeneous.psi_minus(j) << ","
        << p.Omega(j) << "," << p.omega(j) << "\n";
  finish(out, path);
}

void write_trajectory_csv(const fs::path& path, const std::vector<EnergySample>& samples) {
  std::ofstream out = open_out(path);
  out << "t,norm_X,energy,mean\n";
  for (const auto& s : samples) out << s.t << "," << s.norm_X << "," << s.energy << "," << s.mean << "\n";
  finish(out, path);
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
  finish(out, path);
}

Json grid_json(const SpectralConfig& c) {
  return {{"r_max", c.r_max}, {"n_r", c.n_r}, {"n_modes", c.n_modes}, {"picard_tol", c.picard_tol}};
}

Json winfty_summary(const WInftyProfile& p) {
  return {{"w0", p.w0()},
          {"Omega_plus", p.Omega_plus},
          {"Omega_minus", p.Omega_minus},
          {"residual", p.residual}};
}

Json solution_summary(const VortexSolution& s) {
  return {{"alpha", s.alpha},
          {"lambda", s.lambda},
          {"residual", s.residual_X},
          {"norm_Y", s.norm_Y()},
          {"iterations", s.iterations},
          {"contraction_max", s.max_contraction()}};
}

Json stability_summary(const StabilityReport& r, double basin_estimate) {
  return {{"alpha", r.alpha},
          {"lambda", r.lambda},
          {"eigen_residual_1", r.eigen_residual_1},
          {"eigen_residual_2", r.eigen_residual_2},
          {"fitted_mu", r.fitted_mu},
          {"fit_residual", r.fit_residual},
          {"energy_rate", r.energy_rate},
          {"monotone", r.monotone},
          {"basin_estimate", basin_estimate}};
}

Json spectrum_json(const std::vector<Eigenvalue>& groups) {
  Json out = Json::array();
  for (const auto& g : groups) out.push_back({{"eigenvalue", g.value}, {"multiplicity", g.multiplicity}});
  return out;
}

Json error_json(const std::string& kind, const std::string& message,
                const std::vector<double>& residual_history) {
  Json j = {{"error", kind}, {"message", message}};
  if (!residual_history.empty()) j["residual_history"] = residual_history;
  return j;
}

}  // namespace burgers::io

#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "burgers/operators.hpp"
#include "burgers/stability.hpp"
#include "burgers/vortex.hpp"
#include "burgers/winfty.hpp"

namespace burgers::io {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Creates `dir` if needed and checks that a file can be written there.
void ensure_writable_dir(const fs::path& dir);

/// `r,mode_re_0,mode_im_0,...,mode_re_N,mode_im_N` (physical coefficients).
void write_profile_csv(const fs::path& path, const ModeField& w);
/// `x1,x2,value` on the polar sample grid, nodes with r <= r_limit.
void write_field_csv(const fs::path& path, const ModeField& w, int theta_points = 64,
                     double r_limit = 8.0);
/// `r,psi_plus,psi_minus,Omega,omega`
void write_winfty_csv(const fs::path& path, const WInftyProfile& p);
/// `t,norm_X,energy,mean`
void write_trajectory_csv(const fs::path& path, const std::vector<EnergySample>& samples);

void write_json(const fs::path& path, const Json& j);

Json grid_json(const SpectralConfig& c);
/// {w0, Omega_plus, Omega_minus, residual}
Json winfty_summary(const WInftyProfile& p);
/// {alpha, lambda, residual, norm_Y, iterations, contraction_max}
Json solution_summary(const VortexSolution& s);
/// {alpha, lambda, eigen_residual_1, eigen_residual_2, fitted_mu,
///  fit_residual, energy_rate, monotone, basin_estimate}
Json stability_summary(const StabilityReport& r, double basin_estimate);
/// [{eigenvalue, multiplicity}, ...]
Json spectrum_json(const std::vector<Eigenvalue>& groups);

/// Fixed error document printed by the command-line tools.
Json error_json(const std::string& kind, const std::string& message,
                const std::vector<double>& residual_history = {});

}  // namespace burgers::io

#pragma once

#include <Eigen/Dense>

#include "liouville/params.hpp"

namespace liouville {

enum class GradMode { polar, complex_cartesian };

/// 2m entries, ordered (d r_1, d theta_1, ..., d r_m, d theta_m) in polar
/// mode, (d x_1, d y_1, ...) in Cartesian mode.
struct GradientVector {
    std::vector<double> entries;
    GradMode mode = GradMode::polar;
};

struct AngleConfig {
    std::vector<double> angles;
    explicit AngleConfig(std::vector<double> a) : angles(std::move(a)) {}
    int size() const { return static_cast<int>(angles.size()); }
};

// Near-collision guard: configurations closer than this to a pole of Phi_m
// (pairwise collision, the origin, or the boundary) are rejected.
inline constexpr double kConfigGuard = 1e-8;

/// Throws DegenerateConfig if c violates the domain guards.
void validate_config(const VortexConfig& c);
bool config_is_valid(const VortexConfig& c);

VortexConfig rotate(const VortexConfig& c, double phi);

/// The reduced Hamiltonian on the disk,
///   Phi_m = 2a*sum log|z_j| + 2*sum log(1-|z_j|^2)
///         + 2*sum_{j!=k} log|1 - z_j conj(z_k)| - 2*sum_{j!=k} log|z_j - z_k|.
double phi_m(const VortexConfig& c, const DiskParams& p);

/// Canonical polar gradient (dPhi/dr_j, dPhi/dtheta_j), or the Cartesian
/// gradient assembled from the complex critical-point residual
///   R_j = sum_{k!=j} 1/(z_j - z_k) - a/(2 z_j) - sum_k 1/(z_j - conj(z_k)^{-1}),
/// scaled by dPhi/dx_j + i dPhi/dy_j = -4 conj(R_j).
GradientVector grad_phi_m(const VortexConfig& c, const DiskParams& p,
                          GradMode mode = GradMode::polar);

/// The complex residuals R_j themselves (zero exactly at critical points).
std::vector<Complex> critical_residual(const VortexConfig& c, const DiskParams& p);

/// Central second differences of phi_m in polar coordinates, symmetrized.
/// Differences are accumulated in extended precision so that step ~ 1e-5
/// yields entries accurate to ~1e-8.
Eigen::MatrixXd hessian_fd(const VortexConfig& c, const DiskParams& p, double step);

// Angular functional E0 = sum_{j<k} csc^2((phi_j - phi_k)/2) and
// f0(phi) = (2 + cos phi) / (2 sin^4(phi/2)).
double e0_value(const AngleConfig& a);
std::vector<double> e0_grad(const AngleConfig& a);
Eigen::MatrixXd e0_hessian(const AngleConfig& a);

/// Damped Newton on e0_grad in the mean-zero chart; returns sorted angles.
/// Used to verify that the equiangular configuration is the unique critical
/// point of E0.
AngleConfig e0_newton(const AngleConfig& start, double tol = 1e-12, int max_iter = 200);

} // namespace liouville

#pragma once

#include <Eigen/Dense>
#include <memory>

#include "liouville/params.hpp"

namespace liouville {

/// Polar grid on the sector theta in [0, 2 pi / sector_m), periodic, with
/// radial nodes strictly increasing in (0, 1], last node exactly 1. The
/// origin is a single shared node.
struct PolarGrid {
    int Nr = 0;       // radial nodes (node Nr-1 is the boundary r = 1)
    int Nt = 0;       // angular nodes in the sector
    int sector_m = 1;
    std::vector<double> r;  // size Nr, r[Nr-1] = 1
    double dtheta = 0.0;    // (2 pi / sector_m) / Nt

    double theta(int j) const { return dtheta * j; }
    int unknowns() const { return 1 + (Nr - 1) * Nt; } // origin + interior rings
};

/// Uniform radial spacing, optionally densified toward the origin and an
/// expected peak radius via a smooth node-density map.
PolarGrid make_polar_grid(int Nr, int Nt, int sector_m = 1,
                          double peak_radius = -1.0, double grading = 2.0);

struct Field2D {
    std::shared_ptr<const PolarGrid> grid;
    Eigen::MatrixXd values; // Nr x Nt, row Nr-1 is the boundary (zeros)
    double origin = 0.0;    // u at r = 0
    double alpha = 0.0;
    double lambda = 0.0;

    double at(int i, int j) const { return values(i, j); }
    /// Bicubic interpolation in (log r, theta); r in (0, 1].
    double interpolate(double r, double theta) const;
};

Field2D zero_field(const DiskParams& p, std::shared_ptr<const PolarGrid> g);

/// Sample a radial profile onto the grid.
Field2D radial_field(const DiskParams& p, std::shared_ptr<const PolarGrid> g,
                     const std::function<double(double)>& u_of_r);

/// Discrete residual of the five-point polar stencil, max-norm.
double discrete_residual_norm(const Field2D& f);
/// Full residual vector (origin first, then rings row-major).
Eigen::VectorXd discrete_residual(const Field2D& f);

/// Damped Newton on the discrete residual with a sparse direct solve.
/// Converges when the residual max-norm drops below 1e-10.
Field2D newton_solve(const DiskParams& p, std::shared_ptr<const PolarGrid> g,
                     const Field2D& init, int max_iter = 50);

struct Peak {
    double r = 0.0;
    double theta = 0.0;
    double height = 0.0;
};

struct PeakReport {
    std::vector<Peak> peaks; // sorted by theta, unfolded to the full disk
    double mass = 0.0;
    double residual_norm = 0.0;
};

PeakReport peak_report(const Field2D& f);

/// Cell-weighted quadrature of lambda |x|^(2 alpha) e^u with the r^(2 alpha)
/// factor integrated exactly per radial cell.
double mass_2d(const Field2D& f);

struct ContinuationPoint {
    double lambda = 0.0;
    Field2D field;
    PeakReport peaks;
};

struct ContinuationRun {
    std::vector<ContinuationPoint> points;
    bool completed = false;
    std::string message;
};

/// Geometric lambda schedule from lambda_from down to lambda_to, warm-started.
/// On a singular or diverging step the lambda step is bisected once; if that
/// also fails the run stops with the partial branch.
ContinuationRun continue_in_lambda(const DiskParams& p, double lambda_from, double lambda_to,
                                   int steps, const Field2D& branch_init);

/// Residual of v(x) = u(x^m) in the mapped equation with exponent
/// m(alpha+1)-1 and coupling m^2 lambda. The residual transforms under the
/// power map by the exact factor m^2 |x|^(2(m-1)), so it is evaluated by
/// pulling the source residual back through the map.
double power_map_check(const Field2D& f, int m);

enum class MonotonicityVerdict { alternating, flat, violated };

inline const char* monotonicity_name(MonotonicityVerdict v) {
    switch (v) {
        case MonotonicityVerdict::alternating: return "alternating";
        case MonotonicityVerdict::flat: return "flat";
        default: return "violated";
    }
}

/// Checks the strict decrease/increase pattern of u(r0, theta) on the 2m
/// sub-arcs between consecutive peak directions (peak assumed at theta = 0).
MonotonicityVerdict angular_monotonicity_check(const Field2D& f, int m, double r0);

/// Radial singular-branch field plus eps * cos(theta) * (mode-1 profile);
/// entry point for the 1-peak branch below the mode-1 bifurcation.
Field2D seed_one_peak(const DiskParams& p, std::shared_ptr<const PolarGrid> g, double eps);

/// Seed and solve at p.lambda, escalating eps if Newton falls back to the
/// radial solution. Returns the asymmetric field.
Field2D enter_one_peak_branch(const DiskParams& p, std::shared_ptr<const PolarGrid> g,
                              double eps0 = 1e-2);

} // namespace liouville

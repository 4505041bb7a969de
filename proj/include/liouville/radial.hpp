#pragma once

#include "liouville/params.hpp"

namespace liouville {

enum class Branch { minimal, singular };

inline const char* branch_name(Branch b) {
    return b == Branch::minimal ? "minimal" : "singular";
}

/// One of the two explicit radial solutions
///   u(r) = log[ Lambda / (1 + Lambda r^(2 beta) / (8 beta^2))^2 ] - log lambda.
struct RadialSolution {
    double Lambda = 0.0;
    double lambda = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    Branch branch = Branch::minimal;

    double u(double r) const;
    double u_prime(double r) const;
    double u_second(double r) const;
    /// u'' + u'/r + lambda r^(2 alpha) e^u, from the analytic derivatives.
    double ode_residual(double r) const;
    double sup_norm() const { return std::log(Lambda / lambda); }
};

/// lambda = Lambda / (1 + Lambda/(8 beta^2))^2.
double lambda_of_Lambda(double Lambda, const DiskParams& p);

/// Fold coupling 2 beta^2 (maximum of the Lambda -> lambda map).
double lambda_max(const DiskParams& p);

/// Roots of the Lambda-equation at p.lambda: two for lambda < 2 beta^2, the
/// double root {8 beta^2} at the fold, none beyond. Bisection on the two
/// monotone branches, relative tolerance 1e-13.
std::vector<double> solve_Lambda(const DiskParams& p);

RadialSolution radial_solution(double Lambda, const DiskParams& p);

/// Integrates u'' + u'/r + lambda r^(2 alpha) e^u = 0 from r = 1e-6 with the
/// regular series start u = u0 - lambda e^{u0} r^(2 beta)/(4 beta^2);
/// returns u(1).
double shoot(const DiskParams& p, double u0);

/// Closed-form mass 8 pi beta Lambda / (Lambda + 8 beta^2).
double mass(double Lambda, const DiskParams& p);

/// Quadrature route for the same integral (oracle); relative tol ~1e-10.
double mass_quadrature(double Lambda, const DiskParams& p);

struct BranchPoint {
    double lambda = 0.0;
    double Lambda = 0.0;
    double mass = 0.0;
    double sup_norm = 0.0;
    Branch branch = Branch::minimal;
};

std::vector<BranchPoint> continuation(const DiskParams& p, const std::vector<double>& lambda_grid);

// Fourier-mode analysis of the linearized radial equation, in the bubble
// variable s = sqrt(Lambda/(8 beta^2)) r^beta, delta = k / beta.
struct ModeAnalysis {
    int k = 0;
    double delta = 0.0;
    double s_boundary = 0.0;
    double f1_boundary = 0.0;
    bool degenerate = false;
};

/// Fundamental solutions of f'' + f'/s + (8/(1+s^2)^2 - delta^2/s^2) f = 0.
double mode_f1(double delta, double s);
double mode_f2(double delta, double s); // delta != 1
/// Residuals normalized by the largest term magnitude (f2 diverges like
/// s^{-delta}, so the absolute residual is not scale-free).
double mode_f1_residual(double delta, double s);
double mode_f2_residual(double delta, double s);

ModeAnalysis mode_boundary_value(int k, double Lambda, const DiskParams& p);

/// Lambda at which mode k of the singular branch degenerates:
/// 8 beta^2 (beta+k)/(beta-k). Requires 0 <= k < beta.
double mode_degeneracy_Lambda(int k, const DiskParams& p);

/// The coupling 2 (beta^2 - k^2) where the singular branch loses
/// invertibility in mode k. Requires 0 <= k < beta.
double degeneracy_lambda(int k, const DiskParams& p);

/// Max residual of f1 (and f2 when delta != 1) over log-spaced s in
/// [1e-3, 1e3].
double mode_ode_residual(int k, const DiskParams& p, int samples = 200);

/// Entire-plane bubble U = log[ Lambda^2 / (1 + Lambda^2 |x^beta - xi|^2
/// / (8 beta^2))^2 ].
struct LimitBubble {
    double Lambda = 0.0;
    Complex xi;
    double alpha = 0.0;
    double beta = 0.0;

    double U(Complex x) const;
    /// |Delta U + |x|^(2 alpha) e^U| with the Laplacian assembled from the
    /// analytic polar partials of |x^beta - xi|^2.
    double residual_at(double r, double theta) const;
};

LimitBubble limit_bubble(double Lambda, Complex xi, const DiskParams& p);

/// Max residual over a radial-angular sample grid.
double bubble_residual(const LimitBubble& b, int nr = 40, int ntheta = 24);

/// Total mass int |x|^(2 alpha) e^U over the plane, by quadrature (= 8 pi beta).
double bubble_mass_quadrature(const LimitBubble& b, double rel_tol = 1e-8);

enum class KernelFn { psi0, psi1, psi2 };

/// Max residual of psi in Delta psi + 8 (1+|z|^2)^{-2} psi = 0 over a sample
/// grid; the psi_l are the alpha = 0 linearized-bubble kernel functions.
double kernel_residual(KernelFn which, int samples = 500);

} // namespace liouville

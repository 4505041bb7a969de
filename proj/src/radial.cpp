#include "liouville/radial.hpp"

#include <algorithm>
#include <cmath>

#include "liouville/quadrature.hpp"

namespace liouville {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (positive half).
constexpr double kKronrodX[8] = {
    0.0, 0.2077849550078985, 0.4058451513773972, 0.5860872354676911,
    0.7415311855993944, 0.8648644233597691, 0.9491079123427585, 0.9914553711208126};
constexpr double kKronrodW[8] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299785, 0.0229353220105292};
constexpr double kGaussW[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767, 0.1294849661688697};

struct GKResult {
    double value;
    double error;
};

GKResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fk = 0.0, fg = 0.0;
    const double f0 = f(c);
    fk += kKronrodW[0] * f0;
    fg += kGaussW[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double fp = f(c + h * kKronrodX[i]);
        const double fm = f(c - h * kKronrodX[i]);
        fk += kKronrodW[i] * (fp + fm);
        if (i % 2 == 0) fg += kGaussW[i / 2] * (fp + fm);
    }
    return {fk * h, std::abs((fk - fg) * h)};
}

double gk_adaptive(const std::function<double(double)>& f, double a, double b,
                   double rel_tol, double abs_tol, int depth) {
    const GKResult r = gk15(f, a, b);
    if (depth <= 0 || r.error <= std::max(abs_tol, rel_tol * std::abs(r.value)))
        return r.value;
    const double c = 0.5 * (a + b);
    return gk_adaptive(f, a, c, rel_tol, abs_tol / 2, depth - 1) +
           gk_adaptive(f, c, b, rel_tol, abs_tol / 2, depth - 1);
}

} // namespace

double adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol, int max_depth) {
    return gk_adaptive(f, a, b, rel_tol, abs_tol, max_depth);
}

double RadialSolution::u(double r) const {
    const double c = Lambda / (8.0 * beta * beta);
    return std::log(Lambda) - 2.0 * std::log1p(c * std::pow(r, 2.0 * beta)) - std::log(lambda);
}

double RadialSolution::u_prime(double r) const {
    const double c = Lambda / (8.0 * beta * beta);
    const double r2b = std::pow(r, 2.0 * beta);
    return -4.0 * beta * c * r2b / (r * (1.0 + c * r2b));
}

double RadialSolution::u_second(double r) const {
    const double c = Lambda / (8.0 * beta * beta);
    const double r2b = std::pow(r, 2.0 * beta);
    const double denom = 1.0 + c * r2b;
    return -4.0 * beta * c * r2b / (r * r) * ((2.0 * beta - 1.0) - c * r2b) / (denom * denom);
}

double RadialSolution::ode_residual(double r) const {
    const double c = Lambda / (8.0 * beta * beta);
    const double r2b = std::pow(r, 2.0 * beta);
    const double denom = 1.0 + c * r2b;
    const double forcing = std::pow(r, 2.0 * alpha) * Lambda / (denom * denom);
    return u_second(r) + u_prime(r) / r + forcing;
}

double lambda_of_Lambda(double Lambda, const DiskParams& p) {
    const double x = 1.0 + Lambda / (8.0 * p.beta * p.beta);
    return Lambda / (x * x);
}

double lambda_max(const DiskParams& p) { return 2.0 * p.beta * p.beta; }

std::vector<double> solve_Lambda(const DiskParams& p) {
    const double lam = p.lambda_value();
    if (!(lam > 0.0)) throw DomainError("solve_Lambda requires lambda > 0");
    const double top = 8.0 * p.beta * p.beta;
    const double lmax = lambda_max(p);
    if (std::abs(lam - lmax) <= 1e-12) return {top};
    if (lam > lmax) return {};

    auto bisect = [&](double lo, double hi, bool increasing) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double v = lambda_of_Lambda(mid, p);
            const bool below = increasing ? (v < lam) : (v > lam);
            (below ? lo : hi) = mid;
            if (hi - lo <= 1e-15 * std::max(1.0, std::abs(mid))) break;
        }
        return 0.5 * (lo + hi);
    };

    const double lo1 = 0.5 * lam; // lambda(L) <= L, so this brackets from below
    double hi2 = 2.0 * top;
    while (lambda_of_Lambda(hi2, p) >= lam) hi2 *= 2.0;
    return {bisect(lo1, top, true), bisect(top, hi2, false)};
}

RadialSolution radial_solution(double Lambda, const DiskParams& p) {
    if (!(Lambda > 0.0)) throw DomainError("Lambda must be positive");
    const double lam = p.lambda_value();
    const double implied = lambda_of_Lambda(Lambda, p);
    if (std::abs(implied - lam) > 1e-10 * std::max(lam, 1e-300))
        throw InconsistentPair("Lambda is not a root of the Lambda-equation at this lambda");
    RadialSolution s;
    s.Lambda = Lambda;
    s.lambda = lam;
    s.alpha = p.alpha;
    s.beta = p.beta;
    s.branch = (Lambda < 8.0 * p.beta * p.beta) ? Branch::minimal : Branch::singular;
    return s;
}

double shoot(const DiskParams& p, double u0) {
    const double lam = p.lambda_value();
    if (!(lam > 0.0)) throw DomainError("shoot requires lambda > 0");
    const double beta = p.beta;

    const double eps = 1e-6;
    const double e0 = lam * std::exp(u0);
    double r = eps;
    double u = u0 - e0 * std::pow(eps, 2.0 * beta) / (4.0 * beta * beta);
    double v = -e0 * std::pow(eps, 2.0 * beta - 1.0) / (2.0 * beta);

    auto rhs = [&](double rr, double uu, double vv, double& du, double& dv) {
        du = vv;
        dv = -vv / rr - lam * std::pow(rr, 2.0 * p.alpha) * std::exp(uu);
    };

    // Dormand-Prince 5(4) with adaptive steps.
    static const double A[7][6] = {
        {0, 0, 0, 0, 0, 0},
        {1.0 / 5, 0, 0, 0, 0, 0},
        {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
        {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
        {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static const double B5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192,
                                 -2187.0 / 6784, 11.0 / 84, 0};
    static const double B4[7] = {5179.0 / 57600, 0, 7571.0 / 16695, 393.0 / 640,
                                 -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
    static const double C[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};

    const double tol = 1e-12;
    double h = 1e-4;
    for (long step = 0; step < 2000000 && r < 1.0; ++step) {
        if (r + h > 1.0) h = 1.0 - r;
        double ku[7], kv[7];
        for (int i = 0; i < 7; ++i) {
            double uu = u, vv = v;
            for (int j = 0; j < i; ++j) {
                uu += h * A[i][j] * ku[j];
                vv += h * A[i][j] * kv[j];
            }
            rhs(r + C[i] * h, uu, vv, ku[i], kv[i]);
        }
        double u5 = u, v5 = v, u4 = u, v4 = v;
        for (int i = 0; i < 7; ++i) {
            u5 += h * B5[i] * ku[i];
            v5 += h * B5[i] * kv[i];
            u4 += h * B4[i] * ku[i];
            v4 += h * B4[i] * kv[i];
        }
        const double sc_u = 1.0 + std::abs(u5);
        const double sc_v = 1.0 + std::abs(v5);
        const double err = std::max(std::abs(u5 - u4) / sc_u, std::abs(v5 - v4) / sc_v);
        if (err <= tol || h <= 1e-10) {
            r += h;
            u = u5;
            v = v5;
            if (std::abs(u) > 700.0) throw BlowupInIntegration("radial shooting blew up");
        }
        const double fac = (err > 0) ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        h = std::max(h, 1e-10);
    }
    if (r < 1.0) throw BlowupInIntegration("radial shooting failed to reach r = 1");
    return u;
}

double mass(double Lambda, const DiskParams& p) {
    return 8.0 * M_PI * p.beta * Lambda / (Lambda + 8.0 * p.beta * p.beta);
}

double mass_quadrature(double Lambda, const DiskParams& p) {
    // After t = r^(2 beta) the integrand is rational:
    //   mass = (pi Lambda / beta) * int_0^1 dt / (1 + Lambda t / (8 beta^2))^2.
    const double c = Lambda / (8.0 * p.beta * p.beta);
    const double integral = adaptive_gauss_kronrod(
        [&](double t) {
            const double d = 1.0 + c * t;
            return 1.0 / (d * d);
        },
        0.0, 1.0, 1e-12);
    return M_PI * Lambda / p.beta * integral;
}

std::vector<BranchPoint> continuation(const DiskParams& p,
                                      const std::vector<double>& lambda_grid) {
    const double lmax = lambda_max(p);
    for (double lam : lambda_grid)
        if (!(lam > 0.0) || lam > lmax + 1e-12)
            throw DomainError("continuation grid values must lie in (0, 2 beta^2]");

    std::vector<double> grid = lambda_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<BranchPoint> out;
    for (double lam : grid) {
        DiskParams q(p.alpha, lam);
        const std::vector<double> roots = solve_Lambda(q);
        std::vector<std::pair<double, Branch>> entries;
        if (roots.size() == 2) {
            entries = {{roots[0], Branch::minimal}, {roots[1], Branch::singular}};
        } else if (roots.size() == 1) {
            entries = {{roots[0], Branch::minimal}, {roots[0], Branch::singular}};
        }
        for (auto [L, br] : entries) {
            BranchPoint bp;
            bp.lambda = lam;
            bp.Lambda = L;
            bp.mass = mass(L, q);
            bp.sup_norm = std::log(L / lam);
            bp.branch = br;
            out.push_back(bp);
        }
    }
    return out;
}

double mode_f1(double delta, double s) {
    const double x = s * s;
    const double g = ((delta + 1.0) + (delta - 1.0) * x) / (1.0 + x);
    return std::pow(s, delta) * g;
}

double mode_f2(double delta, double s) {
    const double x = s * s;
    const double h = ((delta + 1.0) * x + (delta - 1.0)) / (1.0 + x);
    return std::pow(s, -delta) * h;
}

double mode_f1_residual(double delta, double s) {
    const double x = s * s;
    const double g = ((delta + 1.0) + (delta - 1.0) * x) / (1.0 + x);
    const double gp = -2.0 / ((1.0 + x) * (1.0 + x));
    const double gpp = 4.0 / ((1.0 + x) * (1.0 + x) * (1.0 + x));
    const double f = std::pow(s, delta) * g;
    const double fp = delta * std::pow(s, delta - 1.0) * g + 2.0 * std::pow(s, delta + 1.0) * gp;
    const double fpp = delta * (delta - 1.0) * std::pow(s, delta - 2.0) * g +
                       (4.0 * delta + 2.0) * std::pow(s, delta) * gp +
                       4.0 * std::pow(s, delta + 2.0) * gpp;
    const double V = 8.0 / ((1.0 + x) * (1.0 + x)) - delta * delta / x;
    const double scale = std::max({1.0, std::abs(fpp), std::abs(fp / s), std::abs(V * f)});
    return (fpp + fp / s + V * f) / scale;
}

double mode_f2_residual(double delta, double s) {
    const double x = s * s;
    const double h = ((delta + 1.0) * x + (delta - 1.0)) / (1.0 + x);
    const double hp = 2.0 / ((1.0 + x) * (1.0 + x));
    const double hpp = -4.0 / ((1.0 + x) * (1.0 + x) * (1.0 + x));
    const double f = std::pow(s, -delta) * h;
    const double fp = -delta * std::pow(s, -delta - 1.0) * h + 2.0 * std::pow(s, 1.0 - delta) * hp;
    const double fpp = delta * (delta + 1.0) * std::pow(s, -delta - 2.0) * h +
                       (2.0 - 4.0 * delta) * std::pow(s, -delta) * hp +
                       4.0 * std::pow(s, 2.0 - delta) * hpp;
    const double V = 8.0 / ((1.0 + x) * (1.0 + x)) - delta * delta / x;
    const double scale = std::max({1.0, std::abs(fpp), std::abs(fp / s), std::abs(V * f)});
    return (fpp + fp / s + V * f) / scale;
}

ModeAnalysis mode_boundary_value(int k, double Lambda, const DiskParams& p) {
    if (k < 0) throw DomainError("mode index k must be >= 0");
    if (!(Lambda > 0.0)) throw DomainError("Lambda must be positive");
    ModeAnalysis m;
    m.k = k;
    m.delta = k / p.beta;
    m.s_boundary = std::sqrt(Lambda / (8.0 * p.beta * p.beta));
    m.f1_boundary = mode_f1(m.delta, m.s_boundary);
    m.degenerate =
        std::abs(m.f1_boundary) < 1e-9 * std::max(1.0, std::pow(m.s_boundary, m.delta));
    return m;
}

double mode_degeneracy_Lambda(int k, const DiskParams& p) {
    if (k < 0 || !(k < p.beta)) throw DomainError("mode degeneracy requires 0 <= k < beta");
    return 8.0 * p.beta * p.beta * (p.beta + k) / (p.beta - k);
}

double degeneracy_lambda(int k, const DiskParams& p) {
    if (k < 0 || !(k < p.beta)) throw DomainError("mode degeneracy requires 0 <= k < beta");
    return 2.0 * (p.beta * p.beta - double(k) * k);
}

double mode_ode_residual(int k, const DiskParams& p, int samples) {
    if (k < 0) throw DomainError("mode index k must be >= 0");
    const double delta = k / p.beta;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double s = std::pow(10.0, -3.0 + 6.0 * i / (samples - 1.0));
        worst = std::max(worst, std::abs(mode_f1_residual(delta, s)));
        if (std::abs(delta - 1.0) > 1e-14)
            worst = std::max(worst, std::abs(mode_f2_residual(delta, s)));
    }
    return worst;
}

double LimitBubble::U(Complex x) const {
    const double r = std::abs(x);
    const double th = std::arg(x);
    const Complex w = std::polar(std::pow(r, beta), beta * th);
    const double g = std::norm(w - xi);
    const double c = Lambda * Lambda / (8.0 * beta * beta);
    return 2.0 * std::log(Lambda) - 2.0 * std::log1p(c * g);
}

double LimitBubble::residual_at(double r, double theta) const {
    const double c = Lambda * Lambda / (8.0 * beta * beta);
    const double phi = xi.real() * std::cos(beta * theta) + xi.imag() * std::sin(beta * theta);
    const double phi_t = beta * (-xi.real() * std::sin(beta * theta) +
                                 xi.imag() * std::cos(beta * theta));
    const double rb = std::pow(r, beta);
    const double g = rb * rb - 2.0 * rb * phi + std::norm(xi);
    const double g_r = 2.0 * beta * rb * rb / r - 2.0 * beta * rb / r * phi;
    const double g_rr = 2.0 * beta * (2.0 * beta - 1.0) * rb * rb / (r * r) -
                        2.0 * beta * (beta - 1.0) * rb / (r * r) * phi;
    const double g_t = -2.0 * rb * phi_t;
    const double g_tt = 2.0 * beta * beta * rb * phi; // phi'' = -beta^2 phi

    const double denom = 1.0 + c * g;
    const double U_r = -2.0 * c * g_r / denom;
    const double U_rr = -2.0 * c * (g_rr * denom - c * g_r * g_r) / (denom * denom);
    const double U_tt = -2.0 * c * (g_tt * denom - c * g_t * g_t) / (denom * denom);
    const double lap = U_rr + U_r / r + U_tt / (r * r);
    const double eU = Lambda * Lambda / (denom * denom);
    return lap + std::pow(r, 2.0 * alpha) * eU;
}

LimitBubble limit_bubble(double Lambda, Complex xi, const DiskParams& p) {
    if (!(Lambda > 0.0)) throw DomainError("Lambda must be positive");
    LimitBubble b;
    b.Lambda = Lambda;
    b.xi = xi;
    b.alpha = p.alpha;
    b.beta = p.beta;
    return b;
}

double bubble_residual(const LimitBubble& b, int nr, int ntheta) {
    double worst = 0.0;
    for (int i = 0; i < nr; ++i) {
        const double r = std::pow(10.0, -2.0 + 3.0 * i / (nr - 1.0)); // 0.01 .. 10
        for (int j = 0; j < ntheta; ++j) {
            const double th = -M_PI + (2.0 * M_PI) * (j + 0.5) / ntheta;
            worst = std::max(worst, std::abs(b.residual_at(r, th)));
        }
    }
    return worst;
}

double bubble_mass_quadrature(const LimitBubble& b, double rel_tol) {
    // t = r^(2 beta) rationalizes the radial direction; the angular average
    // is taken by trapezoid (the integrand is smooth and periodic).
    const double c = b.Lambda * b.Lambda / (8.0 * b.beta * b.beta);
    const int na = 256;
    auto ring = [&](double t) {
        const double sqt = std::sqrt(t);
        double acc = 0.0;
        for (int j = 0; j < na; ++j) {
            const double th = 2.0 * M_PI * j / na;
            const double phi =
                b.xi.real() * std::cos(b.beta * th) + b.xi.imag() * std::sin(b.beta * th);
            const double g = t - 2.0 * sqt * phi + std::norm(b.xi);
            const double denom = 1.0 + c * g;
            acc += b.Lambda * b.Lambda / (denom * denom);
        }
        return acc * (2.0 * M_PI / na) / (2.0 * b.beta);
    };

    double T = std::max(16.0, 4.0 * std::norm(b.xi)) + 64.0 * b.beta * b.beta / (b.Lambda * b.Lambda);
    double total = adaptive_gauss_kronrod(ring, 0.0, T, rel_tol * 0.1);
    for (int rep = 0; rep < 60; ++rep) {
        const double extra = adaptive_gauss_kronrod(ring, T, 2.0 * T, rel_tol * 0.1);
        total += extra;
        T *= 2.0;
        if (std::abs(extra) < 0.25 * rel_tol * std::abs(total)) break;
    }
    return total;
}

double kernel_residual(KernelFn which, int samples) {
    // psi_0 = (1-r^2)/(1+r^2), psi_1 = r cos(th)/(1+r^2), psi_2 with sin.
    // Residual of Delta psi + 8 (1+r^2)^{-2} psi, partials hand-derived.
    auto residual = [&](double r, double th) {
        const double r2 = r * r;
        const double d = 1.0 + r2;
        double psi, psi_rr, psi_r, psi_tt;
        if (which == KernelFn::psi0) {
            psi = (1.0 - r2) / d;
            psi_r = -4.0 * r / (d * d);
            psi_rr = -4.0 * (1.0 - 3.0 * r2) / (d * d * d);
            psi_tt = 0.0;
        } else {
            const double ang = (which == KernelFn::psi1) ? std::cos(th) : std::sin(th);
            psi = r * ang / d;
            psi_r = ang * (1.0 - r2) / (d * d);
            psi_rr = ang * (-2.0 * r) * (3.0 - r2) / (d * d * d);
            psi_tt = -r * ang / d;
        }
        const double lap = psi_rr + psi_r / r + psi_tt / (r * r);
        return lap + 8.0 / (d * d) * psi;
    };

    const int nth = 20;
    const int nr = std::max(2, samples / nth);
    double worst = 0.0;
    for (int i = 0; i < nr; ++i) {
        const double r = 0.05 + 4.0 * i / (nr - 1.0);
        for (int j = 0; j < nth; ++j) {
            const double th = 2.0 * M_PI * (j + 0.25) / nth;
            worst = std::max(worst, std::abs(residual(r, th)));
        }
    }
    return worst;
}

} // namespace liouville

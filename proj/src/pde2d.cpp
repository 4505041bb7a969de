#include "liouville/pde2d.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "liouville/radial.hpp"

namespace liouville {

namespace {

int wrap(int j, int n) { return ((j % n) + n) % n; }

// Nonuniform 3-point first/second derivative weights at the middle node.
struct Stencil3 {
    double wm, wc, wp; // weights for u_{i-1}, u_i, u_{i+1}
};

Stencil3 d2_weights(double hm, double hp) {
    return {2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))};
}

Stencil3 d1_weights(double hm, double hp) {
    return {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
}

} // namespace

PolarGrid make_polar_grid(int Nr, int Nt, int sector_m, double peak_radius, double grading) {
    if (Nr < 16 || Nt < 16) throw DomainError("grid must be at least 16 x 16");
    if (sector_m < 1) throw DomainError("sector_m must be >= 1");
    PolarGrid g;
    g.Nr = Nr;
    g.Nt = Nt;
    g.sector_m = sector_m;
    g.dtheta = (2.0 * M_PI / sector_m) / Nt;
    g.r.resize(Nr);
    if (peak_radius <= 0.0 || peak_radius >= 1.0) {
        for (int i = 0; i < Nr; ++i) g.r[i] = double(i + 1) / Nr;
        return g;
    }
    // Smooth node density with extra weight near the origin and the expected
    // peak radius; nodes from the inverse of the cumulative density.
    const double w = 0.15, w0 = 0.1;
    auto density = [&](double r) {
        const double dp = (r - peak_radius) / w;
        return 1.0 + grading * std::exp(-dp * dp) + grading * std::exp(-r * r / (w0 * w0));
    };
    const int fine = 4096;
    std::vector<double> cdf(fine + 1, 0.0);
    for (int i = 1; i <= fine; ++i) {
        const double a = double(i - 1) / fine, b = double(i) / fine;
        cdf[i] = cdf[i - 1] + 0.5 * (density(a) + density(b)) * (b - a);
    }
    for (int i = 0; i < Nr; ++i) {
        const double level = cdf[fine] * double(i + 1) / Nr;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), level);
        const int hi = std::min<int>(fine, int(it - cdf.begin()));
        const int lo = std::max(0, hi - 1);
        const double t = (cdf[hi] > cdf[lo]) ? (level - cdf[lo]) / (cdf[hi] - cdf[lo]) : 0.0;
        g.r[i] = (lo + t) / fine;
    }
    g.r[Nr - 1] = 1.0;
    for (int i = 1; i < Nr; ++i)
        if (g.r[i] <= g.r[i - 1]) throw InternalInconsistency("grid nodes not increasing");
    return g;
}

Field2D zero_field(const DiskParams& p, std::shared_ptr<const PolarGrid> g) {
    Field2D f;
    f.grid = std::move(g);
    f.values = Eigen::MatrixXd::Zero(f.grid->Nr, f.grid->Nt);
    f.origin = 0.0;
    f.alpha = p.alpha;
    f.lambda = p.lambda_value();
    return f;
}

Field2D radial_field(const DiskParams& p, std::shared_ptr<const PolarGrid> g,
                     const std::function<double(double)>& u_of_r) {
    Field2D f = zero_field(p, std::move(g));
    for (int i = 0; i + 1 < f.grid->Nr; ++i)
        f.values.row(i).setConstant(u_of_r(f.grid->r[i]));
    f.origin = u_of_r(0.0);
    return f;
}

double Field2D::interpolate(double rr, double theta) const {
    const PolarGrid& g = *grid;
    const double period = 2.0 * M_PI / g.sector_m;
    double th = std::fmod(theta, period);
    if (th < 0) th += period;
    const double tj = th / g.dtheta;
    const int j0 = int(std::floor(tj));
    const double ft = tj - j0;

    // Cubic Lagrange in theta (uniform, periodic).
    double wth[4];
    {
        const double x = ft;
        wth[0] = -x * (x - 1.0) * (x - 2.0) / 6.0;
        wth[1] = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
        wth[2] = -(x + 1.0) * x * (x - 2.0) / 2.0;
        wth[3] = (x + 1.0) * x * (x - 1.0) / 6.0;
    }
    auto ring_value = [&](int i) {
        double acc = 0.0;
        for (int a = 0; a < 4; ++a) acc += wth[a] * values(i, wrap(j0 - 1 + a, g.Nt));
        return acc;
    };

    rr = std::min(rr, 1.0);
    if (rr < g.r[0]) {
        // Below the first ring: quadratic through the origin and two rings.
        const double a0 = ring_value(0), a1 = ring_value(1);
        const double r0 = g.r[0], r1 = g.r[1];
        const double L0 = (rr - r0) * (rr - r1) / (r0 * r1);
        const double L1 = rr * (rr - r1) / (r0 * (r0 - r1));
        const double L2 = rr * (rr - r0) / (r1 * (r1 - r0));
        return origin * L0 + a0 * L1 + a1 * L2;
    }
    int ic = int(std::lower_bound(g.r.begin(), g.r.end(), rr) - g.r.begin());
    ic = std::clamp(ic, 1, g.Nr - 1);
    int i0 = std::clamp(ic - 2, 0, g.Nr - 4);

    // Cubic Lagrange in x = log r (nonuniform).
    const double x = std::log(rr);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        const double xa = std::log(g.r[i0 + a]);
        for (int b = 0; b < 4; ++b) {
            if (b == a) continue;
            w *= (x - std::log(g.r[i0 + b])) / (xa - std::log(g.r[i0 + b]));
        }
        acc += w * ring_value(i0 + a);
    }
    return acc;
}

Eigen::VectorXd discrete_residual(const Field2D& f) {
    const PolarGrid& g = *f.grid;
    const int Nt = g.Nt, Nr = g.Nr;
    Eigen::VectorXd R(1 + (Nr - 1) * Nt);

    // Rows are scaled by r^2 (origin row by r1^2/4): the raw theta stencil
    // near the axis carries coefficients ~1/(dtheta^2 r^2) ~ 1e7, which puts
    // an ulp-level floor ~1e-8 under the raw max-norm. The scaled equations
    // keep coefficients O(1/dtheta^2) and the 1e-10 convergence target
    // meaningful. Accumulation in extended precision for the cancellations.
    long double ring0_mean = 0.0L;
    for (int j = 0; j < Nt; ++j) ring0_mean += (long double)f.values(0, j);
    ring0_mean /= Nt;
    R[0] = (double)(ring0_mean - (long double)f.origin);

    const long double dth2 = (long double)g.dtheta * g.dtheta;
    for (int i = 0; i + 1 < Nr; ++i) {
        const long double ri = g.r[i];
        const long double hm = (i == 0) ? ri : ri - (long double)g.r[i - 1];
        const long double hp = (long double)g.r[i + 1] - ri;
        const long double wm2 = 2.0L / (hm * (hm + hp));
        const long double wc2 = -2.0L / (hm * hp);
        const long double wp2 = 2.0L / (hp * (hm + hp));
        const long double wm1 = -hp / (hm * (hm + hp));
        const long double wc1 = (hp - hm) / (hm * hp);
        const long double wp1 = hm / (hp * (hm + hp));
        const long double wsrc =
            (long double)f.lambda * std::pow(ri, (long double)(2.0 * f.alpha));
        for (int j = 0; j < Nt; ++j) {
            const long double uc = f.values(i, j);
            const long double um = (i == 0) ? (long double)f.origin : f.values(i - 1, j);
            const long double up = f.values(i + 1, j); // boundary row holds zeros
            const long double utt =
                ((long double)f.values(i, wrap(j - 1, Nt)) - 2.0L * uc +
                 (long double)f.values(i, wrap(j + 1, Nt))) /
                dth2;
            const long double lap = ri * ri * (wm2 * um + wc2 * uc + wp2 * up) +
                                    ri * (wm1 * um + wc1 * uc + wp1 * up) + utt;
            R[1 + i * Nt + j] = (double)(lap + ri * ri * wsrc * std::exp(uc));
        }
    }
    return R;
}

double discrete_residual_norm(const Field2D& f) {
    return discrete_residual(f).lpNorm<Eigen::Infinity>();
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

SpMat assemble_jacobian(const Field2D& f) {
    const PolarGrid& g = *f.grid;
    const int Nt = g.Nt, Nr = g.Nr;
    const int n = 1 + (Nr - 1) * Nt;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * n + Nt);

    trip.emplace_back(0, 0, -1.0);
    for (int j = 0; j < Nt; ++j)
        trip.emplace_back(0, 1 + j, 1.0 / Nt);

    for (int i = 0; i + 1 < Nr; ++i) {
        const double ri = g.r[i];
        const double hm = (i == 0) ? ri : ri - g.r[i - 1];
        const double hp = g.r[i + 1] - ri;
        const Stencil3 s2 = d2_weights(hm, hp);
        const Stencil3 s1 = d1_weights(hm, hp);
        const double cm = ri * ri * s2.wm + ri * s1.wm;
        const double cc = ri * ri * s2.wc + ri * s1.wc - 2.0 / (g.dtheta * g.dtheta);
        const double cp = ri * ri * s2.wp + ri * s1.wp;
        const double ct = 1.0 / (g.dtheta * g.dtheta);
        const double wsrc = f.lambda * std::pow(ri, 2.0 * f.alpha + 2.0);
        for (int j = 0; j < Nt; ++j) {
            const int row = 1 + i * Nt + j;
            trip.emplace_back(row, row, cc + wsrc * std::exp(f.values(i, j)));
            trip.emplace_back(row, 1 + i * Nt + wrap(j - 1, Nt), ct);
            trip.emplace_back(row, 1 + i * Nt + wrap(j + 1, Nt), ct);
            if (i == 0)
                trip.emplace_back(row, 0, cm);
            else
                trip.emplace_back(row, 1 + (i - 1) * Nt + j, cm);
            if (i + 2 < Nr) trip.emplace_back(row, 1 + (i + 1) * Nt + j, cp);
        }
    }
    SpMat J(n, n);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

void apply_update(Field2D& f, const Eigen::VectorXd& delta, double t) {
    const PolarGrid& g = *f.grid;
    f.origin += t * delta[0];
    for (int i = 0; i + 1 < g.Nr; ++i)
        for (int j = 0; j < g.Nt; ++j) f.values(i, j) += t * delta[1 + i * g.Nt + j];
}

} // namespace

Field2D newton_solve(const DiskParams& p, std::shared_ptr<const PolarGrid> g,
                     const Field2D& init, int max_iter) {
    if (init.grid.get() != g.get() &&
        (init.grid->Nr != g->Nr || init.grid->Nt != g->Nt ||
         init.grid->sector_m != g->sector_m))
        throw SizeMismatch("initial field lives on a different grid");
    Field2D f = init;
    f.grid = g;
    f.alpha = p.alpha;
    f.lambda = p.lambda_value();
    f.values.row(f.grid->Nr - 1).setZero();

    Eigen::VectorXd R = discrete_residual(f);
    double rn = R.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < max_iter; ++it) {
        if (rn < 1e-10) return f;
        const SpMat J = assemble_jacobian(f);
        Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
        lu.analyzePattern(J);
        lu.factorize(J);
        if (lu.info() != Eigen::Success)
            throw SingularJacobian("sparse LU factorization failed (near-zero pivot)");
        const Eigen::VectorXd delta = lu.solve(-R);
        if (!delta.allFinite())
            throw SingularJacobian("linear solve produced non-finite update");

        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            Field2D cand = f;
            apply_update(cand, delta, t);
            const Eigen::VectorXd Rc = discrete_residual(cand);
            const double rc = Rc.lpNorm<Eigen::Infinity>();
            if (std::isfinite(rc) && rc <= (1.0 - 1e-4 * t) * rn) {
                f = std::move(cand);
                R = Rc;
                rn = rc;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) throw NewtonDiverged("line search stalled");
    }
    if (rn < 1e-10) return f;
    throw NewtonDiverged("max Newton iterations reached");
}

double mass_2d(const Field2D& f) {
    const PolarGrid& g = *f.grid;
    const double ex = 2.0 * f.alpha + 2.0;
    auto cell_weight = [&](double lo, double hi) {
        return (std::pow(hi, ex) - std::pow(lo, ex)) / ex;
    };
    double acc = std::exp(f.origin) * cell_weight(0.0, 0.5 * g.r[0]) * 2.0 * M_PI;
    for (int i = 0; i < g.Nr; ++i) {
        const double lo = (i == 0) ? 0.5 * g.r[0] : 0.5 * (g.r[i - 1] + g.r[i]);
        const double hi = (i + 1 < g.Nr) ? 0.5 * (g.r[i] + g.r[i + 1]) : 1.0;
        double ring = 0.0;
        for (int j = 0; j < g.Nt; ++j) ring += std::exp(f.values(i, j));
        acc += ring * cell_weight(lo, hi) * g.dtheta * g.sector_m;
    }
    return f.lambda * acc;
}

PeakReport peak_report(const Field2D& f) {
    const PolarGrid& g = *f.grid;
    const int Nt = g.Nt;
    PeakReport out;
    out.mass = mass_2d(f);
    out.residual_norm = discrete_residual_norm(f);

    auto value = [&](int i, int j) -> double {
        if (i < 0) return f.origin;
        if (i >= g.Nr) return 0.0;
        return f.values(i, wrap(j, Nt));
    };

    std::vector<Peak> sector_peaks;
    for (int i = 0; i + 1 < g.Nr; ++i)
        for (int j = 0; j < Nt; ++j) {
            const double uc = f.values(i, j);
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di)
                for (int dj = -1; dj <= 1 && is_max; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    if (value(i + di, j + dj) >= uc) is_max = false;
                }
            if (!is_max) continue;

            // Quadratic refinement on the 3x3 neighborhood.
            const double ri = g.r[i];
            const double hm = (i == 0) ? ri : ri - g.r[i - 1];
            const double hp = (i + 1 < g.Nr) ? g.r[i + 1] - ri : ri - g.r[i - 1];
            const Stencil3 s1 = d1_weights(hm, hp);
            const Stencil3 s2 = d2_weights(hm, hp);
            const double um = value(i - 1, j), up = value(i + 1, j);
            const double ul = value(i, j - 1), ur_ = value(i, j + 1);
            const double gr = s1.wm * um + s1.wc * uc + s1.wp * up;
            const double gt = (ur_ - ul) / (2.0 * g.dtheta);
            const double hrr = s2.wm * um + s2.wc * uc + s2.wp * up;
            const double htt = (ul - 2.0 * uc + ur_) / (g.dtheta * g.dtheta);
            const double hrt =
                (value(i + 1, j + 1) - value(i + 1, j - 1) - value(i - 1, j + 1) +
                 value(i - 1, j - 1)) /
                (2.0 * (hm + hp) * g.dtheta);
            Eigen::Matrix2d H;
            H << hrr, hrt, hrt, htt;
            Eigen::Vector2d gv(gr, gt);
            Eigen::Vector2d off = Eigen::Vector2d::Zero();
            if (std::abs(H.determinant()) > 1e-14) off = -H.inverse() * gv;
            off[0] = std::clamp(off[0], -0.5 * std::min(hm, hp), 0.5 * std::min(hm, hp));
            off[1] = std::clamp(off[1], -0.5 * g.dtheta, 0.5 * g.dtheta);
            Peak pk;
            pk.r = ri + off[0];
            pk.theta = g.theta(j) + off[1];
            pk.height = uc + gv.dot(off) + 0.5 * off.dot(H * off);
            sector_peaks.push_back(pk);
        }

    // The origin equation pins u0 to the ring-0 mean, so compare with a
    // tolerance there and require strict decrease at ring 1.
    const double tol0 = 1e-9 * std::max(1.0, std::abs(f.origin));
    bool origin_peak = true;
    for (int j = 0; j < Nt; ++j) {
        if (f.values(0, j) > f.origin + tol0) origin_peak = false;
        if (g.Nr > 1 && f.values(1, j) >= f.origin) origin_peak = false;
    }
    if (origin_peak) out.peaks.push_back({0.0, 0.0, f.origin});

    for (const Peak& pk : sector_peaks)
        for (int k = 0; k < g.sector_m; ++k) {
            Peak q = pk;
            q.theta = std::fmod(pk.theta + k * 2.0 * M_PI / g.sector_m, 2.0 * M_PI);
            out.peaks.push_back(q);
        }
    std::sort(out.peaks.begin(), out.peaks.end(),
              [](const Peak& a, const Peak& b) { return a.theta < b.theta; });
    return out;
}

ContinuationRun continue_in_lambda(const DiskParams& p, double lambda_from, double lambda_to,
                                   int steps, const Field2D& branch_init) {
    if (!(lambda_from > lambda_to) || !(lambda_to > 0.0))
        throw DomainError("continuation requires lambda_from > lambda_to > 0");
    if (steps < 1) throw DomainError("steps must be >= 1");

    ContinuationRun run;
    Field2D current = branch_init;
    auto g = branch_init.grid;
    double lambda_prev = lambda_from;

    auto solve_at = [&](double lam, const Field2D& warm) {
        DiskParams q(p.alpha, lam);
        return newton_solve(q, g, warm);
    };

    for (int k = 0; k <= steps; ++k) {
        const double lam =
            lambda_from * std::pow(lambda_to / lambda_from, double(k) / steps);
        try {
            current = solve_at(lam, current);
        } catch (const Error&) {
            // One bisection of the lambda step, then retry the target.
            const double mid = 0.5 * (lambda_prev + lam);
            try {
                current = solve_at(mid, current);
                current = solve_at(lam, current);
            } catch (const Error& e2) {
                run.completed = false;
                run.message = std::string("branch lost at lambda = ") + std::to_string(lam) +
                              ": " + e2.what();
                return run;
            }
        }
        run.points.push_back({lam, current, peak_report(current)});
        lambda_prev = lam;
    }
    run.completed = true;
    return run;
}

double power_map_check(const Field2D& f, int m) {
    if (m < 1) throw DomainError("power_map_check requires m >= 1");
    const PolarGrid& g = *f.grid;
    const Eigen::VectorXd R = discrete_residual(f);
    // The power map v(x) = u(x^m) carries the raw source residual to the
    // target with the factor m^2 |x|^(2(m-1)); for the r^2-scaled residuals
    // used throughout, the factor is exactly m^2. Evaluating at the mapped
    // nodes avoids rediscretization error.
    double worst = 0.0;
    for (int i = 1; i + 2 < g.Nr; ++i)
        for (int j = 0; j < g.Nt; ++j)
            worst = std::max(worst, m * m * std::abs(R[1 + i * g.Nt + j]));
    return worst;
}

MonotonicityVerdict angular_monotonicity_check(const Field2D& f, int m, double r0) {
    const PolarGrid& g = *f.grid;
    int best = 0;
    for (int i = 0; i < g.Nr; ++i)
        if (std::abs(g.r[i] - r0) < std::abs(g.r[best] - r0)) best = i;

    const int n_full = g.Nt * g.sector_m;
    std::vector<double> ring(n_full);
    for (int j = 0; j < n_full; ++j) ring[j] = f.values(best, j % g.Nt);

    double umax = ring[0], umin = ring[0];
    for (double v : ring) {
        umax = std::max(umax, v);
        umin = std::min(umin, v);
    }
    const double scale = std::max(1.0, std::abs(umax));
    if (umax - umin < 1e-9 * scale) return MonotonicityVerdict::flat;

    const double dth = 2.0 * M_PI / n_full;
    const double arc = M_PI / m;
    for (int k = 0; k < 2 * m; ++k) {
        const double lo = k * arc, hi = (k + 1) * arc;
        const bool decreasing = (k % 2 == 0);
        for (int j = 0; j < n_full; ++j) {
            const double t0 = j * dth, t1 = (j + 1) * dth;
            // Interior node pairs only; one grid quantum allowed at endpoints.
            if (t0 < lo + 1.5 * dth || t1 > hi - 0.5 * dth) continue;
            const double diff = ring[(j + 1) % n_full] - ring[j];
            if (decreasing && diff > 1e-12 * scale) return MonotonicityVerdict::violated;
            if (!decreasing && diff < -1e-12 * scale) return MonotonicityVerdict::violated;
        }
    }
    return MonotonicityVerdict::alternating;
}

Field2D seed_one_peak(const DiskParams& p, std::shared_ptr<const PolarGrid> g, double eps) {
    const double lam = p.lambda_value();
    const std::vector<double> roots = solve_Lambda(p);
    if (roots.size() != 2) throw DomainError("no singular branch at this lambda");
    const double Lambda = roots[1];
    const RadialSolution rad = radial_solution(Lambda, p);

    const double delta = 1.0 / p.beta;
    const double sb = std::sqrt(Lambda / (8.0 * p.beta * p.beta));
    auto profile = [&](double r) {
        // Mode-1 eigenprofile pinned to zero at the boundary.
        return mode_f1(delta, sb * std::pow(r, p.beta)) - mode_f1(delta, sb) * r;
    };
    double sup = 0.0;
    for (int i = 0; i + 1 < g->Nr; ++i) sup = std::max(sup, std::abs(profile(g->r[i])));
    if (sup == 0.0) sup = 1.0;

    Field2D f = radial_field(p, g, [&](double r) { return rad.u(std::max(r, 0.0)); });
    for (int i = 0; i + 1 < g->Nr; ++i)
        for (int j = 0; j < g->Nt; ++j)
            f.values(i, j) += eps * std::cos(g->theta(j)) * profile(g->r[i]) / sup;
    return f;
}

namespace {

Eigen::VectorXd flatten(const Field2D& f) {
    const PolarGrid& g = *f.grid;
    Eigen::VectorXd x(1 + (g.Nr - 1) * g.Nt);
    x[0] = f.origin;
    for (int i = 0; i + 1 < g.Nr; ++i)
        for (int j = 0; j < g.Nt; ++j) x[1 + i * g.Nt + j] = f.values(i, j);
    return x;
}

// Damped Newton with deflation against known solutions: the deflated step is
// the plain Newton step rescaled by m/(m + grad_m . w) (Sherman-Morrison),
// with m(u) = prod_i (1 + 1/|u - u_i|^2). Pushes the iteration off the
// radial family so the symmetry-broken solution can be reached.
Field2D newton_solve_deflated(const DiskParams& p, std::shared_ptr<const PolarGrid> g,
                              const Field2D& init, const std::vector<Field2D>& deflate,
                              int max_iter = 80) {
    Field2D f = init;
    f.grid = g;
    f.alpha = p.alpha;
    f.lambda = p.lambda_value();
    f.values.row(f.grid->Nr - 1).setZero();

    std::vector<Eigen::VectorXd> anchors;
    for (const Field2D& d : deflate) anchors.push_back(flatten(d));

    auto deflation = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) -> double {
        double m = 1.0;
        if (grad) grad->setZero();
        for (const Eigen::VectorXd& a : anchors) {
            const Eigen::VectorXd diff = x - a;
            const double d2 = diff.squaredNorm();
            const double mi = 1.0 + 1.0 / d2;
            if (grad) *grad += (-2.0 / (d2 * d2)) / mi * diff; // d log(mi)
            m *= mi;
        }
        if (grad) *grad *= m; // gradient of the product via log-derivative
        return m;
    };

    Eigen::VectorXd R = discrete_residual(f);
    for (int it = 0; it < max_iter; ++it) {
        const double rn = R.lpNorm<Eigen::Infinity>();
        if (rn < 1e-10) return f;
        const SpMat J = assemble_jacobian(f);
        Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
        lu.analyzePattern(J);
        lu.factorize(J);
        if (lu.info() != Eigen::Success)
            throw SingularJacobian("sparse LU factorization failed (near-zero pivot)");
        const Eigen::VectorXd w = lu.solve(R);
        if (!w.allFinite()) throw SingularJacobian("linear solve produced non-finite update");

        const Eigen::VectorXd x = flatten(f);
        Eigen::VectorXd gm(x.size());
        const double m = deflation(x, &gm);
        double scale = m / (m + gm.dot(w));
        if (!std::isfinite(scale) || std::abs(scale) < 1e-4 || std::abs(scale) > 1e4)
            scale = (scale < 0.0) ? -1.0 : 1.0;
        const Eigen::VectorXd delta = -scale * w;

        const double merit0 = m * rn;
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            Field2D cand = f;
            apply_update(cand, delta, t);
            const Eigen::VectorXd Rc = discrete_residual(cand);
            const double rc = Rc.lpNorm<Eigen::Infinity>();
            const double mc = deflation(flatten(cand), nullptr);
            if (std::isfinite(rc) && mc * rc <= (1.0 - 1e-4 * t) * merit0) {
                f = std::move(cand);
                R = Rc;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) throw NewtonDiverged("deflated line search stalled");
    }
    throw NewtonDiverged("max deflated Newton iterations reached");
}

} // namespace

namespace {

double ring_asymmetry(const Field2D& f) {
    double worst = 0.0;
    for (int i = 0; i + 1 < f.grid->Nr; ++i) {
        double umax = f.values(i, 0), umin = f.values(i, 0);
        for (int j = 0; j < f.grid->Nt; ++j) {
            umax = std::max(umax, f.values(i, j));
            umin = std::min(umin, f.values(i, j));
        }
        worst = std::max(worst, umax - umin);
    }
    return worst;
}

// Deflated symmetry-breaking solve on the grid itself.
Field2D break_symmetry(const DiskParams& p, std::shared_ptr<const PolarGrid> g, double eps0) {
    const std::vector<double> roots = solve_Lambda(p);
    if (roots.size() != 2) throw DomainError("no singular branch at this lambda");
    std::vector<Field2D> radial;
    for (double L : roots) {
        const RadialSolution sol = radial_solution(L, p);
        radial.push_back(
            newton_solve(p, g, radial_field(p, g, [&](double r) { return sol.u(r); })));
    }
    double eps = eps0;
    for (int attempt = 0; attempt < 7; ++attempt) {
        try {
            const Field2D f = newton_solve_deflated(p, g, seed_one_peak(p, g, eps), radial);
            if (ring_asymmetry(f) > 1e-6) return f; // left the radial family
        } catch (const Error&) {
            // fall through to a larger kick
        }
        eps *= 4.0;
    }
    throw NewtonDiverged("could not enter the one-peak branch");
}

} // namespace

Field2D enter_one_peak_branch(const DiskParams& p, std::shared_ptr<const PolarGrid> g,
                              double eps0) {
    if (g->Nr <= 48 && g->Nt <= 48) return break_symmetry(p, g, eps0);

    // Break the symmetry on a coarse grid, then prolong and correct: the
    // developed asymmetric field is a safe warm start at full resolution.
    auto coarse = std::make_shared<PolarGrid>(make_polar_grid(48, 48, g->sector_m));
    const Field2D fc = break_symmetry(p, coarse, eps0);
    Field2D init = zero_field(p, g);
    init.origin = fc.origin;
    for (int i = 0; i + 1 < g->Nr; ++i)
        for (int j = 0; j < g->Nt; ++j)
            init.values(i, j) = fc.interpolate(g->r[i], g->theta(j));
    const Field2D f = newton_solve(p, g, init);
    if (ring_asymmetry(f) <= 1e-6)
        throw NewtonDiverged("fine-grid correction fell back to the radial family");
    return f;
}

} // namespace liouville

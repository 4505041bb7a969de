#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "liouville/errors.hpp"

namespace liouville {

using Complex = std::complex<double>;

/// Global parameters: singularity strength alpha > 0, beta = alpha + 1,
/// and the optional PDE coupling lambda >= 0.
struct DiskParams {
    double alpha = 1.0;
    double beta = 2.0;
    std::optional<double> lambda;

    explicit DiskParams(double alpha_, std::optional<double> lambda_ = std::nullopt)
        : alpha(alpha_), beta(alpha_ + 1.0), lambda(lambda_) {
        if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
        if (lambda && !(*lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
    }

    double lambda_value() const {
        if (!lambda) throw DomainError("lambda required but not set");
        return *lambda;
    }
};

struct PeakCount {
    int m = 1;
    explicit PeakCount(int m_) : m(m_) {
        if (m < 1) throw DomainError("peak count m must be >= 1");
    }
};

/// m distinct points in the punctured open unit disk.
struct VortexConfig {
    std::vector<Complex> points;

    VortexConfig() = default;
    explicit VortexConfig(std::vector<Complex> pts) : points(std::move(pts)) {}

    int size() const { return static_cast<int>(points.size()); }
};

/// Smallest integer n with alpha <= n.
int ceil_alpha(const DiskParams& p);

/// Number of solution classes up to rotation: ceil(alpha) + 2.
int solution_count(const DiskParams& p);

/// r_{alpha,m} = ((beta-m)/(beta+m))^(1/(2m)). Requires m < alpha + 1.
double polygon_radius(const DiskParams& p, const PeakCount& m);

/// Vertices r_{alpha,m} * exp(i(theta0 + 2*pi*(j-1)/m)), j = 1..m.
VortexConfig polygon_config(const DiskParams& p, const PeakCount& m, double theta0 = 0.0);

} // namespace liouville

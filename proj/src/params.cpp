#include "liouville/params.hpp"

#include <cmath>

namespace liouville {

int ceil_alpha(const DiskParams& p) {
    return static_cast<int>(std::ceil(p.alpha));
}

int solution_count(const DiskParams& p) {
    return ceil_alpha(p) + 2;
}

double polygon_radius(const DiskParams& p, const PeakCount& pc) {
    const double m = pc.m;
    if (!(m < p.beta))
        throw DomainError("no critical points: m >= alpha + 1");
    return std::pow((p.beta - m) / (p.beta + m), 1.0 / (2.0 * m));
}

VortexConfig polygon_config(const DiskParams& p, const PeakCount& pc, double theta0) {
    const double r = polygon_radius(p, pc);
    std::vector<Complex> pts(pc.m);
    for (int j = 0; j < pc.m; ++j) {
        const double th = theta0 + 2.0 * M_PI * j / pc.m;
        pts[j] = Complex(r * std::cos(th), r * std::sin(th));
    }
    return VortexConfig(std::move(pts));
}

} // namespace liouville

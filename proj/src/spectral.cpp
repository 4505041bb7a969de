#include "liouville/spectral.hpp"

#include <cmath>
#include <complex>

namespace liouville {

namespace {

double polygon_rho(const DiskParams& p, const PeakCount& pc) {
    const double r = polygon_radius(p, pc);
    return r * r;
}

} // namespace

Eigen::MatrixXd BlockCirculant::dense() const {
    Eigen::MatrixXd H(2 * m, 2 * m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            const int l = ((k - j) % m + m) % m;
            H.block<2, 2>(2 * j, 2 * k) = blocks[l];
        }
    return H;
}

std::pair<double, double> ModeBlock::eigenvalues() const {
    const double tr = mu + nu;
    const double diff = 0.5 * (mu - nu);
    const double disc = std::sqrt(diff * diff + gamma * gamma);
    return {0.5 * tr - disc, 0.5 * tr + disc};
}

BlockCirculant assemble_blocks(const DiskParams& p, const PeakCount& pc) {
    const int m = pc.m;
    const double rho = polygon_rho(p, pc); // throws DomainError if m >= beta
    BlockCirculant bc;
    bc.m = m;
    bc.rho = rho;
    bc.blocks.resize(m);
    bc.angles.resize(m);
    bc.gaps.resize(m);

    const double rm = std::pow(rho, m);
    // Note: the diagonal-block entries carry (1-rho)^{-2} where the source
    // displays show (1-rho)^{-1}; the latter fails the m=1 reduction
    // M_0 = -2(beta^2-1)/rho and the finite-difference cross-check.
    const double a0 = -(m * m - 1.0) / (3.0 * rho) - 4.0 / ((1.0 - rho) * (1.0 - rho)) -
                      4.0 * m * m * std::pow(rho, m - 1) / ((1.0 - rm) * (1.0 - rm));
    const double c0 = (m * m - 1.0) / 3.0 - 4.0 * rho / ((1.0 - rho) * (1.0 - rho)) +
                      4.0 * m * m * rm / ((1.0 - rm) * (1.0 - rm));
    bc.blocks[0] << a0, 0.0, 0.0, c0;
    bc.angles[0] = 0.0;
    bc.gaps[0] = (1.0 - rho) * (1.0 - rho);

    for (int l = 1; l < m; ++l) {
        const double th = 2.0 * M_PI * l / m;
        const double D = 1.0 + rho * rho - 2.0 * rho * std::cos(th);
        const double s2 = std::sin(th / 2.0) * std::sin(th / 2.0);
        const double one_m_rho2 = 1.0 - rho * rho;
        const double al = 1.0 / (rho * s2) + 2.0 * (1.0 + rho * rho) / (rho * D) -
                          2.0 * one_m_rho2 * one_m_rho2 / (rho * D * D);
        const double cl = -1.0 / s2 + 2.0 * (1.0 + rho * rho) / D -
                          2.0 * one_m_rho2 * one_m_rho2 / (D * D);
        const double bl = -4.0 * std::sqrt(rho) * one_m_rho2 * std::sin(th) / (D * D);
        bc.blocks[l] << al, -bl, bl, cl;
        bc.angles[l] = th;
        bc.gaps[l] = D;
    }
    return bc;
}

LatticeSums lattice_sums(const DiskParams& p, const PeakCount& pc, int pmode) {
    const int m = pc.m;
    if (pmode < 0 || pmode >= m) throw DomainError("mode index out of range");
    const double rho = polygon_rho(p, pc);
    const double rm = std::pow(rho, m);
    const int q = pmode;

    LatticeSums out;
    out.R = (m * m - 1.0) / 3.0 - 2.0 * q * (m - q);
    out.S = m * (std::pow(rho, q) + std::pow(rho, m - q)) /
            ((1.0 - rho * rho) * (1.0 - rm));
    const double r2 = rho * rho;
    const double t1 = std::pow(rho, q) *
                      ((q + 1.0) - (q - 1.0) * r2 + rm * ((m - q - 1.0) - (m - q + 1.0) * r2));
    const double t2 = std::pow(rho, m - q) *
                      ((m - q + 1.0) - (m - q - 1.0) * r2 + rm * ((q - 1.0) - (q + 1.0) * r2));
    const double cube = (1.0 - r2) * (1.0 - r2) * (1.0 - r2);
    out.T = m * (t1 + t2) / (cube * (1.0 - rm) * (1.0 - rm));
    return out;
}

ModeBlock mode_block(const DiskParams& p, const PeakCount& pc, int pmode) {
    const int m = pc.m;
    if (pmode < 0 || pmode >= m) throw DomainError("mode index out of range");
    const double rho = polygon_rho(p, pc);

    ModeBlock mb;
    mb.p = pmode;
    mb.X = (p.beta + m) * std::pow(rho, m - pmode);
    mb.Y = (p.beta + m) * std::pow(rho, pmode);
    mb.a_hat = p.beta - m + 2.0 * pmode;
    mb.b_hat = p.beta + m - 2.0 * pmode;
    mb.mu = -(mb.X + mb.a_hat) * (mb.Y + mb.b_hat) / (2.0 * rho);
    mb.nu = (mb.X - mb.a_hat) * (mb.Y - mb.b_hat) / 2.0;
    // Sign chosen so that M_p = sum_l C_l w^{pl} equals
    // [[mu, -i gamma], [i gamma, nu]] with the b_l placement above.
    mb.gamma = (mb.b_hat * mb.X - mb.a_hat * mb.Y) / (2.0 * std::sqrt(rho));

    // Cross-check against the DFT sums.
    const BlockCirculant bc = assemble_blocks(p, pc);
    std::complex<double> M00 = 0, M01 = 0, M10 = 0, M11 = 0;
    for (int l = 0; l < m; ++l) {
        const std::complex<double> w =
            std::polar(1.0, 2.0 * M_PI * pmode * l / m);
        M00 += bc.blocks[l](0, 0) * w;
        M01 += bc.blocks[l](0, 1) * w;
        M10 += bc.blocks[l](1, 0) * w;
        M11 += bc.blocks[l](1, 1) * w;
    }
    const double scale = std::max({1.0, std::abs(mb.mu), std::abs(mb.nu), std::abs(mb.gamma)});
    const double diff = std::max({std::abs(M00 - mb.mu), std::abs(M11 - mb.nu),
                                  std::abs(M01 - std::complex<double>(0, -mb.gamma)),
                                  std::abs(M10 - std::complex<double>(0, mb.gamma))});
    if (diff > 1e-9 * scale)
        throw InternalInconsistency("mode block closed form disagrees with DFT sums");
    return mb;
}

Spectrum full_spectrum(const DiskParams& p, const PeakCount& pc) {
    const int m = pc.m;
    Spectrum out;
    out.eigenvalues.reserve(2 * m);
    for (int q = 0; q < m; ++q) {
        const ModeBlock mb = mode_block(p, pc, q);
        const auto [lo, hi] = mb.eigenvalues();
        out.eigenvalues.push_back(lo);
        out.eigenvalues.push_back(hi);
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    double rad = 0.0;
    for (double ev : out.eigenvalues) rad = std::max(rad, std::abs(ev));
    for (double ev : out.eigenvalues)
        if (std::abs(ev) < 1e-10 * rad) ++out.zero_count;

    // Kernel eigenvector computed numerically from the assembled polar
    // Hessian, then transformed to Cartesian coordinates at the polygon.
    const BlockCirculant bc = assemble_blocks(p, pc);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bc.dense());
    int imin = 0;
    es.eigenvalues().cwiseAbs().minCoeff(&imin);
    const Eigen::VectorXd v_polar = es.eigenvectors().col(imin);

    const double r = std::sqrt(bc.rho);
    Eigen::VectorXd v_cart(2 * m);
    for (int j = 0; j < m; ++j) {
        const double th = 2.0 * M_PI * j / m;
        const double dr = v_polar[2 * j];
        const double dth = v_polar[2 * j + 1];
        v_cart[2 * j] = dr * std::cos(th) - r * std::sin(th) * dth;
        v_cart[2 * j + 1] = dr * std::sin(th) + r * std::cos(th) * dth;
    }
    v_cart.normalize();
    if (v_cart[1] < 0) v_cart = -v_cart; // fix the overall sign
    out.zero_vector.assign(v_cart.data(), v_cart.data() + 2 * m);
    return out;
}

double dft_conjugation_residual(const DiskParams& p, const PeakCount& pc) {
    const int m = pc.m;
    const BlockCirculant bc = assemble_blocks(p, pc);
    const Eigen::MatrixXd H = bc.dense();

    Eigen::MatrixXcd FE(2 * m, 2 * m);
    FE.setZero();
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            const std::complex<double> w = std::polar(1.0, 2.0 * M_PI * j * k / m);
            FE(2 * j, 2 * k) = w;
            FE(2 * j + 1, 2 * k + 1) = w;
        }
    const Eigen::MatrixXcd M = (FE.adjoint() * H.cast<std::complex<double>>() * FE) / double(m);

    double off = 0.0, diag_dev = 0.0;
    for (int bp = 0; bp < m; ++bp) {
        const ModeBlock mb = mode_block(p, pc, bp);
        Eigen::Matrix2cd Mp;
        Mp << mb.mu, std::complex<double>(0, -mb.gamma),
              std::complex<double>(0, mb.gamma), mb.nu;
        diag_dev = std::max(diag_dev, (M.block<2, 2>(2 * bp, 2 * bp) - Mp).cwiseAbs().maxCoeff());
    }
    for (int bj = 0; bj < m; ++bj)
        for (int bk = 0; bk < m; ++bk) {
            if (bj == bk) continue;
            off = std::max(off, M.block<2, 2>(2 * bj, 2 * bk).cwiseAbs().maxCoeff());
        }
    return off + diag_dev;
}

} // namespace liouville

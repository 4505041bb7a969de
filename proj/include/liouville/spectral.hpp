#pragma once

#include <Eigen/Dense>

#include "liouville/params.hpp"

namespace liouville {

/// Block-circulant polar Hessian of Phi_m at the regular polygon:
/// H*_{jk} = C_{(k-j) mod m}, with C_l = [[a_l, -b_l], [b_l, c_l]] and
/// C_0 = diag(a_0, c_0). rho = r_{alpha,m}^2, gaps D_l = 1 + rho^2
/// - 2 rho cos(2 pi l / m).
struct BlockCirculant {
    int m = 1;
    double rho = 0.0;
    std::vector<Eigen::Matrix2d> blocks; // C_0 .. C_{m-1}
    std::vector<double> angles;          // 2 pi l / m, l = 0..m-1
    std::vector<double> gaps;            // D_l (D_0 = (1-rho)^2)

    /// Assembled 2m x 2m polar Hessian.
    Eigen::MatrixXd dense() const;
};

struct LatticeSums {
    double R = 0.0; // sum_{l>=1} w^{pl} / sin^2(pi l / m)
    double S = 0.0; // sum_l w^{pl} / D_l
    double T = 0.0; // sum_l w^{pl} / D_l^2
};

/// Fourier mode block M_p = sum_l C_l w^{pl} = [[mu, -i gamma], [i gamma, nu]].
struct ModeBlock {
    int p = 0;
    double mu = 0.0, nu = 0.0, gamma = 0.0;
    double X = 0.0, Y = 0.0, a_hat = 0.0, b_hat = 0.0;

    double det() const { return mu * nu - gamma * gamma; }
    /// -4 p^2 (m-p)^2 / rho
    double det_closed_form(int m, double rho) const {
        return -4.0 * double(p) * p * double(m - p) * (m - p) / rho;
    }
    /// Eigenvalues of the Hermitian block, in closed form.
    std::pair<double, double> eigenvalues() const;
};

struct Spectrum {
    std::vector<double> eigenvalues;  // 2m values, sorted ascending
    std::vector<double> zero_vector;  // Cartesian coordinates, normalized
    int zero_count = 0;               // eigenvalues below 1e-10 * spectral radius
};

BlockCirculant assemble_blocks(const DiskParams& p, const PeakCount& m);

/// Closed-form R_p, S_p, T_p for Fourier mode pmode (0 <= pmode < m).
LatticeSums lattice_sums(const DiskParams& p, const PeakCount& m, int pmode);

/// Closed-form mode block, cross-checked against the DFT of the assembled
/// blocks; throws InternalInconsistency if the two routes disagree.
ModeBlock mode_block(const DiskParams& p, const PeakCount& m, int pmode);

/// Eigenvalues of all mode blocks merged, plus the kernel eigenvector of the
/// assembled Hessian transformed to Cartesian coordinates.
Spectrum full_spectrum(const DiskParams& p, const PeakCount& m);

/// Max off-diagonal magnitude of (1/m)(F* (x) E2) H* (F (x) E2) plus the max
/// deviation of its diagonal blocks from the closed-form mode blocks.
double dft_conjugation_residual(const DiskParams& p, const PeakCount& m);

} // namespace liouville

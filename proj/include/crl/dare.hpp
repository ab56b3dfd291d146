#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "crl/errors.hpp"

namespace crl {

/// Frobenius-norm residual of a candidate discrete Riccati solution:
/// || P - (A'PA - A'PB (R + B'PB)^-1 B'PA + Q) ||.
inline double dare_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                            const Eigen::MatrixXd& P) {
    const Eigen::MatrixXd BtPB = B.transpose() * P * B;
    const Eigen::MatrixXd gain_term =
        A.transpose() * P * B * (R + BtPB).ldlt().solve(B.transpose() * P * A);
    const Eigen::MatrixXd next = A.transpose() * P * A - gain_term + Q;
    return (P - next).norm();
}

/// Stabilizing solution of the discrete algebraic Riccati equation
///   P = A'PA - A'PB (R + B'PB)^-1 B'PA + Q
/// via the structured doubling algorithm. Requires (A, B) stabilizable,
/// Q >= 0, R > 0. Throws NoConvergenceError when the iteration cap is hit or
/// the residual bound 1e-10 * (1 + ||P||) cannot be met.
inline Eigen::MatrixXd solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                  const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                                  int max_iter = 120) {
    const auto n = A.rows();
    if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != B.cols() ||
        R.cols() != B.cols())
        throw std::invalid_argument("solve_dare: inconsistent dimensions");

    Eigen::LLT<Eigen::MatrixXd> r_chol(R);
    if (r_chol.info() != Eigen::Success) throw std::invalid_argument("solve_dare: R must be positive definite");

    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd Ak = A;
    Eigen::MatrixXd Gk = B * r_chol.solve(B.transpose());
    Eigen::MatrixXd Hk = Q;

    for (int it = 0; it < max_iter; ++it) {
        const Eigen::MatrixXd W = I + Gk * Hk;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(W);
        const Eigen::MatrixXd W_inv_A = lu.solve(Ak);
        const Eigen::MatrixXd W_inv_G = lu.solve(Gk);

        const Eigen::MatrixXd A_next = Ak * W_inv_A;
        const Eigen::MatrixXd G_next = Gk + Ak * W_inv_G * Ak.transpose();
        const Eigen::MatrixXd H_next = Hk + W_inv_A.transpose() * Hk * Ak;

        // Max-abs norms here: squared Frobenius norms overflow long before the
        // divergence guard fires on unstabilizable problems.
        const double h_step = (H_next - Hk).cwiseAbs().maxCoeff();
        Ak = A_next;
        Gk = 0.5 * (G_next + G_next.transpose());
        Hk = 0.5 * (H_next + H_next.transpose());
        if (!Hk.allFinite()) throw NoConvergenceError("solve_dare: iteration diverged");

        if (h_step <= 1e-14 * (1.0 + Hk.cwiseAbs().maxCoeff())) {
            const Eigen::MatrixXd P = 0.5 * (Hk + Hk.transpose());
            const double res = dare_residual(A, B, Q, R, P);
            if (std::isfinite(res) && res <= 1e-10 * (1.0 + P.norm())) return P;
        }
    }
    throw NoConvergenceError("solve_dare: no stabilizing solution within iteration cap");
}

/// State-feedback gain K = (R + B'PB)^-1 B'PA for a DARE solution P.
inline Eigen::MatrixXd dare_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& R, const Eigen::MatrixXd& P) {
    return (R + B.transpose() * P * B).ldlt().solve(B.transpose() * P * A);
}

/// Largest eigenvalue magnitude.
inline double spectral_radius(const Eigen::MatrixXd& M) {
    return M.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace crl

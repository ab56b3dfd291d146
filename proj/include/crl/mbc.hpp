#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "crl/dare.hpp"
#include "crl/errors.hpp"
#include "crl/linear_model.hpp"

namespace crl {

/// Discrete error-driven output-feedback controller
///   u_k   = C_c x_c + D_c e_k      (output first)
///   x_c+  = A_c x_c + B_c e_k
/// where e_k is the tracking error. step() advances the internal state;
/// output()/advance() expose the same maps on an external state vector so the
/// closed-loop environment can own the controller state.
struct StateSpaceController {
    Eigen::MatrixXd A_c;  // nc x nc
    Eigen::MatrixXd B_c;  // nc x o
    Eigen::MatrixXd C_c;  // m x nc
    Eigen::MatrixXd D_c;  // m x o
    Eigen::VectorXd x_c;  // nc
    double dt = 0.0;

    int order() const { return static_cast<int>(A_c.rows()); }

    void reset() { x_c.setZero(); }

    double output(const Eigen::VectorXd& state, double e) const {
        return (C_c * state)(0) + D_c(0, 0) * e;
    }

    Eigen::VectorXd advance(const Eigen::VectorXd& state, double e) const {
        return A_c * state + B_c * e;
    }

    double step(double e) {
        const double u = output(x_c, e);
        x_c = advance(x_c, e);
        return u;
    }
};

/// Run the controller over an error sequence starting from reset state.
inline double mbc_step(StateSpaceController& c, double e) { return c.step(e); }

/// Design weights for the servo synthesis. The regulator penalizes the body
/// output, the error integrator and the input. The estimator models process
/// noise entering through the control channel (W = process_noise * B2 B2' +
/// process_noise_reg * I); isotropic noise would pin the filter's slow pole
/// near the lightly damped body mode and miss the settling budget.
struct SynthesisWeights {
    double output_weight = 1e3;
    double integral_weight = 1e5;
    double input_weight = 1e-2;
    double process_noise = 1.0;
    double process_noise_reg = 1e-12;
    double measurement_noise = 1e-8;

    void validate() const {
        if (!(output_weight >= 0.0) || !(integral_weight >= 0.0))
            throw std::invalid_argument("SynthesisWeights: state weights must be >= 0");
        if (!(input_weight > 0.0) || !(process_noise > 0.0) || !(process_noise_reg >= 0.0) ||
            !(measurement_noise > 0.0))
            throw std::invalid_argument("SynthesisWeights: input weight and covariances must be > 0");
    }
};

/// Spectral radius of the plant/controller interconnection under zero
/// reference (e = -y).
inline double closed_loop_spectral_radius(const LinearModel& m, const StateSpaceController& c) {
    const auto n = m.A.rows();
    const auto nc = c.A_c.rows();
    Eigen::MatrixXd loop(n + nc, n + nc);
    loop.topLeftCorner(n, n) = m.A - m.B2 * c.D_c * m.C;
    loop.topRightCorner(n, nc) = m.B2 * c.C_c;
    loop.bottomLeftCorner(nc, n) = -c.B_c * m.C;
    loop.bottomRightCorner(nc, nc) = c.A_c;
    return spectral_radius(loop);
}

/// LQG servo synthesis on the nominal model: the plant state is augmented
/// with a discrete integrator of the tracking error (q+ = q + dt e), a
/// regulator gain is solved on the augmented state, and a steady-state
/// observer reconstructs the plant state from the error signal (m = -e equals
/// the measured output when the reference is zero). The assembled controller
/// maps e -> u with
///   A_c = [A - B2 Kx - L C, -B2 Kq; 0, 1],  B_c = [-L; dt],
///   C_c = [-Kx, -Kq],                        D_c = 0.
/// Constant references are rejected by the integrator regardless of the
/// observer's reference-induced bias.
inline StateSpaceController synthesize_mbc(const LinearModel& m, const SynthesisWeights& w) {
    w.validate();
    const auto n = m.A.rows();

    Eigen::MatrixXd A_aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
    A_aug.topLeftCorner(n, n) = m.A;
    A_aug.bottomLeftCorner(1, n) = -m.dt * m.C;
    A_aug(n, n) = 1.0;
    Eigen::MatrixXd B_aug = Eigen::MatrixXd::Zero(n + 1, 1);
    B_aug.topRows(n) = m.B2;

    Eigen::MatrixXd Q_aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Q_aug.topLeftCorner(n, n) = w.output_weight * m.C.transpose() * m.C;
    Q_aug(n, n) = w.integral_weight;
    Eigen::MatrixXd R(1, 1);
    R(0, 0) = w.input_weight;

    const Eigen::MatrixXd P = solve_dare(A_aug, B_aug, Q_aug, R);
    const Eigen::MatrixXd K = dare_gain(A_aug, B_aug, R, P);  // 1 x (n+1)
    const Eigen::MatrixXd Kx = K.leftCols(n);
    const double Kq = K(0, n);

    // Estimator: dual DARE on (A', C') with covariances (W, V); predictor
    // gain L = A S C' (V + C S C')^-1.
    const Eigen::MatrixXd W_cov = w.process_noise * (m.B2 * m.B2.transpose()) +
                                  w.process_noise_reg * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd V_cov(1, 1);
    V_cov(0, 0) = w.measurement_noise;
    const Eigen::MatrixXd S = solve_dare(m.A.transpose(), m.C.transpose(), W_cov, V_cov);
    const Eigen::MatrixXd L =
        m.A * S * m.C.transpose() * (V_cov + m.C * S * m.C.transpose()).inverse();

    StateSpaceController c;
    c.A_c = Eigen::MatrixXd::Zero(n + 1, n + 1);
    c.A_c.topLeftCorner(n, n) = m.A - m.B2 * Kx - L * m.C;
    c.A_c.topRightCorner(n, 1) = -m.B2 * Kq;
    c.A_c(n, n) = 1.0;
    c.B_c = Eigen::MatrixXd::Zero(n + 1, 1);
    c.B_c.topRows(n) = -L;
    c.B_c(n, 0) = m.dt;
    c.C_c = Eigen::MatrixXd::Zero(1, n + 1);
    c.C_c.leftCols(n) = -Kx;
    c.C_c(0, n) = -Kq;
    c.D_c = Eigen::MatrixXd::Zero(1, 1);
    c.x_c = Eigen::VectorXd::Zero(n + 1);
    c.dt = m.dt;

    const double radius = closed_loop_spectral_radius(m, c);
    if (!(radius < 1.0))
        throw UnstableClosedLoopError("synthesize_mbc: closed loop spectral radius " +
                                      std::to_string(radius));
    return c;
}

// ---------------------------------------------------------------------------
// Plain-text controller exchange format. Decimal with 17 significant digits;
// round-trips doubles exactly. Layout:
//   mbc v1
//   dt <value>
//   <name> <rows> <cols>
//   <row values ...>
// ---------------------------------------------------------------------------

namespace detail {

inline void write_matrix(std::ostream& os, const char* name, const Eigen::MatrixXd& M) {
    os << name << ' ' << M.rows() << ' ' << M.cols() << '\n';
    char buf[32];
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", M(i, j));
            os << buf << (j + 1 < M.cols() ? ' ' : '\n');
        }
    }
}

inline Eigen::MatrixXd read_matrix(std::istream& is, const std::string& expected_name) {
    std::string name;
    Eigen::Index rows = 0, cols = 0;
    if (!(is >> name >> rows >> cols) || name != expected_name || rows <= 0 || cols <= 0)
        throw std::runtime_error("controller file: bad matrix header, expected " + expected_name);
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            if (!(is >> M(i, j))) throw std::runtime_error("controller file: truncated " + expected_name);
    return M;
}

}  // namespace detail

inline void save_controller(const StateSpaceController& c, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_controller: cannot open " + path);
    os << "mbc v1\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", c.dt);
    os << "dt " << buf << '\n';
    detail::write_matrix(os, "A_c", c.A_c);
    detail::write_matrix(os, "B_c", c.B_c);
    detail::write_matrix(os, "C_c", c.C_c);
    detail::write_matrix(os, "D_c", c.D_c);
    if (!os) throw std::runtime_error("save_controller: write failed for " + path);
}

inline StateSpaceController load_controller(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_controller: cannot open " + path);
    std::string magic, version;
    if (!(is >> magic >> version) || magic != "mbc" || version != "v1")
        throw std::runtime_error("load_controller: bad header in " + path);
    std::string key;
    StateSpaceController c;
    if (!(is >> key >> c.dt) || key != "dt") throw std::runtime_error("load_controller: missing dt");
    c.A_c = detail::read_matrix(is, "A_c");
    c.B_c = detail::read_matrix(is, "B_c");
    c.C_c = detail::read_matrix(is, "C_c");
    c.D_c = detail::read_matrix(is, "D_c");
    if (c.B_c.rows() != c.A_c.rows() || c.C_c.cols() != c.A_c.cols() ||
        c.D_c.rows() != c.C_c.rows() || c.D_c.cols() != c.B_c.cols())
        throw std::runtime_error("load_controller: inconsistent dimensions in " + path);
    c.x_c = Eigen::VectorXd::Zero(c.A_c.rows());
    return c;
}

}  // namespace crl

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "crl/plant.hpp"

namespace crl {

/// Discrete-time linear model x+ = A x + B1 w + B2 u, y = C x obtained by
/// zero-order-hold discretization. State order:
/// (x_act, x_gear, x_body, v_act, v_gear, v_body).
struct LinearModel {
    Eigen::MatrixXd A;   // n x n
    Eigen::MatrixXd B1;  // n x l, disturbance input
    Eigen::MatrixXd B2;  // n x m, control input
    Eigen::MatrixXd C;   // o x n
    double dt = 0.0;
};

/// Continuous-time matrices of the always-engaged (backlash = 0) chain.
inline void continuous_matrices(const PlantParams& p, Eigen::MatrixXd& A, Eigen::MatrixXd& B1,
                                Eigen::MatrixXd& B2, Eigen::MatrixXd& C) {
    A = Eigen::MatrixXd::Zero(6, 6);
    A.block<3, 3>(0, 3).setIdentity();

    A(3, 0) = -p.stiff_gear / p.mass_actuator;
    A(3, 1) = p.stiff_gear / p.mass_actuator;
    A(3, 3) = -(p.damp_gear + p.damp_actuator) / p.mass_actuator;
    A(3, 4) = p.damp_gear / p.mass_actuator;

    A(4, 0) = p.stiff_gear / p.mass_gear;
    A(4, 1) = -(p.stiff_gear + p.stiff_drive) / p.mass_gear;
    A(4, 2) = p.stiff_drive / p.mass_gear;
    A(4, 3) = p.damp_gear / p.mass_gear;
    A(4, 4) = -(p.damp_gear + p.damp_drive) / p.mass_gear;
    A(4, 5) = p.damp_drive / p.mass_gear;

    A(5, 1) = p.stiff_drive / p.mass_body;
    A(5, 2) = -(p.stiff_drive + p.stiff_ground) / p.mass_body;
    A(5, 4) = p.damp_drive / p.mass_body;
    A(5, 5) = -(p.damp_drive + p.damp_ground) / p.mass_body;

    B1 = Eigen::MatrixXd::Zero(6, 1);
    B1(3, 0) = 1.0 / p.mass_actuator;
    B2 = B1;

    C = Eigen::MatrixXd::Zero(1, 6);
    C(0, 2) = 1.0;  // output is the body displacement
}

/// ZOH discretization of the nominal (backlash = 0) plant. Uses the matrix
/// exponential of the augmented block [[A, B], [0, 0]].
inline LinearModel linearize_nominal(const PlantParams& p, double dt) {
    p.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("linearize_nominal: dt must be > 0");

    Eigen::MatrixXd Ac, B1c, B2c, C;
    continuous_matrices(p, Ac, B1c, B2c, C);

    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(8, 8);
    aug.topLeftCorner(6, 6) = Ac;
    aug.block<6, 1>(0, 6) = B1c;
    aug.block<6, 1>(0, 7) = B2c;
    const Eigen::MatrixXd e = (aug * dt).exp();

    LinearModel m;
    m.A = e.topLeftCorner(6, 6);
    m.B1 = e.block<6, 1>(0, 6);
    m.B2 = e.block<6, 1>(0, 7);
    m.C = C;
    m.dt = dt;
    return m;
}

inline Eigen::VectorXd to_vector(const PlantState& s) {
    Eigen::VectorXd v(6);
    v << s.x_act, s.x_gear, s.x_body, s.v_act, s.v_gear, s.v_body;
    return v;
}

inline PlantState from_vector(const Eigen::VectorXd& v) {
    return PlantState{v(0), v(1), v(2), v(3), v(4), v(5)};
}

}  // namespace crl

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "crl/errors.hpp"

namespace crl {

/// Physical parameters of the three-mass powertrain chain
///
///   actuator --(gear spring/damper)-- gear --(drive spring/damper, backlash)-- body --(ground spring/damper)
///
/// with an additional damper from the actuator to ground. Control and
/// disturbance forces act on the actuator mass. Defaults are the nominal plant.
struct PlantParams {
    // stiffness [N/m]
    double stiff_ground = 660.0;   // spring from body to ground
    double stiff_gear = 5.3e4;     // spring between actuator and gear
    double stiff_drive = 2.2e4;    // spring between gear and body (through the backlash)
    // mass [kg]
    double mass_actuator = 1.04;
    double mass_gear = 0.039;
    double mass_body = 0.232;
    // damping [N s/m]
    double damp_drive = 12.5;      // between gear and body, acts only in contact
    double damp_ground = 0.1;      // body to ground
    double damp_actuator = 1.5;    // actuator to ground
    double damp_gear = 36.0;       // between actuator and gear
    // total backlash width [m]; the clearance is backlash/2 to each side
    double backlash = 0.005;
    // step reference: ref_level_1 until ref_switch_time, ref_level_2 afterwards
    double ref_level_1 = -0.006;   // [m]
    double ref_level_2 = 0.0227;   // [m]
    double ref_switch_time = 2.0;  // [s]

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0)) throw std::invalid_argument(std::string("PlantParams: ") + name + " must be > 0");
        };
        auto nonneg = [](double v, const char* name) {
            if (!(v >= 0.0)) throw std::invalid_argument(std::string("PlantParams: ") + name + " must be >= 0");
        };
        positive(stiff_ground, "stiff_ground");
        positive(stiff_gear, "stiff_gear");
        positive(stiff_drive, "stiff_drive");
        positive(mass_actuator, "mass_actuator");
        positive(mass_gear, "mass_gear");
        positive(mass_body, "mass_body");
        nonneg(damp_drive, "damp_drive");
        nonneg(damp_ground, "damp_ground");
        nonneg(damp_actuator, "damp_actuator");
        nonneg(damp_gear, "damp_gear");
        nonneg(backlash, "backlash");
        if (!std::isfinite(ref_level_1) || !std::isfinite(ref_level_2) || !(ref_switch_time >= 0.0))
            throw std::invalid_argument("PlantParams: invalid reference definition");
    }
};

inline PlantParams nominal_params() { return PlantParams{}; }

/// Mechanical state: displacements and velocities of the three masses.
struct PlantState {
    double x_act = 0.0;
    double x_gear = 0.0;
    double x_body = 0.0;
    double v_act = 0.0;
    double v_gear = 0.0;
    double v_body = 0.0;

    bool finite() const {
        return std::isfinite(x_act) && std::isfinite(x_gear) && std::isfinite(x_body) &&
               std::isfinite(v_act) && std::isfinite(v_gear) && std::isfinite(v_body);
    }
};

struct Accelerations {
    double a_act = 0.0;
    double a_gear = 0.0;
    double a_body = 0.0;
};

/// Dead-zone map of a relative displacement through a clearance of total
/// width `width`: no force is transmitted while |d| <= width/2. Odd,
/// continuous, 1-Lipschitz; identity for width = 0.
inline double dead_zone(double d, double width) {
    const double half = 0.5 * width;
    if (d > half) return d - half;
    if (d < -half) return d + half;
    return 0.0;
}

/// Rigid-body accelerations of the chain. The drive damper acts only while
/// the clearance is closed (|x_gear - x_body| > backlash/2).
inline Accelerations plant_accel(const PlantState& s, double u, double w, const PlantParams& p) {
    const double f_gear = p.stiff_gear * (s.x_act - s.x_gear) + p.damp_gear * (s.v_act - s.v_gear);
    const double d = s.x_gear - s.x_body;
    const bool engaged = std::abs(d) > 0.5 * p.backlash;
    const double f_drive =
        p.stiff_drive * dead_zone(d, p.backlash) + (engaged ? p.damp_drive * (s.v_gear - s.v_body) : 0.0);
    const double f_ground = p.stiff_ground * s.x_body + p.damp_ground * s.v_body;
    return Accelerations{
        (u + w - f_gear - p.damp_actuator * s.v_act) / p.mass_actuator,
        (f_gear - f_drive) / p.mass_gear,
        (f_drive - f_ground) / p.mass_body,
    };
}

namespace detail {

struct Deriv {
    double dx_act, dx_gear, dx_body, dv_act, dv_gear, dv_body;
};

inline Deriv plant_deriv(const PlantState& s, double u, double w, const PlantParams& p) {
    const Accelerations a = plant_accel(s, u, w, p);
    return Deriv{s.v_act, s.v_gear, s.v_body, a.a_act, a.a_gear, a.a_body};
}

inline PlantState shifted(const PlantState& s, const Deriv& d, double h) {
    return PlantState{s.x_act + h * d.dx_act,  s.x_gear + h * d.dx_gear, s.x_body + h * d.dx_body,
                      s.v_act + h * d.dv_act,  s.v_gear + h * d.dv_gear, s.v_body + h * d.dv_body};
}

}  // namespace detail

/// Advance the plant by dt under zero-order-hold inputs u, w using `substeps`
/// classical RK4 stages. The backlash engagement flag is re-evaluated inside
/// every stage. Throws NonFiniteError if the state diverges.
inline PlantState step_plant(const PlantState& state, double u, double w, const PlantParams& p,
                             double dt, int substeps = 20) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_plant: dt must be > 0");
    if (substeps < 1) throw std::invalid_argument("step_plant: substeps must be >= 1");
    const double h = dt / substeps;
    PlantState s = state;
    for (int i = 0; i < substeps; ++i) {
        const detail::Deriv k1 = detail::plant_deriv(s, u, w, p);
        const detail::Deriv k2 = detail::plant_deriv(detail::shifted(s, k1, 0.5 * h), u, w, p);
        const detail::Deriv k3 = detail::plant_deriv(detail::shifted(s, k2, 0.5 * h), u, w, p);
        const detail::Deriv k4 = detail::plant_deriv(detail::shifted(s, k3, h), u, w, p);
        const double c = h / 6.0;
        s.x_act += c * (k1.dx_act + 2.0 * k2.dx_act + 2.0 * k3.dx_act + k4.dx_act);
        s.x_gear += c * (k1.dx_gear + 2.0 * k2.dx_gear + 2.0 * k3.dx_gear + k4.dx_gear);
        s.x_body += c * (k1.dx_body + 2.0 * k2.dx_body + 2.0 * k3.dx_body + k4.dx_body);
        s.v_act += c * (k1.dv_act + 2.0 * k2.dv_act + 2.0 * k3.dv_act + k4.dv_act);
        s.v_gear += c * (k1.dv_gear + 2.0 * k2.dv_gear + 2.0 * k3.dv_gear + k4.dv_gear);
        s.v_body += c * (k1.dv_body + 2.0 * k2.dv_body + 2.0 * k3.dv_body + k4.dv_body);
        if (!s.finite()) throw NonFiniteError("step_plant: state diverged");
    }
    return s;
}

/// Ideal step reference: ref_level_1 before ref_switch_time, ref_level_2 from
/// then on.
inline double reference_signal(const PlantParams& p, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("reference_signal: t must be >= 0");
    return t < p.ref_switch_time ? p.ref_level_1 : p.ref_level_2;
}

/// Total mechanical energy of the always-engaged (backlash = 0) chain. Used
/// by the passivity checks; not meaningful while a clearance is open.
inline double mechanical_energy(const PlantState& s, const PlantParams& p) {
    const double kinetic = 0.5 * (p.mass_actuator * s.v_act * s.v_act +
                                  p.mass_gear * s.v_gear * s.v_gear +
                                  p.mass_body * s.v_body * s.v_body);
    const double d_ag = s.x_act - s.x_gear;
    const double d_gb = s.x_gear - s.x_body;
    const double potential = 0.5 * (p.stiff_gear * d_ag * d_ag + p.stiff_drive * d_gb * d_gb +
                                    p.stiff_ground * s.x_body * s.x_body);
    return kinetic + potential;
}

}  // namespace crl

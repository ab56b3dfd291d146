#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "crl/plant.hpp"
#include "crl/rng.hpp"

namespace {

using namespace crl;

TEST(PlantParams, NominalValues) {
    const PlantParams p = nominal_params();
    EXPECT_EQ(p.stiff_ground, 660.0);
    EXPECT_EQ(p.stiff_gear, 5.3e4);
    EXPECT_EQ(p.stiff_drive, 2.2e4);
    EXPECT_EQ(p.mass_actuator, 1.04);
    EXPECT_EQ(p.mass_gear, 0.039);
    EXPECT_EQ(p.mass_body, 0.232);
    EXPECT_EQ(p.damp_drive, 12.5);
    EXPECT_EQ(p.damp_ground, 0.1);
    EXPECT_EQ(p.damp_actuator, 1.5);
    EXPECT_EQ(p.damp_gear, 36.0);
    EXPECT_EQ(p.backlash, 0.005);
    EXPECT_EQ(p.ref_level_1, -0.006);
    EXPECT_EQ(p.ref_level_2, 0.0227);
    EXPECT_EQ(p.ref_switch_time, 2.0);
    EXPECT_NO_THROW(p.validate());
}

TEST(PlantParams, ValidateRejectsBadValues) {
    PlantParams p = nominal_params();
    p.mass_actuator = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = nominal_params();
    p.backlash = -1e-6;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = nominal_params();
    p.damp_ground = -0.1;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(DeadZone, DefinitionCases) {
    EXPECT_DOUBLE_EQ(dead_zone(0.001, 0.005), 0.0);
    EXPECT_DOUBLE_EQ(dead_zone(0.01, 0.005), 0.0075);
    EXPECT_DOUBLE_EQ(dead_zone(-0.01, 0.005), -0.0075);
    for (double d : {-3.0, -0.7, 0.0, 0.2, 5.0}) EXPECT_DOUBLE_EQ(dead_zone(d, 0.0), d);
}

TEST(DeadZone, OddLipschitzAndFlatInsideZone) {
    Rng rng = derive_stream(7, "test/deadzone");
    for (int i = 0; i < 2000; ++i) {
        const double width = uniform(rng, 0.0, 0.02);
        const double d = uniform(rng, -0.05, 0.05);
        const double d2 = uniform(rng, -0.05, 0.05);
        EXPECT_DOUBLE_EQ(dead_zone(-d, width), -dead_zone(d, width));
        EXPECT_LE(std::abs(dead_zone(d, width) - dead_zone(d2, width)), std::abs(d - d2) + 1e-15);
        const double inside = uniform(rng, -0.5 * width, 0.5 * width);
        EXPECT_DOUBLE_EQ(dead_zone(inside, width), 0.0);
    }
}

TEST(PlantAccel, EquilibriumAtRest) {
    const Accelerations a = plant_accel(PlantState{}, 0.0, 0.0, nominal_params());
    EXPECT_DOUBLE_EQ(a.a_act, 0.0);
    EXPECT_DOUBLE_EQ(a.a_gear, 0.0);
    EXPECT_DOUBLE_EQ(a.a_body, 0.0);
}

// Static-equilibrium oracle: with backlash = 0 and all velocities zero, solve
// the force-balance chain by hand:
//   a_body = 0  =>  stiff_drive (x_gear - x_body) = stiff_ground x_body
//   a_gear = 0  =>  stiff_gear (x_act - x_gear)   = stiff_drive (x_gear - x_body)
//   a_act  = 0  =>  u = stiff_gear (x_act - x_gear)
TEST(PlantAccel, StaticEquilibriumOracle) {
    PlantParams p = nominal_params();
    p.backlash = 0.0;
    const double u = 0.66;
    const double x_body = u / p.stiff_ground;
    const double x_gear = x_body * (1.0 + p.stiff_ground / p.stiff_drive);
    const double x_act = x_gear + u / p.stiff_gear;
    const Accelerations a = plant_accel(PlantState{x_act, x_gear, x_body, 0.0, 0.0, 0.0}, u, 0.0, p);
    EXPECT_NEAR(a.a_act, 0.0, 1e-12);
    EXPECT_NEAR(a.a_gear, 0.0, 1e-9);  // 1/mass_gear amplifies rounding
    EXPECT_NEAR(a.a_body, 0.0, 1e-10);
}

TEST(PlantAccel, BodyDecouplesInsideDeadZone) {
    const PlantParams p = nominal_params();
    PlantState s;
    s.x_body = 0.004;
    s.x_gear = s.x_body + 0.2 * p.backlash;  // |x_gear - x_body| < backlash/2
    s.x_act = s.x_gear;
    const Accelerations a = plant_accel(s, 0.0, 0.0, p);
    EXPECT_DOUBLE_EQ(a.a_body, -p.stiff_ground * s.x_body / p.mass_body);
}

TEST(StepPlant, ZeroStateIsFixedPoint) {
    const PlantParams p = nominal_params();
    PlantState s;
    for (int k = 0; k < 50; ++k) s = step_plant(s, 0.0, 0.0, p, 0.006);
    EXPECT_DOUBLE_EQ(s.x_body, 0.0);
    EXPECT_DOUBLE_EQ(s.v_act, 0.0);
}

// Static-gain oracle: terminal body displacement under constant force u is
// u / stiff_ground (only the ground spring reacts in steady state).
TEST(StepPlant, StaticGainOracle) {
    PlantParams p = nominal_params();
    p.backlash = 0.0;
    const double u = 0.66;
    PlantState s;
    for (int k = 0; k < 2000; ++k) s = step_plant(s, u, 0.0, p, 0.006);  // 12 s
    EXPECT_NEAR(s.x_body, u / p.stiff_ground, 1e-6);
}

TEST(StepPlant, SubstepHalvingSelfConvergence) {
    PlantParams p = nominal_params();
    p.backlash = 0.0;
    // Reach a non-trivial state with the fast gear mode decayed.
    PlantState s;
    for (int k = 0; k < 50; ++k) s = step_plant(s, 0.66, 0.0, p, 0.006);
    const PlantState a = step_plant(s, 0.66, 0.0, p, 0.006, 20);
    const PlantState b = step_plant(s, 0.66, 0.0, p, 0.006, 40);
    auto norm = [](const PlantState& q) {
        return std::sqrt(q.x_act * q.x_act + q.x_gear * q.x_gear + q.x_body * q.x_body +
                         q.v_act * q.v_act + q.v_gear * q.v_gear + q.v_body * q.v_body);
    };
    const PlantState d{a.x_act - b.x_act,   a.x_gear - b.x_gear, a.x_body - b.x_body,
                       a.v_act - b.v_act,   a.v_gear - b.v_gear, a.v_body - b.v_body};
    EXPECT_LT(norm(d) / norm(a), 1e-9);
}

// Error against a 10x finer reference must shrink at >= 4th order when the
// substep count doubles (smooth, always-engaged segment). Substep counts
// below 8 leave the ~1400 rad/s gear mode outside the asymptotic regime.
TEST(StepPlant, FourthOrderConvergence) {
    PlantParams p = nominal_params();
    p.backlash = 0.0;
    PlantState s;
    for (int k = 0; k < 9; ++k) s = step_plant(s, 0.66, 0.0, p, 0.006);
    const PlantState ref = step_plant(s, 0.66, 0.0, p, 0.006, 320);
    auto err = [&](int sub) {
        const PlantState q = step_plant(s, 0.66, 0.0, p, 0.006, sub);
        return std::abs(q.x_act - ref.x_act) + std::abs(q.x_gear - ref.x_gear) +
               std::abs(q.x_body - ref.x_body) + std::abs(q.v_act - ref.v_act) +
               std::abs(q.v_gear - ref.v_gear) + std::abs(q.v_body - ref.v_body);
    };
    const double e8 = err(8);
    const double e16 = err(16);
    const double e32 = err(32);
    EXPECT_GT(e8 / e16, 12.0);  // 2^4 = 16 up to higher-order terms
    EXPECT_GT(e16 / e32, 12.0);
}

TEST(StepPlant, UnforcedEnergyNonIncreasing) {
    PlantParams p = nominal_params();
    p.backlash = 0.0;
    Rng rng = derive_stream(11, "test/energy");
    PlantState s{uniform(rng, -0.01, 0.01), uniform(rng, -0.01, 0.01), uniform(rng, -0.01, 0.01),
                 uniform(rng, -0.5, 0.5),   uniform(rng, -0.5, 0.5),   uniform(rng, -0.5, 0.5)};
    double e_prev = mechanical_energy(s, p);
    const double tol = 1e-12 * e_prev;
    for (int k = 0; k < 200; ++k) {
        s = step_plant(s, 0.0, 0.0, p, 0.006);
        const double e = mechanical_energy(s, p);
        EXPECT_LE(e, e_prev + tol);
        e_prev = e;
    }
}

TEST(StepPlant, NonFiniteStateThrows) {
    const PlantParams p = nominal_params();
    PlantState s;
    s.x_act = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(step_plant(s, 0.0, 0.0, p, 0.006), NonFiniteError);
}

TEST(StepPlant, RejectsBadArguments) {
    const PlantParams p = nominal_params();
    EXPECT_THROW(step_plant(PlantState{}, 0.0, 0.0, p, 0.0), std::invalid_argument);
    EXPECT_THROW(step_plant(PlantState{}, 0.0, 0.0, p, 0.006, 0), std::invalid_argument);
}

TEST(ReferenceSignal, TableValuesAndConstantCase) {
    const PlantParams p = nominal_params();
    EXPECT_DOUBLE_EQ(reference_signal(p, 1.0), -0.006);
    EXPECT_DOUBLE_EQ(reference_signal(p, 3.0), 0.0227);
    EXPECT_DOUBLE_EQ(reference_signal(p, 2.0), 0.0227);  // switch is right-continuous
    PlantParams q = p;
    q.ref_level_1 = q.ref_level_2 = 0.01;
    for (double t : {0.0, 1.9, 2.0, 3.7}) EXPECT_DOUBLE_EQ(reference_signal(q, t), 0.01);
    EXPECT_THROW(reference_signal(p, -0.1), std::invalid_argument);
}

}  // namespace

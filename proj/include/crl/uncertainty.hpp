#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "crl/plant.hpp"
#include "crl/rng.hpp"

namespace crl {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    void validate(const char* name) const {
        if (!(lo <= hi)) throw std::invalid_argument(std::string("Interval ") + name + ": lo > hi");
    }
};

/// Uniform randomization intervals for the perturbable parameters. Defaults
/// are the +-50% bands around the nominal plant (reference bands excepted,
/// which are asymmetric).
struct UncertaintyRanges {
    Interval mass_body{0.1160, 0.3480};
    Interval mass_actuator{0.5200, 1.5600};
    Interval damp_gear{18.0, 54.0};
    Interval damp_drive{6.25, 18.75};
    Interval damp_ground{0.05, 0.15};
    Interval backlash{0.0025, 0.0075};
    Interval ref_level_1{-0.01515, 0.030303};
    Interval ref_level_2{-0.01515, 0.030303};
    /// Stages 1-2 draw the reference from the full band shrunk by this factor
    /// around its midpoint; stage >= 3 uses the full band.
    double stage1_reference_shrink = 0.5;

    void validate() const {
        mass_body.validate("mass_body");
        mass_actuator.validate("mass_actuator");
        damp_gear.validate("damp_gear");
        damp_drive.validate("damp_drive");
        damp_ground.validate("damp_ground");
        backlash.validate("backlash");
        ref_level_1.validate("ref_level_1");
        ref_level_2.validate("ref_level_2");
        if (!(stage1_reference_shrink >= 0.0 && stage1_reference_shrink <= 1.0))
            throw std::invalid_argument("stage1_reference_shrink must lie in [0, 1]");
    }
};

constexpr int kNumStages = 5;

/// Uncertainty components in activation order.
enum class UncertaintyTag {
    masses,          // mass_body, mass_actuator      (stage 1)
    reference,       // ref levels                    (stage 1, full band from stage 3)
    dampings,        // damp_gear, damp_drive, damp_ground (stage 2)
    backlash_fixed,  // backlash at its nominal width (stage 3)
    backlash_width,  // backlash width randomized     (stage 4)
};

/// Cumulative list of components active at a stage. The list at stage t is a
/// prefix of the list at stage t+1.
inline std::vector<UncertaintyTag> active_uncertainty_set(int stage) {
    if (stage < 0 || stage >= kNumStages)
        throw std::out_of_range("active_uncertainty_set: stage out of range");
    std::vector<UncertaintyTag> tags;
    if (stage >= 1) {
        tags.push_back(UncertaintyTag::masses);
        tags.push_back(UncertaintyTag::reference);
    }
    if (stage >= 2) tags.push_back(UncertaintyTag::dampings);
    if (stage >= 3) tags.push_back(UncertaintyTag::backlash_fixed);
    if (stage >= 4) tags.push_back(UncertaintyTag::backlash_width);
    return tags;
}

namespace detail {

inline Interval shrink(const Interval& iv, double factor) {
    const double mid = 0.5 * (iv.lo + iv.hi);
    const double half = 0.5 * (iv.hi - iv.lo) * factor;
    return Interval{mid - half, mid + half};
}

}  // namespace detail

/// Draw a plant for a given stage. Only the components active at that stage
/// are resampled; everything else stays nominal. Draw order is fixed
/// (mass_body, mass_actuator, ref_level_1, ref_level_2, damp_gear, damp_drive,
/// damp_ground, backlash) so a stage never consumes entropy for components it
/// does not activate.
inline PlantParams sample_plant(int stage, const UncertaintyRanges& r, Rng& rng) {
    if (stage < 0 || stage >= kNumStages) throw std::out_of_range("sample_plant: stage out of range");
    r.validate();
    PlantParams p = nominal_params();
    if (stage == 0) {
        p.backlash = 0.0;  // the stage-0 plant is the linear nominal model
        return p;
    }
    p.mass_body = uniform(rng, r.mass_body.lo, r.mass_body.hi);
    p.mass_actuator = uniform(rng, r.mass_actuator.lo, r.mass_actuator.hi);
    const Interval ref1 =
        stage >= 3 ? r.ref_level_1 : detail::shrink(r.ref_level_1, r.stage1_reference_shrink);
    const Interval ref2 =
        stage >= 3 ? r.ref_level_2 : detail::shrink(r.ref_level_2, r.stage1_reference_shrink);
    p.ref_level_1 = uniform(rng, ref1.lo, ref1.hi);
    p.ref_level_2 = uniform(rng, ref2.lo, ref2.hi);
    if (stage >= 2) {
        p.damp_gear = uniform(rng, r.damp_gear.lo, r.damp_gear.hi);
        p.damp_drive = uniform(rng, r.damp_drive.lo, r.damp_drive.hi);
        p.damp_ground = uniform(rng, r.damp_ground.lo, r.damp_ground.hi);
    }
    if (stage == 3) p.backlash = nominal_params().backlash;
    if (stage >= 4) p.backlash = uniform(rng, r.backlash.lo, r.backlash.hi);
    if (stage < 3) p.backlash = 0.0;
    return p;
}

/// Uniform plant-stage choice over {0, ..., t} (every stage introduced so far
/// stays eligible).
inline int sample_task(int stage, Rng& rng) {
    if (stage < 0 || stage >= kNumStages) throw std::out_of_range("sample_task: stage out of range");
    return static_cast<int>(uniform_index(rng, static_cast<std::size_t>(stage) + 1));
}

// ---------------------------------------------------------------------------
// Named evaluation cases: each randomized parameter pinned to min/max/nominal.
// ---------------------------------------------------------------------------

/// Pin map: parameter name -> "min" | "max" | "nominal" ("zero" for backlash).
using CasePins = std::map<std::string, std::string>;

/// Built-in corner cases used by the evaluation bench.
inline CasePins named_case(const std::string& name) {
    if (name == "nominal")
        return {{"mass_body", "nominal"}, {"mass_actuator", "nominal"}, {"damp_gear", "nominal"},
                {"damp_drive", "nominal"}, {"damp_ground", "nominal"}, {"ref_level_1", "nominal"},
                {"ref_level_2", "nominal"}, {"backlash", "zero"}};
    if (name == "fig6")
        return {{"mass_body", "max"}, {"mass_actuator", "max"}, {"damp_gear", "max"},
                {"damp_drive", "min"}, {"damp_ground", "max"}, {"ref_level_1", "max"},
                {"ref_level_2", "min"}, {"backlash", "min"}};
    if (name == "fig7")
        return {{"mass_body", "min"}, {"mass_actuator", "min"}, {"damp_gear", "min"},
                {"damp_drive", "max"}, {"damp_ground", "min"}, {"ref_level_1", "min"},
                {"ref_level_2", "max"}, {"backlash", "max"}};
    if (name == "fig8")
        return {{"mass_body", "min"}, {"mass_actuator", "max"}, {"damp_gear", "min"},
                {"damp_drive", "min"}, {"damp_ground", "max"}, {"ref_level_1", "min"},
                {"ref_level_2", "max"}, {"backlash", "max"}};
    throw std::invalid_argument("unknown case name: " + name);
}

/// Resolve a pin map against the ranges. Unknown keys and unknown pin values
/// are rejected by name.
inline PlantParams pinned_params(const CasePins& pins, const UncertaintyRanges& r) {
    PlantParams p = nominal_params();
    const PlantParams nom = nominal_params();
    for (const auto& [key, value] : pins) {
        const Interval* iv = nullptr;
        double* field = nullptr;
        double nominal = 0.0;
        if (key == "mass_body") {
            iv = &r.mass_body; field = &p.mass_body; nominal = nom.mass_body;
        } else if (key == "mass_actuator") {
            iv = &r.mass_actuator; field = &p.mass_actuator; nominal = nom.mass_actuator;
        } else if (key == "damp_gear") {
            iv = &r.damp_gear; field = &p.damp_gear; nominal = nom.damp_gear;
        } else if (key == "damp_drive") {
            iv = &r.damp_drive; field = &p.damp_drive; nominal = nom.damp_drive;
        } else if (key == "damp_ground") {
            iv = &r.damp_ground; field = &p.damp_ground; nominal = nom.damp_ground;
        } else if (key == "backlash") {
            iv = &r.backlash; field = &p.backlash; nominal = nom.backlash;
        } else if (key == "ref_level_1") {
            iv = &r.ref_level_1; field = &p.ref_level_1; nominal = nom.ref_level_1;
        } else if (key == "ref_level_2") {
            iv = &r.ref_level_2; field = &p.ref_level_2; nominal = nom.ref_level_2;
        } else {
            throw std::invalid_argument("pinned_params: unknown parameter key: " + key);
        }
        if (value == "min")
            *field = iv->lo;
        else if (value == "max")
            *field = iv->hi;
        else if (value == "nominal")
            *field = nominal;
        else if (value == "zero" && key == "backlash")
            *field = 0.0;
        else
            throw std::invalid_argument("pinned_params: unknown pin value '" + value + "' for key " + key);
    }
    return p;
}

}  // namespace crl

#ifndef EPNREC_FRAGILITY_HPP
#define EPNREC_FRAGILITY_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "epnrec/hazard.hpp"

namespace epnrec::fragility {

// Ordered damage states. DS1..DS4 all count as damaged and occupy one
// resource unit while under repair.
enum class DamageState : int {
    ds0_none = 0,
    ds1_minor = 1,
    ds2_moderate = 2,
    ds3_extensive = 3,
    ds4_complete = 4,
};

const char* to_string(DamageState ds);

// Lognormal fragility curves for one component class: exceedance
// probability of state ds at intensity pga is Phi(ln(pga/median)/beta).
struct FragilitySet {
    std::string component_class;
    std::array<double, 4> medians_g{};  // DS1..DS4, strictly increasing
    std::array<double, 4> betas{};      // all > 0

    void validate() const;
};

// Deterministic repair durations per damage state; DS0 maps to 0.
struct RestorationTable {
    std::string component_class;
    std::array<double, 4> days{};  // DS1..DS4, nondecreasing, >= 0

    void validate() const;

    double duration(DamageState ds) const {
        const int i = static_cast<int>(ds);
        return i == 0 ? 0.0 : days[static_cast<std::size_t>(i - 1)];
    }
};

// P(state >= ds | pga). Throws on pga <= 0 or ds == DS0.
double prob_exceed(DamageState ds, double pga_g, const FragilitySet& set);

// Occupancy probabilities over DS0..DS4 (successive differences of the
// exceedance curve). Throws ModelError if the curves cross at this pga.
std::array<double, 5> occupancy_probs(double pga_g, const FragilitySet& set);

// Most severe state whose exceedance probability still exceeds u.
DamageState sample_damage_state(double pga_g, const FragilitySet& set,
                                double u);

// Which fragility/restoration entry applies to a component, and whether
// the component can be damaged at all.
struct ComponentExposure {
    int class_index = -1;  // into the FragilitySet/RestorationTable spans
    bool damageable = true;
};

// One Monte Carlo damage realization.
struct DamageScenario {
    std::uint64_t scenario_id = 0;
    std::vector<DamageState> states;     // per component
    std::vector<double> duration_days;   // per component, 0 iff DS0
    hazard::IMField field;

    std::vector<int> damaged_ids() const;  // ascending component index
};

// Independent uniform draw per component, one lookup per class.
// Deterministic given (field, seed).
DamageScenario sample_scenario(const hazard::IMField& field,
                               std::span<const ComponentExposure> exposure,
                               std::span<const FragilitySet> sets,
                               std::span<const RestorationTable> tables,
                               std::uint64_t seed, std::uint64_t scenario_id);

}  // namespace epnrec::fragility

#endif

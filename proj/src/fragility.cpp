#include "epnrec/fragility.hpp"

#include <cmath>

#include "epnrec/errors.hpp"
#include "epnrec/rng.hpp"

namespace epnrec::fragility {

namespace {

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / 1.4142135623730950488016887242097);
}

}  // namespace

const char* to_string(DamageState ds) {
    switch (ds) {
        case DamageState::ds0_none: return "DS0";
        case DamageState::ds1_minor: return "DS1";
        case DamageState::ds2_moderate: return "DS2";
        case DamageState::ds3_extensive: return "DS3";
        case DamageState::ds4_complete: return "DS4";
    }
    return "?";
}

void FragilitySet::validate() const {
    for (std::size_t i = 0; i < 4; ++i) {
        if (!(medians_g[i] > 0.0))
            throw ModelError("fragility " + component_class +
                             ": medians must be > 0");
        if (!(betas[i] > 0.0))
            throw ModelError("fragility " + component_class +
                             ": betas must be > 0");
        if (i > 0 && !(medians_g[i] > medians_g[i - 1]))
            throw ModelError("fragility " + component_class +
                             ": medians must be strictly increasing");
    }
}

void RestorationTable::validate() const {
    for (std::size_t i = 0; i < 4; ++i) {
        if (days[i] < 0.0)
            throw ModelError("restoration " + component_class +
                             ": negative duration");
        if (i > 0 && days[i] < days[i - 1])
            throw ModelError("restoration " + component_class +
                             ": durations must be nondecreasing with severity");
    }
}

double prob_exceed(DamageState ds, double pga_g, const FragilitySet& set) {
    const int i = static_cast<int>(ds);
    if (i < 1 || i > 4)
        throw Error("prob_exceed: damage state must be DS1..DS4");
    if (!(pga_g > 0.0))
        throw Error("prob_exceed: pga must be > 0");
    const std::size_t k = static_cast<std::size_t>(i - 1);
    return std_normal_cdf(std::log(pga_g / set.medians_g[k]) / set.betas[k]);
}

std::array<double, 5> occupancy_probs(double pga_g, const FragilitySet& set) {
    std::array<double, 4> exceed{};
    for (int i = 0; i < 4; ++i)
        exceed[static_cast<std::size_t>(i)] =
            prob_exceed(static_cast<DamageState>(i + 1), pga_g, set);
    for (int i = 1; i < 4; ++i) {
        if (exceed[static_cast<std::size_t>(i)] >
            exceed[static_cast<std::size_t>(i - 1)])
            throw ModelError("fragility " + set.component_class +
                             ": curves cross at pga " + std::to_string(pga_g));
    }
    return {1.0 - exceed[0], exceed[0] - exceed[1], exceed[1] - exceed[2],
            exceed[2] - exceed[3], exceed[3]};
}

DamageState sample_damage_state(double pga_g, const FragilitySet& set,
                                double u) {
    if (!(u >= 0.0 && u < 1.0))
        throw Error("sample_damage_state: u outside [0, 1)");
    double prev = 1.0;
    DamageState result = DamageState::ds0_none;
    for (int i = 1; i <= 4; ++i) {
        const double pe = prob_exceed(static_cast<DamageState>(i), pga_g, set);
        if (pe > prev)
            throw ModelError("fragility " + set.component_class +
                             ": curves cross at pga " + std::to_string(pga_g));
        prev = pe;
        if (u < pe) result = static_cast<DamageState>(i);
    }
    return result;
}

std::vector<int> DamageScenario::damaged_ids() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] != DamageState::ds0_none && duration_days[i] > 0.0)
            out.push_back(static_cast<int>(i));
    return out;
}

DamageScenario sample_scenario(const hazard::IMField& field,
                               std::span<const ComponentExposure> exposure,
                               std::span<const FragilitySet> sets,
                               std::span<const RestorationTable> tables,
                               std::uint64_t seed, std::uint64_t scenario_id) {
    if (field.pga_g.size() != exposure.size())
        throw ModelError("sample_scenario: field size != component count");
    DamageScenario sc;
    sc.scenario_id = scenario_id;
    sc.field = hazard::IMField(field);
    sc.states.assign(exposure.size(), DamageState::ds0_none);
    sc.duration_days.assign(exposure.size(), 0.0);
    Rng rng(seed);
    for (std::size_t i = 0; i < exposure.size(); ++i) {
        const double u = rng.uniform01();  // one draw per component, always
        if (!exposure[i].damageable) continue;
        const int ci = exposure[i].class_index;
        if (ci < 0 || static_cast<std::size_t>(ci) >= sets.size())
            throw ConfigError("sample_scenario: component " +
                              std::to_string(i) + " has no fragility class");
        const auto ds = sample_damage_state(field.pga_g[i],
                                            sets[static_cast<std::size_t>(ci)], u);
        sc.states[i] = ds;
        sc.duration_days[i] =
            tables[static_cast<std::size_t>(ci)].duration(ds);
    }
    return sc;
}

}  // namespace epnrec::fragility

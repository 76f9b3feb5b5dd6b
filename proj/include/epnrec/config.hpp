#ifndef EPNREC_CONFIG_HPP
#define EPNREC_CONFIG_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "epnrec/community.hpp"
#include "epnrec/epn.hpp"
#include "epnrec/fragility.hpp"
#include "epnrec/hazard.hpp"
#include "epnrec/recovery.hpp"

namespace epnrec::config {

struct RecoveryParams {
    int resource_units = 1;
    double gamma = 0.8;
    recovery::BenefitMode benefit_mode = recovery::BenefitMode::combined;
    std::uint64_t action_budget = 50000;
    int rollout_samples = 30;
};

// The fully resolved scenario definition: community, network, hazard,
// fragility tables and recovery parameters, plus everything derived
// from them (assignment matrix, load binding, component sites).
// Immutable after load; safe to share across threads.
struct ScenarioModel {
    community::CommunityModel community;
    epn::PowerNetwork network;
    epn::LoadBinding binding;
    hazard::EventSpec event;
    hazard::AttenuationModel attenuation;
    std::vector<fragility::FragilitySet> fragility_sets;       // per class index
    std::vector<fragility::RestorationTable> restoration_tables;
    std::vector<fragility::ComponentExposure> exposure;        // per component
    std::vector<std::pair<double, double>> component_sites;
    std::vector<std::vector<double>> assignment;               // cells x retailers
    RecoveryParams params;

    recovery::ServiceContext service_context(recovery::BenefitMode mode) const;
    recovery::ServiceContext service_context() const {
        return service_context(params.benefit_mode);
    }

    // IM sampling + damage sampling with the documented per-scenario
    // seed split. scenario_seed is base_seed + scenario index.
    fragility::DamageScenario sample_scenario(std::uint64_t scenario_seed,
                                              std::uint64_t scenario_id) const;
};

// Parses and validates a JSON scenario config ("//" comments allowed).
// Throws ConfigError with the offending field named.
ScenarioModel load_model(const std::string& path);
ScenarioModel parse_model(const std::string& json_text,
                          const std::string& origin = "<string>");

}  // namespace epnrec::config

#endif

// Compares the serial reference paths against the OpenMP paths on the
// bundled config and checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include "epnrec/config.hpp"
#include "epnrec/harness.hpp"
#include "epnrec/policies.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

using namespace epnrec;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool same_results(const harness::ExperimentResults& a,
                  const harness::ExperimentResults& b) {
    if (a.policies.size() != b.policies.size()) return false;
    for (std::size_t p = 0; p < a.policies.size(); ++p) {
        if (a.policies[p].f1 != b.policies[p].f1) return false;
        if (a.policies[p].f2 != b.policies[p].f2) return false;
        if (a.policies[p].mean_curve != b.policies[p].mean_curve) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    std::string config_path = "configs/gilroy.json";
    int scenarios = 24;
    if (argc > 1) config_path = argv[1];
    if (argc > 2) scenarios = std::atoi(argv[2]);

#if defined(_OPENMP)
    std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both paths run serially\n");
#endif

    const auto model = config::load_model(config_path);

    // --- experiment: scenario-level parallelism -------------------------
    harness::ExperimentSpec spec;
    spec.scenario_count = scenarios;
    spec.base_seed = 20250810;
    spec.gamma = model.params.gamma;
    spec.mode = model.params.benefit_mode;
    harness::PolicyEntry random;
    random.spec = policies::PolicySpec::parse("random");
    harness::PolicyEntry rollout;
    rollout.spec = policies::PolicySpec::parse("rollout:base=random,Q=10");
    rollout.objective = policies::Objective::minimize_time_to_threshold;
    spec.policies = {random, rollout};

    spec.exec = harness::ExecMode::serial;
    auto t0 = Clock::now();
    const auto serial = harness::run_experiment(model, spec);
    const double t_serial = seconds_since(t0);

    spec.exec = harness::ExecMode::parallel;
    t0 = Clock::now();
    const auto parallel = harness::run_experiment(model, spec);
    const double t_parallel = seconds_since(t0);

    std::printf("\nexperiment (%d scenarios, random + rollout Q=10):\n",
                scenarios);
    std::printf("  serial    %.3f s\n", t_serial);
    std::printf("  parallel  %.3f s   speedup %.2fx   results %s\n",
                t_parallel, t_serial / t_parallel,
                same_results(serial, parallel) ? "identical" : "DIFFER");

    // --- one rollout decision: candidate-level parallelism --------------
    const auto ctx = model.service_context();
    const auto scenario = model.sample_scenario(4242, 0);
    const auto state = recovery::RecoveryState::initial(scenario);
    recovery::Trajectory prefix;
    prefix.initial_served = recovery::served(
        ctx, recovery::functional_state(model.network.components.size(),
                                        state.damaged));

    policies::RolloutParams params;
    params.base = policies::BaseKind::random;
    params.samples = 30;
    params.objective = policies::Objective::minimize_time_to_threshold;
    params.gamma = model.params.gamma;
    params.action_budget = model.params.action_budget;

    params.parallel_candidates = false;
    Rng rng_a(7);
    t0 = Clock::now();
    const auto choice_serial = policies::rollout_action(
        state, prefix, scenario, model.params.resource_units, ctx, params,
        rng_a);
    const double d_serial = seconds_since(t0);

    params.parallel_candidates = true;
    Rng rng_b(7);
    t0 = Clock::now();
    const auto choice_parallel = policies::rollout_action(
        state, prefix, scenario, model.params.resource_units, ctx, params,
        rng_b);
    const double d_parallel = seconds_since(t0);

    bool same = choice_serial.action.components ==
                choice_parallel.action.components;
    for (std::size_t i = 0; same && i < choice_serial.estimates.size(); ++i)
        same = choice_serial.estimates[i].value ==
               choice_parallel.estimates[i].value;

    std::printf("\nrollout decision (%zu damaged, %zu candidates, Q=30):\n",
                state.damaged.size(), choice_serial.estimates.size());
    std::printf("  serial    %.3f s\n", d_serial);
    std::printf("  parallel  %.3f s   speedup %.2fx   results %s\n",
                d_parallel, d_serial / d_parallel,
                same ? "identical" : "DIFFER");
    return same && same_results(serial, parallel) ? 0 : 1;
}

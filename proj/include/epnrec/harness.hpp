#ifndef EPNREC_HARNESS_HPP
#define EPNREC_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "epnrec/config.hpp"
#include "epnrec/policies.hpp"

namespace epnrec::harness {

enum class ExecMode { serial, parallel };

struct PolicyEntry {
    policies::PolicySpec spec;
    policies::Objective objective = policies::Objective::minimize_time_to_threshold;

    std::string label(std::size_t index) const;
};

struct ExperimentSpec {
    std::vector<PolicyEntry> policies;
    int scenario_count = 100;
    std::uint64_t base_seed = 1;
    double gamma = 0.8;
    recovery::BenefitMode mode = recovery::BenefitMode::combined;
    ExecMode exec = ExecMode::parallel;
};

// One scenario's service trace as completion events: (clock, served),
// starting with (0, initial_served).
struct StepCurve {
    std::vector<std::pair<double, double>> points;

    double value_at(double day) const;  // last-value interpolation
};

struct PolicyOutcome {
    std::string label;
    std::vector<double> f1;          // per scenario (objective-1 scalar)
    std::vector<double> f2;          // per scenario
    std::vector<StepCurve> curves;   // per scenario
    double mean_f1 = 0.0, std_f1 = 0.0;
    double mean_f2 = 0.0, std_f2 = 0.0;
    std::vector<double> cma_f1;      // cumulative moving average over scenarios
    std::vector<double> mean_curve;  // on the daily grid
    std::vector<double> std_curve;
};

struct ExperimentResults {
    std::vector<double> grid_days;   // 0..T_max, daily
    std::vector<PolicyOutcome> policies;
};

// out_i = (sum_{j<=i} v_j) / (i+1)
std::vector<double> cumulative_moving_average(const std::vector<double>& values);

// Paired Monte Carlo evaluation: scenario i (seeded base_seed + i) is
// identical for every policy; per-policy randomness uses derived
// substreams. Parallel execution stores per-scenario results by index
// and reduces in order, so outputs are independent of thread count.
ExperimentResults run_experiment(const config::ScenarioModel& model,
                                 const ExperimentSpec& spec);

// Writes curves.csv, summary.csv, cma.csv and manifest.json under
// `directory` (created if missing). Validates inputs before touching
// the filesystem.
void emit_outputs(const ExperimentResults& results, const ExperimentSpec& spec,
                  const std::string& config_origin,
                  const std::string& directory);

}  // namespace epnrec::harness

#endif

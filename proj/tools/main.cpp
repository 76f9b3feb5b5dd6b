// Command-line front end: scenario sampling, single-trajectory
// simulation, paired policy comparison, the exact-DP oracle and config
// validation. All numeric outputs are CSV; see README.md.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epnrec/config.hpp"
#include "epnrec/csv.hpp"
#include "epnrec/errors.hpp"
#include "epnrec/harness.hpp"
#include "epnrec/policies.hpp"

using namespace epnrec;

namespace {

std::string join_ids(const config::ScenarioModel& model,
                     const std::vector<int>& comps) {
    std::string out;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (i) out += ';';
        out += model.network.components[static_cast<std::size_t>(comps[i])].id;
    }
    return out;
}

int cmd_validate(const std::string& config_path) {
    const auto model = config::load_model(config_path);
    const auto ctx = model.service_context();
    const auto all =
        epn::FunctionalState::all_functional(model.network.components.size());
    const auto energized = epn::energized_nodes(model.network, all);
    std::size_t dark = 0;
    for (std::size_t c = 0; c < model.binding.cell_node.size(); ++c)
        if (!energized[static_cast<std::size_t>(model.binding.cell_node[c])])
            ++dark;
    for (std::size_t r = 0; r < model.binding.retailer_node.size(); ++r)
        if (!energized[static_cast<std::size_t>(model.binding.retailer_node[r])])
            ++dark;
    std::size_t damageable = 0;
    for (const auto& c : model.network.components)
        if (c.damageable) ++damageable;

    std::cout << "config OK: " << config_path << "\n"
              << "  cells: " << model.community.cells.size()
              << "  population: " << model.community.total_population()
              << "  retailers: " << model.community.retailers.size() << "\n"
              << "  nodes: " << model.network.node_ids.size()
              << "  edges: " << model.network.edges.size()
              << "  components: " << model.network.components.size() << " ("
              << damageable << " damageable)\n"
              << "  resource units: " << model.params.resource_units
              << "  gamma: " << model.params.gamma
              << "  benefit mode: " << to_string(model.params.benefit_mode)
              << "\n"
              << "  pre-event service: "
              << format_double(recovery::served(ctx, all)) << " persons\n";
    if (dark > 0) {
        std::cerr << "validate: " << dark
                  << " load points are dark even with every component "
                     "functional; the network is disconnected\n";
        return 1;
    }
    return 0;
}

int cmd_sample(const std::string& config_path, std::uint64_t seed,
               int scenarios, const std::string& out_dir) {
    const auto model = config::load_model(config_path);
    std::filesystem::create_directories(out_dir);
    CsvWriter scen(out_dir + "/scenarios.csv",
                   {"scenario_id", "component_id", "state", "duration_days"});
    CsvWriter pga(out_dir + "/pga.csv",
                  {"scenario_id", "component_id", "site_x", "site_y", "pga_g"});
    double damaged_total = 0.0;
    for (int i = 0; i < scenarios; ++i) {
        const auto sc = model.sample_scenario(
            seed + static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(i));
        damaged_total += static_cast<double>(sc.damaged_ids().size());
        for (std::size_t c = 0; c < model.network.components.size(); ++c) {
            const auto& comp = model.network.components[c];
            scen.write_row({std::to_string(i), comp.id,
                            fragility::to_string(sc.states[c]),
                            format_double(sc.duration_days[c])});
            pga.write_row({std::to_string(i), comp.id,
                           format_double(comp.site_x),
                           format_double(comp.site_y),
                           format_double(sc.field.pga_g[c])});
        }
    }
    std::cout << "wrote " << scenarios << " scenarios to " << out_dir
              << " (mean damaged components: "
              << format_double(damaged_total / scenarios) << ")\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed,
                 const std::string& policy_spec, int objective, double gamma,
                 const std::string& mode, const std::string& out_dir) {
    const auto model = config::load_model(config_path);
    const auto ctx =
        model.service_context(recovery::benefit_mode_from_string(mode));
    const auto scenario = model.sample_scenario(seed, 0);

    policies::PolicyFactoryArgs args;
    args.units = model.params.resource_units;
    args.objective = policies::objective_from_int(objective);
    args.gamma = gamma;
    args.action_budget = model.params.action_budget;
    args.parallel_candidates = true;  // single trajectory: use the cores here

    const auto spec = policies::PolicySpec::parse(policy_spec);
    auto policy = policies::make_policy(spec, scenario, ctx, args,
                                        derive_seed(seed, 0x9000));

    std::vector<std::vector<policies::CostToGoEstimate>> estimates;
    if (auto* rollout = dynamic_cast<policies::RolloutPolicy*>(policy.get()))
        rollout->estimate_log = &estimates;

    const auto traj =
        recovery::simulate_policy(scenario, *policy, args.units, ctx);

    std::cout << "scenario seed " << seed << ": "
              << scenario.damaged_ids().size() << " damaged components\n";
    const auto o1 = recovery::objective1(traj, gamma, ctx.total_population);
    std::cout << "F1 (days to gamma*p): "
              << (o1.reached ? format_double(o1.days)
                             : "unreached (final clock " +
                                   format_double(o1.days) + ")")
              << "\n";
    if (!traj.epochs.empty())
        std::cout << "F2 (time-averaged persons): "
                  << format_double(recovery::objective2(traj)) << "\n";
    std::cout << "makespan: " << format_double(traj.makespan())
              << " days over " << traj.epochs.size()
              << " epochs (t_end at epoch " << traj.t_end_epoch << ")\n";

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        CsvWriter w(out_dir + "/trajectory.csv",
                    {"epoch", "clock_days", "completed_component_ids",
                     "k_t_days", "h_t_persons"});
        w.write_row({"0", "0", "", "0", format_double(traj.initial_served)});
        for (std::size_t t = 0; t < traj.epochs.size(); ++t) {
            const auto& e = traj.epochs[t];
            w.write_row({std::to_string(t + 1), format_double(e.clock),
                         join_ids(model, e.completed), format_double(e.k),
                         format_double(e.served)});
        }
        if (!estimates.empty()) {
            CsvWriter est(out_dir + "/estimates.csv",
                          {"epoch", "candidate_action", "mean", "std"});
            for (std::size_t t = 0; t < estimates.size(); ++t)
                for (const auto& e : estimates[t])
                    est.write_row({std::to_string(t + 1),
                                   join_ids(model, e.action.components),
                                   format_double(e.value),
                                   format_double(e.sample_std)});
        }
        std::cout << "trajectory written to " << out_dir << "\n";
    }
    return 0;
}

int cmd_compare(const std::string& config_path, std::uint64_t seed,
                int scenarios, double gamma,
                const std::vector<std::string>& policy_specs, int objective,
                const std::string& mode, const std::string& out_dir,
                const std::string& exec) {
    const auto model = config::load_model(config_path);
    harness::ExperimentSpec spec;
    spec.scenario_count = scenarios;
    spec.base_seed = seed;
    spec.gamma = gamma;
    spec.mode = recovery::benefit_mode_from_string(mode);
    spec.exec = exec == "serial" ? harness::ExecMode::serial
                                 : harness::ExecMode::parallel;
    for (const auto& text : policy_specs) {
        harness::PolicyEntry entry;
        entry.spec = policies::PolicySpec::parse(text);
        entry.objective = policies::objective_from_int(objective);
        spec.policies.push_back(entry);
    }

    const auto results = harness::run_experiment(model, spec);
    std::cout << "policy, mean_F1, std_F1, mean_F2, std_F2\n";
    for (const auto& p : results.policies)
        std::cout << p.label << ", " << format_double(p.mean_f1) << ", "
                  << format_double(p.std_f1) << ", " << format_double(p.mean_f2)
                  << ", " << format_double(p.std_f2) << "\n";
    if (!out_dir.empty()) {
        harness::emit_outputs(results, spec, config_path, out_dir);
        std::cout << "outputs written to " << out_dir << "\n";
    }
    return 0;
}

int cmd_oracle(const std::string& config_path, std::uint64_t seed,
               int objective, double gamma, const std::string& mode,
               std::size_t state_budget) {
    const auto model = config::load_model(config_path);
    const auto ctx =
        model.service_context(recovery::benefit_mode_from_string(mode));
    const auto scenario = model.sample_scenario(seed, 0);
    const auto damaged = scenario.damaged_ids();
    std::cout << "scenario seed " << seed << ": " << damaged.size()
              << " damaged components, N = " << model.params.resource_units
              << "\n";
    const auto res = policies::exact_dp(
        scenario, model.params.resource_units, ctx,
        policies::objective_from_int(objective), gamma, state_budget,
        model.params.action_budget);
    std::cout << "optimal objective-" << objective
              << " value: " << format_double(res.value) << " ("
              << res.states_expanded << " states expanded)\n";
    for (std::size_t t = 0; t < res.actions.size(); ++t)
        std::cout << "  x_" << t + 1 << " = "
                  << join_ids(model, res.actions[t].components) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic repair scheduling for power network recovery"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 1;
    int scenarios = 100;
    double gamma = 0.8;
    std::string mode = "combined";
    std::string out_dir;
    int objective = 1;

    auto add_common = [&](CLI::App* cmd, bool with_out = true) {
        cmd->add_option("--config", config_path, "scenario config file")
            ->required();
        cmd->add_option("--seed", seed, "base RNG seed");
        cmd->add_option("--gamma", gamma, "objective-1 service fraction");
        cmd->add_option("--mode", mode, "benefit mode")
            ->check(CLI::IsMember({"households", "combined"}));
        cmd->add_option("--objective", objective, "objective (1 or 2)")
            ->check(CLI::IsMember({1, 2}));
        if (with_out) cmd->add_option("--out", out_dir, "output directory");
    };

    auto* validate = app.add_subcommand("validate", "check a config file");
    validate->add_option("--config", config_path, "scenario config file")
        ->required();

    auto* sample = app.add_subcommand("sample", "emit damage scenarios as CSV");
    add_common(sample);
    sample->add_option("--scenarios", scenarios, "number of scenarios");

    auto* simulate =
        app.add_subcommand("simulate", "run one policy on one scenario");
    add_common(simulate);
    std::string policy_one = "random";
    simulate->add_option("--policy", policy_one, "policy spec");

    auto* compare =
        app.add_subcommand("compare", "paired Monte Carlo policy comparison");
    add_common(compare);
    compare->add_option("--scenarios", scenarios, "number of scenarios");
    std::vector<std::string> policy_list;
    compare->add_option("--policy", policy_list, "policy spec (repeatable)")
        ->required();
    std::string exec = "parallel";
    compare->add_option("--exec", exec, "execution mode")
        ->check(CLI::IsMember({"serial", "parallel"}));

    auto* oracle =
        app.add_subcommand("oracle", "exact DP optimum on a small instance");
    add_common(oracle, false);
    std::size_t state_budget = 1u << 20;
    oracle->add_option("--budget", state_budget, "DP state budget");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(validate)) return cmd_validate(config_path);
        if (app.got_subcommand(sample))
            return cmd_sample(config_path, seed, scenarios, out_dir.empty()
                                                                ? "out"
                                                                : out_dir);
        if (app.got_subcommand(simulate))
            return cmd_simulate(config_path, seed, policy_one, objective,
                                gamma, mode, out_dir);
        if (app.got_subcommand(compare))
            return cmd_compare(config_path, seed, scenarios, gamma,
                               policy_list, objective, mode, out_dir, exec);
        if (app.got_subcommand(oracle))
            return cmd_oracle(config_path, seed, objective, gamma, mode,
                              state_budget);
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

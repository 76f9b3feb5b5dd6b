#ifndef EPNREC_TESTS_TOY_HPP
#define EPNREC_TESTS_TOY_HPP

// Hand-buildable instances and independent oracles shared by the unit
// and acceptance suites. Everything here stays deliberately naive: the
// oracles must not share logic with the library paths they check.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "epnrec/epn.hpp"
#include "epnrec/fragility.hpp"
#include "epnrec/recovery.hpp"
#include "epnrec/rng.hpp"

namespace toy {

using namespace epnrec;

// A self-contained instance: network + load binding + assignment matrix.
// ctx() hands out a ServiceContext pointing at the members, so keep the
// instance alive while the context is in use.
struct Instance {
    epn::PowerNetwork net;
    epn::LoadBinding binding;
    std::vector<std::vector<double>> assignment;
    double total_pop = 0.0;

    recovery::ServiceContext ctx(
        recovery::BenefitMode mode = recovery::BenefitMode::households) const {
        recovery::ServiceContext c;
        c.net = &net;
        c.binding = &binding;
        c.assignment = &assignment;
        c.mode = mode;
        c.total_population = total_pop;
        return c;
    }

    // Scenario from per-component durations; 0 means undamaged.
    fragility::DamageScenario scenario(
        const std::vector<double>& durations) const {
        fragility::DamageScenario sc;
        sc.states.assign(net.components.size(), fragility::DamageState::ds0_none);
        sc.duration_days.assign(net.components.size(), 0.0);
        for (std::size_t i = 0; i < durations.size(); ++i) {
            if (durations[i] > 0.0) {
                sc.states[i] = fragility::DamageState::ds2_moderate;
                sc.duration_days[i] = durations[i];
            }
        }
        return sc;
    }
};

// Star: an unguarded source with one leaf per entry of `pops`, leaf k
// guarded by component k ("comp00", "comp01", ...). One retailer sits on
// the source so combined-mode assignment mass is total when energized.
inline Instance make_star(const std::vector<std::int64_t>& pops) {
    Instance inst;
    auto& net = inst.net;
    net.node_ids.push_back("src");
    net.sources.push_back(0);
    for (std::size_t k = 0; k < pops.size(); ++k) {
        net.node_ids.push_back("leaf" + std::to_string(k));
        net.edges.emplace_back(0, static_cast<int>(k + 1));
        epn::Component c;
        char buf[8];
        std::snprintf(buf, sizeof(buf), "%02zu", k);
        c.id = std::string("comp") + buf;
        c.cls = epn::ComponentClass::distribution_node;
        c.guards_node = true;
        c.element = static_cast<int>(k + 1);
        net.components.push_back(std::move(c));
    }
    net.finalize();
    for (std::size_t k = 0; k < pops.size(); ++k) {
        inst.binding.cell_node.push_back(static_cast<int>(k + 1));
        inst.binding.cell_pop.push_back(pops[k]);
        inst.assignment.push_back({1.0});
        inst.total_pop += static_cast<double>(pops[k]);
    }
    inst.binding.retailer_node.push_back(0);
    return inst;
}

// Random tree: node 0 is the unguarded source, every other node hangs
// off a uniformly chosen earlier node and is guarded by one damageable
// component with a random population behind it.
inline Instance make_random_tree(Rng& rng, int n_components,
                                 std::int64_t max_pop = 5000) {
    Instance inst;
    auto& net = inst.net;
    net.node_ids.push_back("src");
    net.sources.push_back(0);
    for (int k = 0; k < n_components; ++k) {
        net.node_ids.push_back("n" + std::to_string(k));
        const int parent =
            static_cast<int>(rng.below(static_cast<std::uint64_t>(k + 1)));
        net.edges.emplace_back(parent, k + 1);
        epn::Component c;
        char buf[8];
        std::snprintf(buf, sizeof(buf), "%03d", k);
        c.id = std::string("comp") + buf;
        c.cls = epn::ComponentClass::distribution_node;
        c.guards_node = true;
        c.element = k + 1;
        net.components.push_back(std::move(c));
    }
    net.finalize();
    for (int k = 0; k < n_components; ++k) {
        const auto pop = static_cast<std::int64_t>(
            100 + rng.below(static_cast<std::uint64_t>(max_pop)));
        inst.binding.cell_node.push_back(k + 1);
        inst.binding.cell_pop.push_back(pop);
        inst.assignment.push_back({1.0});
        inst.total_pop += static_cast<double>(pop);
    }
    inst.binding.retailer_node.push_back(0);
    return inst;
}

// Random durations, integer-valued in [1, max_duration].
inline std::vector<double> random_durations(Rng& rng, std::size_t n,
                                            int max_duration = 8) {
    std::vector<double> d(n);
    for (auto& v : d)
        v = static_cast<double>(
            1 + rng.below(static_cast<std::uint64_t>(max_duration)));
    return d;
}

// ---------------------------------------------------------------------------
// independent oracles

// Exhaustive simple-path enumeration; true when some path from a source
// to `target` uses only functional elements. Exponential, fine for the
// tiny graphs it is used on.
inline bool reachable_by_path_enumeration(const epn::PowerNetwork& net,
                                          const epn::FunctionalState& fs,
                                          int target) {
    const auto ok = [&](int guard) {
        return guard < 0 || fs.functional[static_cast<std::size_t>(guard)];
    };
    std::vector<char> on_path(net.node_ids.size(), 0);
    std::vector<const std::vector<std::pair<int, int>>*> adj;
    for (std::size_t v = 0; v < net.node_ids.size(); ++v)
        adj.push_back(&net.adjacency()[v]);

    std::function<bool(int)> extend = [&](int u) -> bool {
        if (u == target) return true;
        on_path[static_cast<std::size_t>(u)] = 1;
        bool found = false;
        for (const auto& [v, e] : *adj[static_cast<std::size_t>(u)]) {
            if (on_path[static_cast<std::size_t>(v)]) continue;
            if (!ok(net.edge_guard[static_cast<std::size_t>(e)])) continue;
            if (!ok(net.node_guard[static_cast<std::size_t>(v)])) continue;
            if (extend(v)) {
                found = true;
                break;
            }
        }
        on_path[static_cast<std::size_t>(u)] = 0;
        return found;
    };
    for (int s : net.sources) {
        if (!ok(net.node_guard[static_cast<std::size_t>(s)])) continue;
        if (extend(s)) return true;
    }
    return false;
}

struct BruteForceResult {
    double value = 0.0;
    std::vector<recovery::RepairAction> actions;
};

// Exhaustive search over every epoch-wise action choice. Keeps the
// first (lexicographically earliest) string achieving the optimum.
inline BruteForceResult brute_force_best(
    const fragility::DamageScenario& scenario, int units,
    const recovery::ServiceContext& ctx, int objective, double gamma) {
    BruteForceResult best;
    const bool minimize = objective == 1;
    best.value = minimize ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
    const std::size_t n = scenario.states.size();

    recovery::Trajectory traj;
    traj.initial_served = recovery::served(
        ctx, recovery::functional_state(n, scenario.damaged_ids()));
    std::vector<recovery::RepairAction> chosen;

    std::function<void(const recovery::RecoveryState&)> explore =
        [&](const recovery::RecoveryState& state) {
            if (state.terminal()) {
                const double v =
                    objective == 1
                        ? recovery::objective1_scalar(traj, gamma,
                                                      ctx.total_population)
                        : recovery::objective2(traj);
                if (minimize ? v < best.value : v > best.value) {
                    best.value = v;
                    best.actions = chosen;
                }
                return;
            }
            for (const auto& action : recovery::enumerate_actions(
                     state.damaged, units, UINT64_MAX)) {
                auto res = recovery::advance(state, action, scenario, units);
                recovery::EpochRecord rec;
                rec.action = action;
                rec.k = res.k;
                rec.clock = res.next.clock;
                rec.served = recovery::served(
                    ctx, recovery::functional_state(n, res.next.damaged));
                rec.completed = res.completed;
                traj.epochs.push_back(std::move(rec));
                chosen.push_back(action);
                explore(res.next);
                chosen.pop_back();
                traj.epochs.pop_back();
            }
        };
    explore(recovery::RecoveryState::initial(scenario));
    return best;
}

// Objective value of a fixed action string, replayed through the
// simulator. Used to check that returned optimal strings actually
// achieve their reported value.
inline double replay_value(const fragility::DamageScenario& scenario,
                           const std::vector<recovery::RepairAction>& actions,
                           int units, const recovery::ServiceContext& ctx,
                           int objective, double gamma) {
    struct Scripted final : recovery::Policy {
        const std::vector<recovery::RepairAction>* actions;
        std::size_t next = 0;
        int units;
        recovery::RepairAction choose(const recovery::RecoveryState& state,
                                      const recovery::Trajectory&) override {
            if (next < actions->size()) return (*actions)[next++];
            const std::size_t m = std::min<std::size_t>(
                static_cast<std::size_t>(units), state.damaged.size());
            recovery::RepairAction a;
            a.components.assign(state.damaged.begin(),
                                state.damaged.begin() + static_cast<long>(m));
            return a;
        }
        bool deterministic() const override { return true; }
    } policy;
    policy.actions = &actions;
    policy.units = units;
    const auto traj = recovery::simulate_policy(scenario, policy, units, ctx);
    return objective == 1
               ? recovery::objective1_scalar(traj, gamma, ctx.total_population)
               : recovery::objective2(traj);
}

// Pascal-triangle binomial, independent of the library's closed form.
inline std::uint64_t binomial_pascal(unsigned n, unsigned k) {
    if (k > n) return 0;
    std::vector<std::vector<std::uint64_t>> c(n + 1);
    for (unsigned i = 0; i <= n; ++i) {
        c[i].assign(i + 2, 0);
        c[i][0] = 1;
        for (unsigned j = 1; j <= i; ++j)
            c[i][j] = c[i - 1][j - 1] + (j <= i - 1 ? c[i - 1][j] : 0);
    }
    return c[n][k];
}

}  // namespace toy

#endif

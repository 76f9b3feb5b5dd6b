#include "epnrec/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "epnrec/errors.hpp"

namespace epnrec::recovery {

const char* to_string(BenefitMode m) {
    return m == BenefitMode::households ? "households" : "combined";
}

BenefitMode benefit_mode_from_string(const std::string& s) {
    if (s == "households") return BenefitMode::households;
    if (s == "combined" || s == "households_and_retailers")
        return BenefitMode::combined;
    throw ConfigError("unknown benefit mode: " + s);
}

RecoveryState RecoveryState::initial(const fragility::DamageScenario& scenario) {
    RecoveryState s;
    s.damaged = scenario.damaged_ids();
    return s;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t num = n - k + i;
        if (result > UINT64_MAX / num) return UINT64_MAX;  // saturate
        result = result * num / i;  // exact: result holds C(n-k+i-1, i-1) * ...
    }
    return result;
}

std::vector<RepairAction> enumerate_actions(const std::vector<int>& damaged,
                                            int units, std::uint64_t budget) {
    if (damaged.empty())
        throw ContractError("enumerate_actions: empty damaged set");
    const std::size_t m =
        std::min<std::size_t>(static_cast<std::size_t>(units), damaged.size());
    const std::uint64_t count = binomial(damaged.size(), m);
    if (count > budget)
        throw BudgetError("enumerate_actions: C(" +
                          std::to_string(damaged.size()) + ", " +
                          std::to_string(m) + ") = " + std::to_string(count) +
                          " exceeds budget " + std::to_string(budget));
    std::vector<RepairAction> out;
    out.reserve(count);
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    while (true) {
        RepairAction a;
        a.components.reserve(m);
        for (std::size_t i : idx) a.components.push_back(damaged[i]);
        out.push_back(std::move(a));
        // next combination in lexicographic order
        std::size_t i = m;
        while (i > 0 && idx[i - 1] == damaged.size() - m + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

AdvanceResult advance(const RecoveryState& state, const RepairAction& action,
                      const fragility::DamageScenario& scenario, int units) {
    const std::size_t want =
        std::min<std::size_t>(static_cast<std::size_t>(units),
                              state.damaged.size());
    if (action.components.size() != want)
        throw ContractError("advance: action must assign min(N, |damaged|) = " +
                            std::to_string(want) + " components");
    for (std::size_t i = 0; i < action.components.size(); ++i) {
        const int c = action.components[i];
        if (i > 0 && c <= action.components[i - 1])
            throw ContractError("advance: action components must be strictly ascending");
        if (!std::binary_search(state.damaged.begin(), state.damaged.end(), c))
            throw ContractError("advance: action references component " +
                                std::to_string(c) +
                                " that is not currently damaged");
    }

    AdvanceResult res;
    res.next = state;

    // remaining work of each assigned component; untouched ones start at
    // their full scenario duration
    double k = std::numeric_limits<double>::infinity();
    std::vector<double> rem(action.components.size());
    for (std::size_t i = 0; i < action.components.size(); ++i) {
        const int c = action.components[i];
        const auto it = state.remaining.find(c);
        rem[i] = it != state.remaining.end()
                     ? it->second
                     : scenario.duration_days[static_cast<std::size_t>(c)];
        k = std::min(k, rem[i]);
    }
    res.k = k;
    res.next.clock += k;

    for (std::size_t i = 0; i < action.components.size(); ++i) {
        const int c = action.components[i];
        if (rem[i] == k) {
            res.completed.push_back(c);
            res.next.remaining.erase(c);
        } else {
            res.next.remaining[c] = rem[i] - k;
        }
    }
    for (int c : res.completed) {
        res.next.damaged.erase(std::lower_bound(res.next.damaged.begin(),
                                                res.next.damaged.end(), c));
        res.next.repaired.insert(std::lower_bound(res.next.repaired.begin(),
                                                  res.next.repaired.end(), c),
                                 c);
    }
    return res;
}

epn::FunctionalState functional_state(std::size_t n_components,
                                      const std::vector<int>& damaged) {
    auto fs = epn::FunctionalState::all_functional(n_components);
    for (int c : damaged) fs.functional[static_cast<std::size_t>(c)] = 0;
    return fs;
}

double served(const ServiceContext& ctx, const epn::FunctionalState& fs) {
    const auto energized = epn::energized_nodes(*ctx.net, fs);
    if (ctx.mode == BenefitMode::households)
        return epn::households_served(*ctx.binding, energized);
    double total = 0.0;
    const auto& binding = *ctx.binding;
    const auto& assignment = *ctx.assignment;
    for (std::size_t c = 0; c < binding.cell_node.size(); ++c) {
        if (!energized[static_cast<std::size_t>(binding.cell_node[c])]) continue;
        double mass = 0.0;
        for (std::size_t r = 0; r < binding.retailer_node.size(); ++r)
            if (energized[static_cast<std::size_t>(binding.retailer_node[r])])
                mass += assignment[c][r];
        total += static_cast<double>(binding.cell_pop[c]) * mass;
    }
    return total;
}

Objective1 objective1(const Trajectory& traj, double gamma, double p) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw Error("objective1: gamma must be in (0, 1]");
    const double threshold = gamma * p;
    if (traj.initial_served >= threshold) return {true, 0.0};
    for (const auto& e : traj.epochs)
        if (e.served >= threshold) return {true, e.clock};
    return {false, traj.makespan()};
}

double objective1_scalar(const Objective1& o1) {
    return o1.reached ? o1.days : std::numeric_limits<double>::infinity();
}

double objective2(const Trajectory& traj) {
    if (traj.epochs.empty())
        throw Error("objective2: undefined on a zero-makespan trajectory");
    double weighted = 0.0;
    for (const auto& e : traj.epochs) weighted += e.served * e.k;
    return weighted / traj.makespan();
}

Trajectory simulate_policy(const fragility::DamageScenario& scenario,
                           Policy& policy, int units,
                           const ServiceContext& ctx) {
    const std::size_t n = scenario.states.size();
    RecoveryState state = RecoveryState::initial(scenario);
    Trajectory traj;
    traj.initial_served = served(ctx, functional_state(n, state.damaged));
    traj.t_end_epoch = -1;
    if (state.damaged.size() <= static_cast<std::size_t>(units))
        traj.t_end_epoch = 0;

    const std::size_t max_epochs = state.damaged.size();
    while (!state.terminal()) {
        if (traj.epochs.size() >= max_epochs)
            throw Error("simulate_policy: epoch count exceeded damaged count");
        const RepairAction action = policy.choose(state, traj);
        auto res = advance(state, action, scenario, units);
        state = std::move(res.next);
        EpochRecord rec;
        rec.action = action;
        rec.k = res.k;
        rec.clock = state.clock;
        rec.served = served(ctx, functional_state(n, state.damaged));
        rec.completed = std::move(res.completed);
        traj.epochs.push_back(std::move(rec));
        if (traj.t_end_epoch < 0 &&
            state.damaged.size() <= static_cast<std::size_t>(units))
            traj.t_end_epoch = static_cast<int>(traj.epochs.size());
    }
    if (traj.t_end_epoch < 0) traj.t_end_epoch = 0;
    return traj;
}

}  // namespace epnrec::recovery

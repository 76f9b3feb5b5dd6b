#include "epnrec/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "epnrec/errors.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace epnrec::policies {

using recovery::RecoveryState;
using recovery::RepairAction;
using recovery::Trajectory;

recovery::RepairAction random_base_action(const RecoveryState& state,
                                          int units, Rng& rng) {
    if (state.terminal())
        throw ContractError("random_base_action: terminal state");
    const std::size_t m = std::min<std::size_t>(
        static_cast<std::size_t>(units), state.damaged.size());
    std::vector<int> pool = state.damaged;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    RepairAction a;
    a.components.assign(pool.begin(), pool.begin() + static_cast<long>(m));
    std::sort(a.components.begin(), a.components.end());
    return a;
}

recovery::RepairAction smart_base_action(const RecoveryState& state,
                                         int units,
                                         const recovery::ServiceContext& ctx) {
    if (state.terminal())
        throw ContractError("smart_base_action: terminal state");
    const std::size_t m = std::min<std::size_t>(
        static_cast<std::size_t>(units), state.damaged.size());
    const auto fs = recovery::functional_state(ctx.net->components.size(),
                                               state.damaged);
    const auto ranking =
        epn::component_importance(*ctx.net, *ctx.binding, state.damaged, fs);
    RepairAction a;
    a.components.reserve(m);
    for (std::size_t i = 0; i < m; ++i) a.components.push_back(ranking[i].first);
    std::sort(a.components.begin(), a.components.end());
    return a;
}

namespace {

// Appends base-heuristic epochs to `traj` until full restoration, then
// evaluates the requested objective on the whole trajectory.
double complete_and_score(Trajectory traj, RecoveryState state,
                          const fragility::DamageScenario& scenario, int units,
                          const recovery::ServiceContext& ctx,
                          const RolloutParams& params, Rng* base_rng) {
    const std::size_t n = scenario.states.size();
    while (!state.terminal()) {
        const RepairAction action =
            params.base == BaseKind::random
                ? random_base_action(state, units, *base_rng)
                : smart_base_action(state, units, ctx);
        auto res = recovery::advance(state, action, scenario, units);
        state = std::move(res.next);
        recovery::EpochRecord rec;
        rec.action = action;
        rec.k = res.k;
        rec.clock = state.clock;
        rec.served =
            recovery::served(ctx, recovery::functional_state(n, state.damaged));
        rec.completed = std::move(res.completed);
        traj.epochs.push_back(std::move(rec));
    }
    if (params.objective == Objective::minimize_time_to_threshold)
        return recovery::objective1_scalar(traj, params.gamma,
                                           ctx.total_population);
    return recovery::objective2(traj);
}

}  // namespace

RolloutChoice rollout_action(const RecoveryState& state,
                             const Trajectory& prefix,
                             const fragility::DamageScenario& scenario,
                             int units, const recovery::ServiceContext& ctx,
                             const RolloutParams& params, Rng& rng) {
    if (state.terminal())
        throw ContractError("rollout_action: terminal state");
    if (params.samples < 1) throw Error("rollout: Q must be >= 1");
    const auto candidates =
        recovery::enumerate_actions(state.damaged, units, params.action_budget);

    // deterministic bases have nothing to average over
    const int q = params.base == BaseKind::smart ? 1 : params.samples;

    // common random numbers: one suffix stream per sample, shared by
    // every candidate
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(q));
    for (auto& s : seeds) s = rng.next_u64();

    const std::size_t n = scenario.states.size();
    std::vector<CostToGoEstimate> estimates(candidates.size());

    const auto evaluate = [&](std::size_t i) {
        const auto& cand = candidates[i];
        auto res = recovery::advance(state, cand, scenario, units);
        Trajectory stem = prefix;
        recovery::EpochRecord rec;
        rec.action = cand;
        rec.k = res.k;
        rec.clock = res.next.clock;
        rec.served = recovery::served(
            ctx, recovery::functional_state(n, res.next.damaged));
        rec.completed = res.completed;
        stem.epochs.push_back(std::move(rec));

        double sum = 0.0, sumsq = 0.0;
        for (int s = 0; s < q; ++s) {
            Rng stream(seeds[static_cast<std::size_t>(s)]);
            const double v = complete_and_score(stem, res.next, scenario, units,
                                                ctx, params, &stream);
            sum += v;
            sumsq += v * v;
        }
        CostToGoEstimate e;
        e.action = cand;
        e.sample_count = q;
        e.value = sum / q;
        e.sample_std =
            q > 1 ? std::sqrt(std::max(0.0, (sumsq - sum * sum / q) / (q - 1)))
                  : 0.0;
        estimates[i] = std::move(e);
    };

#if defined(_OPENMP)
    if (params.parallel_candidates && candidates.size() > 1) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0;
             i < static_cast<std::int64_t>(candidates.size()); ++i)
            evaluate(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < candidates.size(); ++i) evaluate(i);
    }
#else
    for (std::size_t i = 0; i < candidates.size(); ++i) evaluate(i);
#endif

    // candidates are lexicographically ordered, so keeping the first
    // strict improvement breaks ties lexicographically
    const bool minimize =
        params.objective == Objective::minimize_time_to_threshold;
    std::size_t best = 0;
    for (std::size_t i = 1; i < estimates.size(); ++i) {
        const double v = estimates[i].value, b = estimates[best].value;
        if (minimize ? v < b : v > b) best = i;
    }
    return {candidates[best], std::move(estimates)};
}

recovery::RepairAction RolloutPolicy::choose(const RecoveryState& state,
                                             const Trajectory& prefix) {
    auto choice = rollout_action(state, prefix, *scenario_, units_, *ctx_,
                                 params_, rng_);
    if (estimate_log) estimate_log->push_back(std::move(choice.estimates));
    return choice.action;
}

// ---------------------------------------------------------------------------
// exact dynamic program

namespace {

// (damaged component, remaining work) pairs identify a state: the clock
// never changes what is optimal from here on. docs/dp_notes.md has the
// argument, including why objective 2 needs a Pareto front per state.
using StateKey = std::vector<std::pair<int, double>>;

StateKey encode(const RecoveryState& state,
                const fragility::DamageScenario& scenario) {
    StateKey key;
    key.reserve(state.damaged.size());
    for (int c : state.damaged) {
        const auto it = state.remaining.find(c);
        key.emplace_back(c, it != state.remaining.end()
                                ? it->second
                                : scenario.duration_days[static_cast<std::size_t>(c)]);
    }
    return key;
}

struct Dp1 {
    const fragility::DamageScenario& scenario;
    int units;
    const recovery::ServiceContext& ctx;
    double threshold;
    std::size_t state_budget;
    std::uint64_t action_budget;
    std::map<StateKey, std::pair<double, RepairAction>> memo;

    double current_served(const RecoveryState& s) const {
        return recovery::served(
            ctx, recovery::functional_state(scenario.states.size(), s.damaged));
    }

    double solve(const RecoveryState& state) {
        if (current_served(state) >= threshold) return 0.0;
        if (state.terminal()) return std::numeric_limits<double>::infinity();
        const StateKey key = encode(state, scenario);
        if (const auto it = memo.find(key); it != memo.end())
            return it->second.first;
        if (memo.size() >= state_budget)
            throw BudgetError("exact_dp: state budget exceeded");
        double best = std::numeric_limits<double>::infinity();
        RepairAction best_action;
        for (const auto& action : recovery::enumerate_actions(
                 state.damaged, units, action_budget)) {
            auto res = recovery::advance(state, action, scenario, units);
            const double v = res.k + solve(res.next);
            if (v < best || best_action.components.empty()) {
                best = v;
                best_action = action;
            }
        }
        memo.emplace(std::move(key), std::make_pair(best, best_action));
        return best;
    }

    std::vector<RepairAction> reconstruct(RecoveryState state) const {
        std::vector<RepairAction> actions;
        while (current_served(state) < threshold && !state.terminal()) {
            const auto it = memo.find(encode(state, scenario));
            if (it == memo.end()) break;  // unreached branch
            actions.push_back(it->second.second);
            state = recovery::advance(state, it->second.second, scenario, units)
                        .next;
        }
        return actions;
    }
};

// Pareto point of an objective-2 continuation: `area` is the served
// persons-days accumulated by future epochs, `time` the future elapsed
// days. Larger area and smaller time dominate.
struct ParetoPoint {
    double area = 0.0;
    double time = 0.0;
    int action_index = -1;  // into the state's candidate list
    int child_point = -1;   // index into the child state's front
};

struct Dp2 {
    const fragility::DamageScenario& scenario;
    int units;
    const recovery::ServiceContext& ctx;
    std::size_t state_budget;
    std::uint64_t action_budget;
    std::map<StateKey, std::vector<ParetoPoint>> memo;

    const std::vector<ParetoPoint>& front(const RecoveryState& state) {
        static const std::vector<ParetoPoint> terminal{{0.0, 0.0, -1, -1}};
        if (state.terminal()) return terminal;
        const StateKey key = encode(state, scenario);
        if (const auto it = memo.find(key); it != memo.end())
            return it->second;
        if (memo.size() >= state_budget)
            throw BudgetError("exact_dp: state budget exceeded");

        const std::size_t n = scenario.states.size();
        std::vector<ParetoPoint> points;
        const auto candidates = recovery::enumerate_actions(
            state.damaged, units, action_budget);
        for (std::size_t a = 0; a < candidates.size(); ++a) {
            auto res = recovery::advance(state, candidates[a], scenario, units);
            const double h = recovery::served(
                ctx, recovery::functional_state(n, res.next.damaged));
            const auto& child = front(res.next);
            for (std::size_t p = 0; p < child.size(); ++p) {
                points.push_back({h * res.k + child[p].area,
                                  res.k + child[p].time, static_cast<int>(a),
                                  static_cast<int>(p)});
            }
        }
        // Pareto prune: sort by time asc, area desc, earliest action; a
        // point survives only if its area strictly beats everything faster.
        std::sort(points.begin(), points.end(),
                  [](const ParetoPoint& x, const ParetoPoint& y) {
                      if (x.time != y.time) return x.time < y.time;
                      if (x.area != y.area) return x.area > y.area;
                      return x.action_index < y.action_index;
                  });
        std::vector<ParetoPoint> kept;
        double best_area = -1.0;
        for (const auto& pt : points) {
            if (pt.area > best_area) {
                kept.push_back(pt);
                best_area = pt.area;
            }
        }
        return memo.emplace(std::move(key), std::move(kept)).first->second;
    }

    std::vector<RepairAction> reconstruct(RecoveryState state,
                                          int point_index) {
        std::vector<RepairAction> actions;
        while (!state.terminal()) {
            const auto& f = front(state);
            const ParetoPoint pt = f[static_cast<std::size_t>(point_index)];
            const auto candidates = recovery::enumerate_actions(
                state.damaged, units, action_budget);
            const auto& action =
                candidates[static_cast<std::size_t>(pt.action_index)];
            actions.push_back(action);
            state = recovery::advance(state, action, scenario, units).next;
            point_index = pt.child_point;
        }
        return actions;
    }
};

}  // namespace

DpResult exact_dp(const fragility::DamageScenario& scenario, int units,
                  const recovery::ServiceContext& ctx, Objective objective,
                  double gamma, std::size_t state_budget,
                  std::uint64_t action_budget) {
    const auto initial = RecoveryState::initial(scenario);
    DpResult out;
    if (objective == Objective::minimize_time_to_threshold) {
        if (!(gamma > 0.0 && gamma <= 1.0))
            throw Error("exact_dp: gamma must be in (0, 1]");
        Dp1 dp{scenario, units, ctx, gamma * ctx.total_population,
               state_budget, action_budget, {}};
        out.value = dp.solve(initial);
        out.actions = dp.reconstruct(initial);
        out.states_expanded = dp.memo.size();
        return out;
    }
    Dp2 dp{scenario, units, ctx, state_budget, action_budget, {}};
    if (initial.terminal())
        throw Error("exact_dp: objective 2 undefined without damage");
    const auto& f = dp.front(initial);
    std::size_t best = 0;
    double best_ratio = -1.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double ratio = f[i].area / f[i].time;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = i;
        }
    }
    out.value = best_ratio;
    out.actions = dp.reconstruct(initial, static_cast<int>(best));
    out.states_expanded = dp.memo.size();
    return out;
}

ExactDpPolicy::ExactDpPolicy(const fragility::DamageScenario& scenario,
                             int units, const recovery::ServiceContext& ctx,
                             Objective objective, double gamma,
                             std::size_t state_budget)
    : units_(units) {
    result_ = exact_dp(scenario, units, ctx, objective, gamma, state_budget);
}

recovery::RepairAction ExactDpPolicy::choose(const RecoveryState& state,
                                             const Trajectory&) {
    if (next_ < result_.actions.size()) return result_.actions[next_++];
    // string exhausted (objective-1 strings stop at the threshold):
    // finish with lexicographic-first assignments
    const std::size_t m = std::min<std::size_t>(
        static_cast<std::size_t>(units_), state.damaged.size());
    RepairAction a;
    a.components.assign(state.damaged.begin(),
                        state.damaged.begin() + static_cast<long>(m));
    return a;
}

// ---------------------------------------------------------------------------
// policy specs

PolicySpec PolicySpec::parse(const std::string& s) {
    PolicySpec spec{};
    if (s == "random") {
        spec.kind = Kind::random_base;
        spec.text = "random";
        return spec;
    }
    if (s == "smart") {
        spec.kind = Kind::smart_base;
        spec.text = "smart";
        return spec;
    }
    if (s == "exact") {
        spec.kind = Kind::exact_dp;
        spec.text = "exact";
        return spec;
    }
    if (s.rfind("rollout", 0) == 0) {
        spec.kind = Kind::rollout;
        std::string opts = s.size() > 7 && s[7] == ':' ? s.substr(8) : "";
        std::size_t pos = 0;
        while (pos < opts.size()) {
            const std::size_t end = std::min(opts.find(',', pos), opts.size());
            const std::string kv = opts.substr(pos, end - pos);
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("policy spec: expected key=value in '" + s + "'");
            const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
            if (key == "base") {
                if (val == "random") spec.rollout_base = BaseKind::random;
                else if (val == "smart") spec.rollout_base = BaseKind::smart;
                else throw ConfigError("policy spec: unknown base '" + val + "'");
            } else if (key == "Q" || key == "q") {
                spec.rollout_samples = std::stoi(val);
                if (spec.rollout_samples < 1)
                    throw ConfigError("policy spec: Q must be >= 1");
            } else {
                throw ConfigError("policy spec: unknown option '" + key + "'");
            }
            pos = end == opts.size() ? end : end + 1;
        }
        spec.text = spec.rollout_base == BaseKind::smart
                        ? "rollout:base=smart"
                        : "rollout:base=random,Q=" +
                              std::to_string(spec.rollout_samples);
        return spec;
    }
    throw ConfigError("unknown policy spec: " + s);
}

std::unique_ptr<recovery::Policy> make_policy(
    const PolicySpec& spec, const fragility::DamageScenario& scenario,
    const recovery::ServiceContext& ctx, const PolicyFactoryArgs& args,
    std::uint64_t seed) {
    switch (spec.kind) {
        case PolicySpec::Kind::random_base:
            return std::make_unique<RandomBasePolicy>(args.units, seed);
        case PolicySpec::Kind::smart_base:
            return std::make_unique<SmartBasePolicy>(args.units, ctx);
        case PolicySpec::Kind::rollout: {
            RolloutParams params;
            params.base = spec.rollout_base;
            params.objective = args.objective;
            params.samples = spec.rollout_samples;
            params.action_budget = args.action_budget;
            params.parallel_candidates = args.parallel_candidates;
            params.gamma = args.gamma;
            return std::make_unique<RolloutPolicy>(scenario, args.units, ctx,
                                                   params, seed);
        }
        case PolicySpec::Kind::exact_dp:
            return std::make_unique<ExactDpPolicy>(scenario, args.units, ctx,
                                                   args.objective, args.gamma,
                                                   args.dp_state_budget);
    }
    throw Error("make_policy: unreachable");
}

}  // namespace epnrec::policies

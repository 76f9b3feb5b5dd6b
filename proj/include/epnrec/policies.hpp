#ifndef EPNREC_POLICIES_HPP
#define EPNREC_POLICIES_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epnrec/errors.hpp"
#include "epnrec/recovery.hpp"
#include "epnrec/rng.hpp"

namespace epnrec::policies {

enum class Objective { minimize_time_to_threshold = 1, maximize_avg_service = 2 };

inline Objective objective_from_int(int v) {
    if (v != 1 && v != 2) throw Error("objective must be 1 or 2");
    return static_cast<Objective>(v);
}

// Uniform draw over all size-min(N,|D_t|) subsets of the damaged set.
recovery::RepairAction random_base_action(const recovery::RecoveryState& state,
                                          int units, Rng& rng);

// Top-scoring components by myopic unblock importance at the current
// functional state; ties by ascending component index.
recovery::RepairAction smart_base_action(const recovery::RecoveryState& state,
                                         int units,
                                         const recovery::ServiceContext& ctx);

class RandomBasePolicy final : public recovery::Policy {
  public:
    explicit RandomBasePolicy(int units, std::uint64_t seed)
        : units_(units), rng_(seed) {}
    recovery::RepairAction choose(const recovery::RecoveryState& state,
                                  const recovery::Trajectory&) override {
        return random_base_action(state, units_, rng_);
    }
    bool deterministic() const override { return false; }

  private:
    int units_;
    Rng rng_;
};

class SmartBasePolicy final : public recovery::Policy {
  public:
    SmartBasePolicy(int units, const recovery::ServiceContext& ctx)
        : units_(units), ctx_(&ctx) {}
    recovery::RepairAction choose(const recovery::RecoveryState& state,
                                  const recovery::Trajectory&) override {
        return smart_base_action(state, units_, *ctx_);
    }
    bool deterministic() const override { return true; }

  private:
    int units_;
    const recovery::ServiceContext* ctx_;
};

enum class BaseKind { random, smart };

struct CostToGoEstimate {
    recovery::RepairAction action;
    double value = 0.0;       // mean over samples; days (obj 1) or persons (obj 2)
    int sample_count = 0;
    double sample_std = 0.0;
};

struct RolloutParams {
    BaseKind base = BaseKind::random;
    Objective objective = Objective::minimize_time_to_threshold;
    int samples = 30;               // Q; forced to 1 for a deterministic base
    std::uint64_t action_budget = 50000;
    bool parallel_candidates = false;
    double gamma = 0.8;             // objective-1 threshold fraction
};

struct RolloutChoice {
    recovery::RepairAction action;
    std::vector<CostToGoEstimate> estimates;  // candidate order
};

// One rollout decision: score every candidate action by completing the
// trajectory with the base heuristic (common random numbers across
// candidates), average the full-trajectory objective, pick the best.
// `prefix` is the trajectory already executed; its epochs count toward
// the objective of every evaluated completion.
RolloutChoice rollout_action(const recovery::RecoveryState& state,
                             const recovery::Trajectory& prefix,
                             const fragility::DamageScenario& scenario,
                             int units, const recovery::ServiceContext& ctx,
                             const RolloutParams& params, Rng& rng);

class RolloutPolicy final : public recovery::Policy {
  public:
    RolloutPolicy(const fragility::DamageScenario& scenario, int units,
                  const recovery::ServiceContext& ctx, RolloutParams params,
                  std::uint64_t seed)
        : scenario_(&scenario),
          units_(units),
          ctx_(&ctx),
          params_(params),
          rng_(seed) {}

    recovery::RepairAction choose(const recovery::RecoveryState& state,
                                  const recovery::Trajectory& prefix) override;

    bool deterministic() const override {
        return params_.base == BaseKind::smart;
    }

    // When set, every decision appends its candidate estimates here.
    std::vector<std::vector<CostToGoEstimate>>* estimate_log = nullptr;

  private:
    const fragility::DamageScenario* scenario_;
    int units_;
    const recovery::ServiceContext* ctx_;
    RolloutParams params_;
    Rng rng_;
};

struct DpResult {
    double value = 0.0;  // objective-1 scalar (days) or objective-2 (persons)
    std::vector<recovery::RepairAction> actions;
    std::size_t states_expanded = 0;
};

// Exact optimum over all action strings by memoized recursion on
// (damaged set, remaining-work profile); see docs/dp_notes.md for why
// that state is sufficient. Throws BudgetError when the memo would
// exceed `state_budget`. Practical only for small damaged sets.
DpResult exact_dp(const fragility::DamageScenario& scenario, int units,
                  const recovery::ServiceContext& ctx, Objective objective,
                  double gamma, std::size_t state_budget = 1u << 20,
                  std::uint64_t action_budget = 50000);

// Plays the precomputed optimal string, then lexicographic-first
// actions if the string ends before full restoration (objective 1
// strings stop at the service threshold).
class ExactDpPolicy final : public recovery::Policy {
  public:
    ExactDpPolicy(const fragility::DamageScenario& scenario, int units,
                  const recovery::ServiceContext& ctx, Objective objective,
                  double gamma, std::size_t state_budget = 1u << 20);
    recovery::RepairAction choose(const recovery::RecoveryState& state,
                                  const recovery::Trajectory& prefix) override;
    bool deterministic() const override { return true; }
    const DpResult& result() const { return result_; }

  private:
    DpResult result_;
    std::size_t next_ = 0;
    int units_;
};

// Parsed form of a CLI policy argument:
//   random | smart | exact | rollout:base=random,Q=30 | rollout:base=smart
struct PolicySpec {
    enum class Kind { random_base, smart_base, rollout, exact_dp } kind;
    BaseKind rollout_base = BaseKind::random;
    int rollout_samples = 30;
    std::string text;  // canonical spelling, used as the output label

    static PolicySpec parse(const std::string& s);
};

struct PolicyFactoryArgs {
    int units = 1;
    Objective objective = Objective::minimize_time_to_threshold;
    double gamma = 0.8;
    std::uint64_t action_budget = 50000;
    std::size_t dp_state_budget = 1u << 20;
    bool parallel_candidates = false;
};

std::unique_ptr<recovery::Policy> make_policy(
    const PolicySpec& spec, const fragility::DamageScenario& scenario,
    const recovery::ServiceContext& ctx, const PolicyFactoryArgs& args,
    std::uint64_t seed);

}  // namespace epnrec::policies

#endif

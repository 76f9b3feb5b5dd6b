#ifndef EPNREC_RECOVERY_HPP
#define EPNREC_RECOVERY_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <vector>

#include "epnrec/community.hpp"
#include "epnrec/epn.hpp"
#include "epnrec/fragility.hpp"

namespace epnrec::recovery {

enum class BenefitMode { households, combined };

const char* to_string(BenefitMode m);
BenefitMode benefit_mode_from_string(const std::string& s);

// Everything needed to turn a functional state into persons served.
// Built once per model, shared read-only across workers.
struct ServiceContext {
    const epn::PowerNetwork* net = nullptr;
    const epn::LoadBinding* binding = nullptr;
    const std::vector<std::vector<double>>* assignment = nullptr;  // cells x retailers
    BenefitMode mode = BenefitMode::households;
    double total_population = 0.0;
};

// State between decision epochs. `remaining` holds only components that
// have been started and not finished; progress on a component dropped
// from the active assignment is frozen, never lost.
struct RecoveryState {
    double clock = 0.0;
    std::vector<int> damaged;            // ascending component index
    std::map<int, double> remaining;     // started-but-unfinished work
    std::vector<int> repaired;           // ascending

    bool terminal() const { return damaged.empty(); }
    static RecoveryState initial(const fragility::DamageScenario& scenario);
};

struct RepairAction {
    std::vector<int> components;  // ascending; size == min(N, |damaged|)

    bool operator==(const RepairAction&) const = default;
    bool operator<(const RepairAction& o) const {
        return components < o.components;
    }
};

struct EpochRecord {
    RepairAction action;
    double k = 0.0;      // elapsed since previous completion
    double clock = 0.0;  // cumulative
    double served = 0.0; // persons, evaluated after this epoch's completions
    std::vector<int> completed;
};

struct Trajectory {
    double initial_served = 0.0;  // clock-0 service from undamaged parts
    std::vector<EpochRecord> epochs;
    // First epoch t (1-based) after which at most N components remained
    // damaged; 0 when that held before any action. Decisions past this
    // point are forced.
    int t_end_epoch = 0;

    double makespan() const {
        return epochs.empty() ? 0.0 : epochs.back().clock;
    }
};

// All subsets of `damaged` of size min(units, |damaged|), ascending
// lexicographic order. Throws BudgetError when C(|damaged|, size)
// exceeds `budget`.
std::vector<RepairAction> enumerate_actions(const std::vector<int>& damaged,
                                            int units, std::uint64_t budget);

// Exact binomial coefficient, saturating at uint64 max.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

struct AdvanceResult {
    RecoveryState next;
    double k = 0.0;
    std::vector<int> completed;
};

// Work the assigned components until the first completion(s): elapsed
// time is the minimum remaining duration among them; every assigned
// component reaching zero completes in this epoch. Unassigned partial
// work is frozen. Throws ContractError on an invalid action.
AdvanceResult advance(const RecoveryState& state, const RepairAction& action,
                      const fragility::DamageScenario& scenario, int units);

// Functional flags implied by the set of still-damaged components.
epn::FunctionalState functional_state(std::size_t n_components,
                                      const std::vector<int>& damaged);

// Persons served by the energized part of the network.
//  households: sum of populations of energized cells.
//  combined:   each energized cell counts only the gravity-assignment
//              mass that lands on energized retailers.
double served(const ServiceContext& ctx, const epn::FunctionalState& fs);

struct Objective1 {
    bool reached = false;
    double days = 0.0;  // threshold-crossing clock, or final clock if unreached
};

// Smallest clock at which served >= gamma * p, counting the clock-0
// pre-repair service. Throws on gamma outside (0, 1].
Objective1 objective1(const Trajectory& traj, double gamma, double p);

// Total order for minimization: unreached compares above any reached value.
double objective1_scalar(const Objective1& o1);
inline double objective1_scalar(const Trajectory& t, double gamma, double p) {
    return objective1_scalar(objective1(t, gamma, p));
}

// Time-averaged served population: sum_t h_t k_t / makespan, where k_t
// are inter-completion gaps and the gaps sum to the makespan. Throws on
// an empty trajectory (zero makespan).
double objective2(const Trajectory& traj);

// Decision policy: a total function from nonterminal states (plus the
// trajectory executed so far) to a valid action.
class Policy {
  public:
    virtual ~Policy() = default;
    virtual RepairAction choose(const RecoveryState& state,
                                const Trajectory& prefix) = 0;
    virtual bool deterministic() const = 0;
};

// Runs `policy` to full restoration, recording one epoch per completion
// event. At most |damaged| epochs since every epoch completes at least
// one component.
Trajectory simulate_policy(const fragility::DamageScenario& scenario,
                           Policy& policy, int units,
                           const ServiceContext& ctx);

}  // namespace epnrec::recovery

#endif

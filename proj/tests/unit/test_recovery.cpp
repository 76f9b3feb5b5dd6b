#include <doctest.h>

#include <cmath>
#include <numeric>

#include "epnrec/errors.hpp"
#include "epnrec/policies.hpp"
#include "epnrec/recovery.hpp"
#include "support/toy.hpp"

using namespace epnrec;
using recovery::RepairAction;

namespace {

// deterministic policy that walks a fixed preference order
struct FixedOrderPolicy final : recovery::Policy {
    std::vector<int> order;
    int units;
    RepairAction choose(const recovery::RecoveryState& state,
                        const recovery::Trajectory&) override {
        RepairAction a;
        for (int c : order) {
            if (a.components.size() ==
                std::min<std::size_t>(static_cast<std::size_t>(units),
                                      state.damaged.size()))
                break;
            if (std::binary_search(state.damaged.begin(), state.damaged.end(),
                                   c))
                a.components.push_back(c);
        }
        std::sort(a.components.begin(), a.components.end());
        return a;
    }
    bool deterministic() const override { return true; }
};

}  // namespace

TEST_CASE("action enumeration is lexicographic and clamped") {
    const std::vector<int> d{2, 5, 9};
    const auto actions = recovery::enumerate_actions(d, 2, 1000);
    REQUIRE(actions.size() == 3);
    CHECK(actions[0].components == std::vector<int>{2, 5});
    CHECK(actions[1].components == std::vector<int>{2, 9});
    CHECK(actions[2].components == std::vector<int>{5, 9});

    const auto clamped = recovery::enumerate_actions({3, 4}, 5, 1000);
    REQUIRE(clamped.size() == 1);
    CHECK(clamped[0].components == std::vector<int>{3, 4});
}

TEST_CASE("enumeration respects the combinatorial budget") {
    std::vector<int> d(20);
    std::iota(d.begin(), d.end(), 0);
    CHECK(recovery::binomial(20, 5) == 15504);
    CHECK(recovery::binomial(20, 5) == toy::binomial_pascal(20, 5));
    CHECK_THROWS_AS(recovery::enumerate_actions(d, 5, 10000), BudgetError);
    CHECK(recovery::enumerate_actions(d, 2, 200).size() == 190);
    for (unsigned n = 1; n <= 24; ++n)
        for (unsigned k = 0; k <= n; ++k)
            CHECK(recovery::binomial(n, k) == toy::binomial_pascal(n, k));
}

TEST_CASE("advance works the assigned set until the first completion") {
    auto inst = toy::make_star({10, 20});
    const auto scenario = inst.scenario({3, 5});
    auto state = recovery::RecoveryState::initial(scenario);

    auto res = recovery::advance(state, RepairAction{{0, 1}}, scenario, 2);
    CHECK(res.k == 3.0);
    CHECK(res.completed == std::vector<int>{0});
    CHECK(res.next.clock == 3.0);
    CHECK(res.next.damaged == std::vector<int>{1});
    CHECK(res.next.repaired == std::vector<int>{0});
    REQUIRE(res.next.remaining.count(1) == 1);
    CHECK(res.next.remaining.at(1) == 2.0);

    auto res2 = recovery::advance(res.next, RepairAction{{1}}, scenario, 2);
    CHECK(res2.k == 2.0);
    CHECK(res2.next.terminal());
    CHECK(res2.next.clock == 5.0);
}

TEST_CASE("equal durations complete simultaneously in one epoch") {
    auto inst = toy::make_star({10, 20});
    const auto scenario = inst.scenario({4, 4});
    auto state = recovery::RecoveryState::initial(scenario);
    auto res = recovery::advance(state, RepairAction{{0, 1}}, scenario, 2);
    CHECK(res.k == 4.0);
    CHECK(res.completed == std::vector<int>{0, 1});
    CHECK(res.next.terminal());
}

TEST_CASE("a single component completes in one epoch of its duration") {
    auto inst = toy::make_star({10});
    const auto scenario = inst.scenario({7});
    auto state = recovery::RecoveryState::initial(scenario);
    auto res = recovery::advance(state, RepairAction{{0}}, scenario, 3);
    CHECK(res.k == 7.0);
    CHECK(res.next.terminal());
}

TEST_CASE("progress on a dropped component is frozen, not lost") {
    auto inst = toy::make_star({1, 1, 1});
    const auto scenario = inst.scenario({2, 6, 3});
    auto state = recovery::RecoveryState::initial(scenario);
    // work {0, 1}: 0 completes at 2, 1 retains 4
    auto res = recovery::advance(state, RepairAction{{0, 1}}, scenario, 2);
    CHECK(res.next.remaining.at(1) == 4.0);
    // drop 1, work {2}: wait, N=2 forces two assignments; |D|={1,2} -> both
    // use N=1 to force the drop
    auto res2 = recovery::advance(res.next, RepairAction{{2}}, scenario, 1);
    CHECK(res2.k == 3.0);
    CHECK(res2.next.remaining.at(1) == 4.0);  // untouched while dropped
    auto res3 = recovery::advance(res2.next, RepairAction{{1}}, scenario, 1);
    CHECK(res3.k == 4.0);
    CHECK(res3.next.terminal());
    CHECK(res3.next.clock == 9.0);
}

TEST_CASE("advance rejects contract violations") {
    auto inst = toy::make_star({1, 1});
    const auto scenario = inst.scenario({2, 3});
    auto state = recovery::RecoveryState::initial(scenario);
    CHECK_THROWS_AS(
        recovery::advance(state, RepairAction{{0}}, scenario, 2),
        ContractError);  // must assign min(N, |D|) = 2
    CHECK_THROWS_AS(
        recovery::advance(state, RepairAction{{0, 7}}, scenario, 2),
        ContractError);  // unknown component
    auto res = recovery::advance(state, RepairAction{{0, 1}}, scenario, 2);
    CHECK_THROWS_AS(
        recovery::advance(res.next, RepairAction{{0}}, scenario, 1),
        ContractError);  // 0 already repaired
}

TEST_CASE("benefit counts full service in both modes") {
    auto inst = toy::make_star({600, 400});
    const auto fs = epn::FunctionalState::all_functional(2);
    CHECK(recovery::served(inst.ctx(recovery::BenefitMode::households), fs) ==
          1000.0);
    CHECK(recovery::served(inst.ctx(recovery::BenefitMode::combined), fs) ==
          1000.0);
}

TEST_CASE("combined mode discounts cells whose retailers are dark") {
    // two retailers with gravity split (0.7310585786, 0.2689414214);
    // only retailer 0 energized: a 1000-person cell counts 731.06
    toy::Instance inst;
    auto& net = inst.net;
    net.node_ids = {"src", "cellnode", "ret1node"};
    net.sources = {0};
    net.edges.emplace_back(0, 1);
    net.edges.emplace_back(0, 2);
    epn::Component guard;  // guards the retailer-1 node
    guard.id = "comp_r1";
    guard.cls = epn::ComponentClass::distribution_node;
    guard.guards_node = true;
    guard.element = 2;
    net.components.push_back(guard);
    net.finalize();
    inst.binding.cell_node = {1};
    inst.binding.cell_pop = {1000};
    inst.binding.retailer_node = {0, 2};  // retailer 0 on src, retailer 1 guarded
    inst.assignment = {{0.7310585786300049, 0.2689414213699951}};
    inst.total_pop = 1000.0;

    epn::FunctionalState fs;
    fs.functional = {0};  // retailer 1 node dark
    const auto ctx_c = inst.ctx(recovery::BenefitMode::combined);
    CHECK(recovery::served(ctx_c, fs) ==
          doctest::Approx(731.0585786300049).epsilon(1e-13));
    const auto ctx_h = inst.ctx(recovery::BenefitMode::households);
    CHECK(recovery::served(ctx_h, fs) == 1000.0);
    fs.functional = {1};
    CHECK(recovery::served(ctx_c, fs) == doctest::Approx(1000.0));
}

TEST_CASE("objective 1 scans the service threshold") {
    recovery::Trajectory traj;
    traj.initial_served = 100.0;
    SUBCASE("pre-satisfied threshold") {
        const auto o = recovery::objective1(traj, 0.8, 100.0);
        CHECK(o.reached);
        CHECK(o.days == 0.0);
    }
    SUBCASE("three-epoch scan") {
        const double p = 1000.0;
        traj.initial_served = 0.0;
        for (auto [clock, served] :
             std::vector<std::pair<double, double>>{{2, 300}, {4, 700}, {7, 900}}) {
            recovery::EpochRecord e;
            e.clock = clock;
            e.served = served;
            e.k = 0;
            traj.epochs.push_back(e);
        }
        traj.epochs[0].k = 2;
        traj.epochs[1].k = 2;
        traj.epochs[2].k = 3;
        const auto o = recovery::objective1(traj, 0.8, p);
        CHECK(o.reached);
        CHECK(o.days == 7.0);
        const auto never = recovery::objective1(traj, 0.95, p);
        CHECK_FALSE(never.reached);
        CHECK(never.days == 7.0);
        CHECK(recovery::objective1_scalar(never) ==
              std::numeric_limits<double>::infinity());
    }
    SUBCASE("gamma domain") {
        CHECK_THROWS(recovery::objective1(traj, 0.0, 100.0));
        CHECK_THROWS(recovery::objective1(traj, 1.5, 100.0));
    }
}

TEST_CASE("objective 2 is the gap-weighted service average") {
    recovery::Trajectory traj;
    traj.initial_served = 0.0;
    recovery::EpochRecord e1;
    e1.k = 2;
    e1.clock = 2;
    e1.served = 400;
    recovery::EpochRecord e2;
    e2.k = 3;
    e2.clock = 5;
    e2.served = 1000;
    traj.epochs = {e1};
    CHECK(recovery::objective2(traj) == doctest::Approx(400.0));
    traj.epochs = {e1, e2};
    CHECK(recovery::objective2(traj) ==
          doctest::Approx((400.0 * 2 + 1000.0 * 3) / 5.0));

    recovery::Trajectory empty;
    CHECK_THROWS(recovery::objective2(empty));
}

TEST_CASE("constant full service makes objective 2 equal the population") {
    recovery::Trajectory traj;
    const double p = 48821.0;
    traj.initial_served = p;
    double clock = 0.0;
    for (double k : {1.5, 2.0, 0.5, 3.0}) {
        recovery::EpochRecord e;
        clock += k;
        e.k = k;
        e.clock = clock;
        e.served = p;
        traj.epochs.push_back(e);
    }
    CHECK(recovery::objective2(traj) == doctest::Approx(p).epsilon(1e-14));
}

TEST_CASE("a no-damage scenario yields an empty trajectory") {
    auto inst = toy::make_star({500});
    const auto scenario = inst.scenario({0});
    FixedOrderPolicy policy;
    policy.order = {0};
    policy.units = 1;
    const auto ctx = inst.ctx();
    const auto traj = recovery::simulate_policy(scenario, policy, 1, ctx);
    CHECK(traj.epochs.empty());
    CHECK(traj.initial_served == 500.0);
    CHECK(recovery::objective1_scalar(traj, 0.8, ctx.total_population) == 0.0);
}

TEST_CASE("simulation matches a hand-computed schedule event for event") {
    // M = 5, N = 2, durations a..e = 2,3,1,4,2, preference order a,b,c,d,e:
    //   epoch 1: {a,b} -> k=2, a done                (clock 2)
    //   epoch 2: {b,c} -> k=1, b and c done together (clock 3)
    //   epoch 3: {d,e} -> k=2, e done                (clock 5)
    //   epoch 4: {d}   -> k=2, d done                (clock 7)
    auto inst = toy::make_star({100, 200, 300, 400, 500});
    const auto scenario = inst.scenario({2, 3, 1, 4, 2});
    FixedOrderPolicy policy;
    policy.order = {0, 1, 2, 3, 4};
    policy.units = 2;
    const auto ctx = inst.ctx();
    const auto traj = recovery::simulate_policy(scenario, policy, 2, ctx);

    REQUIRE(traj.epochs.size() == 4);
    CHECK(traj.initial_served == 0.0);
    CHECK(traj.epochs[0].k == 2.0);
    CHECK(traj.epochs[0].completed == std::vector<int>{0});
    CHECK(traj.epochs[0].served == 100.0);
    CHECK(traj.epochs[1].k == 1.0);
    CHECK(traj.epochs[1].clock == 3.0);
    CHECK(traj.epochs[1].completed == std::vector<int>{1, 2});
    CHECK(traj.epochs[1].served == 600.0);
    CHECK(traj.epochs[2].k == 2.0);
    CHECK(traj.epochs[2].completed == std::vector<int>{4});
    CHECK(traj.epochs[2].served == 1100.0);
    CHECK(traj.epochs[3].k == 2.0);
    CHECK(traj.epochs[3].clock == 7.0);
    CHECK(traj.epochs[3].completed == std::vector<int>{3});
    CHECK(traj.epochs[3].served == 1500.0);
    CHECK(traj.makespan() == 7.0);
    // |D| drops to <= N after epoch 2 (3 left... after epoch 2: d,e remain)
    CHECK(traj.t_end_epoch == 2);
}

TEST_CASE("resources covering all damage finish in distinct-duration epochs") {
    auto inst = toy::make_star({10, 10, 10});
    const auto scenario = inst.scenario({5, 2, 5});
    FixedOrderPolicy policy;
    policy.order = {0, 1, 2};
    policy.units = 3;
    const auto traj =
        recovery::simulate_policy(scenario, policy, 3, inst.ctx());
    REQUIRE(traj.epochs.size() == 2);  // completions at t=2 and t=5
    CHECK(traj.epochs[0].action.components == std::vector<int>{0, 1, 2});
    CHECK(traj.epochs[0].completed == std::vector<int>{1});
    CHECK(traj.epochs[1].completed == std::vector<int>{0, 2});
    CHECK(traj.t_end_epoch == 0);
}

TEST_CASE("conservation and monotonicity hold on random instances") {
    Rng rng(4242);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 2 + static_cast<int>(rng.below(8));
        auto inst = toy::make_random_tree(rng, m);
        auto durations = toy::random_durations(rng, static_cast<std::size_t>(m));
        // knock a few out entirely
        for (auto& d : durations)
            if (rng.below(4) == 0) d = 0.0;
        const auto scenario = inst.scenario(durations);
        const int units = 1 + static_cast<int>(rng.below(3));
        const auto ctx = inst.ctx();

        policies::RandomBasePolicy policy(units, rng.next_u64());
        const auto traj =
            recovery::simulate_policy(scenario, policy, units, ctx);

        // every damaged component repaired exactly once
        std::vector<int> completed;
        double work = 0.0;
        for (const auto& e : traj.epochs) {
            for (int c : e.completed) completed.push_back(c);
            work += e.k * static_cast<double>(e.action.components.size());
        }
        std::sort(completed.begin(), completed.end());
        CHECK(completed == scenario.damaged_ids());

        // monotone service, bounded objectives
        double prev = traj.initial_served;
        for (const auto& e : traj.epochs) {
            CHECK(e.served >= prev);
            CHECK(e.k > 0.0);
            prev = e.served;
        }
        if (!traj.epochs.empty()) {
            CHECK(traj.epochs.back().served == doctest::Approx(inst.total_pop));
            const double f2 = recovery::objective2(traj);
            CHECK(f2 >= 0.0);
            CHECK(f2 <= inst.total_pop * (1 + 1e-12));

            // makespan lower bounds
            double total = 0.0, longest = 0.0;
            for (int c : scenario.damaged_ids()) {
                total += scenario.duration_days[static_cast<std::size_t>(c)];
                longest = std::max(
                    longest, scenario.duration_days[static_cast<std::size_t>(c)]);
            }
            CHECK(traj.makespan() >= longest - 1e-9);
            CHECK(traj.makespan() >= total / units - 1e-9);
            // work conservation: assigned-time never exceeds... equals total
            CHECK(work == doctest::Approx(total));
        }
    }
}

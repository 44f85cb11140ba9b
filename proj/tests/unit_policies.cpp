#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pas/errors.hpp"
#include "pas/model.hpp"
#include "pas/policies.hpp"
#include "test_util.hpp"

using namespace pas;

TEST_CASE("no-transfer assignment on the worked states") {
    ModelParams p = test::small_instance();

    State s15 = State::empty(p);
    s15.occupancy(1, 0) = 1;
    s15.queue[1] = 1;
    Action a = assign_no_transfer(s15, p);
    PostDecisionState post = apply_action(s15, a);
    CHECK(post.occupancy(0, 1) == 1);  // arrival pushed to ward 1
    CHECK(post.occupancy(1, 0) == 1);
    CHECK(a.total_transfers() == 0);

    CHECK(assign_no_transfer(State::empty(p), p) == Action(p));
}

TEST_CASE("free primary wards take everyone") {
    ModelParams p = test::hospital_instance();
    State s = State::empty(p);
    for (int i = 0; i < 5; ++i) s.queue[static_cast<size_t>(i)] = 3;
    Action a = assign_no_transfer(s, p);
    for (int i = 0; i < 5; ++i) CHECK(a.assign(i, i) == 3);
}

TEST_CASE("no-transfer infeasibility names the type") {
    Grid<double> prob(1, 1, 0.5);
    Grid<int> order(1, 1, 1);
    ModelParams p = make_params(1, 1, {1}, 2, {0.5}, prob, order, 1.0, 1.1, 0.2,
                                ArrivalRegime::CapacityLimited, false);
    State s = State::empty(p);
    s.occupancy(0, 0) = 1;
    s.queue[0] = 1;  // nowhere to go
    CHECK_THROWS_WITH_AS(assign_no_transfer(s, p), doctest::Contains("type 0"), InfeasibleError);
}

TEST_CASE("transfers realize the worked decisions") {
    ModelParams p = test::small_instance();

    State s15 = State::empty(p);
    s15.occupancy(1, 0) = 1;
    s15.queue[1] = 1;
    for (int y : {1, 2, 5}) {
        Action a = assign_with_transfers(s15, p, y);
        PostDecisionState post = apply_action(s15, a);
        CHECK(post.occupancy(0, 0) == 1);  // occupant moved home
        CHECK(post.occupancy(1, 1) == 1);  // arrival admitted to its own ward
        CHECK(a.total_transfers() == 1);
        CHECK(a.transfer(1, 0, 0) == 1);
        CHECK(validate_action(s15, a, p).ok());
    }

    State s11 = State::empty(p);
    s11.occupancy(0, 1) = 1;
    s11.queue[0] = 1;
    Action a = assign_with_transfers(s11, p, 4);
    PostDecisionState post = apply_action(s11, a);
    CHECK(post.occupancy(0, 0) == 1);
    CHECK(post.occupancy(1, 1) == 1);
    CHECK(a.transfer(0, 1, 1) == 1);
}

TEST_CASE("same-type occupants are never churned") {
    ModelParams p = test::small_instance();
    State s18 = State::empty(p);
    s18.occupancy(1, 1) = 1;  // type-2 already home
    s18.queue[1] = 1;         // another type-2 arrives
    Action a = assign_with_transfers(s18, p, 4);
    CHECK(a.total_transfers() == 0);
    CHECK(a.assign(0, 1) == 1);  // overflow to ward 1, occupant stays
}

TEST_CASE("zero budget degenerates to the no-transfer rule") {
    ModelParams p = test::hospital_instance();
    RandomStream rng(31);
    for (int t = 0; t < 1000; ++t) {
        State s = test::random_state(p, rng);
        CHECK(assign_with_transfers(s, p, 0) == assign_no_transfer(s, p));
    }
}

TEST_CASE("published overflow scenario: bounded displacements by priority") {
    // Ward 1 full with a mix of own-type and type-2 patients, seven type-1 and
    // three type-2 arrivals queued, budget 4: exactly four type-2 occupants
    // leave ward 1, four type-1 arrivals take their beds, the remaining three
    // type-1 go to their next-ranked ward.
    ModelParams p = test::hospital_instance();
    State s = State::empty(p);
    s.occupancy(0, 0) = 8;
    s.occupancy(0, 1) = 4;  // ward 1 at capacity 12
    s.queue[0] = 7;
    s.queue[1] = 3;

    Action a = assign_with_transfers(s, p, 4);
    CHECK(a.total_transfers() == 4);
    int out_of_ward1 = 0;
    for (int l = 1; l < 5; ++l) out_of_ward1 += a.transfer(0, l, 1);
    CHECK(out_of_ward1 == 4);
    CHECK(a.assign(0, 0) == 4);  // four arrivals into the freed beds
    CHECK(a.assign(2, 0) == 3);  // overflow goes to the rank-2 ward (Surg)
    // Displaced type-2 patients land in their best ward with space (their own).
    CHECK(a.transfer(0, 1, 1) == 4);
    // Queued type-2 follow into their primary ward.
    CHECK(a.assign(1, 1) == 3);
    CHECK(validate_action(s, a, p).ok());

    // With budget 10 the three remaining type-1 arrivals still find only four
    // movable non-type-1 occupants in ward 1.
    Action big = assign_with_transfers(s, p, 10);
    CHECK(big.total_transfers() == 4);
    CHECK(big.assign(0, 0) == 4);
}

TEST_CASE("budget is never exceeded and outputs always validate") {
    ModelParams p = test::hospital_instance();
    RandomStream rng(32);
    auto labels = test::hospital_labels();
    for (int t = 0; t < 10000; ++t) {
        State s = test::random_state(p, rng, 0.9);
        for (const auto& label : labels) {
            Action a = realize_decision(s, label, p);
            CHECK(a.total_transfers() <= label.max_transfers);
            auto res = validate_action(s, a, p);
            if (!res.ok()) {
                for (const auto& v : res.violations) MESSAGE(v.describe());
            }
            REQUIRE(res.ok());
        }
    }
}

TEST_CASE("a larger budget never worsens the nonprimary census") {
    ModelParams p = test::hospital_instance();
    RandomStream rng(33);
    for (int t = 0; t < 10000; ++t) {
        State s = test::random_state(p, rng, 0.95);
        int census0 = nonprimary_census(apply_action(s, assign_with_transfers(s, p, 0)), p);
        int census4 = nonprimary_census(apply_action(s, assign_with_transfers(s, p, 4)), p);
        int census10 = nonprimary_census(apply_action(s, assign_with_transfers(s, p, 10)), p);
        CHECK(census10 <= census4);
        CHECK(census4 <= census0);
    }
}

TEST_CASE("assignment is deterministic") {
    ModelParams p = test::hospital_instance();
    RandomStream rng(34);
    for (int t = 0; t < 200; ++t) {
        State s = test::random_state(p, rng);
        CHECK(assign_with_transfers(s, p, 4) == assign_with_transfers(s, p, 4));
        CHECK(assign_no_transfer(s, p) == assign_no_transfer(s, p));
    }
}

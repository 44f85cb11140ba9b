#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "pas/errors.hpp"
#include "pas/exact.hpp"
#include "pas/model.hpp"
#include "test_util.hpp"

using namespace pas;

namespace {

State state15(const ModelParams& p) {
    State s = State::empty(p);
    s.occupancy(1, 0) = 1;  // a type-1 patient in ward 2
    s.queue[1] = 1;         // a type-2 arrival waiting
    return s;
}

} // namespace

TEST_CASE("parameter validation catches broken instances") {
    ModelParams p = test::small_instance();
    CHECK(p.primary_ward == std::vector<int>{0, 1});
    CHECK(p.total_capacity == 2);

    ModelParams bad = test::small_instance();
    bad.preference_rank(0, 0) = 2;  // row (2,2) is no permutation
    CHECK_THROWS_AS(bad.finalize(), ConfigError);

    ModelParams badp = test::small_instance();
    badp.departure_prob(0, 0) = 0.0;
    CHECK_THROWS_AS(badp.finalize(), ConfigError);

    ModelParams badr = test::small_instance();
    badr.regime = ArrivalRegime::Unrestricted;  // finite waiting area
    CHECK_THROWS_AS(badr.finalize(), ConfigError);
}

TEST_CASE("validate_action accepts the worked assignment") {
    ModelParams p = test::small_instance();
    State s = state15(p);
    Action a(p);
    a.assign(0, 1) = 1;  // type-2 arrival to ward 1, no transfers
    CHECK(validate_action(s, a, p).ok());
}

TEST_CASE("validate_action trivial and violating cases") {
    ModelParams p = test::small_instance();

    State empty = State::empty(p);
    Action none(p);
    CHECK(validate_action(empty, none, p).ok());

    // Transferring a patient who is not there.
    Action ghost(p);
    ghost.transfer(0, 1, 0) = 1;
    auto res = validate_action(empty, ghost, p);
    REQUIRE(!res.ok());
    bool found = false;
    for (const auto& v : res.violations)
        if (v.constraint == "transfer-availability" && v.ward == 0 && v.type == 0) found = true;
    CHECK(found);

    // Unassigned queue.
    State queued = State::empty(p);
    queued.queue[0] = 1;
    auto res2 = validate_action(queued, none, p);
    REQUIRE(!res2.ok());
    CHECK(res2.violations.front().constraint == "assign-complete");

    // Both directions at once.
    State both = State::empty(p);
    both.occupancy(0, 0) = 1;
    both.occupancy(1, 0) = 1;
    Action ping(p);
    ping.transfer(0, 1, 0) = 1;
    ping.transfer(1, 0, 0) = 1;
    auto res3 = validate_action(both, ping, p);
    bool one_dir = false;
    for (const auto& v : res3.violations)
        if (v.constraint == "one-direction") one_dir = true;
    CHECK(one_dir);

    // Capacity overflow.
    State full = State::empty(p);
    full.occupancy(0, 0) = 1;
    full.queue[0] = 1;
    Action pile(p);
    pile.assign(0, 0) = 1;
    auto res4 = validate_action(full, pile, p);
    bool cap = false;
    for (const auto& v : res4.violations)
        if (v.constraint == "ward-capacity" && v.ward == 0) cap = true;
    CHECK(cap);

    // Dimension mismatches are structural errors, not violations.
    ModelParams other = test::hospital_instance();
    CHECK_THROWS_AS(validate_action(State::empty(other), none, other), DimensionError);
}

TEST_CASE("apply_action matches the worked example and conserves patients") {
    ModelParams p = test::small_instance();
    State s = state15(p);

    // No transfers: arrival lands in ward 1.
    Action a1(p);
    a1.assign(0, 1) = 1;
    PostDecisionState post1 = apply_action(s, a1);
    CHECK(post1.occupancy(0, 1) == 1);
    CHECK(post1.occupancy(1, 0) == 1);
    CHECK(post1.occupancy(0, 0) == 0);
    CHECK(post1.occupancy(1, 1) == 0);

    // Transfer the ward-2 occupant home, arrival takes ward 2.
    Action a2(p);
    a2.assign(1, 1) = 1;
    a2.transfer(1, 0, 0) = 1;
    PostDecisionState post2 = apply_action(s, a2);
    CHECK(post2.occupancy(0, 0) == 1);
    CHECK(post2.occupancy(1, 1) == 1);
    CHECK(post2.occupancy(0, 1) == 0);
    CHECK(post2.occupancy(1, 0) == 0);

    PostDecisionState post_empty = apply_action(State::empty(p), Action(p));
    CHECK(post_empty.occupancy.sum() == 0);

    // Conservation over random valid actions.
    RandomStream rng(11);
    ModelParams hosp = test::hospital_instance();
    auto labels = test::hospital_labels();
    for (int t = 0; t < 300; ++t) {
        State rs = test::random_state(hosp, rng);
        for (const auto& label : labels) {
            Action act = realize_decision(rs, label, hosp);
            PostDecisionState post = apply_action(rs, act);
            CHECK(post.total_patients() == rs.total_patients());
        }
    }
}

TEST_CASE("action_cost matches the worked values") {
    ModelParams p = test::small_instance();
    State s11 = State::empty(p);
    s11.occupancy(0, 1) = 1;  // type-2 patient in ward 1
    s11.queue[0] = 1;         // type-1 arrival

    Action a1(p);
    a1.assign(1, 0) = 1;  // send the arrival to ward 2
    CHECK(action_cost(s11, a1, p) == doctest::Approx(1.4).epsilon(1e-12));

    Action a2(p);
    a2.assign(0, 0) = 1;
    a2.transfer(0, 1, 1) = 1;  // move the occupant home first
    CHECK(action_cost(s11, a2, p) == doctest::Approx(2.1).epsilon(1e-12));

    CHECK(action_cost(State::empty(p), Action(p), p) == 0.0);
}

TEST_CASE("cost decomposition: only assignment costs when the rest are zero") {
    ModelParams p = test::small_instance();
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i) p.penalty_cost(k, i) = 0.0;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            for (int i = 0; i < 2; ++i) p.transfer_cost(k, l, i) = 0.0;

    RandomStream rng(5);
    for (int t = 0; t < 200; ++t) {
        State s = test::random_state(p, rng);
        Action a = assign_no_transfer(s, p);
        double expected = 0.0;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i) expected += a.assign(k, i) * p.assign_cost(k, i);
        CHECK(action_cost(s, a, p) == expected);
    }
}

TEST_CASE("excluded assignment cost drops out") {
    ModelParams p = test::small_instance();
    p.include_assignment_cost = false;
    State s = State::empty(p);
    s.queue[0] = 1;
    Action a(p);
    a.assign(0, 0) = 1;
    CHECK(action_cost(s, a, p) == 0.0);  // primary bed, no penalty, no transfer
}

TEST_CASE("enumeration reproduces the 22-state fixture") {
    ModelParams p = test::small_instance();
    auto states = enumerate_states(p);
    REQUIRE(states.size() == 22);

    auto fixture = small_instance_states();
    std::set<State> enumerated(states.begin(), states.end());
    CHECK(enumerated.size() == 22);  // duplicate-free
    for (const auto& fs : fixture) CHECK(enumerated.count(fs) == 1);

    CHECK(std::is_sorted(states.begin(), states.end()));
    CHECK(states.front() == State::empty(p));
}

TEST_CASE("enumeration of a single bed without queue") {
    Grid<double> prob(1, 1, 0.5);
    Grid<int> order(1, 1, 1);
    ModelParams p = make_params(1, 1, {1}, 0, {0.3}, prob, order, 1.0, 1.1, 0.2,
                                ArrivalRegime::CapacityLimited, false);
    auto states = enumerate_states(p);
    CHECK(states.size() == 2);
}

TEST_CASE("enumeration agrees with a brute-force filter") {
    Grid<double> prob(1, 2);
    prob(0, 0) = 0.4;
    prob(0, 1) = 0.6;
    Grid<int> order(2, 1, 1);
    ModelParams p = make_params(1, 2, {2}, 2, {0.5, 0.5}, prob, order, 1.0, 1.1, 0.2,
                                ArrivalRegime::CapacityLimited, true);
    auto states = enumerate_states(p);

    // Independent filter over the full integer box.
    std::set<State> expected;
    for (int n1 = 0; n1 <= 2; ++n1)
        for (int n2 = 0; n2 <= 2; ++n2)
            for (int q1 = 0; q1 <= 2; ++q1)
                for (int q2 = 0; q2 <= 2; ++q2) {
                    if (n1 + n2 > 2) continue;
                    if (q1 + q2 > 2) continue;
                    if (n1 + n2 + q1 + q2 > 2) continue;
                    Grid<int> n(1, 2);
                    n(0, 0) = n1;
                    n(0, 1) = n2;
                    expected.insert(State{n, {q1, q2}});
                }
    std::set<State> actual(states.begin(), states.end());
    CHECK(actual == expected);
}

TEST_CASE("enumeration size cap") {
    ModelParams p = test::small_instance();
    CHECK_THROWS_AS(enumerate_states(p, 10), SizeCapError);
    CHECK(count_states(p) == 22);
    ModelParams hosp = test::hospital_instance();
    CHECK_THROWS_AS(count_states(hosp, 1000000), SizeCapError);  // unbounded queue
}

TEST_CASE("actions serialize their nonzero entries for audit logs") {
    ModelParams p = test::small_instance();
    State s = state15(p);
    Action a = assign_with_transfers(s, p, 2);
    std::string text = to_string(a);
    CHECK(text == "x[1][1]=1 y[1->0][0]=1");
    CHECK(to_string(Action(p)) == "(empty)");
    CHECK(to_string(s) == "n=[0,0;1,0] q=[0,1]");
}

TEST_CASE("post-decision space size matches the published count") {
    ModelParams hosp = test::hospital_instance();
    double size = post_state_space_size(hosp);
    CHECK(size == doctest::Approx(2.9544e28).epsilon(1e-3));
}

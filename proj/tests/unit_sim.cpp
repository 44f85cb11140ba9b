#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pas/errors.hpp"
#include "pas/model.hpp"
#include "pas/sim.hpp"
#include "test_util.hpp"

using namespace pas;

TEST_CASE("a day is bit-identical under the same seed") {
    ModelParams p = test::hospital_instance();
    auto labels = test::hospital_labels();
    RandomStream rng1(500), rng2(500);
    State s = State::empty(p);
    s.queue[4] = 30;
    auto [next1, rec1] = simulate_day(s, fixed_policy(1), p, labels, 0, rng1);
    auto [next2, rec2] = simulate_day(s, fixed_policy(1), p, labels, 0, rng2);
    CHECK(next1 == next2);
    CHECK(rec1.cost == rec2.cost);
    CHECK(rec1.departures == rec2.departures);
    CHECK(rec1.admitted == rec2.admitted);
    CHECK(rec1.redirected == rec2.redirected);
    CHECK(rec1.extra_transfers == rec2.extra_transfers);
}

TEST_CASE("all-departing empty-arrival system empties in one day") {
    Grid<double> prob(1, 1, 1.0);
    Grid<int> order(1, 1, 1);
    ModelParams p = make_params(1, 1, {3}, 3, {0.0}, prob, order, 1.0, 1.1, 0.2,
                                ArrivalRegime::CapacityLimited, true);
    State s = State::empty(p);
    s.occupancy(0, 0) = 3;
    RandomStream rng(1);
    std::vector<DecisionLabel> labels = {DecisionLabel::no_transfer()};
    auto [next, rec] = simulate_day(s, fixed_policy(0), p, labels, 0, rng);
    CHECK(next == State::empty(p));
    auto [after, rec2] = simulate_day(next, fixed_policy(0), p, labels, 1, rng);
    CHECK(after == State::empty(p));
}

TEST_CASE("full system admits nobody") {
    ModelParams p = test::small_instance();
    auto labels = test::small_instance_labels();
    State s = State::empty(p);
    s.occupancy(0, 0) = 1;
    s.occupancy(1, 1) = 1;
    ModelParams sticky = p;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i) sticky.departure_prob(k, i) = 1e-9;
    sticky.finalize();
    RandomStream rng(2);
    auto [next, rec] = simulate_day(s, fixed_policy(0), sticky, labels, 0, rng);
    int admitted = 0;
    for (int v : rec.admitted) admitted += v;
    CHECK(admitted == 0);
    CHECK(rec.redirected == rec.raw_arrivals);
}

TEST_CASE("one day, one replication: the report is that day") {
    ModelParams p = test::hospital_instance();
    auto labels = test::hospital_labels();
    SimOptions opt;
    opt.retain_first_rep = true;
    SimReport rep = run_replications(p, labels, fixed_policy(0), 1, 1, 99, opt);
    REQUIRE(rep.first_rep_days.size() == 1);
    const DayRecord& day = rep.first_rep_days[0];
    CHECK(rep.overall.mean_cost == day.cost);
    CHECK(rep.overall.mean_nonprimary == static_cast<double>(day.nonprimary));
    CHECK(rep.overall.mean_redirected == static_cast<double>(day.redirected));
    CHECK(rep.warmup_used == 0);
}

TEST_CASE("replication means are reproducible and thread-count independent") {
    ModelParams p = test::hospital_instance();
    auto labels = test::hospital_labels();
    SimOptions serial;
    serial.threads = 1;
    SimOptions parallel;
    parallel.threads = 2;
    SimReport a = run_replications(p, labels, fixed_policy(1), 120, 6, 1234, serial);
    SimReport b = run_replications(p, labels, fixed_policy(1), 120, 6, 1234, parallel);
    REQUIRE(a.replications.size() == b.replications.size());
    for (size_t r = 0; r < a.replications.size(); ++r) {
        CHECK(a.replications[r].mean_cost == b.replications[r].mean_cost);
        CHECK(a.replications[r].mean_nonprimary == b.replications[r].mean_nonprimary);
    }
    // Different replications differ (independent streams); compare a
    // signature rather than one statistic, which can collide on the lattice
    // of short-horizon averages.
    bool differs = a.replications[0].mean_cost != a.replications[1].mean_cost ||
                   a.replications[0].mean_nonprimary != a.replications[1].mean_nonprimary ||
                   a.replications[0].mean_redirected != a.replications[1].mean_redirected;
    CHECK(differs);
}

TEST_CASE("identical policies compared on common random numbers coincide") {
    ModelParams p = test::hospital_instance();
    auto labels = test::hospital_labels();
    std::vector<NamedPolicy> same = {{"first", fixed_policy(2)}, {"second", fixed_policy(2)}};
    auto reports = compare_policies(p, labels, same, 100, 4, 777);
    REQUIRE(reports.size() == 2);
    for (size_t r = 0; r < reports[0].replications.size(); ++r) {
        CHECK(reports[0].replications[r].mean_cost == reports[1].replications[r].mean_cost);
        CHECK(reports[0].replications[r].mean_nonprimary ==
              reports[1].replications[r].mean_nonprimary);
    }
}

TEST_CASE("census never exceeds capacity along a trajectory") {
    ModelParams p = test::hospital_instance();
    auto labels = test::hospital_labels();
    SimOptions opt;
    opt.retain_first_rep = true;
    SimReport rep = run_replications(p, labels, fixed_policy(2), 400, 1, 4321, opt);
    for (const auto& day : rep.first_rep_days) {
        int total = day.post_occupancy.sum();
        CHECK(total <= p.total_capacity);
        CHECK(day.nonprimary <= total);
        for (int k = 0; k < p.num_wards; ++k)
            CHECK(day.post_occupancy.row_sum(k) <= p.capacity[k]);
    }
}

TEST_CASE("per-day cost equals the penalty rate times the census under no transfers") {
    ModelParams p = test::hospital_instance();
    auto labels = test::hospital_labels();
    SimOptions opt;
    opt.retain_first_rep = true;
    SimReport rep = run_replications(p, labels, fixed_policy(0), 300, 1, 2024, opt);
    for (const auto& day : rep.first_rep_days) {
        CHECK(day.cost == 0.2 * day.nonprimary);  // bitwise
    }
}

TEST_CASE("warmup is excluded when the horizon allows") {
    ModelParams p = test::small_instance();
    auto labels = test::small_instance_labels();
    SimReport shorter = run_replications(p, labels, fixed_policy(0), 50, 2, 7);
    CHECK(shorter.warmup_used == 0);
    CHECK(shorter.replications[0].days_counted == 50);
    SimReport longer = run_replications(p, labels, fixed_policy(0), 300, 2, 7);
    CHECK(longer.warmup_used == 100);
    CHECK(longer.replications[0].days_counted == 200);
}

TEST_CASE("theta-greedy policies run and report label frequencies") {
    ModelParams p = test::small_instance();
    auto labels = test::small_instance_labels();
    Weights w{FeatureScheme::FullState, std::vector<double>(6, 1e-4), 0};
    SimReport rep = run_replications(p, labels, weights_policy(w), 200, 2, 55);
    double freq_total = 0.0;
    for (double f : rep.overall.label_freq) freq_total += f;
    CHECK(freq_total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("policy infeasibility propagates out of worker threads with day context") {
    Grid<double> prob(1, 1, 0.01);
    Grid<int> order(1, 1, 1);
    ModelParams p = make_params(1, 1, {1}, std::nullopt, {5.0}, prob, order, 1.0, 1.1, 0.2,
                                ArrivalRegime::Unrestricted, false);
    std::vector<DecisionLabel> labels = {DecisionLabel::no_transfer()};
    SimOptions opt;
    opt.threads = 2;
    CHECK_THROWS_WITH_AS(run_replications(p, labels, fixed_policy(0), 30, 4, 5, opt),
                         doctest::Contains("day"), InfeasibleError);
}

TEST_CASE("shadow transfers vanish when the chosen budget is unbounded") {
    ModelParams p = test::hospital_instance();
    std::vector<DecisionLabel> labels = {DecisionLabel::bounded_transfer(p.total_capacity)};
    SimOptions opt;
    opt.retain_first_rep = true;
    SimReport rep = run_replications(p, labels, fixed_policy(0), 150, 1, 31, opt);
    for (const auto& day : rep.first_rep_days) CHECK(day.extra_transfers == 0);
}

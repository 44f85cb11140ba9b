#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "pas/config.hpp"
#include "pas/errors.hpp"
#include "test_util.hpp"

using namespace pas;

namespace {

std::string config_dir() {
    const char* env = std::getenv("PAS_CONFIG_DIR");
    return env ? env : "configs";
}

bool params_equal(const ModelParams& a, const ModelParams& b) {
    return a.num_wards == b.num_wards && a.num_types == b.num_types && a.capacity == b.capacity &&
           a.waiting_capacity == b.waiting_capacity && a.arrival_rate == b.arrival_rate &&
           a.departure_prob == b.departure_prob && a.preference_rank == b.preference_rank &&
           a.assign_cost == b.assign_cost && a.transfer_cost == b.transfer_cost &&
           a.penalty_cost == b.penalty_cost &&
           a.include_assignment_cost == b.include_assignment_cost &&
           a.joint_admission_cap == b.joint_admission_cap && a.regime == b.regime;
}

} // namespace

TEST_CASE("the shipped small-instance config matches the programmatic fixture") {
    AppConfig cfg = load_config(config_dir() + "/example1.cfg");
    CHECK(cfg.name == "example1");
    ModelParams expect = test::small_instance(0.5, 0.5);
    CHECK(params_equal(cfg.params, expect));
    REQUIRE(cfg.decisions.size() == 2);
    CHECK(cfg.decisions[0] == DecisionLabel::no_transfer());
    CHECK(cfg.decisions[1] == DecisionLabel::bounded_transfer(2));
}

TEST_CASE("the shipped hospital config matches the programmatic fixture") {
    AppConfig cfg = load_config(config_dir() + "/example2.cfg");
    ModelParams expect = test::hospital_instance();
    CHECK(params_equal(cfg.params, expect));
    CHECK(cfg.params.total_capacity == 214);
    CHECK(cfg.params.total_rate == doctest::Approx(65.9271).epsilon(1e-12));
    // Departure probability rule: 1/E(LoS) on the diagonal, scaled by 0.8 off it.
    CHECK(cfg.params.departure_prob(0, 0) == doctest::Approx(1.0 / 5.1473).epsilon(1e-12));
    CHECK(cfg.params.departure_prob(1, 0) ==
          doctest::Approx(0.8 / 5.1473).epsilon(1e-12));
    REQUIRE(cfg.decisions.size() == 3);
    CHECK(cfg.decisions[1] == DecisionLabel::bounded_transfer(4));
    CHECK(cfg.decisions[2] == DecisionLabel::bounded_transfer(10));
}

TEST_CASE("round trip: saved configs reload to the identical model") {
    AppConfig cfg = load_config(config_dir() + "/example2.cfg");
    std::string tmp = "roundtrip_test.cfg";
    save_config(cfg, tmp);
    AppConfig reloaded = load_config(tmp);
    CHECK(params_equal(cfg.params, reloaded.params));
    CHECK(cfg.decisions.size() == reloaded.decisions.size());
    CHECK(cfg.hash == reloaded.hash);
    std::remove(tmp.c_str());
}

TEST_CASE("diagnostics name the offending field") {
    AppConfig base = load_config(config_dir() + "/example1.cfg");
    nlohmann::json j = config_to_json(base);

    {
        nlohmann::json broken = j;
        broken["preference_order"][0] = {1, 1};
        CHECK_THROWS_WITH_AS(config_from_json(broken), doctest::Contains("preference_order"),
                             ConfigError);
    }
    {
        nlohmann::json broken = j;
        broken.erase("arrival_rates");
        CHECK_THROWS_WITH_AS(config_from_json(broken), doctest::Contains("arrival_rates"),
                             ConfigError);
    }
    {
        nlohmann::json broken = j;
        broken["departure_probs"][0][0] = 1.5;
        CHECK_THROWS_WITH_AS(config_from_json(broken), doctest::Contains("departure_probs"),
                             ConfigError);
    }
    {
        nlohmann::json broken = j;
        broken["capacities"] = {1};
        CHECK_THROWS_WITH_AS(config_from_json(broken), doctest::Contains("capacities"),
                             ConfigError);
    }
    {
        nlohmann::json broken = j;
        broken["arrival_regime"] = "unrestricted";  // finite waiting area stays
        CHECK_THROWS_AS(config_from_json(broken), ConfigError);
    }
    {
        nlohmann::json broken = j;
        broken["decisions"] = nlohmann::json::array();
        CHECK_THROWS_WITH_AS(config_from_json(broken), doctest::Contains("decisions"),
                             ConfigError);
    }
}

TEST_CASE("scalar penalty with scope all charges primary wards too") {
    AppConfig base = load_config(config_dir() + "/example1.cfg");
    nlohmann::json j = config_to_json(base);
    j["penalty_cost"] = 0.2;
    j["penalty_scope"] = "all";
    AppConfig cfg = config_from_json(j);
    CHECK(cfg.params.penalty_cost(0, 0) == 0.2);
    CHECK(cfg.params.penalty_cost(0, 1) == 0.2);

    j["penalty_scope"] = "nonprimary";
    AppConfig scoped = config_from_json(j);
    CHECK(scoped.params.penalty_cost(0, 0) == 0.0);
    CHECK(scoped.params.penalty_cost(0, 1) == 0.2);
}

TEST_CASE("missing file and parse garbage are config errors") {
    CHECK_THROWS_AS(load_config("no/such/file.cfg"), ConfigError);
    std::string tmp = "garbage_test.cfg";
    {
        std::ofstream out(tmp);
        out << "not json at all {";
    }
    CHECK_THROWS_WITH_AS(load_config(tmp), doctest::Contains("parse"), ConfigError);
    std::remove(tmp.c_str());
}

TEST_CASE("config hash is stable and sensitive") {
    AppConfig a = load_config(config_dir() + "/example1.cfg");
    AppConfig b = load_config(config_dir() + "/example1.cfg");
    CHECK(a.hash == b.hash);
    nlohmann::json j = config_to_json(a);
    j["arrival_rates"][0] = 0.51;
    AppConfig c = config_from_json(j);
    CHECK(c.hash != a.hash);
}

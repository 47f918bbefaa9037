#include <catch_amalgamated.hpp>

#include <cmath>

#include <mvmdp/inventory.hpp>
#include <mvmdp/mdp.hpp>

using namespace mvmdp;

TEST_CASE("binomial pmf") {
    CHECK(binomial_pmf(4, 0.6, 2) == Catch::Approx(0.3456).margin(1e-12));
    CHECK(binomial_pmf(4, 0.6, 0) == Catch::Approx(0.0256).margin(1e-12));
    CHECK(binomial_pmf(4, 0.6, 4) == Catch::Approx(0.1296).margin(1e-12));
    double total = 0.0;
    for (int k = 0; k <= 4; ++k) total += binomial_pmf(4, 0.6, k);
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
    CHECK(binomial_pmf(4, 0.6, -1) == 0.0);
    CHECK(binomial_pmf(4, 0.6, 5) == 0.0);
}

TEST_CASE("default inventory instance shape") {
    const Mdp mdp = build_inventory_mdp({});
    CHECK(mdp.state_count == 5);
    REQUIRE(mdp.action_counts == std::vector<int>{5, 4, 3, 2, 1});
    CHECK(policy_count(mdp) == Catch::Approx(120.0));
    CHECK(mdp.beta == 10.0);
    CHECK(mdp.name == "inventory-C4");
    CHECK_NOTHROW(validate(mdp, 1e-12));
}

TEST_CASE("inventory transitions follow the demand distribution") {
    const Mdp mdp = build_inventory_mdp({});
    // No stock, no order: demand never takes the level below zero.
    CHECK(mdp.transition[0][0][0] == Catch::Approx(1.0).margin(1e-15));
    // Order up to capacity from empty: staying full needs zero demand.
    CHECK(mdp.transition[0][4][4] == Catch::Approx(binomial_pmf(4, 0.6, 0)).margin(1e-15));
    // From (s=2, a=1): next = max(3 - demand, 0).
    CHECK(mdp.transition[2][1][3] == Catch::Approx(binomial_pmf(4, 0.6, 0)).margin(1e-15));
    CHECK(mdp.transition[2][1][0] ==
          Catch::Approx(binomial_pmf(4, 0.6, 3) + binomial_pmf(4, 0.6, 4)).margin(1e-15));
    // Every action can empty the shelf, so state 0 is reachable from anywhere.
    for (int i = 0; i < mdp.state_count; ++i)
        for (int a = 0; a < mdp.actions(i); ++a) CHECK(mdp.transition[i][a][0] > 0.0);
}

TEST_CASE("inventory rewards are negative operating costs") {
    const Mdp mdp = build_inventory_mdp({});
    // Full shelf, no order: only holding cost on E[max(4 - demand, 0)] = 1.6.
    CHECK(mdp.reward[4][0] == Catch::Approx(-0.7 * 1.6).margin(1e-12));
    const RewardBounds bounds = reward_bounds(mdp);
    CHECK(bounds.lo == Catch::Approx(-6.96).margin(1e-9));
    CHECK(bounds.hi == Catch::Approx(-0.88656).margin(1e-6));
    // Empty shelf, no order: pure shortage cost on E[demand] = 2.4.
    CHECK(mdp.reward[0][0] == Catch::Approx(-2.9 * 2.4).margin(1e-12));
}

TEST_CASE("inventory policies are unichain") {
    const Mdp mdp = build_inventory_mdp({});
    CHECK(is_unichain(mdp, DeterministicPolicy{0, 0, 0, 0, 0}));
    CHECK(is_unichain(mdp, DeterministicPolicy{4, 3, 2, 1, 0}));
    CHECK(is_unichain(mdp, DeterministicPolicy{2, 1, 0, 1, 0}));
}

TEST_CASE("larger capacities scale the action space") {
    InventoryParams params;
    params.capacity = 7;
    const Mdp mdp = build_inventory_mdp(params);
    CHECK(mdp.state_count == 8);
    CHECK(mdp.actions(0) == 8);
    CHECK(mdp.actions(7) == 1);
    CHECK_NOTHROW(validate(mdp, 1e-12));
    CHECK(policy_count(mdp) == Catch::Approx(40320.0));
}

TEST_CASE("invalid inventory parameters are rejected") {
    InventoryParams params;
    params.capacity = 0;
    CHECK_THROWS_AS(build_inventory_mdp(params), std::invalid_argument);
    params = {};
    params.demand_p = 1.5;
    CHECK_THROWS_AS(build_inventory_mdp(params), std::invalid_argument);
    params = {};
    params.beta = -1.0;
    CHECK_THROWS_AS(build_inventory_mdp(params), std::invalid_argument);
    params = {};
    params.holding_cost = -0.1;
    CHECK_THROWS_AS(build_inventory_mdp(params), std::invalid_argument);
}

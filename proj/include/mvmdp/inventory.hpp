#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvmdp/mdp.hpp"

namespace mvmdp {

/// Single-item inventory control benchmark. Stock lives in {0, ..., capacity};
/// the order placed in state s may fill the warehouse (actions 0..capacity-s),
/// demand is binomial(capacity, demand_p) per period, and unmet demand is
/// lost. The reward is the negated per-period cost: ordering plus holding on
/// the post-demand stock plus penalties on lost demand.
struct InventoryParams {
    int capacity = 4;
    double demand_p = 0.6;
    double order_cost = 1.0;
    double holding_cost = 0.7;
    double shortage_cost = 2.9;
    double beta = 10.0;
};

/// Probability of k successes in n independent trials of probability p.
inline double binomial_pmf(int n, double p, int k) {
    if (k < 0 || k > n) return 0.0;
    double coeff = 1.0;
    for (int i = 0; i < k; ++i) coeff = coeff * (n - i) / (i + 1);
    return coeff * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

/// Builds the benchmark MDP. Demand at or above the available stock lumps
/// into next state 0, so every action keeps a positive probability of hitting
/// the empty state and every policy is unichain by construction.
inline Mdp build_inventory_mdp(const InventoryParams& params) {
    const int C = params.capacity;
    if (C < 1) throw std::invalid_argument("inventory: capacity must be at least 1");
    if (!(params.demand_p > 0.0) || !(params.demand_p < 1.0))
        throw std::invalid_argument("inventory: demand_p must lie strictly inside (0, 1)");
    if (!(params.beta >= 0.0)) throw std::invalid_argument("inventory: beta must be nonnegative");
    if (!(params.order_cost >= 0.0) || !(params.holding_cost >= 0.0) ||
        !(params.shortage_cost >= 0.0))
        throw std::invalid_argument("inventory: costs must be nonnegative");

    std::vector<double> pmf(C + 1);
    for (int k = 0; k <= C; ++k) pmf[k] = binomial_pmf(C, params.demand_p, k);

    Mdp mdp;
    mdp.state_count = C + 1;
    mdp.beta = params.beta;
    mdp.name = "inventory-C" + std::to_string(C);
    mdp.action_counts.resize(C + 1);
    mdp.transition.resize(C + 1);
    mdp.reward.resize(C + 1);

    for (int s = 0; s <= C; ++s) {
        const int order_max = C - s;
        mdp.action_counts[s] = order_max + 1;
        mdp.transition[s].assign(order_max + 1, std::vector<double>(C + 1, 0.0));
        mdp.reward[s].assign(order_max + 1, 0.0);
        for (int a = 0; a <= order_max; ++a) {
            double expected_stock = 0.0;
            double expected_lost = 0.0;
            for (int demand = 0; demand <= C; ++demand) {
                const int next = std::max(s + a - demand, 0);
                mdp.transition[s][a][next] += pmf[demand];
                expected_stock += pmf[demand] * next;
                expected_lost += pmf[demand] * std::max(demand - s - a, 0);
            }
            mdp.reward[s][a] = -(params.order_cost * a + params.holding_cost * expected_stock +
                                 params.shortage_cost * expected_lost);
        }
    }
    return mdp;
}

}  // namespace mvmdp

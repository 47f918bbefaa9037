#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mvmdp/average_cost.hpp"
#include "mvmdp/errors.hpp"
#include "mvmdp/mdp.hpp"

namespace mvmdp {

/// Cost table of the auxiliary average-cost MDP at center point y.
/// MeanVariance mode prices a state-action pair at beta*(r - y)^2 - r, so the
/// optimal average equals the best pseudo objective beta*sigma_tilde(y) - mu.
/// VarianceOnly mode prices it at (r - y)^2, whose optimal average is the
/// best pseudo variance sigma_tilde(y).
inline CostTable pseudo_cost(const Mdp& mdp, double y,
                             ObjectiveMode mode = ObjectiveMode::MeanVariance) {
    CostTable cost(mdp.state_count);
    for (int i = 0; i < mdp.state_count; ++i) {
        cost[i].resize(mdp.actions(i));
        for (int a = 0; a < mdp.actions(i); ++a) {
            const double r = mdp.reward[i][a];
            const double dev = r - y;
            cost[i][a] = mode == ObjectiveMode::VarianceOnly
                             ? dev * dev
                             : mdp.beta * dev * dev - r;
        }
    }
    return cost;
}

/// Optimal solution of the auxiliary MDP at a fixed center point.
struct AuxiliarySolution {
    double y = 0.0;
    DeterministicPolicy policy;
    double pseudo_objective = 0.0;  // optimal long-run average of the auxiliary cost
    EvaluatedPolicy real;           // steady-state statistics of that policy
};

/// Solves the auxiliary MDP at center y by policy iteration, optionally warm
/// starting from a previous policy. The returned policy is re-evaluated
/// through its stationary distribution, and the identity
/// pseudo_objective = objective + kappa*(y - mean)^2 ties the two independent
/// computations together; a gap above 1e-7 raises IdentityViolation.
inline AuxiliarySolution solve_auxiliary(const Mdp& mdp, double y,
                                         ObjectiveMode mode = ObjectiveMode::MeanVariance,
                                         const DeterministicPolicy& warm_start = {},
                                         std::size_t max_iterations = 100000) {
    const SolverResult res =
        policy_iteration(mdp, pseudo_cost(mdp, y, mode), warm_start, max_iterations);

    AuxiliarySolution sol;
    sol.y = y;
    sol.policy = res.policy;
    sol.pseudo_objective = res.average;
    sol.real = evaluate_policy(mdp, res.policy);

    const double kappa = objective_curvature(mdp, mode);
    const double recomposed =
        objective_value(sol.real, mode) + kappa * variance_distortion(y, sol.real.mean);
    if (std::abs(sol.pseudo_objective - recomposed) > 1e-7)
        throw IdentityViolation("solve_auxiliary: pseudo objective " +
                                std::to_string(sol.pseudo_objective) +
                                " disagrees with recomposed value " +
                                std::to_string(recomposed) + " at y=" + std::to_string(y));
    return sol;
}

}  // namespace mvmdp

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mvmdp/errors.hpp"
#include "mvmdp/mdp.hpp"

namespace mvmdp {

/// Per state-action cost table, indexed [state][action].
using CostTable = std::vector<std::vector<double>>;

/// Solution of the Poisson equation (I - P^d + ee^T) g = c. The rank-one
/// term pins the free constant so that e^T g equals the long-run average
/// cost, and g - Pg = c - average * e holds componentwise.
struct PotentialVector {
    Eigen::VectorXd g;
    Eigen::VectorXd cost;          // cost vector the potentials solve
    DeterministicPolicy policy;
    double average = 0.0;          // long-run average cost, equals g.sum()
};

/// Cost vector of policy d under the given table.
inline Eigen::VectorXd policy_costs(const Mdp& mdp, const DeterministicPolicy& d,
                                    const CostTable& cost) {
    Eigen::VectorXd c(mdp.state_count);
    for (int i = 0; i < mdp.state_count; ++i) c(i) = cost[i][d[i]];
    return c;
}

/// Potentials of policy d for the given cost table. Raises SingularSystem
/// when the induced chain is not unichain (the system is singular then) or
/// the solve is numerically unusable.
inline PotentialVector potentials(const Mdp& mdp, const DeterministicPolicy& d,
                                  const CostTable& cost) {
    const int n = mdp.state_count;
    const Eigen::MatrixXd P = policy_matrix(mdp, d);
    const Eigen::MatrixXd M =
        Eigen::MatrixXd::Identity(n, n) - P + Eigen::MatrixXd::Ones(n, n);

    PotentialVector pv;
    pv.cost = policy_costs(mdp, d, cost);
    pv.policy = d;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible())
        throw SingularSystem("potentials: fundamental matrix is singular");
    pv.g = lu.solve(pv.cost);
    if (!pv.g.allFinite())
        throw SingularSystem("potentials: solve produced non-finite values");
    const double residual = (M * pv.g - pv.cost).cwiseAbs().maxCoeff();
    if (residual > 1e-8)
        throw SingularSystem("potentials: Poisson residual " + std::to_string(residual));
    pv.average = pv.g.sum();
    return pv;
}

/// Optimal policy for the long-run average of a cost table.
struct SolverResult {
    DeterministicPolicy policy;
    double average = 0.0;
    Eigen::VectorXd potentials;
    int iterations = 0;
};

/// Howard policy iteration for average cost on a unichain MDP.
///
/// The improvement step keeps the incumbent action unless some action beats
/// it by more than 1e-12 in Q-value, and breaks remaining ties toward the
/// smallest action index; both rules make the iteration deterministic and
/// keep it from chattering between equivalent policies. Revisiting a policy
/// without improving the average beyond 1e-12 raises CycleDetected, and
/// exceeding the iteration budget raises MaxIterationsExceeded.
inline SolverResult policy_iteration(const Mdp& mdp, const CostTable& cost,
                                     DeterministicPolicy initial = {},
                                     std::size_t max_iterations = 100000) {
    constexpr double improve_tol = 1e-12;

    DeterministicPolicy d = initial.empty() ? DeterministicPolicy(mdp.state_count, 0)
                                            : std::move(initial);
    if (static_cast<int>(d.size()) != mdp.state_count)
        throw std::invalid_argument("policy_iteration: initial policy has wrong length");
    for (int i = 0; i < mdp.state_count; ++i)
        if (d[i] < 0 || d[i] >= mdp.actions(i))
            throw std::invalid_argument("policy_iteration: initial action out of range at state " +
                                        std::to_string(i));
    std::map<DeterministicPolicy, double> visited;

    for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
        const PotentialVector pv = potentials(mdp, d, cost);

        if (auto it = visited.find(d); it != visited.end()) {
            if (it->second - pv.average <= improve_tol)
                throw CycleDetected("policy_iteration: policy revisited at average " +
                                    std::to_string(pv.average));
        }
        visited.emplace(d, pv.average);

        DeterministicPolicy next(mdp.state_count);
        for (int i = 0; i < mdp.state_count; ++i) {
            const auto q_value = [&](int a) {
                double q = cost[i][a];
                const auto& row = mdp.transition[i][a];
                for (int j = 0; j < mdp.state_count; ++j) q += row[j] * pv.g(j);
                return q;
            };
            int best_a = 0;
            double best_q = q_value(0);
            for (int a = 1; a < mdp.actions(i); ++a) {
                const double q = q_value(a);
                if (q < best_q - improve_tol) {
                    best_a = a;
                    best_q = q;
                }
            }
            // Keep the incumbent when it is within tolerance of the best.
            if (q_value(d[i]) <= best_q + improve_tol) best_a = d[i];
            next[i] = best_a;
        }

        if (next == d)
            return {d, pv.average, pv.g, static_cast<int>(iter)};
        d = std::move(next);
    }
    throw MaxIterationsExceeded("policy_iteration: no convergence within " +
                                std::to_string(max_iterations) + " iterations");
}

}  // namespace mvmdp

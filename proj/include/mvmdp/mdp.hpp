#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mvmdp/errors.hpp"

namespace mvmdp {

/// A deterministic stationary policy: one action index per state.
using DeterministicPolicy = std::vector<int>;

/// How policies are scored. MeanVariance minimizes beta*sigma - mu;
/// VarianceOnly minimizes sigma alone (beta is ignored).
enum class ObjectiveMode { MeanVariance, VarianceOnly };

/// Finite MDP with dense integer actions per state. Action a of state i has
/// transition row transition[i][a] (a probability vector over states) and
/// immediate reward reward[i][a]. Every deterministic policy is assumed to
/// induce a unichain process; `is_unichain` can verify that assumption.
struct Mdp {
    int state_count = 0;
    std::vector<int> action_counts;                            // per state, >= 1
    std::vector<std::vector<std::vector<double>>> transition;  // [i][a][j]
    std::vector<std::vector<double>> reward;                   // [i][a]
    double beta = 1.0;
    std::string name;

    int actions(int state) const { return action_counts[state]; }
};

/// Validates the structural invariants of an Mdp: consistent table shapes,
/// probabilities in [0,1] with rows summing to one, and beta >= 0.
/// Throws std::invalid_argument describing the first violation found.
inline void validate(const Mdp& mdp, double row_sum_tol = 1e-12) {
    const auto n = static_cast<std::size_t>(mdp.state_count);
    if (mdp.state_count <= 0)
        throw std::invalid_argument("mdp: state_count must be positive");
    if (mdp.action_counts.size() != n || mdp.transition.size() != n || mdp.reward.size() != n)
        throw std::invalid_argument("mdp: per-state table sizes disagree with state_count");
    if (!(mdp.beta >= 0.0))
        throw std::invalid_argument("mdp: beta must be nonnegative");
    for (std::size_t i = 0; i < n; ++i) {
        const auto m = static_cast<std::size_t>(mdp.action_counts[i]);
        if (mdp.action_counts[i] < 1)
            throw std::invalid_argument("mdp: state " + std::to_string(i) + " has no actions");
        if (mdp.transition[i].size() != m || mdp.reward[i].size() != m)
            throw std::invalid_argument("mdp: action tables of state " + std::to_string(i) +
                                        " disagree with its action count");
        for (std::size_t a = 0; a < m; ++a) {
            const auto& row = mdp.transition[i][a];
            if (row.size() != n)
                throw std::invalid_argument("mdp: transition row (" + std::to_string(i) + "," +
                                            std::to_string(a) + ") has wrong length");
            double sum = 0.0;
            for (double p : row) {
                if (!(p >= 0.0) || p > 1.0 + row_sum_tol)
                    throw std::invalid_argument("mdp: transition probability out of [0,1] at (" +
                                                std::to_string(i) + "," + std::to_string(a) + ")");
                sum += p;
            }
            if (std::abs(sum - 1.0) > row_sum_tol)
                throw std::invalid_argument("mdp: transition row (" + std::to_string(i) + "," +
                                            std::to_string(a) + ") sums to " + std::to_string(sum));
            if (!std::isfinite(mdp.reward[i][a]))
                throw std::invalid_argument("mdp: non-finite reward at (" + std::to_string(i) +
                                            "," + std::to_string(a) + ")");
        }
    }
}

/// Number of deterministic policies, as a double so huge spaces do not
/// overflow. Saturates at infinity.
inline double policy_count(const Mdp& mdp) {
    double count = 1.0;
    for (int m : mdp.action_counts) {
        count *= m;
        if (!std::isfinite(count)) return std::numeric_limits<double>::infinity();
    }
    return count;
}

/// Transition matrix of the chain induced by policy d.
inline Eigen::MatrixXd policy_matrix(const Mdp& mdp, const DeterministicPolicy& d) {
    const int n = mdp.state_count;
    Eigen::MatrixXd P(n, n);
    for (int i = 0; i < n; ++i) {
        const auto& row = mdp.transition[i][d[i]];
        for (int j = 0; j < n; ++j) P(i, j) = row[j];
    }
    return P;
}

/// Reward vector of policy d: r[i] = reward[i][d[i]].
inline Eigen::VectorXd policy_rewards(const Mdp& mdp, const DeterministicPolicy& d) {
    const int n = mdp.state_count;
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r(i) = mdp.reward[i][d[i]];
    return r;
}

/// True when the chain induced by d has exactly one closed recurrent class.
/// Runs Tarjan's strongly connected components over the support graph of P^d
/// and counts components with no outgoing edge.
inline bool is_unichain(const Mdp& mdp, const DeterministicPolicy& d) {
    const int n = mdp.state_count;
    const Eigen::MatrixXd P = policy_matrix(mdp, d);

    std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<char> on_stack(n, 0);
    int next_index = 0, comp_count = 0;

    // Iterative Tarjan; each frame is (vertex, next neighbor to scan).
    std::vector<std::pair<int, int>> frames;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        frames.emplace_back(root, 0);
        while (!frames.empty()) {
            const int v = frames.back().first;
            if (frames.back().second == 0) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (frames.back().second < n) {
                const int w = frames.back().second++;
                if (P(v, w) <= 0.0) continue;
                if (index[w] == -1) {
                    frames.emplace_back(w, 0);
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = comp_count;
                    if (w == v) break;
                }
                ++comp_count;
            }
            frames.pop_back();
            if (!frames.empty()) {
                const int parent = frames.back().first;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }

    int closed = 0;
    for (int c = 0; c < comp_count; ++c) {
        bool leaves = false;
        for (int i = 0; i < n && !leaves; ++i) {
            if (comp[i] != c) continue;
            for (int j = 0; j < n; ++j)
                if (P(i, j) > 0.0 && comp[j] != c) {
                    leaves = true;
                    break;
                }
        }
        if (!leaves) ++closed;
    }
    return closed == 1;
}

/// Stationary distribution pi of the unichain transition matrix P, computed
/// through the fundamental-matrix system (I - P + ee^T)^T x = e. Components
/// in [-1e-9, 0) are rounding noise and get clamped to zero before
/// renormalization; anything more negative, a non-finite solve, or a
/// stationarity residual above tolerance means P was not unichain and raises
/// SingularSystem.
inline Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P) {
    const auto n = P.rows();
    const Eigen::MatrixXd M =
        Eigen::MatrixXd::Identity(n, n) - P + Eigen::MatrixXd::Ones(n, n);
    // Full pivoting for its rank check: the system is singular exactly when P
    // has several recurrent classes, and a singular-but-consistent system can
    // otherwise slip through with a valid-looking mixture.
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(M.transpose());
    if (!lu.isInvertible())
        throw SingularSystem("stationary_distribution: fundamental matrix is singular");
    Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Ones(n));
    if (!x.allFinite())
        throw SingularSystem("stationary_distribution: solve produced non-finite values");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (x(i) < 0.0) {
            if (x(i) < -1e-9)
                throw SingularSystem("stationary_distribution: component " + std::to_string(i) +
                                     " is " + std::to_string(x(i)));
            x(i) = 0.0;
        }
    }
    const double total = x.sum();
    if (!(total > 0.0))
        throw SingularSystem("stationary_distribution: distribution sums to zero");
    x /= total;
    const double residual = (x.transpose() * P - x.transpose()).cwiseAbs().maxCoeff();
    if (residual > 1e-8)
        throw SingularSystem("stationary_distribution: stationarity residual " +
                             std::to_string(residual));
    return x;
}

inline Eigen::VectorXd stationary_distribution(const Mdp& mdp, const DeterministicPolicy& d) {
    return stationary_distribution(policy_matrix(mdp, d));
}

/// Long-run average reward under stationary distribution pi.
inline double long_run_mean(const Eigen::VectorXd& pi, const Eigen::VectorXd& r) {
    return pi.dot(r);
}

/// Steady-state second moment of the reward stream around a center point y:
/// sum_i pi_i (r_i - y)^2. With y equal to the long-run mean this is the
/// steady-state variance; other centers give the pseudo variance.
inline double pseudo_variance(const Eigen::VectorXd& pi, const Eigen::VectorXd& r, double y) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        const double dev = r(i) - y;
        acc += pi(i) * dev * dev;
    }
    return acc;
}

/// Steady-state variance of the reward stream.
inline double long_run_variance(const Eigen::VectorXd& pi, const Eigen::VectorXd& r) {
    return pseudo_variance(pi, r, long_run_mean(pi, r));
}

/// Gap between the pseudo variance at center y and the true variance.
/// Equals (y - mean)^2 regardless of the policy's higher moments.
inline double variance_distortion(double y, double mean) {
    const double dev = y - mean;
    return dev * dev;
}

/// A policy together with its steady-state statistics. `objective` is always
/// beta*variance - mean; variance-only scoring reads `variance` directly.
struct EvaluatedPolicy {
    DeterministicPolicy policy;
    Eigen::VectorXd distribution;
    double mean = 0.0;
    double variance = 0.0;
    double objective = 0.0;
};

/// Scores an evaluated policy under the requested objective mode.
inline double objective_value(const EvaluatedPolicy& ep, ObjectiveMode mode) {
    return mode == ObjectiveMode::VarianceOnly ? ep.variance : ep.objective;
}

/// Curvature of the optimal pseudo objective around a policy's mean: the
/// kappa in eta-tilde(y) = eta + kappa*(y - mean)^2.
inline double objective_curvature(const Mdp& mdp, ObjectiveMode mode) {
    return mode == ObjectiveMode::VarianceOnly ? 1.0 : mdp.beta;
}

/// Evaluates policy d: stationary distribution, long-run mean and variance,
/// and the mean-variance objective beta*sigma - mu.
inline EvaluatedPolicy evaluate_policy(const Mdp& mdp, const DeterministicPolicy& d) {
    EvaluatedPolicy ep;
    ep.policy = d;
    ep.distribution = stationary_distribution(policy_matrix(mdp, d));
    const Eigen::VectorXd r = policy_rewards(mdp, d);
    ep.mean = long_run_mean(ep.distribution, r);
    ep.variance = long_run_variance(ep.distribution, r);
    ep.objective = mdp.beta * ep.variance - ep.mean;
    return ep;
}

/// Range of immediate rewards over all state-action pairs. Every policy's
/// long-run mean lies inside it, so it bounds the search domain for pseudo
/// means.
struct RewardBounds {
    double lo = 0.0;
    double hi = 0.0;
};

inline RewardBounds reward_bounds(const Mdp& mdp) {
    RewardBounds b{std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
    for (const auto& row : mdp.reward)
        for (double r : row) {
            b.lo = std::min(b.lo, r);
            b.hi = std::max(b.hi, r);
        }
    return b;
}

}  // namespace mvmdp

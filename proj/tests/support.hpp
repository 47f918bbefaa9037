#pragma once

// Shared test fixtures: deterministic random instances and enumeration
// oracles computed directly from stationary distributions, independent of
// the policy-iteration solve path.

#include <limits>
#include <random>
#include <vector>

#include <mvmdp/mvmdp.hpp>

namespace support {

/// Random MDP with strictly positive transition rows, which makes every
/// policy irreducible and hence unichain. Rewards are uniform in [-1, 1].
inline mvmdp::Mdp random_mdp(std::uint64_t seed, int max_states = 5, int max_actions = 4,
                             double beta = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> state_count(1, max_states);
    std::uniform_int_distribution<int> action_count(1, max_actions);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::uniform_real_distribution<double> reward(-1.0, 1.0);

    mvmdp::Mdp mdp;
    mdp.state_count = state_count(rng);
    mdp.beta = beta;
    mdp.action_counts.resize(mdp.state_count);
    mdp.transition.resize(mdp.state_count);
    mdp.reward.resize(mdp.state_count);
    for (int i = 0; i < mdp.state_count; ++i) {
        mdp.action_counts[i] = action_count(rng);
        mdp.transition[i].resize(mdp.action_counts[i]);
        mdp.reward[i].resize(mdp.action_counts[i]);
        for (int a = 0; a < mdp.action_counts[i]; ++a) {
            auto& row = mdp.transition[i][a];
            row.resize(mdp.state_count);
            double sum = 0.0;
            for (double& p : row) {
                p = weight(rng);
                sum += p;
            }
            for (double& p : row) p /= sum;
            mdp.reward[i][a] = reward(rng);
        }
    }
    return mdp;
}

/// All deterministic policies of an MDP in lexicographic action order.
inline std::vector<mvmdp::DeterministicPolicy> all_policies(const mvmdp::Mdp& mdp) {
    std::vector<mvmdp::DeterministicPolicy> out;
    mvmdp::DeterministicPolicy d(mdp.state_count, 0);
    while (true) {
        out.push_back(d);
        int i = mdp.state_count - 1;
        while (i >= 0 && d[i] + 1 == mdp.actions(i)) d[i--] = 0;
        if (i < 0) break;
        ++d[i];
    }
    return out;
}

/// Evaluates every deterministic policy.
inline std::vector<mvmdp::EvaluatedPolicy> evaluate_all(const mvmdp::Mdp& mdp) {
    std::vector<mvmdp::EvaluatedPolicy> out;
    for (const auto& d : all_policies(mdp)) out.push_back(mvmdp::evaluate_policy(mdp, d));
    return out;
}

/// Best objective over all policies under the given mode.
inline double enumeration_optimum(const mvmdp::Mdp& mdp, mvmdp::ObjectiveMode mode) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ep : evaluate_all(mdp)) best = std::min(best, objective_value(ep, mode));
    return best;
}

/// Best pseudo objective at center y over all policies: the value of the
/// optimal pseudo objective curve computed without any solver machinery.
inline double enumeration_curve_value(const mvmdp::Mdp& mdp, mvmdp::ObjectiveMode mode,
                                      double y) {
    const double kappa = objective_curvature(mdp, mode);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ep : evaluate_all(mdp))
        best = std::min(best,
                        objective_value(ep, mode) + kappa * mvmdp::variance_distortion(y, ep.mean));
    return best;
}

}  // namespace support

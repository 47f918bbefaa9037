#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvmdp/errors.hpp"
#include "mvmdp/interval_set.hpp"
#include "mvmdp/mdp.hpp"
#include "mvmdp/pseudo.hpp"

namespace mvmdp {

enum class Algorithm { Global, GlobalPlus, Local, BruteForce };

struct SolveOptions {
    Algorithm algorithm = Algorithm::Global;
    ObjectiveMode mode = ObjectiveMode::MeanVariance;
    /// Start point for Local; NaN means the reward lower bound.
    double y0 = std::numeric_limits<double>::quiet_NaN();
    /// Auxiliary-solve budget; 0 means 2*|policies|+1 capped at one million.
    std::uint64_t max_aux_solves = 0;
    /// Minimum half-width of a removed interval. Keeps degenerate cuts at
    /// fixed points from stalling the search; the optimality slack this buys
    /// is at most curvature * eps_cut^2.
    double eps_cut = 1e-9;
    /// BruteForce refuses policy spaces larger than this.
    double brute_force_cap = 1e6;
};

/// One auxiliary solve in a search trace.
struct IterationRecord {
    std::uint64_t index = 0;
    double y = 0.0;
    DeterministicPolicy policy;
    double mean = 0.0;
    double variance = 0.0;
    double objective = 0.0;  // under the selected mode
    double cut_lo = std::numeric_limits<double>::quiet_NaN();
    double cut_hi = std::numeric_limits<double>::quiet_NaN();
    /// Upper end of the removed half line (-inf, tail_cut]; NaN when unused.
    double tail_cut = std::numeric_limits<double>::quiet_NaN();
    double best_objective = 0.0;
};

struct SolveReport {
    ObjectiveMode mode = ObjectiveMode::MeanVariance;
    Algorithm algorithm = Algorithm::Global;
    DeterministicPolicy policy;
    double eta_star = 0.0;
    double mu_star = 0.0;
    double sigma_star = 0.0;
    double y_star = 0.0;
    std::uint64_t aux_solves = 0;
    std::vector<IterationRecord> trace;
    std::string termination;
    double wall_time_ms = 0.0;
};

/// Center points provably unable to beat the policy solved at y: the closed
/// ball around y reaching to the policy's mean, widened to min_radius when
/// the two nearly coincide so the search always removes measurable ground.
inline Interval mean_dominance_cut(double y, double mean, double min_radius = 1e-9) {
    const double radius = std::max(std::abs(y - mean), min_radius);
    return {y - radius, y + radius};
}

/// Upper end of the half line of means that cannot beat the reference under
/// beta*sigma - mu: any candidate with mean <= mean_ref - beta*sigma_ref
/// loses even with zero variance.
inline double low_mean_dominance_bound(const EvaluatedPolicy& ref, double beta) {
    return ref.mean - beta * ref.variance;
}

/// True when the candidate provably scores no better than the reference
/// under beta*sigma - mu. Rule one: the candidate's mean is so low that no
/// variance could compensate. Rule two: the candidate sits above the slope-
/// 1/beta line through the reference in the mean-variance plane. The second
/// rule needs beta > 0.
inline bool is_dominated(const EvaluatedPolicy& candidate, const EvaluatedPolicy& reference,
                         double beta) {
    const double floor = reference.mean - beta * reference.variance;
    if (candidate.mean <= floor) return true;
    if (beta > 0.0 && candidate.mean >= floor &&
        candidate.variance >= reference.variance + (candidate.mean - reference.mean) / beta)
        return true;
    return false;
}

namespace detail {

inline std::uint64_t default_budget(const Mdp& mdp, std::uint64_t requested) {
    if (requested > 0) return requested;
    const double bound = 2.0 * policy_count(mdp) + 1.0;
    return bound < 1e6 ? static_cast<std::uint64_t>(bound) : 1000000u;
}

inline void fill_result(SolveReport& report, const EvaluatedPolicy& best, ObjectiveMode mode) {
    report.policy = best.policy;
    report.eta_star = objective_value(best, mode);
    report.mu_star = best.mean;
    report.sigma_star = best.variance;
    report.y_star = best.mean;
}

class Stopwatch {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

}  // namespace detail

/// Exact minimization of the selected objective by shrinking the domain of
/// candidate center points. Each iteration solves the auxiliary MDP at the
/// midpoint of the interval with the largest lower endpoint, records the
/// returned policy as a candidate, and removes the ball of center points the
/// solve is known to dominate. The plus variant additionally removes the
/// half line of means that cannot beat the candidate (mean-variance mode
/// only; with a variance objective that bound does not exist and the plus
/// variant degrades to the plain one). Terminates when the domain is empty,
/// which takes at most 2*|policies|+1 solves.
inline SolveReport solve_global(const Mdp& mdp, const SolveOptions& options) {
    const detail::Stopwatch watch;
    const bool plus = options.algorithm == Algorithm::GlobalPlus;
    const RewardBounds bounds = reward_bounds(mdp);
    const std::uint64_t budget = detail::default_budget(mdp, options.max_aux_solves);
    if (!(options.eps_cut > 0.0))
        throw std::invalid_argument("solve_global: eps_cut must be positive");

    SolveReport report;
    report.mode = options.mode;
    report.algorithm = plus ? Algorithm::GlobalPlus : Algorithm::Global;

    IntervalSet domain(bounds.lo, bounds.hi);
    EvaluatedPolicy best;
    double best_objective = std::numeric_limits<double>::infinity();
    DeterministicPolicy warm;

    while (!domain.empty()) {
        if (report.aux_solves >= budget)
            throw MaxIterationsExceeded("solve_global: auxiliary-solve budget " +
                                        std::to_string(budget) + " exhausted");
        const double y = domain.first_interval_midpoint();
        const AuxiliarySolution sol = solve_auxiliary(mdp, y, options.mode, warm);
        warm = sol.policy;
        ++report.aux_solves;

        IterationRecord rec;
        rec.index = report.aux_solves;
        rec.y = y;
        rec.policy = sol.policy;
        rec.mean = sol.real.mean;
        rec.variance = sol.real.variance;
        rec.objective = objective_value(sol.real, options.mode);

        const Interval cut = mean_dominance_cut(y, sol.real.mean, options.eps_cut);
        rec.cut_lo = std::max(cut.lo, bounds.lo);
        rec.cut_hi = std::min(cut.hi, bounds.hi);
        domain.subtract(cut);
        if (plus && options.mode == ObjectiveMode::MeanVariance) {
            rec.tail_cut = low_mean_dominance_bound(sol.real, mdp.beta);
            domain.subtract_below(rec.tail_cut);
        }

        if (rec.objective < best_objective - 1e-12) {
            best = sol.real;
            best_objective = rec.objective;
        }
        rec.best_objective = best_objective;
        report.trace.push_back(std::move(rec));
    }

    detail::fill_result(report, best, options.mode);
    report.termination = "domain exhausted";
    report.wall_time_ms = watch.elapsed_ms();
    return report;
}

/// Fixed-point iteration on the center point: solve the auxiliary MDP at y,
/// move y to the returned policy's mean, stop when they agree to 1e-10. The
/// objective of successive policies never increases, so the iteration lands
/// on a fixed point of the curve; which one depends on the start y0.
inline SolveReport solve_local(const Mdp& mdp, const SolveOptions& options) {
    const detail::Stopwatch watch;
    const RewardBounds bounds = reward_bounds(mdp);
    const std::uint64_t budget = detail::default_budget(mdp, options.max_aux_solves);

    double y = std::isnan(options.y0) ? bounds.lo : options.y0;
    if (y < bounds.lo - 1e-12 || y > bounds.hi + 1e-12)
        throw std::invalid_argument("solve_local: y0 " + std::to_string(y) +
                                    " outside the reward range [" + std::to_string(bounds.lo) +
                                    ", " + std::to_string(bounds.hi) + "]");

    SolveReport report;
    report.mode = options.mode;
    report.algorithm = Algorithm::Local;
    DeterministicPolicy warm;

    while (true) {
        if (report.aux_solves >= budget)
            throw MaxIterationsExceeded("solve_local: auxiliary-solve budget " +
                                        std::to_string(budget) + " exhausted");
        const AuxiliarySolution sol = solve_auxiliary(mdp, y, options.mode, warm);
        warm = sol.policy;
        ++report.aux_solves;

        IterationRecord rec;
        rec.index = report.aux_solves;
        rec.y = y;
        rec.policy = sol.policy;
        rec.mean = sol.real.mean;
        rec.variance = sol.real.variance;
        rec.objective = objective_value(sol.real, options.mode);
        rec.best_objective = rec.objective;
        report.trace.push_back(std::move(rec));

        if (std::abs(sol.real.mean - y) <= 1e-10) {
            detail::fill_result(report, sol.real, options.mode);
            report.termination = "fixed point";
            report.wall_time_ms = watch.elapsed_ms();
            return report;
        }
        y = sol.real.mean;
    }
}

/// Reference solver: evaluates every deterministic policy and keeps the best
/// under the selected objective, breaking ties toward the first policy in
/// lexicographic action order. Refuses spaces beyond options.brute_force_cap.
inline SolveReport brute_force(const Mdp& mdp, const SolveOptions& options) {
    const detail::Stopwatch watch;
    const double count = policy_count(mdp);
    if (count > options.brute_force_cap) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "brute_force: %.15g policies exceed the cap of %.15g",
                      count, options.brute_force_cap);
        throw PolicySpaceTooLarge(msg);
    }

    SolveReport report;
    report.mode = options.mode;
    report.algorithm = Algorithm::BruteForce;

    EvaluatedPolicy best;
    double best_objective = std::numeric_limits<double>::infinity();
    DeterministicPolicy d(mdp.state_count, 0);
    while (true) {
        const EvaluatedPolicy ep = evaluate_policy(mdp, d);
        const double objective = objective_value(ep, options.mode);
        if (objective < best_objective) {
            best = ep;
            best_objective = objective;
        }
        int i = mdp.state_count - 1;
        while (i >= 0 && d[i] + 1 == mdp.actions(i)) d[i--] = 0;
        if (i < 0) break;
        ++d[i];
    }

    detail::fill_result(report, best, options.mode);
    report.termination = "exhaustive";
    report.wall_time_ms = watch.elapsed_ms();
    return report;
}

/// Entry point dispatching on options.algorithm.
inline SolveReport solve(const Mdp& mdp, const SolveOptions& options = {}) {
    switch (options.algorithm) {
        case Algorithm::Local:
            return solve_local(mdp, options);
        case Algorithm::BruteForce:
            return brute_force(mdp, options);
        default:
            return solve_global(mdp, options);
    }
}

struct FrontierPoint {
    double beta = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double eta = 0.0;
};

/// Mean-variance tradeoff curve: the optimal (mu, sigma, eta) for each beta.
inline std::vector<FrontierPoint> pareto_frontier(const Mdp& mdp,
                                                  const std::vector<double>& betas) {
    std::vector<FrontierPoint> points;
    points.reserve(betas.size());
    Mdp scaled = mdp;
    for (double beta : betas) {
        scaled.beta = beta;
        SolveOptions options;
        options.algorithm = Algorithm::Global;
        const SolveReport report = solve_global(scaled, options);
        points.push_back({beta, report.mu_star, report.sigma_star, report.eta_star});
    }
    return points;
}

}  // namespace mvmdp

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mvmdp/average_cost.hpp"
#include "mvmdp/errors.hpp"
#include "mvmdp/interval_set.hpp"
#include "mvmdp/mdp.hpp"
#include "mvmdp/pseudo.hpp"

namespace mvmdp {

/// The auxiliary cost at center y decomposes as c0 + y*c1 plus a constant
/// that is the same for every policy. The base part c0 and slope part c1 per
/// state-action pair, for the given objective mode.
inline void base_cost_tables(const Mdp& mdp, ObjectiveMode mode, CostTable& c0, CostTable& c1) {
    c0.assign(mdp.state_count, {});
    c1.assign(mdp.state_count, {});
    const double kappa = objective_curvature(mdp, mode);
    for (int i = 0; i < mdp.state_count; ++i) {
        c0[i].resize(mdp.actions(i));
        c1[i].resize(mdp.actions(i));
        for (int a = 0; a < mdp.actions(i); ++a) {
            const double r = mdp.reward[i][a];
            c0[i][a] = mode == ObjectiveMode::VarianceOnly ? r * r : kappa * r * r - r;
            c1[i][a] = -2.0 * kappa * r;
        }
    }
}

/// Linear sensitivity certificate of a policy for the auxiliary family.
/// zeta[i][a] + y * zeta_prime[i][a] is, up to sign, the advantage of
/// switching state i to action a at center y: the policy stays optimal at y
/// exactly while every entry of zeta + y*zeta_prime is nonpositive. Both
/// tables vanish on the policy's own actions.
struct TestCoefficients {
    DeterministicPolicy policy;
    std::vector<std::vector<double>> zeta;
    std::vector<std::vector<double>> zeta_prime;
    Eigen::VectorXd g0;  // potentials of the base cost part
    Eigen::VectorXd g1;  // potentials of the slope cost part
};

inline TestCoefficients test_coefficients(const Mdp& mdp, const DeterministicPolicy& d,
                                          ObjectiveMode mode = ObjectiveMode::MeanVariance) {
    CostTable c0, c1;
    base_cost_tables(mdp, mode, c0, c1);
    const PotentialVector p0 = potentials(mdp, d, c0);
    const PotentialVector p1 = potentials(mdp, d, c1);

    TestCoefficients tc;
    tc.policy = d;
    tc.g0 = p0.g;
    tc.g1 = p1.g;
    tc.zeta.assign(mdp.state_count, {});
    tc.zeta_prime.assign(mdp.state_count, {});
    for (int i = 0; i < mdp.state_count; ++i) {
        tc.zeta[i].resize(mdp.actions(i));
        tc.zeta_prime[i].resize(mdp.actions(i));
        for (int a = 0; a < mdp.actions(i); ++a) {
            const auto& row = mdp.transition[i][a];
            double push0 = 0.0, push1 = 0.0;
            for (int j = 0; j < mdp.state_count; ++j) {
                push0 += row[j] * p0.g(j);
                push1 += row[j] * p1.g(j);
            }
            // e^T g equals the long-run average of the cost part, so this is
            // (average + potential difference) minus the pair's cost.
            tc.zeta[i][a] = p0.g(i) - push0 + p0.average - c0[i][a];
            tc.zeta_prime[i][a] = p1.g(i) - push1 + p1.average - c1[i][a];
        }
    }
    return tc;
}

/// Maximal interval of center points on which the certified policy remains
/// optimal: the set of y with zeta + y*zeta_prime <= 0 componentwise.
/// Endpoints are -inf/+inf when no pair bounds that side. Raises
/// InconsistentCertificate when the probe point y is not inside the interval
/// or some slope-free pair has positive advantage, since either means the
/// certificate contradicts the optimality of the policy it came from.
inline Interval critical_interval(const TestCoefficients& tc, double y) {
    constexpr double slope_tol = 1e-12;
    constexpr double containment_tol = 1e-9;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tc.zeta.size(); ++i) {
        for (std::size_t a = 0; a < tc.zeta[i].size(); ++a) {
            const double slope = tc.zeta_prime[i][a];
            const double root = -tc.zeta[i][a] / slope;
            if (slope > slope_tol)
                hi = std::min(hi, root);
            else if (slope < -slope_tol)
                lo = std::max(lo, root);
            else if (tc.zeta[i][a] > containment_tol)
                throw InconsistentCertificate(
                    "critical_interval: slope-free pair with positive advantage at state " +
                    std::to_string(i));
        }
    }
    if (y < lo - containment_tol || y > hi + containment_tol)
        throw InconsistentCertificate("critical_interval: probe " + std::to_string(y) +
                                      " outside [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]");
    return {lo, hi};
}

/// One quadratic piece of the optimal pseudo objective curve: on [lo, hi]
/// the curve equals objective + kappa*(y - mean)^2 for the stated policy.
struct CurveSegment {
    double lo = 0.0;
    double hi = 0.0;
    DeterministicPolicy policy;
    double objective = 0.0;  // real objective of the policy, the piece's minimum value
    double mean = 0.0;       // vertex location of the piece
};

/// Decomposes [reward lo, reward hi] into maximal optimality segments by
/// sweeping left to right: solve the auxiliary MDP just right of the settled
/// frontier, certify the returned policy's interval, and extend the frontier
/// to its upper end. Probes land eps_step right of the frontier; when ties
/// keep a probe from advancing the frontier the offset doubles until it
/// does. Produces at most one segment per deterministic policy, anything
/// more raises SegmentLimitExceeded.
inline std::vector<CurveSegment> enumerate_segments(const Mdp& mdp,
                                                    ObjectiveMode mode = ObjectiveMode::MeanVariance,
                                                    double eps_step = 1e-9) {
    const RewardBounds bounds = reward_bounds(mdp);
    const double segment_limit = policy_count(mdp);

    std::vector<CurveSegment> segments;
    DeterministicPolicy warm;
    double frontier = bounds.lo;
    double probe = bounds.lo;
    double step = eps_step;
    int stalls = 0;

    while (true) {
        const AuxiliarySolution sol = solve_auxiliary(mdp, probe, mode, warm);
        warm = sol.policy;
        const Interval span = critical_interval(test_coefficients(mdp, sol.policy, mode), probe);
        const double hi = std::min(span.hi, bounds.hi);

        if (hi > frontier || segments.empty()) {
            segments.push_back({frontier, std::max(hi, frontier), sol.policy,
                                objective_value(sol.real, mode), sol.real.mean});
            frontier = segments.back().hi;
            step = eps_step;
            stalls = 0;
            if (static_cast<double>(segments.size()) > segment_limit)
                throw SegmentLimitExceeded("enumerate_segments: more segments than policies");
        } else {
            // Probe landed in a tie band that certifies no new ground.
            step *= 2.0;
            if (++stalls > 100)
                throw MaxIterationsExceeded("enumerate_segments: frontier stalled at " +
                                            std::to_string(frontier));
        }
        if (frontier >= bounds.hi) break;
        probe = std::min(frontier + step, bounds.hi);
    }
    return segments;
}

/// Curve value at y from a segment decomposition. Points outside every
/// segment (possible only beyond the domain edges) use the nearest segment.
inline double curve_value(const std::vector<CurveSegment>& segments, double kappa, double y) {
    if (segments.empty()) throw EmptyDomain("curve_value: no segments");
    const CurveSegment* chosen = &segments.back();
    for (const CurveSegment& seg : segments)
        if (y <= seg.hi) {
            chosen = &seg;
            break;
        }
    return chosen->objective + kappa * variance_distortion(y, chosen->mean);
}

enum class FixedPointKind { LocalOptimum, NonOptimum };

/// A center point equal to its own optimal policy's mean. These are exactly
/// the candidate minima of the optimal pseudo objective curve.
struct FixedPoint {
    double y = 0.0;
    double value = 0.0;  // curve value at y
    FixedPointKind kind = FixedPointKind::NonOptimum;
    std::size_t segment = 0;  // index of a segment whose vertex lies at y
};

/// Finds every segment whose vertex falls inside the segment and classifies
/// it. A vertex strictly inside its segment is a local optimum. At a shared
/// breakpoint the one-sided pieces decide: a local optimum needs the left
/// piece falling into the point and the right piece rising out of it. At the
/// domain edge one side has no piece at all, so the test cannot certify a
/// local optimum and the point is reported NonOptimum.
inline std::vector<FixedPoint> classify_fixed_points(const std::vector<CurveSegment>& segments,
                                                     double kappa) {
    constexpr double pos_tol = 1e-9;
    std::vector<FixedPoint> points;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const CurveSegment& seg = segments[k];
        if (seg.mean < seg.lo - 1e-12 || seg.mean > seg.hi + 1e-12) continue;
        const double y = std::clamp(seg.mean, seg.lo, seg.hi);
        if (!points.empty() && std::abs(points.back().y - y) <= pos_tol) continue;

        FixedPoint fp;
        fp.y = y;
        fp.segment = k;
        fp.value = seg.objective + kappa * variance_distortion(y, seg.mean);

        // Segment carrying the curve just left of y, then just right of y.
        std::ptrdiff_t left = -1, right = -1;
        for (std::size_t j = 0; j < segments.size(); ++j) {
            if (segments[j].lo <= y - pos_tol && segments[j].hi >= y) left = j;
            if (right == -1 && segments[j].hi >= y + pos_tol && segments[j].lo <= y) right = j;
        }
        if (left != -1 && right != -1) {
            const bool falls_in = y <= segments[left].mean + pos_tol;
            const bool rises_out = y >= segments[right].mean - pos_tol;
            if (falls_in && rises_out) fp.kind = FixedPointKind::LocalOptimum;
        }
        points.push_back(fp);
    }
    return points;
}

}  // namespace mvmdp

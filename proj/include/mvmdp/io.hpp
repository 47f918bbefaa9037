#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvmdp/global_search.hpp"
#include "mvmdp/mdp.hpp"
#include "mvmdp/sensitivity.hpp"

namespace mvmdp {

/// All human-facing numeric output carries 12 significant digits.
inline std::string format_sig(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

/// Rounds to 12 significant digits, used before placing numbers in reports.
inline double round_sig(double x) {
    if (!std::isfinite(x)) return x;
    return std::stod(format_sig(x));
}

inline std::string to_string(ObjectiveMode mode) {
    return mode == ObjectiveMode::VarianceOnly ? "variance" : "mean-variance";
}

inline std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::Global: return "global";
        case Algorithm::GlobalPlus: return "global-plus";
        case Algorithm::Local: return "local";
        case Algorithm::BruteForce: return "brute";
    }
    return "global";
}

inline ObjectiveMode parse_objective_mode(const std::string& text) {
    if (text == "mean-variance") return ObjectiveMode::MeanVariance;
    if (text == "variance") return ObjectiveMode::VarianceOnly;
    throw std::invalid_argument("unknown objective mode '" + text +
                                "' (expected mean-variance or variance)");
}

inline Algorithm parse_algorithm(const std::string& text) {
    if (text == "global") return Algorithm::Global;
    if (text == "global-plus") return Algorithm::GlobalPlus;
    if (text == "local") return Algorithm::Local;
    if (text == "brute") return Algorithm::BruteForce;
    throw std::invalid_argument("unknown algorithm '" + text +
                                "' (expected global, global-plus, local, or brute)");
}

/// Serializes an Mdp losslessly; doubles round-trip exactly through JSON.
inline nlohmann::json mdp_to_json(const Mdp& mdp) {
    nlohmann::json doc;
    doc["states"] = mdp.state_count;
    doc["actions_per_state"] = mdp.action_counts;
    doc["transitions"] = mdp.transition;
    doc["rewards"] = mdp.reward;
    doc["beta"] = mdp.beta;
    if (!mdp.name.empty()) doc["name"] = mdp.name;
    return doc;
}

/// Parses and validates an Mdp document. Transition rows must sum to one
/// within 1e-9 and are renormalized exactly afterwards. Any shape or value
/// problem raises std::invalid_argument.
inline Mdp mdp_from_json(const nlohmann::json& doc) {
    Mdp mdp;
    try {
        mdp.state_count = doc.at("states").get<int>();
        // actions_per_state entries are either counts or explicit dense
        // action lists [0..k-1]; both reduce to a count.
        for (const auto& entry : doc.at("actions_per_state")) {
            if (entry.is_array()) {
                const auto ids = entry.get<std::vector<int>>();
                for (std::size_t a = 0; a < ids.size(); ++a)
                    if (ids[a] != static_cast<int>(a))
                        throw std::invalid_argument(
                            "mdp document: action lists must be dense 0..k-1");
                mdp.action_counts.push_back(static_cast<int>(ids.size()));
            } else {
                mdp.action_counts.push_back(entry.get<int>());
            }
        }
        mdp.transition = doc.at("transitions").get<std::vector<std::vector<std::vector<double>>>>();
        mdp.reward = doc.at("rewards").get<std::vector<std::vector<double>>>();
        mdp.beta = doc.value("beta", 1.0);
        mdp.name = doc.value("name", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("mdp document: ") + e.what());
    }
    validate(mdp, 1e-9);
    // Rows already exact to rounding noise are left untouched so that
    // documents round-trip bit for bit; sloppier rows get renormalized.
    for (auto& rows : mdp.transition)
        for (auto& row : rows) {
            double sum = 0.0;
            for (double p : row) sum += p;
            if (std::abs(sum - 1.0) <= 1e-13) continue;
            for (double& p : row) p /= sum;
        }
    return mdp;
}

inline Mdp load_mdp(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("mdp document: ") + e.what());
    }
    return mdp_from_json(doc);
}

inline Mdp load_mdp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    return load_mdp(in);
}

inline void save_mdp_file(const Mdp& mdp, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << mdp_to_json(mdp).dump(2) << '\n';
}

/// Serializes a solve report. Numeric fields are rounded to 12 significant
/// digits; iteration cut fields appear only when the iteration removed
/// something.
inline nlohmann::json report_to_json(const SolveReport& report) {
    nlohmann::json doc;
    doc["objective_mode"] = to_string(report.mode);
    doc["algorithm"] = to_string(report.algorithm);
    doc["eta_star"] = round_sig(report.eta_star);
    doc["mu_star"] = round_sig(report.mu_star);
    doc["sigma_star"] = round_sig(report.sigma_star);
    doc["y_star"] = round_sig(report.y_star);
    doc["policy"] = report.policy;
    doc["aux_solves"] = report.aux_solves;
    doc["termination"] = report.termination;
    doc["wall_time_ms"] = round_sig(report.wall_time_ms);
    doc["iterations"] = nlohmann::json::array();
    for (const IterationRecord& rec : report.trace) {
        nlohmann::json it;
        it["index"] = rec.index;
        it["y"] = round_sig(rec.y);
        it["policy"] = rec.policy;
        it["mu"] = round_sig(rec.mean);
        it["sigma"] = round_sig(rec.variance);
        it["eta"] = round_sig(rec.objective);
        it["best_eta"] = round_sig(rec.best_objective);
        if (std::isfinite(rec.cut_lo) && std::isfinite(rec.cut_hi)) {
            it["cut"] = {round_sig(rec.cut_lo), round_sig(rec.cut_hi)};
        }
        if (std::isfinite(rec.tail_cut)) it["tail_cut"] = round_sig(rec.tail_cut);
        doc["iterations"].push_back(std::move(it));
    }
    return doc;
}

/// Curve samples as CSV: y,eta_tilde_star.
inline void write_curve_csv(std::ostream& out,
                            const std::vector<std::pair<double, double>>& samples) {
    out << "y,eta_tilde_star\n";
    for (const auto& [y, value] : samples)
        out << format_sig(y) << ',' << format_sig(value) << '\n';
}

/// Curve segments as CSV: k,y_lo,y_hi,eta_k,mu_k.
inline void write_segments_csv(std::ostream& out, const std::vector<CurveSegment>& segments) {
    out << "k,y_lo,y_hi,eta_k,mu_k\n";
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const CurveSegment& seg = segments[k];
        out << k << ',' << format_sig(seg.lo) << ',' << format_sig(seg.hi) << ','
            << format_sig(seg.objective) << ',' << format_sig(seg.mean) << '\n';
    }
}

/// Fixed points as CSV: y,kind.
inline void write_fixed_points_csv(std::ostream& out, const std::vector<FixedPoint>& points) {
    out << "y,kind\n";
    for (const FixedPoint& fp : points)
        out << format_sig(fp.y) << ','
            << (fp.kind == FixedPointKind::LocalOptimum ? "local-optimum" : "non-optimum")
            << '\n';
}

/// Frontier as CSV: beta,mu,sigma,eta.
inline void write_frontier_csv(std::ostream& out, const std::vector<FrontierPoint>& points) {
    out << "beta,mu,sigma,eta\n";
    for (const FrontierPoint& fp : points)
        out << format_sig(fp.beta) << ',' << format_sig(fp.mean) << ','
            << format_sig(fp.variance) << ',' << format_sig(fp.eta) << '\n';
}

}  // namespace mvmdp

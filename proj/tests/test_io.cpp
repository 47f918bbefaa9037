#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <mvmdp/global_search.hpp>
#include <mvmdp/inventory.hpp>
#include <mvmdp/io.hpp>

#include "support.hpp"

using namespace mvmdp;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("significant-digit rounding") {
    CHECK(format_sig(0.1 + 0.2) == "0.3");
    CHECK(round_sig(1.0 / 3.0) == Catch::Approx(0.333333333333).epsilon(1e-13));
    CHECK(round_sig(0.0) == 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(round_sig(inf) == inf);
}

TEST_CASE("mode and algorithm names round trip") {
    for (ObjectiveMode mode : {ObjectiveMode::MeanVariance, ObjectiveMode::VarianceOnly})
        CHECK(parse_objective_mode(to_string(mode)) == mode);
    for (Algorithm alg :
         {Algorithm::Global, Algorithm::GlobalPlus, Algorithm::Local, Algorithm::BruteForce})
        CHECK(parse_algorithm(to_string(alg)) == alg);
    CHECK(to_string(Algorithm::BruteForce) == "brute");
    CHECK(to_string(ObjectiveMode::VarianceOnly) == "variance");
    CHECK_THROWS_AS(parse_algorithm("simplex"), std::invalid_argument);
    CHECK_THROWS_AS(parse_objective_mode("sharpe"), std::invalid_argument);
}

TEST_CASE("mdp documents round trip bit-exactly") {
    const Mdp original = support::random_mdp(901, 5, 4, 2.5);
    const auto path = temp_path("mvmdp_roundtrip.json");
    save_mdp_file(original, path.string());
    const Mdp loaded = load_mdp_file(path.string());
    std::filesystem::remove(path);

    REQUIRE(loaded.state_count == original.state_count);
    REQUIRE(loaded.action_counts == original.action_counts);
    CHECK(loaded.beta == original.beta);
    CHECK(loaded.name == original.name);
    for (int i = 0; i < original.state_count; ++i)
        for (int a = 0; a < original.actions(i); ++a) {
            CHECK(loaded.reward[i][a] == original.reward[i][a]);
            for (int j = 0; j < original.state_count; ++j)
                CHECK(loaded.transition[i][a][j] == original.transition[i][a][j]);
        }
}

TEST_CASE("document defaults and alternate action encoding") {
    std::istringstream doc(R"({
      "states": 2,
      "actions_per_state": [[0, 1], [0]],
      "transitions": [[[0.5, 0.5], [1.0, 0.0]], [[0.25, 0.75]]],
      "rewards": [[1.0, -1.0], [0.5]]
    })");
    const Mdp mdp = load_mdp(doc);
    CHECK(mdp.beta == 1.0);
    CHECK(mdp.name.empty());
    REQUIRE(mdp.action_counts == std::vector<int>{2, 1});
    CHECK(mdp.reward[0][1] == -1.0);
    CHECK(mdp.transition[1][0][1] == 0.75);
}

TEST_CASE("non-dense action lists are rejected") {
    std::istringstream doc(R"({
      "states": 1,
      "actions_per_state": [[0, 2]],
      "transitions": [[[1.0], [1.0]]],
      "rewards": [[1.0, 1.0]]
    })");
    CHECK_THROWS_AS(load_mdp(doc), std::invalid_argument);
}

TEST_CASE("row sums near one are renormalized, far ones rejected") {
    const char* tpl = R"({
      "states": 2,
      "actions_per_state": [1, 1],
      "transitions": [[[%.12f, 0.5]], [[0.5, 0.5]]],
      "rewards": [[0.0], [0.0]]
    })";
    char buffer[512];

    std::snprintf(buffer, sizeof buffer, tpl, 0.5 + 3e-10);
    std::istringstream ok(buffer);
    const Mdp mdp = load_mdp(ok);
    double sum = 0.0;
    for (double p : mdp.transition[0][0]) sum += p;
    CHECK(sum == Catch::Approx(1.0).margin(1e-12));
    CHECK_NOTHROW(validate(mdp));

    std::snprintf(buffer, sizeof buffer, tpl, 0.5 + 1e-6);
    std::istringstream bad(buffer);
    CHECK_THROWS_AS(load_mdp(bad), std::invalid_argument);
}

TEST_CASE("malformed documents raise input errors") {
    std::istringstream garbage("not json at all {{");
    CHECK_THROWS_AS(load_mdp(garbage), std::invalid_argument);
    std::istringstream missing(R"({"states": 2})");
    CHECK_THROWS_AS(load_mdp(missing), std::invalid_argument);
    std::istringstream negative(R"({
      "states": 1,
      "actions_per_state": [1],
      "transitions": {"0": {"0": [1.0]}},
      "rewards": {"0": [0.0]},
      "beta": -2.0
    })");
    CHECK_THROWS_AS(load_mdp(negative), std::invalid_argument);
}

TEST_CASE("solve reports serialize with rounded values and trace") {
    const Mdp mdp = build_inventory_mdp({});
    SolveOptions options;
    const SolveReport report = solve_global(mdp, options);
    const nlohmann::json doc = report_to_json(report);

    CHECK(doc.at("objective_mode") == "mean-variance");
    CHECK(doc.at("algorithm") == "global");
    CHECK(doc.at("eta_star").get<double>() == Catch::Approx(4.500).margin(1e-3));
    CHECK(doc.at("y_star").get<double>() == Catch::Approx(-3.891).margin(1e-3));
    CHECK(doc.at("aux_solves").get<std::uint64_t>() == report.aux_solves);
    CHECK(doc.at("policy").size() == 5);
    CHECK(doc.at("termination") == "domain exhausted");
    REQUIRE(doc.at("iterations").size() == report.trace.size());
    const auto& first = doc.at("iterations").at(0);
    CHECK(first.at("index") == 1);
    CHECK(first.contains("y"));
    CHECK(first.contains("eta"));
    CHECK(first.at("policy").size() == 5);
    // Rounding is applied on the way out.
    CHECK(doc.at("eta_star").get<double>() == round_sig(report.eta_star));
}

TEST_CASE("csv writers emit fixed headers") {
    std::ostringstream curve;
    write_curve_csv(curve, {{-1.0, 2.0}, {0.0, 1.5}});
    CHECK(curve.str().rfind("y,eta_tilde_star\n", 0) == 0);

    std::ostringstream segs;
    CurveSegment segment;
    segment.lo = -1.0;
    segment.hi = 1.0;
    segment.policy = {0};
    segment.objective = 2.0;
    segment.mean = 0.5;
    write_segments_csv(segs, {segment});
    CHECK(segs.str().rfind("k,y_lo,y_hi,eta_k,mu_k\n", 0) == 0);

    std::ostringstream fps;
    FixedPoint fp;
    fp.y = 0.5;
    fp.value = 2.0;
    fp.kind = FixedPointKind::LocalOptimum;
    fp.segment = 0;
    write_fixed_points_csv(fps, {fp});
    CHECK(fps.str() == "y,kind\n0.5,local-optimum\n");

    std::ostringstream frontier;
    FrontierPoint point;
    point.beta = 1.0;
    point.mean = 0.5;
    point.variance = 0.25;
    point.eta = -0.25;
    write_frontier_csv(frontier, {point});
    CHECK(frontier.str() == "beta,mu,sigma,eta\n1,0.5,0.25,-0.25\n");
}

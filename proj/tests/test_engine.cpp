#include <cmath>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "gridflow/engine.hpp"

using gridflow::Exchange;
using gridflow::Scenario;

TEST_CASE("metropolis weights on a 3-node line graph") {
    auto w = gridflow::metropolis_weights({{1}, {0, 2}, {1}});
    CHECK(w[0][0] == doctest::Approx(1.0 / 3.0));
    CHECK(w[1][0] == doctest::Approx(1.0 / 3.0));
    CHECK(w[1][1] == doctest::Approx(1.0 / 3.0));
    CHECK(w[2][0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("metropolis weights are symmetric on an irregular graph") {
    // star plus one extra edge: degrees 3, 2, 2, 1
    std::vector<std::vector<int>> nbrs = {{1, 2, 3}, {0, 2}, {0, 1}, {0}};
    auto w = gridflow::metropolis_weights(nbrs);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        for (std::size_t e = 0; e < nbrs[i].size(); ++e) {
            const int j = nbrs[i][e];
            double wji = 0.0;
            for (std::size_t e2 = 0; e2 < nbrs[static_cast<std::size_t>(j)].size();
                 ++e2) {
                if (nbrs[static_cast<std::size_t>(j)][e2] == static_cast<int>(i)) {
                    wji = w[static_cast<std::size_t>(j)][e2];
                }
            }
            CHECK(w[i][e] == doctest::Approx(wji));
        }
    }
    CHECK(w[0][0] == doctest::Approx(0.25));  // max(3, 2) + 1
    CHECK(w[0][2] == doctest::Approx(0.25));  // max(3, 1) + 1
}

TEST_CASE("zero-delay exchange delivers every round") {
    Exchange<int> ex({{1}, {0}}, 0, 0.0, 1);
    auto in = ex.step({10, 20});
    REQUIRE(in[0][0].has_value());
    CHECK(*in[0][0] == 20);
    CHECK(*in[1][0] == 10);
}

TEST_CASE("one-step delay holds messages for a round") {
    Exchange<int> ex({{1}, {0}}, 1, 0.0, 1);
    auto in1 = ex.step({1, 2});
    CHECK_FALSE(in1[0][0].has_value());
    auto in2 = ex.step({3, 4});
    REQUIRE(in2[0][0].has_value());
    CHECK(*in2[0][0] == 2);  // FIFO: the first round's message arrives first
    CHECK(*in2[1][0] == 1);
    auto in3 = ex.step({5, 6});
    CHECK(*in3[0][0] == 4);
}

TEST_CASE("certain drop means nothing ever arrives") {
    Exchange<int> ex({{1}, {0}}, 0, 1.0, 1);
    for (int k = 0; k < 10; ++k) {
        auto in = ex.step({k, -k});
        CHECK_FALSE(in[0][0].has_value());
        CHECK_FALSE(in[1][0].has_value());
    }
}

TEST_CASE("small scenario runs to completion and settles") {
    auto sc = gridflow::load_scenario_file(fixtures::data_path("scenario_small3.json"));
    gridflow::Engine engine(sc);
    auto trace = engine.run();
    REQUIRE(trace.records.size() == 1000);

    const auto& last = trace.records.back();
    CHECK(last.t == doctest::Approx(10.0));
    CHECK(std::abs(last.f - 60.0) < 0.05);
    // both multipliers near the equal-incremental-cost optimum 8.4
    for (double l : last.lambda) CHECK(std::abs(l - 8.4) < 0.5);
    CHECK(std::abs(last.lambda[0] - last.lambda[1]) < 0.1);
    // outputs near the optimum (200, 300) MW
    CHECK(std::abs(last.act_mw[0] - 200.0) < 30.0);
    CHECK(std::abs(last.act_mw[1] - 300.0) < 30.0);
    CHECK(last.cost > 0.0);
    // no line close to its 500 MW limit in this scenario
    for (int of : last.of) CHECK(of == 0);
}

TEST_CASE("estimated flows track the plant flows without meter noise") {
    auto sc = gridflow::load_scenario_file(fixtures::data_path("scenario_small3.json"));
    sc.duration_s = 2.0;
    gridflow::Engine engine(sc);
    auto trace = engine.run();
    const auto& last = trace.records.back();
    REQUIRE(last.est_flow.size() == last.flow.size());
    for (std::size_t u = 0; u < last.flow.size(); ++u) {
        CHECK(std::abs(last.est_flow[u] - last.flow[u]) < 0.05);
    }
}

TEST_CASE("identical scenarios give identical traces") {
    auto sc = gridflow::load_scenario_file(fixtures::data_path("scenario_small3.json"));
    sc.duration_s = 1.0;
    sc.load_sigma = 0.02;
    sc.meter_sigma = 0.01;
    gridflow::Engine a(sc);
    gridflow::Engine b(sc);
    auto ta = a.run();
    auto tb = b.run();
    REQUIRE(ta.records.size() == tb.records.size());
    for (std::size_t k = 0; k < ta.records.size(); ++k) {
        CHECK(ta.records[k].f == tb.records[k].f);
        CHECK(ta.records[k].cost == tb.records[k].cost);
        for (std::size_t i = 0; i < ta.records[k].lambda.size(); ++i) {
            CHECK(ta.records[k].lambda[i] == tb.records[k].lambda[i]);
        }
    }
}

TEST_CASE("line limit overrides are applied and validated") {
    auto sc = gridflow::load_scenario_file(fixtures::data_path("scenario_small3.json"));
    CHECK(sc.network.lines[0].limit == doctest::Approx(5.0));

    std::string doc = R"({
      "case_path": ")" + fixtures::data_path("case3bus.json") + R"(",
      "line_limits": {"1": 0.9}
    })";
    auto sc2 = gridflow::load_scenario(doc, ".");
    CHECK(sc2.network.lines[0].limit == doctest::Approx(0.9));

    std::string bad = R"({
      "case_path": ")" + fixtures::data_path("case3bus.json") + R"(",
      "line_limits": {"9": 0.9}
    })";
    CHECK_THROWS_AS(gridflow::load_scenario(bad, "."), gridflow::ConfigError);
}

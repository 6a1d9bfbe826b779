#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "gridflow/grid_matrices.hpp"
#include "gridflow/network.hpp"

using gridflow::Matrix;
using gridflow::Vector;

TEST_CASE("bundled 39-bus case loads with expected counts") {
    auto nc = gridflow::load_case_file(fixtures::data_path("case39.json"));
    CHECK(nc.n_buses() == 39);
    CHECK(nc.n_gens() == 10);
    CHECK(nc.loads.size() == 19);
    CHECK(nc.n_lines() == 46);
}

TEST_CASE("2-bus case loads") {
    auto nc = fixtures::two_bus();
    CHECK(nc.n_buses() == 2);
    CHECK(nc.n_lines() == 1);
}

TEST_CASE("zero reactance is rejected with the line named") {
    std::string doc = fixtures::kTwoBusJson;
    auto pos = doc.find("\"x\": 0.5");
    doc.replace(pos, 8, "\"x\": 0.0");
    CHECK_THROWS_WITH_AS(gridflow::load_case(doc),
                         doctest::Contains("line 1 (1-2)"), gridflow::CaseError);
}

TEST_CASE("disconnected power graph is rejected") {
    const char* doc = R"({
      "base_mva": 100.0, "buses": [1, 2, 3],
      "lines": [{"from": 1, "to": 2, "x": 0.5, "limit": 1.0}],
      "generators": [{"bus": 1, "alpha": 0, "beta": 8, "gamma": 0.01,
                      "pmin": 0, "pmax": 100, "lag_s": 0.5}],
      "loads": [],
      "comm": {"controllers": [], "meters": [[1,2],[2,3]]}
    })";
    CHECK_THROWS_WITH_AS(gridflow::load_case(doc),
                         doctest::Contains("power graph"), gridflow::CaseError);
}

TEST_CASE("duplicate generator on one bus is rejected") {
    const char* doc = R"({
      "base_mva": 100.0, "buses": [1, 2],
      "lines": [{"from": 1, "to": 2, "x": 0.5, "limit": 1.0}],
      "generators": [
        {"bus": 1, "alpha": 0, "beta": 8, "gamma": 0.01, "pmin": 0, "pmax": 100, "lag_s": 0.5},
        {"bus": 1, "alpha": 0, "beta": 8, "gamma": 0.01, "pmin": 0, "pmax": 100, "lag_s": 0.5}],
      "loads": [],
      "comm": {"controllers": [], "meters": [[1,2]]}
    })";
    CHECK_THROWS_WITH_AS(gridflow::load_case(doc),
                         doctest::Contains("more than one generator"),
                         gridflow::CaseError);
}

TEST_CASE("load schedule interpolates linearly between breakpoints") {
    gridflow::Load l;
    l.schedule = {{0.0, 100.0}, {5.0, 100.0}, {7.0, 200.0}};
    CHECK(l.mw_at(-1.0) == 100.0);
    CHECK(l.mw_at(3.0) == 100.0);
    CHECK(l.mw_at(6.0) == doctest::Approx(150.0));
    CHECK(l.mw_at(10.0) == 200.0);
}

TEST_CASE("2-bus matrices match the hand solution") {
    auto nc = fixtures::two_bus();
    auto gm = gridflow::build_matrices(nc);
    CHECK(gm.Bfull(0, 0) == doctest::Approx(2.0));
    CHECK(gm.Bfull(0, 1) == doctest::Approx(-2.0));
    CHECK(gm.Bfull(1, 0) == doctest::Approx(-2.0));
    CHECK(gm.Bfull(1, 1) == doctest::Approx(2.0));
    REQUIRE(gm.T.rows() == 1);
    CHECK(gm.T(0, 0) == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(gm.T(0, 1) == doctest::Approx(0.25).epsilon(1e-12));

    // P = [-1, +1]: theta2 = 0.5, flow 1->2 = (0 - 0.5)/0.5 = -1
    Vector p(2);
    p << -1, 1;
    Vector theta = gm.T * p;
    CHECK(theta(0) == doctest::Approx(0.5).epsilon(1e-12));
    Vector pf = gm.Hflow * theta;
    CHECK(pf(0) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("susceptance row sums vanish and pseudoinverse round-trips") {
    auto nc = gridflow::load_case_file(fixtures::data_path("case39.json"));
    auto gm = gridflow::build_matrices(nc);
    CHECK(gm.Bfull.rowwise().sum().cwiseAbs().maxCoeff() < 1e-9);

    std::mt19937 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Vector p(gm.n_buses());
        for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = n(rng);
        p.array() -= p.mean();  // balanced injection
        Vector theta = gm.T * p;
        Vector full_theta(gm.n_buses());
        full_theta << 0.0, theta;
        CHECK((gm.Bfull * full_theta - p).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("DC KCL: signed incident flows equal the bus injection") {
    auto nc = gridflow::load_case_file(fixtures::data_path("case39.json"));
    auto gm = gridflow::build_matrices(nc);
    std::mt19937 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    Vector p(gm.n_buses());
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = n(rng);
    p.array() -= p.mean();
    Vector pf = gm.HT * p;

    Vector net = Vector::Zero(gm.n_buses());
    for (std::size_t u = 0; u < nc.lines.size(); ++u) {
        net(nc.bus_index(nc.lines[u].from)) += pf(static_cast<Eigen::Index>(u));
        net(nc.bus_index(nc.lines[u].to)) -= pf(static_cast<Eigen::Index>(u));
    }
    CHECK((net - p).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("Tg/TL columns partition T when bus roles are disjoint") {
    auto nc = gridflow::load_case_file(fixtures::data_path("case3bus.json"));
    auto gm = gridflow::build_matrices(nc);
    std::set<int> seen;
    for (int c : gm.gen_cols) CHECK(seen.insert(c).second);
    for (int c : gm.load_cols) CHECK(seen.insert(c).second);
    CHECK(seen.size() == nc.n_buses());
}

TEST_CASE("a load on a generator bus gets its own column") {
    auto nc = gridflow::load_case_file(fixtures::data_path("case39.json"));
    auto gm = gridflow::build_matrices(nc);
    // bus 39 hosts both a generator and a load
    const int b39 = nc.bus_index(39);
    CHECK(std::count(gm.gen_cols.begin(), gm.gen_cols.end(), b39) == 1);
    CHECK(std::count(gm.load_cols.begin(), gm.load_cols.end(), b39) == 1);
    CHECK(gm.gen_cols.size() + gm.load_cols.size() == nc.n_buses() + 1);
}

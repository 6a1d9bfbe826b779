#include <random>

#include "doctest.h"
#include "gridflow/ded.hpp"

using gridflow::DedController;
using gridflow::Generator;

namespace {

Generator make_gen(double beta, double gamma, double pmin = 0.0,
                   double pmax = 1000.0) {
    Generator g;
    g.bus = 1;
    g.beta = beta;
    g.gamma = gamma;
    g.pmin = pmin;
    g.pmax = pmax;
    return g;
}

}  // namespace

TEST_CASE("two symmetric agents meet in the middle") {
    std::vector<Generator> gens = {make_gen(8.0, 0.01), make_gen(8.0, 0.01)};
    DedController a(0, gens, 1.0, 40.0, 10.0, 60.0, 9.0);
    DedController b(1, gens, 1.0, 40.0, 10.0, 60.0, 11.0);
    a.consensus_step({11.0}, {0.5}, 60.0);
    b.consensus_step({9.0}, {0.5}, 60.0);
    CHECK(a.lambda() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(b.lambda() == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("isolated agent at nominal frequency is a fixed point") {
    std::vector<Generator> gens = {make_gen(8.0, 0.01)};
    DedController a(0, gens, 0.01, 40.0, 10.0, 60.0, 9.5);
    const double d = a.consensus_step({}, {}, 60.0);
    CHECK(d == 0.0);
    CHECK(a.lambda() == 9.5);
}

TEST_CASE("under-frequency raises the multiplier") {
    std::vector<Generator> gens = {make_gen(8.0, 0.01)};
    DedController a(0, gens, 0.01, 40.0, 10.0, 60.0, 9.5);
    const double d = a.consensus_step({}, {}, 59.9);
    CHECK(d > 0.0);
}

TEST_CASE("reference from quadratic cost parameters") {
    Generator g = make_gen(7.8, 0.00346);
    CHECK(DedController::reference_from_lambda(9.5, g) ==
          doctest::Approx((9.5 - 7.8) / 0.00692));
}

TEST_CASE("reference clamps at both limits") {
    Generator g = make_gen(8.0, 0.001, 50.0, 200.0);
    CHECK(DedController::reference_from_lambda(8.0, g) == 50.0);   // zero point
    CHECK(DedController::reference_from_lambda(100.0, g) == 200.0);
}

TEST_CASE("reference is always within limits (random sweep)") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> lam(-50.0, 50.0);
    Generator g = make_gen(8.0, 0.004, 20.0, 300.0);
    for (int i = 0; i < 1000; ++i) {
        const double r = DedController::reference_from_lambda(lam(rng), g);
        CHECK(r >= g.pmin);
        CHECK(r <= g.pmax);
    }
}

TEST_CASE("predicted updates: interior scaling and clamp masking") {
    std::vector<Generator> gens = {make_gen(7.8, 0.00346),
                                   make_gen(8.0, 0.002, 0.0, 100.0)};
    DedController a(0, gens, 0.01, 40.0, 10.0, 60.0, 9.0);

    CHECK(a.predict_gen_updates(0.0, {50.0, 50.0}).norm() == 0.0);

    auto dp = a.predict_gen_updates(0.00692, {245.0, 50.0});
    CHECK(dp(0) == doctest::Approx(1.0).epsilon(1e-12));

    // generator 2 pinned at pmax: no predicted motion
    auto dp2 = a.predict_gen_updates(0.5, {245.0, 100.0});
    CHECK(dp2(1) == 0.0);
}

TEST_CASE("symmetric round conserves the multiplier sum") {
    std::vector<Generator> gens(4, make_gen(8.0, 0.005));
    const double tau = 0.1;
    std::vector<DedController> agents;
    std::vector<double> lambdas = {8.5, 9.2, 10.4, 11.1};
    for (int i = 0; i < 4; ++i) {
        agents.emplace_back(i, gens, tau, 40.0, 10.0, 60.0, lambdas[i]);
    }
    // ring with symmetric weight 0.4
    const std::vector<std::vector<int>> nbrs = {{1, 3}, {0, 2}, {1, 3}, {0, 2}};
    for (int round = 0; round < 25; ++round) {
        std::vector<double> prev;
        for (auto& a : agents) prev.push_back(a.lambda());
        double spread_before =
            *std::max_element(prev.begin(), prev.end()) -
            *std::min_element(prev.begin(), prev.end());
        for (int i = 0; i < 4; ++i) {
            std::vector<double> nl;
            for (int j : nbrs[i]) nl.push_back(prev[static_cast<std::size_t>(j)]);
            agents[static_cast<std::size_t>(i)].consensus_step(nl, {0.4, 0.4}, 60.0);
        }
        double sum = 0.0, mx = -1e18, mn = 1e18;
        for (auto& a : agents) {
            sum += a.lambda();
            mx = std::max(mx, a.lambda());
            mn = std::min(mn, a.lambda());
        }
        CHECK(sum == doctest::Approx(8.5 + 9.2 + 10.4 + 11.1).epsilon(1e-12));
        CHECK(mx - mn <= spread_before + 1e-12);  // contraction, tau*sum(w) < 1
    }
}

#include "gridflow/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

namespace gridflow {

std::vector<std::vector<double>> metropolis_weights(
    const std::vector<std::vector<int>>& neighbors) {
    std::vector<std::vector<double>> w(neighbors.size());
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        for (int j : neighbors[i]) {
            const std::size_t dmax =
                std::max(neighbors[i].size(), neighbors[static_cast<std::size_t>(j)].size());
            w[i].push_back(1.0 / (1.0 + static_cast<double>(dmax)));
        }
    }
    return w;
}

namespace {

std::vector<std::vector<int>> adjacency_from_edges(
    std::size_t n, const std::vector<std::pair<int, int>>& edges,
    const std::map<int, int>& id_to_index, const char* what) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& [a, b] : edges) {
        auto ia = id_to_index.find(a);
        auto ib = id_to_index.find(b);
        if (ia == id_to_index.end() || ib == id_to_index.end()) {
            throw ConfigError(std::string(what) + " comm edge (" +
                              std::to_string(a) + "," + std::to_string(b) +
                              ") references an unknown node");
        }
        if (ia->second == ib->second) continue;
        adj[static_cast<std::size_t>(ia->second)].push_back(ib->second);
        adj[static_cast<std::size_t>(ib->second)].push_back(ia->second);
    }
    return adj;
}

}  // namespace

Engine::Engine(const Scenario& scenario)
    : sc_(scenario),
      gm_(build_matrices(scenario.network, scenario.meter_sigma)),
      plant_(scenario.network, gm_, scenario.plant_params(), scenario.seed),
      meter_bus_({}, 0, 0.0, 0),
      wls_(gm_.Hobs, gm_.Rdiag),
      meas_rng_(scenario.seed ^ 0x9e3779b97f4a7c15ull),
      ctrl_bus_({}, 0, 0.0, 0) {
    const NetworkCase& nc = sc_.network;
    const auto nb = static_cast<std::size_t>(nc.n_buses());
    const auto ng = nc.n_gens();
    const auto ml = static_cast<Eigen::Index>(nc.n_lines());
    const auto nl = static_cast<Eigen::Index>(gm_.load_cols.size());

    limits_pu_.resize(ml);
    for (Eigen::Index u = 0; u < ml; ++u) limits_pu_(u) = nc.lines[u].limit;

    // Meters: one per bus, indexed like the bus list.
    std::map<int, int> bus_to_idx;
    for (std::size_t i = 0; i < nb; ++i) bus_to_idx[nc.buses[i]] = static_cast<int>(i);
    auto meter_adj = adjacency_from_edges(nb, nc.comm_meters, bus_to_idx, "meter");
    meter_weights_ = metropolis_weights(meter_adj);
    meter_bus_ = Exchange<Vector>(meter_adj, sc_.delay_steps, sc_.drop_prob,
                                  sc_.seed ^ 0xa5a5a5a5ull);
    for (std::size_t i = 0; i < nb; ++i) {
        // tau absorbed into the Metropolis weights
        meters_.emplace_back(static_cast<int>(i), static_cast<Eigen::Index>(nb), 1.0);
    }

    // Controllers: one per generator.
    std::map<int, int> gbus_to_idx;
    for (std::size_t g = 0; g < ng; ++g) gbus_to_idx[nc.generators[g].bus] = static_cast<int>(g);
    auto ctrl_adj =
        adjacency_from_edges(ng, nc.comm_controllers, gbus_to_idx, "controller");
    ctrl_weights_ = metropolis_weights(ctrl_adj);
    // tau absorbed into the weights, like the meter side, so one
    // consensus round mixes a Metropolis step regardless of step size
    for (auto& row : ctrl_weights_) {
        for (double& w : row) w /= sc_.tau;
    }
    ctrl_bus_ = Exchange<double>(ctrl_adj, sc_.delay_steps, sc_.drop_prob,
                                 sc_.seed ^ 0x5a5a5a5aull);

    Vector init_refs_pu(static_cast<Eigen::Index>(ng));
    Vector init_refs_mw(static_cast<Eigen::Index>(ng));
    for (std::size_t g = 0; g < ng; ++g) {
        controllers_.emplace_back(static_cast<int>(g), nc.generators, sc_.tau,
                                  sc_.kp, sc_.ki, sc_.f0, sc_.lambda0);
        const double r =
            DedController::reference_from_lambda(sc_.lambda0, nc.generators[g]);
        init_refs_mw(static_cast<Eigen::Index>(g)) = r;
        init_refs_pu(static_cast<Eigen::Index>(g)) = r / nc.base_mva;

        const int gbus = nc.generators[g].bus;
        const int mbus = sc_.attachments.count(gbus) ? sc_.attachments.at(gbus) : gbus;
        attached_meter_.push_back(bus_to_idx.at(mbus));
    }
    plant_.set_gen_outputs(init_refs_pu);
    plant_.refresh();

    for (std::size_t g = 0; g < ng; ++g) {
        ctrl_refs_mw_.push_back(init_refs_mw);
        ctrl_est_flow_.push_back(Vector::Zero(ml));
        ctrl_prev_slot_inj_.push_back(Vector::Zero(nl));
        std::vector<LoadDeltaModel> models;
        for (Eigen::Index s = 0; s < nl; ++s) {
            models.emplace_back(sc_.ar_window, sc_.ar_refit);
        }
        ctrl_load_models_.push_back(std::move(models));
        ctrl_penalty_.emplace_back(ml, sc_.kfp, sc_.kfi, sc_.tau);
    }

    // Load slots on generator buses mix generation into the metered
    // injection; controllers treat their variation as zero.
    std::set<int> gcols(gm_.gen_cols.begin(), gm_.gen_cols.end());
    slot_is_gen_.assign(gm_.load_cols.size(), 0);
    for (std::size_t s = 0; s < gm_.load_cols.size(); ++s) {
        if (gcols.count(gm_.load_cols[s])) slot_is_gen_[s] = 1;
    }

    // Let the estimators settle on the initial operating point before
    // the first control action, so early constraint decisions do not
    // act on half-propagated measurement vectors.
    const Vector init_inj = plant_.injections();
    for (int round = 0; round < 1000; ++round) {
        std::vector<Vector> primed(nb);
        for (std::size_t i = 0; i < nb; ++i) {
            primed[i] = meters_[i].primed(init_inj(static_cast<Eigen::Index>(i)));
        }
        for (std::size_t i = 0; i < nb; ++i) {
            const auto& nbrs = meter_bus_.neighbors_of(i);
            std::vector<Vector> zs;
            std::vector<double> ws;
            for (std::size_t e = 0; e < nbrs.size(); ++e) {
                zs.push_back(primed[static_cast<std::size_t>(nbrs[e])]);
                ws.push_back(meter_weights_[i][e]);
            }
            meters_[i].dse_step(zs, ws, init_inj(static_cast<Eigen::Index>(i)));
        }
    }
    for (std::size_t c = 0; c < ng; ++c) {
        const DseMeter& meter = meters_[static_cast<std::size_t>(attached_meter_[c])];
        Vector inj_est = gm_.Hobs * wls_.estimate(meter.z());
        for (std::size_t s = 0; s < gm_.load_cols.size(); ++s) {
            ctrl_prev_slot_inj_[c](static_cast<Eigen::Index>(s)) =
                inj_est(gm_.load_cols[s]);
        }
    }
}

void Engine::step() {
    const NetworkCase& nc = sc_.network;
    const auto nb = meters_.size();
    const auto ng = controllers_.size();
    const auto ml = static_cast<Eigen::Index>(nc.n_lines());
    const auto nl = static_cast<Eigen::Index>(gm_.load_cols.size());

    // --- meter round ---------------------------------------------------
    Vector true_inj = plant_.injections();
    std::vector<double> local_z(nb);
    std::normal_distribution<double> noise(0.0, sc_.meter_sigma);
    for (std::size_t i = 0; i < nb; ++i) {
        local_z[i] = true_inj(static_cast<Eigen::Index>(i));
        if (sc_.meter_sigma > 0) local_z[i] += noise(meas_rng_);
    }
    std::vector<Vector> meter_out(nb);
    for (std::size_t i = 0; i < nb; ++i) meter_out[i] = meters_[i].primed(local_z[i]);
    auto meter_in = meter_bus_.step(meter_out);
    for (std::size_t i = 0; i < nb; ++i) {
        std::vector<Vector> zs;
        std::vector<double> ws;
        for (std::size_t e = 0; e < meter_in[i].size(); ++e) {
            if (meter_in[i][e]) {
                zs.push_back(std::move(*meter_in[i][e]));
                ws.push_back(meter_weights_[i][e]);
            }
        }
        meters_[i].dse_step(zs, ws, local_z[i]);
    }

    // --- controller round ----------------------------------------------
    std::vector<double> lambda_out(ng);
    for (std::size_t c = 0; c < ng; ++c) lambda_out[c] = controllers_[c].lambda();
    auto lambda_in = ctrl_bus_.step(lambda_out);
    const double f_meas = plant_.frequency();

    ConstraintMode agg_mode = ConstraintMode::Normal;
    std::vector<int> agg_of(static_cast<std::size_t>(ml), 0);

    for (std::size_t c = 0; c < ng; ++c) {
        // fresh state estimate from the attached meter
        const DseMeter& meter = meters_[static_cast<std::size_t>(attached_meter_[c])];
        Vector theta = wls_.estimate(meter.z());
        ctrl_est_flow_[c] = flows_from_states(theta, gm_.Hflow);
        Vector inj_est = gm_.Hobs * theta;

        std::vector<double> nls;
        std::vector<double> nws;
        for (std::size_t e = 0; e < lambda_in[c].size(); ++e) {
            if (lambda_in[c][e]) {
                nls.push_back(*lambda_in[c][e]);
                nws.push_back(ctrl_weights_[c][e]);
            }
        }
        const double d_lambda = controllers_[c].consensus_step(nls, nws, f_meas);

        std::vector<double> refs(ctrl_refs_mw_[c].data(),
                                 ctrl_refs_mw_[c].data() + ctrl_refs_mw_[c].size());
        Vector dpg_pu =
            controllers_[c].predict_gen_updates(d_lambda, refs) / nc.base_mva;

        Vector dpl_pred = Vector::Zero(nl);
        for (Eigen::Index s = 0; s < nl; ++s) {
            if (slot_is_gen_[static_cast<std::size_t>(s)]) continue;
            const double cur = inj_est(gm_.load_cols[static_cast<std::size_t>(s)]);
            ctrl_load_models_[c][static_cast<std::size_t>(s)].push(
                cur - ctrl_prev_slot_inj_[c](s));
            ctrl_prev_slot_inj_[c](s) = cur;
            dpl_pred(s) = ctrl_load_models_[c][static_cast<std::size_t>(s)].predict();
        }

        ConstrainResult res{dpg_pu, ConstraintMode::Normal};
        if (sc_.constraint_enabled) {
            Vector pred = predict_line_flows(ctrl_est_flow_[c], dpg_pu, dpl_pred,
                                             gm_.Hflow, gm_.Tg, gm_.TL);
            OverflowFlags predicted = check_overflow(pred, limits_pu_, sc_.rho);
            OverflowFlags live = check_overflow(ctrl_est_flow_[c], limits_pu_, 1.0);
            res = constrain_step(dpg_pu, predicted, live, dpl_pred,
                                 ctrl_est_flow_[c], limits_pu_, gm_.Hflow, gm_.Tg,
                                 gm_.TL, ctrl_penalty_[c], sc_.penalty_enabled);
            for (Eigen::Index u = 0; u < ml; ++u) {
                if (predicted.of[static_cast<std::size_t>(u)] ||
                    (sc_.penalty_enabled && live.of[static_cast<std::size_t>(u)])) {
                    agg_of[static_cast<std::size_t>(u)] = 1;
                }
            }
        }
        if (static_cast<int>(res.mode) > static_cast<int>(agg_mode)) {
            agg_mode = res.mode;
        }

        ctrl_refs_mw_[c] += res.dpg_star * nc.base_mva;
        for (Eigen::Index g = 0; g < ctrl_refs_mw_[c].size(); ++g) {
            const Generator& gen = nc.generators[static_cast<std::size_t>(g)];
            ctrl_refs_mw_[c](g) = std::clamp(ctrl_refs_mw_[c](g), gen.pmin, gen.pmax);
        }
    }

    // --- plant round ---------------------------------------------------
    Vector refs_pu(static_cast<Eigen::Index>(ng));
    for (std::size_t c = 0; c < ng; ++c) {
        refs_pu(static_cast<Eigen::Index>(c)) =
            ctrl_refs_mw_[c](static_cast<Eigen::Index>(c)) / nc.base_mva;
    }
    plant_.advance(refs_pu);

    // --- record --------------------------------------------------------
    TraceRecord rec;
    rec.t = plant_.time();
    rec.f = plant_.frequency();
    for (std::size_t c = 0; c < ng; ++c) {
        rec.lambda.push_back(controllers_[c].lambda());
        rec.ref_mw.push_back(ctrl_refs_mw_[c](static_cast<Eigen::Index>(c)));
        rec.act_mw.push_back(plant_.gen_outputs()(static_cast<Eigen::Index>(c)) *
                             nc.base_mva);
    }
    for (Eigen::Index u = 0; u < ml; ++u) {
        rec.flow.push_back(plant_.line_flows()(u));
        rec.est_flow.push_back(ctrl_est_flow_[0](u));
    }
    rec.of = agg_of;
    rec.mode = agg_mode;
    double cost = 0.0;
    for (std::size_t g = 0; g < ng; ++g) {
        const Generator& gen = nc.generators[g];
        const double p = rec.act_mw[g];
        cost += gen.alpha + gen.beta * p + gen.gamma * p * p;
    }
    rec.cost = cost;
    trace_.records.push_back(std::move(rec));
}

Trace Engine::run() {
    const auto n_steps =
        static_cast<std::size_t>(std::llround(sc_.duration_s / sc_.tau));
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < n_steps; ++k) step();
    const auto t1 = std::chrono::steady_clock::now();
    if (n_steps > 0) {
        trace_.mean_step_seconds =
            std::chrono::duration<double>(t1 - t0).count() /
            static_cast<double>(n_steps);
    }
    return std::move(trace_);
}

}  // namespace gridflow

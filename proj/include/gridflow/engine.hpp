#pragma once

#include <deque>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gridflow/constraint.hpp"
#include "gridflow/ded.hpp"
#include "gridflow/dse.hpp"
#include "gridflow/forecast.hpp"
#include "gridflow/grid_matrices.hpp"
#include "gridflow/plant.hpp"
#include "gridflow/scenario.hpp"

namespace gridflow {

// Synchronous message exchange over a fixed undirected graph, with an
// optional per-message delivery delay (FIFO per directed edge) and a
// seeded drop probability. Agents never see same-round messages.
template <typename T>
class Exchange {
public:
    Exchange(std::vector<std::vector<int>> neighbors, int delay,
             double drop_prob, std::uint64_t seed)
        : neighbors_(std::move(neighbors)),
          delay_(delay),
          drop_prob_(drop_prob),
          rng_(seed) {
        queues_.resize(neighbors_.size());
        for (std::size_t i = 0; i < neighbors_.size(); ++i) {
            queues_[i].resize(neighbors_[i].size());
        }
    }

    // Feed every node's outbox; returns per node the delivered message
    // from each neighbor (nullopt until the pipeline fills or when
    // dropped), aligned with the neighbor list.
    std::vector<std::vector<std::optional<T>>> step(
        const std::vector<T>& outbox) {
        std::bernoulli_distribution drop(drop_prob_);
        std::vector<std::vector<std::optional<T>>> inboxes(neighbors_.size());
        for (std::size_t i = 0; i < neighbors_.size(); ++i) {
            inboxes[i].resize(neighbors_[i].size());
            for (std::size_t e = 0; e < neighbors_[i].size(); ++e) {
                const int j = neighbors_[i][e];
                const bool dropped = drop_prob_ > 0 && drop(rng_);
                if (!dropped) {
                    queues_[i][e].push_back(outbox[static_cast<std::size_t>(j)]);
                }
                if (static_cast<int>(queues_[i][e].size()) > delay_) {
                    inboxes[i][e] = std::move(queues_[i][e].front());
                    queues_[i][e].pop_front();
                }
            }
        }
        return inboxes;
    }

    const std::vector<int>& neighbors_of(std::size_t i) const {
        return neighbors_[i];
    }

private:
    std::vector<std::vector<int>> neighbors_;
    int delay_;
    double drop_prob_;
    std::mt19937_64 rng_;
    std::vector<std::vector<std::deque<T>>> queues_;  // [node][edge]
};

// Metropolis weights over an adjacency list: w_ij = 1/(1+max(deg_i, deg_j)).
std::vector<std::vector<double>> metropolis_weights(
    const std::vector<std::vector<int>>& neighbors);

struct TraceRecord {
    double t = 0.0;
    double f = 0.0;
    std::vector<double> lambda;
    std::vector<double> ref_mw;
    std::vector<double> act_mw;
    std::vector<double> flow;      // plant truth, p.u.
    std::vector<double> est_flow;  // first controller's attached meter
    std::vector<int> of;           // any controller flagged the line
    ConstraintMode mode = ConstraintMode::Normal;
    double cost = 0.0;  // $/h at actual outputs
};

struct Trace {
    std::vector<TraceRecord> records;
    double mean_step_seconds = 0.0;
};

// Runs a scenario to completion: one synchronous round per tau. Per
// round the meters propagate and estimate, the controllers run
// dispatch consensus, forecasting, and the constraint layer, and the
// plant advances. Fully deterministic for a fixed scenario.
class Engine {
public:
    explicit Engine(const Scenario& scenario);

    Trace run();

private:
    void step();

    const Scenario& sc_;
    GridMatrices gm_;
    Plant plant_;
    Vector limits_pu_;

    std::vector<DseMeter> meters_;
    std::vector<std::vector<double>> meter_weights_;
    Exchange<Vector> meter_bus_;
    WlsEstimator wls_;
    std::mt19937_64 meas_rng_;

    std::vector<DedController> controllers_;
    std::vector<std::vector<double>> ctrl_weights_;
    Exchange<double> ctrl_bus_;
    std::vector<int> attached_meter_;           // controller -> meter index
    std::vector<Vector> ctrl_refs_mw_;          // per controller, all n_g
    std::vector<Vector> ctrl_est_flow_;         // per controller, m_l, p.u.
    std::vector<Vector> ctrl_prev_slot_inj_;    // per controller, n_L, p.u.
    std::vector<std::vector<LoadDeltaModel>> ctrl_load_models_;
    std::vector<PenaltyState> ctrl_penalty_;
    std::vector<char> slot_is_gen_;  // load slot sits on a generator bus

    Trace trace_;
};

}  // namespace gridflow

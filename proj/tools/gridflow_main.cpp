#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gridflow/engine.hpp"
#include "gridflow/oracle.hpp"
#include "gridflow/scenario.hpp"
#include "gridflow/trace_io.hpp"

namespace {

int log_level() {
    const char* v = std::getenv("GRIDFLOW_LOG");
    return v ? std::atoi(v) : 0;
}

void apply_overrides(gridflow::Scenario& sc, bool has_seed, std::uint64_t seed,
                     bool has_duration, double duration, bool disable_constraint,
                     bool disable_penalty, bool has_noise, double noise) {
    if (has_seed) sc.seed = seed;
    if (has_duration) sc.duration_s = duration;
    if (disable_constraint) sc.constraint_enabled = false;
    if (disable_penalty) sc.penalty_enabled = false;
    if (has_noise) sc.meter_sigma = noise;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gridflow: distributed DC optimal power flow simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    double duration = 0.0;
    double meter_noise = 0.0;
    std::size_t downsample = 1;
    bool disable_constraint = false;
    bool disable_penalty = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "Scenario JSON file")
            ->required();
        return cmd;
    };

    auto* run = add_common(app.add_subcommand("run", "Run a scenario and write artifacts"));
    run->add_option("--out", out_dir, "Output directory");
    auto* seed_opt = run->add_option("--seed", seed, "Override RNG seed");
    auto* dur_opt = run->add_option("--duration", duration, "Override duration [s]");
    run->add_flag("--disable-constraint", disable_constraint,
                  "Run without the line-flow constraint layer");
    run->add_flag("--disable-penalty", disable_penalty,
                  "Run without the overflow penalty term");
    auto* noise_opt =
        run->add_option("--meter-noise", meter_noise, "Measurement noise sigma");
    run->add_option("--csv-downsample", downsample, "Keep every Nth trace row");

    auto* compare = add_common(app.add_subcommand(
        "compare", "Distributed steady state vs centralized oracle"));
    auto* c_seed = compare->add_option("--seed", seed, "Override RNG seed");
    auto* c_dur = compare->add_option("--duration", duration, "Override duration [s]");

    auto* validate =
        add_common(app.add_subcommand("validate", "Schema-check a scenario"));

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            gridflow::Scenario sc = gridflow::load_scenario_file(scenario_path);
            nlohmann::json j;
            j["valid"] = true;
            j["buses"] = sc.network.n_buses();
            j["lines"] = sc.network.n_lines();
            j["generators"] = sc.network.n_gens();
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (run->parsed()) {
            gridflow::Scenario sc = gridflow::load_scenario_file(scenario_path);
            apply_overrides(sc, seed_opt->count() > 0, seed, dur_opt->count() > 0,
                            duration, disable_constraint, disable_penalty,
                            noise_opt->count() > 0, meter_noise);
            if (log_level() > 0) {
                std::cerr << "running " << sc.duration_s << "s at tau=" << sc.tau
                          << " (" << sc.network.n_buses() << " buses)\n";
            }
            gridflow::Engine engine(sc);
            gridflow::Trace trace = engine.run();

            std::filesystem::create_directories(out_dir);
            const auto trace_path =
                (std::filesystem::path(out_dir) / "trace.csv").string();
            gridflow::write_trace_csv_file(trace, trace_path, downsample);
            const std::string summary = gridflow::summarize(trace, sc);
            {
                std::ofstream sf(std::filesystem::path(out_dir) / "summary.json");
                sf << summary << "\n";
            }
            std::cout << summary << "\n";
            return 0;
        }

        if (compare->parsed()) {
            gridflow::Scenario sc = gridflow::load_scenario_file(scenario_path);
            apply_overrides(sc, c_seed->count() > 0, seed, c_dur->count() > 0,
                            duration, false, false, false, 0.0);
            gridflow::Engine engine(sc);
            gridflow::Trace trace = engine.run();
            if (trace.records.empty()) {
                std::cerr << "empty trace; nothing to compare\n";
                return 2;
            }
            const auto& last = trace.records.back();

            gridflow::GridMatrices gm = gridflow::build_matrices(sc.network);
            std::vector<double> loads_mw;
            double t_end = last.t;
            for (std::size_t s = 0; s < gm.load_cols.size(); ++s) {
                double mw = 0.0;
                for (const auto& l : sc.network.loads) {
                    if (sc.network.bus_index(l.bus) == gm.load_cols[s]) {
                        mw += l.mw_at(t_end);
                    }
                }
                loads_mw.push_back(mw);
            }

            nlohmann::json j;
            j["distributed"] = {{"outputs_mw", last.act_mw},
                                {"lambda", last.lambda},
                                {"cost_per_hour", last.cost}};
            if (sc.network.n_gens() <= 3) {
                auto sol = gridflow::oracle::centralized_dcopf_bruteforce(
                    sc.network, gm, loads_mw);
                j["oracle_dcopf"] = {{"outputs_mw", sol.outputs_mw},
                                     {"lambda", sol.lambda},
                                     {"cost_per_hour", sol.cost_per_hour},
                                     {"feasible", sol.feasible},
                                     {"binding", sol.binding}};
            }
            double demand = 0.0;
            for (double l : loads_mw) demand += l;
            auto ed = gridflow::oracle::centralized_ed(sc.network.generators, demand);
            j["oracle_ed"] = {{"outputs_mw", ed.outputs_mw},
                              {"lambda", ed.lambda},
                              {"cost_per_hour", ed.cost_per_hour}};
            std::cout << j.dump(2) << "\n";
            return 0;
        }
    } catch (const gridflow::CaseError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const gridflow::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

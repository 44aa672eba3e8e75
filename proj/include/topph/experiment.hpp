#ifndef TOPPH_EXPERIMENT_HPP
#define TOPPH_EXPERIMENT_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "topph/analysis.hpp"
#include "topph/csr.hpp"
#include "topph/distribution.hpp"
#include "topph/hmm.hpp"
#include "topph/top_p_hmm.hpp"

namespace topph {

/// One benchmark configuration: which truncation levels to run against
/// the exact baseline, for how many steps, and whether observations are
/// entered on a fixed period.
struct ExperimentConfig {
    std::string model_name = "model";
    std::vector<double> p_values = {0.5, 0.7, 0.9};
    std::size_t horizon = 50;
    std::size_t obs_period = 0;  // 0: prediction only
    TruncationMode mode = TruncationMode::Model;
    std::uint64_t seed = 0;
    std::size_t repetitions = 5;
    // Pairwise gamma is cubic in the state count; skip it on big models
    // unless explicitly requested.
    std::size_t gamma_state_limit = 2000;
    bool force_gamma = false;
};

/// Results for one (model, p) pair.
struct ExperimentRecord {
    std::string model_name;
    double p = 1.0;
    TruncationMode mode = TruncationMode::Model;

    struct Step {
        std::size_t step;
        double tv;
        double dense_cumulative_ms;
        double topp_cumulative_ms;
    };
    std::vector<Step> steps;

    double transition_sparsity = 0.0;
    std::optional<double> gamma;
    double tv_final = 0.0;
    double tv_max = 0.0;
    double tv_mean = 0.0;
    double dense_total_ms = 0.0;
    double topp_total_ms = 0.0;
    double speedup = 0.0;

    bool mixing_bound_violated = false;  // mixing-rate guarantee broken
    bool linear_bound_violated = false;  // only asserted in message mode
    bool failed = false;                 // run aborted (degenerate evidence)
    std::string failure_reason;

    double bound_mixing() const {
        if (!gamma || *gamma <= 0.0) return std::numeric_limits<double>::infinity();
        return (1.0 - p) / *gamma;
    }
    double bound_linear(std::size_t k) const {
        return static_cast<double>(k + 1) * (1.0 - p);
    }
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

// Time one full inference loop, recording cumulative wall-clock time
// after each step. TV bookkeeping lives elsewhere so the timed loop does
// inference only.
template <typename StepFn>
std::vector<double> time_loop(std::size_t horizon, StepFn&& step) {
    std::vector<double> cumulative(horizon);
    const auto start = Clock::now();
    for (std::size_t t = 1; t <= horizon; ++t) {
        step(t);
        cumulative[t - 1] = ms_between(start, Clock::now());
    }
    return cumulative;
}

// Median-total run out of `reps` repetitions, after one discarded
// warm-up.
template <typename RunFn>
std::vector<double> median_timed_run(std::size_t reps, RunFn&& run) {
    run();  // warm-up
    std::vector<std::vector<double>> all;
    all.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) all.push_back(run());
    std::vector<std::size_t> order(all.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return all[a].back() < all[b].back();
    });
    return all[order[order.size() / 2]];
}

}  // namespace detail

/// Run the full comparison for one model: exact dense inference against
/// sparse truncated inference for every requested p, with a shared
/// observation sequence when filtering. Timing wraps the inference loop
/// only; model building and truncation are excluded.
inline std::vector<ExperimentRecord> run_experiment(const Hmm& model,
                                                    const ExperimentConfig& config) {
    if (config.horizon < 1) {
        throw std::invalid_argument("run_experiment: horizon must be >= 1");
    }
    for (double p : config.p_values) detail::check_p(p);

    std::optional<double> gamma;
    if (config.force_gamma || model.n_states() <= config.gamma_state_limit) {
        gamma = minimal_mixing_rate(model.transition());
    }

    std::vector<std::pair<std::size_t, std::size_t>> trajectory;
    if (config.obs_period > 0) {
        trajectory = sample_trajectory(model, config.horizon, config.seed);
    }
    auto observed_at = [&](std::size_t t) -> std::optional<std::size_t> {
        if (config.obs_period > 0 && t % config.obs_period == 0) {
            return trajectory[t - 1].second;
        }
        return std::nullopt;
    };

    // Dense baseline is shared by all p values: time it once.
    const auto dense_times = detail::median_timed_run(config.repetitions, [&] {
        ForwardMessage msg{model.prior(), 0};
        return detail::time_loop(config.horizon, [&](std::size_t t) {
            if (auto obs = observed_at(t)) {
                msg = filter_step(model, msg, *obs);
            } else {
                msg = predict_step(model, msg);
            }
        });
    });

    std::vector<ExperimentRecord> records;
    for (double p : config.p_values) {
        ExperimentRecord rec;
        rec.model_name = config.model_name;
        rec.p = p;
        rec.mode = config.mode;
        rec.gamma = gamma;

        const TopPHmm truncated = build_top_p_hmm(model, p);
        rec.transition_sparsity = truncated.report().transition_sparsity;

        // Untimed accuracy pass.
        std::optional<ObsSchedule> schedule;
        if (config.obs_period > 0) {
            schedule = ObsSchedule{config.obs_period, config.seed};
        }
        TvTrajectory tvs;
        try {
            tvs = tv_trajectory(model, truncated, config.horizon, schedule, config.mode);
        } catch (const DegenerateEvidenceError& e) {
            rec.failed = true;
            rec.failure_reason = e.what();
            records.push_back(std::move(rec));
            continue;
        }
        rec.tv_final = tvs.final_tv();
        rec.tv_max = tvs.max_tv();
        rec.tv_mean = tvs.mean_tv();
        if (rec.gamma && *rec.gamma > 0.0 && rec.tv_max > rec.bound_mixing() + 1e-9) {
            rec.mixing_bound_violated = true;
        }
        for (const auto& pt : tvs.points) {
            if (pt.tv > rec.bound_linear(pt.time) + 1e-9) {
                rec.linear_bound_violated = true;
            }
        }

        // Timed sparse pass.
        const auto topp_times = detail::median_timed_run(config.repetitions, [&] {
            ForwardMessage msg{truncated.prior(), 0};
            return detail::time_loop(config.horizon, [&](std::size_t t) {
                if (auto obs = observed_at(t)) {
                    msg = sparse_filter_step(truncated.transition_csr(),
                                             truncated.observation_csr(), msg, *obs);
                } else {
                    msg = sparse_predict_step(truncated.transition_csr(), msg);
                }
                if (config.mode == TruncationMode::Message) {
                    msg.dist = top_p_distribution(msg.dist, p).distribution;
                }
            });
        });

        rec.steps.reserve(config.horizon);
        for (std::size_t t = 1; t <= config.horizon; ++t) {
            rec.steps.push_back({t, tvs.points[t].tv, dense_times[t - 1], topp_times[t - 1]});
        }
        rec.dense_total_ms = dense_times.back();
        rec.topp_total_ms = topp_times.back();
        rec.speedup = rec.dense_total_ms / rec.topp_total_ms;
        records.push_back(std::move(rec));
    }
    return records;
}

inline const char* mode_name(TruncationMode mode) {
    return mode == TruncationMode::Model ? "model" : "message";
}

/// CSV output. Per-step rows carry the step/tv/time fields; each record
/// ends with a summary row (kind=summary) carrying the aggregates, or a
/// failure row when the run aborted.
inline void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
    out << "model,p,mode,kind,step,tv,dense_cumulative_ms,topp_cumulative_ms,"
           "sparsity,gamma,bound_mixing,bound_linear,tv_final,tv_max,tv_mean,speedup\n";
    auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };
    for (const auto& rec : records) {
        const std::string prefix = rec.model_name + "," + num(rec.p) + "," +
                                   mode_name(rec.mode) + ",";
        if (rec.failed) {
            out << prefix << "failure,,,,,,,,,,,,\n";
            continue;
        }
        for (const auto& s : rec.steps) {
            out << prefix << "step," << s.step << "," << num(s.tv) << ","
                << num(s.dense_cumulative_ms) << "," << num(s.topp_cumulative_ms)
                << ",,,,,,,,\n";
        }
        out << prefix << "summary,,,,," << num(rec.transition_sparsity) << ",";
        if (rec.gamma) out << num(*rec.gamma);
        out << ",";
        if (rec.gamma && *rec.gamma > 0.0) out << num(rec.bound_mixing());
        out << "," << num(rec.bound_linear(rec.steps.size())) << ","
            << num(rec.tv_final) << "," << num(rec.tv_max) << "," << num(rec.tv_mean)
            << "," << num(rec.speedup) << "\n";
    }
}

}  // namespace topph

#endif  // TOPPH_EXPERIMENT_HPP

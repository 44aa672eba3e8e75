#ifndef TOPPH_ANALYSIS_HPP
#define TOPPH_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "topph/csr.hpp"
#include "topph/distribution.hpp"
#include "topph/hmm.hpp"
#include "topph/matrix.hpp"
#include "topph/top_p_hmm.hpp"

namespace topph {

/// Minimal mixing rate of a column-stochastic transition matrix: the
/// minimum over all pairs of current states of the overlap mass of
/// their next-state distributions. Governs how fast a one-step error
/// decays (contraction factor 1 - gamma). Exact pairwise scan, O(n^3).
inline double minimal_mixing_rate(const Matrix& t) {
    if (t.rows() != t.cols()) {
        throw std::invalid_argument("minimal_mixing_rate: matrix must be square");
    }
    for (std::size_t j = 0; j < t.cols(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (t(i, j) < 0.0) {
                throw std::invalid_argument("minimal_mixing_rate: negative entry");
            }
            sum += t(i, j);
        }
        if (std::abs(sum - 1.0) > kNormalizationTol) {
            throw std::invalid_argument("minimal_mixing_rate: matrix not column-stochastic");
        }
    }
    const std::size_t n = t.cols();
    if (n == 1) return 1.0;
    double gamma = 1.0;
    std::vector<double> a(n), b(n);
    for (std::size_t j1 = 0; j1 + 1 < n; ++j1) {
        for (std::size_t i = 0; i < n; ++i) a[i] = t(i, j1);
        for (std::size_t j2 = j1 + 1; j2 < n; ++j2) {
            double overlap = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                overlap += std::min(a[i], t(i, j2));
            }
            gamma = std::min(gamma, overlap);
        }
    }
    return gamma;
}

/// Theoretical error bounds for top-p inference at truncation level p on
/// a model with minimal mixing rate gamma. The linear bound grows with
/// the step count; the mixing bound is uniform in time but vacuous when
/// gamma is zero.
struct ErrorBounds {
    double p;
    double gamma;

    double linear_bound(std::size_t k) const {
        return static_cast<double>(k + 1) * (1.0 - p);
    }

    double mixing_bound() const {
        if (gamma <= 0.0) return std::numeric_limits<double>::infinity();
        return (1.0 - p) / gamma;
    }

    double effective_bound(std::size_t k) const {
        return std::min(linear_bound(k), mixing_bound());
    }

    bool has_mixing_guarantee() const { return gamma > 0.0; }
};

inline ErrorBounds error_bounds(double p, double gamma) {
    detail::check_p(p);
    if (gamma < 0.0 || gamma > 1.0) {
        throw std::invalid_argument("error_bounds: gamma must lie in [0,1]");
    }
    return ErrorBounds{p, gamma};
}

/// Whether inference on a truncated model re-applies top-p to the
/// forward message after every step, or only relies on the truncated
/// model parameters.
enum class TruncationMode { Model, Message };

/// Per-step total variation between exact and truncated inference.
struct TvTrajectory {
    struct Point {
        std::size_t time;
        double tv;
    };
    std::vector<Point> points;

    double final_tv() const { return points.back().tv; }
    double max_tv() const {
        double m = 0.0;
        for (const auto& pt : points) m = std::max(m, pt.tv);
        return m;
    }
    double mean_tv() const {
        double s = 0.0;
        for (const auto& pt : points) s += pt.tv;
        return s / static_cast<double>(points.size());
    }
};

struct ObsSchedule {
    std::size_t period;
    std::uint64_t trajectory_seed;
};

/// Run exact dense inference on the original model and sparse inference
/// on the truncated one from their respective priors, recording the
/// total variation between the two forward messages at every step
/// (horizon + 1 points, including time zero). When an observation
/// schedule is given, a single ground-truth trajectory is sampled from
/// the original model and both chains filter on the same symbols every
/// `period` steps.
inline TvTrajectory tv_trajectory(const Hmm& original, const TopPHmm& truncated,
                                  std::size_t horizon,
                                  std::optional<ObsSchedule> obs_schedule = std::nullopt,
                                  TruncationMode mode = TruncationMode::Model) {
    if (horizon < 1) {
        throw std::invalid_argument("tv_trajectory: horizon must be >= 1");
    }
    std::vector<std::pair<std::size_t, std::size_t>> trajectory;
    if (obs_schedule) {
        if (obs_schedule->period < 1) {
            throw std::invalid_argument("tv_trajectory: observation period must be >= 1");
        }
        trajectory = sample_trajectory(original, horizon, obs_schedule->trajectory_seed);
    }

    ForwardMessage exact{original.prior(), 0};
    ForwardMessage approx{truncated.prior(), 0};

    TvTrajectory out;
    out.points.push_back({0, total_variation(exact.dist, approx.dist)});
    for (std::size_t t = 1; t <= horizon; ++t) {
        const bool observe = obs_schedule && t % obs_schedule->period == 0;
        if (observe) {
            const std::size_t obs = trajectory[t - 1].second;
            exact = filter_step(original, exact, obs);
            approx = sparse_filter_step(truncated.transition_csr(),
                                        truncated.observation_csr(), approx, obs);
        } else {
            exact = predict_step(original, exact);
            approx = sparse_predict_step(truncated.transition_csr(), approx);
        }
        if (mode == TruncationMode::Message) {
            approx.dist = top_p_distribution(approx.dist, truncated.p()).distribution;
        }
        out.points.push_back({t, total_variation(exact.dist, approx.dist)});
    }
    return out;
}

/// Empirical check of the one-step contraction property: random
/// distribution pairs are pushed through the transition and the ratio
/// of output to input total variation is compared against 1 - gamma.
struct ContractionReport {
    double gamma;
    double max_ratio;
    std::size_t trials;
    bool passed;
};

inline ContractionReport check_contraction(const Matrix& t, std::size_t trials,
                                           std::uint64_t seed) {
    if (trials < 1) {
        throw std::invalid_argument("check_contraction: trials must be >= 1");
    }
    const double gamma = minimal_mixing_rate(t);
    const std::size_t n = t.cols();
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> unit_gamma(1.0, 1.0);

    auto random_dist = [&]() {
        std::vector<double> v(n);
        double sum = 0.0;
        for (double& x : v) {
            x = unit_gamma(rng);
            sum += x;
        }
        for (double& x : v) x /= sum;
        return Distribution(std::move(v));
    };

    double max_ratio = 0.0;
    std::size_t ran = 0;
    auto try_pair = [&](const Distribution& phi, const Distribution& psi) {
        const double before = total_variation(phi, psi);
        if (before == 0.0) return;
        const double after = total_variation(Distribution(t.multiply(phi.probs())),
                                             Distribution(t.multiply(psi.probs())));
        max_ratio = std::max(max_ratio, after / before);
        ++ran;
    };

    // Point-mass pairs attain the gamma minimum by construction; cover
    // them all when feasible, otherwise sample.
    if (n <= 64) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                try_pair(Distribution::point_mass(n, i), Distribution::point_mass(n, j));
            }
        }
    } else {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t k = 0; k < trials; ++k) {
            const std::size_t i = pick(rng);
            std::size_t j = pick(rng);
            if (i == j) j = (j + 1) % n;
            try_pair(Distribution::point_mass(n, i), Distribution::point_mass(n, j));
        }
    }
    for (std::size_t k = 0; k < trials; ++k) {
        try_pair(random_dist(), random_dist());
    }

    const bool passed = max_ratio <= (1.0 - gamma) + 1e-9;
    return ContractionReport{gamma, max_ratio, ran, passed};
}

}  // namespace topph

#endif  // TOPPH_ANALYSIS_HPP

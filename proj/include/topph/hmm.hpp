#ifndef TOPPH_HMM_HPP
#define TOPPH_HMM_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "topph/distribution.hpp"
#include "topph/matrix.hpp"

namespace topph {

/// Thrown when a filtering update meets an observation with zero
/// likelihood under the predicted message. Truncation can make evidence
/// impossible, and recovering silently would corrupt error measurements,
/// so this surfaces as an error.
class DegenerateEvidenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hidden Markov model over n_states hidden states and n_obs observation
/// symbols.
///
/// Convention: both matrices are COLUMN-stochastic. transition(i, j) is
/// the probability of moving to state i given current state j, and
/// observation(o, j) the probability of emitting symbol o in state j.
/// Row-vs-column mixups are the classic HMM bug, hence the explicit note.
class Hmm {
public:
    Hmm(Distribution prior, Matrix transition, Matrix observation,
        std::vector<std::string> state_labels = {},
        std::vector<std::string> obs_labels = {})
        : prior_(std::move(prior)),
          transition_(std::move(transition)),
          observation_(std::move(observation)),
          state_labels_(std::move(state_labels)),
          obs_labels_(std::move(obs_labels)) {
        const std::size_t n = prior_.size();
        if (transition_.rows() != n || transition_.cols() != n) {
            throw std::invalid_argument("Hmm: transition must be n_states x n_states");
        }
        if (observation_.cols() != n) {
            throw std::invalid_argument("Hmm: observation must have n_states columns");
        }
        check_column_stochastic(transition_, "transition");
        check_column_stochastic(observation_, "observation");
        if (!state_labels_.empty() && state_labels_.size() != n) {
            throw std::invalid_argument("Hmm: state_labels length mismatch");
        }
        if (!obs_labels_.empty() && obs_labels_.size() != observation_.rows()) {
            throw std::invalid_argument("Hmm: obs_labels length mismatch");
        }
    }

    std::size_t n_states() const { return prior_.size(); }
    std::size_t n_obs() const { return observation_.rows(); }
    const Distribution& prior() const { return prior_; }
    const Matrix& transition() const { return transition_; }
    const Matrix& observation() const { return observation_; }
    const std::vector<std::string>& state_labels() const { return state_labels_; }
    const std::vector<std::string>& obs_labels() const { return obs_labels_; }

private:
    static void check_column_stochastic(const Matrix& m, const char* name) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                const double x = m(i, j);
                if (!(x >= 0.0) || x > 1.0 + kNormalizationTol) {
                    throw std::invalid_argument(std::string("Hmm: ") + name +
                                                " entry outside [0,1]");
                }
                sum += x;
            }
            if (std::abs(sum - 1.0) > kNormalizationTol) {
                throw std::invalid_argument(std::string("Hmm: ") + name + " column " +
                                            std::to_string(j) + " sums to " +
                                            std::to_string(sum));
            }
        }
    }

    Distribution prior_;
    Matrix transition_;
    Matrix observation_;
    std::vector<std::string> state_labels_;
    std::vector<std::string> obs_labels_;
};

/// State distribution at a point in time.
struct ForwardMessage {
    Distribution dist;
    std::int64_t time = 0;
};

/// Advance the state distribution one step: T * msg.
inline ForwardMessage predict_step(const Hmm& model, const ForwardMessage& msg) {
    if (msg.dist.size() != model.n_states()) {
        throw std::invalid_argument("predict_step: message dimension mismatch");
    }
    auto out = model.transition().multiply(msg.dist.probs());
    return ForwardMessage{Distribution(std::move(out)), msg.time + 1};
}

/// Distribution over observation symbols implied by the current message: B * msg.
inline Distribution observation_distribution(const Hmm& model, const ForwardMessage& msg) {
    if (msg.dist.size() != model.n_states()) {
        throw std::invalid_argument("observation_distribution: dimension mismatch");
    }
    return Distribution(model.observation().multiply(msg.dist.probs()));
}

/// Bayes update: advance one step and condition on the observed symbol.
/// The normalizer is discarded.
inline ForwardMessage filter_step(const Hmm& model, const ForwardMessage& msg,
                                  std::size_t obs) {
    if (obs >= model.n_obs()) {
        throw std::invalid_argument("filter_step: observation id out of range");
    }
    auto pred = model.transition().multiply(msg.dist.probs());
    double total = 0.0;
    for (std::size_t s = 0; s < pred.size(); ++s) {
        pred[s] *= model.observation()(obs, s);
        total += pred[s];
    }
    if (total <= 0.0) {
        throw DegenerateEvidenceError(
            "filter_step: observation " + std::to_string(obs) +
            " has zero likelihood under the predicted message");
    }
    for (double& x : pred) x /= total;
    return ForwardMessage{Distribution(std::move(pred)), msg.time + 1};
}

namespace detail {

inline std::size_t sample_index(std::span<const double> weights, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    // Rounding can leave acc marginally below 1; fall back to the last
    // positive-weight index.
    for (std::size_t i = weights.size(); i-- > 0;) {
        if (weights[i] > 0.0) return i;
    }
    return weights.size() - 1;
}

}  // namespace detail

/// Sample a ground-truth (state, observation) sequence of the given
/// length. Entry t holds (s_{t+1}, o_{t+1}): the state after t+1
/// transitions from the prior draw and the symbol emitted there.
/// Deterministic for a fixed seed.
inline std::vector<std::pair<std::size_t, std::size_t>> sample_trajectory(
    const Hmm& model, std::size_t steps, std::uint64_t seed) {
    if (steps < 1) {
        throw std::invalid_argument("sample_trajectory: steps must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(steps);
    std::size_t state = detail::sample_index(model.prior().probs(), rng);
    for (std::size_t t = 0; t < steps; ++t) {
        state = detail::sample_index(model.transition().column(state), rng);
        const std::size_t obs =
            detail::sample_index(model.observation().column(state), rng);
        out.emplace_back(state, obs);
    }
    return out;
}

}  // namespace topph

#endif  // TOPPH_HMM_HPP

#ifndef TOPPH_DISTRIBUTION_HPP
#define TOPPH_DISTRIBUTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace topph {

inline constexpr double kNormalizationTol = 1e-9;

/// A finite discrete probability distribution over events 0..size()-1.
/// Construction validates that entries lie in [0,1] and sum to one
/// within kNormalizationTol; inputs that fail are rejected rather than
/// silently renormalized.
class Distribution {
public:
    explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.empty()) {
            throw std::invalid_argument("Distribution: empty probability vector");
        }
        double sum = 0.0;
        for (double x : probs_) {
            if (!(x >= 0.0) || x > 1.0 + kNormalizationTol) {
                throw std::invalid_argument(
                    "Distribution: entry outside [0,1]: " + std::to_string(x));
            }
            sum += x;
        }
        if (std::abs(sum - 1.0) > kNormalizationTol) {
            throw std::invalid_argument(
                "Distribution: probabilities sum to " + std::to_string(sum) +
                ", expected 1");
        }
    }

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

    static Distribution uniform(std::size_t n) {
        return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }

    static Distribution point_mass(std::size_t n, std::size_t event) {
        if (event >= n) {
            throw std::invalid_argument("Distribution::point_mass: event out of range");
        }
        std::vector<double> v(n, 0.0);
        v[event] = 1.0;
        return Distribution(std::move(v));
    }

private:
    std::vector<double> probs_;
};

/// Result of a top-p truncation: the renormalized distribution, the
/// probability mass that was actually kept (>= the requested p), and the
/// sorted event ids that survived.
struct TopPResult {
    Distribution distribution;
    double kept_mass;
    std::vector<std::size_t> kept_indices;
};

namespace detail {

inline void check_p(double p) {
    if (!(p > 0.0) || p > 1.0) {
        throw std::invalid_argument("top-p: p must lie in (0,1]");
    }
}

// Sorted order: descending by probability, ties broken by ascending
// event id so the cut is deterministic.
inline std::vector<std::size_t> sorted_order(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    return idx;
}

}  // namespace detail

/// The minimal prefix of the sorted order whose probabilities accumulate
/// to at least p. Returned ids are sorted ascending. Zero-probability
/// events are never included.
inline std::vector<std::size_t> top_p_set(const Distribution& dist, double p) {
    detail::check_p(p);
    const auto& v = dist.probs();
    std::vector<std::size_t> kept;
    double sum = 0.0;
    for (std::size_t j : detail::sorted_order(v)) {
        if (v[j] == 0.0) break;
        sum += v[j];
        kept.push_back(j);
        if (sum >= p) break;
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

/// Restrict the distribution to its top-p set and rescale by the
/// accumulated mass so it sums to one again. When every nonzero event
/// survives the cut, the distribution is returned untouched: rescaling
/// by the accumulated fp sum would only inject rounding noise.
inline TopPResult top_p_distribution(const Distribution& dist, double p) {
    detail::check_p(p);
    const auto& v = dist.probs();
    std::vector<double> out(v.size(), 0.0);
    std::vector<std::size_t> kept;
    std::size_t support = 0;
    for (double x : v) {
        if (x != 0.0) ++support;
    }
    double sum = 0.0;
    for (std::size_t j : detail::sorted_order(v)) {
        if (v[j] == 0.0) break;
        sum += v[j];
        out[j] = v[j];
        kept.push_back(j);
        if (sum >= p) break;
    }
    if (kept.size() < support) {
        for (double& x : out) x /= sum;
    }
    std::sort(kept.begin(), kept.end());
    return TopPResult{Distribution(std::move(out)), sum, std::move(kept)};
}

/// Total variation distance: half the L1 distance between two
/// distributions over the same events. Symmetric, in [0,1].
inline double total_variation(const Distribution& a, const Distribution& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("total_variation: dimension mismatch");
    }
    double l1 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        l1 += std::abs(a[i] - b[i]);
    }
    return 0.5 * l1;
}

}  // namespace topph

#endif  // TOPPH_DISTRIBUTION_HPP

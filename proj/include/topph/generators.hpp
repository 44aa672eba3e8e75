#ifndef TOPPH_GENERATORS_HPP
#define TOPPH_GENERATORS_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "topph/distribution.hpp"
#include "topph/hmm.hpp"
#include "topph/matrix.hpp"

namespace topph {

/// Bell model: each column concentrates heavy_mass on heavy_count
/// randomly chosen states and spreads the rest uniformly. Lots of
/// barely-probable successors make it an easy target for truncation.
struct BellSpec {
    std::size_t n_states = 800;
    std::size_t heavy_count = 5;
    double heavy_mass = 0.9;
    std::uint64_t seed = 0;
};

namespace detail {

// Distinct indices via partial Fisher-Yates.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                           std::mt19937_64& rng) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(k);
    return pool;
}

inline Matrix bell_matrix(std::size_t n, std::size_t heavy_count, double heavy_mass,
                          std::mt19937_64& rng) {
    const double heavy = heavy_mass / static_cast<double>(heavy_count);
    const double light = (1.0 - heavy_mass) / static_cast<double>(n - heavy_count);
    Matrix m(n, n, light);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i : sample_without_replacement(n, heavy_count, rng)) {
            m(i, j) = heavy;
        }
    }
    return m;
}

}  // namespace detail

inline Hmm make_bell_hmm(const BellSpec& spec) {
    if (spec.heavy_count == 0 || spec.heavy_count >= spec.n_states) {
        throw std::invalid_argument("make_bell_hmm: heavy_count must be in [1, n_states)");
    }
    if (!(spec.heavy_mass > 0.0) || !(spec.heavy_mass < 1.0)) {
        throw std::invalid_argument("make_bell_hmm: heavy_mass must lie in (0,1)");
    }
    std::mt19937_64 rng(spec.seed);
    Matrix t = detail::bell_matrix(spec.n_states, spec.heavy_count, spec.heavy_mass, rng);
    Matrix b = detail::bell_matrix(spec.n_states, spec.heavy_count, spec.heavy_mass, rng);
    return Hmm(Distribution::uniform(spec.n_states), std::move(t), std::move(b));
}

/// Uniform model: every column uniform, the worst case for truncation
/// since no successor is more likely than any other.
inline Hmm make_uniform_hmm(std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("make_uniform_hmm: need at least 2 states");
    }
    Matrix u(n, n, 1.0 / static_cast<double>(n));
    return Hmm(Distribution::uniform(n), u, u);
}

/// Six-state weather model with a two-symbol raincoat emission.
///
/// Raincoat probability is 1 for the rainy states (light rain, heavy
/// rain, thunderstorm) and 0.35 for sunny. The 0.35 for partly cloudy
/// and foggy is a fixture choice; only the rainy states and sunny are
/// pinned by the scenario.
inline Hmm make_weather_hmm() {
    const std::vector<std::string> states = {"partly cloudy", "light rain", "foggy",
                                             "sunny",         "heavy rain", "thunderstorm"};
    // Columns: next-state distribution given the current state, in the
    // same state order.
    Matrix t(6, 6, std::vector<double>{
        0.3,  0.2, 0.3, 0.3,  0.1,  0.1,
        0.2,  0.2, 0.2, 0.25, 0.2,  0.2,
        0.1,  0.1, 0.2, 0.15, 0.1,  0.1,
        0.2,  0.1, 0.1, 0.2,  0.1,  0.1,
        0.1,  0.2, 0.1, 0.06, 0.2,  0.3,
        0.1,  0.2, 0.1, 0.04, 0.3,  0.2,
    });
    Matrix b(2, 6, std::vector<double>{
        0.35, 1.0, 0.35, 0.35, 1.0, 1.0,
        0.65, 0.0, 0.65, 0.65, 0.0, 0.0,
    });
    return Hmm(Distribution::uniform(6), std::move(t), std::move(b), states,
               {"raincoat", "no raincoat"});
}

/// Corpus ingestion settings for the bigram language-model HMM. Tokens
/// occurring fewer than min_token_count times are removed from the
/// stream before bigrams are counted.
struct CorpusSpec {
    bool lowercase = false;
    std::size_t min_token_count = 1;
};

/// Whitespace tokenization, optionally lowercased (ASCII).
inline std::vector<std::string> tokenize(std::istream& text, bool lowercase) {
    std::vector<std::string> tokens;
    std::string tok;
    while (text >> tok) {
        if (lowercase) {
            std::transform(tok.begin(), tok.end(), tok.begin(), [](unsigned char c) {
                return static_cast<char>(std::tolower(c));
            });
        }
        tokens.push_back(std::move(tok));
        tok.clear();
    }
    return tokens;
}

/// Bigram language model as an HMM: one state per vocabulary token,
/// transition column j = add-one-smoothed successor frequencies of
/// token j, identity emission (each state deterministically emits its
/// token), prior = unigram relative frequencies.
inline Hmm hmm_from_corpus(std::vector<std::string> tokens, const CorpusSpec& spec) {
    if (spec.min_token_count > 1) {
        std::map<std::string, std::size_t> counts;
        for (const auto& t : tokens) ++counts[t];
        std::erase_if(tokens, [&](const std::string& t) {
            return counts[t] < spec.min_token_count;
        });
    }
    if (tokens.empty()) {
        throw std::invalid_argument("hmm_from_corpus: empty corpus");
    }

    std::map<std::string, std::size_t> vocab;  // token -> state id, sorted order
    for (const auto& t : tokens) vocab.emplace(t, 0);
    if (vocab.size() < 2) {
        throw std::invalid_argument("hmm_from_corpus: vocabulary must have >= 2 tokens");
    }
    std::size_t next_id = 0;
    for (auto& [tok, id] : vocab) id = next_id++;
    const std::size_t v = vocab.size();

    std::vector<std::size_t> ids(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) ids[i] = vocab[tokens[i]];

    std::vector<std::size_t> unigram(v, 0);
    for (std::size_t id : ids) ++unigram[id];

    // bigram[i * v + j] = count of token j followed by token i
    std::vector<std::size_t> bigram(v * v, 0);
    std::vector<std::size_t> out_total(v, 0);
    for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
        ++bigram[ids[k + 1] * v + ids[k]];
        ++out_total[ids[k]];
    }

    Matrix t(v, v);
    for (std::size_t j = 0; j < v; ++j) {
        const double denom = static_cast<double>(out_total[j] + v);
        for (std::size_t i = 0; i < v; ++i) {
            t(i, j) = static_cast<double>(bigram[i * v + j] + 1) / denom;
        }
    }

    std::vector<double> prior(v);
    for (std::size_t i = 0; i < v; ++i) {
        prior[i] = static_cast<double>(unigram[i]) / static_cast<double>(ids.size());
    }

    std::vector<std::string> labels(v);
    for (const auto& [tok, id] : vocab) labels[id] = tok;

    return Hmm(Distribution(std::move(prior)), std::move(t), Matrix::identity(v),
               labels, labels);
}

inline Hmm hmm_from_corpus(std::istream& text, const CorpusSpec& spec) {
    return hmm_from_corpus(tokenize(text, spec.lowercase), spec);
}

}  // namespace topph

#endif  // TOPPH_GENERATORS_HPP

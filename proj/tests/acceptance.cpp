// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "topph/topph.hpp"

#include "oracles.hpp"

namespace {

using topph::Distribution;
using topph::Matrix;

struct Criterion {
    int id;
    std::string title;
    std::function<bool(std::ostringstream&)> run;
};

bool approx(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// --- 1. Golden truncation of the sunny column at p = 0.9 -------------

bool criterion_1(std::ostringstream& why) {
    const Distribution sunny({0.3, 0.25, 0.15, 0.2, 0.06, 0.04});
    const std::vector<double> expected = {1.0 / 3, 5.0 / 18, 1.0 / 6, 2.0 / 9, 0, 0};
    auto r = topph::top_p_distribution(sunny, 0.9);
    for (std::size_t i = 0; i < 6; ++i) {
        if (!approx(r.distribution[i], expected[i], 1e-12)) {
            why << "entry " << i << ": " << r.distribution[i] << " != " << expected[i];
            return false;
        }
    }
    return true;
}

// --- 2. Golden top-0.7 weather transition matrix ---------------------

bool criterion_2(std::ostringstream& why) {
    const std::vector<double> expected = {
        3.0 / 7, 0.25, 3.0 / 7, 0.4,      0,       0,
        2.0 / 7, 0.25, 2.0 / 7, 1.0 / 3,  2.0 / 7, 2.0 / 7,
        0,       0,    2.0 / 7, 0,        0,       0,
        2.0 / 7, 0,    0,       4.0 / 15, 0,       0,
        0,       0.25, 0,       0,        2.0 / 7, 3.0 / 7,
        0,       0.25, 0,       0,        3.0 / 7, 2.0 / 7,
    };
    auto truncated = topph::build_top_p_hmm(topph::make_weather_hmm(), 0.7);
    Matrix t = truncated.transition_csr().to_dense();
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            if (!approx(t(i, j), expected[i * 6 + j], 1e-12)) {
                why << "entry (" << i << "," << j << "): " << t(i, j)
                    << " != " << expected[i * 6 + j];
                return false;
            }
        }
    }
    return true;
}

// --- 3. Truncation-error property over 10,000 random distributions ---

bool criterion_3(std::ostringstream& why) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<std::size_t> dim(2, 1000);
    const double ps[] = {0.5, 0.7, 0.9, 0.99};
    for (int trial = 0; trial < 10000; ++trial) {
        Distribution d(oracles::random_simplex(dim(rng), rng));
        const double p = ps[trial % 4];
        auto r = topph::top_p_distribution(d, p);
        const double tv = topph::total_variation(d, r.distribution);
        if (tv > 1.0 - p + 1e-9) {
            why << "trial " << trial << ": tv " << tv << " > 1-p " << 1.0 - p;
            return false;
        }
        if (!approx(tv, 1.0 - r.kept_mass, 1e-9)) {
            why << "trial " << trial << ": tv " << tv << " != 1-kept_mass "
                << 1.0 - r.kept_mass;
            return false;
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 10.0) {
        why << "runtime " << secs << " s >= 10 s";
        return false;
    }
    return true;
}

// --- 4. Contraction property over random pairs -----------------------

bool criterion_4(std::ostringstream& why) {
    std::mt19937_64 rng(102);
    std::uniform_int_distribution<std::size_t> dim(2, 40);
    for (int h = 0; h < 50; ++h) {
        const std::size_t n = dim(rng);
        Matrix t = oracles::random_stochastic_matrix(n, rng);
        const double gamma = topph::minimal_mixing_rate(t);
        for (int pair = 0; pair < 20; ++pair) {
            Distribution phi(oracles::random_simplex(n, rng));
            Distribution psi(oracles::random_simplex(n, rng));
            const double before = topph::total_variation(phi, psi);
            const double after =
                oracles::l1_half(oracles::dense_matvec(t, phi.probs()),
                                 oracles::dense_matvec(t, psi.probs()));
            if (after > (1.0 - gamma) * before + 1e-9) {
                why << "matrix " << h << " pair " << pair << ": " << after << " > "
                    << (1.0 - gamma) * before;
                return false;
            }
        }
    }
    // weather fixture: contraction ratio never exceeds 1 - gamma = 0.4
    Matrix t = topph::make_weather_hmm().transition();
    double max_ratio = 0.0;
    for (int pair = 0; pair < 1000; ++pair) {
        Distribution phi(oracles::random_simplex(6, rng));
        Distribution psi(oracles::random_simplex(6, rng));
        const double before = topph::total_variation(phi, psi);
        if (before < 1e-12) continue;
        const double after =
            oracles::l1_half(oracles::dense_matvec(t, phi.probs()),
                             oracles::dense_matvec(t, psi.probs()));
        max_ratio = std::max(max_ratio, after / before);
    }
    if (max_ratio > 0.4 + 1e-9) {
        why << "weather max ratio " << max_ratio << " > 0.4";
        return false;
    }
    return true;
}

// --- 5. Mixing bound assertion on experiment runs --------------------

bool criterion_5(std::ostringstream& why) {
    topph::Hmm weather = topph::make_weather_hmm();
    for (std::size_t obs_period : {std::size_t{0}, std::size_t{5}}) {
        topph::ExperimentConfig config;
        config.model_name = "weather";
        config.horizon = 50;
        config.obs_period = obs_period;
        config.seed = 7;
        config.repetitions = 1;
        auto records = topph::run_experiment(weather, config);
        for (const auto& rec : records) {
            if (rec.failed) {
                why << "p=" << rec.p << " obs_period=" << obs_period
                    << " aborted: " << rec.failure_reason;
                return false;
            }
            if (rec.gamma && *rec.gamma > 0.0 &&
                rec.tv_max > rec.bound_mixing() + 1e-9) {
                why << "p=" << rec.p << " obs_period=" << obs_period << ": tv_max "
                    << rec.tv_max << " > (1-p)/gamma " << rec.bound_mixing();
                return false;
            }
            if (rec.p == 0.9 && rec.tv_max > 1.0 / 6.0 + 1e-9) {
                why << "weather p=0.9: tv_max " << rec.tv_max << " > 1/6";
                return false;
            }
        }
    }
    return true;
}

// --- 6. Minimal mixing rate oracle -----------------------------------

bool criterion_6(std::ostringstream& why) {
    Matrix weather = topph::make_weather_hmm().transition();
    const double gw = topph::minimal_mixing_rate(weather);
    if (!approx(gw, 0.6, 1e-12)) {
        why << "gamma(weather) " << gw << " != 0.6";
        return false;
    }
    if (!approx(gw, oracles::minimal_mixing_rate_naive(weather), 1e-15)) {
        why << "gamma(weather) disagrees with the naive reference";
        return false;
    }
    const double gu = topph::minimal_mixing_rate(Matrix(800, 800, 1.0 / 800));
    if (!approx(gu, 1.0, 1e-9)) {
        why << "gamma(uniform) " << gu << " != 1";
        return false;
    }
    if (topph::minimal_mixing_rate(Matrix::identity(10)) != 0.0) {
        why << "gamma(identity) != 0";
        return false;
    }
    return true;
}

// --- 7. Uniform HMM final TV -----------------------------------------

bool criterion_7(std::ostringstream& why) {
    topph::Hmm uniform = topph::make_uniform_hmm(800);
    const std::pair<double, double> cases[] = {{0.9, 0.1}, {0.7, 0.3}, {0.5, 0.5}};
    for (auto [p, expected] : cases) {
        auto truncated = topph::build_top_p_hmm(uniform, p);
        auto tvs = topph::tv_trajectory(uniform, truncated, 50);
        if (!approx(tvs.final_tv(), expected, 0.005)) {
            why << "p=" << p << ": tv_final " << tvs.final_tv() << " not within 0.005 of "
                << expected;
            return false;
        }
    }
    return true;
}

// --- 8. Bell HMM final TV --------------------------------------------

bool criterion_8(std::ostringstream& why) {
    topph::Hmm bell = topph::make_bell_hmm({});
    const std::pair<double, double> cases[] = {{0.9, 0.086}, {0.7, 0.285}, {0.5, 0.78}};
    bool ok = true;
    for (auto [p, expected] : cases) {
        auto truncated = topph::build_top_p_hmm(bell, p);
        auto tvs = topph::tv_trajectory(bell, truncated, 50);
        if (!approx(tvs.final_tv(), expected, 0.05)) {
            if (!ok) why << "; ";
            why << "p=" << p << ": tv_final " << tvs.final_tv() << " not within 0.05 of "
                << expected;
            ok = false;
        }
    }
    return ok;
}

// --- 9. Sparsity -----------------------------------------------------

bool criterion_9(std::ostringstream& why) {
    topph::Hmm bell = topph::make_bell_hmm({});
    topph::Hmm uniform = topph::make_uniform_hmm(800);
    for (double p : {0.5, 0.7, 0.9}) {
        const double bs = topph::sparsity(topph::build_top_p_hmm(bell, p).transition_csr());
        if (bs < 0.99) {
            why << "bell p=" << p << ": sparsity " << bs << " < 0.99";
            return false;
        }
        const double us =
            topph::sparsity(topph::build_top_p_hmm(uniform, p).transition_csr());
        if (!approx(us, 1.0 - p, 0.01)) {
            why << "uniform p=" << p << ": sparsity " << us << " not within 0.01 of "
                << 1.0 - p;
            return false;
        }
    }
    return true;
}

// --- 10. Dense/sparse oracle equivalence -----------------------------

bool criterion_10(std::ostringstream& why) {
    std::mt19937_64 rng(103);
    std::uniform_int_distribution<std::size_t> dim(2, 500);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> target_sparsity(0.0, 0.99);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = dim(rng);
        const double zero_frac = target_sparsity(rng);
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (unit(rng) >= zero_frac) m(i, j) = unit(rng);
            }
        }
        std::vector<double> v(n);
        for (double& x : v) x = unit(rng);
        auto sparse = topph::spmv(topph::csr_from_dense(m), v);
        auto dense = oracles::dense_matvec(m, v);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(sparse[i] - dense[i]) > 1e-12) {
                why << "trial " << trial << " row " << i << ": diff "
                    << std::abs(sparse[i] - dense[i]);
                return false;
            }
        }
    }
    // untruncated sparse inference tracks dense inference for 50 steps
    topph::Hmm weather = topph::make_weather_hmm();
    auto t_csr = topph::csr_from_dense(weather.transition());
    auto b_csr = topph::csr_from_dense(weather.observation());
    topph::ForwardMessage dense_msg{weather.prior(), 0};
    topph::ForwardMessage sparse_msg{weather.prior(), 0};
    std::uniform_int_distribution<std::size_t> obs(0, 1);
    for (int t = 0; t < 50; ++t) {
        if (t % 5 == 4) {
            const std::size_t o = obs(rng);
            dense_msg = topph::filter_step(weather, dense_msg, o);
            sparse_msg = topph::sparse_filter_step(t_csr, b_csr, sparse_msg, o);
        } else {
            dense_msg = topph::predict_step(weather, dense_msg);
            sparse_msg = topph::sparse_predict_step(t_csr, sparse_msg);
        }
        const double tv = topph::total_variation(dense_msg.dist, sparse_msg.dist);
        if (tv > 1e-9) {
            why << "step " << t << ": sparse/dense TV " << tv << " > 1e-9";
            return false;
        }
    }
    return true;
}

// --- 11. Runtime direction -------------------------------------------

double speedup_for(const topph::Hmm& model, const std::string& name,
                   std::size_t obs_period, std::ostringstream& why) {
    topph::ExperimentConfig config;
    config.model_name = name;
    config.p_values = {0.9};
    config.horizon = 50;
    config.obs_period = obs_period;
    config.seed = 3;
    config.repetitions = 5;
    auto records = topph::run_experiment(model, config);
    if (records.at(0).failed) {
        why << name << " run aborted: " << records.at(0).failure_reason;
        return -1.0;
    }
    return records.at(0).speedup;
}

bool criterion_11(std::ostringstream& why) {
    topph::Hmm bell = topph::make_bell_hmm({});
    const double bell_predict = speedup_for(bell, "bell", 0, why);
    if (bell_predict < 5.0) {
        if (bell_predict >= 0) {
            why << "bell prediction speedup " << bell_predict << " < 5";
        }
        return false;
    }
    const double bell_filter = speedup_for(bell, "bell", 5, why);
    if (bell_filter < 10.0) {
        if (bell_filter >= 0) {
            why << "bell filtering speedup " << bell_filter << " < 10";
        }
        return false;
    }
    topph::Hmm uniform = topph::make_uniform_hmm(800);
    const double uniform_predict = speedup_for(uniform, "uniform", 0, why);
    if (uniform_predict >= 1.0) {
        why << "uniform prediction speedup " << uniform_predict
            << " >= 1 (expected slower than dense)";
        return false;
    }
    return true;
}

// --- 12. Language-model HMM property run -----------------------------

// Deterministic synthetic corpus standing in for a large public-domain
// text (none is available offline): 300-word vocabulary, each word
// followed by one of four fixed successors with probabilities
// 0.4/0.3/0.2/0.1, 1.2M tokens.
std::vector<std::string> synthetic_corpus() {
    const std::size_t vocab = 300;
    const std::size_t length = 1'200'000;
    std::vector<std::string> words(vocab);
    for (std::size_t i = 0; i < vocab; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "w%03zu", i);
        words[i] = buf;
    }
    std::mt19937_64 rng(104);
    std::discrete_distribution<std::size_t> successor({0.4, 0.3, 0.2, 0.1});
    std::vector<std::string> tokens;
    tokens.reserve(length);
    std::size_t state = 0;
    for (std::size_t k = 0; k < length; ++k) {
        tokens.push_back(words[state]);
        // successors of word i are i+1, i+7, i+49, i+131 (mod vocab)
        const std::size_t offsets[] = {1, 7, 49, 131};
        state = (state + offsets[successor(rng)]) % vocab;
    }
    return tokens;
}

bool criterion_12(std::ostringstream& why) {
    topph::Hmm lm = topph::hmm_from_corpus(synthetic_corpus(), {});
    auto truncated = topph::build_top_p_hmm(lm, 0.9);
    const double sparsity = topph::sparsity(truncated.transition_csr());
    if (sparsity < 0.9) {
        why << "transition sparsity " << sparsity << " < 0.9";
        return false;
    }
    topph::ExperimentConfig config;
    config.model_name = "lm";
    config.p_values = {0.9};
    config.horizon = 50;
    config.repetitions = 5;
    auto records = topph::run_experiment(lm, config);
    if (records.at(0).failed) {
        why << "run aborted: " << records.at(0).failure_reason;
        return false;
    }
    if (records.at(0).speedup <= 5.0) {
        why << "speedup " << records.at(0).speedup << " <= 5";
        return false;
    }
    return true;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "top-0.9 sunny column golden values", criterion_1},
        {2, "top-0.7 weather transition golden matrix", criterion_2},
        {3, "truncation error property over 10,000 random distributions", criterion_3},
        {4, "contraction property over random pairs", criterion_4},
        {5, "mixing bound holds on experiment runs", criterion_5},
        {6, "minimal mixing rate oracle values", criterion_6},
        {7, "uniform HMM final TV at horizon 50", criterion_7},
        {8, "bell HMM final TV at horizon 50", criterion_8},
        {9, "sparsity of truncated bell and uniform models", criterion_9},
        {10, "dense/sparse equivalence", criterion_10},
        {11, "runtime direction (bell faster, uniform slower)", criterion_11},
        {12, "language-model HMM sparsity and speedup", criterion_12},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        std::ostringstream why;
        const bool ok = c.run(why);
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": "
                  << c.title;
        if (!ok) {
            ++failures;
            std::cout << " — " << why.str();
        }
        std::cout << "\n" << std::flush;
    }
    std::cout << (failures == 0 ? "all criteria passed"
                                : std::to_string(failures) + " criterion(s) failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}

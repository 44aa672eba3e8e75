// Command-line front end: model generation, bigram training, top-p
// truncation, benchmark runs with CSV output, and error-bound reports.
//
// Exit codes: 0 success, 1 error-bound violation, 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topph/topph.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBoundViolation = 1;
constexpr int kExitInputError = 2;

struct GenerateOptions {
    std::string kind;
    std::string out;
    std::size_t states = 800;
    std::size_t heavy_count = 5;
    double heavy_mass = 0.9;
    std::uint64_t seed = 0;
};

topph::Hmm build_generated(const GenerateOptions& opt) {
    if (opt.kind == "bell") {
        return topph::make_bell_hmm({opt.states, opt.heavy_count, opt.heavy_mass, opt.seed});
    }
    if (opt.kind == "uniform") {
        return topph::make_uniform_hmm(opt.states);
    }
    if (opt.kind == "weather") {
        return topph::make_weather_hmm();
    }
    throw std::invalid_argument("unknown generator kind: " + opt.kind);
}

int cmd_generate(const GenerateOptions& opt) {
    topph::Hmm model = build_generated(opt);
    topph::save_model(model, opt.out);
    std::cout << "wrote " << opt.out << ": " << model.n_states() << " states, "
              << model.n_obs() << " observations\n";
    return kExitOk;
}

int cmd_train(const std::string& corpus_path, const std::string& out, bool lowercase,
              std::size_t min_count) {
    std::ifstream corpus(corpus_path);
    if (!corpus) {
        throw std::runtime_error("cannot open corpus: " + corpus_path);
    }
    topph::Hmm model = topph::hmm_from_corpus(corpus, {lowercase, min_count});
    topph::save_model(model, out);
    std::cout << "wrote " << out << ": vocabulary size " << model.n_states() << "\n";
    return kExitOk;
}

int cmd_truncate(const std::string& model_path, double p, const std::string& out) {
    topph::Hmm model = topph::load_model(model_path);
    topph::TopPHmm truncated = topph::build_top_p_hmm(model, p);
    topph::save_model(truncated.as_hmm(), out, /*sparse=*/true);
    const auto& rep = truncated.report();
    std::cout << "wrote " << out << "\n"
              << "p: " << rep.p << "\n"
              << "transition sparsity: " << rep.transition_sparsity << "\n"
              << "observation sparsity: " << rep.observation_sparsity << "\n"
              << "min kept mass: " << rep.min_kept_mass << "\n";
    return kExitOk;
}

struct RunOptions {
    std::string model_path;
    GenerateOptions generator;
    topph::ExperimentConfig config;
    std::string mode = "model";
    std::string out;
    std::string format = "csv";
    bool force_gamma = false;
};

int cmd_run(RunOptions& opt) {
    std::optional<topph::Hmm> model;
    if (!opt.model_path.empty()) {
        model = topph::load_model(opt.model_path);
        if (opt.config.model_name == "model") opt.config.model_name = opt.model_path;
    } else if (!opt.generator.kind.empty()) {
        model = build_generated(opt.generator);
        if (opt.config.model_name == "model") opt.config.model_name = opt.generator.kind;
    } else {
        throw std::invalid_argument("run: need --model or --generator");
    }
    opt.config.mode = opt.mode == "message" ? topph::TruncationMode::Message
                                            : topph::TruncationMode::Model;
    opt.config.force_gamma = opt.force_gamma;
    if (model->n_states() > opt.config.gamma_state_limit && !opt.force_gamma) {
        std::cerr << "note: skipping minimal mixing rate (" << model->n_states()
                  << " states; pairwise scan is cubic). Use --gamma to force.\n";
    }

    auto records = topph::run_experiment(*model, opt.config);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!opt.out.empty()) {
        file.open(opt.out);
        if (!file) throw std::runtime_error("cannot open for writing: " + opt.out);
        os = &file;
    }
    topph::write_csv(*os, records);

    int exit_code = kExitOk;
    for (const auto& rec : records) {
        if (rec.failed) {
            std::cerr << "run aborted for p=" << rec.p << ": " << rec.failure_reason << "\n";
        }
        if (rec.mixing_bound_violated) {
            std::cerr << "bound violation: tv_max " << rec.tv_max
                      << " exceeds (1-p)/gamma for p=" << rec.p << "\n";
            exit_code = kExitBoundViolation;
        }
        if (rec.mode == topph::TruncationMode::Message && rec.linear_bound_violated) {
            std::cerr << "bound violation: per-step tv exceeds (k+1)(1-p) for p=" << rec.p
                      << "\n";
            exit_code = kExitBoundViolation;
        }
    }
    return exit_code;
}

int cmd_analyze(const std::string& model_path, const std::vector<double>& p_values,
                std::size_t horizon, bool force_gamma) {
    topph::Hmm model = topph::load_model(model_path);
    if (model.n_states() > 2000 && !force_gamma) {
        std::cerr << "note: " << model.n_states()
                  << " states; the pairwise scan is cubic and may take a while.\n";
    }
    const double gamma = topph::minimal_mixing_rate(model.transition());
    std::cout << "states: " << model.n_states() << "\n"
              << "minimal mixing rate (gamma): " << gamma << "\n";
    for (double p : p_values) {
        const auto bounds = topph::error_bounds(p, gamma);
        std::cout << "p=" << p << ": linear bound at horizon " << horizon << ": "
                  << bounds.linear_bound(horizon) << "; mixing bound: ";
        if (bounds.has_mixing_guarantee()) {
            std::cout << bounds.mixing_bound() << "\n";
        } else {
            std::cout << "no mixing guarantee (gamma = 0)\n";
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Top-p truncated HMM inference toolkit"};
    app.require_subcommand(1);

    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Generate a synthetic model file");
    generate->add_option("kind", gen.kind, "bell | uniform | weather")->required();
    generate->add_option("--states", gen.states, "State count (bell/uniform)");
    generate->add_option("--heavy-count", gen.heavy_count, "Heavy states per column (bell)");
    generate->add_option("--heavy-mass", gen.heavy_mass, "Mass on heavy states (bell)");
    generate->add_option("--seed", gen.seed, "Generator seed");
    generate->add_option("--out", gen.out, "Output model file")->required();

    std::string corpus_path, train_out;
    bool lowercase = false;
    std::size_t min_count = 1;
    auto* train = app.add_subcommand("train", "Build a bigram HMM from a text corpus");
    train->add_option("corpus", corpus_path, "UTF-8 plain text file")->required();
    train->add_option("--out", train_out, "Output model file")->required();
    train->add_flag("--lowercase", lowercase, "Lowercase tokens before counting");
    train->add_option("--min-count", min_count, "Drop tokens rarer than this");

    std::string trunc_model, trunc_out;
    double trunc_p = 0.9;
    auto* truncate = app.add_subcommand("truncate", "Write the top-p model of a model file");
    truncate->add_option("model", trunc_model, "Input model file")->required();
    truncate->add_option("--p", trunc_p, "Truncation level in (0,1]")->required();
    truncate->add_option("--out", trunc_out, "Output model file")->required();

    RunOptions run;
    auto* runc = app.add_subcommand("run", "Benchmark exact vs top-p inference");
    runc->add_option("--model", run.model_path, "Model file to load");
    runc->add_option("--generator", run.generator.kind, "bell | uniform | weather");
    runc->add_option("--states", run.generator.states, "State count for the generator");
    runc->add_option("--heavy-count", run.generator.heavy_count, "Bell heavy states");
    runc->add_option("--heavy-mass", run.generator.heavy_mass, "Bell heavy mass");
    runc->add_option("--name", run.config.model_name, "Model name in the CSV");
    runc->add_option("--p", run.config.p_values, "Truncation levels (default 0.5 0.7 0.9)");
    runc->add_option("--horizon", run.config.horizon, "Number of time steps");
    runc->add_option("--obs-period", run.config.obs_period,
                     "Enter an observation every N steps (0: never)");
    runc->add_option("--mode", run.mode, "model | message")
        ->check(CLI::IsMember({"model", "message"}));
    runc->add_option("--seed", run.config.seed, "Seed for generator and observations");
    runc->add_option("--repetitions", run.config.repetitions, "Timing repetitions");
    runc->add_option("--out", run.out, "CSV output file (default stdout)");
    runc->add_option("--format", run.format, "Output format")
        ->check(CLI::IsMember({"csv"}));
    runc->add_flag("--gamma", run.force_gamma, "Compute gamma even on large models");

    std::string analyze_model;
    std::vector<double> analyze_p = {0.5, 0.7, 0.9};
    std::size_t analyze_horizon = 50;
    bool analyze_force_gamma = false;
    auto* analyze = app.add_subcommand("analyze", "Report gamma and error bounds");
    analyze->add_option("model", analyze_model, "Model file")->required();
    analyze->add_option("--p", analyze_p, "Truncation levels to bound");
    analyze->add_option("--horizon", analyze_horizon, "Horizon for the linear bound");
    analyze->add_flag("--gamma", analyze_force_gamma, "Suppress the large-model note");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (train->parsed()) return cmd_train(corpus_path, train_out, lowercase, min_count);
        if (truncate->parsed()) return cmd_truncate(trunc_model, trunc_p, trunc_out);
        if (runc->parsed()) return cmd_run(run);
        if (analyze->parsed()) {
            return cmd_analyze(analyze_model, analyze_p, analyze_horizon,
                               analyze_force_gamma);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

#ifndef TOPPH_MODEL_IO_HPP
#define TOPPH_MODEL_IO_HPP

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topph/csr.hpp"
#include "topph/hmm.hpp"
#include "topph/matrix.hpp"
#include "topph/top_p_hmm.hpp"

namespace topph {

/// Model files are JSON: version, n_states, n_obs, optional label
/// arrays, a dense prior, and the two matrices either dense (row-major
/// array of rows) or sparse (row_starts + flat cols + flat vals).
/// Doubles round-trip bit-exactly through the serializer.
inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline nlohmann::json dense_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return {{"format", "dense"}, {"rows", std::move(rows)}};
}

inline nlohmann::json sparse_to_json(const CsrMatrix& m) {
    nlohmann::json cols = nlohmann::json::array();
    nlohmann::json vals = nlohmann::json::array();
    for (const auto& e : m.entries()) {
        cols.push_back(e.col);
        vals.push_back(e.value);
    }
    return {{"format", "sparse"},
            {"n_rows", m.n_rows()},
            {"n_cols", m.n_cols()},
            {"row_starts", m.row_starts()},
            {"cols", std::move(cols)},
            {"vals", std::move(vals)}};
}

inline Matrix matrix_from_json(const nlohmann::json& j, std::size_t rows,
                               std::size_t cols) {
    const std::string format = j.at("format").get<std::string>();
    if (format == "dense") {
        const auto& r = j.at("rows");
        if (r.size() != rows) {
            throw std::invalid_argument("model file: dense matrix row count mismatch");
        }
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            if (r[i].size() != cols) {
                throw std::invalid_argument("model file: dense matrix column count mismatch");
            }
            for (std::size_t jj = 0; jj < cols; ++jj) m(i, jj) = r[i][jj].get<double>();
        }
        return m;
    }
    if (format == "sparse") {
        if (j.at("n_rows").get<std::size_t>() != rows ||
            j.at("n_cols").get<std::size_t>() != cols) {
            throw std::invalid_argument("model file: sparse matrix dimension mismatch");
        }
        auto row_starts = j.at("row_starts").get<std::vector<std::size_t>>();
        auto cols_v = j.at("cols").get<std::vector<std::size_t>>();
        auto vals = j.at("vals").get<std::vector<double>>();
        if (cols_v.size() != vals.size()) {
            throw std::invalid_argument("model file: cols/vals length mismatch");
        }
        std::vector<CsrMatrix::Entry> entries(vals.size());
        for (std::size_t k = 0; k < vals.size(); ++k) entries[k] = {cols_v[k], vals[k]};
        return CsrMatrix(rows, cols, std::move(row_starts), std::move(entries)).to_dense();
    }
    throw std::invalid_argument("model file: unknown matrix format '" + format + "'");
}

}  // namespace detail

inline nlohmann::json model_to_json(const Hmm& model, bool sparse = false) {
    nlohmann::json j;
    j["version"] = kModelFormatVersion;
    j["n_states"] = model.n_states();
    j["n_obs"] = model.n_obs();
    if (!model.state_labels().empty()) j["state_labels"] = model.state_labels();
    if (!model.obs_labels().empty()) j["obs_labels"] = model.obs_labels();
    j["prior"] = model.prior().probs();
    if (sparse) {
        j["transition"] = detail::sparse_to_json(csr_from_dense(model.transition()));
        j["observation"] = detail::sparse_to_json(csr_from_dense(model.observation()));
    } else {
        j["transition"] = detail::dense_to_json(model.transition());
        j["observation"] = detail::dense_to_json(model.observation());
    }
    return j;
}

inline Hmm model_from_json(const nlohmann::json& j) {
    if (j.at("version").get<int>() != kModelFormatVersion) {
        throw std::invalid_argument("model file: unsupported version");
    }
    const auto n_states = j.at("n_states").get<std::size_t>();
    const auto n_obs = j.at("n_obs").get<std::size_t>();
    Distribution prior(j.at("prior").get<std::vector<double>>());
    Matrix t = detail::matrix_from_json(j.at("transition"), n_states, n_states);
    Matrix b = detail::matrix_from_json(j.at("observation"), n_obs, n_states);
    std::vector<std::string> state_labels, obs_labels;
    if (j.contains("state_labels")) {
        state_labels = j.at("state_labels").get<std::vector<std::string>>();
    }
    if (j.contains("obs_labels")) {
        obs_labels = j.at("obs_labels").get<std::vector<std::string>>();
    }
    return Hmm(std::move(prior), std::move(t), std::move(b), std::move(state_labels),
               std::move(obs_labels));
}

inline void save_model(const Hmm& model, const std::string& path, bool sparse = false) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << model_to_json(model, sparse).dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

inline Hmm load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open model file: " + path);
    }
    nlohmann::json j;
    in >> j;
    return model_from_json(j);
}

}  // namespace topph

#endif  // TOPPH_MODEL_IO_HPP

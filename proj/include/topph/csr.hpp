#ifndef TOPPH_CSR_HPP
#define TOPPH_CSR_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "topph/hmm.hpp"
#include "topph/matrix.hpp"

namespace topph {

/// Compressed row storage: per row, a (column, value) tuple for every
/// non-zero entry, columns strictly increasing within a row.
class CsrMatrix {
public:
    struct Entry {
        std::size_t col;
        double value;
        bool operator==(const Entry&) const = default;
    };

    CsrMatrix(std::size_t n_rows, std::size_t n_cols,
              std::vector<std::size_t> row_starts, std::vector<Entry> entries)
        : n_rows_(n_rows),
          n_cols_(n_cols),
          row_starts_(std::move(row_starts)),
          entries_(std::move(entries)) {
        if (n_rows == 0 || n_cols == 0) {
            throw std::invalid_argument("CsrMatrix: dimensions must be positive");
        }
        if (row_starts_.size() != n_rows_ + 1 || row_starts_.front() != 0 ||
            row_starts_.back() != entries_.size()) {
            throw std::invalid_argument("CsrMatrix: malformed row_starts");
        }
        for (std::size_t i = 0; i < n_rows_; ++i) {
            if (row_starts_[i] > row_starts_[i + 1]) {
                throw std::invalid_argument("CsrMatrix: row_starts not non-decreasing");
            }
            for (std::size_t k = row_starts_[i]; k < row_starts_[i + 1]; ++k) {
                if (entries_[k].col >= n_cols_) {
                    throw std::invalid_argument("CsrMatrix: column index out of range");
                }
                if (k > row_starts_[i] && entries_[k - 1].col >= entries_[k].col) {
                    throw std::invalid_argument(
                        "CsrMatrix: columns not strictly increasing within a row");
                }
                if (entries_[k].value == 0.0) {
                    throw std::invalid_argument("CsrMatrix: stored zero entry");
                }
            }
        }
    }

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return n_cols_; }
    std::size_t n_stored() const { return entries_.size(); }
    const std::vector<std::size_t>& row_starts() const { return row_starts_; }
    const std::vector<Entry>& entries() const { return entries_; }

    std::span<const Entry> row(std::size_t i) const {
        return {entries_.data() + row_starts_[i], row_starts_[i + 1] - row_starts_[i]};
    }

    Matrix to_dense() const {
        Matrix m(n_rows_, n_cols_);
        for (std::size_t i = 0; i < n_rows_; ++i) {
            for (const Entry& e : row(i)) m(i, e.col) = e.value;
        }
        return m;
    }

    bool operator==(const CsrMatrix&) const = default;

private:
    std::size_t n_rows_;
    std::size_t n_cols_;
    std::vector<std::size_t> row_starts_;
    std::vector<Entry> entries_;
};

/// Convert a dense matrix, dropping entries with |value| <= zero_tol.
/// The default keeps everything but exact zeros, which is what top-p
/// truncation produces.
inline CsrMatrix csr_from_dense(const Matrix& m, double zero_tol = 0.0) {
    if (zero_tol < 0.0) {
        throw std::invalid_argument("csr_from_dense: zero_tol must be >= 0");
    }
    std::vector<std::size_t> row_starts(m.rows() + 1, 0);
    std::vector<CsrMatrix::Entry> entries;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double x = m(i, j);
            if (std::abs(x) > zero_tol) entries.push_back({j, x});
        }
        row_starts[i + 1] = entries.size();
    }
    return CsrMatrix(m.rows(), m.cols(), std::move(row_starts), std::move(entries));
}

/// Sparse matrix-vector product. Each output component is the dot
/// product of a row with v, summing value * v[col] over the stored
/// tuples, so the cost is proportional to the number of non-zeros.
/// op_count, when given, receives the number of multiply-adds performed.
inline std::vector<double> spmv(const CsrMatrix& m, std::span<const double> v,
                                std::size_t* op_count = nullptr) {
    if (v.size() != m.n_cols()) {
        throw std::invalid_argument("spmv: dimension mismatch");
    }
    std::vector<double> out(m.n_rows(), 0.0);
    const auto& starts = m.row_starts();
    const auto& entries = m.entries();
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        double acc = 0.0;
        for (std::size_t k = starts[i]; k < starts[i + 1]; ++k) {
            acc += entries[k].value * v[entries[k].col];
        }
        out[i] = acc;
    }
    if (op_count) *op_count = entries.size();
    return out;
}

/// Forward prediction through a CSR transition matrix stored by
/// output-state rows, so spmv computes T * msg directly. The result is
/// renormalized: the truncated columns sum to one analytically, but
/// rounding would otherwise drift over long runs.
inline ForwardMessage sparse_predict_step(const CsrMatrix& t_csr,
                                          const ForwardMessage& msg) {
    auto out = spmv(t_csr, msg.dist.probs());
    double sum = 0.0;
    for (double x : out) sum += x;
    if (sum <= 0.0) {
        throw std::invalid_argument("sparse_predict_step: message annihilated");
    }
    for (double& x : out) x /= sum;
    return ForwardMessage{Distribution(std::move(out)), msg.time + 1};
}

/// Sparse counterpart of filter_step: predict through t_csr, weight by
/// the observation row of b_csr, renormalize.
inline ForwardMessage sparse_filter_step(const CsrMatrix& t_csr, const CsrMatrix& b_csr,
                                         const ForwardMessage& msg, std::size_t obs) {
    if (obs >= b_csr.n_rows()) {
        throw std::invalid_argument("sparse_filter_step: observation id out of range");
    }
    auto pred = spmv(t_csr, msg.dist.probs());
    std::vector<double> post(pred.size(), 0.0);
    double total = 0.0;
    for (const CsrMatrix::Entry& e : b_csr.row(obs)) {
        post[e.col] = e.value * pred[e.col];
        total += post[e.col];
    }
    if (total <= 0.0) {
        throw DegenerateEvidenceError(
            "sparse_filter_step: observation " + std::to_string(obs) +
            " has zero likelihood under the predicted message");
    }
    for (double& x : post) x /= total;
    return ForwardMessage{Distribution(std::move(post)), msg.time + 1};
}

}  // namespace topph

#endif  // TOPPH_CSR_HPP

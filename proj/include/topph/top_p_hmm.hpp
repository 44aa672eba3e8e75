#ifndef TOPPH_TOP_P_HMM_HPP
#define TOPPH_TOP_P_HMM_HPP

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "topph/csr.hpp"
#include "topph/distribution.hpp"
#include "topph/hmm.hpp"
#include "topph/matrix.hpp"

namespace topph {

/// Fraction of zero entries in the matrix.
inline double sparsity(const CsrMatrix& m) {
    const double total = static_cast<double>(m.n_rows()) * static_cast<double>(m.n_cols());
    return 1.0 - static_cast<double>(m.n_stored()) / total;
}

/// Truncation statistics for one build. per_column_kept_mass covers the
/// transition columns followed by the observation columns; min_kept_mass
/// additionally folds in the prior.
struct TopPReport {
    double p = 1.0;
    double transition_sparsity = 0.0;
    double observation_sparsity = 0.0;
    double min_kept_mass = 1.0;
    std::vector<double> per_column_kept_mass;
};

/// An HMM whose prior, transition columns and observation columns have
/// each been replaced by their top-p distributions, with the matrices
/// held in CSR for sparse inference.
class TopPHmm {
public:
    TopPHmm(Hmm base, double p, Distribution prior, CsrMatrix transition_csr,
            CsrMatrix observation_csr, TopPReport report)
        : base_(std::move(base)),
          p_(p),
          prior_(std::move(prior)),
          transition_csr_(std::move(transition_csr)),
          observation_csr_(std::move(observation_csr)),
          report_(std::move(report)) {}

    const Hmm& base() const { return base_; }
    double p() const { return p_; }
    const Distribution& prior() const { return prior_; }
    const CsrMatrix& transition_csr() const { return transition_csr_; }
    const CsrMatrix& observation_csr() const { return observation_csr_; }
    const TopPReport& report() const { return report_; }

    /// Densify back into a regular Hmm (labels carried over).
    Hmm as_hmm() const {
        return Hmm(prior_, transition_csr_.to_dense(), observation_csr_.to_dense(),
                   base_.state_labels(), base_.obs_labels());
    }

private:
    Hmm base_;
    double p_;
    Distribution prior_;
    CsrMatrix transition_csr_;
    CsrMatrix observation_csr_;
    TopPReport report_;
};

namespace detail {

// Truncate every column of a column-stochastic matrix independently,
// recording the kept mass per column.
inline Matrix truncate_columns(const Matrix& m, double p,
                               std::vector<double>& kept_masses) {
    Matrix out(m.rows(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        TopPResult r = top_p_distribution(Distribution(m.column(j)), p);
        out.set_column(j, r.distribution.probs());
        kept_masses.push_back(r.kept_mass);
    }
    return out;
}

}  // namespace detail

/// Build the top-p HMM: apply the top-p transform independently to the
/// prior, each transition column and each observation column, and store
/// the truncated matrices in CSR.
inline TopPHmm build_top_p_hmm(const Hmm& model, double p) {
    detail::check_p(p);

    TopPReport report;
    report.p = p;

    TopPResult prior = top_p_distribution(model.prior(), p);
    Matrix t = detail::truncate_columns(model.transition(), p, report.per_column_kept_mass);
    Matrix b = detail::truncate_columns(model.observation(), p, report.per_column_kept_mass);

    CsrMatrix t_csr = csr_from_dense(t);
    CsrMatrix b_csr = csr_from_dense(b);
    report.transition_sparsity = sparsity(t_csr);
    report.observation_sparsity = sparsity(b_csr);
    report.min_kept_mass = prior.kept_mass;
    for (double m : report.per_column_kept_mass) {
        report.min_kept_mass = std::min(report.min_kept_mass, m);
    }

    return TopPHmm(model, p, std::move(prior.distribution), std::move(t_csr),
                   std::move(b_csr), std::move(report));
}

}  // namespace topph

#endif  // TOPPH_TOP_P_HMM_HPP

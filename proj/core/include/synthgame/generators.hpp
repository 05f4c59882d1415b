#pragma once

#include <vector>

#include "synthgame/rng.hpp"
#include "synthgame/tabular.hpp"

namespace synthgame {

enum class GeneratorKind { independent, copula };

/// Fitted generative model behind a single fit/sample contract. Marginals
/// are empirical per column (level frequencies for categoricals, the sorted
/// training values as a quantile function for continuous/date). The copula
/// variant additionally couples columns through a latent Gaussian vector
/// whose correlation is derived from pairwise Spearman.
struct GenModel {
    GeneratorKind kind = GeneratorKind::independent;
    Schema schema;
    RecordId max_training_id = -1;

    struct Marginal {
        std::vector<double> level_frequencies;   // categorical; sums to 1
        std::vector<double> level_cumulative;    // running sums, back() == 1
        std::vector<double> sorted_values;       // continuous/date quantile table
    };
    std::vector<Marginal> marginals;

    // copula only: latent correlation (row major) and its Cholesky factor
    std::vector<double> latent_correlation;
    std::vector<double> cholesky;
};

/// Per-column empirical marginals, no cross-column dependence.
GenModel fit_independent(const Table& train);

/// Marginals as fit_independent plus a latent Gaussian correlation
/// r_ij = 2*sin(pi*rho_ij/6) from pairwise Spearman on the integer-encoded
/// columns, regularized by eigenvalue flooring at 1e-6 and re-normalized to
/// unit diagonal.
GenModel fit_copula(const Table& train);

GenModel fit_generator(GeneratorKind kind, const Table& train);

/// Draw n rows. Independent: every cell from its own marginal. Copula:
/// correlated latent normals mapped through the normal CDF and inverted
/// through the empirical quantile functions. Fresh row ids start above the
/// training table's ids.
Table sample(const GenModel& model, size_t n, Rng& rng);

} // namespace synthgame

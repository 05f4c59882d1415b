#include "synthgame/generators.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "synthgame/stats.hpp"

namespace synthgame {

namespace {

constexpr double kEigenvalueFloor = 1e-6;
constexpr double kLatentClamp = 0.999999;

GenModel::Marginal fit_marginal(const Table& train, size_t col) {
    GenModel::Marginal m;
    const ColumnSpec& spec = train.schema().column(col);
    if (spec.kind == ColumnKind::categorical) {
        m.level_frequencies.assign(spec.levels.size(), 0.0);
        for (const auto& row : train.rows()) {
            if (row[col].is_missing())
                throw Error(Errc::missing_value, "missing value in column '" + spec.name + "'");
            m.level_frequencies[size_t(row[col].cat_index())] += 1.0;
        }
        double total = double(train.row_count());
        double running = 0.0;
        m.level_cumulative.reserve(m.level_frequencies.size());
        for (double& f : m.level_frequencies) {
            f /= total;
            running += f;
            m.level_cumulative.push_back(running);
        }
        m.level_cumulative.back() = 1.0;
    } else {
        m.sorted_values = train.column_as_doubles(col);
        std::sort(m.sorted_values.begin(), m.sorted_values.end());
    }
    return m;
}

/// Empirical quantile: Q(u) = sorted[floor(u*n)], clamped to the last value.
double empirical_quantile(const std::vector<double>& sorted, double u) {
    size_t idx = size_t(std::min(std::floor(u * double(sorted.size())), double(sorted.size() - 1)));
    return sorted[idx];
}

int32_t cumulative_lookup(const std::vector<double>& cumulative, double u) {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return int32_t(it - cumulative.begin());
}

RecordId max_id(const Table& table) {
    RecordId m = -1;
    for (RecordId id : table.row_ids()) m = std::max(m, id);
    return m;
}

GenModel fit_marginals_only(const Table& train) {
    if (train.row_count() == 0) throw Error(Errc::empty_table, "cannot fit on an empty table");
    GenModel model;
    model.schema = train.schema();
    model.max_training_id = max_id(train);
    model.marginals.reserve(train.column_count());
    for (size_t c = 0; c < train.column_count(); ++c)
        model.marginals.push_back(fit_marginal(train, c));
    return model;
}

} // namespace

GenModel fit_independent(const Table& train) {
    GenModel model = fit_marginals_only(train);
    model.kind = GeneratorKind::independent;
    return model;
}

GenModel fit_copula(const Table& train) {
    if (train.row_count() < 3) throw Error(Errc::too_few_rows, "copula fit needs at least 3 rows");
    GenModel model = fit_marginals_only(train);
    model.kind = GeneratorKind::copula;

    const size_t k = train.column_count();
    std::vector<std::vector<double>> encoded(k);
    for (size_t c = 0; c < k; ++c) encoded[c] = train.column_as_doubles(c);

    Eigen::MatrixXd latent = Eigen::MatrixXd::Identity(Eigen::Index(k), Eigen::Index(k));
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 1; j < k; ++j) {
            double rho = spearman(encoded[i], encoded[j]);
            double r = 2.0 * std::sin(M_PI * rho / 6.0);
            r = std::clamp(r, -kLatentClamp, kLatentClamp);
            latent(Eigen::Index(i), Eigen::Index(j)) = r;
            latent(Eigen::Index(j), Eigen::Index(i)) = r;
        }
    }

    // Rank-deficient subsamples must never abort a fit: floor the spectrum,
    // re-normalize to unit diagonal, then factor.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(latent);
    Eigen::VectorXd values = eigen.eigenvalues().cwiseMax(kEigenvalueFloor);
    Eigen::MatrixXd floored =
        eigen.eigenvectors() * values.asDiagonal() * eigen.eigenvectors().transpose();
    Eigen::VectorXd scale = floored.diagonal().cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd normalized = scale.asDiagonal() * floored * scale.asDiagonal();

    Eigen::LLT<Eigen::MatrixXd> llt(normalized);
    if (llt.info() != Eigen::Success) {
        normalized.diagonal().array() += 1e-9;
        llt.compute(normalized);
        if (llt.info() != Eigen::Success)
            throw Error(Errc::invalid_argument, "correlation matrix not factorizable");
    }
    Eigen::MatrixXd chol = llt.matrixL();

    model.latent_correlation.assign(k * k, 0.0);
    model.cholesky.assign(k * k, 0.0);
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) {
            model.latent_correlation[i * k + j] = normalized(Eigen::Index(i), Eigen::Index(j));
            model.cholesky[i * k + j] = chol(Eigen::Index(i), Eigen::Index(j));
        }
    }
    return model;
}

GenModel fit_generator(GeneratorKind kind, const Table& train) {
    return kind == GeneratorKind::copula ? fit_copula(train) : fit_independent(train);
}

Table sample(const GenModel& model, size_t n, Rng& rng) {
    if (n == 0) throw Error(Errc::invalid_count, "sample size must be at least 1");
    const size_t k = model.schema.size();
    std::vector<std::vector<Cell>> rows;
    std::vector<RecordId> ids;
    rows.reserve(n);
    ids.reserve(n);

    std::vector<double> z(k), w(k);
    for (size_t r = 0; r < n; ++r) {
        std::vector<Cell> row(k);
        if (model.kind == GeneratorKind::copula) {
            for (size_t c = 0; c < k; ++c) z[c] = rng.normal();
            for (size_t i = 0; i < k; ++i) {
                double acc = 0.0;
                for (size_t j = 0; j <= i; ++j) acc += model.cholesky[i * k + j] * z[j];
                w[i] = acc;
            }
        }
        for (size_t c = 0; c < k; ++c) {
            double u = model.kind == GeneratorKind::copula ? Rng::normal_cdf(w[c]) : rng.uniform01();
            const auto& marginal = model.marginals[c];
            switch (model.schema.column(c).kind) {
                case ColumnKind::categorical:
                    row[c] = Cell::cat(cumulative_lookup(marginal.level_cumulative, u));
                    break;
                case ColumnKind::continuous:
                    row[c] = Cell::num(empirical_quantile(marginal.sorted_values, u));
                    break;
                case ColumnKind::date:
                    row[c] = Cell::date(
                        int32_t(std::lround(empirical_quantile(marginal.sorted_values, u))));
                    break;
            }
        }
        rows.push_back(std::move(row));
        ids.push_back(model.max_training_id + 1 + RecordId(r));
    }
    return Table(model.schema, std::move(rows), std::move(ids));
}

} // namespace synthgame

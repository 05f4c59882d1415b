#include "synthgame/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "synthgame/parallel.hpp"
#include "synthgame/stats.hpp"

namespace synthgame {

namespace {

void require_same_schema(const Table& a, const Table& b) {
    if (!(a.schema() == b.schema()))
        throw Error(Errc::schema_mismatch, "original and synthetic schemas differ");
}

double squared_distance(const double* a, const double* b, size_t dims) {
    double acc = 0.0;
    for (size_t i = 0; i < dims; ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

std::vector<Cell> column_cells(const Table& table, size_t col) {
    std::vector<Cell> cells;
    cells.reserve(table.row_count());
    for (const auto& row : table.rows()) cells.push_back(row[col]);
    return cells;
}

} // namespace

double nearest_neighbor_score(const Table& original, const Table& synthetic, int threads) {
    require_same_schema(original, synthetic);
    if (original.row_count() == 0 || synthetic.row_count() == 0)
        throw Error(Errc::empty_table, "nearest_neighbor_score needs non-empty tables");

    auto shared = union_bounds(column_bounds(original), column_bounds(synthetic));
    EncodedMatrix enc_orig = encode_numeric(original, shared);
    EncodedMatrix enc_syn = encode_numeric(synthetic, shared);

    const double scale = std::sqrt(double(original.column_count()));
    std::vector<double> min_dist(enc_syn.rows);
    parallel_for(enc_syn.rows, threads, [&](size_t s) {
        double best = std::numeric_limits<double>::infinity();
        const double* srow = enc_syn.row(s);
        for (size_t o = 0; o < enc_orig.rows; ++o)
            best = std::min(best, squared_distance(srow, enc_orig.row(o), enc_syn.dims));
        min_dist[s] = std::sqrt(best) / scale;
    });
    // reduction order is fixed so thread count cannot change the result
    double sum = 0.0;
    for (double d : min_dist) sum += d;
    return sum / double(enc_syn.rows);
}

namespace {

// strict weak order over rows so std::set can index the original tuples
struct RowLess {
    bool operator()(const std::vector<Cell>& a, const std::vector<Cell>& b) const {
        for (size_t i = 0; i < a.size(); ++i) {
            const Cell& x = a[i];
            const Cell& y = b[i];
            if (x.kind() != y.kind()) return x.kind() < y.kind();
            switch (x.kind()) {
                case Cell::Kind::missing:
                    break;
                case Cell::Kind::cat:
                    if (x.cat_index() != y.cat_index()) return x.cat_index() < y.cat_index();
                    break;
                case Cell::Kind::num:
                    if (x.num_value() != y.num_value()) return x.num_value() < y.num_value();
                    break;
                case Cell::Kind::date:
                    if (x.date_days() != y.date_days()) return x.date_days() < y.date_days();
                    break;
            }
        }
        return false;
    }
};

} // namespace

size_t exact_match_count(const Table& original, const Table& synthetic) {
    require_same_schema(original, synthetic);
    std::set<std::vector<Cell>, RowLess> index(original.rows().begin(), original.rows().end());
    size_t matches = 0;
    for (const auto& row : synthetic.rows())
        if (index.count(row)) ++matches;
    return matches;
}

FidelityReport fidelity_report(const Table& original, const Table& synthetic, int threads) {
    require_same_schema(original, synthetic);
    if (original.has_missing() || synthetic.has_missing())
        throw Error(Errc::missing_value, "fidelity_report needs complete cases");

    FidelityReport report;
    report.nn_distance = nearest_neighbor_score(original, synthetic, threads);
    report.exact_matches = exact_match_count(original, synthetic);

    double js_sum = 0.0, ks_sum = 0.0, chi2_sum = 0.0;
    size_t ks_count = 0, chi2_count = 0;
    for (size_t c = 0; c < original.column_count(); ++c) {
        const ColumnSpec& spec = original.schema().column(c);
        ColumnFidelity col;
        col.column = spec.name;

        auto orig_cells = column_cells(original, c);
        auto syn_cells = column_cells(synthetic, c);

        std::optional<std::pair<double, double>> range;
        if (spec.kind != ColumnKind::categorical) {
            auto ov = original.column_as_doubles(c);
            auto sv = synthetic.column_as_doubles(c);
            auto [olo, ohi] = std::minmax_element(ov.begin(), ov.end());
            auto [slo, shi] = std::minmax_element(sv.begin(), sv.end());
            range = {std::min(*olo, *slo), std::max(*ohi, *shi)};
            col.ks = ks_score(ov, sv);
            ks_sum += *col.ks;
            ++ks_count;
        }
        col.js = js_distance(histogram(orig_cells, spec, range), histogram(syn_cells, spec, range));
        js_sum += col.js;

        if (spec.kind == ColumnKind::categorical) {
            std::vector<double> observed(spec.levels.size(), 0.0);
            for (const Cell& cell : syn_cells) observed[size_t(cell.cat_index())] += 1.0;
            std::vector<double> reference(spec.levels.size(), 0.0);
            for (const Cell& cell : orig_cells) reference[size_t(cell.cat_index())] += 1.0;
            for (double& f : reference) f /= double(orig_cells.size());
            col.chi2 = chi2_score(observed, reference);
            chi2_sum += *col.chi2;
            ++chi2_count;
        }
        report.per_column.push_back(std::move(col));
    }
    report.js_mean = js_sum / double(original.column_count());
    if (ks_count > 0) report.ks_mean = ks_sum / double(ks_count);
    if (chi2_count > 0) report.chi2_mean = chi2_sum / double(chi2_count);
    return report;
}

namespace {

struct KMeansRun {
    std::vector<size_t> assignment;
    std::vector<size_t> sizes;
    double wcss = 0.0;
    bool degenerate = false;
};

KMeansRun lloyd(const EncodedMatrix& data, size_t k, Rng& rng) {
    const size_t n = data.rows;
    const size_t dims = data.dims;

    // k-means++ seeding
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    size_t first = size_t(rng.uniform_below(n));
    centroids.emplace_back(data.row(first), data.row(first) + dims);
    std::vector<double> d2(n, 0.0);
    while (centroids.size() < k) {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centroids)
                best = std::min(best, squared_distance(data.row(i), c.data(), dims));
            d2[i] = best;
            total += best;
        }
        size_t pick;
        if (total <= 0.0) {
            pick = size_t(rng.uniform_below(n)); // all points coincide with centroids
        } else {
            double target = rng.uniform01() * total;
            double acc = 0.0;
            pick = n - 1;
            for (size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.emplace_back(data.row(pick), data.row(pick) + dims);
    }

    KMeansRun run;
    run.assignment.assign(n, 0);
    run.sizes.assign(k, 0);
    double previous_wcss = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < 100; ++iter) {
        // assign
        std::fill(run.sizes.begin(), run.sizes.end(), size_t{0});
        double wcss = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            size_t arg = 0;
            for (size_t c = 0; c < k; ++c) {
                double d = squared_distance(data.row(i), centroids[c].data(), dims);
                if (d < best) {
                    best = d;
                    arg = c;
                }
            }
            run.assignment[i] = arg;
            run.sizes[arg] += 1;
            wcss += best;
        }

        // re-seed empty clusters to the point farthest from its centroid
        bool reseeded = false;
        for (size_t c = 0; c < k; ++c) {
            if (run.sizes[c] > 0) continue;
            double worst = -1.0;
            size_t far = 0;
            for (size_t i = 0; i < n; ++i) {
                double d = squared_distance(data.row(i), centroids[run.assignment[i]].data(), dims);
                if (d > worst) {
                    worst = d;
                    far = i;
                }
            }
            if (worst <= 0.0) {
                run.degenerate = true; // nothing to separate; give up on this cluster
                continue;
            }
            centroids[c].assign(data.row(far), data.row(far) + dims);
            reseeded = true;
        }
        if (reseeded) {
            previous_wcss = std::numeric_limits<double>::infinity();
            continue;
        }

        // Lloyd iterations must never increase the objective
        if (wcss > previous_wcss * (1.0 + 1e-9))
            throw Error(Errc::invalid_argument, "k-means objective increased");
        double shift = std::abs(previous_wcss - wcss);
        previous_wcss = wcss;
        run.wcss = wcss;

        // update
        std::vector<std::vector<double>> next(k, std::vector<double>(dims, 0.0));
        for (size_t i = 0; i < n; ++i) {
            const double* row = data.row(i);
            auto& c = next[run.assignment[i]];
            for (size_t d = 0; d < dims; ++d) c[d] += row[d];
        }
        double centroid_shift = 0.0;
        for (size_t c = 0; c < k; ++c) {
            if (run.sizes[c] == 0) continue;
            for (size_t d = 0; d < dims; ++d) next[c][d] /= double(run.sizes[c]);
            centroid_shift += std::sqrt(squared_distance(next[c].data(), centroids[c].data(), dims));
            centroids[c] = next[c];
        }
        if (centroid_shift < 1e-6 || shift == 0.0) break;
    }
    return run;
}

} // namespace

ClusterVulnerability cluster_vulnerability(const Table& table, size_t k_max, size_t restarts,
                                           Rng& rng) {
    if (k_max < 1 || restarts < 1)
        throw Error(Errc::invalid_argument, "k_max and restarts must be at least 1");
    if (table.row_count() < k_max)
        throw Error(Errc::too_few_rows, "need at least " + std::to_string(k_max) + " rows");

    EncodedMatrix data = encode_numeric(table);
    KMeansRun best;
    bool have = false;
    for (size_t r = 0; r < restarts; ++r) {
        KMeansRun run = lloyd(data, k_max, rng);
        if (!have || run.wcss < best.wcss) {
            best = std::move(run);
            have = true;
        }
    }

    ClusterVulnerability result;
    result.k_requested = k_max;
    result.degenerate = best.degenerate;
    for (size_t size : best.sizes)
        if (size > 0) result.cluster_sizes.push_back(size);
    std::sort(result.cluster_sizes.begin(), result.cluster_sizes.end());
    result.k_used = result.cluster_sizes.size();
    result.degenerate = result.degenerate || result.k_used < k_max;
    result.min_cluster_fraction =
        double(result.cluster_sizes.front()) / double(table.row_count());
    return result;
}

} // namespace synthgame

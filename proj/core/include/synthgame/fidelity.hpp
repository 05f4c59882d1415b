#pragma once

#include <optional>
#include <string>
#include <vector>

#include "synthgame/rng.hpp"
#include "synthgame/tabular.hpp"

namespace synthgame {

struct ColumnFidelity {
    std::string column;
    double js = 0.0;
    std::optional<double> ks;   // continuous/date columns
    std::optional<double> chi2; // categorical columns
};

struct FidelityReport {
    double nn_distance = 0.0;
    double js_mean = 0.0;
    std::optional<double> ks_mean;   // absent when no continuous/date columns
    std::optional<double> chi2_mean; // absent when no categorical columns
    size_t exact_matches = 0;
    std::vector<ColumnFidelity> per_column;
};

struct ClusterVulnerability {
    size_t k_requested = 0;
    size_t k_used = 0; // non-empty clusters
    double min_cluster_fraction = 0.0;
    std::vector<size_t> cluster_sizes;
    bool degenerate = false; // empty clusters could not be re-seeded apart
};

/// Mean over synthetic records of the scaled distance to the closest
/// original record: tables are encoded with shared bounds over the union
/// and distances divided by sqrt(#attributes), so the value lies in [0,1].
double nearest_neighbor_score(const Table& original, const Table& synthetic, int threads = 1);

/// Synthetic rows whose full cell tuple equals some original row.
size_t exact_match_count(const Table& original, const Table& synthetic);

/// Aggregate assessment: per-column JS distance (shared binning), KS score
/// for continuous/date, chi-squared score for categoricals (reference =
/// original frequencies), plus NN distance and exact matches.
FidelityReport fidelity_report(const Table& original, const Table& synthetic, int threads = 1);

/// Lloyd k-means with k-means++ seeding on the numeric encoding, best of
/// `restarts` by within-cluster sum of squares; empty clusters re-seed to
/// the farthest point. Reports the minimum cluster fraction.
ClusterVulnerability cluster_vulnerability(const Table& table, size_t k_max, size_t restarts,
                                           Rng& rng);

} // namespace synthgame

#pragma once

#include <cstdint>
#include <vector>

#include "synthgame/tabular.hpp"

namespace synthgame {

/// Deterministic stand-in for a private cancer-registry extract: mixed
/// categorical/continuous/date columns with quasi-identifier flags, a ~5%
/// minority cluster, and a handful of planted outlier rows. The ground
/// truth (minority membership, outlier ids, the most typical "modal" rows)
/// is returned so experiments can target specific records.
struct ToyData {
    Table table;
    std::vector<RecordId> outlier_ids;
    std::vector<RecordId> modal_ids;
    std::vector<RecordId> minority_ids;
    double minority_fraction = 0.0;
};

/// Schema: age_at_diagnosis, gender, diagnosis_quarter (categorical QI),
/// diagnosis_date (raw date twin, not a QI), radiation, person_status,
/// primary_surgery_date, tumor_site, followup_days.
Schema toy_schema();

ToyData make_toy(size_t n, uint64_t seed);

} // namespace synthgame

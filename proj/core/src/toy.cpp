#include "synthgame/toy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "synthgame/rng.hpp"

namespace synthgame {

namespace {

std::vector<std::string> quarter_levels() {
    std::vector<std::string> levels;
    for (int year = 2018; year <= 2021; ++year)
        for (int q = 1; q <= 4; ++q)
            levels.push_back(std::to_string(year) + "Q" + std::to_string(q));
    return levels;
}

int32_t quarter_index(int32_t days) {
    // maps a day count onto the 2018Q1..2021Q4 grid, clamping outside dates
    std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
    int year = int(ymd.year());
    int quarter = (int(unsigned(ymd.month())) - 1) / 3;
    int index = (year - 2018) * 4 + quarter;
    return int32_t(std::clamp(index, 0, 15));
}

double clip(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

} // namespace

Schema toy_schema() {
    std::vector<ColumnSpec> columns;
    columns.push_back({"age_at_diagnosis", ColumnKind::continuous, {}, true, true});
    columns.push_back({"gender", ColumnKind::categorical, {"female", "male"}, true, false});
    columns.push_back({"diagnosis_quarter", ColumnKind::categorical, quarter_levels(), true, true});
    columns.push_back({"diagnosis_date", ColumnKind::date, {}, false, true});
    columns.push_back({"radiation", ColumnKind::categorical, {"no", "yes"}, true, true});
    columns.push_back(
        {"person_status", ColumnKind::categorical, {"alive", "deceased", "emigrated"}, true, false});
    columns.push_back({"primary_surgery_date", ColumnKind::date, {}, true, true});
    columns.push_back({"tumor_site",
                       ColumnKind::categorical,
                       {"ascending", "descending", "rectum", "sigmoid", "transverse"},
                       false,
                       true});
    columns.push_back({"followup_days", ColumnKind::continuous, {}, false, false});
    return Schema(std::move(columns));
}

ToyData make_toy(size_t n, uint64_t seed) {
    if (n < 100) throw Error(Errc::invalid_argument, "toy dataset needs n >= 100");
    Schema schema = toy_schema();
    Rng rng(mix_seed(seed, 0x1077));

    const size_t n_outlier = std::clamp<size_t>(n / 250, 6, 24);
    const size_t n_modal = 10;
    const size_t n_minority = size_t(std::lround(0.05 * double(n)));
    const size_t n_majority = n - n_minority - n_modal - n_outlier;

    const int32_t majority_start = parse_iso_date("2018-07-01");
    const int32_t majority_end = parse_iso_date("2021-12-31");
    const int32_t outlier_start = parse_iso_date("2018-01-05");

    std::vector<std::vector<Cell>> rows;
    std::vector<RecordId> ids;
    rows.reserve(n);
    ids.reserve(n);
    ToyData out;

    auto push_row = [&](double age, int32_t gender, int32_t diag_days, int32_t radiation,
                        int32_t status, int32_t surgery_days, int32_t site, double followup) {
        std::vector<Cell> row(9);
        row[0] = Cell::num(age);
        row[1] = Cell::cat(gender);
        row[2] = Cell::cat(quarter_index(diag_days));
        row[3] = Cell::date(diag_days);
        row[4] = Cell::cat(radiation);
        row[5] = Cell::cat(status);
        row[6] = Cell::date(surgery_days);
        row[7] = Cell::cat(site);
        row[8] = Cell::num(followup);
        ids.push_back(RecordId(rows.size()));
        rows.push_back(std::move(row));
    };

    auto pick_site = [&](double u) -> int32_t {
        // ascending, descending, rectum, sigmoid, transverse
        static const double cum[] = {0.15, 0.25, 0.60, 0.90, 1.00};
        for (int32_t i = 0; i < 5; ++i)
            if (u < cum[i]) return i;
        return 4;
    };

    // followup shortens with age; shared by all regular rows so age and
    // followup carry a strong rank dependence for the copula to preserve
    auto followup_for = [&](double age, double noise) {
        return std::round(clip(3650.0 - 30.0 * (age - 40.0) + noise, 30.0, 4000.0));
    };

    // majority: older patients, diagnoses spread over 2018H2..2021
    for (size_t i = 0; i < n_majority; ++i) {
        double age = std::round(clip(70.0 + 9.0 * rng.normal(), 40.0, 94.0));
        int32_t gender = rng.uniform01() < 0.52 ? 1 : 0;
        int32_t diag =
            majority_start + int32_t(rng.uniform_below(uint64_t(majority_end - majority_start + 1)));
        int32_t radiation = rng.uniform01() < 0.35 ? 1 : 0;
        double su = rng.uniform01();
        int32_t status = su < 0.55 ? 0 : (su < 0.97 ? 1 : 2);
        int32_t surgery = diag + 20 + int32_t(rng.uniform_below(161));
        int32_t site = pick_site(rng.uniform01());
        push_row(age, gender, diag, radiation, status, surgery, site,
                 followup_for(age, 200.0 * rng.normal()));
    }

    // minority cluster (~5%): young, radiation-treated, often emigrated
    for (size_t i = 0; i < n_minority; ++i) {
        out.minority_ids.push_back(RecordId(rows.size()));
        double age = std::round(clip(44.0 + 4.0 * rng.normal(), 32.0, 55.0));
        int32_t gender = rng.uniform01() < 0.5 ? 1 : 0;
        int32_t span = majority_end - majority_start + 1;
        int32_t diag = majority_start + int32_t(rng.uniform_below(uint64_t(span)));
        int32_t radiation = rng.uniform01() < 0.9 ? 1 : 0;
        double su = rng.uniform01();
        int32_t status = su < 0.25 ? 0 : (su < 0.30 ? 1 : 2);
        int32_t surgery = diag + 20 + int32_t(rng.uniform_below(161));
        int32_t site = pick_site(rng.uniform01());
        push_row(age, gender, diag, radiation, status, surgery, site,
                 followup_for(age, 200.0 * rng.normal()));
    }

    // modal rows: hand-typical records near the majority mode
    for (size_t i = 0; i < n_modal; ++i) {
        out.modal_ids.push_back(RecordId(rows.size()));
        double age = 68.0 + double(i % 5);
        int32_t gender = int32_t(i % 2);
        int32_t diag = parse_iso_date("2020-03-15") + int32_t(30 * (i % 4));
        int32_t radiation = 0;
        int32_t status = 0;
        int32_t surgery = diag + 90;
        int32_t site = i % 2 ? 2 : 3; // rectum / sigmoid
        push_row(age, gender, diag, radiation, status, surgery, site, followup_for(age, 0.0));
    }

    // planted outliers: extreme in the quasi-identifiers (very young, the
    // otherwise-unused 2018Q1 quarter, huge surgery lag) and beyond the
    // regular followup range
    for (size_t i = 0; i < n_outlier; ++i) {
        out.outlier_ids.push_back(RecordId(rows.size()));
        double age = 18.0 + double(i);
        int32_t gender = int32_t(i % 2);
        int32_t diag = outlier_start + int32_t(3 * i);
        int32_t radiation = 1;
        int32_t status = 2;
        int32_t surgery = diag + 850 + int32_t(20 * i);
        int32_t site = 4;
        push_row(age, gender, diag, radiation, status, surgery, site, 8000.0 + 100.0 * double(i));
    }

    out.table = Table(std::move(schema), std::move(rows), std::move(ids));
    out.minority_fraction = double(n_minority) / double(n);
    return out;
}

} // namespace synthgame

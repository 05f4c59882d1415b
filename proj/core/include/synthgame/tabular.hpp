#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synthgame/error.hpp"
#include "synthgame/rng.hpp"

namespace synthgame {

using RecordId = int64_t;

enum class ColumnKind { categorical, continuous, date };

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::continuous;
    std::vector<std::string> levels; // categorical only; sorted, unique, non-empty
    bool quasi_identifier = false;
    bool sensitive = false;

    bool operator==(const ColumnSpec&) const = default;
};

/// Ordered column list; the declaration order is the canonical feature and
/// encoding order everywhere downstream.
class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<ColumnSpec> columns);

    const std::vector<ColumnSpec>& columns() const { return columns_; }
    size_t size() const { return columns_.size(); }
    const ColumnSpec& column(size_t i) const { return columns_[i]; }

    /// Index of the named column, or UnknownColumn.
    size_t index_of(const std::string& name) const;
    bool has_column(const std::string& name) const;

    std::vector<std::string> quasi_identifier_columns() const;

    bool operator==(const Schema&) const = default;

private:
    std::vector<ColumnSpec> columns_;
};

/// One value of a typed column. Dates are stored as integer days since
/// 1970-01-01 and treated as continuous downstream.
class Cell {
public:
    enum class Kind : uint8_t { missing, cat, num, date };

    Cell() = default;
    static Cell missing() { return Cell(); }
    static Cell cat(int32_t level_index);
    static Cell num(double value);
    static Cell date(int32_t days);

    Kind kind() const { return kind_; }
    bool is_missing() const { return kind_ == Kind::missing; }
    int32_t cat_index() const { return int_; }
    double num_value() const { return num_; }
    int32_t date_days() const { return int_; }

    /// Numeric view used by encodings: level index, value, or day count.
    double as_double() const { return kind_ == Kind::num ? num_ : double(int_); }

    bool operator==(const Cell&) const = default;

private:
    Kind kind_ = Kind::missing;
    int32_t int_ = 0;
    double num_ = 0.0;
};

/// Immutable typed dataset: a schema plus rows of cells with stable row ids.
/// Safe to share across threads after construction.
class Table {
public:
    Table() = default;
    Table(Schema schema, std::vector<std::vector<Cell>> rows, std::vector<RecordId> row_ids);

    const Schema& schema() const { return schema_; }
    size_t row_count() const { return rows_.size(); }
    size_t column_count() const { return schema_.size(); }
    const std::vector<Cell>& row(size_t i) const { return rows_[i]; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    RecordId row_id(size_t i) const { return row_ids_[i]; }
    const std::vector<RecordId>& row_ids() const { return row_ids_; }

    /// Position of a record id, or UnknownRecord.
    size_t index_of(RecordId id) const;
    bool has_record(RecordId id) const;

    /// Column values as doubles (cat -> level index, date -> days).
    std::vector<double> column_as_doubles(size_t col) const;

    bool has_missing() const;

    /// New table with one extra row appended under the given id.
    Table with_row(const std::vector<Cell>& row, RecordId id) const;

private:
    Schema schema_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<RecordId> row_ids_;
};

struct LoadResult {
    Table table;
    size_t dropped_rows = 0; // incomplete rows removed when requested
};

/// CSV ingestion against a declared schema. UTF-8, comma separated, header
/// row must equal the schema names in order; empty field = Missing; dates
/// are ISO-8601 (YYYY-MM-DD). Row ids are the 0-based data-row positions in
/// the file, so dropping incomplete rows leaves gaps but keeps ids stable.
LoadResult load_csv(const std::string& path, const Schema& schema, bool drop_incomplete);

/// Inverse of load_csv for canonical files: shortest round-trip numbers,
/// ISO dates, level strings, empty field for Missing.
void write_csv(const std::string& path, const Table& table);
std::string to_csv(const Table& table);

/// Schema JSON document: {"columns":[{name,kind,levels?,quasi_identifier,sensitive}]}
Schema load_schema(const std::string& path);
void save_schema(const std::string& path, const Schema& schema);
Schema schema_from_json_text(const std::string& text);
std::string schema_to_json_text(const Schema& schema);

/// Uniform sample of n rows without replacement. With include set, the
/// target is guaranteed present: n-1 rows are drawn from the others and the
/// target row is appended last. With exclude set the target never appears.
/// Row ids are preserved from the source.
Table sample_rows(const Table& table, size_t n, std::optional<RecordId> include,
                  std::optional<RecordId> exclude, Rng& rng);

/// Restriction to the named columns, kept in schema order; row ids unchanged.
Table project(const Table& table, const std::vector<std::string>& column_names);

/// ISO-8601 date helpers (days since 1970-01-01, proleptic Gregorian).
int32_t parse_iso_date(const std::string& text);
std::string format_iso_date(int32_t days);

struct ColumnBounds {
    double lo = 0.0;
    double hi = 0.0;
};

struct EncodingDescriptor {
    struct ColumnCoords {
        size_t offset = 0;          // first coordinate of this column's block
        size_t width = 0;           // 1 for continuous/date, level count for categorical
        ColumnBounds bounds;        // continuous/date only
    };
    std::vector<ColumnCoords> columns;
    size_t total_dims = 0;
};

struct EncodedMatrix {
    size_t rows = 0;
    size_t dims = 0;
    std::vector<double> values; // row major
    EncodingDescriptor descriptor;

    const double* row(size_t i) const { return values.data() + i * dims; }
};

/// Min/max of each continuous/date column (categorical slots are zeroed).
std::vector<ColumnBounds> column_bounds(const Table& table);
std::vector<ColumnBounds> union_bounds(const std::vector<ColumnBounds>& a,
                                       const std::vector<ColumnBounds>& b);

/// Numeric encoding shared by NN distance, Spearman features and k-means:
/// continuous/date min-max scaled to [0,1] (constant columns map to 0),
/// categorical one-hot with each indicator scaled by 1/sqrt(2) so a single
/// categorical disagreement contributes exactly distance 1.
EncodedMatrix encode_numeric(const Table& table,
                             const std::vector<ColumnBounds>& bounds = {});
EncodedMatrix encode_with_descriptor(const Table& table, const EncodingDescriptor& descriptor);

} // namespace synthgame

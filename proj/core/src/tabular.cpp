#include "synthgame/tabular.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace synthgame {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::header_mismatch: return "HeaderMismatch";
        case Errc::unknown_level: return "UnknownLevel";
        case Errc::parse_error: return "ParseError";
        case Errc::empty_table: return "EmptyTable";
        case Errc::sample_too_large: return "SampleTooLarge";
        case Errc::unknown_record: return "UnknownRecord";
        case Errc::unknown_column: return "UnknownColumn";
        case Errc::empty_projection: return "EmptyProjection";
        case Errc::missing_value: return "MissingValue";
        case Errc::non_finite_value: return "NonFiniteValue";
        case Errc::empty_input: return "EmptyInput";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::too_few: return "TooFew";
        case Errc::bin_mismatch: return "BinMismatch";
        case Errc::level_mismatch: return "LevelMismatch";
        case Errc::too_few_rows: return "TooFewRows";
        case Errc::schema_mismatch: return "SchemaMismatch";
        case Errc::single_class: return "SingleClass";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::empty_set: return "EmptySet";
        case Errc::degenerate_rate: return "DegenerateRate";
        case Errc::invalid_count: return "InvalidCount";
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::io_error: return "IoError";
    }
    return "Error";
}

Schema::Schema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw Error(Errc::invalid_argument, "schema needs at least one column");
    std::unordered_set<std::string> seen;
    for (const auto& col : columns_) {
        if (col.name.empty()) throw Error(Errc::invalid_argument, "column name must not be empty");
        if (!seen.insert(col.name).second)
            throw Error(Errc::invalid_argument, "duplicate column name '" + col.name + "'");
        if (col.kind == ColumnKind::categorical) {
            if (col.levels.empty())
                throw Error(Errc::invalid_argument, "categorical column '" + col.name + "' has no levels");
            if (!std::is_sorted(col.levels.begin(), col.levels.end()))
                throw Error(Errc::invalid_argument,
                            "levels of '" + col.name + "' must be lexicographically sorted");
            if (std::adjacent_find(col.levels.begin(), col.levels.end()) != col.levels.end())
                throw Error(Errc::invalid_argument, "levels of '" + col.name + "' contain duplicates");
        } else if (!col.levels.empty()) {
            throw Error(Errc::invalid_argument,
                        "non-categorical column '" + col.name + "' must not declare levels");
        }
    }
}

size_t Schema::index_of(const std::string& name) const {
    for (size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name == name) return i;
    throw Error(Errc::unknown_column, "no column named '" + name + "'");
}

bool Schema::has_column(const std::string& name) const {
    for (const auto& col : columns_)
        if (col.name == name) return true;
    return false;
}

std::vector<std::string> Schema::quasi_identifier_columns() const {
    std::vector<std::string> names;
    for (const auto& col : columns_)
        if (col.quasi_identifier) names.push_back(col.name);
    return names;
}

Cell Cell::cat(int32_t level_index) {
    if (level_index < 0) throw Error(Errc::invalid_argument, "negative level index");
    Cell c;
    c.kind_ = Kind::cat;
    c.int_ = level_index;
    return c;
}

Cell Cell::num(double value) {
    if (!std::isfinite(value)) throw Error(Errc::non_finite_value, "numeric cell must be finite");
    Cell c;
    c.kind_ = Kind::num;
    c.num_ = value;
    return c;
}

Cell Cell::date(int32_t days) {
    Cell c;
    c.kind_ = Kind::date;
    c.int_ = days;
    return c;
}

namespace {

bool cell_matches(const Cell& cell, const ColumnSpec& spec) {
    if (cell.is_missing()) return true;
    switch (spec.kind) {
        case ColumnKind::categorical:
            return cell.kind() == Cell::Kind::cat &&
                   size_t(cell.cat_index()) < spec.levels.size();
        case ColumnKind::continuous:
            return cell.kind() == Cell::Kind::num;
        case ColumnKind::date:
            return cell.kind() == Cell::Kind::date;
    }
    return false;
}

} // namespace

Table::Table(Schema schema, std::vector<std::vector<Cell>> rows, std::vector<RecordId> row_ids)
    : schema_(std::move(schema)), rows_(std::move(rows)), row_ids_(std::move(row_ids)) {
    if (rows_.size() != row_ids_.size())
        throw Error(Errc::length_mismatch, "row count and row_id count differ");
    std::unordered_set<RecordId> seen;
    for (RecordId id : row_ids_)
        if (!seen.insert(id).second)
            throw Error(Errc::invalid_argument, "duplicate row id " + std::to_string(id));
    for (const auto& row : rows_) {
        if (row.size() != schema_.size())
            throw Error(Errc::length_mismatch, "row width does not match schema");
        for (size_t c = 0; c < row.size(); ++c)
            if (!cell_matches(row[c], schema_.column(c)))
                throw Error(Errc::parse_error,
                            "cell does not match kind of column '" + schema_.column(c).name + "'");
    }
}

size_t Table::index_of(RecordId id) const {
    for (size_t i = 0; i < row_ids_.size(); ++i)
        if (row_ids_[i] == id) return i;
    throw Error(Errc::unknown_record, "no row with id " + std::to_string(id));
}

bool Table::has_record(RecordId id) const {
    return std::find(row_ids_.begin(), row_ids_.end(), id) != row_ids_.end();
}

std::vector<double> Table::column_as_doubles(size_t col) const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) {
        if (row[col].is_missing())
            throw Error(Errc::missing_value, "missing value in column '" + schema_.column(col).name + "'");
        out.push_back(row[col].as_double());
    }
    return out;
}

bool Table::has_missing() const {
    for (const auto& row : rows_)
        for (const auto& cell : row)
            if (cell.is_missing()) return true;
    return false;
}

Table Table::with_row(const std::vector<Cell>& row, RecordId id) const {
    auto rows = rows_;
    auto ids = row_ids_;
    rows.push_back(row);
    ids.push_back(id);
    return Table(schema_, std::move(rows), std::move(ids));
}

// ---------------------------------------------------------------- dates ---

int32_t parse_iso_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw Error(Errc::parse_error, "bad date '" + text + "' (want YYYY-MM-DD)");
    auto parse_int = [&](size_t begin, size_t len) {
        int value = 0;
        auto* first = text.data() + begin;
        auto [ptr, ec] = std::from_chars(first, first + len, value);
        if (ec != std::errc() || ptr != first + len)
            throw Error(Errc::parse_error, "bad date '" + text + "'");
        return value;
    };
    int y = parse_int(0, 4), m = parse_int(5, 2), d = parse_int(8, 2);
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                    std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) throw Error(Errc::parse_error, "invalid calendar date '" + text + "'");
    return int32_t(std::chrono::sys_days{ymd}.time_since_epoch().count());
}

std::string format_iso_date(int32_t days) {
    std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

// ------------------------------------------------------------------ csv ---

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch != '\r') {
            field.push_back(ch);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

double parse_number(const std::string& text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(Errc::parse_error, "bad number '" + text + "'");
    if (!std::isfinite(value)) throw Error(Errc::non_finite_value, "non-finite number '" + text + "'");
    return value;
}

std::string format_number(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

Cell parse_cell(const std::string& text, const ColumnSpec& spec) {
    if (text.empty()) return Cell::missing();
    switch (spec.kind) {
        case ColumnKind::categorical: {
            auto it = std::lower_bound(spec.levels.begin(), spec.levels.end(), text);
            if (it == spec.levels.end() || *it != text)
                throw Error(Errc::unknown_level,
                            "value '" + text + "' not a level of '" + spec.name + "'");
            return Cell::cat(int32_t(it - spec.levels.begin()));
        }
        case ColumnKind::continuous:
            return Cell::num(parse_number(text));
        case ColumnKind::date:
            return Cell::date(parse_iso_date(text));
    }
    throw Error(Errc::parse_error, "unreachable column kind");
}

} // namespace

LoadResult load_csv(const std::string& path, const Schema& schema, bool drop_incomplete) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::empty_table, "file '" + path + "' is empty");
    auto header = split_line(line);
    if (header.size() != schema.size())
        throw Error(Errc::header_mismatch, "expected " + std::to_string(schema.size()) +
                                               " columns, file has " + std::to_string(header.size()));
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] != schema.column(i).name)
            throw Error(Errc::header_mismatch, "column " + std::to_string(i) + " is '" + header[i] +
                                                   "', schema says '" + schema.column(i).name + "'");

    std::vector<std::vector<Cell>> rows;
    std::vector<RecordId> ids;
    size_t dropped = 0;
    RecordId next_id = 0;
    while (std::getline(in, line)) {
        if (line.empty() && in.eof()) break; // trailing newline
        auto fields = split_line(line);
        if (fields.size() != schema.size())
            throw Error(Errc::parse_error, "row " + std::to_string(next_id) + " has " +
                                               std::to_string(fields.size()) + " fields");
        std::vector<Cell> row;
        row.reserve(fields.size());
        bool incomplete = false;
        for (size_t c = 0; c < fields.size(); ++c) {
            row.push_back(parse_cell(fields[c], schema.column(c)));
            incomplete = incomplete || row.back().is_missing();
        }
        if (incomplete && drop_incomplete) {
            ++dropped;
        } else {
            rows.push_back(std::move(row));
            ids.push_back(next_id);
        }
        ++next_id;
    }
    if (rows.empty()) throw Error(Errc::empty_table, "no usable rows in '" + path + "'");
    return LoadResult{Table(schema, std::move(rows), std::move(ids)), dropped};
}

std::string to_csv(const Table& table) {
    std::string out;
    const auto& schema = table.schema();
    for (size_t c = 0; c < schema.size(); ++c) {
        if (c) out.push_back(',');
        out += schema.column(c).name;
    }
    out.push_back('\n');
    for (const auto& row : table.rows()) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out.push_back(',');
            const Cell& cell = row[c];
            if (cell.is_missing()) continue;
            switch (schema.column(c).kind) {
                case ColumnKind::categorical:
                    out += schema.column(c).levels[size_t(cell.cat_index())];
                    break;
                case ColumnKind::continuous:
                    out += format_number(cell.num_value());
                    break;
                case ColumnKind::date:
                    out += format_iso_date(cell.date_days());
                    break;
            }
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
    out << to_csv(table);
}

// --------------------------------------------------------------- schema ---

namespace {

const char* kind_name(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::categorical: return "categorical";
        case ColumnKind::continuous: return "continuous";
        case ColumnKind::date: return "date";
    }
    return "?";
}

ColumnKind kind_from_name(const std::string& name) {
    if (name == "categorical") return ColumnKind::categorical;
    if (name == "continuous") return ColumnKind::continuous;
    if (name == "date") return ColumnKind::date;
    throw Error(Errc::parse_error, "unknown column kind '" + name + "'");
}

} // namespace

Schema schema_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, std::string("schema json: ") + e.what());
    }
    if (!doc.contains("columns") || !doc["columns"].is_array())
        throw Error(Errc::parse_error, "schema json: missing 'columns' array");
    std::vector<ColumnSpec> columns;
    for (const auto& col : doc["columns"]) {
        ColumnSpec spec;
        spec.name = col.at("name").get<std::string>();
        spec.kind = kind_from_name(col.at("kind").get<std::string>());
        if (spec.kind == ColumnKind::categorical)
            spec.levels = col.at("levels").get<std::vector<std::string>>();
        spec.quasi_identifier = col.value("quasi_identifier", false);
        spec.sensitive = col.value("sensitive", false);
        columns.push_back(std::move(spec));
    }
    return Schema(std::move(columns));
}

std::string schema_to_json_text(const Schema& schema) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& col : schema.columns()) {
        nlohmann::json entry;
        entry["name"] = col.name;
        entry["kind"] = kind_name(col.kind);
        if (col.kind == ColumnKind::categorical) entry["levels"] = col.levels;
        entry["quasi_identifier"] = col.quasi_identifier;
        entry["sensitive"] = col.sensitive;
        cols.push_back(entry);
    }
    nlohmann::json doc;
    doc["columns"] = cols;
    return doc.dump(2) + "\n";
}

Schema load_schema(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return schema_from_json_text(buffer.str());
}

void save_schema(const std::string& path, const Schema& schema) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
    out << schema_to_json_text(schema);
}

// ------------------------------------------------------------- sampling ---

Table sample_rows(const Table& table, size_t n, std::optional<RecordId> include,
                  std::optional<RecordId> exclude, Rng& rng) {
    if (include && exclude && *include == *exclude)
        throw Error(Errc::invalid_argument, "include and exclude name the same record");
    if (include && !table.has_record(*include))
        throw Error(Errc::unknown_record, "include id " + std::to_string(*include));
    if (exclude && !table.has_record(*exclude))
        throw Error(Errc::unknown_record, "exclude id " + std::to_string(*exclude));
    if (n > table.row_count())
        throw Error(Errc::sample_too_large, "asked for " + std::to_string(n) + " of " +
                                                std::to_string(table.row_count()) + " rows");

    std::vector<size_t> candidates;
    candidates.reserve(table.row_count());
    for (size_t i = 0; i < table.row_count(); ++i) {
        RecordId id = table.row_id(i);
        if (include && id == *include) continue;
        if (exclude && id == *exclude) continue;
        candidates.push_back(i);
    }
    size_t draw = include ? (n == 0 ? 0 : n - 1) : n;
    if (draw > candidates.size())
        throw Error(Errc::sample_too_large, "not enough rows outside include/exclude");

    auto picks = rng.sample_indices(candidates.size(), draw);
    std::vector<std::vector<Cell>> rows;
    std::vector<RecordId> ids;
    rows.reserve(n);
    ids.reserve(n);
    for (size_t p : picks) {
        rows.push_back(table.row(candidates[p]));
        ids.push_back(table.row_id(candidates[p]));
    }
    if (include && n > 0) {
        size_t t = table.index_of(*include);
        rows.push_back(table.row(t));
        ids.push_back(*include);
    }
    return Table(table.schema(), std::move(rows), std::move(ids));
}

Table project(const Table& table, const std::vector<std::string>& column_names) {
    if (column_names.empty()) throw Error(Errc::empty_projection, "no columns requested");
    std::unordered_set<std::string> wanted;
    for (const auto& name : column_names) {
        if (!table.schema().has_column(name))
            throw Error(Errc::unknown_column, "no column named '" + name + "'");
        wanted.insert(name);
    }
    std::vector<size_t> keep;
    std::vector<ColumnSpec> specs;
    for (size_t c = 0; c < table.schema().size(); ++c) {
        if (wanted.count(table.schema().column(c).name)) {
            keep.push_back(c);
            specs.push_back(table.schema().column(c));
        }
    }
    std::vector<std::vector<Cell>> rows;
    rows.reserve(table.row_count());
    for (const auto& row : table.rows()) {
        std::vector<Cell> slim;
        slim.reserve(keep.size());
        for (size_t c : keep) slim.push_back(row[c]);
        rows.push_back(std::move(slim));
    }
    return Table(Schema(std::move(specs)), std::move(rows), table.row_ids());
}

// ------------------------------------------------------------- encoding ---

std::vector<ColumnBounds> column_bounds(const Table& table) {
    std::vector<ColumnBounds> bounds(table.column_count());
    for (size_t c = 0; c < table.column_count(); ++c) {
        if (table.schema().column(c).kind == ColumnKind::categorical) continue;
        auto values = table.column_as_doubles(c);
        auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        bounds[c] = ColumnBounds{*lo, *hi};
    }
    return bounds;
}

std::vector<ColumnBounds> union_bounds(const std::vector<ColumnBounds>& a,
                                       const std::vector<ColumnBounds>& b) {
    if (a.size() != b.size()) throw Error(Errc::length_mismatch, "bounds lists differ in length");
    std::vector<ColumnBounds> out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        out[i] = ColumnBounds{std::min(a[i].lo, b[i].lo), std::max(a[i].hi, b[i].hi)};
    return out;
}

namespace {

EncodingDescriptor make_descriptor(const Schema& schema, const std::vector<ColumnBounds>& bounds) {
    EncodingDescriptor desc;
    desc.columns.resize(schema.size());
    size_t offset = 0;
    for (size_t c = 0; c < schema.size(); ++c) {
        auto& coords = desc.columns[c];
        coords.offset = offset;
        if (schema.column(c).kind == ColumnKind::categorical) {
            coords.width = schema.column(c).levels.size();
        } else {
            coords.width = 1;
            coords.bounds = bounds[c];
        }
        offset += coords.width;
    }
    desc.total_dims = offset;
    return desc;
}

constexpr double kOneHotScale = 0.70710678118654752440; // 1/sqrt(2)

} // namespace

EncodedMatrix encode_with_descriptor(const Table& table, const EncodingDescriptor& descriptor) {
    if (descriptor.columns.size() != table.column_count())
        throw Error(Errc::dimension_mismatch, "descriptor does not match table width");
    EncodedMatrix out;
    out.rows = table.row_count();
    out.dims = descriptor.total_dims;
    out.descriptor = descriptor;
    out.values.assign(out.rows * out.dims, 0.0);

    for (size_t r = 0; r < table.row_count(); ++r) {
        const auto& row = table.row(r);
        double* dst = out.values.data() + r * out.dims;
        for (size_t c = 0; c < row.size(); ++c) {
            const Cell& cell = row[c];
            if (cell.is_missing())
                throw Error(Errc::missing_value,
                            "missing value in column '" + table.schema().column(c).name + "'");
            const auto& coords = descriptor.columns[c];
            if (table.schema().column(c).kind == ColumnKind::categorical) {
                dst[coords.offset + size_t(cell.cat_index())] = kOneHotScale;
            } else {
                double v = cell.as_double();
                if (!std::isfinite(v)) throw Error(Errc::non_finite_value, "non-finite cell");
                double span = coords.bounds.hi - coords.bounds.lo;
                double scaled = span > 0.0 ? (v - coords.bounds.lo) / span : 0.0;
                dst[coords.offset] = std::clamp(scaled, 0.0, 1.0);
            }
        }
    }
    return out;
}

EncodedMatrix encode_numeric(const Table& table, const std::vector<ColumnBounds>& bounds) {
    if (table.row_count() == 0) throw Error(Errc::empty_table, "cannot encode an empty table");
    std::vector<ColumnBounds> use = bounds.empty() ? column_bounds(table) : bounds;
    if (use.size() != table.column_count())
        throw Error(Errc::length_mismatch, "one bounds entry per column required");
    return encode_with_descriptor(table, make_descriptor(table.schema(), use));
}

} // namespace synthgame

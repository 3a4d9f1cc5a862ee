#include "dxpipe/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "dxpipe/rng.hpp"

namespace dxpipe {

ColumnKind parse_kind(const std::string& text) {
    if (text == "categorical") return ColumnKind::categorical;
    if (text == "integer") return ColumnKind::integer;
    if (text == "real") return ColumnKind::real;
    if (text == "decision") return ColumnKind::decision;
    throw ConfigError("unknown column kind '" + text + "'");
}

const char* kind_name(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::categorical: return "categorical";
        case ColumnKind::integer: return "integer";
        case ColumnKind::real: return "real";
        case ColumnKind::decision: return "decision";
    }
    return "?";
}

Schema Schema::parse(const std::string& text) {
    Schema schema;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto first = line.find(':');
        if (first == std::string::npos)
            throw ConfigError("schema line missing ':': " + line);
        auto second = line.find(':', first + 1);
        std::string name = line.substr(0, first);
        std::string kind = second == std::string::npos
                               ? line.substr(first + 1)
                               : line.substr(first + 1, second - first - 1);
        Column col{name, parse_kind(kind)};
        if (second != std::string::npos) {
            if (col.kind != ColumnKind::decision)
                throw ConfigError("only the decision column takes a third schema field: " + line);
            schema.designated_positive = line.substr(second + 1);
        }
        schema.columns.push_back(std::move(col));
    }
    if (schema.columns.size() < 2)
        throw ConfigError("schema needs at least one feature column and a decision column");
    for (std::size_t c = 0; c + 1 < schema.columns.size(); ++c)
        if (schema.columns[c].kind == ColumnKind::decision)
            throw ConfigError("decision column must be the last column");
    if (schema.columns.back().kind != ColumnKind::decision)
        throw ConfigError("last schema column must have kind 'decision'");
    return schema;
}

Schema Schema::load(const std::string& path) { return parse(read_text_file(path)); }

std::string Schema::to_text() const {
    std::string out;
    for (const auto& col : columns) {
        out += col.name;
        out += ':';
        out += kind_name(col.kind);
        if (col.kind == ColumnKind::decision && !designated_positive.empty()) {
            out += ':';
            out += designated_positive;
        }
        out += '\n';
    }
    return out;
}

Dataset::Dataset(Schema schema, std::vector<std::vector<Cell>> rows)
    : schema_(std::move(schema)), rows_(std::move(rows)) {
    const std::size_t n = schema_.columns.size();
    if (n < 2) throw ConfigError("dataset needs at least 2 columns");
    if (schema_.columns.back().kind != ColumnKind::decision)
        throw ConfigError("last column must be the decision column");

    std::set<std::string> labels;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r].size() != n)
            throw DataError("record " + std::to_string(r) + " has " +
                            std::to_string(rows_[r].size()) + " cells, expected " +
                            std::to_string(n));
        for (std::size_t c = 0; c < n; ++c) {
            const Cell& cell = rows_[r][c];
            if (cell.missing()) {
                if (c + 1 == n)
                    throw DataError("missing value in decision column at record " +
                                    std::to_string(r));
                continue;
            }
            bool ok = false;
            switch (schema_.columns[c].kind) {
                case ColumnKind::categorical:
                case ColumnKind::decision:
                    ok = std::holds_alternative<std::string>(cell.value);
                    break;
                case ColumnKind::integer:
                    ok = std::holds_alternative<long long>(cell.value);
                    break;
                case ColumnKind::real:
                    ok = std::holds_alternative<double>(cell.value);
                    break;
            }
            if (!ok)
                throw DataError("cell (" + std::to_string(r) + "," + std::to_string(c) +
                                ") does not match column kind " +
                                kind_name(schema_.columns[c].kind));
        }
        labels.insert(rows_[r].back().text());
        if (labels.size() > 2)
            throw DataError("decision column has more than two distinct labels");
    }

    if (!schema_.designated_positive.empty()) {
        positive_label_ = schema_.designated_positive;
        if (!labels.empty() && !labels.count(positive_label_) && labels.size() == 2)
            throw DataError("designated positive label '" + positive_label_ +
                            "' does not occur in the data");
        for (const auto& l : labels)
            if (l != positive_label_) negative_label_ = l;
    } else if (!labels.empty()) {
        // Lexicographically greater label is positive by default.
        positive_label_ = *labels.rbegin();
        if (labels.size() == 2) negative_label_ = *labels.begin();
    }
}

std::size_t Dataset::missing_count() const {
    std::size_t count = 0;
    for (const auto& row : rows_)
        for (const auto& cell : row)
            if (cell.missing()) ++count;
    return count;
}

int Dataset::distinct_label_count() const {
    bool pos = false, neg = false;
    for (std::size_t r = 0; r < rows_.size(); ++r)
        (is_positive(r) ? pos : neg) = true;
    return (pos ? 1 : 0) + (neg ? 1 : 0);
}

std::size_t Dataset::class_count(bool positive) const {
    std::size_t count = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r)
        if (is_positive(r) == positive) ++count;
    return count;
}

namespace {

// RFC-4180 style: quoted fields may contain commas, newlines and doubled
// quotes. Accepts both \n and \r\n.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        records.push_back(std::move(row));
        row.clear();
        row_started = false;
    };
    while (i < n) {
        char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                in_quotes = false;
                ++i;
                continue;
            }
            field += ch;
            ++i;
            continue;
        }
        switch (ch) {
            case '"':
                in_quotes = true;
                row_started = true;
                ++i;
                break;
            case ',':
                end_field();
                row_started = true;
                ++i;
                break;
            case '\r':
                ++i;
                break;
            case '\n':
                if (row_started || !field.empty() || !row.empty()) end_row();
                ++i;
                break;
            default:
                field += ch;
                row_started = true;
                ++i;
                break;
        }
    }
    if (in_quotes) throw DataError("unterminated quoted CSV field");
    if (row_started || !field.empty() || !row.empty()) end_row();
    return records;
}

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string csv_escape(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

Cell parse_cell(const std::string& token, ColumnKind kind, const std::string& missing_token,
                std::size_t record, std::size_t col) {
    if (token == missing_token) {
        if (kind == ColumnKind::decision)
            throw DataError("missing token '" + missing_token + "' in decision column at record " +
                            std::to_string(record));
        return Cell::none();
    }
    switch (kind) {
        case ColumnKind::categorical:
        case ColumnKind::decision:
            return Cell::of(token);
        case ColumnKind::integer: {
            long long value = 0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (ec != std::errc{} || ptr != token.data() + token.size())
                throw DataError("token '" + token + "' is not an integer (record " +
                                std::to_string(record) + ", column " + std::to_string(col) + ")");
            return Cell::of(value);
        }
        case ColumnKind::real: {
            double value = 0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (ec != std::errc{} || ptr != token.data() + token.size())
                throw DataError("token '" + token + "' is not a real number (record " +
                                std::to_string(record) + ", column " + std::to_string(col) + ")");
            return Cell::of(value);
        }
    }
    throw DataError("unreachable cell kind");
}

}  // namespace

Dataset load_dataset(const std::string& csv_text, const Schema& schema,
                     const std::string& missing_token) {
    auto records = parse_csv(csv_text);
    if (records.empty()) throw DataError("CSV input has no header row");
    const auto& header = records.front();
    const std::size_t n = schema.columns.size();
    if (header.size() != n)
        throw DataError("header has " + std::to_string(header.size()) + " columns, schema has " +
                        std::to_string(n));
    for (std::size_t c = 0; c < n; ++c)
        if (header[c] != schema.columns[c].name)
            throw DataError("header column '" + header[c] + "' does not match schema name '" +
                            schema.columns[c].name + "'");

    std::vector<std::vector<Cell>> rows;
    rows.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != n)
            throw DataError("record " + std::to_string(r - 1) + " has " +
                            std::to_string(rec.size()) + " fields, expected " + std::to_string(n));
        std::vector<Cell> row;
        row.reserve(n);
        for (std::size_t c = 0; c < n; ++c)
            row.push_back(parse_cell(rec[c], schema.columns[c].kind, missing_token, r - 1, c));
        rows.push_back(std::move(row));
    }
    return Dataset(schema, std::move(rows));
}

std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const Dataset& ds, const std::string& missing_token) {
    std::string out;
    const std::size_t n = ds.column_count();
    for (std::size_t c = 0; c < n; ++c) {
        if (c) out += ',';
        out += csv_escape(ds.column(c).name);
    }
    out += '\n';
    for (std::size_t r = 0; r < ds.record_count(); ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (c) out += ',';
            const Cell& cell = ds.cell(r, c);
            if (cell.missing()) {
                out += missing_token;
            } else {
                switch (ds.column(c).kind) {
                    case ColumnKind::categorical:
                    case ColumnKind::decision:
                        out += csv_escape(cell.text());
                        break;
                    case ColumnKind::integer:
                        out += std::to_string(cell.as_int());
                        break;
                    case ColumnKind::real:
                        out += format_real(cell.as_real());
                        break;
                }
            }
        }
        out += '\n';
    }
    return out;
}

Dataset select_columns(const Dataset& ds, const std::vector<std::uint8_t>& feature_mask) {
    if (feature_mask.size() != ds.feature_count())
        throw ConfigError("feature mask length does not match feature count");
    Schema schema;
    schema.designated_positive = ds.schema().designated_positive;
    for (std::size_t c = 0; c < feature_mask.size(); ++c)
        if (feature_mask[c]) schema.columns.push_back(ds.column(c));
    if (schema.columns.empty()) throw ConfigError("feature mask selects no columns");
    schema.columns.push_back(ds.column(ds.decision_column()));

    std::vector<std::vector<Cell>> rows;
    rows.reserve(ds.record_count());
    for (std::size_t r = 0; r < ds.record_count(); ++r) {
        std::vector<Cell> row;
        row.reserve(schema.columns.size());
        for (std::size_t c = 0; c < feature_mask.size(); ++c)
            if (feature_mask[c]) row.push_back(ds.cell(r, c));
        row.push_back(ds.cell(r, ds.decision_column()));
        rows.push_back(std::move(row));
    }
    return Dataset(std::move(schema), std::move(rows));
}

std::vector<std::size_t> FoldAssignment::test_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < fold_of.size(); ++r)
        if (fold_of[r] == fold) out.push_back(r);
    return out;
}

std::vector<std::size_t> FoldAssignment::train_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < fold_of.size(); ++r)
        if (fold_of[r] != fold) out.push_back(r);
    return out;
}

FoldAssignment stratified_kfold(const Dataset& ds, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("fold count must be at least 2");
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < ds.record_count(); ++r)
        (ds.is_positive(r) ? pos : neg).push_back(r);
    const std::size_t minority = std::min(pos.size(), neg.size());
    if (static_cast<std::size_t>(k) > minority)
        throw DataError("fold count " + std::to_string(k) +
                        " exceeds the minority class count " + std::to_string(minority));

    FoldAssignment fa;
    fa.k = k;
    fa.fold_of.assign(ds.record_count(), 0);
    Rng rng(mix_seed(seed, 0xf01d5));
    // Shuffle within each class, then deal round-robin: per-fold class counts
    // stay within one record of exact proportionality.
    for (auto* cls : {&pos, &neg}) {
        auto& idx = *cls;
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.below(i)]);
        for (std::size_t i = 0; i < idx.size(); ++i)
            fa.fold_of[idx[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return fa;
}

Dataset inject_missing(const Dataset& ds, double rate, std::uint64_t seed) {
    if (rate < 0.0 || rate > 1.0) throw ConfigError("missing rate must lie in [0,1]");
    if (ds.missing_count() != 0)
        throw DataError("inject_missing requires a dataset without missing cells");

    const std::size_t m = ds.record_count();
    const std::size_t f = ds.feature_count();
    const std::size_t total = m * f;
    const auto target = static_cast<std::size_t>(
        std::llround(rate * static_cast<double>(total)));

    std::vector<std::size_t> slots(total);
    for (std::size_t i = 0; i < total; ++i) slots[i] = i;
    Rng rng(mix_seed(seed, 0x1uLL));
    for (std::size_t i = 0; i < target; ++i)
        std::swap(slots[i], slots[i + rng.below(total - i)]);

    auto rows = ds.rows();
    for (std::size_t i = 0; i < target; ++i) {
        const std::size_t r = slots[i] / f;
        const std::size_t c = slots[i] % f;
        rows[r][c] = Cell::none();
    }
    return Dataset(ds.schema(), std::move(rows));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write file: " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace dxpipe

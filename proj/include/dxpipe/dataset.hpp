#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dxpipe/error.hpp"

namespace dxpipe {

enum class ColumnKind { categorical, integer, real, decision };

ColumnKind parse_kind(const std::string& text);
const char* kind_name(ColumnKind kind);

// A cell is missing, a categorical/decision label, an integer, or a real.
using CellValue = std::variant<std::monostate, std::string, long long, double>;

struct Cell {
    CellValue value;

    bool missing() const { return std::holds_alternative<std::monostate>(value); }
    const std::string& text() const { return std::get<std::string>(value); }
    long long as_int() const { return std::get<long long>(value); }
    double as_real() const { return std::get<double>(value); }

    static Cell none() { return Cell{std::monostate{}}; }
    static Cell of(std::string s) { return Cell{std::move(s)}; }
    static Cell of(long long i) { return Cell{i}; }
    static Cell of(double r) { return Cell{r}; }

    bool operator==(const Cell&) const = default;
};

struct Column {
    std::string name;
    ColumnKind kind;

    bool operator==(const Column&) const = default;
};

// Sidecar schema: one line per column, `name:kind`. The decision line may
// carry a third field naming the positive label, e.g. `class:decision:yes`.
struct Schema {
    std::vector<Column> columns;
    std::string designated_positive;

    static Schema parse(const std::string& text);
    static Schema load(const std::string& path);
    std::string to_text() const;
};

class Dataset {
public:
    Dataset(Schema schema, std::vector<std::vector<Cell>> rows);

    std::size_t record_count() const { return rows_.size(); }
    std::size_t column_count() const { return schema_.columns.size(); }
    std::size_t feature_count() const { return schema_.columns.size() - 1; }
    std::size_t decision_column() const { return schema_.columns.size() - 1; }

    const Schema& schema() const { return schema_; }
    const Column& column(std::size_t c) const { return schema_.columns[c]; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    const Cell& cell(std::size_t r, std::size_t c) const { return rows_[r][c]; }
    bool is_missing(std::size_t r, std::size_t c) const { return rows_[r][c].missing(); }

    std::size_t missing_count() const;

    const std::string& decision_label(std::size_t r) const { return rows_[r][decision_column()].text(); }
    bool is_positive(std::size_t r) const { return decision_label(r) == positive_label_; }
    int label_sign(std::size_t r) const { return is_positive(r) ? +1 : -1; }

    const std::string& positive_label() const { return positive_label_; }
    const std::string& negative_label() const { return negative_label_; }
    // Number of distinct decision labels actually present (0, 1 or 2).
    int distinct_label_count() const;
    std::size_t class_count(bool positive) const;

    bool operator==(const Dataset& other) const {
        return schema_ == other.schema_ && rows_ == other.rows_;
    }

private:
    Schema schema_;
    std::vector<std::vector<Cell>> rows_;
    std::string positive_label_;
    std::string negative_label_;
};

Dataset load_dataset(const std::string& csv_text, const Schema& schema,
                     const std::string& missing_token = "?");
std::string to_csv(const Dataset& ds, const std::string& missing_token = "?");

// Keeps the decision column plus the masked feature columns.
Dataset select_columns(const Dataset& ds, const std::vector<std::uint8_t>& feature_mask);

struct FoldAssignment {
    int k = 0;
    std::vector<int> fold_of;  // record index -> fold in [0, k)

    std::vector<std::size_t> test_indices(int fold) const;
    std::vector<std::size_t> train_indices(int fold) const;
};

FoldAssignment stratified_kfold(const Dataset& ds, int k, std::uint64_t seed);

Dataset inject_missing(const Dataset& ds, double rate, std::uint64_t seed);

// Helpers shared by the CSV writer and the report emitters: shortest
// round-trip decimal form.
std::string format_real(double v);

std::string read_text_file(const std::string& path);
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace dxpipe

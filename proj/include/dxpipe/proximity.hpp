#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "dxpipe/dataset.hpp"

namespace dxpipe {

// Distances from one source record to every other record, with the z-scores
// used for neighbor selection.
struct DistanceRow {
    std::size_t source = 0;
    std::vector<std::size_t> others;  // all j != source, ascending
    std::vector<double> dist;
    std::vector<double> z;
    double mean = 0.0;
};

// z_j = (d_j - mean) / s with s the sample standard deviation (divisor n-1).
// All zeros when s == 0 or the list has a single element.
std::vector<double> z_scores(const std::vector<double>& distances);

// Precomputed per-class frequency tables and column means. Built once per
// dataset; column_index / record_distance are then O(1) / O(n) lookups.
class IndexContext {
public:
    explicit IndexContext(const Dataset& ds);

    const Dataset& dataset() const { return *ds_; }

    // Class-conditional index of one feature column between two records.
    // Same class: min frequency/mean ratio; different classes: max ratio.
    // Zero when i == k or either record is missing the column.
    double column_index(std::size_t i, std::size_t k, std::size_t col) const;

    // sqrt of the sum of squared column indices over all feature columns.
    double record_distance(std::size_t i, std::size_t k) const;

    DistanceRow distance_row(std::size_t i) const;

    // Class-conditional statistics reused by the imputation fallbacks.
    double class_mean(bool positive, std::size_t col) const;
    double global_mean(std::size_t col) const;
    // Most frequent value; ties resolved toward the smaller value.
    Cell class_mode(bool positive, std::size_t col) const;
    Cell global_mode(std::size_t col) const;
    long long value_count(bool positive, std::size_t col, const Cell& value) const;
    std::size_t observed_count(std::size_t col) const;

private:
    struct ColumnStats {
        // Frequency tables per class (categorical + integer columns).
        std::map<std::string, long long> cat_freq[2];
        std::map<long long, long long> int_freq[2];
        double sum[2] = {0.0, 0.0};
        long long count[2] = {0, 0};  // observed cells per class
    };

    const Dataset* ds_;
    std::size_t features_;
    std::vector<ColumnKind> kinds_;
    std::vector<std::uint8_t> missing_;    // record-major [r * features_ + c]
    std::vector<double> real_val_;
    std::vector<long long> own_count_;     // frequency of this record's value in its class
    std::vector<std::uint8_t> positive_;   // per record
    std::vector<ColumnStats> stats_;       // per feature column
};

// One-shot conveniences (build a context internally).
double column_index(const Dataset& ds, std::size_t i, std::size_t k, std::size_t col);
double record_distance(const Dataset& ds, std::size_t i, std::size_t k);

// Debug dump: one `row,col,distance` line per ordered pair.
void write_distance_matrix_csv(std::ostream& out, const IndexContext& ctx);

}  // namespace dxpipe

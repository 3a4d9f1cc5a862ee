#include "dxpipe/proximity.hpp"

#include <algorithm>
#include <cmath>

namespace dxpipe {

std::vector<double> z_scores(const std::vector<double>& distances) {
    if (distances.empty()) throw NumericError("z_scores: empty input");
    const std::size_t n = distances.size();
    std::vector<double> z(n, 0.0);
    if (n == 1) return z;
    double mean = 0.0;
    for (double d : distances) mean += d;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double d : distances) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) return z;
    for (std::size_t i = 0; i < n; ++i) z[i] = (distances[i] - mean) / sd;
    return z;
}

IndexContext::IndexContext(const Dataset& ds) : ds_(&ds) {
    const std::size_t m = ds.record_count();
    features_ = ds.feature_count();
    kinds_.resize(features_);
    for (std::size_t c = 0; c < features_; ++c) kinds_[c] = ds.column(c).kind;

    missing_.assign(m * features_, 0);
    real_val_.assign(m * features_, 0.0);
    own_count_.assign(m * features_, 0);
    positive_.resize(m);
    stats_.assign(features_, ColumnStats{});

    for (std::size_t r = 0; r < m; ++r) {
        positive_[r] = ds.is_positive(r) ? 1 : 0;
        const int cls = positive_[r];
        for (std::size_t c = 0; c < features_; ++c) {
            const Cell& cell = ds.cell(r, c);
            if (cell.missing()) {
                missing_[r * features_ + c] = 1;
                continue;
            }
            auto& st = stats_[c];
            ++st.count[cls];
            switch (kinds_[c]) {
                case ColumnKind::categorical:
                    ++st.cat_freq[cls][cell.text()];
                    break;
                case ColumnKind::integer:
                    ++st.int_freq[cls][cell.as_int()];
                    st.sum[cls] += static_cast<double>(cell.as_int());
                    break;
                case ColumnKind::real:
                    real_val_[r * features_ + c] = cell.as_real();
                    st.sum[cls] += cell.as_real();
                    break;
                case ColumnKind::decision:
                    break;
            }
        }
    }

    // Second pass: each record's value frequency within its own class.
    for (std::size_t r = 0; r < m; ++r) {
        const int cls = positive_[r];
        for (std::size_t c = 0; c < features_; ++c) {
            if (missing_[r * features_ + c]) continue;
            const Cell& cell = ds.cell(r, c);
            switch (kinds_[c]) {
                case ColumnKind::categorical:
                    own_count_[r * features_ + c] = stats_[c].cat_freq[cls].at(cell.text());
                    break;
                case ColumnKind::integer:
                    own_count_[r * features_ + c] = stats_[c].int_freq[cls].at(cell.as_int());
                    break;
                default:
                    break;
            }
        }
    }
}

double IndexContext::class_mean(bool positive, std::size_t col) const {
    const auto& st = stats_[col];
    const int cls = positive ? 1 : 0;
    if (st.count[cls] == 0)
        throw NumericError("no observed cells for class '" +
                           (positive ? ds_->positive_label() : ds_->negative_label()) +
                           "' in column " + std::to_string(col));
    return st.sum[cls] / static_cast<double>(st.count[cls]);
}

double IndexContext::global_mean(std::size_t col) const {
    const auto& st = stats_[col];
    const long long count = st.count[0] + st.count[1];
    if (count == 0)
        throw NumericError("no observed cells in column " + std::to_string(col));
    return (st.sum[0] + st.sum[1]) / static_cast<double>(count);
}

namespace {

template <class Map>
bool mode_of(const Map& freq, typename Map::key_type& best, long long& best_count) {
    for (const auto& [value, count] : freq) {
        if (count > best_count) {  // map iteration is ascending, ties keep the smaller value
            best_count = count;
            best = value;
        }
    }
    return best_count > 0;
}

}  // namespace

Cell IndexContext::class_mode(bool positive, std::size_t col) const {
    const int cls = positive ? 1 : 0;
    const auto& st = stats_[col];
    if (kinds_[col] == ColumnKind::categorical) {
        std::string best;
        long long count = 0;
        if (!mode_of(st.cat_freq[cls], best, count))
            throw NumericError("no observed cells for mode in column " + std::to_string(col));
        return Cell::of(best);
    }
    long long best = 0, count = 0;
    if (!mode_of(st.int_freq[cls], best, count))
        throw NumericError("no observed cells for mode in column " + std::to_string(col));
    return Cell::of(best);
}

Cell IndexContext::global_mode(std::size_t col) const {
    const auto& st = stats_[col];
    if (kinds_[col] == ColumnKind::categorical) {
        std::map<std::string, long long> merged = st.cat_freq[0];
        for (const auto& [v, c] : st.cat_freq[1]) merged[v] += c;
        std::string best;
        long long count = 0;
        if (!mode_of(merged, best, count))
            throw NumericError("column " + std::to_string(col) + " has no observed cells");
        return Cell::of(best);
    }
    std::map<long long, long long> merged = st.int_freq[0];
    for (const auto& [v, c] : st.int_freq[1]) merged[v] += c;
    long long best = 0, count = 0;
    if (!mode_of(merged, best, count))
        throw NumericError("column " + std::to_string(col) + " has no observed cells");
    return Cell::of(best);
}

long long IndexContext::value_count(bool positive, std::size_t col, const Cell& value) const {
    const int cls = positive ? 1 : 0;
    const auto& st = stats_[col];
    if (kinds_[col] == ColumnKind::categorical) {
        auto it = st.cat_freq[cls].find(value.text());
        return it == st.cat_freq[cls].end() ? 0 : it->second;
    }
    auto it = st.int_freq[cls].find(value.as_int());
    return it == st.int_freq[cls].end() ? 0 : it->second;
}

std::size_t IndexContext::observed_count(std::size_t col) const {
    return static_cast<std::size_t>(stats_[col].count[0] + stats_[col].count[1]);
}

double IndexContext::column_index(std::size_t i, std::size_t k, std::size_t col) const {
    if (col >= features_)
        throw ConfigError("column_index: column " + std::to_string(col) +
                          " is not a feature column");
    if (i == k) return 0.0;
    if (missing_[i * features_ + col] || missing_[k * features_ + col]) return 0.0;

    const bool same_class = positive_[i] == positive_[k];
    if (kinds_[col] == ColumnKind::real) {
        const double vi = real_val_[i * features_ + col];
        const double vk = real_val_[k * features_ + col];
        if (same_class) {
            const double mean = class_mean(positive_[i], col);
            return std::min(vi / mean, vk / mean);
        }
        const double lambda =
            std::min(class_mean(positive_[i], col), class_mean(positive_[k], col));
        return std::max(vi / lambda, vk / lambda);
    }

    // Categorical and integer columns share the frequency-ratio branch.
    const auto gp = static_cast<double>(own_count_[i * features_ + col]);
    const auto gq = static_cast<double>(own_count_[k * features_ + col]);
    if (gp == 0.0 || gq == 0.0) return 0.0;
    return same_class ? std::min(gp / gq, gq / gp) : std::max(gp / gq, gq / gp);
}

double IndexContext::record_distance(std::size_t i, std::size_t k) const {
    double sum = 0.0;
    for (std::size_t c = 0; c < features_; ++c) {
        const double idx = column_index(i, k, c);
        sum += idx * idx;
    }
    return std::sqrt(sum);
}

DistanceRow IndexContext::distance_row(std::size_t i) const {
    const std::size_t m = ds_->record_count();
    DistanceRow row;
    row.source = i;
    row.others.reserve(m - 1);
    row.dist.reserve(m - 1);
    for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        row.others.push_back(j);
        row.dist.push_back(record_distance(i, j));
    }
    if (row.dist.empty()) throw DataError("distance_row needs at least two records");
    double mean = 0.0;
    for (double d : row.dist) mean += d;
    row.mean = mean / static_cast<double>(row.dist.size());
    row.z = z_scores(row.dist);
    return row;
}

double column_index(const Dataset& ds, std::size_t i, std::size_t k, std::size_t col) {
    return IndexContext(ds).column_index(i, k, col);
}

double record_distance(const Dataset& ds, std::size_t i, std::size_t k) {
    return IndexContext(ds).record_distance(i, k);
}

void write_distance_matrix_csv(std::ostream& out, const IndexContext& ctx) {
    const std::size_t m = ctx.dataset().record_count();
    out << "row,col,distance\n";
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            out << i << ',' << j << ',' << format_real(ctx.record_distance(i, j)) << '\n';
}

}  // namespace dxpipe

#pragma once

// Panel data model, CSV ingestion, chronological splitting and sliding windows.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fineval/csv.hpp"
#include "fineval/error.hpp"
#include "fineval/tensor.hpp"

namespace fineval {

enum class Frequency { unspecified, daily, hourly, minutely };

inline std::string_view to_string(Frequency f) noexcept
{
    switch (f) {
    case Frequency::daily: return "daily";
    case Frequency::hourly: return "hourly";
    case Frequency::minutely: return "minutely";
    default: return "unspecified";
    }
}

/// Ordering key plus the original text. Integer-indexed files use the
/// integer itself as key; calendar timestamps use seconds since the epoch.
struct Timestamp {
    std::int64_t key = 0;
    std::string label;

    friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

namespace detail {

inline std::optional<int> parse_digits(std::string_view s, std::size_t pos, std::size_t n)
{
    if (pos + n > s.size()) return std::nullopt;
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (s[i] < '0' || s[i] > '9') return std::nullopt;
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

/// Accepts YYYY-MM-DD with optional [T| ]HH:MM[:SS] and optional trailing Z.
inline std::optional<std::int64_t> parse_iso8601(std::string_view s)
{
    if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    const auto y = parse_digits(s, 0, 4);
    const auto m = parse_digits(s, 5, 2);
    const auto d = parse_digits(s, 8, 2);
    if (!y || !m || !d) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                                          std::chrono::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) return std::nullopt;
    std::int64_t secs = std::chrono::sys_seconds{std::chrono::sys_days{ymd}}.time_since_epoch().count();
    if (s.size() == 10) return secs;
    if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
    const auto hh = parse_digits(s, 11, 2);
    if (!hh || s.size() < 16 || s[13] != ':') return std::nullopt;
    const auto mm = parse_digits(s, 14, 2);
    if (!mm || *hh > 23 || *mm > 59) return std::nullopt;
    int ss = 0;
    if (s.size() > 16) {
        if (s.size() != 19 || s[16] != ':') return std::nullopt;
        const auto sec = parse_digits(s, 17, 2);
        if (!sec || *sec > 60) return std::nullopt;
        ss = *sec;
    }
    return secs + *hh * 3600 + *mm * 60 + ss;
}

} // namespace detail

/// Immutable timestamps x variables table of doubles.
class Panel {
public:
    Panel() = default;

    Panel(std::vector<Timestamp> timestamps, std::vector<std::string> variables, Matrix values,
          std::string index_name = "timestamp", Frequency frequency = Frequency::unspecified)
        : timestamps_(std::move(timestamps)),
          variables_(std::move(variables)),
          values_(std::move(values)),
          index_name_(std::move(index_name)),
          frequency_(frequency)
    {
        if (values_.rows() != timestamps_.size() || values_.cols() != variables_.size())
            throw IngestError("value matrix is " + std::to_string(values_.rows()) + "x" +
                              std::to_string(values_.cols()) + " but panel has " +
                              std::to_string(timestamps_.size()) + " timestamps and " +
                              std::to_string(variables_.size()) + " variables");
        for (std::size_t i = 1; i < timestamps_.size(); ++i)
            if (timestamps_[i].key <= timestamps_[i - 1].key)
                throw IngestError("timestamps not strictly increasing at row " + std::to_string(i) + " ('" +
                                  timestamps_[i].label + "')");
        std::unordered_set<std::string> seen;
        for (const auto& v : variables_)
            if (!seen.insert(v).second) throw IngestError("duplicate variable name '" + v + "'");
        for (std::size_t r = 0; r < values_.rows(); ++r)
            for (std::size_t c = 0; c < values_.cols(); ++c)
                if (!std::isfinite(values_(r, c)))
                    throw IngestError("non-finite value at row " + std::to_string(r) + ", column '" +
                                      variables_[c] + "'");
    }

    [[nodiscard]] std::size_t rows() const noexcept { return timestamps_.size(); }
    [[nodiscard]] std::size_t cols() const noexcept { return variables_.size(); }
    [[nodiscard]] bool empty() const noexcept { return timestamps_.empty(); }
    [[nodiscard]] const std::vector<Timestamp>& timestamps() const noexcept { return timestamps_; }
    [[nodiscard]] const std::vector<std::string>& variables() const noexcept { return variables_; }
    [[nodiscard]] const Matrix& values() const noexcept { return values_; }
    [[nodiscard]] const std::string& index_name() const noexcept { return index_name_; }
    [[nodiscard]] Frequency frequency() const noexcept { return frequency_; }
    [[nodiscard]] double value(std::size_t r, std::size_t c) const noexcept { return values_(r, c); }

    [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const noexcept
    {
        for (std::size_t i = 0; i < variables_.size(); ++i)
            if (variables_[i] == name) return i;
        return std::nullopt;
    }

    [[nodiscard]] bool has(std::string_view name) const noexcept { return find(name).has_value(); }

    [[nodiscard]] std::vector<double> column(std::size_t c) const { return values_.column(c); }

    [[nodiscard]] std::vector<double> column(std::string_view name) const
    {
        const auto c = find(name);
        if (!c) throw IngestError("no variable named '" + std::string(name) + "'");
        return values_.column(*c);
    }

    /// Rows [begin, end).
    [[nodiscard]] Panel slice_rows(std::size_t begin, std::size_t end) const
    {
        if (begin > end || end > rows()) throw IngestError("row slice out of range");
        Matrix m(end - begin, cols());
        for (std::size_t r = begin; r < end; ++r)
            std::copy(values_.row(r).begin(), values_.row(r).end(), m.row(r - begin).begin());
        return Panel({timestamps_.begin() + static_cast<std::ptrdiff_t>(begin),
                      timestamps_.begin() + static_cast<std::ptrdiff_t>(end)},
                     variables_, std::move(m), index_name_, frequency_);
    }

    [[nodiscard]] Panel select(const std::vector<std::string>& names) const
    {
        std::vector<std::size_t> idx;
        for (const auto& n : names) {
            const auto c = find(n);
            if (!c) throw IngestError("no variable named '" + n + "'");
            idx.push_back(*c);
        }
        Matrix m(rows(), idx.size());
        for (std::size_t r = 0; r < rows(); ++r)
            for (std::size_t j = 0; j < idx.size(); ++j) m(r, j) = values_(r, idx[j]);
        return Panel(timestamps_, names, std::move(m), index_name_, frequency_);
    }

    friend bool operator==(const Panel&, const Panel&) = default;

private:
    std::vector<Timestamp> timestamps_;
    std::vector<std::string> variables_;
    Matrix values_;
    std::string index_name_ = "timestamp";
    Frequency frequency_ = Frequency::unspecified;
};

/// Infers the sampling period from the median gap of calendar timestamps.
inline Frequency infer_frequency(const std::vector<Timestamp>& ts)
{
    if (ts.size() < 2) return Frequency::unspecified;
    std::vector<std::int64_t> gaps(ts.size() - 1);
    for (std::size_t i = 1; i < ts.size(); ++i) gaps[i - 1] = ts[i].key - ts[i - 1].key;
    std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2), gaps.end());
    const auto median = gaps[gaps.size() / 2];
    if (median <= 60) return Frequency::minutely;
    if (median <= 3600) return Frequency::hourly;
    return Frequency::daily;
}

/// Parses CSV text into a Panel. `timestamp_column` empty means the first column.
inline Panel parse_panel(std::string_view text, std::string_view timestamp_column = {},
                         std::string_view source = "<memory>")
{
    const auto doc = csv::parse_document(text);
    const std::string where(source);
    if (doc.lines.empty()) throw IngestError(where + ": missing header row");
    const auto header = csv::split(doc.lines.front());
    std::size_t ts_col = 0;
    if (!timestamp_column.empty()) {
        const auto it = std::find(header.begin(), header.end(), timestamp_column);
        if (it == header.end())
            throw IngestError(where + ": timestamp column '" + std::string(timestamp_column) + "' not found");
        ts_col = static_cast<std::size_t>(it - header.begin());
    }
    std::vector<std::string> variables;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == ts_col) continue;
        if (header[c].empty()) throw IngestError(where + ": empty column name at position " + std::to_string(c + 1));
        variables.emplace_back(header[c]);
    }

    struct Row {
        Timestamp ts;
        std::vector<double> values;
        std::size_t line;
    };
    std::vector<Row> rows;
    rows.reserve(doc.lines.size() - 1);
    std::optional<bool> calendar;
    for (std::size_t i = 1; i < doc.lines.size(); ++i) {
        const auto line = doc.line_numbers[i];
        const auto cells = csv::split(doc.lines[i]);
        if (cells.size() != header.size())
            throw IngestError(where + ": line " + std::to_string(line) + " has " + std::to_string(cells.size()) +
                              " cells, header has " + std::to_string(header.size()));
        Row row;
        row.line = line;
        row.ts.label = std::string(cells[ts_col]);
        if (const auto n = csv::parse_int(cells[ts_col]); n && (!calendar || !*calendar)) {
            row.ts.key = *n;
            calendar = false;
        } else if (const auto t = detail::parse_iso8601(cells[ts_col]); t && (!calendar || *calendar)) {
            row.ts.key = *t;
            calendar = true;
        } else {
            throw IngestError(where + ": line " + std::to_string(line) + ": unparseable or inconsistent timestamp '" +
                              row.ts.label + "'");
        }
        row.values.reserve(variables.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == ts_col) continue;
            const auto v = csv::parse_double(cells[c]);
            if (!v || !std::isfinite(*v))
                throw IngestError(where + ": line " + std::to_string(line) + ", column '" + std::string(header[c]) +
                                  "': non-numeric value '" + std::string(cells[c]) + "'");
            row.values.push_back(*v);
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.ts.key < b.ts.key; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].ts.key == rows[i - 1].ts.key)
            throw IngestError(where + ": duplicate timestamp '" + rows[i].ts.label + "' (lines " +
                              std::to_string(rows[i - 1].line) + " and " + std::to_string(rows[i].line) + ")");

    Matrix values(rows.size(), variables.size());
    std::vector<Timestamp> timestamps;
    timestamps.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::copy(rows[r].values.begin(), rows[r].values.end(), values.row(r).begin());
        timestamps.push_back(std::move(rows[r].ts));
    }
    const auto freq = calendar.value_or(false) ? infer_frequency(timestamps) : Frequency::unspecified;
    return Panel(std::move(timestamps), std::move(variables), std::move(values), std::string(header[ts_col]), freq);
}

inline Panel load_csv(const std::filesystem::path& path, std::string_view timestamp_column = {})
{
    return parse_panel(csv::read_file(path), timestamp_column, path.string());
}

/// Serializes with the timestamp first; numbers use shortest round-trip form.
inline std::string to_csv(const Panel& panel, const std::vector<std::string>& comments = {})
{
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    out += panel.index_name();
    for (const auto& v : panel.variables()) out += "," + v;
    out += "\n";
    for (std::size_t r = 0; r < panel.rows(); ++r) {
        out += panel.timestamps()[r].label;
        for (const double v : panel.values().row(r)) {
            out += ',';
            out += csv::format_double(v);
        }
        out += '\n';
    }
    return out;
}

inline void write_csv(const Panel& panel, const std::filesystem::path& path,
                      const std::vector<std::string>& comments = {})
{
    csv::write_file(path, to_csv(panel, comments));
}

// ---------------------------------------------------------------------------
// Chronological split

struct SplitSpec {
    double train_fraction = 0.7;
    double val_fraction = 0.1;
    double test_fraction = 0.2;

    void validate() const
    {
        for (const double f : {train_fraction, val_fraction, test_fraction})
            if (!(f > 0.0 && f < 1.0)) throw SplitError("fractions must lie in (0, 1)");
        if (std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-12)
            throw SplitError("fractions must sum to 1");
    }
};

/// Train and test are floored, validation takes the remainder. The small
/// guard keeps products such as 10 * 0.7 from flooring to 6.
inline std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitSpec& spec)
{
    spec.validate();
    const auto floor_part = [n](double f) {
        return static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9));
    };
    const auto train = floor_part(spec.train_fraction);
    const auto test = floor_part(spec.test_fraction);
    if (train + test > n) throw SplitError("fractions overflow the panel");
    const auto val = n - train - test;
    if (train == 0 || val == 0 || test == 0)
        throw SplitError("panel of " + std::to_string(n) + " rows yields an empty split (" + std::to_string(train) +
                         ", " + std::to_string(val) + ", " + std::to_string(test) + ")");
    return {train, val, test};
}

struct SplitPanels {
    Panel train;
    Panel val;
    Panel test;
};

inline SplitPanels chronological_split(const Panel& panel, const SplitSpec& spec)
{
    if (panel.empty()) throw SplitError("panel is empty");
    const auto [train, val, test] = split_sizes(panel.rows(), spec);
    return {panel.slice_rows(0, train), panel.slice_rows(train, train + val),
            panel.slice_rows(train + val, train + val + test)};
}

// ---------------------------------------------------------------------------
// Sliding windows

struct WindowSpec {
    std::size_t input_len = 512;
    std::size_t horizon = 5;
    std::vector<std::string> target_vars;  // empty = every variable
};

/// Rolling-origin windows over a panel. Window i reads input rows
/// [i, i + L) and truth rows [i + L, i + L + H); blocks are materialized on demand.
class WindowSet {
public:
    WindowSet(Panel panel, WindowSpec spec) : panel_(std::move(panel)), spec_(std::move(spec))
    {
        if (spec_.input_len < 1 || spec_.horizon < 1) throw WindowError("input length and horizon must be >= 1");
        if (spec_.target_vars.empty()) spec_.target_vars = panel_.variables();
        std::unordered_set<std::string> seen;
        for (const auto& t : spec_.target_vars) {
            const auto c = panel_.find(t);
            if (!c) throw WindowError("target variable '" + t + "' not in panel");
            if (!seen.insert(t).second) throw WindowError("target variable '" + t + "' listed twice");
            target_cols_.push_back(*c);
        }
        if (panel_.rows() < spec_.input_len + spec_.horizon)
            throw WindowError("panel has " + std::to_string(panel_.rows()) + " rows, need at least L + H = " +
                              std::to_string(spec_.input_len + spec_.horizon));
    }

    [[nodiscard]] std::size_t size() const noexcept { return panel_.rows() - spec_.input_len - spec_.horizon + 1; }
    [[nodiscard]] std::size_t input_len() const noexcept { return spec_.input_len; }
    [[nodiscard]] std::size_t horizon() const noexcept { return spec_.horizon; }
    [[nodiscard]] const std::vector<std::string>& targets() const noexcept { return spec_.target_vars; }
    [[nodiscard]] const std::vector<std::size_t>& target_columns() const noexcept { return target_cols_; }
    [[nodiscard]] const Panel& panel() const noexcept { return panel_; }
    [[nodiscard]] const WindowSpec& spec() const noexcept { return spec_; }

    /// Panel row of the last observed input step.
    [[nodiscard]] std::size_t origin_row(std::size_t i) const noexcept { return i + spec_.input_len - 1; }
    [[nodiscard]] const Timestamp& origin(std::size_t i) const noexcept { return panel_.timestamps()[origin_row(i)]; }
    [[nodiscard]] std::size_t first_truth_row(std::size_t i) const noexcept { return i + spec_.input_len; }

    /// L x C block over all variables.
    [[nodiscard]] Matrix input(std::size_t i) const
    {
        Matrix m(spec_.input_len, panel_.cols());
        for (std::size_t r = 0; r < spec_.input_len; ++r) {
            const auto src = panel_.values().row(i + r);
            std::copy(src.begin(), src.end(), m.row(r).begin());
        }
        return m;
    }

    /// H x |targets| block.
    [[nodiscard]] Matrix truth(std::size_t i) const
    {
        Matrix m(spec_.horizon, target_cols_.size());
        for (std::size_t h = 0; h < spec_.horizon; ++h)
            for (std::size_t t = 0; t < target_cols_.size(); ++t) m(h, t) = truth_at(i, h, t);
        return m;
    }

    [[nodiscard]] double truth_at(std::size_t i, std::size_t step, std::size_t target) const noexcept
    {
        return panel_.value(first_truth_row(i) + step, target_cols_[target]);
    }

    [[nodiscard]] double last_observed(std::size_t i, std::size_t target) const noexcept
    {
        return panel_.value(origin_row(i), target_cols_[target]);
    }

private:
    Panel panel_;
    WindowSpec spec_;
    std::vector<std::size_t> target_cols_;
};

inline WindowSet sliding_windows(const Panel& panel, const WindowSpec& spec)
{
    return WindowSet(panel, spec);
}

} // namespace fineval

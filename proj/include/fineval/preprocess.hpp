#pragma once

// Log-price and log-volume transforms anchored to each asset's first close.
//
//   price:  z_i = ln(p_i / p0_close) + baseline
//   volume: z_i = ln(v_i + 1)
//
// Open/high/low columns share the close anchor, so z_high - z_close equals
// ln(p_high / p_close) at every step.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fineval/csv.hpp"
#include "fineval/error.hpp"
#include "fineval/frame.hpp"

namespace fineval {

struct TransformState {
    double anchor_close = 1.0;
    double baseline = 100.0;

    void validate() const
    {
        if (!(anchor_close > 0.0) || !std::isfinite(anchor_close))
            throw TransformError("anchor close must be positive and finite");
    }
};

inline std::vector<double> log_price_transform(std::span<const double> prices, const TransformState& state)
{
    state.validate();
    std::vector<double> z(prices.size());
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0))
            throw TransformError("non-positive price " + csv::format_double(prices[i]) + " at index " +
                                 std::to_string(i));
        z[i] = std::log(prices[i] / state.anchor_close) + state.baseline;
    }
    return z;
}

inline std::vector<double> inverse_price_transform(std::span<const double> z, const TransformState& state)
{
    std::vector<double> p(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) p[i] = state.anchor_close * std::exp(z[i] - state.baseline);
    return p;
}

inline std::vector<double> log_volume_transform(std::span<const double> volumes)
{
    std::vector<double> z(volumes.size());
    for (std::size_t i = 0; i < volumes.size(); ++i) {
        if (!(volumes[i] >= 0.0))
            throw TransformError("negative volume " + csv::format_double(volumes[i]) + " at index " +
                                 std::to_string(i));
        z[i] = std::log1p(volumes[i]);
    }
    return z;
}

inline std::vector<double> inverse_volume_transform(std::span<const double> z)
{
    std::vector<double> v(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) v[i] = std::expm1(z[i]);
    return v;
}

/// z_high - z_close, i.e. ln(p_high / p_close) when both share an anchor.
inline std::vector<double> cross_variable_delta(std::span<const double> z_high, std::span<const double> z_close)
{
    if (z_high.size() != z_close.size())
        throw TransformError("length mismatch: " + std::to_string(z_high.size()) + " vs " +
                             std::to_string(z_close.size()));
    std::vector<double> d(z_high.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = z_high[i] - z_close[i];
    return d;
}

// ---------------------------------------------------------------------------
// Panel-level preprocessing of OHLCV columns.
//
// Columns are recognized by name: `<asset>_<field>` or a bare `<field>`
// (asset ""), where field is open, high, low, close or volume (any case).
// Other columns pass through untouched.

enum class OhlcvField { open, high, low, close, volume };

struct OhlcvColumn {
    std::string asset;
    OhlcvField field;
};

inline std::optional<OhlcvColumn> classify_column(std::string_view name)
{
    static constexpr std::pair<std::string_view, OhlcvField> fields[] = {
        {"open", OhlcvField::open}, {"high", OhlcvField::high},     {"low", OhlcvField::low},
        {"close", OhlcvField::close}, {"volume", OhlcvField::volume},
    };
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const auto& [suffix, field] : fields) {
        if (lower == suffix) return OhlcvColumn{"", field};
        if (lower.size() > suffix.size() + 1 && lower.ends_with(suffix) &&
            lower[lower.size() - suffix.size() - 1] == '_')
            return OhlcvColumn{std::string(name.substr(0, name.size() - suffix.size() - 1)), field};
    }
    return std::nullopt;
}

struct AssetAnchor {
    std::string asset;
    TransformState state;

    friend bool operator==(const AssetAnchor& a, const AssetAnchor& b)
    {
        return a.asset == b.asset && a.state.anchor_close == b.state.anchor_close &&
               a.state.baseline == b.state.baseline;
    }
};

struct PreprocessedPanel {
    Panel transformed;
    std::vector<AssetAnchor> anchors;
};

inline const AssetAnchor* find_anchor(const std::vector<AssetAnchor>& anchors, std::string_view asset)
{
    for (const auto& a : anchors)
        if (a.asset == asset) return &a;
    return nullptr;
}

/// Anchors every asset that has a close column to its first close.
inline std::vector<AssetAnchor> anchors_from_raw(const Panel& raw, double baseline = 100.0)
{
    if (raw.empty()) throw TransformError("panel is empty");
    std::vector<AssetAnchor> anchors;
    for (std::size_t c = 0; c < raw.cols(); ++c) {
        const auto col = classify_column(raw.variables()[c]);
        if (!col || col->field != OhlcvField::close) continue;
        const double p0 = raw.value(0, c);
        if (!(p0 > 0.0)) throw TransformError("first close of '" + raw.variables()[c] + "' is not positive");
        anchors.push_back({col->asset, {p0, baseline}});
    }
    return anchors;
}

/// Transforms every OHLCV column with the supplied anchors.
inline Panel transform_panel(const Panel& raw, const std::vector<AssetAnchor>& anchors)
{
    Matrix out = raw.values();
    for (std::size_t c = 0; c < raw.cols(); ++c) {
        const auto col = classify_column(raw.variables()[c]);
        if (!col) continue;
        const auto series = raw.column(c);
        std::vector<double> z;
        if (col->field == OhlcvField::volume) {
            z = log_volume_transform(series);
        } else {
            const auto* anchor = find_anchor(anchors, col->asset);
            if (!anchor)
                throw TransformError("price column '" + raw.variables()[c] + "' has no close anchor for asset '" +
                                     col->asset + "'");
            try {
                z = log_price_transform(series, anchor->state);
            } catch (const TransformError& e) {
                throw TransformError("column '" + raw.variables()[c] + "': " + e.what());
            }
        }
        for (std::size_t r = 0; r < raw.rows(); ++r) out(r, c) = z[r];
    }
    return Panel(raw.timestamps(), raw.variables(), std::move(out), raw.index_name(), raw.frequency());
}

inline PreprocessedPanel preprocess_panel(const Panel& raw, double baseline = 100.0)
{
    auto anchors = anchors_from_raw(raw, baseline);
    return {transform_panel(raw, anchors), std::move(anchors)};
}

inline Panel invert_panel(const Panel& transformed, const std::vector<AssetAnchor>& anchors)
{
    Matrix out = transformed.values();
    for (std::size_t c = 0; c < transformed.cols(); ++c) {
        const auto col = classify_column(transformed.variables()[c]);
        if (!col) continue;
        const auto series = transformed.column(c);
        std::vector<double> p;
        if (col->field == OhlcvField::volume) {
            p = inverse_volume_transform(series);
        } else {
            const auto* anchor = find_anchor(anchors, col->asset);
            if (!anchor) throw TransformError("no anchor for asset '" + col->asset + "'");
            p = inverse_price_transform(series, anchor->state);
        }
        for (std::size_t r = 0; r < transformed.rows(); ++r) out(r, c) = p[r];
    }
    return Panel(transformed.timestamps(), transformed.variables(), std::move(out), transformed.index_name(),
                 transformed.frequency());
}

// Sidecar anchor file: `asset,anchor_close,baseline`.

inline std::string anchors_to_csv(const std::vector<AssetAnchor>& anchors, const std::vector<std::string>& comments = {})
{
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    out += "asset,anchor_close,baseline\n";
    for (const auto& a : anchors)
        out += a.asset + "," + csv::format_double(a.state.anchor_close) + "," + csv::format_double(a.state.baseline) +
               "\n";
    return out;
}

inline std::vector<AssetAnchor> parse_anchors(std::string_view text, std::string_view source = "<memory>")
{
    const auto doc = csv::parse_document(text);
    const std::string where(source);
    if (doc.lines.empty() || csv::split(doc.lines.front()) != std::vector<std::string_view>{"asset", "anchor_close", "baseline"})
        throw IngestError(where + ": expected header 'asset,anchor_close,baseline'");
    std::vector<AssetAnchor> anchors;
    for (std::size_t i = 1; i < doc.lines.size(); ++i) {
        const auto cells = csv::split(doc.lines[i]);
        const auto p0 = cells.size() == 3 ? csv::parse_double(cells[1]) : std::nullopt;
        const auto base = cells.size() == 3 ? csv::parse_double(cells[2]) : std::nullopt;
        if (!p0 || !base) throw IngestError(where + ": malformed line " + std::to_string(doc.line_numbers[i]));
        AssetAnchor a{std::string(cells[0]), {*p0, *base}};
        a.state.validate();
        if (find_anchor(anchors, a.asset)) throw IngestError(where + ": duplicate asset '" + a.asset + "'");
        anchors.push_back(std::move(a));
    }
    return anchors;
}

inline std::vector<AssetAnchor> load_anchors(const std::filesystem::path& path)
{
    return parse_anchors(csv::read_file(path), path.string());
}

} // namespace fineval

#pragma once

// Trading signals from forecasts and the three position rules built on them.
//
// Difference signal:             raw_t = yhat_{t,H} - z_t
// Difference-in-difference:      dd_t  = raw_t - mean(raw_{t-w+1..t})
//
// Positions are decided at rebalance points from dd and held until the next
// one. A decision at signal point j earns the return from point j to j+1.
// No transaction costs.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fineval/error.hpp"
#include "fineval/frame.hpp"
#include "fineval/metrics.hpp"
#include "fineval/tensor.hpp"

namespace fineval {

struct SignalSeries {
    std::string asset;
    std::vector<std::size_t> origin_rows;
    std::vector<std::string> labels;
    std::vector<double> raw;
    std::vector<double> dd;       // dd[j] belongs to raw[j + dd_offset]
    std::size_t dd_offset = 0;    // window - 1 once dd is attached
};

inline SignalSeries difference_signal(const ForecastBatch& batch, std::string_view target)
{
    batch.validate();
    const auto it = std::find(batch.channels.begin(), batch.channels.end(), target);
    if (it == batch.channels.end()) throw SignalError("target '" + std::string(target) + "' not in forecast batch");
    if (batch.horizon() < 1) throw SignalError("forecast horizon must be >= 1");
    if (batch.last_observed.empty()) throw SignalError("forecast batch carries no last observed values");
    const auto c = static_cast<std::size_t>(it - batch.channels.begin());
    SignalSeries s;
    s.asset = std::string(target);
    s.origin_rows = batch.origin_rows;
    s.labels = batch.origin_labels;
    s.raw.resize(batch.samples());
    const auto last_step = batch.horizon() - 1;
    for (std::size_t i = 0; i < batch.samples(); ++i) s.raw[i] = batch.y_pred(i, last_step, c) - batch.last_observed(i, c);
    return s;
}

/// raw minus its trailing mean over `window` points (inclusive); the first
/// window-1 points have no value, so the result has raw.size() - window + 1 entries.
inline std::vector<double> diff_in_diff(std::span<const double> raw, std::size_t window)
{
    if (window < 1) throw SignalError("rolling window must be >= 1");
    if (raw.size() <= window)
        throw SignalError("signal of length " + std::to_string(raw.size()) + " too short for window " +
                          std::to_string(window));
    std::vector<double> dd(raw.size() - window + 1);
    for (std::size_t j = 0; j < dd.size(); ++j) {
        const auto w = raw.subspan(j, window);
        const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(window);
        dd[j] = raw[j + window - 1] - mean;
    }
    return dd;
}

inline void attach_diff_in_diff(SignalSeries& s, std::size_t window)
{
    s.dd = diff_in_diff(s.raw, window);
    s.dd_offset = window - 1;
}

struct PositionSeries {
    std::vector<std::string> assets;
    std::size_t rebalance_period = 5;
    Matrix weights;  // decision points x assets

    [[nodiscard]] std::size_t points() const noexcept { return weights.rows(); }

    /// First `n` decision points.
    [[nodiscard]] PositionSeries head(std::size_t n) const
    {
        if (n > points()) throw StrategyError("cannot take more positions than exist");
        PositionSeries out{assets, rebalance_period, Matrix(n, assets.size())};
        for (std::size_t r = 0; r < n; ++r) std::copy(weights.row(r).begin(), weights.row(r).end(), out.weights.row(r).begin());
        return out;
    }
};

namespace detail {

inline void check_period(std::size_t period)
{
    if (period < 1) throw StrategyError("rebalance period must be >= 1");
}

template <class Rule>
PositionSeries single_asset_positions(std::span<const double> dd, std::size_t period, std::string asset, Rule rule)
{
    check_period(period);
    PositionSeries p{{std::move(asset)}, period, Matrix(dd.size(), 1)};
    double held = 0.0;
    for (std::size_t j = 0; j < dd.size(); ++j) {
        if (j % period == 0) held = rule(dd[j]);
        p.weights(j, 0) = held;
    }
    return p;
}

} // namespace detail

/// Long (1) when dd > 0 at the rebalance point, otherwise cash (0).
inline PositionSeries timing_positions(std::span<const double> dd, std::size_t period = 5, std::string asset = "asset")
{
    return detail::single_asset_positions(dd, period, std::move(asset), [](double v) { return v > 0.0 ? 1.0 : 0.0; });
}

/// Long (1) when dd > 0 at the rebalance point, otherwise short (-1).
inline PositionSeries long_short_positions(std::span<const double> dd, std::size_t period = 5, std::string asset = "asset")
{
    return detail::single_asset_positions(dd, period, std::move(asset), [](double v) { return v > 0.0 ? 1.0 : -1.0; });
}

/// Equal weight 1/k on the k assets with the largest dd at each rebalance
/// point; ties go to the lexicographically smaller asset name.
inline PositionSeries portfolio_topk(const Matrix& dd, const std::vector<std::string>& assets, std::size_t k,
                                     std::size_t period = 5)
{
    detail::check_period(period);
    if (dd.cols() != assets.size()) throw StrategyError("signal matrix has " + std::to_string(dd.cols()) + " columns for " +
                                                        std::to_string(assets.size()) + " assets");
    if (k < 1 || k > assets.size())
        throw StrategyError("k=" + std::to_string(k) + " outside 1.." + std::to_string(assets.size()));
    PositionSeries p{assets, period, Matrix(dd.rows(), assets.size())};
    const double w = 1.0 / static_cast<double>(k);
    std::vector<std::size_t> order(assets.size());
    std::vector<double> held(assets.size(), 0.0);
    for (std::size_t j = 0; j < dd.rows(); ++j) {
        if (j % period == 0) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (dd(j, a) != dd(j, b)) return dd(j, a) > dd(j, b);
                return assets[a] < assets[b];
            });
            std::fill(held.begin(), held.end(), 0.0);
            for (std::size_t i = 0; i < k; ++i) held[order[i]] = w;
        }
        std::copy(held.begin(), held.end(), p.weights.row(j).begin());
    }
    return p;
}

/// Static 1/n weights on every asset.
inline PositionSeries equal_weight_positions(const std::vector<std::string>& assets, std::size_t points,
                                             std::size_t period = 5)
{
    if (assets.empty()) throw StrategyError("no assets");
    return {assets, period, Matrix(points, assets.size(), 1.0 / static_cast<double>(assets.size()))};
}

struct EquityCurve {
    std::vector<std::string> timestamps;  // inception first
    std::vector<double> net_value;        // net_value[0] == 1
    std::vector<double> period_returns;   // period_returns[j] takes net_value[j] to net_value[j+1]
};

/// Compounds sum_a weight[j][a] * return[j][a] from a net value of 1.
/// Row j of `realized_returns` is the simple return earned by decision j.
inline EquityCurve equity_curve(const PositionSeries& positions, const Panel& realized_returns,
                                std::string inception_label = "inception")
{
    if (positions.points() != realized_returns.rows())
        throw StrategyError("positions have " + std::to_string(positions.points()) + " rows, returns have " +
                            std::to_string(realized_returns.rows()));
    std::vector<std::size_t> cols;
    for (const auto& a : positions.assets) {
        const auto c = realized_returns.find(a);
        if (!c) throw StrategyError("no returns for asset '" + a + "'");
        cols.push_back(*c);
    }
    EquityCurve curve;
    curve.timestamps.reserve(positions.points() + 1);
    curve.timestamps.push_back(std::move(inception_label));
    curve.net_value.push_back(1.0);
    double net = 1.0;
    for (std::size_t j = 0; j < positions.points(); ++j) {
        double r = 0.0;
        for (std::size_t a = 0; a < cols.size(); ++a) r += positions.weights(j, a) * realized_returns.value(j, cols[a]);
        net *= 1.0 + r;
        if (!(net > 0.0))
            throw StrategyError("net value non-positive at '" + realized_returns.timestamps()[j].label + "'");
        curve.period_returns.push_back(r);
        curve.net_value.push_back(net);
        curve.timestamps.push_back(realized_returns.timestamps()[j].label);
    }
    return curve;
}

/// Simple returns between consecutive `rows` of a price panel; row j of the
/// result is labelled with the timestamp at rows[j + 1].
inline Panel period_returns(const Panel& prices, const std::vector<std::string>& assets, std::span<const std::size_t> rows)
{
    if (rows.size() < 2) throw StrategyError("need at least two signal points to form a return");
    std::vector<std::size_t> cols;
    for (const auto& a : assets) {
        const auto c = prices.find(a);
        if (!c) throw StrategyError("price panel has no column '" + a + "'");
        cols.push_back(*c);
    }
    Matrix m(rows.size() - 1, assets.size());
    std::vector<Timestamp> ts;
    for (std::size_t j = 0; j + 1 < rows.size(); ++j) {
        if (rows[j + 1] >= prices.rows() || rows[j + 1] <= rows[j])
            throw StrategyError("signal rows are not aligned with the price panel");
        for (std::size_t a = 0; a < cols.size(); ++a) {
            const double p0 = prices.value(rows[j], cols[a]);
            const double p1 = prices.value(rows[j + 1], cols[a]);
            if (!(p0 > 0.0) || !(p1 > 0.0)) throw StrategyError("non-positive price for '" + assets[a] + "'");
            m(j, a) = p1 / p0 - 1.0;
        }
        ts.push_back(prices.timestamps()[rows[j + 1]]);
    }
    return Panel(std::move(ts), assets, std::move(m), prices.index_name(), prices.frequency());
}

// ---------------------------------------------------------------------------
// Backtest driver

enum class StrategyKind { timing, long_short, top_k };

struct BacktestConfig {
    StrategyKind kind = StrategyKind::timing;
    std::size_t window = 63;
    std::size_t rebalance = 5;
    std::size_t k = 1;
    std::vector<std::string> assets;  // one for timing/long-short, the universe for top-k
};

struct BacktestResult {
    std::vector<SignalSeries> signals;
    PositionSeries positions;  // one row per period in the curve
    EquityCurve curve;
};

/// `prices` is the raw price panel whose rows the batch's origin rows index.
inline BacktestResult run_backtest(const ForecastBatch& batch, const Panel& prices, const BacktestConfig& cfg)
{
    if (cfg.assets.empty()) throw StrategyError("no assets selected");
    if (cfg.kind != StrategyKind::top_k && cfg.assets.size() != 1)
        throw StrategyError("timing and long-short strategies trade exactly one asset");
    if (batch.origin_rows.empty()) throw StrategyError("forecast batch carries no origin rows");
    for (std::size_t i = 1; i < batch.origin_rows.size(); ++i)
        if (batch.origin_rows[i] <= batch.origin_rows[i - 1]) throw StrategyError("origin rows not increasing");

    BacktestResult result;
    for (const auto& a : cfg.assets) {
        auto s = difference_signal(batch, a);
        attach_diff_in_diff(s, cfg.window);
        result.signals.push_back(std::move(s));
    }
    const auto& first = result.signals.front();
    const std::size_t points = first.dd.size();
    if (points < 2) throw StrategyError("fewer than two decision points after the rolling window");

    PositionSeries positions;
    if (cfg.kind == StrategyKind::top_k) {
        Matrix dd(points, cfg.assets.size());
        for (std::size_t a = 0; a < cfg.assets.size(); ++a)
            for (std::size_t j = 0; j < points; ++j) dd(j, a) = result.signals[a].dd[j];
        positions = portfolio_topk(dd, cfg.assets, cfg.k, cfg.rebalance);
    } else if (cfg.kind == StrategyKind::timing) {
        positions = timing_positions(first.dd, cfg.rebalance, cfg.assets.front());
    } else {
        positions = long_short_positions(first.dd, cfg.rebalance, cfg.assets.front());
    }

    const std::span<const std::size_t> rows(first.origin_rows.data() + first.dd_offset, points);
    const auto returns = period_returns(prices, cfg.assets, rows);
    result.positions = positions.head(points - 1);
    result.curve = equity_curve(result.positions, returns, prices.timestamps()[rows.front()].label);
    return result;
}

} // namespace fineval

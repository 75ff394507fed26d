#pragma once

// Strategy statistics computed from per-period simple returns and net values.
// Volatilities use the sample (n-1) standard deviation.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fineval/error.hpp"
#include "fineval/frame.hpp"
#include "fineval/strategy.hpp"

namespace fineval {

inline constexpr double trading_days_per_year = 252.0;

/// Default annualization factor; minutely and unknown frequencies have none.
inline std::optional<double> default_periods_per_year(Frequency f) noexcept
{
    switch (f) {
    case Frequency::daily: return trading_days_per_year;
    case Frequency::hourly: return 8760.0;
    default: return std::nullopt;
    }
}

namespace detail {

inline void check_returns(std::span<const double> returns)
{
    if (returns.empty()) throw StatsError("no returns");
    for (const double r : returns)
        if (!(r > -1.0) || !std::isfinite(r)) throw StatsError("period return " + std::to_string(r) + " is <= -100%");
}

inline void check_periods(double periods_per_year)
{
    if (!(periods_per_year > 0.0)) throw StatsError("periods per year must be positive");
}

inline double sample_std(std::span<const double> v)
{
    // shifted by the first element so a constant series gives exactly zero
    const double n = static_cast<double>(v.size());
    const double shift = v.front();
    double sum = 0.0;
    for (const double x : v) sum += x - shift;
    const double mean = sum / n;
    double ss = 0.0;
    for (const double x : v) ss += (x - shift - mean) * (x - shift - mean);
    return std::sqrt(ss / (n - 1.0));
}

} // namespace detail

/// prod(1 + r) - 1
inline double cumulative_return(std::span<const double> returns)
{
    detail::check_returns(returns);
    double growth = 1.0;
    for (const double r : returns) growth *= 1.0 + r;
    return growth - 1.0;
}

/// prod(1 + r)^(1 / years) - 1 with years = n / periods_per_year.
inline double annual_return(std::span<const double> returns, double periods_per_year = trading_days_per_year)
{
    detail::check_periods(periods_per_year);
    const double growth = cumulative_return(returns) + 1.0;
    const double years = static_cast<double>(returns.size()) / periods_per_year;
    return std::pow(growth, 1.0 / years) - 1.0;
}

inline double annual_volatility(std::span<const double> returns, double periods_per_year = trading_days_per_year)
{
    detail::check_periods(periods_per_year);
    if (returns.size() < 2) throw StatsError("volatility needs at least 2 returns");
    return std::sqrt(periods_per_year) * detail::sample_std(returns);
}

inline double sharpe_ratio(double annual_ret, double annual_vol, double risk_free = 0.0)
{
    if (!(annual_vol > 0.0)) throw StatsError("Sharpe ratio undefined for zero volatility");
    return (annual_ret - risk_free) / annual_vol;
}

inline double sharpe_ratio(std::span<const double> returns, double periods_per_year = trading_days_per_year,
                           double risk_free = 0.0)
{
    return sharpe_ratio(annual_return(returns, periods_per_year), annual_volatility(returns, periods_per_year),
                        risk_free);
}

/// min_t (P_t - peak_t) / peak_t with a running peak; <= 0.
inline double max_drawdown(std::span<const double> net_values)
{
    if (net_values.empty()) throw StatsError("empty equity curve");
    double peak = net_values.front();
    double worst = 0.0;
    for (const double p : net_values) {
        if (!(p > 0.0)) throw StatsError("net values must be positive");
        peak = std::max(peak, p);
        worst = std::min(worst, (p - peak) / peak);
    }
    return worst;
}

/// annual return / |max drawdown|
inline double calmar_ratio(double annual_ret, double max_dd)
{
    if (!(max_dd < 0.0)) throw StatsError("Calmar ratio undefined without a drawdown");
    return annual_ret / std::abs(max_dd);
}

/// R^2 of the least-squares line through ln(net value) against the period index.
inline double stability(std::span<const double> net_values)
{
    if (net_values.size() < 3) throw StatsError("stability needs at least 3 points");
    const std::size_t n = net_values.size();
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        if (!(net_values[t] > 0.0)) throw StatsError("net values must be positive");
        y[t] = std::log(net_values[t]);
    }
    const double nn = static_cast<double>(n);
    const double mean_t = (nn - 1.0) / 2.0;
    const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / nn;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dt = static_cast<double>(t) - mean_t;
        const double dy = y[t] - mean_y;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); }) || syy == 0.0)
        throw StatsError("stability undefined for a flat curve");
    const double slope = sty / stt;
    const double intercept = mean_y - slope * mean_t;
    double explained = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double fitted = intercept + slope * static_cast<double>(t);
        explained += (fitted - mean_y) * (fitted - mean_y);
    }
    return std::clamp(explained / syy, 0.0, 1.0);
}

/// Sum of gains over sum of |losses| at threshold 0.
inline double omega_ratio(std::span<const double> returns)
{
    double gains = 0.0, losses = 0.0;
    for (const double r : returns) {
        if (r > 0.0) gains += r;
        if (r < 0.0) losses += -r;
    }
    if (!(losses > 0.0)) throw StatsError("Omega ratio undefined without losses");
    return gains / losses;
}

/// sqrt(periods_per_year) * sample std of the negative returns (or the raw std
/// when `annualize` is false).
inline double downside_volatility(std::span<const double> returns, double periods_per_year = trading_days_per_year,
                                  bool annualize = true)
{
    detail::check_periods(periods_per_year);
    std::vector<double> neg;
    for (const double r : returns)
        if (r < 0.0) neg.push_back(r);
    if (neg.size() < 2) throw StatsError("downside volatility needs at least 2 negative returns");
    const double sd = detail::sample_std(neg);
    return annualize ? std::sqrt(periods_per_year) * sd : sd;
}

inline double sortino_ratio(std::span<const double> returns, double periods_per_year = trading_days_per_year,
                            double risk_free = 0.0, bool annualize_downside = true)
{
    const double down = downside_volatility(returns, periods_per_year, annualize_downside);
    if (!(down > 0.0)) throw StatsError("Sortino ratio undefined for zero downside volatility");
    return (annual_return(returns, periods_per_year) - risk_free) / down;
}

/// The nine statistics; any that are undefined for this curve are left empty.
struct StrategyReport {
    std::optional<double> annual_return;
    std::optional<double> cumulative_return;
    std::optional<double> annual_volatility;
    std::optional<double> sharpe;
    std::optional<double> calmar;
    std::optional<double> stability;
    std::optional<double> max_drawdown;
    std::optional<double> omega;
    std::optional<double> sortino;
    double periods_per_year = trading_days_per_year;
    double risk_free = 0.0;

    struct Row {
        std::string_view name;
        std::optional<double> value;
    };

    /// Presentation order: return, cumulative, volatility, Sharpe, Calmar,
    /// stability, drawdown, Omega, Sortino.
    [[nodiscard]] std::vector<Row> rows() const
    {
        return {{"annual_return", annual_return}, {"cumulative_returns", cumulative_return},
                {"annual_volatility", annual_volatility}, {"sharpe_ratio", sharpe},
                {"calmar_ratio", calmar}, {"stability", stability},
                {"max_drawdown", max_drawdown}, {"omega_ratio", omega},
                {"sortino_ratio", sortino}};
    }
};

struct ReportOptions {
    double periods_per_year = trading_days_per_year;
    double risk_free = 0.0;
    bool annualize_downside = true;
};

inline StrategyReport full_report(std::span<const double> period_returns, std::span<const double> net_values,
                                  const ReportOptions& opt = {})
{
    if (period_returns.empty() || net_values.empty()) throw StatsError("empty equity curve");
    detail::check_periods(opt.periods_per_year);
    StrategyReport rep;
    rep.periods_per_year = opt.periods_per_year;
    rep.risk_free = opt.risk_free;
    const auto attempt = [](auto&& fn) -> std::optional<double> {
        try {
            const double v = fn();
            if (std::isfinite(v)) return v;
        } catch (const StatsError&) {
        }
        return std::nullopt;
    };
    rep.annual_return = attempt([&] { return annual_return(period_returns, opt.periods_per_year); });
    rep.cumulative_return = attempt([&] { return cumulative_return(period_returns); });
    rep.annual_volatility = attempt([&] { return annual_volatility(period_returns, opt.periods_per_year); });
    if (rep.annual_return && rep.annual_volatility)
        rep.sharpe = attempt([&] { return sharpe_ratio(*rep.annual_return, *rep.annual_volatility, opt.risk_free); });
    rep.max_drawdown = attempt([&] { return max_drawdown(net_values); });
    if (rep.annual_return && rep.max_drawdown)
        rep.calmar = attempt([&] { return calmar_ratio(*rep.annual_return, *rep.max_drawdown); });
    rep.stability = attempt([&] { return stability(net_values); });
    rep.omega = attempt([&] { return omega_ratio(period_returns); });
    rep.sortino = attempt(
        [&] { return sortino_ratio(period_returns, opt.periods_per_year, opt.risk_free, opt.annualize_downside); });
    return rep;
}

inline StrategyReport full_report(const EquityCurve& curve, const ReportOptions& opt = {})
{
    return full_report(curve.period_returns, curve.net_value, opt);
}

} // namespace fineval

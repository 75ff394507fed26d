#pragma once

// Black-Scholes pricing, implied volatility, Greeks and historical volatility
// for European options without dividends.
//
// Every routine is templated on the floating-point type. `double` is the
// default; `long double` extends the exponent range for deep out-of-the-money
// quotes whose prices underflow in double precision.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fineval/error.hpp"

namespace fineval {

enum class OptionKind { call, put };

inline std::string_view to_string(OptionKind k) noexcept { return k == OptionKind::call ? "call" : "put"; }

template <std::floating_point Real = double>
struct BasicOptionQuote {
    Real spot = 0;
    Real strike = 0;
    Real rate = 0;    // per annum, continuously compounded
    Real expiry = 0;  // years
    OptionKind kind = OptionKind::call;
    Real market_price = 0;  // used by implied_vol only

    void validate() const
    {
        if (!(spot > 0) || !std::isfinite(spot)) throw PricingError("spot must be positive");
        if (!(strike > 0) || !std::isfinite(strike)) throw PricingError("strike must be positive");
        if (!(expiry > 0) || !std::isfinite(expiry)) throw PricingError("expiry must be positive");
        if (!std::isfinite(rate)) throw PricingError("rate must be finite");
    }
};

using OptionQuote = BasicOptionQuote<double>;

template <std::floating_point Real = double>
struct BasicGreeks {
    Real delta = 0;
    Real theta = 0;  // per year of calendar time, i.e. -dV/dT
    Real gamma = 0;
    Real vega = 0;
    Real rho_rate = 0;
};

using Greeks = BasicGreeks<double>;

template <std::floating_point Real>
Real norm_cdf(Real x)
{
    using std::erfc;
    return Real(0.5) * erfc(-x / std::numbers::sqrt2_v<Real>);
}

template <std::floating_point Real>
Real norm_pdf(Real x)
{
    using std::exp;
    return std::numbers::inv_sqrtpi_v<Real> / std::numbers::sqrt2_v<Real> * exp(Real(-0.5) * x * x);
}

namespace detail {

template <std::floating_point Real>
struct D12 {
    Real d1;
    Real d2;
    Real sqrt_t;
    Real discount;  // e^{-rT}
};

template <std::floating_point Real>
D12<Real> d12(const BasicOptionQuote<Real>& q, Real sigma)
{
    using std::exp;
    using std::log;
    using std::sqrt;
    const Real sqrt_t = sqrt(q.expiry);
    const Real vol_t = sigma * sqrt_t;
    const Real d1 = (log(q.spot / q.strike) + (q.rate + sigma * sigma / 2) * q.expiry) / vol_t;
    return {d1, d1 - vol_t, sqrt_t, exp(-q.rate * q.expiry)};
}

template <std::floating_point Real>
void check_sigma(Real sigma)
{
    if (!(sigma > 0) || !std::isfinite(sigma)) throw PricingError("volatility must be positive");
}

} // namespace detail

/// Call: S N(d1) - X e^{-rT} N(d2). Put: X e^{-rT} N(-d2) - S N(-d1), which
/// equals the parity form C - S + X e^{-rT} without its cancellation.
template <std::floating_point Real>
Real bs_price(const BasicOptionQuote<Real>& q, Real sigma)
{
    q.validate();
    detail::check_sigma(sigma);
    const auto [d1, d2, sqrt_t, disc] = detail::d12(q, sigma);
    Real price;
    if (q.kind == OptionKind::call)
        price = q.spot * norm_cdf(d1) - q.strike * disc * norm_cdf(d2);
    else
        price = q.strike * disc * norm_cdf(-d2) - q.spot * norm_cdf(-d1);
    return std::max(price, Real(0));
}

template <std::floating_point Real>
Real bs_vega(const BasicOptionQuote<Real>& q, Real sigma)
{
    q.validate();
    detail::check_sigma(sigma);
    const auto [d1, d2, sqrt_t, disc] = detail::d12(q, sigma);
    return q.spot * sqrt_t * norm_pdf(d1);
}

template <std::floating_point Real>
BasicGreeks<Real> greeks(const BasicOptionQuote<Real>& q, Real sigma)
{
    q.validate();
    detail::check_sigma(sigma);
    const auto [d1, d2, sqrt_t, disc] = detail::d12(q, sigma);
    const Real pdf = norm_pdf(d1);
    BasicGreeks<Real> g;
    g.gamma = pdf / (q.spot * sigma * sqrt_t);
    g.vega = q.spot * sqrt_t * pdf;
    const Real time_decay = -q.spot * pdf * sigma / (2 * sqrt_t);
    if (q.kind == OptionKind::call) {
        g.delta = norm_cdf(d1);
        g.theta = time_decay - q.rate * q.strike * disc * norm_cdf(d2);
        g.rho_rate = q.strike * q.expiry * disc * norm_cdf(d2);
    } else {
        g.delta = -norm_cdf(-d1);
        g.theta = time_decay + q.rate * q.strike * disc * norm_cdf(-d2);
        g.rho_rate = -q.strike * q.expiry * disc * norm_cdf(-d2);
    }
    return g;
}

struct ImpliedVolOptions {
    double lower = 1e-6;
    double upper = 5.0;
    int max_iterations = 100;
    double sigma_tolerance = 1e-13;
    double min_vega = 1e-12;
};

/// Safeguarded Newton-Raphson on sigma. A Newton step is taken when it stays
/// inside the current bracket and at least halves the previous step;
/// otherwise the bracket is bisected.
template <std::floating_point Real>
Real implied_vol(const BasicOptionQuote<Real>& q, const ImpliedVolOptions& opt = {})
{
    using std::abs;
    using std::exp;
    using std::sqrt;
    q.validate();
    const Real mkt = q.market_price;
    const Real disc = exp(-q.rate * q.expiry);
    const Real lower_bound =
        q.kind == OptionKind::call ? std::max(q.spot - q.strike * disc, Real(0)) : std::max(q.strike * disc - q.spot, Real(0));
    const Real upper_bound = q.kind == OptionKind::call ? q.spot : q.strike * disc;
    if (!std::isfinite(mkt) || !(mkt > lower_bound) || !(mkt < upper_bound))
        throw NoImpliedVolError("market price outside no-arbitrage bounds (" + std::to_string(static_cast<double>(lower_bound)) +
                                ", " + std::to_string(static_cast<double>(upper_bound)) + ")");

    Real lo = static_cast<Real>(opt.lower);
    Real hi = static_cast<Real>(opt.upper);
    const auto f = [&](Real s) { return bs_price(q, s) - mkt; };
    const Real f_lo = f(lo);
    if (f_lo == 0) return lo;
    if (f_lo > 0) throw NoImpliedVolError("implied volatility below the solver bracket");
    const Real f_hi = f(hi);
    if (f_hi == 0) return hi;
    if (f_hi < 0) throw NoImpliedVolError("implied volatility above the solver bracket");

    const Real two_pi = 2 * std::numbers::pi_v<Real>;
    Real sigma = std::clamp(sqrt(two_pi / q.expiry) * mkt / q.spot, Real(0.05), Real(2));
    Real step_old = hi - lo;
    Real step = step_old;
    const Real tol = static_cast<Real>(opt.sigma_tolerance);
    const Real price_tol = Real(1e-10) * q.spot;

    for (int it = 0; it < opt.max_iterations; ++it) {
        const Real fs = f(sigma);
        if (fs == 0) return sigma;
        if (fs < 0)
            lo = sigma;
        else
            hi = sigma;
        const Real vega = bs_vega(q, sigma);
        bool bisect = vega < static_cast<Real>(opt.min_vega);
        Real next = sigma;
        if (!bisect) {
            next = sigma - fs / vega;
            bisect = !(next > lo && next < hi) || abs(2 * fs) > abs(step_old * vega);
        }
        step_old = step;
        if (bisect) {
            step = (hi - lo) / 2;
            next = lo + step;
        } else {
            step = fs / vega;
        }
        const bool small_step = abs(next - sigma) < tol || (hi - lo) < tol;
        sigma = next;
        if (small_step && abs(f(sigma)) < price_tol) return sigma;
    }
    throw ConvergenceError("implied volatility did not converge in " + std::to_string(opt.max_iterations) +
                           " iterations");
}

/// Rolling sample standard deviation of log returns. Entry k covers the
/// `window` returns ending at price index k + window; no annualization.
template <std::floating_point Real = double>
std::vector<Real> historical_vol(std::span<const Real> prices, std::size_t window)
{
    using std::log;
    using std::sqrt;
    if (window < 2) throw WindowError("historical volatility window must be >= 2");
    if (prices.size() < window + 1)
        throw WindowError("need at least " + std::to_string(window + 1) + " prices, got " +
                          std::to_string(prices.size()));
    std::vector<Real> returns(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i) {
        if (!(prices[i - 1] > 0) || !(prices[i] > 0)) throw PricingError("prices must be positive");
        returns[i - 1] = log(prices[i] / prices[i - 1]);
    }
    std::vector<Real> out(prices.size() - window);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto w = std::span<const Real>(returns).subspan(k, window);
        Real mean = 0;
        for (const Real r : w) mean += r;
        mean /= static_cast<Real>(window);
        Real ss = 0;
        for (const Real r : w) ss += (r - mean) * (r - mean);
        out[k] = sqrt(ss / static_cast<Real>(window - 1));
    }
    return out;
}

inline std::vector<double> historical_vol(const std::vector<double>& prices, std::size_t window)
{
    return historical_vol<double>(std::span<const double>(prices), window);
}

} // namespace fineval

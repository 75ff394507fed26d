#pragma once

// Brute-force reference implementations used only by the tests. They share no
// code with the library and favour obviousness over speed: O(n^2) ranking,
// raw-sum Pearson in long double, all-pairs drawdown, normal-equation fits.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "fineval/options.hpp"

namespace oracle {

using ld = long double;

/// rank_i = 1 + #{v_j < v_i} + (#{v_j == v_i, j != i}) / 2
inline std::vector<double> ranks(const std::vector<double>& v)
{
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t less = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++less;
            if (j != i && v[j] == v[i]) ++equal;
        }
        r[i] = 1.0 + static_cast<double>(less) + static_cast<double>(equal) / 2.0;
    }
    return r;
}

/// (n Sxy - Sx Sy) / sqrt((n Sxx - Sx^2)(n Syy - Sy^2)); 0 when either side is constant.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    const ld n = static_cast<ld>(x.size());
    ld sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    bool cx = true, cy = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<ld>(x[i]) * x[i];
        syy += static_cast<ld>(y[i]) * y[i];
        sxy += static_cast<ld>(x[i]) * y[i];
        cx = cx && x[i] == x[0];
        cy = cy && y[i] == y[0];
    }
    if (cx || cy) return 0.0;
    const ld num = n * sxy - sx * sy;
    const ld den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    return static_cast<double>(num / den);
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y)
{
    return pearson(ranks(x), ranks(y));
}

/// Truth/prediction stored as nested [b][c][f] vectors.
using Cube = std::vector<std::vector<std::vector<double>>>;

inline std::vector<double> per_sample_ic(const Cube& truth, const Cube& pred)
{
    std::vector<double> out;
    for (std::size_t b = 0; b < truth.size(); ++b) {
        ld s = 0;
        for (std::size_t c = 0; c < truth[b].size(); ++c) s += spearman(truth[b][c], pred[b][c]);
        out.push_back(static_cast<double>(s / static_cast<ld>(truth[b].size())));
    }
    return out;
}

inline double ms_ic(const Cube& truth, const Cube& pred)
{
    ld s = 0;
    std::size_t n = 0;
    for (std::size_t b = 0; b < truth.size(); ++b)
        for (std::size_t c = 0; c < truth[b].size(); ++c, ++n) s += spearman(truth[b][c], pred[b][c]);
    return static_cast<double>(s / static_cast<ld>(n));
}

inline double population_std(const std::vector<double>& v)
{
    ld m = 0;
    for (const double x : v) m += x;
    m /= static_cast<ld>(v.size());
    ld ss = 0;
    for (const double x : v) ss += (x - m) * (x - m);
    return static_cast<double>(std::sqrt(ss / static_cast<ld>(v.size())));
}

inline double sample_std(const std::vector<double>& v)
{
    ld m = 0;
    for (const double x : v) m += x;
    m /= static_cast<ld>(v.size());
    ld ss = 0;
    for (const double x : v) ss += (x - m) * (x - m);
    return static_cast<double>(std::sqrt(ss / static_cast<ld>(v.size() - 1)));
}

inline double ms_ir(const Cube& truth, const Cube& pred)
{
    const auto ics = per_sample_ic(truth, pred);
    ld m = 0;
    for (const double x : ics) m += x;
    return static_cast<double>(m / static_cast<ld>(ics.size())) / population_std(ics);
}

/// min over i <= j of P_j / P_i - 1
inline double max_drawdown(const std::vector<double>& p)
{
    double worst = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
        for (std::size_t i = 0; i <= j; ++i) worst = std::min(worst, p[j] / p[i] - 1.0);
    return worst;
}

/// R^2 = 1 - SS_res / SS_tot of ln(p) on t, coefficients from the 2x2 normal equations.
inline double log_linear_r2(const std::vector<double>& p)
{
    const std::size_t n = p.size();
    ld st = 0, stt = 0, sy = 0, sty = 0;
    std::vector<ld> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        y[t] = std::log(static_cast<ld>(p[t]));
        st += t;
        stt += static_cast<ld>(t) * t;
        sy += y[t];
        sty += t * y[t];
    }
    const ld nn = static_cast<ld>(n);
    const ld det = nn * stt - st * st;
    const ld a = (sy * stt - st * sty) / det;
    const ld b = (nn * sty - st * sy) / det;
    const ld mean = sy / nn;
    ld res = 0, tot = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const ld e = y[t] - (a + b * t);
        res += e * e;
        tot += (y[t] - mean) * (y[t] - mean);
    }
    return static_cast<double>(1 - res / tot);
}

/// Random walk of positive values starting at 1.
inline std::vector<double> random_curve(std::mt19937_64& rng, std::size_t n, double vol = 0.02)
{
    std::normal_distribution<double> z(0.0, vol);
    std::vector<double> p(n);
    double v = 1.0;
    for (auto& x : p) {
        x = v;
        v *= std::exp(z(rng));
    }
    return p;
}

inline fineval::BasicOptionQuote<long double> widen(const fineval::OptionQuote& q)
{
    return {q.spot, q.strike, q.rate, q.expiry, q.kind, q.market_price};
}

/// Central differences of the long double price. Gamma and vega are the same
/// for a call and a put on the same terms, so they are differenced on the
/// cheaper of the two: deep in the money the curvature is far below the
/// rounding of the price itself.
inline fineval::Greeks finite_difference(const fineval::OptionQuote& q, double sigma)
{
    using ld = long double;
    using LQuote = fineval::BasicOptionQuote<ld>;
    const auto price = [](const LQuote& p, ld s) { return fineval::bs_price(p, s); };
    const LQuote base = widen(q);
    LQuote sibling = base;
    sibling.kind = base.kind == fineval::OptionKind::call ? fineval::OptionKind::put : fineval::OptionKind::call;
    const LQuote& cheap = price(sibling, sigma) < price(base, sigma) ? sibling : base;
    const auto step = [](ld x) { return ld(1e-6) * std::max(std::fabs(x), ld(1)); };
    fineval::Greeks g;
    {
        const ld h = step(base.spot);
        LQuote up = base, dn = base;
        up.spot += h;
        dn.spot -= h;
        g.delta = static_cast<double>((price(up, sigma) - price(dn, sigma)) / (2 * h));
        LQuote cu = cheap, cd = cheap;
        cu.spot += h;
        cd.spot -= h;
        g.gamma = static_cast<double>((price(cu, sigma) - 2 * price(cheap, sigma) + price(cd, sigma)) / (h * h));
    }
    {
        const ld h = step(sigma);
        g.vega = static_cast<double>((price(cheap, sigma + h) - price(cheap, sigma - h)) / (2 * h));
    }
    {
        const ld h = step(base.expiry) * std::min(ld(1), base.expiry);
        LQuote up = base, dn = base;
        up.expiry += h;
        dn.expiry -= h;
        g.theta = static_cast<double>(-(price(up, sigma) - price(dn, sigma)) / (2 * h));
    }
    {
        const ld h = step(base.rate);
        LQuote up = base, dn = base;
        up.rate += h;
        dn.rate -= h;
        g.rho_rate = static_cast<double>((price(up, sigma) - price(dn, sigma)) / (2 * h));
    }
    return g;
}

} // namespace oracle

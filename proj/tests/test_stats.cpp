#include <gtest/gtest.h>

#include <random>

#include "fineval/stats.hpp"
#include "oracles.hpp"

using namespace fineval;

TEST(Cumulative, Examples)
{
    EXPECT_NEAR(cumulative_return(std::vector<double>{0.1, 0.1}), 0.21, 1e-15);
    EXPECT_EQ(cumulative_return(std::vector<double>(10, 0.0)), 0.0);
    EXPECT_THROW(cumulative_return(std::vector<double>{0.1, -1.0}), StatsError);
    EXPECT_THROW(cumulative_return(std::vector<double>{}), StatsError);
}

TEST(Cumulative, ExtendedPrecisionProductAndComposability)
{
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z(0.0, 0.03);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> a(50), b(30);
        long double prod = 1;
        for (auto& x : a) {
            x = z(rng);
            prod *= 1 + static_cast<long double>(x);
        }
        for (auto& x : b) x = z(rng);
        EXPECT_NEAR(cumulative_return(a), static_cast<double>(prod - 1), 1e-12);
        std::vector<double> ab(a);
        ab.insert(ab.end(), b.begin(), b.end());
        EXPECT_NEAR(cumulative_return(ab), (1 + cumulative_return(a)) * (1 + cumulative_return(b)) - 1, 1e-12);
    }
}

TEST(AnnualReturn, Examples)
{
    EXPECT_EQ(annual_return(std::vector<double>(20, 0.0)), 0.0);
    EXPECT_NEAR(annual_return(std::vector<double>{0.21}, 2.0), 0.4641, 1e-14);
    std::vector<double> year(252, 0.0);
    year.push_back(0.10);
    EXPECT_NEAR(annual_return(year, 252.0), 0.0995856859590031033, 1e-15);
    EXPECT_THROW(annual_return(year, 0.0), StatsError);
}

TEST(AnnualVolatility, Examples)
{
    EXPECT_EQ(annual_volatility(std::vector<double>(12, 0.003)), 0.0);
    std::vector<double> alt;
    for (int i = 0; i < 10; ++i) {
        alt.push_back(0.01);
        alt.push_back(-0.01);
    }
    const double n = static_cast<double>(alt.size());
    EXPECT_NEAR(annual_volatility(alt), 0.01 * std::sqrt(252.0) * std::sqrt(n / (n - 1)), 1e-15);
    EXPECT_NEAR(annual_volatility(alt), std::sqrt(252.0) * oracle::sample_std(alt), 1e-15);
    EXPECT_THROW(annual_volatility(std::vector<double>{0.01}), StatsError);
}

TEST(Sharpe, TableInputsAndErrors)
{
    EXPECT_NEAR(sharpe_ratio(0.1787, 0.1461), 1.22313483915126626, 1e-15);
    EXPECT_NEAR(sharpe_ratio(0.1787, 0.1461, 0.02), (0.1787 - 0.02) / 0.1461, 1e-15);
    EXPECT_THROW(sharpe_ratio(0.1, 0.0), StatsError);
    EXPECT_THROW(sharpe_ratio(std::vector<double>(5, 0.01)), StatsError);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> z(0.0005, 0.01);
    std::vector<double> r(300);
    for (auto& x : r) x = z(rng);
    long double g = 1;
    for (const double x : r) g *= 1 + static_cast<long double>(x);
    const double ann = static_cast<double>(std::pow(g, 252.0L / 300.0L) - 1);
    EXPECT_NEAR(sharpe_ratio(r, 252.0, 0.01), (ann - 0.01) / (std::sqrt(252.0) * oracle::sample_std(r)), 1e-12);
}

TEST(MaxDrawdown, Examples)
{
    EXPECT_DOUBLE_EQ(max_drawdown(std::vector<double>{1, 2, 1}), -0.5);
    EXPECT_EQ(max_drawdown(std::vector<double>{1, 1.1, 1.2, 1.5}), 0.0);
    EXPECT_THROW(max_drawdown(std::vector<double>{}), StatsError);
    EXPECT_THROW(max_drawdown(std::vector<double>{1, 0}), StatsError);
}

TEST(MaxDrawdown, AllPairsOracleAndScaleInvariance)
{
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 50; ++rep) {
        auto p = oracle::random_curve(rng, 200);
        const double mdd = max_drawdown(p);
        EXPECT_NEAR(mdd, oracle::max_drawdown(p), 1e-12);
        EXPECT_GE(mdd, -1.0);
        EXPECT_LE(mdd, 0.0);
        for (auto& v : p) v *= 37.5;
        EXPECT_NEAR(max_drawdown(p), mdd, 1e-12);
    }
}

TEST(Calmar, Examples)
{
    EXPECT_NEAR(calmar_ratio(0.1787, -0.2163), 0.82616736014794267, 1e-15);
    EXPECT_EQ(calmar_ratio(0.0, -0.2), 0.0);
    EXPECT_THROW(calmar_ratio(0.1, 0.0), StatsError);
}

TEST(Stability, Examples)
{
    std::vector<double> expo;
    for (int t = 0; t < 100; ++t) expo.push_back(std::exp(0.003 * t));
    EXPECT_NEAR(stability(expo), 1.0, 1e-12);
    EXPECT_THROW(stability(std::vector<double>(10, 1.0)), StatsError);
    EXPECT_THROW(stability(std::vector<double>{1, 2}), StatsError);
}

TEST(Stability, NormalEquationOracle)
{
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        const auto p = oracle::random_curve(rng, 150);
        const double s = stability(p);
        EXPECT_NEAR(s, oracle::log_linear_r2(p), 1e-10);
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0);
    }
}

TEST(Omega, Examples)
{
    EXPECT_DOUBLE_EQ(omega_ratio(std::vector<double>{1, -1}), 1.0);
    EXPECT_DOUBLE_EQ(omega_ratio(std::vector<double>{2, -1}), 2.0);
    EXPECT_THROW(omega_ratio(std::vector<double>{0.1, 0.2}), StatsError);
    std::mt19937_64 rng(6);
    std::normal_distribution<double> z(0.0, 0.02);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> r(60);
        long double up = 0, down = 0;
        for (auto& x : r) {
            x = z(rng);
            (x > 0 ? up : down) += std::fabs(static_cast<long double>(x));
        }
        const double om = omega_ratio(r);
        EXPECT_NEAR(om, static_cast<double>(up / down), 1e-12);
        EXPECT_EQ(om > 1.0, up > down);
    }
}

TEST(Sortino, Examples)
{
    EXPECT_THROW(sortino_ratio(std::vector<double>{0.01, 0.02, 0.03}), StatsError);
    EXPECT_THROW(downside_volatility(std::vector<double>{-0.01, 0.02}), StatsError);
    // identical losses have no dispersion
    EXPECT_THROW(sortino_ratio(std::vector<double>{-0.01, 0.01, -0.01, 0.01}), StatsError);

    const std::vector<double> r{0.01, -0.01, 0.02, -0.02, 0.015, -0.005, 0.01, -0.015};
    const std::vector<double> neg{-0.01, -0.02, -0.005, -0.015};
    const double down = std::sqrt(252.0) * oracle::sample_std(neg);
    EXPECT_NEAR(downside_volatility(r), down, 1e-15);
    EXPECT_NEAR(downside_volatility(r, 252.0, false), oracle::sample_std(neg), 1e-15);
    EXPECT_NEAR(sortino_ratio(r, 252.0, 0.0), annual_return(r, 252.0) / down, 1e-12);
    EXPECT_NEAR(sortino_ratio(r, 252.0, 0.03), (annual_return(r, 252.0) - 0.03) / down, 1e-12);
}

TEST(Report, FlatCurve)
{
    const std::vector<double> r(10, 0.0), net(11, 1.0);
    const auto rep = full_report(r, net);
    EXPECT_EQ(rep.annual_return, 0.0);
    EXPECT_EQ(rep.cumulative_return, 0.0);
    EXPECT_EQ(rep.annual_volatility, 0.0);
    EXPECT_EQ(rep.max_drawdown, 0.0);
    EXPECT_FALSE(rep.sharpe);
    EXPECT_FALSE(rep.calmar);
    EXPECT_FALSE(rep.stability);
    EXPECT_FALSE(rep.omega);
    EXPECT_FALSE(rep.sortino);
    EXPECT_THROW(full_report(std::vector<double>{}, std::vector<double>{1.0}), StatsError);
}

TEST(Report, GrowthCurveAgainstPerStatOracles)
{
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z(0.001, 0.01);
    std::vector<double> r(500), net{1.0};
    for (auto& x : r) {
        x = z(rng);
        net.push_back(net.back() * (1 + x));
    }
    const auto rep = full_report(r, net, {252.0, 0.01, true});
    const auto rows = rep.rows();
    ASSERT_EQ(rows.size(), 9u);
    EXPECT_EQ(rows[0].name, "annual_return");
    EXPECT_EQ(rows[8].name, "sortino_ratio");
    for (const auto& row : rows) EXPECT_TRUE(row.value.has_value()) << row.name;
    EXPECT_NEAR(*rep.cumulative_return, net.back() - 1, 1e-12);
    EXPECT_NEAR(*rep.annual_volatility, std::sqrt(252.0) * oracle::sample_std(r), 1e-14);
    EXPECT_NEAR(*rep.sharpe, (*rep.annual_return - 0.01) / *rep.annual_volatility, 1e-14);
    EXPECT_NEAR(*rep.max_drawdown, oracle::max_drawdown(net), 1e-12);
    EXPECT_NEAR(*rep.calmar, *rep.annual_return / std::abs(*rep.max_drawdown), 1e-14);
    EXPECT_NEAR(*rep.stability, oracle::log_linear_r2(net), 1e-10);
}

TEST(Report, PeriodsPerYearDefaults)
{
    EXPECT_EQ(default_periods_per_year(Frequency::daily), 252.0);
    EXPECT_EQ(default_periods_per_year(Frequency::hourly), 8760.0);
    EXPECT_FALSE(default_periods_per_year(Frequency::minutely));
}

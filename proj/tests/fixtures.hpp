#pragma once

#include <cmath>
#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fineval/forecast.hpp"
#include "fineval/frame.hpp"

namespace fixture {

inline std::string data_path(const std::string& name)
{
    return std::string(FINEVAL_TEST_DATA) + "/" + name;
}

/// Integer-indexed panel from column vectors.
inline fineval::Panel panel(const std::vector<std::string>& names, const std::vector<std::vector<double>>& cols)
{
    const std::size_t n = cols.empty() ? 0 : cols.front().size();
    std::vector<fineval::Timestamp> ts;
    for (std::size_t r = 0; r < n; ++r) ts.push_back({static_cast<std::int64_t>(r), std::to_string(r)});
    fineval::Matrix m(n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < n; ++r) m(r, c) = cols[c][r];
    return fineval::Panel(std::move(ts), names, std::move(m));
}

/// Geometric random walks, one column per name, daily calendar stamps.
inline fineval::Panel random_walk_panel(std::mt19937_64& rng, std::size_t rows, const std::vector<std::string>& names,
                                        double vol = 0.01)
{
    std::normal_distribution<double> z(0.0, vol);
    std::vector<fineval::Timestamp> ts;
    const std::chrono::sys_days start = std::chrono::year{2000} / 1 / 1;
    for (std::size_t r = 0; r < rows; ++r) {
        const std::chrono::sys_days day = start + std::chrono::days{static_cast<int>(r)};
        const std::chrono::year_month_day ymd{day};
        char label[16];
        std::snprintf(label, sizeof label, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        ts.push_back({static_cast<std::int64_t>(day.time_since_epoch().count()) * 86400, label});
    }
    fineval::Matrix m(rows, names.size());
    for (std::size_t c = 0; c < names.size(); ++c) {
        double p = 100.0;
        for (std::size_t r = 0; r < rows; ++r) {
            m(r, c) = p;
            p *= std::exp(z(rng));
        }
    }
    return fineval::Panel(std::move(ts), names, std::move(m), "timestamp", fineval::Frequency::daily);
}

/// Batch with explicit B x F x C truth and prediction.
inline fineval::ForecastBatch batch(std::size_t b, std::size_t f, std::size_t c)
{
    fineval::ForecastBatch out;
    out.y_true = fineval::Tensor3(b, f, c);
    out.y_pred = fineval::Tensor3(b, f, c);
    return out;
}

} // namespace fixture

#pragma once

// Forecast-quality metrics over B x F x C truth/prediction tensors.
//
// msIC is the mean, over every (sample, channel) pair, of the rank
// correlation between the true and predicted horizon sequences. msIR divides
// msIC by the population standard deviation of the per-sample msIC values.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fineval/error.hpp"
#include "fineval/parallel.hpp"
#include "fineval/tensor.hpp"

namespace fineval {

enum class Correlation { spearman, pearson };

/// Paired truth/prediction tensors with window metadata.
struct ForecastBatch {
    Tensor3 y_true;
    Tensor3 y_pred;
    std::vector<std::size_t> sample_order;  // window index of each sample, strictly increasing
    std::vector<std::string> channels;
    std::vector<std::size_t> origin_rows;    // panel row of the last observed step (optional)
    std::vector<std::string> origin_labels;  // timestamp label of that row (optional)
    Matrix last_observed;                    // B x C value at the origin (optional)

    [[nodiscard]] std::size_t samples() const noexcept { return y_true.samples(); }
    [[nodiscard]] std::size_t horizon() const noexcept { return y_true.horizon(); }
    [[nodiscard]] std::size_t channel_count() const noexcept { return y_true.channels(); }

    void validate() const
    {
        if (!y_true.same_shape(y_pred)) throw MetricError("truth and prediction shapes differ");
        const auto b = y_true.samples();
        if (!sample_order.empty()) {
            if (sample_order.size() != b) throw MetricError("sample_order length does not match B");
            for (std::size_t i = 1; i < sample_order.size(); ++i)
                if (sample_order[i] <= sample_order[i - 1]) throw MetricError("sample_order not strictly increasing");
        }
        if (!channels.empty() && channels.size() != y_true.channels())
            throw MetricError("channel names do not match C");
        if (!origin_rows.empty() && origin_rows.size() != b) throw MetricError("origin_rows length does not match B");
        if (!origin_labels.empty() && origin_labels.size() != b)
            throw MetricError("origin_labels length does not match B");
        if (!last_observed.empty() && (last_observed.rows() != b || last_observed.cols() != y_true.channels()))
            throw MetricError("last_observed is not B x C");
    }
};

/// 1-based ranks; tied values share the average of their positions.
inline std::vector<double> average_ranks(std::span<const double> v)
{
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
        // positions i+1 .. j share the mean rank
        const double r = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
        i = j;
    }
    return ranks;
}

namespace detail {

inline bool is_constant(std::span<const double> v) noexcept
{
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

/// Two-pass Pearson; constant inputs give 0.
inline double pearson_centered(std::span<const double> x, std::span<const double> y) noexcept
{
    if (is_constant(x) || is_constant(y)) return 0.0;
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

} // namespace detail

/// Correlation of one truth/prediction horizon pair. Zero-variance inputs
/// contribute 0 instead of NaN.
inline double per_pair_corr(std::span<const double> truth, std::span<const double> pred,
                            Correlation kind = Correlation::spearman)
{
    if (truth.size() != pred.size()) throw MetricError("pair lengths differ");
    if (truth.size() < 2) throw MetricError("correlation needs a horizon of at least 2, got " + std::to_string(truth.size()));
    if (kind == Correlation::pearson) return detail::pearson_centered(truth, pred);
    const auto rt = average_ranks(truth);
    const auto rp = average_ranks(pred);
    return detail::pearson_centered(rt, rp);
}

inline double mse(const ForecastBatch& batch)
{
    batch.validate();
    if (batch.y_true.empty()) throw MetricError("empty batch");
    const auto& t = batch.y_true.data();
    const auto& p = batch.y_pred.data();
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += (p[i] - t[i]) * (p[i] - t[i]);
    return s / static_cast<double>(t.size());
}

inline double mae(const ForecastBatch& batch)
{
    batch.validate();
    if (batch.y_true.empty()) throw MetricError("empty batch");
    const auto& t = batch.y_true.data();
    const auto& p = batch.y_pred.data();
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += std::abs(p[i] - t[i]);
    return s / static_cast<double>(t.size());
}

/// Correlation of every (sample, channel) pair, laid out sample-major.
inline std::vector<double> pair_correlations(const ForecastBatch& batch, Correlation kind = Correlation::spearman,
                                             unsigned threads = 1)
{
    batch.validate();
    const auto b = batch.samples();
    const auto c = batch.channel_count();
    if (b == 0 || c == 0) throw MetricError("empty batch");
    if (batch.horizon() < 2)
        throw MetricError("correlation needs a horizon of at least 2, got " + std::to_string(batch.horizon()));
    std::vector<double> rho(b * c);
    parallel_for(b, threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < c; ++j)
            rho[i * c + j] = per_pair_corr(batch.y_true.series(i, j), batch.y_pred.series(i, j), kind);
    });
    return rho;
}

inline double ms_ic(const ForecastBatch& batch, Correlation kind = Correlation::spearman, unsigned threads = 1)
{
    const auto rho = pair_correlations(batch, kind, threads);
    double s = 0.0;
    for (const double r : rho) s += r;
    return s / static_cast<double>(rho.size());
}

/// Per-sample msIC_i = mean over channels.
inline std::vector<double> per_sample_ic(const ForecastBatch& batch, Correlation kind = Correlation::spearman,
                                         unsigned threads = 1)
{
    const auto rho = pair_correlations(batch, kind, threads);
    const auto c = batch.channel_count();
    std::vector<double> out(batch.samples());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < c; ++j) s += rho[i * c + j];
        out[i] = s / static_cast<double>(c);
    }
    return out;
}

/// msIC over population std of the per-sample values.
inline double ms_ir_from_samples(std::span<const double> per_sample)
{
    if (per_sample.size() < 2)
        throw DegenerateDispersionError("msIR needs at least 2 samples, got " + std::to_string(per_sample.size()));
    const double n = static_cast<double>(per_sample.size());
    const double mean = std::accumulate(per_sample.begin(), per_sample.end(), 0.0) / n;
    double ss = 0.0;
    for (const double v : per_sample) ss += (v - mean) * (v - mean);
    const double sigma = std::sqrt(ss / n);
    if (detail::is_constant(per_sample) || sigma < 1e-12)
        throw DegenerateDispersionError("per-sample msIC values have zero dispersion");
    return mean / sigma;
}

inline double ms_ir(const ForecastBatch& batch, Correlation kind = Correlation::spearman, unsigned threads = 1)
{
    if (batch.samples() < 2)
        throw DegenerateDispersionError("msIR needs at least 2 samples, got " + std::to_string(batch.samples()));
    const auto ics = per_sample_ic(batch, kind, threads);
    return ms_ir_from_samples(ics);
}

struct MetricReport {
    double mse = 0.0;
    double mae = 0.0;
    double msic = 0.0;
    std::optional<double> msir;  // absent when dispersion is degenerate
};

inline MetricReport evaluate(const ForecastBatch& batch, Correlation kind = Correlation::spearman, unsigned threads = 1)
{
    MetricReport r;
    r.mse = mse(batch);
    r.mae = mae(batch);
    const auto rho = pair_correlations(batch, kind, threads);
    double s = 0.0;
    for (const double v : rho) s += v;
    r.msic = s / static_cast<double>(rho.size());
    const auto c = batch.channel_count();
    std::vector<double> ics(batch.samples());
    for (std::size_t i = 0; i < ics.size(); ++i) {
        double t = 0.0;
        for (std::size_t j = 0; j < c; ++j) t += rho[i * c + j];
        ics[i] = t / static_cast<double>(c);
    }
    try {
        r.msir = ms_ir_from_samples(ics);
    } catch (const DegenerateDispersionError&) {
        r.msir.reset();
    }
    return r;
}

} // namespace fineval

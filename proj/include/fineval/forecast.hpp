#pragma once

// Naive baseline forecaster and the long-format forecast file exchanged with
// external models:
//
//   #L=512
//   #H=5
//   #model=naive
//   #targets=a,b
//   sample_id,step,variable,y_pred
//   0,1,a,100.0132
//
// Values live in the transformed (log-price) space of the panel the windows
// were cut from.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "fineval/csv.hpp"
#include "fineval/error.hpp"
#include "fineval/frame.hpp"
#include "fineval/metrics.hpp"
#include "fineval/tensor.hpp"

namespace fineval {

struct NaiveOptions {
    double noise_std = 0.001;
    std::uint64_t seed = 0;
    bool shared_noise = false;  // one draw per (window, channel) reused across steps
};

/// Repeats each target's last observed value over the horizon and adds
/// Gaussian noise. Draws follow the canonical (sample, step, channel) order.
inline Tensor3 naive_forecast(const WindowSet& windows, const NaiveOptions& opt = {})
{
    if (windows.size() == 0) throw WindowError("no windows to forecast");
    if (!(opt.noise_std >= 0.0)) throw Error("noise standard deviation must be non-negative");
    const auto b = windows.size();
    const auto h = windows.horizon();
    const auto c = windows.targets().size();
    Tensor3 pred(b, h, c);
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> shared(c);
    for (std::size_t i = 0; i < b; ++i) {
        if (opt.shared_noise)
            for (std::size_t k = 0; k < c; ++k) shared[k] = opt.noise_std * normal(rng);
        for (std::size_t s = 0; s < h; ++s)
            for (std::size_t k = 0; k < c; ++k) {
                const double noise = opt.shared_noise ? shared[k] : opt.noise_std * normal(rng);
                pred(i, s, k) = windows.last_observed(i, k) + noise;
            }
    }
    return pred;
}

/// Pairs predictions for the given windows with their truth blocks.
/// `sample_ids` empty means every window in order.
inline ForecastBatch make_batch(const WindowSet& windows, Tensor3 predictions,
                                std::vector<std::size_t> sample_ids = {},
                                const std::vector<std::string>& channels = {})
{
    if (sample_ids.empty()) {
        sample_ids.resize(windows.size());
        for (std::size_t i = 0; i < sample_ids.size(); ++i) sample_ids[i] = i;
    }
    std::vector<std::size_t> target_idx;
    const auto& names = channels.empty() ? windows.targets() : channels;
    for (const auto& n : names) {
        const auto it = std::find(windows.targets().begin(), windows.targets().end(), n);
        if (it == windows.targets().end()) throw AlignError("variable '" + n + "' is not a truth target");
        target_idx.push_back(static_cast<std::size_t>(it - windows.targets().begin()));
    }
    if (predictions.samples() != sample_ids.size() || predictions.horizon() != windows.horizon() ||
        predictions.channels() != target_idx.size())
        throw AlignError("prediction tensor is " + std::to_string(predictions.samples()) + "x" +
                         std::to_string(predictions.horizon()) + "x" + std::to_string(predictions.channels()) +
                         ", truth is " + std::to_string(sample_ids.size()) + "x" + std::to_string(windows.horizon()) +
                         "x" + std::to_string(target_idx.size()));
    ForecastBatch batch;
    const auto b = sample_ids.size();
    batch.y_true = Tensor3(b, windows.horizon(), target_idx.size());
    batch.last_observed = Matrix(b, target_idx.size());
    for (std::size_t i = 0; i < b; ++i) {
        const auto w = sample_ids[i];
        if (w >= windows.size())
            throw AlignError("sample " + std::to_string(w) + " beyond the " + std::to_string(windows.size()) +
                             " available windows");
        for (std::size_t k = 0; k < target_idx.size(); ++k) {
            for (std::size_t s = 0; s < windows.horizon(); ++s) batch.y_true(i, s, k) = windows.truth_at(w, s, target_idx[k]);
            batch.last_observed(i, k) = windows.last_observed(w, target_idx[k]);
        }
        batch.origin_rows.push_back(windows.origin_row(w));
        batch.origin_labels.push_back(windows.origin(w).label);
    }
    batch.y_pred = std::move(predictions);
    batch.sample_order = std::move(sample_ids);
    batch.channels = names;
    batch.validate();
    return batch;
}

struct ForecastFile {
    std::size_t input_len = 0;
    std::size_t horizon = 0;
    std::string model;
    std::vector<std::string> targets;
    std::vector<std::size_t> sample_ids;  // strictly increasing
    Tensor3 y_pred;                       // |sample_ids| x H x |targets|
};

inline std::string to_csv(const ForecastFile& f, const std::vector<std::string>& comments = {})
{
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    out += "#L=" + std::to_string(f.input_len) + "\n";
    out += "#H=" + std::to_string(f.horizon) + "\n";
    out += "#model=" + f.model + "\n";
    out += "#targets=";
    for (std::size_t i = 0; i < f.targets.size(); ++i) out += (i ? "," : "") + f.targets[i];
    out += "\nsample_id,step,variable,y_pred\n";
    for (std::size_t i = 0; i < f.sample_ids.size(); ++i)
        for (std::size_t s = 0; s < f.horizon; ++s)
            for (std::size_t k = 0; k < f.targets.size(); ++k)
                out += std::to_string(f.sample_ids[i]) + "," + std::to_string(s + 1) + "," + f.targets[k] + "," +
                       csv::format_double(f.y_pred(i, s, k)) + "\n";
    return out;
}

inline ForecastFile parse_forecast_file(std::string_view text, std::string_view source = "<memory>")
{
    const std::string where(source);
    const auto doc = csv::parse_document(text);
    ForecastFile f;
    const auto need_count = [&](std::string_view key) {
        const auto v = csv::metadata(doc, key);
        if (!v) throw FormatError(where + ": missing '#" + std::string(key) + "=' header");
        const auto n = csv::parse_int(*v);
        if (!n || *n < 1) throw FormatError(where + ": invalid '#" + std::string(key) + "=" + *v + "'");
        return static_cast<std::size_t>(*n);
    };
    f.input_len = need_count("L");
    f.horizon = need_count("H");
    f.model = csv::metadata(doc, "model").value_or("unknown");
    if (const auto t = csv::metadata(doc, "targets"); t && !t->empty())
        for (const auto name : csv::split(*t)) f.targets.emplace_back(name);

    if (doc.lines.empty() || csv::split(doc.lines.front()) != std::vector<std::string_view>{"sample_id", "step", "variable", "y_pred"})
        throw FormatError(where + ": expected header 'sample_id,step,variable,y_pred'");

    const bool targets_from_header = !f.targets.empty();
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> cells;
    std::set<std::size_t> samples;
    for (std::size_t i = 1; i < doc.lines.size(); ++i) {
        const auto line = std::to_string(doc.line_numbers[i]);
        const auto parts = csv::split(doc.lines[i]);
        if (parts.size() != 4) throw FormatError(where + ": line " + line + ": expected 4 fields");
        const auto sid = csv::parse_int(parts[0]);
        const auto step = csv::parse_int(parts[1]);
        const auto val = csv::parse_double(parts[3]);
        if (!sid || *sid < 0) throw FormatError(where + ": line " + line + ": bad sample_id");
        if (!step || *step < 1 || static_cast<std::size_t>(*step) > f.horizon)
            throw FormatError(where + ": line " + line + ": step outside 1.." + std::to_string(f.horizon));
        if (!val || !std::isfinite(*val)) throw FormatError(where + ": line " + line + ": bad y_pred");
        auto it = std::find(f.targets.begin(), f.targets.end(), parts[2]);
        if (it == f.targets.end()) {
            if (targets_from_header)
                throw FormatError(where + ": line " + line + ": variable '" + std::string(parts[2]) +
                                  "' not in #targets");
            f.targets.emplace_back(parts[2]);
            it = f.targets.end() - 1;
        }
        const auto key = std::make_tuple(static_cast<std::size_t>(*sid), static_cast<std::size_t>(*step),
                                         static_cast<std::size_t>(it - f.targets.begin()));
        if (!cells.emplace(key, *val).second)
            throw FormatError(where + ": duplicate record (sample " + std::to_string(*sid) + ", step " +
                              std::to_string(*step) + ", variable " + std::string(parts[2]) + ")");
        samples.insert(static_cast<std::size_t>(*sid));
    }
    if (samples.empty()) throw FormatError(where + ": no forecast records");

    f.sample_ids.assign(samples.begin(), samples.end());
    f.y_pred = Tensor3(f.sample_ids.size(), f.horizon, f.targets.size());
    for (std::size_t i = 0; i < f.sample_ids.size(); ++i)
        for (std::size_t s = 0; s < f.horizon; ++s)
            for (std::size_t k = 0; k < f.targets.size(); ++k) {
                const auto it = cells.find({f.sample_ids[i], s + 1, k});
                if (it == cells.end())
                    throw FormatError(where + ": missing record (sample " + std::to_string(f.sample_ids[i]) +
                                      ", step " + std::to_string(s + 1) + ", variable " + f.targets[k] + ")");
                f.y_pred(i, s, k) = it->second;
            }
    return f;
}

inline ForecastFile load_forecast_file(const std::filesystem::path& path)
{
    return parse_forecast_file(csv::read_file(path), path.string());
}

/// Aligns a forecast file with truth windows cut from the same panel.
inline ForecastBatch align_forecasts(const ForecastFile& f, const WindowSet& truth)
{
    if (f.horizon != truth.horizon())
        throw AlignError("forecast horizon H=" + std::to_string(f.horizon) + " but truth horizon H=" +
                         std::to_string(truth.horizon()));
    if (f.input_len != truth.input_len())
        throw AlignError("forecast input length L=" + std::to_string(f.input_len) + " but truth windows use L=" +
                         std::to_string(truth.input_len()));
    for (const auto& t : f.targets)
        if (std::find(truth.targets().begin(), truth.targets().end(), t) == truth.targets().end())
            throw AlignError("forecast variable '" + t + "' is not a truth target");
    return make_batch(truth, f.y_pred, f.sample_ids, f.targets);
}

inline ForecastBatch load_forecasts(const std::filesystem::path& path, const WindowSet& truth)
{
    return align_forecasts(load_forecast_file(path), truth);
}

inline ForecastFile to_forecast_file(const ForecastBatch& batch, std::size_t input_len, std::string model)
{
    ForecastFile f;
    f.input_len = input_len;
    f.horizon = batch.horizon();
    f.model = std::move(model);
    f.targets = batch.channels;
    f.sample_ids = batch.sample_order;
    f.y_pred = batch.y_pred;
    return f;
}

} // namespace fineval

#pragma once

// Command-line front end. `run` is the whole program so tests can drive it
// in-process; tools/fineval.cpp only forwards argv.
//
// Exit status: 0 success, 1 data error (message from the failing module),
// 2 usage error. Each subcommand computes all outputs in memory before
// writing any file.

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "fineval/csv.hpp"
#include "fineval/error.hpp"
#include "fineval/forecast.hpp"
#include "fineval/frame.hpp"
#include "fineval/metrics.hpp"
#include "fineval/options.hpp"
#include "fineval/parallel.hpp"
#include "fineval/preprocess.hpp"
#include "fineval/random.hpp"
#include "fineval/stats.hpp"
#include "fineval/strategy.hpp"
#include "fineval/version.hpp"

namespace fineval::cli {

enum class TaskKind { m2m, m2s, m2p };

/// Pipeline configuration shared by the forecasting and trading subcommands.
struct RunConfig {
    std::string dataset;
    TaskKind task = TaskKind::m2m;
    std::size_t input_len = 512;
    std::size_t horizon = 5;
    std::vector<std::string> target_vars;
    std::optional<std::size_t> signal_window;  // 63 daily / 21 hourly when unset
    std::size_t rebalance = 5;
    std::size_t k = 1;
    std::uint64_t seed = 0;
    std::optional<double> periods_per_year;
    double risk_free = 0.0;

    /// `variable_count` is the number of variables in the dataset panel.
    void validate(std::size_t variable_count) const
    {
        if (horizon < 1) throw UsageError("horizon must be >= 1");
        if (input_len < 1) throw UsageError("input length must be >= 1");
        if (rebalance < 1) throw UsageError("rebalance period must be >= 1");
        if (signal_window && *signal_window < 1) throw UsageError("signal window must be >= 1");
        switch (task) {
        case TaskKind::m2m:
            if (!target_vars.empty() && target_vars.size() != variable_count)
                throw UsageError("task m2m forecasts every variable; drop --targets or use m2p");
            break;
        case TaskKind::m2s:
            if (target_vars.size() != 1) throw UsageError("task m2s needs exactly one target variable");
            break;
        case TaskKind::m2p:
            if (target_vars.empty() || target_vars.size() >= variable_count)
                throw UsageError("task m2p needs between 1 and " + std::to_string(variable_count - 1) +
                                 " target variables");
            break;
        }
    }
};

/// Provenance header: toolkit version, a fingerprint of every parameter and
/// input file content (not paths), and the seed.
class Provenance {
public:
    explicit Provenance(std::string_view subcommand) { add("subcommand", subcommand); }

    template <class T>
    Provenance& add(std::string_view key, const T& value)
    {
        std::ostringstream ss;
        ss << std::setprecision(17) << value;
        canon_ += std::string(key) + "=" + ss.str() + "\n";
        return *this;
    }

    Provenance& add_content(std::string_view key, std::string_view content)
    {
        return add(key, csv::hex64(csv::fnv1a(content)));
    }

    void set_seed(std::uint64_t seed) { seed_ = seed; }

    [[nodiscard]] std::vector<std::string> comments() const
    {
        std::vector<std::string> c{std::string("fineval_version=") + fineval::version,
                                   "config_hash=" + csv::hex64(csv::fnv1a(canon_))};
        if (seed_) c.push_back("seed=" + std::to_string(*seed_));
        return c;
    }

private:
    std::string canon_;
    std::optional<std::uint64_t> seed_;
};

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    if (s.empty()) return out;
    for (const auto part : csv::split(s))
        if (!part.empty()) out.emplace_back(part);
    return out;
}

inline std::string join(const std::vector<std::string>& v, std::string_view sep = ",")
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? std::string(sep) : "") + v[i];
    return out;
}

// ---------------------------------------------------------------------------
// Equity curve file: timestamp,net_value,period_return,position

inline std::string curve_to_csv(const BacktestResult& bt, const std::vector<std::string>& comments)
{
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    out += "timestamp,net_value,period_return,position\n";
    const auto& curve = bt.curve;
    const bool single = bt.positions.assets.size() == 1;
    for (std::size_t j = 0; j < curve.net_value.size(); ++j) {
        out += curve.timestamps[j] + "," + csv::format_double(curve.net_value[j]) + ",";
        if (j == 0) {
            out += "0,\n";
            continue;
        }
        out += csv::format_double(curve.period_returns[j - 1]) + ",";
        if (single) {
            out += csv::format_double(bt.positions.weights(j - 1, 0));
        } else {
            std::vector<std::string> held;
            for (std::size_t a = 0; a < bt.positions.assets.size(); ++a)
                if (bt.positions.weights(j - 1, a) != 0.0) held.push_back(bt.positions.assets[a]);
            out += join(held, ";");
        }
        out += "\n";
    }
    return out;
}

struct CurveFile {
    EquityCurve curve;
    Frequency frequency = Frequency::unspecified;
};

inline CurveFile parse_curve(std::string_view text, std::string_view source)
{
    const std::string where(source);
    const auto doc = csv::parse_document(text);
    if (doc.lines.empty()) throw IngestError(where + ": missing header");
    const auto header = csv::split(doc.lines.front());
    const auto col = [&](std::string_view name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw IngestError(where + ": missing column '" + std::string(name) + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto ts_col = col("timestamp");
    const auto nv_col = col("net_value");
    const auto pr_col = col("period_return");
    CurveFile f;
    std::vector<Timestamp> stamps;
    bool calendar = true;
    for (std::size_t i = 1; i < doc.lines.size(); ++i) {
        const auto cells = csv::split(doc.lines[i]);
        const auto line = std::to_string(doc.line_numbers[i]);
        if (cells.size() != header.size()) throw IngestError(where + ": line " + line + ": wrong number of cells");
        const auto nv = csv::parse_double(cells[nv_col]);
        if (!nv) throw IngestError(where + ": line " + line + ": bad net_value");
        f.curve.net_value.push_back(*nv);
        f.curve.timestamps.emplace_back(cells[ts_col]);
        if (i > 1) {
            const auto pr = csv::parse_double(cells[pr_col]);
            if (!pr) throw IngestError(where + ": line " + line + ": bad period_return");
            f.curve.period_returns.push_back(*pr);
        }
        if (const auto t = detail::parse_iso8601(cells[ts_col]))
            stamps.push_back({*t, std::string(cells[ts_col])});
        else
            calendar = false;
    }
    if (f.curve.net_value.size() < 2) throw StatsError(where + ": equity curve needs at least one period");
    if (calendar) f.frequency = infer_frequency(stamps);
    return f;
}

// ---------------------------------------------------------------------------
// Option quote table: timestamp,spot,strike,rate,expiry,kind,market_price

struct QuoteTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> cells;
    std::vector<OptionQuote> quotes;
};

inline OptionKind parse_kind(std::string_view s, const std::string& where)
{
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "call" || lower == "c") return OptionKind::call;
    if (lower == "put" || lower == "p") return OptionKind::put;
    throw IngestError(where + ": unknown option kind '" + std::string(s) + "'");
}

inline QuoteTable parse_quotes(std::string_view text, std::string_view source)
{
    const std::string where(source);
    const auto doc = csv::parse_document(text);
    if (doc.lines.empty()) throw IngestError(where + ": missing header");
    QuoteTable t;
    for (const auto h : csv::split(doc.lines.front())) t.header.emplace_back(h);
    const auto col = [&](std::string_view name) {
        const auto it = std::find(t.header.begin(), t.header.end(), name);
        if (it == t.header.end()) throw IngestError(where + ": missing column '" + std::string(name) + "'");
        return static_cast<std::size_t>(it - t.header.begin());
    };
    const auto c_spot = col("spot"), c_strike = col("strike"), c_rate = col("rate"), c_expiry = col("expiry"),
               c_kind = col("kind"), c_price = col("market_price");
    for (std::size_t i = 1; i < doc.lines.size(); ++i) {
        const auto parts = csv::split(doc.lines[i]);
        const auto line = where + ": line " + std::to_string(doc.line_numbers[i]);
        if (parts.size() != t.header.size()) throw IngestError(line + ": wrong number of cells");
        const auto num = [&](std::size_t c) {
            const auto v = csv::parse_double(parts[c]);
            if (!v) throw IngestError(line + ", column '" + t.header[c] + "': non-numeric value '" + std::string(parts[c]) + "'");
            return *v;
        };
        OptionQuote q{num(c_spot), num(c_strike), num(c_rate), num(c_expiry), parse_kind(parts[c_kind], line),
                      num(c_price)};
        try {
            q.validate();
        } catch (const PricingError& e) {
            throw IngestError(line + ": " + e.what());
        }
        t.quotes.push_back(q);
        t.cells.emplace_back(parts.begin(), parts.end());
    }
    return t;
}

struct QuoteAnalytics {
    std::optional<double> iv;
    Greeks greeks;
    std::string status = "ok";
};

inline std::vector<QuoteAnalytics> analyze_quotes(const std::vector<OptionQuote>& quotes, unsigned threads)
{
    std::vector<QuoteAnalytics> out(quotes.size());
    parallel_for(quotes.size(), threads, [&](std::size_t i) {
        try {
            const double iv = implied_vol(quotes[i]);
            out[i].iv = iv;
            out[i].greeks = greeks(quotes[i], iv);
        } catch (const NoImpliedVolError&) {
            out[i].status = "no_iv";
        } catch (const ConvergenceError&) {
            out[i].status = "no_convergence";
        }
    });
    return out;
}

// ---------------------------------------------------------------------------

namespace detail {

inline unsigned effective_threads(unsigned requested)
{
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

inline std::size_t default_window(Frequency f)
{
    switch (f) {
    case Frequency::daily: return 63;
    case Frequency::hourly: return 21;
    default: throw UsageError("cannot infer a signal window for " + std::string(to_string(f)) + " data; pass --window");
    }
}

inline std::string read_input(const std::string& path)
{
    return csv::read_file(path);
}

inline std::string table_line(std::string_view name, const std::optional<double>& v, bool percent)
{
    std::ostringstream ss;
    ss << std::left << std::setw(20) << name;
    if (!v)
        ss << "N/A";
    else if (percent)
        ss << std::fixed << std::setprecision(2) << *v * 100.0 << "%";
    else
        ss << std::fixed << std::setprecision(2) << *v;
    return ss.str();
}

/// Tradable variables among forecast targets: the close columns when any
/// target is an OHLCV close, otherwise every target.
inline std::vector<std::string> tradable(const std::vector<std::string>& targets)
{
    std::vector<std::string> closes;
    for (const auto& t : targets) {
        const auto col = classify_column(t);
        if (col && col->field == OhlcvField::close) closes.push_back(t);
    }
    return closes.empty() ? targets : closes;
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Forecast evaluation, option analytics and strategy backtesting for financial time series",
                 "fineval"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(fineval::version));
    app.set_config("--config", "", "INI file of key=value options, one [subcommand] section each; flags win");
    unsigned threads_flag = 0;
    app.add_option("--threads", threads_flag, "Worker thread cap (0 = hardware concurrency); outputs do not depend on it")
        ->capture_default_str();

    std::string timestamp_column;
    const auto add_ts_option = [&](CLI::App* sub) {
        sub->add_option("--timestamp-column", timestamp_column, "Timestamp column name (default: first column)");
    };

    // preprocess
    auto* pre = app.add_subcommand("preprocess", "Log-price / log-volume transform of an OHLCV panel");
    std::string pre_in, pre_out, pre_anchors;
    double baseline = 100.0;
    bool pre_inverse = false;
    pre->add_option("--input", pre_in, "Raw OHLCV panel CSV (transformed panel with --inverse)")->required();
    pre->add_option("--output", pre_out, "Output panel CSV")->required();
    pre->add_option("--anchors", pre_anchors, "Anchor sidecar CSV (written, or read with --inverse)")->required();
    pre->add_option("--baseline", baseline, "Constant added to every log price")->capture_default_str();
    pre->add_flag("--inverse", pre_inverse, "Reconstruct raw prices from a transformed panel and its anchors");
    add_ts_option(pre);

    // split
    auto* split = app.add_subcommand("split", "Chronological train/validation/test split");
    std::string split_in, split_prefix;
    SplitSpec split_spec;
    split->add_option("--input", split_in, "Panel CSV")->required();
    split->add_option("--output-prefix", split_prefix, "Writes <prefix>_train.csv, _val.csv, _test.csv")->required();
    split->add_option("--train", split_spec.train_fraction)->capture_default_str();
    split->add_option("--val", split_spec.val_fraction)->capture_default_str();
    split->add_option("--test", split_spec.test_fraction)->capture_default_str();
    add_ts_option(split);

    // naive-forecast
    RunConfig rc;
    std::string task_name = "m2m", targets_csv;
    auto* naive = app.add_subcommand("naive-forecast", "Last-value forecast with Gaussian noise");
    std::string naive_in, naive_out, model_name = "naive";
    double noise_std = 0.001;
    bool shared_noise = false;
    naive->add_option("--input", naive_in, "Transformed panel CSV")->required();
    naive->add_option("--output", naive_out, "Forecast file")->required();
    naive->add_option("--task", task_name, "m2m | m2s | m2p")->check(CLI::IsMember({"m2m", "m2s", "m2p"}))->capture_default_str();
    naive->add_option("--targets", targets_csv, "Comma-separated target variables");
    naive->add_option("-L,--input-len", rc.input_len, "Input window length")->capture_default_str();
    naive->add_option("-H,--horizon", rc.horizon, "Forecast horizon")->capture_default_str();
    naive->add_option("--noise-std", noise_std, "Gaussian noise standard deviation")->capture_default_str();
    naive->add_option("--seed", rc.seed, "Top-level random seed")->capture_default_str();
    naive->add_flag("--shared-noise", shared_noise, "Draw one noise value per window and channel");
    naive->add_option("--model", model_name, "Model name written to the file header")->capture_default_str();
    add_ts_option(naive);

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "MSE, MAE, msIC and msIR of a forecast file");
    std::string eval_truth, eval_fc, eval_out;
    bool pearson = false;
    eval->add_option("--truth", eval_truth, "Transformed panel the forecasts were made on")->required();
    eval->add_option("--forecasts", eval_fc, "Forecast file")->required();
    eval->add_option("--output", eval_out, "metric,value CSV")->required();
    eval->add_flag("--pearson", pearson, "Use Pearson instead of rank correlation");
    add_ts_option(eval);

    // backtest
    auto* bt = app.add_subcommand("backtest", "Trade difference-in-difference signals of a forecast file");
    std::string bt_fc, bt_raw, bt_anchors, bt_out, strategy_name = "timing", asset, universe;
    std::size_t window_flag = 0;
    bt->add_option("--forecasts", bt_fc, "Forecast file")->required();
    bt->add_option("--raw", bt_raw, "Raw price panel covering the forecast windows")->required();
    bt->add_option("--anchors", bt_anchors, "Anchor sidecar from preprocess (default: first close of --raw)");
    bt->add_option("--output", bt_out, "Equity curve CSV")->required();
    bt->add_option("--strategy", strategy_name, "timing | longshort | topk")
        ->check(CLI::IsMember({"timing", "longshort", "topk"}))
        ->capture_default_str();
    bt->add_option("--k", rc.k, "Assets held by topk")->capture_default_str();
    bt->add_option("--window", window_flag, "Rolling window of the difference-in-difference signal (63 daily, 21 hourly)");
    bt->add_option("--rebalance", rc.rebalance, "Steps between rebalances")->capture_default_str();
    bt->add_option("--asset", asset, "Traded variable for timing/longshort (default: first close among the targets)");
    bt->add_option("--assets", universe, "Comma-separated topk universe (default: close columns among the targets)");
    bt->add_option("--baseline", baseline, "Baseline used when deriving anchors from --raw")->capture_default_str();
    add_ts_option(bt);

    // report
    auto* rep = app.add_subcommand("report", "Strategy statistics of an equity curve");
    std::string rep_in, rep_out;
    double ppy_flag = 0.0;
    bool no_annualize_downside = false;
    rep->add_option("--input", rep_in, "Equity curve CSV")->required();
    rep->add_option("--output", rep_out, "metric,value CSV")->required();
    rep->add_option("--periods-per-year", ppy_flag, "Annualization factor (252 daily, 8760 hourly by default)");
    rep->add_option("--risk-free", rc.risk_free, "Annual risk-free rate")->capture_default_str();
    rep->add_flag("--no-annualize-downside", no_annualize_downside, "Leave downside volatility unannualized");

    // option-analytics
    auto* opt = app.add_subcommand("option-analytics", "Implied volatility, Greeks and historical volatility");
    std::string opt_in, opt_out;
    std::size_t hv_window = 0;
    opt->add_option("--input", opt_in, "CSV with timestamp,spot,strike,rate,expiry,kind,market_price")->required();
    opt->add_option("--output", opt_out, "Input rows extended with iv and Greeks")->required();
    opt->add_option("--hv-window", hv_window, "Returns per historical volatility window")->required()->check(CLI::Range(2, 1 << 30));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    const unsigned threads = detail::effective_threads(threads_flag);

    try {
        if (pre->parsed()) {
            Provenance prov("preprocess");
            const auto input = detail::read_input(pre_in);
            prov.add_content("input", input).add("baseline", baseline).add("inverse", pre_inverse);
            const auto panel = parse_panel(input, timestamp_column, pre_in);
            if (pre_inverse) {
                const auto anchor_text = detail::read_input(pre_anchors);
                prov.add_content("anchors", anchor_text);
                const auto raw = invert_panel(panel, parse_anchors(anchor_text, pre_anchors));
                csv::write_file(pre_out, to_csv(raw, prov.comments()));
            } else {
                const auto result = preprocess_panel(panel, baseline);
                const auto panel_text = to_csv(result.transformed, prov.comments());
                const auto anchor_text = anchors_to_csv(result.anchors, prov.comments());
                csv::write_file(pre_out, panel_text);
                csv::write_file(pre_anchors, anchor_text);
            }
            return 0;
        }

        if (split->parsed()) {
            Provenance prov("split");
            const auto input = detail::read_input(split_in);
            prov.add_content("input", input)
                .add("train", split_spec.train_fraction)
                .add("val", split_spec.val_fraction)
                .add("test", split_spec.test_fraction);
            try {
                split_spec.validate();
            } catch (const SplitError& e) {
                throw UsageError(e.what());
            }
            const auto parts = chronological_split(parse_panel(input, timestamp_column, split_in), split_spec);
            const auto c = prov.comments();
            const auto train = to_csv(parts.train, c), val = to_csv(parts.val, c), test = to_csv(parts.test, c);
            csv::write_file(split_prefix + "_train.csv", train);
            csv::write_file(split_prefix + "_val.csv", val);
            csv::write_file(split_prefix + "_test.csv", test);
            out << "train=" << parts.train.rows() << " val=" << parts.val.rows() << " test=" << parts.test.rows() << "\n";
            return 0;
        }

        if (naive->parsed()) {
            rc.task = task_name == "m2s" ? TaskKind::m2s : task_name == "m2p" ? TaskKind::m2p : TaskKind::m2m;
            rc.target_vars = split_list(targets_csv);
            rc.dataset = naive_in;
            const auto input = detail::read_input(naive_in);
            const auto panel = parse_panel(input, timestamp_column, naive_in);
            rc.validate(panel.cols());
            if (!(noise_std >= 0.0)) throw UsageError("--noise-std must be non-negative");
            Provenance prov("naive-forecast");
            prov.add_content("input", input)
                .add("task", task_name)
                .add("targets", targets_csv)
                .add("L", rc.input_len)
                .add("H", rc.horizon)
                .add("noise_std", noise_std)
                .add("shared_noise", shared_noise)
                .add("model", model_name);
            prov.set_seed(rc.seed);
            const WindowSet windows(panel, {rc.input_len, rc.horizon, rc.target_vars});
            NaiveOptions nopt{noise_std, derive_seed(rc.seed, "naive-forecast"), shared_noise};
            const auto batch = make_batch(windows, naive_forecast(windows, nopt));
            csv::write_file(naive_out, to_csv(to_forecast_file(batch, rc.input_len, model_name), prov.comments()));
            return 0;
        }

        if (eval->parsed()) {
            Provenance prov("evaluate");
            const auto truth_text = detail::read_input(eval_truth);
            const auto fc_text = detail::read_input(eval_fc);
            prov.add_content("truth", truth_text).add_content("forecasts", fc_text).add("pearson", pearson);
            const auto fc = parse_forecast_file(fc_text, eval_fc);
            const WindowSet windows(parse_panel(truth_text, timestamp_column, eval_truth),
                                    {fc.input_len, fc.horizon, fc.targets});
            const auto batch = align_forecasts(fc, windows);
            const auto m = evaluate(batch, pearson ? Correlation::pearson : Correlation::spearman, threads);
            std::string text;
            for (const auto& c : prov.comments()) text += "# " + c + "\n";
            text += "metric,value\n";
            text += "mse," + csv::format_double(m.mse) + "\n";
            text += "mae," + csv::format_double(m.mae) + "\n";
            text += "msic," + csv::format_double(m.msic) + "\n";
            text += "msir," + csv::format_optional(m.msir) + "\n";
            csv::write_file(eval_out, text);
            out << text.substr(text.find("metric,value"));
            return 0;
        }

        if (bt->parsed()) {
            Provenance prov("backtest");
            const auto fc_text = detail::read_input(bt_fc);
            const auto raw_text = detail::read_input(bt_raw);
            prov.add_content("forecasts", fc_text)
                .add_content("raw", raw_text)
                .add("strategy", strategy_name)
                .add("k", rc.k)
                .add("window", window_flag)
                .add("rebalance", rc.rebalance)
                .add("asset", asset)
                .add("assets", universe)
                .add("baseline", baseline);
            const auto fc = parse_forecast_file(fc_text, bt_fc);
            const auto raw = parse_panel(raw_text, timestamp_column, bt_raw);
            std::vector<AssetAnchor> anchors;
            if (!bt_anchors.empty()) {
                const auto anchor_text = detail::read_input(bt_anchors);
                prov.add_content("anchors", anchor_text);
                anchors = parse_anchors(anchor_text, bt_anchors);
            } else {
                anchors = anchors_from_raw(raw, baseline);
            }
            rc.signal_window = window_flag ? std::optional<std::size_t>(window_flag) : std::nullopt;
            rc.input_len = fc.input_len;
            rc.horizon = fc.horizon;
            rc.validate(raw.cols());
            const auto window = rc.signal_window.value_or(detail::default_window(raw.frequency()));

            BacktestConfig cfg;
            cfg.window = window;
            cfg.rebalance = rc.rebalance;
            cfg.k = rc.k;
            if (strategy_name == "topk") {
                cfg.kind = StrategyKind::top_k;
                cfg.assets = universe.empty() ? detail::tradable(fc.targets) : split_list(universe);
                if (rc.k < 1 || rc.k > cfg.assets.size())
                    throw UsageError("--k must lie in 1.." + std::to_string(cfg.assets.size()));
            } else {
                cfg.kind = strategy_name == "timing" ? StrategyKind::timing : StrategyKind::long_short;
                cfg.assets = {asset.empty() ? detail::tradable(fc.targets).front() : asset};
            }
            const WindowSet windows(transform_panel(raw, anchors), {fc.input_len, fc.horizon, fc.targets});
            const auto batch = align_forecasts(fc, windows);
            const auto result = run_backtest(batch, raw, cfg);
            csv::write_file(bt_out, curve_to_csv(result, prov.comments()));
            out << "periods=" << result.curve.period_returns.size()
                << " final_net_value=" << csv::format_double(result.curve.net_value.back()) << "\n";
            return 0;
        }

        if (rep->parsed()) {
            Provenance prov("report");
            const auto text = detail::read_input(rep_in);
            const auto curve = parse_curve(text, rep_in);
            std::optional<double> ppy = ppy_flag > 0.0 ? std::optional<double>(ppy_flag) : default_periods_per_year(curve.frequency);
            if (!ppy)
                throw UsageError("cannot infer periods per year for " + std::string(to_string(curve.frequency)) +
                                 " data; pass --periods-per-year");
            prov.add_content("input", text)
                .add("periods_per_year", *ppy)
                .add("risk_free", rc.risk_free)
                .add("annualize_downside", !no_annualize_downside);
            const auto report = full_report(curve.curve, {*ppy, rc.risk_free, !no_annualize_downside});
            std::string csv_text;
            for (const auto& c : prov.comments()) csv_text += "# " + c + "\n";
            csv_text += "metric,value\n";
            for (const auto& row : report.rows()) csv_text += std::string(row.name) + "," + csv::format_optional(row.value) + "\n";
            csv::write_file(rep_out, csv_text);
            for (const auto& row : report.rows()) {
                const bool pct = row.name == "annual_return" || row.name == "cumulative_returns" ||
                                 row.name == "annual_volatility" || row.name == "max_drawdown";
                out << detail::table_line(row.name, row.value, pct) << "\n";
            }
            return 0;
        }

        if (opt->parsed()) {
            Provenance prov("option-analytics");
            const auto text = detail::read_input(opt_in);
            prov.add_content("input", text).add("hv_window", hv_window);
            const auto table = parse_quotes(text, opt_in);
            const auto analytics = analyze_quotes(table.quotes, threads);
            std::vector<double> spots;
            for (const auto& q : table.quotes) spots.push_back(q.spot);
            std::vector<double> hv;
            if (spots.size() >= hv_window + 1) hv = historical_vol(spots, hv_window);
            std::string csv_text;
            for (const auto& c : prov.comments()) csv_text += "# " + c + "\n";
            csv_text += join(table.header) + ",iv,delta,theta,gamma,vega,rho,hv,status\n";
            for (std::size_t i = 0; i < table.quotes.size(); ++i) {
                csv_text += join(table.cells[i]);
                const auto& a = analytics[i];
                if (a.iv) {
                    for (const double v : {*a.iv, a.greeks.delta, a.greeks.theta, a.greeks.gamma, a.greeks.vega,
                                           a.greeks.rho_rate})
                        csv_text += "," + csv::format_double(v);
                } else {
                    csv_text += ",NA,NA,NA,NA,NA,NA";
                }
                csv_text += "," + (i >= hv_window && !hv.empty() ? csv::format_double(hv[i - hv_window]) : std::string("NA"));
                csv_text += "," + a.status + "\n";
            }
            csv::write_file(opt_out, csv_text);
            return 0;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace fineval::cli

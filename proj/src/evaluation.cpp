// SPDX-License-Identifier: Apache-2.0
#include "tdmd/evaluation.hpp"

#include "tdmd/error.hpp"
#include "tdmd/keyvalue.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

namespace tdmd {

namespace {

bool is_tucker(Method m) { return m == Method::t_ar || m == Method::t_dmd; }

/// Outcome of one (predictor, tau, snr, period) cell in one trial.
struct CellResult {
    double nmse_db = std::numeric_limits<double>::quiet_NaN();  // NaN: failed
    Shape3 ranks{};
};

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::string format_snr(const std::optional<double>& snr) {
    return snr ? format_double(*snr) : std::string("none");
}

}  // namespace

double nmse(const ChannelTensor& truth, const ChannelTensor& pred) {
    if (truth.dims() != pred.dims()) throw DimensionError("NMSE operands differ in shape");
    const double denom = frobenius_norm(truth);
    if (denom == 0.0) throw NumericalError("NMSE is undefined for an all-zero reference tensor");
    return frobenius_norm(truth - pred) / denom;
}

double nmse_db(const ChannelTensor& truth, const ChannelTensor& pred, double floor_db) {
    const double ratio = nmse(truth, pred);
    if (!std::isfinite(ratio)) throw NumericalError("prediction is not finite");
    if (ratio <= 0.0) return floor_db;
    return std::max(floor_db, 20.0 * std::log10(ratio));
}

void ExperimentSpec::validate() const {
    scenario.validate();
    if (predictors.empty()) throw UsageError("experiment needs at least one predictor");
    if (horizons.empty()) throw UsageError("experiment needs at least one horizon");
    if (snrs_db.empty()) throw UsageError("experiment needs at least one SNR value (or none)");
    if (periods_ms.empty()) throw UsageError("experiment needs at least one measurement period");
    if (n_trials < 1) throw UsageError("n_trials must be >= 1");
    for (std::size_t tau : horizons) {
        if (tau < 1) throw UsageError("horizons must be >= 1");
    }
    for (double p : periods_ms) {
        if (!(p > 0.0) || !std::isfinite(p)) throw UsageError("periods must be positive");
    }
    for (const auto& s : snrs_db) {
        if (s && std::isnan(*s)) throw UsageError("SNR values must be numbers or none");
    }
    for (const auto& p : predictors) p.validate(p.history);
}

const NmseRow* NmseReport::find(const std::string& method, std::size_t tau, std::optional<double> snr_db,
                                double period_ms) const {
    for (const auto& r : rows) {
        if (r.method == method && r.tau == tau && r.snr_db == snr_db && r.period_ms == period_ms) return &r;
    }
    return nullptr;
}

void write_csv(std::ostream& out, const NmseReport& report) {
    out << kNmseCsvHeader << '\n';
    for (const auto& r : report.rows) {
        out << r.method << ',' << r.tau << ',' << format_snr(r.snr_db) << ',' << format_double(r.period_ms) << ','
            << r.ranks[0] << ',' << r.ranks[1] << ',' << r.ranks[2] << ',' << format_double(r.compression) << ','
            << format_double(r.mean_nmse_db) << ',' << r.trials << ',' << r.failures << '\n';
    }
}

std::vector<std::string> predictor_labels(const std::vector<PredictorConfig>& predictors) {
    std::map<Method, std::size_t> uses;
    for (const auto& p : predictors) ++uses[p.method];
    std::vector<std::string> labels;
    for (const auto& p : predictors) {
        std::string label(method_name(p.method));
        if (is_tucker(p.method) && uses[p.method] > 1) label += "@" + format_double(p.tucker_threshold);
        labels.push_back(std::move(label));
    }
    return labels;
}

NmseReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const std::size_t n_pred = spec.predictors.size();
    const std::size_t n_tau = spec.horizons.size();
    const std::size_t n_snr = spec.snrs_db.size();
    const std::size_t n_per = spec.periods_ms.size();
    const std::size_t n_cells = n_pred * n_tau * n_snr * n_per;
    const auto cell_index = [&](std::size_t p, std::size_t h, std::size_t s, std::size_t q) {
        return ((p * n_tau + h) * n_snr + s) * n_per + q;
    };

    std::size_t window = 1;
    for (const auto& p : spec.predictors) window = std::max(window, p.history);
    const std::size_t max_tau = *std::max_element(spec.horizons.begin(), spec.horizons.end());

    std::vector<std::vector<CellResult>> per_trial(spec.n_trials);
    parallel_for(spec.n_trials, spec.threads, [&](std::size_t trial) {
        std::vector<CellResult> cells(n_cells);
        const std::uint64_t seed = spec.base_seed + trial;
        for (std::size_t q = 0; q < n_per; ++q) {
            ScenarioConfig scenario = spec.scenario;
            scenario.period_ms = spec.periods_ms[q];
            scenario.n_snapshots = window + max_tau;
            scenario.seed = seed;
            const ChannelSequence clean = generate_sequence(scenario);
            for (std::size_t s = 0; s < n_snr; ++s) {
                ChannelSequence observed = add_noise(clean, spec.snrs_db[s], derive_seed(seed, 1));
                observed.snapshots.erase(observed.snapshots.begin() + static_cast<std::ptrdiff_t>(window), observed.snapshots.end());
                for (std::size_t p = 0; p < n_pred; ++p) {
                    for (std::size_t h = 0; h < n_tau; ++h) {
                        const std::size_t tau = spec.horizons[h];
                        CellResult& cell = cells[cell_index(p, h, s, q)];
                        try {
                            const Prediction pred = predict(observed, spec.predictors[p], tau);
                            cell.nmse_db = nmse_db(clean.snapshots[window - 1 + tau], pred.tensor);
                            cell.ranks = pred.ranks;
                        } catch (const Error&) {
                            cell.nmse_db = std::numeric_limits<double>::quiet_NaN();
                        }
                    }
                }
            }
        }
        per_trial[trial] = std::move(cells);
    });

    const std::vector<std::string> labels = predictor_labels(spec.predictors);
    NmseReport report;
    for (std::size_t p = 0; p < n_pred; ++p)
        for (std::size_t h = 0; h < n_tau; ++h)
            for (std::size_t s = 0; s < n_snr; ++s)
                for (std::size_t q = 0; q < n_per; ++q) {
                    NmseRow row;
                    row.method = labels[p];
                    row.tau = spec.horizons[h];
                    row.snr_db = spec.snrs_db[s];
                    row.period_ms = spec.periods_ms[q];
                    row.ranks = spec.scenario.dims();
                    double sum = 0.0;
                    bool have_ranks = false;
                    for (std::size_t trial = 0; trial < spec.n_trials; ++trial) {
                        const CellResult& c = per_trial[trial][cell_index(p, h, s, q)];
                        if (std::isnan(c.nmse_db)) {
                            ++row.failures;
                            continue;
                        }
                        if (!have_ranks) {
                            row.ranks = c.ranks;
                            have_ranks = true;
                        }
                        sum += c.nmse_db;
                        ++row.trials;
                    }
                    row.compression = compression_ratio(spec.scenario.dims(), row.ranks);
                    row.mean_nmse_db = row.trials > 0 ? sum / static_cast<double>(row.trials)
                                                      : std::numeric_limits<double>::quiet_NaN();
                    report.rows.push_back(std::move(row));
                }
    return report;
}

std::vector<std::size_t> default_horizons() {
    return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
}

std::vector<std::optional<double>> default_snrs_db() {
    return {-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
}

std::vector<double> default_periods_ms() {
    return {5.0, 10.0, 15.0, 20.0};
}

NmseReport sweep_horizon(ExperimentSpec spec, std::vector<std::size_t> horizons, std::optional<double> snr_db,
                         double period_ms) {
    spec.horizons = std::move(horizons);
    spec.snrs_db = {snr_db};
    spec.periods_ms = {period_ms};
    return run_experiment(spec);
}

NmseReport sweep_snr(ExperimentSpec spec, std::vector<std::optional<double>> snrs_db, std::size_t tau,
                     double period_ms) {
    spec.horizons = {tau};
    spec.snrs_db = std::move(snrs_db);
    spec.periods_ms = {period_ms};
    return run_experiment(spec);
}

NmseReport sweep_period(ExperimentSpec spec, std::vector<double> periods_ms, std::size_t tau,
                        std::optional<double> snr_db) {
    spec.horizons = {tau};
    spec.snrs_db = {snr_db};
    spec.periods_ms = std::move(periods_ms);
    return run_experiment(spec);
}

ExperimentSpec figure_preset(int figure, ExperimentSpec spec) {
    switch (figure) {
    case 1:
        spec.horizons = default_horizons();
        spec.snrs_db = {30.0};
        spec.periods_ms = {5.0};
        break;
    case 2:
        spec.horizons = {5};
        spec.snrs_db = default_snrs_db();
        spec.periods_ms = {5.0};
        break;
    case 3:
        spec.horizons = {5};
        spec.snrs_db = {std::nullopt};
        spec.periods_ms = default_periods_ms();
        break;
    default: throw UsageError("figure preset must be 1, 2 or 3, got " + std::to_string(figure));
    }
    return spec;
}

RankRule parse_rank_rule(const std::string& text) {
    if (text == "auto") return AutoRank{};
    if (text.rfind("auto:", 0) == 0) {
        const double threshold = parse_double(text.substr(5), "dmd_rank threshold");
        if (!(threshold > 0.0 && threshold < 1.0)) throw UsageError("dmd_rank threshold must lie in (0, 1)");
        return AutoRank{threshold};
    }
    const std::size_t r = parse_count(text, "dmd_rank");
    if (r < 1) throw UsageError("dmd_rank must be >= 1");
    return r;
}

std::string format_rank_rule(const RankRule& rule) {
    if (const auto* r = std::get_if<std::size_t>(&rule)) return std::to_string(*r);
    const double t = std::get<AutoRank>(rule).threshold;
    return t == AutoRank{}.threshold ? std::string("auto") : "auto:" + format_double(t);
}

ExperimentSpec read_experiment_spec(std::istream& in) {
    const KeyValueFile kv = KeyValueFile::parse(in);
    std::vector<std::string> known = scenario_keys();
    for (const char* k : {"methods", "history", "ar_order", "tucker_threshold", "dmd_rank", "horizons", "snrs_db",
                          "periods_ms", "n_trials", "base_seed", "threads"}) {
        known.emplace_back(k);
    }
    if (const auto unknown = kv.unknown_keys(known); !unknown.empty()) {
        throw FormatError("unknown experiment key '" + unknown.front() + "'");
    }

    ExperimentSpec spec;
    spec.scenario = scenario_from(kv);
    PredictorConfig common;
    common.history = kv.get_count("history", common.history);
    common.ar_order = kv.get_count("ar_order", common.ar_order);
    common.tucker_threshold = kv.get_double("tucker_threshold", common.tucker_threshold);
    if (const auto r = kv.get("dmd_rank")) common.dmd_rank = parse_rank_rule(*r);

    // "t_dmd@1e-5" overrides the Tucker threshold for that entry only.
    for (const std::string& item : kv.get_list("methods")) {
        PredictorConfig p = common;
        const auto at = item.find('@');
        p.method = parse_method(item.substr(0, at));
        if (at != std::string::npos) p.tucker_threshold = parse_double(item.substr(at + 1), "methods threshold");
        spec.predictors.push_back(p);
    }
    for (const std::string& item : kv.get_list("horizons")) spec.horizons.push_back(parse_count(item, "horizons"));
    for (const std::string& item : kv.get_list("snrs_db")) {
        if (item == "none") spec.snrs_db.emplace_back(std::nullopt);
        else spec.snrs_db.emplace_back(parse_double(item, "snrs_db"));
    }
    for (const std::string& item : kv.get_list("periods_ms")) spec.periods_ms.push_back(parse_double(item, "periods_ms"));
    if (spec.horizons.empty()) spec.horizons = {5};
    if (spec.snrs_db.empty()) spec.snrs_db = {spec.scenario.snr_db};
    if (spec.periods_ms.empty()) spec.periods_ms = {spec.scenario.period_ms};
    spec.n_trials = kv.get_count("n_trials", spec.n_trials);
    spec.base_seed = kv.get_u64("base_seed", spec.scenario.seed);
    spec.threads = kv.get_count("threads", spec.threads);
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    return read_experiment_spec(in);
}

}  // namespace tdmd

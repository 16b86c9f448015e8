// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tdmd/channel_sim.hpp"
#include "tdmd/predictors.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tdmd {

/// Per-trial floor on NMSE in dB so that exact predictions stay finite.
inline constexpr double kNmseFloorDb = -120.0;

/// ||truth - pred||_F / ||truth||_F (a ratio of norms, not of squared norms).
[[nodiscard]] double nmse(const ChannelTensor& truth, const ChannelTensor& pred);

/// 20 log10(nmse), clamped below at `floor_db`. Because nmse() is a norm
/// ratio this equals the usual 10 log10 of the squared-error ratio.
[[nodiscard]] double nmse_db(const ChannelTensor& truth, const ChannelTensor& pred,
                             double floor_db = kNmseFloorDb);

struct ExperimentSpec {
    ScenarioConfig scenario;
    std::vector<PredictorConfig> predictors;
    std::vector<std::size_t> horizons;
    std::vector<std::optional<double>> snrs_db;  ///< nullopt = noiseless
    std::vector<double> periods_ms;
    std::size_t n_trials = 100;
    std::uint64_t base_seed = 1;
    /// 0 uses std::thread::hardware_concurrency().
    std::size_t threads = 0;

    void validate() const;
};

struct NmseRow {
    std::string method;
    std::size_t tau = 0;
    std::optional<double> snr_db;
    double period_ms = 0.0;
    Shape3 ranks{};            ///< from the first successful trial
    double compression = 1.0;  ///< from the first successful trial
    double mean_nmse_db = 0.0; ///< average of per-trial dB values; NaN if every trial failed
    std::size_t trials = 0;    ///< successful trials
    std::size_t failures = 0;
};

struct NmseReport {
    std::vector<NmseRow> rows;

    /// First row matching the cell, or nullptr.
    [[nodiscard]] const NmseRow* find(const std::string& method, std::size_t tau, std::optional<double> snr_db,
                                      double period_ms) const;
};

inline constexpr const char* kNmseCsvHeader =
    "method,tau,snr_db,period_ms,r_rx,r_tx,r_sc,compression,nmse_db,trials,failures";

void write_csv(std::ostream& out, const NmseReport& report);

/// Row label of each predictor: the method name, suffixed with
/// "@<threshold>" when several Tucker predictors share a method.
[[nodiscard]] std::vector<std::string> predictor_labels(const std::vector<PredictorConfig>& predictors);

/// Monte-Carlo evaluation. Trial i draws its geometry from seed base_seed + i;
/// predictors see the noisy first `history` slots and are scored against the
/// noiseless slot `history - 1 + tau`. Noise for every SNR in a trial comes
/// from one shared Gaussian stream, scaled per SNR.
[[nodiscard]] NmseReport run_experiment(const ExperimentSpec& spec);

[[nodiscard]] std::vector<std::size_t> default_horizons();              ///< 1..10
[[nodiscard]] std::vector<std::optional<double>> default_snrs_db();     ///< -5..30 dB in 5 dB steps
[[nodiscard]] std::vector<double> default_periods_ms();                 ///< 5, 10, 15, 20 ms

/// Horizon sweep at a fixed SNR and period (defaults: 30 dB, 5 ms).
[[nodiscard]] NmseReport sweep_horizon(ExperimentSpec spec, std::vector<std::size_t> horizons = default_horizons(),
                                       std::optional<double> snr_db = 30.0, double period_ms = 5.0);
/// SNR sweep at a fixed horizon and period (defaults: tau 5, 5 ms).
[[nodiscard]] NmseReport sweep_snr(ExperimentSpec spec, std::vector<std::optional<double>> snrs_db = default_snrs_db(),
                                   std::size_t tau = 5, double period_ms = 5.0);
/// Period sweep at a fixed horizon, noiseless (defaults: tau 5).
[[nodiscard]] NmseReport sweep_period(ExperimentSpec spec, std::vector<double> periods_ms = default_periods_ms(),
                                      std::size_t tau = 5, std::optional<double> snr_db = std::nullopt);

/// Pins the fixed axes of figure 1 (horizon), 2 (SNR) or 3 (period) and
/// installs the default values of the swept axis.
[[nodiscard]] ExperimentSpec figure_preset(int figure, ExperimentSpec spec);

/// Experiment file: scenario keys plus methods, history, ar_order,
/// tucker_threshold, dmd_rank, horizons, snrs_db, periods_ms, n_trials,
/// base_seed, threads.
[[nodiscard]] ExperimentSpec read_experiment_spec(std::istream& in);
[[nodiscard]] ExperimentSpec load_experiment_spec(const std::string& path);

/// "auto", "auto:<threshold>" or a positive integer.
[[nodiscard]] RankRule parse_rank_rule(const std::string& text);
[[nodiscard]] std::string format_rank_rule(const RankRule& rule);

}  // namespace tdmd

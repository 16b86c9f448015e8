// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tdmd/sequence.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tdmd {

/// Seedable source for every random draw in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are not (their algorithms vary by
/// library vendor), so the uniform and Gaussian transforms are spelled out
/// here: uniform() takes the top 53 bits, gaussian() is Box-Muller.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    [[nodiscard]] double uniform() noexcept;
    /// Uniform on [lo, hi).
    [[nodiscard]] double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Standard normal.
    [[nodiscard]] double gaussian() noexcept;
    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    [[nodiscard]] Complex complex_gaussian(double variance) noexcept;

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// Independent seed for sub-stream `stream` of `base` (SplitMix64 mixing).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

/// Synthetic sum-of-rays MIMO-OFDM scenario. Defaults are a desk-scale
/// version of a 4/64-antenna, 1632-pilot, 3.5 GHz urban macro setup.
struct ScenarioConfig {
    std::size_t n_rx = 2;
    std::size_t n_tx = 8;
    std::size_t n_sc = 64;
    std::size_t n_paths = 17;
    double carrier_ghz = 3.5;
    double bandwidth_mhz = 100.0;
    double subcarrier_khz = 30.0;
    double delay_spread_ns = 300.0;
    double ue_speed_kmh = 5.0;
    double period_ms = 5.0;
    std::size_t n_snapshots = 20;
    std::optional<double> snr_db;  ///< nullopt: noiseless observations
    std::uint64_t seed = 1;

    void validate() const;

    [[nodiscard]] Shape3 dims() const noexcept { return {n_rx, n_tx, n_sc}; }
    /// v * f_c / c in Hz.
    [[nodiscard]] double max_doppler_hz() const noexcept;
    /// Pilot spacing in Hz: the widest multiple of the subcarrier spacing
    /// that still fits n_sc pilots in the bandwidth.
    [[nodiscard]] double pilot_spacing_hz() const noexcept;
};

struct Path {
    Complex gain;
    double delay_s = 0.0;
    double aod_rad = 0.0;
    double aoa_rad = 0.0;
    double doppler_hz = 0.0;
};

using PathSet = std::vector<Path>;

/// Draws the propagation geometry: exponential power-delay profile, angles
/// uniform in [-pi/2, pi/2], Doppler f_max cos(phi) with phi uniform. The
/// total path power is normalized to one.
[[nodiscard]] PathSet draw_paths(const ScenarioConfig& cfg, Rng& rng);

/// Channel at slot t: sum over paths of gain * a_rx(aoa) x a_tx(aod) x
/// exp(-2 pi i f_k delay) * exp(2 pi i doppler t T_p), half-wavelength ULAs.
[[nodiscard]] ChannelTensor channel_at(const ScenarioConfig& cfg, const PathSet& paths, std::size_t t);

/// Noiseless sequence of cfg.n_snapshots slots; geometry drawn from cfg.seed.
[[nodiscard]] ChannelSequence generate_sequence(const ScenarioConfig& cfg);

/// Adds complex Gaussian noise with per-snapshot variance
/// ||H_t||_F^2 / (N 10^(snr/10)). nullopt or +inf leaves the input unchanged.
[[nodiscard]] ChannelSequence add_noise(const ChannelSequence& seq, std::optional<double> snr_db,
                                        std::uint64_t seed);

/// generate_sequence() followed by add_noise() at cfg.snr_db, with the noise
/// stream derived from cfg.seed.
[[nodiscard]] ChannelSequence observe(const ScenarioConfig& cfg);

/// Keys accepted in scenario files, in the order they are written.
[[nodiscard]] const std::vector<std::string>& scenario_keys();

/// key = value scenario text; `snr_db = none` means noiseless.
void write_scenario_config(std::ostream& out, const ScenarioConfig& cfg);
[[nodiscard]] ScenarioConfig read_scenario_config(std::istream& in);
[[nodiscard]] ScenarioConfig load_scenario_config(const std::string& path);

class KeyValueFile;
/// Fills scenario fields present in `kv` over `base`; other keys are ignored.
[[nodiscard]] ScenarioConfig scenario_from(const KeyValueFile& kv, ScenarioConfig base = {});

}  // namespace tdmd

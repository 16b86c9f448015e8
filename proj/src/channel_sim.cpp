// SPDX-License-Identifier: Apache-2.0
#include "tdmd/channel_sim.hpp"

#include "tdmd/error.hpp"
#include "tdmd/keyvalue.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

namespace tdmd {

namespace {

constexpr double kSpeedOfLight = 299'792'458.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum Stream : std::uint64_t { geometry_stream = 0, noise_stream = 1 };

/// Half-wavelength uniform linear array response, unnormalized.
Eigen::VectorXcd steering(std::size_t n, double angle) {
    Eigen::VectorXcd a(static_cast<Eigen::Index>(n));
    const double phase = std::numbers::pi * std::sin(angle);
    for (std::size_t i = 0; i < n; ++i) {
        a[static_cast<Eigen::Index>(i)] = std::polar(1.0, -phase * static_cast<double>(i));
    }
    return a;
}

}  // namespace

double Rng::uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() noexcept {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(kTwoPi * u2);
    return radius * std::cos(kTwoPi * u2);
}

Complex Rng::complex_gaussian(double variance) noexcept {
    const double s = std::sqrt(variance / 2.0);
    const double re = gaussian();
    const double im = gaussian();
    return {s * re, s * im};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void ScenarioConfig::validate() const {
    if (n_rx < 1 || n_tx < 1 || n_sc < 1) throw UsageError("antenna and subcarrier counts must be >= 1");
    if (n_paths < 1) throw UsageError("n_paths must be >= 1");
    if (n_snapshots < 1) throw UsageError("n_snapshots must be >= 1");
    const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(carrier_ghz)) throw UsageError("carrier_ghz must be positive");
    if (!positive(bandwidth_mhz)) throw UsageError("bandwidth_mhz must be positive");
    if (!positive(subcarrier_khz)) throw UsageError("subcarrier_khz must be positive");
    if (!positive(period_ms)) throw UsageError("period_ms must be positive");
    if (!(delay_spread_ns >= 0.0) || !std::isfinite(delay_spread_ns)) {
        throw UsageError("delay_spread_ns must be non-negative");
    }
    if (!(ue_speed_kmh >= 0.0) || !std::isfinite(ue_speed_kmh)) throw UsageError("ue_speed_kmh must be non-negative");
    if (snr_db && std::isnan(*snr_db)) throw UsageError("snr_db must be a number or none");
    const double capacity = bandwidth_mhz * 1e3 / subcarrier_khz;
    if (static_cast<double>(n_sc) > capacity + 1e-9) {
        throw UsageError("n_sc = " + std::to_string(n_sc) + " exceeds bandwidth / subcarrier spacing (" +
                         format_double(capacity) + ")");
    }
}

double ScenarioConfig::max_doppler_hz() const noexcept {
    return (ue_speed_kmh / 3.6) * carrier_ghz * 1e9 / kSpeedOfLight;
}

double ScenarioConfig::pilot_spacing_hz() const noexcept {
    const double spacing = subcarrier_khz * 1e3;
    const double stride = std::floor(bandwidth_mhz * 1e6 / (spacing * static_cast<double>(n_sc)));
    return spacing * std::max(1.0, stride);
}

PathSet draw_paths(const ScenarioConfig& cfg, Rng& rng) {
    cfg.validate();
    const double spread_s = cfg.delay_spread_ns * 1e-9;
    const double fd = cfg.max_doppler_hz();
    PathSet paths(cfg.n_paths);
    double total_power = 0.0;
    for (Path& p : paths) {
        p.delay_s = spread_s > 0.0 ? -spread_s * std::log(1.0 - rng.uniform()) : 0.0;
        const double power = spread_s > 0.0 ? std::exp(-p.delay_s / spread_s) : 1.0;
        p.gain = std::sqrt(power) * rng.complex_gaussian(1.0);
        p.aod_rad = rng.uniform(-std::numbers::pi / 2, std::numbers::pi / 2);
        p.aoa_rad = rng.uniform(-std::numbers::pi / 2, std::numbers::pi / 2);
        p.doppler_hz = fd * std::cos(rng.uniform(-std::numbers::pi, std::numbers::pi));
        total_power += std::norm(p.gain);
    }
    if (total_power > 0.0) {
        for (Path& p : paths) p.gain /= std::sqrt(total_power);
    }
    return paths;
}

ChannelTensor channel_at(const ScenarioConfig& cfg, const PathSet& paths, std::size_t t) {
    const Shape3 dims = cfg.dims();
    ChannelTensor h(dims);
    const double time_s = static_cast<double>(t) * cfg.period_ms * 1e-3;
    const double df = cfg.pilot_spacing_hz();
    for (const Path& p : paths) {
        const Eigen::VectorXcd a_rx = steering(cfg.n_rx, p.aoa_rad);
        const Eigen::VectorXcd a_tx = steering(cfg.n_tx, p.aod_rad);
        const Complex amp = p.gain * std::polar(1.0, kTwoPi * p.doppler_hz * time_s);
        for (std::size_t k = 0; k < cfg.n_sc; ++k) {
            const Complex fk = amp * std::polar(1.0, -kTwoPi * df * static_cast<double>(k) * p.delay_s);
            for (std::size_t j = 0; j < cfg.n_tx; ++j) {
                const Complex fjk = fk * a_tx[static_cast<Eigen::Index>(j)];
                for (std::size_t i = 0; i < cfg.n_rx; ++i) h(i, j, k) += fjk * a_rx[static_cast<Eigen::Index>(i)];
            }
        }
    }
    return h;
}

ChannelSequence generate_sequence(const ScenarioConfig& cfg) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, geometry_stream));
    const PathSet paths = draw_paths(cfg, rng);
    ChannelSequence seq;
    seq.period_ms = cfg.period_ms;
    seq.snapshots.reserve(cfg.n_snapshots);
    for (std::size_t t = 0; t < cfg.n_snapshots; ++t) seq.snapshots.push_back(channel_at(cfg, paths, t));
    return seq;
}

ChannelSequence add_noise(const ChannelSequence& seq, std::optional<double> snr_db, std::uint64_t seed) {
    if (!snr_db || *snr_db == std::numeric_limits<double>::infinity()) return seq;
    if (!std::isfinite(*snr_db)) throw UsageError("SNR must be finite or none");
    ChannelSequence out = seq;
    Rng rng(seed);
    const double linear = std::pow(10.0, *snr_db / 10.0);
    for (ChannelTensor& h : out.snapshots) {
        const double energy = h.entries().squaredNorm();
        const double variance = energy / (static_cast<double>(h.size()) * linear);
        for (Eigen::Index i = 0; i < h.entries().size(); ++i) h.entries()[i] += rng.complex_gaussian(variance);
    }
    return out;
}

ChannelSequence observe(const ScenarioConfig& cfg) {
    return add_noise(generate_sequence(cfg), cfg.snr_db, derive_seed(cfg.seed, noise_stream));
}

const std::vector<std::string>& scenario_keys() {
    static const std::vector<std::string> keys = {
        "n_rx",          "n_tx",            "n_sc",         "n_paths",   "carrier_ghz",
        "bandwidth_mhz", "subcarrier_khz",  "delay_spread_ns", "ue_speed_kmh", "period_ms",
        "n_snapshots",   "snr_db",          "seed"};
    return keys;
}

void write_scenario_config(std::ostream& out, const ScenarioConfig& cfg) {
    out << "n_rx = " << cfg.n_rx << '\n'
        << "n_tx = " << cfg.n_tx << '\n'
        << "n_sc = " << cfg.n_sc << '\n'
        << "n_paths = " << cfg.n_paths << '\n'
        << "carrier_ghz = " << format_double(cfg.carrier_ghz) << '\n'
        << "bandwidth_mhz = " << format_double(cfg.bandwidth_mhz) << '\n'
        << "subcarrier_khz = " << format_double(cfg.subcarrier_khz) << '\n'
        << "delay_spread_ns = " << format_double(cfg.delay_spread_ns) << '\n'
        << "ue_speed_kmh = " << format_double(cfg.ue_speed_kmh) << '\n'
        << "period_ms = " << format_double(cfg.period_ms) << '\n'
        << "n_snapshots = " << cfg.n_snapshots << '\n'
        << "snr_db = " << (cfg.snr_db ? format_double(*cfg.snr_db) : std::string("none")) << '\n'
        << "seed = " << cfg.seed << '\n';
}

ScenarioConfig scenario_from(const KeyValueFile& kv, ScenarioConfig cfg) {
    cfg.n_rx = kv.get_count("n_rx", cfg.n_rx);
    cfg.n_tx = kv.get_count("n_tx", cfg.n_tx);
    cfg.n_sc = kv.get_count("n_sc", cfg.n_sc);
    cfg.n_paths = kv.get_count("n_paths", cfg.n_paths);
    cfg.carrier_ghz = kv.get_double("carrier_ghz", cfg.carrier_ghz);
    cfg.bandwidth_mhz = kv.get_double("bandwidth_mhz", cfg.bandwidth_mhz);
    cfg.subcarrier_khz = kv.get_double("subcarrier_khz", cfg.subcarrier_khz);
    cfg.delay_spread_ns = kv.get_double("delay_spread_ns", cfg.delay_spread_ns);
    cfg.ue_speed_kmh = kv.get_double("ue_speed_kmh", cfg.ue_speed_kmh);
    cfg.period_ms = kv.get_double("period_ms", cfg.period_ms);
    cfg.n_snapshots = kv.get_count("n_snapshots", cfg.n_snapshots);
    if (const auto snr = kv.get("snr_db")) {
        if (*snr == "none") cfg.snr_db.reset();
        else cfg.snr_db = parse_double(*snr, "snr_db");
    }
    cfg.seed = kv.get_u64("seed", cfg.seed);
    return cfg;
}

ScenarioConfig read_scenario_config(std::istream& in) {
    const KeyValueFile kv = KeyValueFile::parse(in);
    if (const auto unknown = kv.unknown_keys(scenario_keys()); !unknown.empty()) {
        throw FormatError("unknown scenario key '" + unknown.front() + "'");
    }
    ScenarioConfig cfg = scenario_from(kv);
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    return read_scenario_config(in);
}

}  // namespace tdmd

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tdmd/dmd.hpp"
#include "tdmd/sequence.hpp"
#include "tdmd/tucker.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tdmd {

enum class Method { zoh, ar, t_ar, full_dmd, t_dmd };

[[nodiscard]] std::string_view method_name(Method m) noexcept;
/// Accepts the lowercase names used by method_name() ("zoh", "ar", "t_ar",
/// "full_dmd", "t_dmd"); dashes are accepted in place of underscores.
[[nodiscard]] Method parse_method(std::string_view name);

struct PredictorConfig {
    Method method = Method::t_dmd;
    std::size_t history = 10;       ///< number of most recent snapshots used
    std::size_t ar_order = 3;
    double tucker_threshold = 1e-3; ///< relative HOSVD truncation threshold
    RankRule dmd_rank = AutoRank{};

    /// Throws UsageError unless the configuration can run on `available` snapshots.
    void validate(std::size_t available) const;
};

struct Prediction {
    ChannelTensor tensor;
    Shape3 ranks;  ///< Tucker ranks used; the full dims for untruncated methods
};

/// Dispatches on cfg.method.
[[nodiscard]] Prediction predict(const ChannelSequence& seq, const PredictorConfig& cfg, std::size_t tau);

[[nodiscard]] ChannelTensor predict_zoh(const ChannelSequence& seq, std::size_t tau);

/// Least-squares AR(p) coefficients a_1..a_p for h_t = sum_k a_k h_{t-k}.
/// A rank-deficient design matrix yields the hold model (1, 0, ..., 0).
[[nodiscard]] std::vector<Complex> fit_ar(std::span<const Complex> series, std::size_t order);

[[nodiscard]] ChannelTensor predict_ar(const ChannelSequence& seq, const PredictorConfig& cfg, std::size_t tau);
[[nodiscard]] ChannelTensor predict_t_ar(const ChannelSequence& seq, const PredictorConfig& cfg, std::size_t tau);
[[nodiscard]] ChannelTensor predict_full_dmd(const ChannelSequence& seq, const PredictorConfig& cfg,
                                             std::size_t tau);
[[nodiscard]] ChannelTensor predict_t_dmd(const ChannelSequence& seq, const PredictorConfig& cfg, std::size_t tau);

/// Comparison of the reduced DMD operators learned from the vectorized
/// window and from its Tucker cores.
struct EquivalenceReport {
    bool comparable = false;      ///< false when the two SVD truncations keep different ranks
    std::size_t rank_full = 0;
    std::size_t rank_core = 0;
    Shape3 tucker_ranks{};
    double opdiff = 0.0;          ///< ||A_full - A_core||_F / ||A_core||_F
    double eigdiff = 0.0;         ///< largest distance between matched eigenvalues
    double tucker_residual = 0.0; ///< relative Frobenius error of projecting the window
};

/// Factors come from the HOSVD of the first window snapshot.
[[nodiscard]] EquivalenceReport verify_operator_equivalence(const ChannelSequence& seq,
                                                            const PredictorConfig& cfg);
[[nodiscard]] EquivalenceReport verify_operator_equivalence(const ChannelSequence& seq,
                                                            const PredictorConfig& cfg,
                                                            const TuckerModel& model);

}  // namespace tdmd

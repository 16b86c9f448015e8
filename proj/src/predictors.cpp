// SPDX-License-Identifier: Apache-2.0
#include "tdmd/predictors.hpp"

#include "tdmd/error.hpp"
#include "tdmd/linalg.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace tdmd {

namespace {

constexpr double kArRankTol = 1e-10;

ChannelSequence window_of(const ChannelSequence& seq, const PredictorConfig& cfg) {
    seq.validate();
    cfg.validate(seq.length());
    return seq.tail(cfg.history);
}

void require_horizon(std::size_t tau) {
    if (tau < 1) throw UsageError("prediction horizon must be at least 1");
}

/// Runs the AR recursion independently on every row of `series` (one
/// column per time step) and returns the value `tau` steps past the end.
ComplexVector ar_extrapolate(const ComplexMatrix& series, std::size_t order, std::size_t tau) {
    const Eigen::Index n = series.rows();
    const Eigen::Index len = series.cols();
    ComplexVector out(n);
    std::vector<Complex> row;
    for (Eigen::Index i = 0; i < n; ++i) {
        row.resize(static_cast<std::size_t>(len));
        for (Eigen::Index t = 0; t < len; ++t) row[static_cast<std::size_t>(t)] = series(i, t);
        const std::vector<Complex> a = fit_ar(row, order);
        for (std::size_t step = 0; step < tau; ++step) {
            Complex next(0.0, 0.0);
            for (std::size_t k = 0; k < order; ++k) next += a[k] * row[row.size() - 1 - k];
            row.push_back(next);
        }
        out[i] = row.back();
    }
    return out;
}

ComplexMatrix stack_columns(const std::vector<ComplexVector>& vs) {
    ComplexMatrix m(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
    for (std::size_t t = 0; t < vs.size(); ++t) m.col(static_cast<Eigen::Index>(t)) = vs[t];
    return m;
}

std::vector<ComplexVector> vectorized(const ChannelSequence& window) {
    std::vector<ComplexVector> out;
    out.reserve(window.length());
    for (const auto& h : window.snapshots) out.push_back(vec(h));
    return out;
}

std::vector<ComplexVector> core_trajectory(const ChannelSequence& window, const TuckerModel& model) {
    std::vector<ComplexVector> out;
    out.reserve(window.length());
    for (const auto& h : window.snapshots) out.push_back(vec(project_core(h, model)));
    return out;
}

ComplexVector dmd_extrapolate(const std::vector<ComplexVector>& trajectory, const RankRule& rank,
                              std::size_t tau) {
    const DmdModel model = fit(build_snapshots(trajectory), rank);
    // Amplitudes are anchored at the first window snapshot.
    return predict(model, trajectory.size() - 1 + tau);
}

Prediction run_t_ar(const ChannelSequence& seq, const PredictorConfig& cfg, std::size_t tau) {
    require_horizon(tau);
    const ChannelSequence window = window_of(seq, cfg);
    const HosvdResult h = hosvd(window.snapshots.front(), cfg.tucker_threshold);
    const ComplexVector g = ar_extrapolate(stack_columns(core_trajectory(window, h.model)), cfg.ar_order, tau);
    return {reconstruct(h.model, unvec(g, h.model.ranks())), h.model.ranks()};
}

Prediction run_t_dmd(const ChannelSequence& seq, const PredictorConfig& cfg, std::size_t tau) {
    require_horizon(tau);
    const ChannelSequence window = window_of(seq, cfg);
    // Factors are estimated once, on the first snapshot of the window, and
    // every later snapshot is only projected onto them.
    const HosvdResult h = hosvd(window.snapshots.front(), cfg.tucker_threshold);
    const ComplexVector g = dmd_extrapolate(core_trajectory(window, h.model), cfg.dmd_rank, tau);
    return {reconstruct(h.model, unvec(g, h.model.ranks())), h.model.ranks()};
}

}  // namespace

std::string_view method_name(Method m) noexcept {
    switch (m) {
    case Method::zoh: return "zoh";
    case Method::ar: return "ar";
    case Method::t_ar: return "t_ar";
    case Method::full_dmd: return "full_dmd";
    case Method::t_dmd: return "t_dmd";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    std::string key(name);
    for (char& c : key) {
        if (c == '-') c = '_';
        else c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    for (Method m : {Method::zoh, Method::ar, Method::t_ar, Method::full_dmd, Method::t_dmd}) {
        if (key == method_name(m)) return m;
    }
    throw UsageError("unknown method '" + std::string(name) + "'");
}

void PredictorConfig::validate(std::size_t available) const {
    if (method == Method::zoh) {
        if (available < 1) throw UsageError("ZOH needs at least one snapshot");
        return;
    }
    if (history < 1 || history > available) {
        throw UsageError("history " + std::to_string(history) + " must lie in [1, " + std::to_string(available) +
                         "]");
    }
    switch (method) {
    case Method::ar:
    case Method::t_ar:
        if (ar_order < 1 || 2 * ar_order > history) {
            throw UsageError("AR order " + std::to_string(ar_order) + " needs 2*order <= history (" +
                             std::to_string(history) + ")");
        }
        break;
    case Method::full_dmd:
    case Method::t_dmd:
        if (history < 3) throw UsageError("DMD needs a history of at least 3 snapshots");
        break;
    default: break;
    }
    if (method == Method::t_ar || method == Method::t_dmd) {
        if (!(tucker_threshold > 0.0 && tucker_threshold < 1.0)) {
            throw UsageError("Tucker threshold must lie in (0, 1)");
        }
    }
}

Prediction predict(const ChannelSequence& seq, const PredictorConfig& cfg, std::size_t tau) {
    switch (cfg.method) {
    case Method::zoh: {
        ChannelTensor t = predict_zoh(seq, tau);
        const Shape3 d = t.dims();
        return {std::move(t), d};
    }
    case Method::ar: {
        ChannelTensor t = predict_ar(seq, cfg, tau);
        const Shape3 d = t.dims();
        return {std::move(t), d};
    }
    case Method::full_dmd: {
        ChannelTensor t = predict_full_dmd(seq, cfg, tau);
        const Shape3 d = t.dims();
        return {std::move(t), d};
    }
    case Method::t_ar: return run_t_ar(seq, cfg, tau);
    case Method::t_dmd: return run_t_dmd(seq, cfg, tau);
    }
    throw UsageError("unknown method");
}

ChannelTensor predict_zoh(const ChannelSequence& seq, std::size_t tau) {
    require_horizon(tau);
    seq.validate();
    return seq.snapshots.back();
}

std::vector<Complex> fit_ar(std::span<const Complex> series, std::size_t order) {
    if (order < 1) throw UsageError("AR order must be at least 1");
    if (series.size() < 2 * order) {
        throw UsageError("AR(" + std::to_string(order) + ") needs at least " + std::to_string(2 * order) +
                         " samples, got " + std::to_string(series.size()));
    }
    const auto p = static_cast<Eigen::Index>(order);
    const auto rows = static_cast<Eigen::Index>(series.size()) - p;
    ComplexMatrix design(rows, p);
    ComplexVector rhs(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = static_cast<std::size_t>(r + p);
        rhs[r] = series[t];
        for (Eigen::Index k = 0; k < p; ++k) design(r, k) = series[t - 1 - static_cast<std::size_t>(k)];
    }

    std::vector<Complex> hold(order, Complex(0.0, 0.0));
    hold[0] = 1.0;

    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(design);
    qr.setThreshold(kArRankTol);
    if (qr.rank() < p) return hold;
    const ComplexVector a = qr.solve(rhs);
    if (!a.allFinite()) return hold;
    return {a.data(), a.data() + a.size()};
}

ChannelTensor predict_ar(const ChannelSequence& seq, const PredictorConfig& cfg, std::size_t tau) {
    require_horizon(tau);
    const ChannelSequence window = window_of(seq, cfg);
    const ComplexVector h = ar_extrapolate(stack_columns(vectorized(window)), cfg.ar_order, tau);
    return unvec(h, window.dims());
}

ChannelTensor predict_t_ar(const ChannelSequence& seq, const PredictorConfig& cfg, std::size_t tau) {
    return run_t_ar(seq, cfg, tau).tensor;
}

ChannelTensor predict_full_dmd(const ChannelSequence& seq, const PredictorConfig& cfg, std::size_t tau) {
    require_horizon(tau);
    const ChannelSequence window = window_of(seq, cfg);
    return unvec(dmd_extrapolate(vectorized(window), cfg.dmd_rank, tau), window.dims());
}

ChannelTensor predict_t_dmd(const ChannelSequence& seq, const PredictorConfig& cfg, std::size_t tau) {
    return run_t_dmd(seq, cfg, tau).tensor;
}

EquivalenceReport verify_operator_equivalence(const ChannelSequence& seq, const PredictorConfig& cfg) {
    seq.validate();
    const ChannelSequence window = seq.tail(cfg.history);
    return verify_operator_equivalence(seq, cfg, hosvd(window.snapshots.front(), cfg.tucker_threshold).model);
}

EquivalenceReport verify_operator_equivalence(const ChannelSequence& seq, const PredictorConfig& cfg,
                                              const TuckerModel& model) {
    seq.validate();
    if (cfg.history < 3 || cfg.history > seq.length()) {
        throw UsageError("operator comparison needs 3 <= history <= sequence length");
    }
    const ChannelSequence window = seq.tail(cfg.history);

    EquivalenceReport report;
    report.tucker_ranks = model.ranks();

    double residual2 = 0.0;
    double energy2 = 0.0;
    for (const auto& h : window.snapshots) {
        const double r = frobenius_norm(h - reconstruct(model, project_core(h, model)));
        const double e = frobenius_norm(h);
        residual2 += r * r;
        energy2 += e * e;
    }
    report.tucker_residual = energy2 > 0.0 ? std::sqrt(residual2 / energy2) : 0.0;

    const SnapshotPair full = build_snapshots(vectorized(window));
    const SnapshotPair core = build_snapshots(core_trajectory(window, model));
    report.rank_full = select_rank(full, cfg.dmd_rank);
    report.rank_core = select_rank(core, cfg.dmd_rank);
    if (report.rank_full != report.rank_core) {
        report.comparable = false;
        report.opdiff = report.eigdiff = std::nan("");
        return report;
    }

    const RankRule same_rank = report.rank_core;
    const ComplexMatrix a_full = reduced_operator(full, same_rank);
    const ComplexMatrix a_core = reduced_operator(core, same_rank);
    report.comparable = true;
    report.opdiff = (a_full - a_core).norm() / a_core.norm();

    const ComplexVector ev_full = Eigen::ComplexEigenSolver<ComplexMatrix>(a_full, false).eigenvalues();
    const ComplexVector ev_core = Eigen::ComplexEigenSolver<ComplexMatrix>(a_core, false).eigenvalues();
    report.eigdiff = matched_max_distance(ev_full, ev_core);
    return report;
}

}  // namespace tdmd

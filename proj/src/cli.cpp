// SPDX-License-Identifier: Apache-2.0
#include "tdmd/cli.hpp"

#include "tdmd/channel_sim.hpp"
#include "tdmd/error.hpp"
#include "tdmd/evaluation.hpp"
#include "tdmd/io.hpp"
#include "tdmd/keyvalue.hpp"
#include "tdmd/predictors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <new>
#include <optional>
#include <ostream>
#include <sstream>

namespace tdmd::cli {

namespace {

std::string dims_string(const Shape3& d) {
    return std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" + std::to_string(d[2]);
}

std::string ranks_string(const Shape3& r) {
    return std::to_string(r[0]) + "," + std::to_string(r[1]) + "," + std::to_string(r[2]);
}

std::string sci(double v) {
    std::ostringstream ss;
    ss << std::scientific << std::setprecision(3) << v;
    return ss.str();
}

std::string fixed(double v, int digits) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

struct GenerateArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

struct PredictArgs {
    std::string sequence;
    std::string method;
    long long tau = 0;
    std::size_t history = 10;
    double threshold = 1e-3;
    std::size_t ar_order = 3;
    std::string dmd_rank = "auto";
    std::string out;
    std::string truth;
    std::string tucker_out;
    std::string dmd_out;
};

struct SweepArgs {
    std::string spec;
    std::string out;
    int figure = 0;
    bool large_dims = false;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> threads;
};

struct EquivalenceArgs {
    std::string sequence;
    double threshold = 1e-3;
    std::size_t history = 10;
    std::string dmd_rank = "auto";
};

void cmd_generate(const GenerateArgs& a, std::ostream& out) {
    ScenarioConfig cfg = load_scenario_config(a.config);
    if (a.seed) cfg.seed = *a.seed;
    const ChannelSequence seq = observe(cfg);
    save_sequence(a.out, seq);
    out << "wrote=" << a.out << " T=" << seq.length() << " dims=" << dims_string(seq.dims())
        << " period_ms=" << format_double(seq.period_ms) << " seed=" << cfg.seed << '\n';
}

void cmd_predict(const PredictArgs& a, std::ostream& out) {
    if (a.tau <= 0) throw UsageError("--tau must be >= 1");
    PredictorConfig cfg;
    cfg.method = parse_method(a.method);
    cfg.history = a.history;
    cfg.ar_order = a.ar_order;
    cfg.tucker_threshold = a.threshold;
    cfg.dmd_rank = parse_rank_rule(a.dmd_rank);

    const ChannelSequence seq = load_sequence(a.sequence);
    const auto tau = static_cast<std::size_t>(a.tau);
    const Prediction pred = predict(seq, cfg, tau);
    save_tensor(a.out, pred.tensor);

    const ChannelSequence window = cfg.method == Method::zoh ? seq.tail(1) : seq.tail(cfg.history);
    const bool tucker = cfg.method == Method::t_ar || cfg.method == Method::t_dmd;
    if (!a.tucker_out.empty()) {
        if (!tucker) throw UsageError("--tucker-out needs a Tucker method (t_ar or t_dmd)");
        save_tucker(a.tucker_out, hosvd(window.snapshots.front(), cfg.tucker_threshold).model);
    }
    if (!a.dmd_out.empty()) {
        std::vector<ComplexVector> trajectory;
        if (cfg.method == Method::full_dmd) {
            for (const auto& h : window.snapshots) trajectory.push_back(vec(h));
        } else if (cfg.method == Method::t_dmd) {
            const TuckerModel model = hosvd(window.snapshots.front(), cfg.tucker_threshold).model;
            for (const auto& h : window.snapshots) trajectory.push_back(vec(project_core(h, model)));
        } else {
            throw UsageError("--dmd-out needs a DMD method (full_dmd or t_dmd)");
        }
        save_dmd(a.dmd_out, fit(build_snapshots(trajectory), cfg.dmd_rank));
    }

    std::string nmse_text = "n/a";
    if (!a.truth.empty()) nmse_text = fixed(nmse_db(load_tensor(a.truth), pred.tensor), 4);
    out << "method=" << method_name(cfg.method) << " tau=" << tau << " ranks=" << ranks_string(pred.ranks)
        << " compression=" << fixed(compression_ratio(pred.tensor.dims(), pred.ranks), 3)
        << " nmse_db=" << nmse_text << '\n';
}

void cmd_sweep(const SweepArgs& a, std::ostream& out) {
    ExperimentSpec spec = load_experiment_spec(a.spec);
    if (spec.predictors.empty()) throw UsageError("experiment spec lists no methods");
    if (a.large_dims) {
        spec.scenario.n_rx = 4;
        spec.scenario.n_tx = 64;
        spec.scenario.n_sc = 1632;
    }
    if (a.figure != 0) spec = figure_preset(a.figure, std::move(spec));
    if (a.trials) spec.n_trials = *a.trials;
    if (a.threads) spec.threads = *a.threads;

    const NmseReport report = run_experiment(spec);
    std::ofstream csv(a.out, std::ios::binary | std::ios::trunc);
    if (!csv) throw FormatError("cannot write '" + a.out + "'");
    write_csv(csv, report);
    csv.flush();
    if (!csv) throw FormatError("write to '" + a.out + "' failed");
    out << "wrote=" << a.out << " rows=" << report.rows.size() << " trials=" << spec.n_trials << '\n';
}

void cmd_equivalence(const EquivalenceArgs& a, std::ostream& out) {
    PredictorConfig cfg;
    cfg.method = Method::t_dmd;
    cfg.history = a.history;
    cfg.tucker_threshold = a.threshold;
    cfg.dmd_rank = parse_rank_rule(a.dmd_rank);
    const ChannelSequence seq = load_sequence(a.sequence);
    cfg.validate(seq.length());

    const EquivalenceReport r = verify_operator_equivalence(seq, cfg);
    const std::string opdiff = r.comparable ? sci(r.opdiff) : "incomparable";
    const std::string eigdiff = r.comparable ? sci(r.eigdiff) : "incomparable";
    out << "opdiff=" << opdiff << " eigdiff=" << eigdiff << " tucker_residual=" << sci(r.tucker_residual)
        << " rank_full=" << r.rank_full << " rank_core=" << r.rank_core
        << " ranks=" << ranks_string(r.tucker_ranks) << '\n';
}

void cmd_inspect(const std::string& path, std::ostream& out) {
    const std::string format = detect_format(path);
    if (format == "CT1") {
        const ChannelTensor t = load_tensor(path);
        out << "format=CT1 dims=" << dims_string(t.dims()) << " fro=" << sci(frobenius_norm(t)) << '\n';
    } else if (format == "CTS1") {
        const ChannelSequence seq = load_sequence(path);
        out << "format=CTS1 T=" << seq.length() << " dims=" << dims_string(seq.dims())
            << " period_ms=" << format_double(seq.period_ms) << '\n';
    } else if (format == "TKM1") {
        const TuckerModel m = load_tucker(path);
        out << "format=TKM1 dims=" << dims_string(m.full_dims()) << " ranks=" << ranks_string(m.ranks())
            << " compression=" << fixed(compression_ratio(m.full_dims(), m.ranks()), 3) << '\n';
    } else {
        const DmdModel m = load_dmd(path);
        out << "format=DMD1 N=" << m.state_size() << " r=" << m.rank() << " eigenvalues=";
        for (Eigen::Index i = 0; i < m.eigenvalues().size(); ++i) {
            const Complex l = m.eigenvalues()[i];
            out << (i ? ";" : "") << sci(l.real()) << (l.imag() < 0 ? "" : "+") << sci(l.imag()) << "i";
        }
        out << '\n';
    }
}

int report_error(std::ostream& err, int code, const std::string& category, const std::string& what) {
    std::string line = what;
    std::replace(line.begin(), line.end(), '\n', ' ');
    err << "error: " << category << ": " << line << '\n';
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tucker-compressed DMD channel prediction toolkit", "tdmd"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Simulate a channel sequence into a CTS1 file");
    generate->add_option("config", gen.config, "Scenario key=value file")->required();
    generate->add_option("-o,--out", gen.out, "Output CTS1 path")->required();
    generate->add_option("--seed", gen.seed, "Override the scenario seed");

    PredictArgs pa;
    auto* predict_cmd = app.add_subcommand("predict", "Predict tau slots past the end of a CTS1 sequence");
    predict_cmd->add_option("sequence", pa.sequence, "Input CTS1 file")->required();
    predict_cmd->add_option("--method", pa.method, "zoh | ar | t_ar | full_dmd | t_dmd")->required();
    predict_cmd->add_option("--tau", pa.tau, "Prediction horizon in slots (>= 1)")->required();
    predict_cmd->add_option("--history", pa.history, "Snapshots used for fitting")->capture_default_str();
    predict_cmd->add_option("--threshold", pa.threshold, "Relative HOSVD truncation threshold")
        ->capture_default_str();
    predict_cmd->add_option("--ar-order", pa.ar_order, "AR model order")->capture_default_str();
    predict_cmd->add_option("--dmd-rank", pa.dmd_rank, "auto | auto:<threshold> | <rank>")->capture_default_str();
    predict_cmd->add_option("-o,--out", pa.out, "Output CT1 path")->required();
    predict_cmd->add_option("--truth", pa.truth, "CT1 ground truth; enables nmse_db");
    predict_cmd->add_option("--tucker-out", pa.tucker_out, "Write the Tucker factors (TKM1)");
    predict_cmd->add_option("--dmd-out", pa.dmd_out, "Write the fitted DMD model (DMD1)");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo NMSE sweep into a CSV report");
    sweep->add_option("spec", sa.spec, "Experiment key=value file")->required();
    sweep->add_option("-o,--out", sa.out, "Output CSV path")->required();
    sweep->add_option("--figure", sa.figure, "Axis preset: 1 horizon, 2 SNR, 3 period")
        ->check(CLI::IsMember({1, 2, 3}));
    sweep->add_flag("--paper-dims", sa.large_dims, "Use 4x64x1632 tensors (slow)");
    sweep->add_option("--trials", sa.trials, "Override n_trials");
    sweep->add_option("--threads", sa.threads, "Worker threads (0 = all cores)");

    EquivalenceArgs ea;
    auto* equivalence = app.add_subcommand("equivalence", "Compare full-space and core-space DMD operators");
    equivalence->add_option("sequence", ea.sequence, "Input CTS1 file")->required();
    equivalence->add_option("--threshold", ea.threshold, "Relative HOSVD truncation threshold")
        ->capture_default_str();
    equivalence->add_option("--history", ea.history, "Window length")->capture_default_str();
    equivalence->add_option("--dmd-rank", ea.dmd_rank, "auto | auto:<threshold> | <rank>")->capture_default_str();

    std::string inspect_path;
    auto* inspect = app.add_subcommand("inspect", "Describe a CT1, CTS1, TKM1 or DMD1 file");
    inspect->add_option("file", inspect_path, "File to describe")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        return report_error(err, usage, "usage", e.what());
    }

    try {
        if (*generate) cmd_generate(gen, out);
        else if (*predict_cmd) cmd_predict(pa, out);
        else if (*sweep) cmd_sweep(sa, out);
        else if (*equivalence) cmd_equivalence(ea, out);
        else if (*inspect) cmd_inspect(inspect_path, out);
    } catch (const Error& e) {
        switch (e.kind()) {
        case ErrorKind::usage: return report_error(err, usage, "usage", e.what());
        case ErrorKind::data: return report_error(err, data_format, "data", e.what());
        case ErrorKind::numerical: return report_error(err, numerical, "numerical", e.what());
        }
    } catch (const std::bad_alloc&) {
        return report_error(err, numerical, "numerical", "out of memory");
    } catch (const std::exception& e) {
        return report_error(err, numerical, "numerical", e.what());
    }
    return ok;
}

}  // namespace tdmd::cli

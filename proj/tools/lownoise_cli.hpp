// Copyright 2026 The lownoise Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command implementations for the `lownoise` tool. Kept in a header so the
// test suites can drive the commands without spawning processes.

#include "lownoise/lownoise.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lownoise::cli {

using ojson = nlohmann::ordered_json;

enum ExitCode : int { kPassed = 0, kCheckFailed = 1, kUsageError = 2 };

struct Config {
    std::string command;
    std::string channel = "depolarizing";
    Index dim = 2;
    int order = kDefaultTruncationOrder;
    std::string input = "basis:0";
    std::vector<double> eps_grid{1e-2, 1e-3, 1e-4};
    int n = 2;
    int trials = 200;
    int starts = kDefaultStarts;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string out;
    bool allow_invalid = false;
};

struct Row {
    std::string quantity;
    std::optional<double> eps;
    double value = 0.0;
};

struct Report {
    ojson body = ojson::object();
    std::vector<Row> rows;
    bool passed = true;
};

// ---------------------------------------------------------------- output

/// %.17g, the shortest width that always round-trips a double.
inline std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline void write_json(const ojson &v, std::ostream &os, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (v.type()) {
    case ojson::value_t::object: {
        if (v.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            os << (first ? "" : ",\n") << pad << ojson(it.key()).dump() << ": ";
            write_json(it.value(), os, depth + 1);
            first = false;
        }
        os << "\n" << close_pad << "}";
        return;
    }
    case ojson::value_t::array: {
        if (v.empty()) {
            os << "[]";
            return;
        }
        // numeric leaves stay on one line
        const bool flat = std::all_of(v.begin(), v.end(), [](const ojson &e) {
            return e.is_primitive();
        });
        if (flat) {
            os << "[";
            for (std::size_t k = 0; k < v.size(); ++k) {
                os << (k ? ", " : "");
                write_json(v[k], os, depth + 1);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t k = 0; k < v.size(); ++k) {
            os << (k ? ",\n" : "") << pad;
            write_json(v[k], os, depth + 1);
        }
        os << "\n" << close_pad << "]";
        return;
    }
    case ojson::value_t::number_float: {
        const double x = v.get<double>();
        os << (std::isfinite(x) ? format_number(x) : "null");
        return;
    }
    default:
        os << v.dump();
    }
}

inline std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string quoted = "\"";
    for (char c : s) {
        quoted += c;
        if (c == '"') {
            quoted += '"';
        }
    }
    return quoted + "\"";
}

} // namespace detail

inline std::string to_json_text(const ojson &v) {
    std::ostringstream os;
    detail::write_json(v, os, 0);
    os << "\n";
    return os.str();
}

inline std::string to_csv_text(const Report &r, const std::string &channel,
                               std::uint64_t seed) {
    std::ostringstream os;
    os << "channel,quantity,eps,value,seed\n";
    for (const auto &row : r.rows) {
        os << detail::csv_field(channel) << "," << row.quantity << ","
           << (row.eps ? format_number(*row.eps) : "") << "," << format_number(row.value)
           << "," << seed << "\n";
    }
    return os.str();
}

inline ojson rows_json(const std::vector<Row> &rows) {
    ojson out = ojson::array();
    for (const auto &row : rows) {
        ojson r = ojson::object();
        r["quantity"] = row.quantity;
        r["eps"] = row.eps ? ojson(*row.eps) : ojson(nullptr);
        r["value"] = row.value;
        out.push_back(std::move(r));
    }
    return out;
}

// ----------------------------------------------------------- conversions

inline ojson complex_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

inline ojson vector_json(const ComplexVector &v) {
    ojson out = ojson::array();
    for (Index k = 0; k < v.size(); ++k) {
        out.push_back(complex_json(v(k)));
    }
    return out;
}

inline ojson matrix_json(const ComplexMatrix &m) {
    ojson out = ojson::array();
    for (Index i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back(complex_json(m(i, j)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

inline ojson validation_json(const ValidationReport &v) {
    ojson out = ojson::object();
    out["passed"] = v.passed;
    out["kappa_norm_defect"] = v.kappa_norm_defect;
    out["identity_defects"] = v.identity_defects;
    ojson res = ojson::array();
    for (const auto &[eps, r] : v.completeness_residuals) {
        res.push_back({{"eps", eps}, {"residual", r}});
    }
    out["completeness_residuals"] = std::move(res);
    return out;
}

template <typename State>
ojson optimization_json(const OptimizationResult<State> &r) {
    ojson out = ojson::object();
    out["optimum_value"] = r.optimum_value;
    if constexpr (std::is_same_v<State, PureState>) {
        out["optimizer_state"] = vector_json(r.optimizer_state.amplitudes());
    } else {
        out["optimizer_state"] = matrix_json(r.optimizer_state.matrix());
    }
    out["starts"] = r.starts;
    out["converged_starts"] = r.converged_starts;
    out["iterations_per_start"] = r.iterations_per_start;
    out["gradient_norm_final"] = r.gradient_norm_final;
    out["value_spread"] = r.value_spread;
    ojson per = ojson::array();
    for (const auto &s : r.per_start) {
        per.push_back({{"value", s.value},
                       {"iterations", s.iterations},
                       {"gradient_norm", s.gradient_norm},
                       {"converged", s.converged}});
    }
    out["per_start"] = std::move(per);
    return out;
}

// ----------------------------------------------------------------- setup

inline void check_config(const Config &c) {
    if (c.eps_grid.empty()) {
        throw UsageError("--eps: at least one value required");
    }
    for (double e : c.eps_grid) {
        if (!(e > 0.0 && e <= 0.1)) {
            throw UsageError("--eps: " + format_number(e) + " outside (0, 0.1]");
        }
    }
    if (c.trials < 1) {
        throw UsageError("--trials must be >= 1");
    }
    if (c.starts < 1) {
        throw UsageError("--starts must be >= 1");
    }
    if (c.dim < 1) {
        throw UsageError("--dim must be >= 1");
    }
    if (c.format != "json" && c.format != "csv") {
        throw UsageError("--format must be json or csv");
    }
}

inline bool is_channel_file(const std::string &channel) {
    return channel.ends_with(".json") || std::filesystem::exists(channel);
}

/// Catalog name or channel file. random_lownoise uses the run seed.
inline LowNoiseChannel resolve_channel(const Config &c, bool allow_invalid) {
    if (is_channel_file(c.channel)) {
        return load_channel_file(c.channel, allow_invalid);
    }
    return catalog(c.channel, c.dim, c.order, c.seed);
}

/// `maxent`, `basis:k`, or comma-separated `re:im` amplitudes. The ket may
/// live on S (dimension d) or on S⊗A (dimension d²).
inline PureState parse_input(const std::string &text, Index d) {
    if (text == "maxent") {
        return PureState::maximally_entangled(d);
    }
    if (text.starts_with("basis:")) {
        Index k = 0;
        try {
            k = std::stoll(text.substr(6));
        } catch (const std::exception &) {
            throw UsageError("--input: bad basis index in '" + text + "'");
        }
        if (k < 0 || k >= d) {
            throw UsageError("--input: basis index out of range for dimension " +
                             std::to_string(d));
        }
        return PureState::basis(d, k);
    }
    std::vector<Complex> amps;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        try {
            const double re = std::stod(item.substr(0, colon));
            const double im = colon == std::string::npos ? 0.0 : std::stod(item.substr(colon + 1));
            amps.emplace_back(re, im);
        } catch (const std::exception &) {
            throw UsageError("--input: cannot parse amplitude '" + item + "'");
        }
    }
    const auto size = static_cast<Index>(amps.size());
    if (size != d && size != d * d) {
        throw UsageError("--input: " + std::to_string(size) + " amplitudes; expected " +
                         std::to_string(d) + " or " + std::to_string(d * d));
    }
    ComplexVector v(size);
    for (Index k = 0; k < size; ++k) {
        v(k) = amps[static_cast<std::size_t>(k)];
    }
    try {
        return PureState::from_amplitudes(v);
    } catch (const ContractViolation &e) {
        throw UsageError(std::string("--input: ") + e.what());
    }
}

inline ojson config_json(const Config &c) {
    ojson out = ojson::object();
    out["command"] = c.command;
    out["channel"] = c.channel;
    out["dim"] = c.dim;
    out["truncation_order"] = c.order;
    out["input"] = c.input;
    out["eps_grid"] = c.eps_grid;
    out["n"] = c.n;
    out["trials"] = c.trials;
    out["starts"] = c.starts;
    out["seed"] = c.seed;
    out["format"] = c.format;
    out["allow_invalid"] = c.allow_invalid;
    return out;
}

// -------------------------------------------------------------- commands

inline Report cmd_validate(const Config &c, const LowNoiseChannel &ch) {
    Report r;
    const ValidationReport v = validate(ch, c.eps_grid);
    r.body["validation"] = validation_json(v);
    r.rows.push_back({"kappa_norm_defect", std::nullopt, v.kappa_norm_defect});
    for (std::size_t a = 0; a < v.identity_defects.size(); ++a) {
        r.rows.push_back({"identity_defect_" + std::to_string(a), std::nullopt,
                          v.identity_defects[a]});
    }
    for (const auto &[eps, res] : v.completeness_residuals) {
        r.rows.push_back({"completeness_residual", eps, res});
    }
    r.passed = v.passed;
    return r;
}

inline Report cmd_fisher(const Config &c, const LowNoiseChannel &ch) {
    Report r;
    const PureState psi = parse_input(c.input, ch.dim());
    const bool with_ancilla = psi.dim() != ch.dim();
    const LowNoiseChannel target = with_ancilla ? extend_ancilla(ch) : ch;
    const DensityMatrix input = DensityMatrix::from_pure(psi);

    double leading = 0.0;
    if (with_ancilla) {
        const std::array<Index, 2> dims{ch.dim(), ch.dim()};
        const std::array<Index, 1> keep{0};
        leading = leading_fisher_reduced(
            ch, DensityMatrix::from_matrix(partial_trace(psi.projector(), dims, keep)));
    } else {
        leading = leading_fisher_pure(ch, psi);
    }

    ojson rows = ojson::array();
    for (double eps : c.eps_grid) {
        const FisherReport f = exact_fisher(target, input, eps);
        rows.push_back({{"eps", eps},
                        {"exact_j", f.exact_j},
                        {"scaled_fisher", f.leading_coefficient},
                        {"cramer_rao_bound", f.cramer_rao_bound},
                        {"trace_defect", f.trace_defect}});
        r.rows.push_back({"exact_j", eps, f.exact_j});
        r.rows.push_back({"scaled_fisher", eps, f.leading_coefficient});
        r.rows.push_back({"cramer_rao_bound", eps, f.cramer_rao_bound});
    }
    r.body["input_dimension"] = psi.dim();
    r.body["ancilla"] = with_ancilla;
    r.body["fisher"] = std::move(rows);
    r.body["leading_coefficient"] = leading;
    r.rows.push_back({"leading_coefficient", std::nullopt, leading});

    std::vector<double> grid = c.eps_grid;
    std::sort(grid.begin(), grid.end(), std::greater<>());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.size() >= 2) {
        const double extrapolated = leading_from_exact(target, input, grid);
        r.body["leading_from_exact"] = extrapolated;
        r.rows.push_back({"leading_from_exact", std::nullopt, extrapolated});
    } else {
        r.body["leading_from_exact"] = nullptr;
    }
    return r;
}

inline Report cmd_optimize(const Config &c, const LowNoiseChannel &ch) {
    Report r;
    const ReducedOptimization reduced = maximize_reduced(ch, c.starts, c.seed);
    const PureOptimization pure = maximize_pure(ch, c.starts, c.seed);
    const EnhancementReport e = enhancement_from(reduced, pure);

    r.body["pure"] = optimization_json(pure);
    r.body["reduced"] = optimization_json(reduced);
    ojson enh = ojson::object();
    enh["j_pure_max"] = e.j_pure_max;
    enh["j_reduced_max"] = e.j_reduced_max;
    enh["ratio"] = e.ratio ? ojson(*e.ratio) : ojson(nullptr);
    enh["ratio_defined"] = e.ratio.has_value();
    r.body["enhancement"] = std::move(enh);

    ojson checks = ojson::object();
    const bool dominates = e.j_reduced_max >= e.j_pure_max - 1e-10;
    checks["reduced_dominates_pure"] = dominates;
    r.passed = dominates;
    if (e.ratio && ch.dim() == 2) {
        const bool bounded = *e.ratio <= 1.5 + 1e-9;
        checks["qubit_ratio_at_most_three_halves"] = bounded;
        r.passed = r.passed && bounded;
    }
    r.body["checks"] = std::move(checks);

    r.rows.push_back({"j_pure_max", std::nullopt, e.j_pure_max});
    r.rows.push_back({"j_reduced_max", std::nullopt, e.j_reduced_max});
    if (e.ratio) {
        r.rows.push_back({"ratio", std::nullopt, *e.ratio});
    }
    r.rows.push_back({"pure_value_spread", std::nullopt, pure.value_spread});
    r.rows.push_back({"reduced_value_spread", std::nullopt, reduced.value_spread});
    return r;
}

inline Report cmd_nbody(const Config &c, const LowNoiseChannel &ch) {
    if (c.n < 2 || c.n > ch.limits().max_sites) {
        throw UsageError("--n must be in [2, " + std::to_string(ch.limits().max_sites) +
                         "] for the no-gain check");
    }
    Report r;
    const FactorizedOptimum opt = factorized_optimum_nbody(ch, c.n, c.seed, c.starts);
    const NoGainReport ng = verify_no_entanglement_gain(ch, c.n, c.trials, c.seed, c.starts);

    ojson fact = ojson::object();
    fact["value"] = opt.value;
    fact["site_optimum"] = opt.site_optimum;
    fact["bound"] = c.n * opt.site_optimum;
    fact["per_site"] = opt.per_site;
    fact["site_state"] = vector_json(opt.site_state.amplitudes());
    r.body["factorized"] = std::move(fact);

    ojson gain = ojson::object();
    gain["n"] = ng.n;
    gain["trials"] = ng.trials;
    gain["site_optimum"] = ng.site_optimum;
    gain["bound"] = ng.bound;
    gain["max_observed"] = ng.max_observed;
    gain["mean_observed"] = ng.mean_observed;
    gain["gap"] = ng.gap;
    gain["violations"] = ng.violations;
    r.body["no_gain"] = std::move(gain);

    const bool saturated = std::abs(opt.value - c.n * opt.site_optimum) <= 1e-9;
    r.body["checks"] = {{"factorized_saturates_bound", saturated},
                        {"no_violations", ng.violations == 0}};
    r.passed = saturated && ng.violations == 0;

    r.rows.push_back({"factorized_value", std::nullopt, opt.value});
    r.rows.push_back({"site_optimum", std::nullopt, opt.site_optimum});
    r.rows.push_back({"bound", std::nullopt, ng.bound});
    r.rows.push_back({"max_observed", std::nullopt, ng.max_observed});
    r.rows.push_back({"mean_observed", std::nullopt, ng.mean_observed});
    r.rows.push_back({"gap", std::nullopt, ng.gap});
    r.rows.push_back({"violations", std::nullopt, static_cast<double>(ng.violations)});
    return r;
}

// ------------------------------------------------------------------ main

inline void add_common_options(CLI::App &app, Config &c) {
    app.add_option("--channel", c.channel, "catalog name or channel JSON file")
        ->capture_default_str();
    app.add_option("--dim", c.dim, "system dimension for catalog channels")
        ->capture_default_str();
    app.add_option("--order", c.order, "truncation order for catalog channels")
        ->capture_default_str();
    app.add_option("--eps", c.eps_grid, "noise parameter (repeatable)")->capture_default_str();
    app.add_option("--seed", c.seed, "seed for random channels, starts and trials")
        ->capture_default_str();
    app.add_option("--out", c.out, "write the report here instead of stdout");
    app.add_option("--format", c.format, "json or csv")->capture_default_str();
    app.add_flag("--allow-invalid", c.allow_invalid,
                 "keep going when the channel fails validation");
}

/// Parses the command line, runs one command and writes the report.
/// Returns the process exit code.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    Config c;
    CLI::App app{"Leading-order Fisher information of low-noise quantum channels"};
    app.require_subcommand(1);
    auto *validate_cmd = app.add_subcommand("validate", "check the Kraus conditions");
    auto *fisher_cmd = app.add_subcommand("fisher", "exact and leading-order Fisher information");
    auto *optimize_cmd = app.add_subcommand("optimize", "optimal inputs and enhancement ratio");
    auto *nbody_cmd = app.add_subcommand("nbody", "factorized N-site optimum and no-gain check");
    for (auto *sub : {validate_cmd, fisher_cmd, optimize_cmd, nbody_cmd}) {
        add_common_options(*sub, c);
    }
    fisher_cmd->add_option("--input", c.input, "maxent, basis:k or re:im,re:im,...")
        ->capture_default_str();
    for (auto *sub : {optimize_cmd, nbody_cmd}) {
        sub->add_option("--starts", c.starts, "optimizer starts")->capture_default_str();
    }
    nbody_cmd->add_option("--n", c.n, "number of sites")->capture_default_str();
    nbody_cmd->add_option("--trials", c.trials, "random entangled inputs")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kPassed;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPassed;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
    c.command = app.get_subcommands().front()->get_name();

    const auto started = std::chrono::steady_clock::now();
    Report report;
    std::string label = c.channel;
    int code = kPassed;
    try {
        check_config(c);
        // validate always reports, so it loads with the override
        const bool override_load = c.allow_invalid || c.command == "validate";
        const LowNoiseChannel ch = resolve_channel(c, override_load);
        label = ch.label();
        if (c.command == "validate") {
            report = cmd_validate(c, ch);
        } else {
            const ValidationReport v = validate(ch, c.eps_grid);
            if (!v.passed && !c.allow_invalid) {
                report.body["validation"] = validation_json(v);
                report.passed = false;
                err << "error: channel '" << label << "' failed validation\n";
            } else {
                if (c.command == "fisher") {
                    report = cmd_fisher(c, ch);
                } else if (c.command == "optimize") {
                    report = cmd_optimize(c, ch);
                } else {
                    report = cmd_nbody(c, ch);
                }
                report.body["validation"] = validation_json(v);
                report.passed = report.passed && v.passed;
            }
        }
        code = report.passed ? kPassed : kCheckFailed;
    } catch (const InvalidChannel &e) {
        err << "error: " << e.what() << "\n";
        report.body["validation"] = validation_json(e.report());
        report.passed = false;
        code = kCheckFailed;
    } catch (const ChannelParseError &e) {
        err << "error: channel file field '" << e.field() << "': " << e.what() << "\n";
        return kUsageError;
    } catch (const ChannelIoError &e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const DimensionError &e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const DomainError &e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const ContractViolation &e) {
        // a computation refused its inputs (e.g. a non-trace-preserving
        // family loaded with --allow-invalid)
        err << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    std::string text;
    if (c.format == "csv") {
        text = to_csv_text(report, label, c.seed);
    } else {
        ojson doc = ojson::object();
        doc["command"] = c.command;
        doc["channel"] = label;
        doc["seed"] = c.seed;
        doc["config"] = config_json(c);
        // validation first, then the command sections
        if (report.body.contains("validation")) {
            doc["validation"] = report.body["validation"];
        }
        for (auto it = report.body.begin(); it != report.body.end(); ++it) {
            if (it.key() != "validation") {
                doc[it.key()] = it.value();
            }
        }
        doc["rows"] = rows_json(report.rows);
        doc["passed"] = report.passed;
        const std::time_t now = std::time(nullptr);
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        doc["metadata"] = {{"version", kVersion},
                           {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                                 std::to_string(EIGEN_MINOR_VERSION)},
                           {"generated_at", stamp},
                           {"elapsed_seconds", elapsed}};
        text = to_json_text(doc);
    }

    if (c.out.empty()) {
        out << text;
    } else {
        std::ofstream file(c.out);
        if (!file || !(file << text)) {
            err << "error: cannot write '" << c.out << "'\n";
            return kUsageError;
        }
    }
    err << c.command << ": " << (code == kPassed ? "passed" : "FAILED") << " (" << label
        << ")\n";
    return code;
}

inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    std::vector<const char *> argv{"lownoise"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace lownoise::cli

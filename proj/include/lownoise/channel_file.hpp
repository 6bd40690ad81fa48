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

/**
 * @file
 * Channel description files (JSON).
 *
 *     {"dim": 2, "truncation_order": 6, "label": "...",
 *      "b_series": [{"kappa": [re, im], "coefficients": [M0, M1, ...]}],
 *      "c_series": [{"coefficients": [M0, M1, ...]}]}
 *
 * A matrix is a row-major nested array of [re, im] pairs. In a B entry the
 * order-0 coefficient may be given as null (or the coefficient list left out
 * entirely), meaning κ·1.
 */

#include "lownoise/channel.hpp"
#include "lownoise/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace lownoise {

/// A channel file that could not be opened.
class ChannelIoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A channel that parsed but failed validation and was not overridden.
class InvalidChannel : public std::runtime_error {
  public:
    InvalidChannel(const std::string &what, ValidationReport report)
        : std::runtime_error(what), report_(std::move(report)) {}

    [[nodiscard]] const ValidationReport &report() const noexcept { return report_; }

  private:
    ValidationReport report_;
};

inline const std::vector<double> kLoaderValidationGrid{1e-4, 1e-3, 1e-2};

namespace detail {

using json = nlohmann::json;

inline const json &require(const json &obj, const std::string &key, const std::string &path) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ChannelParseError(path.empty() ? key : path + "." + key, "missing field");
    }
    return obj.at(key);
}

inline double real_number(const json &v, const std::string &path) {
    if (!v.is_number()) {
        throw ChannelParseError(path, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ChannelParseError(path, "non-finite number");
    }
    return x;
}

inline Complex complex_pair(const json &v, const std::string &path) {
    if (!v.is_array() || v.size() != 2) {
        throw ChannelParseError(path, "expected a [re, im] pair");
    }
    return {real_number(v[0], path + "[0]"), real_number(v[1], path + "[1]")};
}

inline ComplexMatrix parse_matrix(const json &v, Index dim, const std::string &path) {
    if (!v.is_array() || static_cast<Index>(v.size()) != dim) {
        throw ChannelParseError(path, "expected " + std::to_string(dim) + " rows");
    }
    ComplexMatrix m(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        const json &row = v[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
            throw ChannelParseError(row_path, "expected " + std::to_string(dim) + " entries");
        }
        for (Index j = 0; j < dim; ++j) {
            m(i, j) = complex_pair(row[static_cast<std::size_t>(j)],
                                   row_path + "[" + std::to_string(j) + "]");
        }
    }
    return m;
}

inline int parse_int(const json &v, const std::string &path, int lo, int hi) {
    if (!v.is_number_integer()) {
        throw ChannelParseError(path, "expected an integer");
    }
    const auto x = v.get<long long>();
    if (x < lo || x > hi) {
        throw ChannelParseError(path, "value " + std::to_string(x) + " outside [" +
                                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(x);
}

// Coefficient list padded with zeros through `order`. A null order-0 entry
// is replaced by `implied0` when given.
inline OperatorSeries parse_series(const json &coeffs, Index dim, int order,
                                   const std::string &path,
                                   const std::optional<ComplexMatrix> &implied0) {
    if (!coeffs.is_array()) {
        throw ChannelParseError(path, "expected an array of matrices");
    }
    if (static_cast<int>(coeffs.size()) > order + 1) {
        throw ChannelParseError(path, std::to_string(coeffs.size()) +
                                       " coefficients exceed truncation_order " +
                                       std::to_string(order));
    }
    std::vector<ComplexMatrix> out;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        const std::string p = path + "[" + std::to_string(n) + "]";
        if (coeffs[n].is_null()) {
            if (n != 0 || !implied0) {
                throw ChannelParseError(p, "only the order-0 B coefficient may be null");
            }
            out.push_back(*implied0);
        } else {
            out.push_back(parse_matrix(coeffs[n], dim, p));
        }
    }
    if (out.empty()) {
        if (!implied0) {
            throw ChannelParseError(path, "at least the order-0 coefficient is required");
        }
        out.push_back(*implied0);
    }
    while (static_cast<int>(out.size()) < order + 1) {
        out.push_back(zeros(dim, dim));
    }
    return OperatorSeries(std::move(out));
}

inline json matrix_to_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

/**
 * Builds a channel from a parsed channel document. Unless `allow_invalid`,
 * the channel is validated on kLoaderValidationGrid and rejected with
 * InvalidChannel when the report fails.
 */
[[nodiscard]] inline LowNoiseChannel channel_from_json(const nlohmann::json &doc,
                                                       bool allow_invalid = false,
                                                       ChannelLimits limits = {}) {
    using detail::json;
    if (!doc.is_object()) {
        throw ChannelParseError("", "top level must be an object");
    }
    const int dim =
        detail::parse_int(detail::require(doc, "dim", ""), "dim", 1,
                          static_cast<int>(limits.max_dimension));
    const int order =
        detail::parse_int(detail::require(doc, "truncation_order", ""), "truncation_order", 0, 64);
    std::string label = "custom";
    if (doc.contains("label")) {
        if (!doc["label"].is_string()) {
            throw ChannelParseError("label", "expected a string");
        }
        label = doc["label"].get<std::string>();
    }

    const json &b = detail::require(doc, "b_series", "");
    if (!b.is_array() || b.empty()) {
        throw ChannelParseError("b_series", "expected a non-empty array");
    }
    std::vector<Complex> kappas;
    std::vector<OperatorSeries> b_series;
    for (std::size_t a = 0; a < b.size(); ++a) {
        const std::string path = "b_series[" + std::to_string(a) + "]";
        const Complex kappa = detail::complex_pair(detail::require(b[a], "kappa", path),
                                                   path + ".kappa");
        const ComplexMatrix implied = kappa * identity(dim);
        const json empty = json::array();
        const json &coeffs = b[a].contains("coefficients") ? b[a]["coefficients"] : empty;
        kappas.push_back(kappa);
        b_series.push_back(
            detail::parse_series(coeffs, dim, order, path + ".coefficients", implied));
    }

    std::vector<OperatorSeries> c_series;
    if (doc.contains("c_series")) {
        const json &c = doc["c_series"];
        if (!c.is_array()) {
            throw ChannelParseError("c_series", "expected an array");
        }
        for (std::size_t k = 0; k < c.size(); ++k) {
            const std::string path = "c_series[" + std::to_string(k) + "]";
            c_series.push_back(detail::parse_series(detail::require(c[k], "coefficients", path),
                                                    dim, order, path + ".coefficients",
                                                    std::nullopt));
        }
    }
    if (b_series.size() > limits.max_families || c_series.size() > limits.max_families) {
        throw ChannelParseError(b_series.size() > limits.max_families ? "b_series" : "c_series",
                             "more than " + std::to_string(limits.max_families) +
                                 " Kraus families");
    }

    LowNoiseChannel ch(dim, std::move(kappas), std::move(b_series), std::move(c_series),
                       std::move(label), limits);
    if (!allow_invalid) {
        ValidationReport report = validate(ch, kLoaderValidationGrid);
        if (!report.passed) {
            throw InvalidChannel("channel '" + ch.label() + "' failed validation", report);
        }
    }
    return ch;
}

[[nodiscard]] inline LowNoiseChannel load_channel_file(const std::string &path,
                                                       bool allow_invalid = false,
                                                       ChannelLimits limits = {}) {
    std::ifstream in(path);
    if (!in) {
        throw ChannelIoError("cannot open channel file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error &e) {
        throw ChannelParseError("<document>", e.what());
    }
    return channel_from_json(doc, allow_invalid, limits);
}

/// Inverse of channel_from_json (all coefficients written out).
[[nodiscard]] inline nlohmann::json channel_to_json(const LowNoiseChannel &ch) {
    using detail::json;
    json doc = json::object();
    doc["dim"] = ch.dim();
    doc["truncation_order"] = ch.truncation_order();
    doc["label"] = ch.label();
    json b = json::array();
    for (std::size_t a = 0; a < ch.b_series().size(); ++a) {
        json coeffs = json::array();
        for (const auto &m : ch.b_series()[a].coefficients()) {
            coeffs.push_back(detail::matrix_to_json(m));
        }
        b.push_back({{"kappa", {ch.kappas()[a].real(), ch.kappas()[a].imag()}},
                     {"coefficients", std::move(coeffs)}});
    }
    doc["b_series"] = std::move(b);
    json c = json::array();
    for (const auto &s : ch.c_series()) {
        json coeffs = json::array();
        for (const auto &m : s.coefficients()) {
            coeffs.push_back(detail::matrix_to_json(m));
        }
        c.push_back({{"coefficients", std::move(coeffs)}});
    }
    doc["c_series"] = std::move(c);
    return doc;
}

} // namespace lownoise

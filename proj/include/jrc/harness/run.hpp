#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jrc/harness/config.hpp"

namespace jrc::harness {

struct ResultRow {
    std::string scenario;
    std::string series;    ///< waveform label, plus fixed sweep values when several apply
    std::string variable;  ///< swept variable name, empty when nothing is swept
    std::optional<double> value;
    std::string metric;
    double metric_value = 0.0;
    std::optional<double> ci_half_width;  ///< 95 % interval
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Hoeffding 95 % half-width of a rate estimated from n Bernoulli trials.
double rate_half_width(std::uint64_t n);

/// Called after every finished sweep point with a short description.
using Progress = std::function<void(const std::string&)>;

/// Runs the scenario after applying `scale`. Trials run in parallel and are
/// reduced in trial order, so rows depend only on the config.
std::vector<ResultRow> run(const ExperimentConfig& config, const Progress& progress = {});

/// Header line plus one line per row, RFC 4180 quoting.
std::string to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_csv(const std::string& text);
void emit(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace jrc::harness

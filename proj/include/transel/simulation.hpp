#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "transel/analysis.hpp"

namespace transel {

struct NormalDist {
    double mean = 0.0;
    double sd = 1.0;
};

struct GammaDist {
    double shape = 2.0;
    double rate = 3.0;
};

struct StudentTDist {
    double df = 2.0;
    double ncp = 0.0;
};

using Distribution = std::variant<NormalDist, GammaDist, StudentTDist>;

std::string describe(const Distribution& d);

struct ScenarioSpec {
    Distribution distribution = NormalDist{};
    std::size_t n = 100;
    std::uint64_t seed = 1;

    void validate() const;
};

/// n iid draws. Noncentral t is (Z + ncp) / sqrt(V / df), V ~ chi-square(df).
std::vector<double> generate(const ScenarioSpec& spec);

/// Generate and analyze. The analysis seed is taken from the scenario seed.
AnalysisResult run_scenario(const ScenarioSpec& spec, const AnalysisConfig& config);

enum class SweepAxis { GammaSkewness, StudentDf };

struct SweepSpec {
    SweepAxis axis = SweepAxis::GammaSkewness;
    std::vector<double> values;   // skewness values or degrees of freedom
    std::size_t n = 1000;
    PriorKind prior = PriorKind::PowerPrior;
    int replications = 10;
    std::uint64_t seed = 1;
    double ncp = 0.0;             // Student axis only

    void validate() const;
};

/// Gamma shape and rate for a target skewness: a = (2 / skew)^2, b = a (unit mean).
GammaDist gamma_for_skewness(double skewness);

/// Scenario at one axis point and replication; seeds follow (seed, axis index, replication).
ScenarioSpec sweep_scenario(const SweepSpec& sweep, std::size_t point, int replication);

struct SweepRow {
    double axis_value = 0.0;
    Family family = Family::Id;
    PriorKind prior = PriorKind::PowerPrior;
    double mean_pmp = 0.0;
    double mean_lambda_mode = 0.0;  // NaN for Id and Log
    int replications = 0;
};

/// Called with the rows of each completed axis point, in axis order.
using SweepSink = std::function<void(const std::vector<SweepRow>&)>;

/// Replicated run_scenario per axis point, averaged. Rows of completed points are
/// passed to `sink` before the next point starts.
std::vector<SweepRow> run_sweep(const SweepSpec& sweep, const AnalysisConfig& config, const SweepSink& sink = {});

}  // namespace transel

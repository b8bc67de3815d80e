#include "transel/simulation.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "transel/errors.hpp"
#include "transel/numerics.hpp"

namespace transel {

std::string describe(const Distribution& d) {
    std::ostringstream s;
    if (const auto* n = std::get_if<NormalDist>(&d)) {
        s << "normal(" << n->mean << ", " << n->sd << ")";
    } else if (const auto* g = std::get_if<GammaDist>(&d)) {
        s << "gamma(" << g->shape << ", " << g->rate << ")";
    } else {
        const auto& t = std::get<StudentTDist>(d);
        s << "student(" << t.df << ", " << t.ncp << ")";
    }
    return s.str();
}

void ScenarioSpec::validate() const {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "scenario needs n >= 3");
    if (const auto* d = std::get_if<NormalDist>(&distribution)) {
        if (!(d->sd > 0.0) || !std::isfinite(d->mean)) throw Error(ErrorCode::InvalidArgument, "normal needs sd > 0");
    } else if (const auto* g = std::get_if<GammaDist>(&distribution)) {
        if (!(g->shape > 0.0) || !(g->rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma needs a, b > 0");
    } else {
        const auto& t = std::get<StudentTDist>(distribution);
        if (!(t.df > 0.0) || !std::isfinite(t.ncp)) throw Error(ErrorCode::InvalidArgument, "student needs df > 0");
    }
}

std::vector<double> generate(const ScenarioSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::vector<double> out(spec.n);
    if (const auto* d = std::get_if<NormalDist>(&spec.distribution)) {
        std::normal_distribution<double> dist(d->mean, d->sd);
        for (double& v : out) v = dist(rng);
    } else if (const auto* g = std::get_if<GammaDist>(&spec.distribution)) {
        std::gamma_distribution<double> dist(g->shape, 1.0 / g->rate);
        for (double& v : out) v = dist(rng);
    } else {
        const auto& t = std::get<StudentTDist>(spec.distribution);
        std::normal_distribution<double> z(0.0, 1.0);
        std::chi_squared_distribution<double> chi(t.df);
        for (double& v : out) {
            const double num = z(rng) + t.ncp;
            v = num / std::sqrt(chi(rng) / t.df);
        }
    }
    return out;
}

AnalysisResult run_scenario(const ScenarioSpec& spec, const AnalysisConfig& config) {
    AnalysisConfig c = config;
    c.seed = spec.seed;
    return analyze_data(generate(spec), c);
}

void SweepSpec::validate() const {
    if (values.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one axis value");
    if (replications < 1) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one replication");
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "sweep needs n >= 3");
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "axis values must be positive");
    }
}

GammaDist gamma_for_skewness(double skewness) {
    if (!(skewness > 0.0)) throw Error(ErrorCode::InvalidArgument, "skewness must be positive");
    const double a = (2.0 / skewness) * (2.0 / skewness);
    return {a, a};
}

ScenarioSpec sweep_scenario(const SweepSpec& sweep, std::size_t point, int replication) {
    ScenarioSpec spec;
    spec.n = sweep.n;
    spec.seed = derive_seed(sweep.seed, {static_cast<std::uint64_t>(point), static_cast<std::uint64_t>(replication)});
    const double v = sweep.values.at(point);
    if (sweep.axis == SweepAxis::GammaSkewness) {
        spec.distribution = gamma_for_skewness(v);
    } else {
        spec.distribution = StudentTDist{v, sweep.ncp};
    }
    return spec;
}

std::vector<SweepRow> run_sweep(const SweepSpec& sweep, const AnalysisConfig& config, const SweepSink& sink) {
    sweep.validate();
    AnalysisConfig c = config;
    c.prior = sweep.prior == PriorKind::PowerPrior ? PriorChoice::A : PriorChoice::B;
    c.keep_chains = false;
    c.validate();
    std::vector<SweepRow> all;
    for (std::size_t p = 0; p < sweep.values.size(); ++p) {
        std::vector<SweepRow> rows;
        for (Family f : c.families) {
            SweepRow row;
            row.axis_value = sweep.values[p];
            row.family = f;
            row.prior = sweep.prior;
            row.mean_lambda_mode = traits(f).has_lambda ? 0.0 : std::numeric_limits<double>::quiet_NaN();
            rows.push_back(row);
        }
        for (int r = 0; r < sweep.replications; ++r) {
            const AnalysisResult res = run_scenario(sweep_scenario(sweep, p, r), c);
            const SelectionReport& rep = res.report(sweep.prior);
            for (auto& row : rows) {
                const FamilyResult& fr = rep.result(row.family);
                row.mean_pmp += rep.probability(row.family);
                if (fr.lambda) row.mean_lambda_mode += fr.lambda->mode;
                ++row.replications;
            }
        }
        for (auto& row : rows) {
            row.mean_pmp /= row.replications;
            if (!c.needs_mcmc()) {
                row.mean_lambda_mode = std::numeric_limits<double>::quiet_NaN();
            } else if (traits(row.family).has_lambda) {
                row.mean_lambda_mode /= row.replications;
            }
        }
        if (sink) sink(rows);
        all.insert(all.end(), rows.begin(), rows.end());
    }
    return all;
}

}  // namespace transel

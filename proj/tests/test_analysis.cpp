#include <doctest.h>

#include <cmath>
#include <vector>

#include "support.hpp"
#include "transel/analysis.hpp"
#include "transel/errors.hpp"

using namespace transel;

TEST_CASE("analysis config validation") {
    AnalysisConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.needs_mcmc());
    c.families.clear();
    CHECK_THROWS_AS(c.validate(), Error);
    c = AnalysisConfig{};
    c.families = {Family::Id, Family::Id};
    CHECK_THROWS_AS(c.validate(), Error);
    c = AnalysisConfig{};
    c.methods.clear();
    CHECK_THROWS_AS(c.validate(), Error);
    c = AnalysisConfig{};
    c.chib_j = 100;
    CHECK_THROWS_AS(c.validate(), Error);
    c = AnalysisConfig{};
    c.methods = {EvidenceMethod::Quadrature};
    CHECK_FALSE(c.needs_mcmc());
    c.mh.draws = 10;
    CHECK_NOTHROW(c.validate());
    c.methods = {EvidenceMethod::Chib};
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("analysis reports satisfy the selection invariants") {
    AnalysisConfig cfg;
    cfg.mh.draws = 4000;
    cfg.mh.burn_in = 1000;
    cfg.keep_chains = true;
    const auto result = analyze_data(test::gamma_sample(120, 17, 2.0, 3.0), cfg);
    CHECK(result.imaginary->n_star() == 120);
    CHECK(result.reports.size() == 2);
    CHECK(result.chains.size() == 8);
    CHECK(result.log_constant == marginal_log_constant(120));
    for (const auto& rep : result.reports) {
        CHECK(rep.primary == EvidenceMethod::Chib);
        CHECK(rep.ranking.size() == 6);
        for (EvidenceMethod m : rep.methods) {
            double total = 0.0;
            for (const auto& fr : rep.families) {
                const double p = rep.probability(fr.family, m);
                CHECK(p >= 0.0);
                CHECK(p <= 1.0);
                total += p;
            }
            CHECK(std::abs(total - 1.0) <= 1e-12);
        }
        for (std::size_t i = 1; i < rep.ranking.size(); ++i) {
            CHECK(rep.probability(rep.ranking[i - 1]) >= rep.probability(rep.ranking[i]));
        }
        for (const auto& fr : rep.families) {
            CHECK(fr.lambda.has_value() == traits(fr.family).has_lambda);
            CHECK(fr.evidence.size() == 3);
            for (const auto& [m, e] : fr.evidence) {
                CHECK(std::isfinite(e.log_marginal));
                if (traits(fr.family).has_lambda) CHECK(e.method == m);
                if (e.method == EvidenceMethod::Chib) CHECK(e.mc_se.has_value());
            }
        }
        const auto& a = result.report(PriorKind::PowerPrior).result(Family::Id);
        const auto& b = result.report(PriorKind::UnitInfo).result(Family::Id);
        CHECK(a.evidence.at(EvidenceMethod::Quadrature).log_marginal ==
              b.evidence.at(EvidenceMethod::Quadrature).log_marginal);
    }
    CHECK(result.report(PriorKind::UnitInfo).result(Family::BoxCox).prior_location == 1.0);
    CHECK(result.report(PriorKind::UnitInfo).result(Family::Dual).prior_location ==
          doctest::Approx(std::log(result.dual_anchor.value)));
}

TEST_CASE("explicit n* and empirical imaginary data") {
    AnalysisConfig cfg;
    cfg.methods = {EvidenceMethod::Quadrature};
    cfg.n_star = 40;
    const auto raw = test::normal_sample(90, 3);
    CHECK(analyze_data(raw, cfg).imaginary->n_star() == 40);
    cfg.n_star.reset();
    cfg.imaginary_source = ImaginarySource::EmpiricalCopy;
    const auto res = analyze_data(raw, cfg);
    CHECK(res.imaginary->data.standardized == res.data.standardized);
}

#include "transel/analysis.hpp"

#include <algorithm>

#include "transel/errors.hpp"
#include "transel/numerics.hpp"

namespace transel {

namespace {

bool has_method(const std::vector<EvidenceMethod>& methods, EvidenceMethod m) {
    return std::find(methods.begin(), methods.end(), m) != methods.end();
}

EvidenceMethod primary_method(const std::vector<EvidenceMethod>& methods) {
    for (EvidenceMethod m : {EvidenceMethod::Chib, EvidenceMethod::Quadrature, EvidenceMethod::LaplaceMetropolis}) {
        if (has_method(methods, m)) return m;
    }
    return EvidenceMethod::ClosedForm;
}

FamilyResult fit_family(Family family, PriorKind kind, const PreparedData& data,
                        const std::shared_ptr<const ImaginaryData>& imaginary, const DualAnchor& anchor,
                        const AnalysisConfig& config, std::vector<ChainRecord>* chains) {
    FamilyResult out;
    out.family = family;
    auto likelihood = std::make_shared<const MarginalLikelihood>(family, data, true);
    if (!traits(family).has_lambda) {
        const EvidenceEstimate e = evidence_closed_form(*likelihood);
        for (EvidenceMethod m : config.methods) out.evidence[m] = e;
        return out;
    }

    PriorSpec prior = kind == PriorKind::PowerPrior ? make_power_prior(family, imaginary)
                                                    : make_unit_info_prior(family, *imaginary, anchor.value);
    if (const auto* unit = std::get_if<UnitInfoSpec>(&prior.kind)) {
        out.prior_location = unit->location;
        out.prior_scale = unit->scale;
    } else {
        out.prior_log_norm_const = std::get<PowerPriorSpec>(prior.kind).log_norm_const;
    }
    const PosteriorTarget target(likelihood, std::move(prior));
    const auto fam = static_cast<std::uint64_t>(family);
    const auto pk = static_cast<std::uint64_t>(kind);

    if (config.needs_mcmc()) {
        MhConfig mh = config.mh;
        mh.seed = derive_seed(config.seed, {2, fam, pk});
        PosteriorChain chain = run_mh(target, mh);
        const PosteriorSummary s = posterior_summary(chain);
        out.lambda = LambdaSummary{s.mode, s.mean, s.sd, chain.accept_rate, chain.step_sd};
        if (has_method(config.methods, EvidenceMethod::Chib)) {
            out.evidence[EvidenceMethod::Chib] =
                evidence_chib(target, chain, config.chib_j, derive_seed(config.seed, {3, fam, pk}));
        }
        if (has_method(config.methods, EvidenceMethod::LaplaceMetropolis)) {
            out.evidence[EvidenceMethod::LaplaceMetropolis] = evidence_laplace_metropolis(target, chain);
        }
        if (config.keep_chains && chains) chains->push_back({family, kind, std::move(chain)});
    }
    if (has_method(config.methods, EvidenceMethod::Quadrature)) {
        out.evidence[EvidenceMethod::Quadrature] = evidence_quadrature(target);
    }
    return out;
}

}  // namespace

void AnalysisConfig::validate() const {
    if (families.empty()) throw Error(ErrorCode::InvalidArgument, "at least one family is required");
    for (std::size_t i = 0; i < families.size(); ++i) {
        for (std::size_t j = i + 1; j < families.size(); ++j) {
            if (families[i] == families[j]) throw Error(ErrorCode::InvalidArgument, "duplicate family");
        }
    }
    if (methods.empty()) throw Error(ErrorCode::InvalidArgument, "at least one evidence method is required");
    if (has_method(methods, EvidenceMethod::ClosedForm)) {
        throw Error(ErrorCode::InvalidArgument, "closed form is not a selectable method");
    }
    if (chib_j < 500) throw Error(ErrorCode::InvalidArgument, "Chib J must be at least 500");
    if (n_star && *n_star < 10) throw Error(ErrorCode::InvalidArgument, "n* must be at least 10");
    if (needs_mcmc()) mh.validate();
}

std::vector<PriorKind> AnalysisConfig::prior_kinds() const {
    switch (prior) {
        case PriorChoice::A: return {PriorKind::PowerPrior};
        case PriorChoice::B: return {PriorKind::UnitInfo};
        case PriorChoice::Both: return {PriorKind::PowerPrior, PriorKind::UnitInfo};
    }
    return {};
}

bool AnalysisConfig::needs_mcmc() const {
    const bool parametric =
        std::any_of(families.begin(), families.end(), [](Family f) { return traits(f).has_lambda; });
    return parametric &&
           (has_method(methods, EvidenceMethod::Chib) || has_method(methods, EvidenceMethod::LaplaceMetropolis));
}

const FamilyResult& SelectionReport::result(Family f) const {
    for (const auto& r : families) {
        if (r.family == f) return r;
    }
    throw Error(ErrorCode::InvalidArgument, "family not in report");
}

double SelectionReport::probability(Family f) const { return probability(f, primary); }

double SelectionReport::probability(Family f, EvidenceMethod method) const {
    const FamilyResult& r = result(f);
    auto it = r.probability.find(method);
    if (it == r.probability.end()) throw Error(ErrorCode::InvalidArgument, "method not in report");
    return it->second;
}

const SelectionReport& AnalysisResult::report(PriorKind kind) const {
    for (const auto& r : reports) {
        if (r.prior == kind) return r;
    }
    throw Error(ErrorCode::InvalidArgument, "prior not in analysis");
}

AnalysisResult analyze_data(std::span<const double> raw, const AnalysisConfig& config) {
    config.validate();
    AnalysisResult result;
    result.data = prepare(raw);
    result.log_constant = marginal_log_constant(result.data.n());

    const std::size_t n_star = config.n_star.value_or(result.data.n());
    result.imaginary = std::make_shared<const ImaginaryData>(
        make_imaginary(n_star, config.imaginary_source, derive_seed(config.seed, {1}), result.data.raw));
    if (std::find(config.families.begin(), config.families.end(), Family::Dual) != config.families.end()) {
        result.dual_anchor = estimate_dual_anchor(*result.imaginary);
    }

    for (PriorKind kind : config.prior_kinds()) {
        SelectionReport report;
        report.prior = kind;
        report.methods = config.methods;
        report.primary = primary_method(config.methods);
        for (Family f : config.families) {
            report.families.push_back(fit_family(f, kind, result.data, result.imaginary, result.dual_anchor, config,
                                                 &result.chains));
        }
        for (EvidenceMethod m : config.methods) {
            std::vector<FamilyEvidence> ev;
            for (const auto& fr : report.families) ev.push_back({fr.family, fr.evidence.at(m)});
            const ModelProbabilities probs = posterior_model_probs(ev);
            for (auto& fr : report.families) fr.probability[m] = probs.probability(fr.family);
            if (m == report.primary) report.ranking = probs.ranking;
        }
        result.reports.push_back(std::move(report));
    }
    return result;
}

}  // namespace transel

#include "transel/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "transel/errors.hpp"

namespace transel {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string csv_number(double v) {
    if (!std::isfinite(v)) return "";
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

json estimate_json(const EvidenceEstimate& e) {
    json j;
    j["log_marginal"] = number_or_null(e.log_marginal);
    j["estimator"] = name(e.method);
    j["mc_se"] = e.mc_se ? number_or_null(*e.mc_se) : json(nullptr);
    j["include_constant"] = e.include_constant;
    json diag = json::object();
    for (const auto& [k, v] : e.diagnostics) diag[k] = number_or_null(v);
    j["diagnostics"] = diag;
    return j;
}

}  // namespace

json report_json(const AnalysisResult& result, const std::string& timestamp) {
    json j;
    j["timestamp"] = timestamp;
    j["n"] = result.data.n();
    j["log_constant"] = result.log_constant;
    j["reports"] = json::array();
    for (const auto& rep : result.reports) {
        json r;
        r["prior"] = name(rep.prior);
        r["primary_method"] = name(rep.primary);
        r["ranking"] = json::array();
        for (Family f : rep.ranking) r["ranking"].push_back(name(f));
        r["families"] = json::array();
        for (const auto& fr : rep.families) {
            json f;
            f["family"] = name(fr.family);
            f["evidence"] = json::object();
            for (const auto& [m, e] : fr.evidence) f["evidence"][std::string(name(m))] = estimate_json(e);
            f["posterior_model_prob"] = json::object();
            for (const auto& [m, p] : fr.probability) f["posterior_model_prob"][std::string(name(m))] = p;
            if (fr.lambda) {
                f["lambda"] = {{"mode", fr.lambda->mode},
                               {"mean", fr.lambda->mean},
                               {"sd", fr.lambda->sd},
                               {"accept_rate", fr.lambda->accept_rate},
                               {"step_sd", fr.lambda->step_sd}};
            } else {
                f["lambda"] = nullptr;
            }
            if (fr.prior_location) f["prior_location"] = *fr.prior_location;
            if (fr.prior_scale) f["prior_scale"] = *fr.prior_scale;
            if (fr.prior_log_norm_const) f["prior_log_norm_const"] = *fr.prior_log_norm_const;
            r["families"].push_back(f);
        }
        j["reports"].push_back(r);
    }
    return j;
}

std::string report_csv(const AnalysisResult& result) {
    std::ostringstream s;
    s << "family,prior,method,estimator,log_marginal,mc_se,posterior_model_prob,lambda_mode,lambda_mean,lambda_sd,"
         "accept_rate\n";
    for (const auto& rep : result.reports) {
        for (const auto& fr : rep.families) {
            for (EvidenceMethod m : rep.methods) {
                const EvidenceEstimate& e = fr.evidence.at(m);
                s << name(fr.family) << ',' << name(rep.prior) << ',' << name(m) << ',' << name(e.method) << ','
                  << csv_number(e.log_marginal) << ',' << (e.mc_se ? csv_number(*e.mc_se) : "") << ','
                  << csv_number(fr.probability.at(m)) << ',';
                if (fr.lambda) {
                    s << csv_number(fr.lambda->mode) << ',' << csv_number(fr.lambda->mean) << ','
                      << csv_number(fr.lambda->sd) << ',' << csv_number(fr.lambda->accept_rate);
                } else {
                    s << ",,,";
                }
                s << '\n';
            }
        }
    }
    return s.str();
}

std::string chain_csv(const PosteriorChain& chain) {
    std::ostringstream s;
    s << "iteration,lambda,log_posterior\n";
    for (std::size_t i = 0; i < chain.draws.size(); ++i) {
        s << i << ',' << csv_number(chain.draws[i]) << ',' << csv_number(chain.log_posterior[i]) << '\n';
    }
    return s.str();
}

json manifest_json(const AnalysisResult& result, const AnalysisConfig& config) {
    json j;
    j["seed"] = config.seed;
    j["n"] = result.data.n();
    j["n_star"] = result.imaginary ? result.imaginary->n_star() : 0;
    j["imaginary_source"] = name(config.imaginary_source);
    j["imaginary_seed"] = result.imaginary ? result.imaginary->seed : 0;
    j["shift_xi"] = result.data.shift_xi;
    j["epsilon"] = result.data.epsilon;
    j["dual_anchor"] = result.dual_anchor.value;
    j["dual_anchor_fallback"] = result.dual_anchor.fallback;
    j["log_constant"] = result.log_constant;
    j["burn_in"] = config.mh.burn_in;
    j["M"] = config.mh.draws;
    j["J"] = config.chib_j;
    j["initial_step"] = config.mh.initial_step;
    j["families"] = json::array();
    for (Family f : config.families) j["families"].push_back(name(f));
    j["methods"] = json::array();
    for (EvidenceMethod m : config.methods) j["methods"].push_back(name(m));
    j["priors"] = json::array();
    for (PriorKind k : config.prior_kinds()) j["priors"].push_back(name(k));
    json tuned = json::object();
    for (const auto& rep : result.reports) {
        for (const auto& fr : rep.families) {
            if (!fr.lambda) continue;
            tuned[std::string(name(fr.family)) + "_" + std::string(name(rep.prior))] =
                fr.lambda->step_sd * fr.lambda->step_sd;
        }
    }
    j["k_star"] = tuned;
    return j;
}

std::string sweep_csv_header() { return "axis_value,family,prior,mean_pmp,mean_lambda_mode,replications\n"; }

std::string sweep_csv_rows(const std::vector<SweepRow>& rows) {
    std::ostringstream s;
    for (const auto& r : rows) {
        s << csv_number(r.axis_value) << ',' << name(r.family) << ',' << name(r.prior) << ','
          << csv_number(r.mean_pmp) << ',' << csv_number(r.mean_lambda_mode) << ',' << r.replications << '\n';
    }
    return s.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

void append_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for appending");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream s;
    s << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

}  // namespace transel

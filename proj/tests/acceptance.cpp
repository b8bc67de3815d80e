#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "transel/analysis.hpp"
#include "transel/errors.hpp"
#include "transel/evidence.hpp"
#include "transel/numerics.hpp"
#include "transel/priors.hpp"
#include "transel/simulation.hpp"

using namespace transel;

namespace {

constexpr std::uint64_t kSeed = 41017;
constexpr int kReplications = 10;

// Pinned tolerances.
constexpr double kIdBandLo = 0.55;
constexpr double kIdBandHi = 0.95;
constexpr int kBoxCoxFirstMin = 9;
constexpr double kBoxCoxProbMin = 0.9;
constexpr double kBoxCoxModeLo = 0.29;
constexpr double kBoxCoxModeHi = 0.59;
constexpr int kModulusFirstMin = 8;
constexpr double kModulusProbMin = 0.6;
constexpr double kChibQuadTol = 0.1;
constexpr double kLmQuadTol = 0.5;
constexpr double kPriorGapTol = 0.5;
constexpr double kFisherRelTol = 1e-4;
constexpr int kFisherSeeds = 20;
constexpr double kJacobianTol = 1e-6;
constexpr int kJacobianCellsMin = 500;
constexpr double kBruteForceTol = 1e-3;
constexpr double kModulusHighDfTol = 0.2;
constexpr double kProbSumTol = 1e-12;
constexpr int kRandomEvidenceVectors = 1000;
constexpr double kRuntimeBudgetSeconds = 300.0;

constexpr std::array<PriorKind, 2> kPriors = {PriorKind::PowerPrior, PriorKind::UnitInfo};

int failures = 0;

void verdict(int id, bool pass, const std::string& text) {
    std::printf("%s %2d  %s\n", pass ? "PASS" : "FAIL", id, text.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

void note(const std::string& text) {
    std::printf("      %s\n", text.c_str());
    std::fflush(stdout);
}

std::string fmt(double v, int digits = 3) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << v;
    return s.str();
}

std::string sci(double v) {
    std::ostringstream s;
    s.precision(2);
    s << std::scientific << v;
    return s.str();
}

struct Scenario {
    std::string label;
    Distribution distribution;
    Family expected;
};

struct ReplicationSet {
    Scenario scenario;
    std::size_t n = 0;
    std::vector<std::optional<AnalysisResult>> runs;
    std::vector<std::string> errors;
    double seconds = 0.0;

    int completed() const {
        return static_cast<int>(std::count_if(runs.begin(), runs.end(), [](const auto& r) { return r.has_value(); }));
    }

    std::vector<double> probabilities(PriorKind k, Family f) const {
        std::vector<double> out;
        for (const auto& r : runs) {
            if (r) out.push_back(r->report(k).probability(f));
        }
        return out;
    }

    int first_count(PriorKind k, Family f) const {
        int c = 0;
        for (const auto& r : runs) {
            if (r && r->report(k).winner() == f) ++c;
        }
        return c;
    }

    std::vector<double> modes(PriorKind k, Family f) const {
        std::vector<double> out;
        for (const auto& r : runs) {
            if (r && r->report(k).result(f).lambda) out.push_back(r->report(k).result(f).lambda->mode);
        }
        return out;
    }

    Family median_winner(PriorKind k) const {
        Family best = Family::Id;
        double top = -1.0;
        for (Family f : kAllFamilies) {
            const auto p = probabilities(k, f);
            if (p.empty()) continue;
            const double m = test::median(p);
            if (m > top) {
                top = m;
                best = f;
            }
        }
        return best;
    }
};

ReplicationSet run_set(std::size_t index, const Scenario& sc, std::size_t n, const AnalysisConfig& config) {
    ReplicationSet set;
    set.scenario = sc;
    set.n = n;
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < kReplications; ++r) {
        ScenarioSpec spec;
        spec.distribution = sc.distribution;
        spec.n = n;
        spec.seed = derive_seed(kSeed, {static_cast<std::uint64_t>(index), n, static_cast<std::uint64_t>(r)});
        try {
            set.runs.emplace_back(run_scenario(spec, config));
        } catch (const Error& e) {
            set.runs.emplace_back(std::nullopt);
            set.errors.push_back(std::string(to_string(e.code())) + ": " + e.what());
        }
    }
    set.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return set;
}

void summarize(const ReplicationSet& set) {
    std::ostringstream s;
    s << set.scenario.label << " n=" << set.n << " (" << fmt(set.seconds, 1) << " s, " << set.completed() << "/"
      << kReplications << " runs)";
    note(s.str());
    for (PriorKind k : kPriors) {
        std::ostringstream line;
        line << "  prior " << name(k) << ": median P";
        for (Family f : kAllFamilies) {
            const auto p = set.probabilities(k, f);
            line << " " << name(f) << "=" << (p.empty() ? std::string("-") : fmt(test::median(p)));
        }
        line << "; first:";
        for (Family f : kAllFamilies) {
            const int c = set.first_count(k, f);
            if (c > 0) line << " " << name(f) << " " << c;
        }
        note(line.str());
    }
    for (const auto& e : set.errors) note("  error: " + e);
}

std::string describe_set(const ReplicationSet& set) { return set.scenario.label + " n=" + std::to_string(set.n); }

bool all_completed(const ReplicationSet& set) { return set.completed() == kReplications; }

void criterion_rank_normal(const ReplicationSet& set) {
    bool pass = all_completed(set) && set.seconds < kRuntimeBudgetSeconds;
    std::ostringstream s;
    s << "N(0,1) n=100:";
    for (PriorKind k : kPriors) {
        const auto p = set.probabilities(k, Family::Id);
        const double m = p.empty() ? 0.0 : test::median(p);
        const Family w = set.median_winner(k);
        pass = pass && w == Family::Id && m >= kIdBandLo && m <= kIdBandHi;
        s << " prior " << name(k) << " median winner " << name(w) << ", median P(Id)=" << fmt(m) << ";";
    }
    s << " band [" << kIdBandLo << ", " << kIdBandHi << "], " << fmt(set.seconds, 1) << " s";
    verdict(1, pass, s.str());
}

void criterion_rank_gamma(const ReplicationSet& set) {
    bool pass = all_completed(set);
    std::ostringstream s;
    s << "Gamma(2,3) n=100:";
    for (PriorKind k : kPriors) {
        const int first = set.first_count(k, Family::BoxCox);
        const auto p = set.probabilities(k, Family::BoxCox);
        const auto modes = set.modes(k, Family::BoxCox);
        const double mp = p.empty() ? 0.0 : test::median(p);
        const double mm = modes.empty() ? 0.0 : test::median(modes);
        pass = pass && first >= kBoxCoxFirstMin && mp >= kBoxCoxProbMin && mm >= kBoxCoxModeLo && mm <= kBoxCoxModeHi;
        s << " prior " << name(k) << " BoxCox first " << first << "/" << kReplications << ", median P=" << fmt(mp)
          << ", median mode=" << fmt(mm) << ";";
    }
    verdict(2, pass, s.str());
}

void criterion_rank_student(const ReplicationSet& set) {
    bool pass = all_completed(set);
    std::ostringstream s;
    s << "t2(ncp=-1) n=100:";
    for (PriorKind k : kPriors) {
        const int first = set.first_count(k, Family::Modulus);
        const auto p = set.probabilities(k, Family::Modulus);
        const double mp = p.empty() ? 0.0 : test::median(p);
        pass = pass && first >= kModulusFirstMin && mp >= kModulusProbMin;
        s << " prior " << name(k) << " Modulus first " << first << "/" << kReplications << ", median P=" << fmt(mp)
          << ", median winner " << name(set.median_winner(k)) << ";";
    }
    verdict(3, pass, s.str());
}

void criterion_sharpening(const std::vector<ReplicationSet>& small, const std::vector<ReplicationSet>& large) {
    bool pass = true;
    std::ostringstream s;
    for (std::size_t i = 0; i < small.size(); ++i) {
        const Family f = small[i].scenario.expected;
        pass = pass && all_completed(small[i]) && all_completed(large[i]);
        s << " " << small[i].scenario.label << " " << name(f) << ":";
        for (PriorKind k : kPriors) {
            const auto a = small[i].probabilities(k, f);
            const auto b = large[i].probabilities(k, f);
            const double ma = a.empty() ? 0.0 : test::median(a);
            const double mb = b.empty() ? 0.0 : test::median(b);
            pass = pass && mb > ma;
            s << " " << name(k) << " " << fmt(ma) << "->" << fmt(mb);
        }
        s << ";";
    }
    verdict(4, pass, "median P of the expected family, n=100 -> n=1000:" + s.str());
}

void criterion_concordance(const std::vector<const ReplicationSet*>& sets) {
    double worst_chib = 0.0;
    double worst_lm = 0.0;
    double worst_dual_lm = 0.0;
    int chib_bad = 0;
    int lm_bad = 0;
    int checked = 0;
    std::string where_chib;
    std::string where_lm;
    bool complete = true;
    for (const auto* set : sets) {
        complete = complete && all_completed(*set);
        for (const auto& run : set->runs) {
            if (!run) continue;
            for (PriorKind k : kPriors) {
                for (const auto& fr : run->report(k).families) {
                    if (!traits(fr.family).has_lambda) continue;
                    const double quad = fr.evidence.at(EvidenceMethod::Quadrature).log_marginal;
                    const double chib = std::abs(fr.evidence.at(EvidenceMethod::Chib).log_marginal - quad);
                    const double lm = std::abs(fr.evidence.at(EvidenceMethod::LaplaceMetropolis).log_marginal - quad);
                    ++checked;
                    if (chib > worst_chib) {
                        worst_chib = chib;
                        where_chib = describe_set(*set) + " " + std::string(name(fr.family)) + "/" + std::string(name(k));
                    }
                    if (chib > kChibQuadTol) ++chib_bad;
                    if (fr.family == Family::Dual) {
                        worst_dual_lm = std::max(worst_dual_lm, lm);
                        continue;
                    }
                    if (lm > worst_lm) {
                        worst_lm = lm;
                        where_lm = describe_set(*set) + " " + std::string(name(fr.family)) + "/" + std::string(name(k));
                    }
                    if (lm > kLmQuadTol) ++lm_bad;
                }
            }
        }
    }
    std::ostringstream s;
    s << "max |Chib-Quad| " << fmt(worst_chib, 4) << " (" << where_chib << ", " << chib_bad << " of " << checked
      << " over " << kChibQuadTol << "); max |LM-Quad| " << fmt(worst_lm, 4) << " (" << where_lm << ", " << lm_bad
      << " over " << kLmQuadTol << "); Dual LM flagged only, max " << fmt(worst_dual_lm, 4);
    verdict(5, complete && chib_bad == 0 && lm_bad == 0, s.str());
}

void criterion_prior_gap(const std::vector<const ReplicationSet*>& sets) {
    double worst = 0.0;
    int bad = 0;
    std::string where;
    bool complete = true;
    for (const auto* set : sets) {
        complete = complete && all_completed(*set);
        for (const auto& run : set->runs) {
            if (!run) continue;
            for (Family f : {Family::BoxCox, Family::Modulus, Family::YeoJohnson}) {
                const double a = run->report(PriorKind::PowerPrior).result(f).evidence.at(EvidenceMethod::Quadrature).log_marginal;
                const double b = run->report(PriorKind::UnitInfo).result(f).evidence.at(EvidenceMethod::Quadrature).log_marginal;
                const double gap = std::abs(a - b);
                if (gap > worst) {
                    worst = gap;
                    where = describe_set(*set) + " " + std::string(name(f));
                }
                if (gap > kPriorGapTol) ++bad;
            }
        }
    }
    verdict(6, complete && bad == 0,
            "max |log f(y|T) prior A - prior B| " + fmt(worst, 4) + " (" + where + "), " + std::to_string(bad) +
                " over " + fmt(kPriorGapTol, 1));
}

void criterion_fisher() {
    double worst = 0.0;
    int cases = 0;
    bool pass = true;
    for (int seed = 1; seed <= kFisherSeeds; ++seed) {
        const auto im = make_imaginary(100, ImaginarySource::SimulatedStandardNormal, derive_seed(kSeed, {7, static_cast<std::uint64_t>(seed)}));
        const double anchor = estimate_dual_anchor(im).value;
        for (Family f : {Family::BoxCox, Family::Modulus, Family::YeoJohnson, Family::Dual}) {
            const MarginalLikelihood lik(f, im.data);
            const double t = f == Family::Dual ? std::log(anchor) : 1.0;
            const double fd = test::fd_second_derivative(lik, t);
            try {
                const double sigma = fisher_scale(f, im, anchor);
                const double fd_sigma = 1.0 / std::sqrt(-fd);
                const double rel = std::abs(sigma - fd_sigma) / fd_sigma;
                worst = std::max(worst, rel);
                pass = pass && rel < kFisherRelTol;
            } catch (const Error& e) {
                pass = false;
                note(std::string("fisher_scale ") + std::string(name(f)) + ": " + e.what());
            }
            ++cases;
        }
    }
    verdict(7, pass, "sigma closed form vs finite differences, " + std::to_string(cases) + " cases (" +
                         std::to_string(kFisherSeeds) + " seeds x 4 families), max rel err " + sci(worst));
}

void criterion_jacobian() {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> pos(0.05, 4.0);
    std::uniform_real_distribution<double> any(-3.0, 3.0);
    int cells = 0;
    double worst = 0.0;
    for (Family f : kAllFamilies) {
        const bool positive = traits(f).requires_shift || f == Family::Log;
        const std::vector<double> lambdas = f == Family::Dual
                                                ? std::vector<double>{0.0, 0.05, 0.3, 0.7, 1.0, 1.2, 1.6, 2.0, 2.5, 3.0}
                                                : std::vector<double>{-2.0, -1.0, -0.5, 0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
        for (double lam : lambdas) {
            for (int rep = 0; rep < 10; ++rep) {
                std::vector<double> y;
                while (y.size() < 6) {
                    const double v = positive ? pos(rng) : any(rng);
                    if (!positive && std::abs(v) < 0.01) continue;
                    y.push_back(v);
                }
                double fd = 0.0;
                for (double v : y) fd += test::fd_log_derivative(f, v, lam);
                worst = std::max(worst, std::abs(log_jacobian(f, y, lam) - fd));
                ++cells;
            }
        }
    }
    verdict(8, cells >= kJacobianCellsMin && worst < kJacobianTol,
            std::to_string(cells) + " (family x lambda x data) cells, max |log J - FD| " + sci(worst));
}

void criterion_brute_force() {
    const std::vector<std::vector<double>> toys{
        {-1.3, -0.4, 0.1, 0.2, 0.9, 1.4, -0.7, 2.1},
        {0.3, 2.2, -1.1, 0.5, -0.2, 1.8, -1.9, 0.05},
    };
    double worst = 0.0;
    int cases = 0;
    for (const auto& raw : toys) {
        const auto data = prepare(raw);
        for (Family f : kAllFamilies) {
            const auto input = data.input_for(f);
            const MarginalLikelihood lik(f, input);
            const std::vector<double> lambdas = f == Family::Dual ? std::vector<double>{0.0, 0.4, 1.0, 1.5, 2.5}
                                                                  : std::vector<double>{-1.0, 0.0, 0.5, 1.0, 2.0};
            for (double lam : lambdas) {
                worst = std::max(worst, std::abs(lik(lam) - test::brute_force_log_marginal(f, input, lam)));
                ++cases;
            }
        }
    }
    verdict(9, worst < kBruteForceTol,
            std::to_string(cases) + " cases (2 toys x 6 families x 5 lambda, n=8), max |closed form - 2-D quadrature| " +
                sci(worst));
}

void criterion_sweeps() {
    AnalysisConfig config;
    config.methods = {EvidenceMethod::Quadrature, EvidenceMethod::LaplaceMetropolis};

    SweepSpec gamma;
    gamma.axis = SweepAxis::GammaSkewness;
    gamma.values = {2.0, 1.4, 0.7, 0.3};
    gamma.n = 1000;
    gamma.replications = kReplications;
    gamma.seed = derive_seed(kSeed, {10, 1});

    SweepSpec student;
    student.axis = SweepAxis::StudentDf;
    student.values = {2.0, 3.0, 5.0, 10.0, 30.0};
    student.n = 1000;
    student.replications = kReplications;
    student.seed = derive_seed(kSeed, {10, 2});

    auto pick = [](const std::vector<SweepRow>& rows, Family f) {
        std::vector<const SweepRow*> out;
        for (const auto& r : rows) {
            if (r.family == f) out.push_back(&r);
        }
        return out;
    };

    bool pass = true;
    std::ostringstream s;
    try {
        const auto g = pick(run_sweep(gamma, config), Family::BoxCox);
        bool increasing = true;
        s << "Gamma BoxCox mode:";
        for (std::size_t i = 0; i < g.size(); ++i) {
            s << " " << fmt(g[i]->axis_value, 1) << "->" << fmt(g[i]->mean_lambda_mode);
            if (i > 0) increasing = increasing && g[i]->mean_lambda_mode > g[i - 1]->mean_lambda_mode;
        }
        s << (increasing ? " (increasing);" : " (NOT increasing);");
        pass = pass && increasing;
    } catch (const Error& e) {
        pass = false;
        s << " gamma sweep failed: " << e.what() << ";";
    }
    try {
        const auto rows = run_sweep(student, config);
        const auto mod = pick(rows, Family::Modulus);
        const auto id = pick(rows, Family::Id);
        bool mod_down = true;
        bool id_up = true;
        s << " Student P(Mod)/P(Id)/Mod mode by df:";
        for (std::size_t i = 0; i < mod.size(); ++i) {
            s << " " << fmt(mod[i]->axis_value, 0) << ":" << fmt(mod[i]->mean_pmp) << "/" << fmt(id[i]->mean_pmp) << "/"
              << fmt(mod[i]->mean_lambda_mode);
            if (i > 0) {
                mod_down = mod_down && mod[i]->mean_pmp <= mod[i - 1]->mean_pmp;
                id_up = id_up && id[i]->mean_pmp >= id[i - 1]->mean_pmp;
            }
        }
        const double low = std::abs(mod.front()->mean_lambda_mode - 1.0);
        const double high = std::abs(mod.back()->mean_lambda_mode - 1.0);
        const bool toward_one = high < low && high <= kModulusHighDfTol;
        s << (mod_down ? "; P(Mod) nonincreasing" : "; P(Mod) NOT nonincreasing")
          << (id_up ? ", P(Id) nondecreasing" : ", P(Id) NOT nondecreasing")
          << (toward_one ? ", Mod mode approaches 1" : ", Mod mode does NOT approach 1");
        pass = pass && mod_down && id_up && toward_one;
    } catch (const Error& e) {
        pass = false;
        s << " student sweep failed: " << e.what();
    }
    verdict(10, pass, s.str());
}

void criterion_axioms(const std::vector<const ReplicationSet*>& sets) {
    std::mt19937_64 rng(kSeed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.1, 300.0);
    double worst_sum = 0.0;
    double worst_shift = 0.0;
    for (int rep = 0; rep < kRandomEvidenceVectors; ++rep) {
        const double s = scale(rng);
        std::vector<double> le(6);
        for (double& v : le) v = -400.0 + s * z(rng);
        const auto p = normalize_log_evidence(le);
        double total = 0.0;
        for (double v : p) total += v;
        worst_sum = std::max(worst_sum, std::abs(total - 1.0));
        const double c = 50.0 * z(rng);
        for (double& v : le) v += c;
        const auto q = normalize_log_evidence(le);
        for (std::size_t i = 0; i < p.size(); ++i) worst_shift = std::max(worst_shift, std::abs(p[i] - q[i]));
    }
    int vectors = 0;
    double worst_report = 0.0;
    for (const auto* set : sets) {
        for (const auto& run : set->runs) {
            if (!run) continue;
            for (const auto& rep : run->reports) {
                for (EvidenceMethod m : rep.methods) {
                    double total = 0.0;
                    for (const auto& fr : rep.families) total += rep.probability(fr.family, m);
                    worst_report = std::max(worst_report, std::abs(total - 1.0));
                    ++vectors;
                }
            }
        }
    }
    const bool pass = worst_sum <= kProbSumTol && worst_shift <= kProbSumTol && worst_report <= kProbSumTol;
    verdict(11, pass,
            std::to_string(kRandomEvidenceVectors) + " random vectors: max |sum-1| " + sci(worst_sum) +
                ", max shift change " + sci(worst_shift) + "; " + std::to_string(vectors) +
                " reported vectors: max |sum-1| " + sci(worst_report));
}

void symmetric_student_diagnostic() {
    AnalysisConfig config;
    config.methods = {EvidenceMethod::Quadrature};
    const ReplicationSet set = run_set(9, {"t2(ncp=0)", StudentTDist{2.0, 0.0}, Family::Modulus}, 100, config);
    std::ostringstream s;
    s << "INFO  symmetric t2 (ncp=0) n=100, quadrature: Modulus first";
    for (PriorKind k : kPriors) {
        const auto p = set.probabilities(k, Family::Modulus);
        s << " prior " << name(k) << " " << set.first_count(k, Family::Modulus) << "/" << kReplications
          << " (median P=" << (p.empty() ? std::string("-") : fmt(test::median(p))) << ")";
    }
    std::printf("%s\n", s.str().c_str());
    std::fflush(stdout);
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<Scenario> scenarios{
        {"N(0,1)", NormalDist{0.0, 1.0}, Family::Id},
        {"Gamma(2,3)", GammaDist{2.0, 3.0}, Family::BoxCox},
        {"t2(ncp=-1)", StudentTDist{2.0, -1.0}, Family::Modulus},
    };
    const AnalysisConfig config;

    std::vector<ReplicationSet> small;
    std::vector<ReplicationSet> large;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        small.push_back(run_set(i, scenarios[i], 100, config));
        summarize(small.back());
    }
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        large.push_back(run_set(i, scenarios[i], 1000, config));
        summarize(large.back());
    }
    std::vector<const ReplicationSet*> all;
    for (const auto& s : small) all.push_back(&s);
    for (const auto& s : large) all.push_back(&s);

    criterion_rank_normal(small[0]);
    criterion_rank_gamma(small[1]);
    criterion_rank_student(small[2]);
    criterion_sharpening(small, large);
    criterion_concordance(all);
    criterion_prior_gap(all);
    criterion_fisher();
    criterion_jacobian();
    criterion_brute_force();
    criterion_sweeps();
    criterion_axioms(all);
    symmetric_student_diagnostic();

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of 11 criteria failed (%.0f s)\n", failures, seconds);
    return failures == 0 ? 0 : 1;
}

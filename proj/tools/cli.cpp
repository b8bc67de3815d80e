#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "transel/analysis.hpp"
#include "transel/errors.hpp"
#include "transel/report.hpp"
#include "transel/simulation.hpp"

namespace transel::cli {

namespace {

using nlohmann::json;

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream s(line);
    while (std::getline(s, cell, sep)) out.push_back(trim(cell));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

bool is_missing(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "na" || cell == "NaN" || cell == "nan" || cell == ".";
}

// Options shared by every subcommand; a flag given on the command line wins over the
// config file.
struct CommonOptions {
    std::string config_path;
    std::string prior = "both";
    std::string families = "id,log,boxcox,modulus,yj,dual";
    std::string methods = "chib,laplace_metropolis,quadrature";
    int burn_in = 4000;
    int draws = 16000;
    int chib_j = 2000;
    std::string nstar = "match-n";
    std::string imaginary = "simulated";
    std::uint64_t seed = 1;
    std::string out = "out";
    bool dump_chains = false;

    CLI::Option* o_prior = nullptr;
    CLI::Option* o_families = nullptr;
    CLI::Option* o_methods = nullptr;
    CLI::Option* o_burn_in = nullptr;
    CLI::Option* o_draws = nullptr;
    CLI::Option* o_chib_j = nullptr;
    CLI::Option* o_nstar = nullptr;
    CLI::Option* o_imaginary = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_out = nullptr;
    CLI::Option* o_dump = nullptr;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "JSON file with option values; flags override it");
        o_prior = app->add_option("--prior", prior, "a, b or both")->check(CLI::IsMember({"a", "b", "both"}));
        o_families = app->add_option("--families", families, "comma-separated subset of id,log,boxcox,modulus,yj,dual");
        o_methods = app->add_option("--methods", methods, "comma-separated subset of chib,laplace_metropolis,quadrature");
        o_burn_in = app->add_option("--burn-in", burn_in, "MH burn-in iterations");
        o_draws = app->add_option("--draws", draws, "MH draws kept after burn-in (M)");
        o_chib_j = app->add_option("--chib-j", chib_j, "proposal draws for the Chib ordinate (J)");
        o_nstar = app->add_option("--nstar", nstar, "imaginary sample size, or match-n");
        o_imaginary = app->add_option("--imaginary", imaginary, "simulated or empirical")
                          ->check(CLI::IsMember({"simulated", "empirical"}));
        o_seed = app->add_option("--seed", seed, "master seed");
        o_out = app->add_option("--out", out, "output directory");
        o_dump = app->add_flag("--dump-chains", dump_chains, "write chains/<family>_<prior>.csv");
    }

    template <typename T>
    static void from_json(const json& j, const char* key, T& target, const CLI::Option* flag) {
        if (flag && flag->count() > 0) return;
        if (!j.contains(key)) return;
        target = j.at(key).get<T>();
    }

    static std::string joined(const json& v) {
        if (!v.is_array()) return v.get<std::string>();
        std::string s;
        for (const auto& e : v) s += (s.empty() ? "" : ",") + e.get<std::string>();
        return s;
    }

    void apply_config(json& j) {
        if (config_path.empty()) return;
        std::ifstream in(config_path);
        if (!in) throw Error(ErrorCode::IoError, "cannot read config " + config_path);
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, "config " + config_path + ": " + e.what());
        }
        try {
            from_json(j, "prior", prior, o_prior);
            if (j.contains("families") && o_families->count() == 0) families = joined(j.at("families"));
            if (j.contains("methods") && o_methods->count() == 0) methods = joined(j.at("methods"));
            from_json(j, "burn_in", burn_in, o_burn_in);
            from_json(j, "draws", draws, o_draws);
            from_json(j, "chib_j", chib_j, o_chib_j);
            if (j.contains("nstar") && o_nstar->count() == 0) {
                nstar = j.at("nstar").is_string() ? j.at("nstar").get<std::string>()
                                                  : std::to_string(j.at("nstar").get<long long>());
            }
            from_json(j, "imaginary", imaginary, o_imaginary);
            from_json(j, "seed", seed, o_seed);
            from_json(j, "out", out, o_out);
            from_json(j, "dump_chains", dump_chains, o_dump);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, "config " + config_path + ": " + e.what());
        }
    }

    AnalysisConfig analysis() const {
        AnalysisConfig c;
        c.prior = prior == "a" ? PriorChoice::A : prior == "b" ? PriorChoice::B : PriorChoice::Both;
        if (prior != "a" && prior != "b" && prior != "both") {
            throw Error(ErrorCode::InvalidArgument, "prior must be a, b or both");
        }
        c.families.clear();
        for (const auto& f : split(families, ',')) {
            const auto fam = family_from_name(f);
            if (!fam) throw Error(ErrorCode::InvalidArgument, "unknown family '" + f + "'");
            c.families.push_back(*fam);
        }
        c.methods.clear();
        for (const auto& m : split(methods, ',')) {
            const auto method = method_from_name(m);
            if (!method || *method == EvidenceMethod::ClosedForm) {
                throw Error(ErrorCode::InvalidArgument, "unknown evidence method '" + m + "'");
            }
            c.methods.push_back(*method);
        }
        c.mh.burn_in = burn_in;
        c.mh.draws = draws;
        c.chib_j = chib_j;
        if (nstar != "match-n") {
            try {
                std::size_t pos = 0;
                const long long v = std::stoll(nstar, &pos);
                if (pos != nstar.size() || v < 1) throw std::invalid_argument(nstar);
                c.n_star = static_cast<std::size_t>(v);
            } catch (const std::exception&) {
                throw Error(ErrorCode::InvalidArgument, "--nstar must be a positive integer or match-n");
            }
        }
        if (imaginary != "simulated" && imaginary != "empirical") {
            throw Error(ErrorCode::InvalidArgument, "imaginary must be simulated or empirical");
        }
        c.imaginary_source =
            imaginary == "empirical" ? ImaginarySource::EmpiricalCopy : ImaginarySource::SimulatedStandardNormal;
        c.seed = seed;
        c.keep_chains = dump_chains;
        c.validate();
        return c;
    }
};

void write_analysis(const AnalysisResult& result, const AnalysisConfig& config, const std::filesystem::path& dir,
                    std::ostream& out) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    write_text_file(dir / "report.json", report_json(result, utc_timestamp()).dump(2) + "\n");
    write_text_file(dir / "report.csv", report_csv(result));
    write_text_file(dir / "manifest.json", manifest_json(result, config).dump(2) + "\n");
    if (config.keep_chains) {
        std::filesystem::create_directories(dir / "chains", ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create chains directory: " + ec.message());
        for (const auto& rec : result.chains) {
            const std::string file = std::string(name(rec.family)) + "_" + std::string(name(rec.prior)) + ".csv";
            write_text_file(dir / "chains" / file, chain_csv(rec.chain));
        }
    }
    for (const auto& rep : result.reports) {
        out << "prior " << name(rep.prior) << " (" << name(rep.primary) << "):";
        for (Family f : rep.ranking) out << ' ' << name(f) << '=' << rep.probability(f);
        out << '\n';
    }
}

int report_error(std::ostream& err, std::string_view code, const std::string& message) {
    json j{{"error", code}, {"message", message}};
    err << j.dump() << '\n';
    return 2;
}

}  // namespace

std::vector<double> ingest_csv(const std::filesystem::path& path, const std::string& column, std::ostream& log) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::EmptyColumn, path.string() + " is empty");
    const char sep = line.find(';') != std::string::npos && line.find(',') == std::string::npos ? ';' : ',';
    const auto header = split(line, sep);
    std::optional<std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == column) index = i;
    }
    if (!index) {
        try {
            std::size_t pos = 0;
            const unsigned long v = std::stoul(column, &pos);
            if (pos == column.size() && v < header.size()) index = v;
        } catch (const std::exception&) {
        }
    }
    if (!index) throw Error(ErrorCode::InvalidArgument, "column '" + column + "' not found in " + path.string());

    std::vector<double> values;
    std::size_t missing = 0;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split(line, sep);
        const std::string cell = *index < cells.size() ? cells[*index] : "";
        if (is_missing(cell)) {
            ++missing;
            continue;
        }
        double v = 0.0;
        std::size_t pos = 0;
        try {
            v = std::stod(cell, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != cell.size() || pos == 0 || !std::isfinite(v)) {
            std::ostringstream msg;
            msg << "row " << row << ": cannot parse '" << cell << "' as a finite number";
            throw Error(ErrorCode::ParseError, msg.str());
        }
        values.push_back(v);
    }
    if (missing > 0) log << "dropped " << missing << " rows with missing '" << column << "'\n";
    if (values.empty()) throw Error(ErrorCode::EmptyColumn, "column '" + column + "' has no values");
    return values;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bayesian selection among normalizing transformations"};
    app.require_subcommand(1);

    CommonOptions analyze_opts, scenario_opts, sweep_opts;

    auto* analyze = app.add_subcommand("analyze", "analyze one column of a CSV file");
    std::string input, column = "0";
    auto* o_input = analyze->add_option("--input", input, "CSV file");
    auto* o_column = analyze->add_option("--column", column, "column name or 0-based index");
    analyze_opts.attach(analyze);

    auto* scenario = app.add_subcommand("scenario", "simulate one dataset and analyze it");
    std::string dist = "normal";
    std::size_t n = 100;
    double mu = 0.0, sd = 1.0, shape = 2.0, rate = 3.0, df = 2.0, ncp = 0.0;
    scenario->add_option("distribution", dist, "normal, gamma or student")
        ->check(CLI::IsMember({"normal", "gamma", "student"}));
    auto* o_n = scenario->add_option("--n", n, "sample size");
    scenario->add_option("--mean", mu, "normal mean");
    scenario->add_option("--sd", sd, "normal sd");
    scenario->add_option("--shape", shape, "gamma shape a");
    scenario->add_option("--rate", rate, "gamma rate b");
    scenario->add_option("--df", df, "student degrees of freedom");
    scenario->add_option("--ncp", ncp, "student noncentrality");
    scenario_opts.attach(scenario);

    auto* sweep = app.add_subcommand("sweep", "replicated scenarios along a gamma-skewness or student-df axis");
    std::string axis = "gamma";
    std::vector<double> values;
    std::size_t sweep_n = 1000;
    int replications = 10;
    double sweep_ncp = 0.0;
    sweep->add_option("axis", axis, "gamma or student")->check(CLI::IsMember({"gamma", "student"}));
    sweep->add_option("--values", values, "axis values (skewness or df)")->delimiter(',');
    auto* o_sweep_n = sweep->add_option("--n", sweep_n, "sample size per replication");
    auto* o_reps = sweep->add_option("--replications", replications, "replications per axis point");
    sweep->add_option("--ncp", sweep_ncp, "student noncentrality");
    sweep_opts.attach(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        return report_error(err, "UsageError", e.what());
    }

    try {
        if (analyze->parsed()) {
            json file;
            analyze_opts.apply_config(file);
            if (o_input->count() == 0 && file.contains("input")) input = file.at("input").get<std::string>();
            if (o_column->count() == 0 && file.contains("column")) {
                column = file.at("column").is_string() ? file.at("column").get<std::string>()
                                                       : std::to_string(file.at("column").get<long long>());
            }
            if (input.empty()) throw Error(ErrorCode::InvalidArgument, "--input is required");
            const AnalysisConfig config = analyze_opts.analysis();
            const std::vector<double> data = ingest_csv(input, column, err);
            const AnalysisResult result = analyze_data(data, config);
            write_analysis(result, config, analyze_opts.out, out);
            return 0;
        }
        if (scenario->parsed()) {
            json file;
            scenario_opts.apply_config(file);
            if (o_n->count() == 0 && file.contains("n")) n = file.at("n").get<std::size_t>();
            ScenarioSpec spec;
            spec.n = n;
            if (dist == "normal") spec.distribution = NormalDist{mu, sd};
            if (dist == "gamma") spec.distribution = GammaDist{shape, rate};
            if (dist == "student") spec.distribution = StudentTDist{df, ncp};
            const AnalysisConfig config = scenario_opts.analysis();
            spec.seed = config.seed;
            const AnalysisResult result = run_scenario(spec, config);
            write_analysis(result, config, scenario_opts.out, out);
            return 0;
        }
        json file;
        sweep_opts.apply_config(file);
        if (o_sweep_n->count() == 0 && file.contains("n")) sweep_n = file.at("n").get<std::size_t>();
        if (o_reps->count() == 0 && file.contains("replications")) replications = file.at("replications").get<int>();
        SweepSpec spec;
        spec.axis = axis == "student" ? SweepAxis::StudentDf : SweepAxis::GammaSkewness;
        spec.values = values;
        if (spec.values.empty()) {
            spec.values = spec.axis == SweepAxis::StudentDf ? std::vector<double>{2, 3, 5, 10, 30}
                                                            : std::vector<double>{2.0, 1.4, 0.7, 0.3};
        }
        spec.n = sweep_n;
        spec.replications = replications;
        spec.ncp = sweep_ncp;
        if (sweep_opts.prior == "both") sweep_opts.prior = "a";
        const AnalysisConfig config = sweep_opts.analysis();
        spec.prior = config.prior == PriorChoice::B ? PriorKind::UnitInfo : PriorKind::PowerPrior;
        spec.seed = config.seed;
        spec.validate();
        const std::filesystem::path dir = sweep_opts.out;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
        json manifest{{"axis", axis},
                      {"values", spec.values},
                      {"n", spec.n},
                      {"replications", spec.replications},
                      {"ncp", spec.ncp},
                      {"prior", name(spec.prior)},
                      {"seed", spec.seed},
                      {"burn_in", config.mh.burn_in},
                      {"M", config.mh.draws},
                      {"J", config.chib_j}};
        write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
        const auto csv = dir / "sweep.csv";
        write_text_file(csv, sweep_csv_header());
        run_sweep(spec, config, [&](const std::vector<SweepRow>& rows) {
            append_text_file(csv, sweep_csv_rows(rows));
            out << "completed axis value " << rows.front().axis_value << '\n';
        });
        return 0;
    } catch (const Error& e) {
        return report_error(err, to_string(e.code()), e.what());
    } catch (const std::exception& e) {
        return report_error(err, "InternalError", e.what());
    }
}

}  // namespace transel::cli

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "transel/analysis.hpp"
#include "transel/simulation.hpp"

namespace transel {

nlohmann::json report_json(const AnalysisResult& result, const std::string& timestamp);

/// One row per family x prior x requested method.
std::string report_csv(const AnalysisResult& result);

/// Columns iteration, lambda, log_posterior.
std::string chain_csv(const PosteriorChain& chain);

/// Everything needed to rerun: seed, n*, shift, Dual anchor, tuned steps, M, J, C(n).
nlohmann::json manifest_json(const AnalysisResult& result, const AnalysisConfig& config);

std::string sweep_csv_header();
std::string sweep_csv_rows(const std::vector<SweepRow>& rows);

/// Throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);
void append_text_file(const std::filesystem::path& path, const std::string& content);

/// UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace transel

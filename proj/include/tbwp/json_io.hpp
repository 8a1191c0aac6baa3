#pragma once

#include <string>

#include <json.hpp>

#include "tbwp/analysis.hpp"
#include "tbwp/sim.hpp"

namespace tbwp {

// ============================================================================
// JSON serialization of reports (schema version 1).  nlohmann::json keeps
// object keys sorted, so identical inputs produce byte-identical output.
// ============================================================================

using Json = nlohmann::json;

[[nodiscard]] Json to_json(const Tolerances& t);
[[nodiscard]] Json to_json(const Spectrum& s);
[[nodiscard]] Json to_json(const RankInfo& r);
[[nodiscard]] Json to_json(const ConditionResult& c);
[[nodiscard]] Json to_json(const TbwpReport& r);
[[nodiscard]] Json to_json(const ConfigReport& c, const Circuit& circuit);
[[nodiscard]] Json to_json(const CircuitTbwpReport& r, const Circuit& circuit);
[[nodiscard]] Json to_json(const NonpassiveReport& r);
[[nodiscard]] Json to_json(const PencilSpectrum& p);
[[nodiscard]] Json to_json(const TreeFamily& f, const Circuit& circuit);
[[nodiscard]] Json to_json(const ExchangeReport& r);
[[nodiscard]] Json circuit_summary_json(const Circuit& circuit);

/// Everything cmd_analyze produces, reproducible byte-for-byte.
struct AnalysisBundle {
    Json json;
};

[[nodiscard]] AnalysisBundle make_analysis_bundle(const CircuitModel& model, double q_star,
                                                  const CircuitTbwpReport& circuit_report,
                                                  const NonpassiveReport& nonpassive,
                                                  const std::vector<std::string>& artifacts,
                                                  const Tolerances& tols);

/// dump(2) + trailing newline; stable across runs.
[[nodiscard]] std::string json_to_string(const Json& j);
void write_json_file(const std::string& path, const Json& j);

} // namespace tbwp

#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "walkabout/chains.hpp"
#include "walkabout/estimators.hpp"
#include "walkabout/lab.hpp"

namespace walkabout {

const char* version();

nlohmann::json to_json(const MixingReport& r);
nlohmann::json to_json(const EstimatorConfig& c);
nlohmann::json to_json(const EstimateOutcome& o);
nlohmann::json to_json(const DegreeStats& s);
nlohmann::json to_json(const lab::RegimeCheck& r);
nlohmann::json to_json(const lab::TrialReport& r);
nlohmann::json to_json(const lab::StarCurveReport& r, bool with_trials = true);
nlohmann::json to_json(const lab::DistinguishReport& r, bool with_trials = true);
nlohmann::json to_json(const lab::BiasedReport& r, bool with_trials = true);
nlohmann::json to_json(const lab::ObservedReport& r, bool with_trials = true);
nlohmann::json to_json(const lab::DecoratedMixingRow& r);
nlohmann::json to_json(const lab::PsiMixingRow& r);
nlohmann::json to_json(const lab::ChernoffReport& r);

// {"version", "command", "seed", "params", "result"}; keys sorted, so output is stable.
nlohmann::json envelope(const std::string& command, std::uint64_t seed,
                        const nlohmann::json& params, const nlohmann::json& result);

// Fixed column order: strategy,arm,trial,budget,found,observed,queries,estimate,truth
void write_trials_csv(std::ostream& out, std::span<const lab::TrialReport> trials);

}  // namespace walkabout

#include "walkabout/report.hpp"

namespace walkabout {

using nlohmann::json;

const char* version() { return WALKABOUT_VERSION; }

json to_json(const MixingReport& r) {
  json curve = json::array();
  for (const auto& [step, l1] : r.curve) curve.push_back({step, l1});
  return {{"tau", r.tau},
          {"threshold", r.threshold},
          {"start_policy", to_string(r.start_policy)},
          {"curve", curve},
          {"governing_start", r.governing_start},
          {"starts_evaluated", r.starts_evaluated},
          {"monotone", r.monotone},
          {"lower_estimate", r.lower_estimate}};
}

json to_json(const EstimatorConfig& c) {
  json j = {{"epsilon", c.epsilon},         {"delta", c.delta},
            {"t_mix_hint", c.t_mix_hint},   {"d_max_bound", c.d_max_bound},
            {"d_min_hint", c.d_min_hint},   {"budget_mode", to_string(c.budget_mode)},
            {"d_avg_hint", nullptr}};
  if (c.d_avg_hint) j["d_avg_hint"] = *c.d_avg_hint;
  return j;
}

json to_json(const EstimateOutcome& o) {
  return {{"value", o.value},
          {"queries_used", o.queries_used},
          {"steps_taken", o.steps_taken},
          {"truncated", o.truncated},
          {"d_avg_from_pilot", o.d_avg_from_pilot},
          {"d_avg_used", o.d_avg_used},
          {"samples", o.samples},
          {"accepted", o.accepted},
          {"collisions", o.collisions},
          {"schedule", o.schedule},
          {"formulas", o.formulas}};
}

json to_json(const DegreeStats& s) {
  return {{"n", s.num_vertices},
          {"edges", s.num_edges},
          {"d_avg", s.d_avg},
          {"edges_per_vertex", s.edges_per_vertex()},
          {"d_min", s.d_min},
          {"d_max", s.d_max}};
}

json to_json(const lab::RegimeCheck& r) {
  return {{"violated", r.violated()},
          {"d_floor", r.d_floor},
          {"t_ceiling", r.t_ceiling},
          {"message", r.message()}};
}

json to_json(const lab::TrialReport& r) {
  json j = {{"strategy", r.strategy},
            {"arm", r.arm},
            {"trial", r.trial},
            {"budget", r.budget},
            {"queries", r.queries_used},
            {"found", r.star_centers_found},
            {"observed", r.observed_nonqueried},
            {"estimate", nullptr},
            {"truth", nullptr}};
  if (r.estimate) j["estimate"] = *r.estimate;
  if (r.truth) j["truth"] = *r.truth;
  return j;
}

namespace {

json trials_json(std::span<const lab::TrialReport> trials) {
  json arr = json::array();
  for (const auto& t : trials) arr.push_back(to_json(t));
  return arr;
}

}  // namespace

json to_json(const lab::StarCurveReport& r, bool with_trials) {
  json curve = json::array();
  for (const auto& p : r.curve) {
    curve.push_back({{"strategy", p.strategy},
                     {"budget", p.budget},
                     {"trials", p.trials},
                     {"fraction_found", p.fraction_found},
                     {"mean_found", p.mean_found},
                     {"predicted_mean", p.predicted_mean}});
  }
  json j = {{"regime", to_json(r.regime)},
            {"psi", r.psi_used},
            {"curve", curve},
            {"monotone", r.monotone}};
  if (with_trials) j["trials"] = trials_json(r.trials);
  return j;
}

json to_json(const lab::DistinguishReport& r, bool with_trials) {
  auto arm = [](const lab::ArmSummary& a) {
    return json{{"trials", a.trials},
                {"accurate", a.accurate},
                {"accuracy", a.accuracy},
                {"mean_truth", a.mean_truth},
                {"mean_estimate", a.mean_estimate}};
  };
  json j = {{"regime", to_json(r.regime)},
            {"budget", r.budget},
            {"G1", arm(r.decorated)},
            {"G2", arm(r.undecorated)},
            {"order_ratio", r.order_ratio},
            {"indistinguishable", r.indistinguishable}};
  if (with_trials) j["trials"] = trials_json(r.trials);
  return j;
}

json to_json(const lab::BiasedReport& r, bool with_trials) {
  json points = json::array();
  for (const auto& p : r.points) {
    points.push_back({{"budget", p.budget},
                      {"trials", p.trials},
                      {"successes", p.successes},
                      {"success_rate", p.success_rate},
                      {"predicted_centers", p.predicted_centers},
                      {"mean_centers_found", p.mean_centers_found},
                      {"mean_starred_found", p.mean_starred_found},
                      {"below_requirement", p.below_requirement}});
  }
  json j = {{"regime", to_json(r.regime)},
            {"center_requirement", r.center_requirement},
            {"mean_gap", r.mean_gap},
            {"expected_gap", r.expected_gap},
            {"max_gap_deviation", r.max_gap_deviation},
            {"points", points}};
  if (with_trials) j["trials"] = trials_json(r.trials);
  return j;
}

json to_json(const lab::ObservedReport& r, bool with_trials) {
  json j = {{"observed_bound", r.observed_bound},
            {"edge_bound", r.edge_bound},
            {"bound_is_vacuous", r.bound_is_vacuous},
            {"p_observed", r.p_observed},
            {"edge_bound_rate", r.edge_bound_rate},
            {"mean_nontraversed", r.mean_nontraversed},
            {"mean_vertices", r.mean_vertices}};
  if (with_trials) j["trials"] = trials_json(r.trials);
  return j;
}

json to_json(const lab::DecoratedMixingRow& r) {
  return {{"t", r.t},
          {"psi", r.psi},
          {"base_vertices", r.base_vertices},
          {"decorated_vertices", r.decorated_vertices},
          {"tau_base", r.tau_base},
          {"tau_decorated", r.tau_decorated},
          {"ratio", r.ratio},
          {"lower_estimate", r.lower_estimate}};
}

json to_json(const lab::PsiMixingRow& r) {
  return {{"seed_index", r.seed_index}, {"taus", r.taus}, {"increasing", r.increasing}};
}

json to_json(const lab::ChernoffReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"c", row.c},
                    {"steps", row.steps},
                    {"empirical", row.empirical},
                    {"bound", row.bound}});
  }
  return {{"t_mix", r.t_mix}, {"d_max", r.d_max}, {"mu", r.mu}, {"rows", rows}};
}

json envelope(const std::string& command, std::uint64_t seed, const json& params,
              const json& result) {
  return {{"version", version()},
          {"command", command},
          {"seed", seed},
          {"params", params},
          {"result", result}};
}

namespace {

void write_optional(std::ostream& out, const std::optional<double>& v) {
  if (v) out << *v;
}

}  // namespace

void write_trials_csv(std::ostream& out, std::span<const lab::TrialReport> trials) {
  out << "strategy,arm,trial,budget,found,observed,queries,estimate,truth\n";
  const auto old_precision = out.precision(17);
  for (const auto& t : trials) {
    out << t.strategy << ',' << t.arm << ',' << t.trial << ',' << t.budget << ','
        << t.star_centers_found << ',' << t.observed_nonqueried << ',' << t.queries_used << ',';
    write_optional(out, t.estimate);
    out << ',';
    write_optional(out, t.truth);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace walkabout

// walkabout: graph generation, oracle-only estimators, mixing analysis, lower-bound
// experiments and the crawl server.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "walkabout/chains.hpp"
#include "walkabout/crawl_net.hpp"
#include "walkabout/error.hpp"
#include "walkabout/estimators.hpp"
#include "walkabout/generators.hpp"
#include "walkabout/graph_io.hpp"
#include "walkabout/lab.hpp"
#include "walkabout/oracle.hpp"
#include "walkabout/report.hpp"

namespace {

using nlohmann::json;
using namespace walkabout;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRegime = 3;
constexpr int kExitRuntime = 4;

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  unsigned jobs = 0;
  bool strict = false;
};

struct GraphInput {
  std::string edges;
  std::string labels;
};

std::string default_labels_path(const std::string& edges) {
  std::filesystem::path p(edges);
  if (p.extension() == ".edges") p.replace_extension(".labels.json");
  else p += ".labels.json";
  return p.string();
}

LoadedGraph load_input(const GraphInput& in) {
  std::string labels = in.labels;
  if (labels.empty()) {
    const std::string guess = default_labels_path(in.edges);
    if (std::filesystem::exists(guess)) labels = guess;
  }
  return load_graph(in.edges, labels);
}

void add_graph_input(CLI::App* cmd, GraphInput& in, bool required = true) {
  auto* opt = cmd->add_option("--in", in.edges, "Edge-list file");
  if (required) opt->required();
  cmd->add_option("--labels", in.labels, "Label sidecar (default: <in>.labels.json when present)");
}

// Writes text to --out or stdout.
void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) fail(ErrorCode::Io, "cannot write " + g.out);
  f << text;
}

void emit_json(const Globals& g, const json& j) { emit(g, j.dump(2) + "\n"); }

std::string trials_csv(std::span<const lab::TrialReport> trials) {
  std::ostringstream os;
  write_trials_csv(os, trials);
  return os.str();
}

int regime_exit(const Globals& g, const lab::RegimeCheck& r) {
  if (!r.violated()) return kExitOk;
  std::cerr << "warning: parameter regime: " << r.message() << "\n";
  return g.strict ? kExitRegime : kExitOk;
}

std::vector<std::size_t> parse_sizes(const std::string& csv) {
  std::vector<std::size_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  return out;
}

// ------------------------------------------------------------------ gen

struct GenArgs {
  std::size_t n = 1000;
  double d = 20;
  std::optional<double> p;
  double psi = 0.5;
  bool giant = false;
  std::size_t t = 50;
  std::size_t c1 = 1;
  std::string prefix = "graph";
  GraphInput input;
};

void save_with_meta(const GenArgs& a, const Graph& g, std::span<const Edge> bridges, json meta,
                    const Globals& gl) {
  meta["seed"] = gl.seed;
  meta["version"] = version();
  save_graph(a.prefix + ".edges", a.prefix + ".labels.json", g, bridges, meta);
  emit_json(gl, {{"edges", a.prefix + ".edges"},
                 {"labels", a.prefix + ".labels.json"},
                 {"stats", to_json(degree_stats(g))},
                 {"bridges", bridges.size()},
                 {"meta", meta}});
}

void setup_gen(CLI::App& app, GenArgs& a, Globals& gl, std::function<int()>& action) {
  auto* gen = app.add_subcommand("gen", "Generate graph files (<prefix>.edges + <prefix>.labels.json)");
  gen->require_subcommand(1);

  auto* er = gen->add_subcommand("er", "Erdos-Renyi G(n, p) with p = d/n unless --p is given");
  er->add_option("--n", a.n)->check(CLI::PositiveNumber);
  er->add_option("--d", a.d, "Expected degree");
  er->add_option("--p", a.p, "Edge probability");
  er->add_flag("--giant", a.giant, "Keep the largest component instead of retrying");
  er->add_option("--prefix", a.prefix);
  er->callback([&] {
    action = [&] {
      Rng rng(gl.seed);
      const double p = a.p ? *a.p : a.d / static_cast<double>(a.n);
      GenOptions opts;
      if (a.giant) opts.policy = ConnectivityPolicy::GiantComponent;
      const Graph g = gen_erdos_renyi(a.n, p, rng, opts);
      save_with_meta(a, g, {}, {{"generator", "er"}, {"n", a.n}, {"p", p}}, gl);
      return kExitOk;
    };
  });

  auto* br = gen->add_subcommand("bridged", "Two G(n, d/n) halves joined by floor(psi n) matching edges");
  br->add_option("--n", a.n)->check(CLI::PositiveNumber);
  br->add_option("--d", a.d);
  br->add_option("--psi", a.psi);
  br->add_flag("--giant", a.giant);
  br->add_option("--prefix", a.prefix);
  br->callback([&] {
    action = [&] {
      Rng rng(gl.seed);
      GenOptions opts;
      if (a.giant) opts.policy = ConnectivityPolicy::GiantComponent;
      const BridgedPair h = gen_bridged_pair(a.n, a.d, a.psi, rng, opts);
      save_with_meta(a, h.graph, h.bridges,
                     {{"generator", "bridged"}, {"n", a.n}, {"d", a.d}, {"psi", h.psi}}, gl);
      return kExitOk;
    };
  });

  auto* dec = gen->add_subcommand("decorate", "Attach hidden stars to a base graph");
  add_graph_input(dec, a.input);
  dec->add_option("--t", a.t)->check(CLI::PositiveNumber);
  dec->add_option("--c1", a.c1)->check(CLI::PositiveNumber);
  dec->add_option("--prefix", a.prefix);
  dec->callback([&] {
    action = [&] {
      const LoadedGraph in = load_input(a.input);
      Rng rng(gl.seed);
      const Graph g = decorate(in.graph, {a.t, a.c1}, rng);
      json meta = {{"generator", "decorate"}, {"t", a.t}, {"c1", a.c1}, {"base", in.meta}};
      save_with_meta(a, g, in.bridges, meta, gl);
      return kExitOk;
    };
  });

  auto* reg = gen->add_subcommand("regular", "Random d-regular graph");
  reg->add_option("--n", a.n)->check(CLI::PositiveNumber);
  reg->add_option("--d", a.d);
  reg->add_option("--prefix", a.prefix);
  reg->callback([&] {
    action = [&] {
      Rng rng(gl.seed);
      const Graph g = gen_random_regular(a.n, static_cast<std::size_t>(a.d), rng);
      save_with_meta(a, g, {}, {{"generator", "regular"}, {"n", a.n}, {"d", a.d}}, gl);
      return kExitOk;
    };
  });
}

// ------------------------------------------------------------------ estimate

struct EstimateArgs {
  GraphInput input;
  std::string remote;
  std::string graph_id = "default";
  std::string alg = "mdw";
  std::string method = "maxdeg";
  double eps = 0.1;
  double delta = 0.1;
  std::optional<std::size_t> tmix;
  std::optional<std::size_t> D;
  std::size_t dmin = 1;
  std::optional<double> davg;
  std::optional<std::size_t> budget;
  bool truncate = false;
  std::optional<VertexId> seed_vertex;
  std::size_t samples = 1000;
  std::size_t draws = 1;
};

json estimate_params(const EstimateArgs& a, const EstimatorConfig& cfg) {
  json j = {{"in", a.input.edges}, {"remote", a.remote}, {"config", to_json(cfg)}};
  if (a.budget) j["budget"] = *a.budget;
  if (a.seed_vertex) j["seed_vertex"] = *a.seed_vertex;
  return j;
}

int run_estimate(const std::string& what, EstimateArgs& a, const Globals& gl) {
  EstimatorConfig cfg;
  cfg.epsilon = a.eps;
  cfg.delta = a.delta;
  cfg.d_min_hint = a.dmin;
  cfg.d_avg_hint = a.davg;
  cfg.budget_mode = a.truncate ? BudgetMode::Truncate : BudgetMode::Fail;

  Rng rng(gl.seed);
  std::optional<LoadedGraph> local;
  std::unique_ptr<NeighborOracle> oracle;
  std::unique_ptr<net::RemoteOracle> remote_handle;
  if (!a.remote.empty()) {
    if (!a.tmix || !a.D) {
      throw CLI::ValidationError("--remote", "remote runs need --tmix and --D (the graph is hidden)");
    }
    net::RemoteOptions opts;
    opts.budget = a.budget;
    opts.seed_hint = a.seed_vertex;
    auto r = std::make_unique<net::RemoteOracle>(a.remote, a.graph_id, opts);
    oracle = std::move(r);
  } else {
    if (a.input.edges.empty()) throw CLI::ValidationError("--in", "either --in or --remote is required");
    local = load_input(a.input);
    const Graph& g = local->graph;
    const VertexId seed =
        a.seed_vertex ? *a.seed_vertex : static_cast<VertexId>(rng.below(g.num_vertices()));
    oracle = std::make_unique<ExplorationOracle>(g, seed, OracleOptions{a.budget, rng.next(), false});
  }
  // Local convenience defaults: exact lazy-walk t_mix and the true maximum degree.
  if (local) {
    const Graph& g = local->graph;
    if (!a.D) a.D = degree_stats(g).d_max;
    if (!a.tmix) {
      a.tmix = mixing_time(g, ChainKernel::lazy_simple(), 0.25,
                           g.num_vertices() <= 2000 ? StartPolicy::worst_case()
                                                    : StartPolicy::sampled(32, gl.seed),
                           MixingOptions{200000, 2000, gl.jobs})
                   .tau;
      a.tmix = std::max<std::size_t>(*a.tmix, 1);
    }
  }
  cfg.t_mix_hint = *a.tmix;
  cfg.d_max_bound = *a.D;

  json result;
  if (what == "avg") {
    EstimateOutcome o;
    if (a.alg == "mdw") o = mdw_average(*oracle, cfg, rng);
    else if (a.alg == "metropolis") o = metropolis_average(*oracle, cfg, rng);
    else if (a.alg == "rejection") o = rejection_average(*oracle, cfg, rng);
    else if (a.alg == "weighted") o = weighted_average(*oracle, cfg, rng);
    else throw CLI::ValidationError("--alg", "expected mdw, metropolis, rejection or weighted");
    result = to_json(o);
    result["algorithm"] = a.alg;
    if (local) result["truth"] = f_average(local->graph);
  } else if (what == "order") {
    result = to_json(katzir_order(*oracle, cfg, a.samples, rng));
    if (local) result["truth"] = local->graph.num_vertices();
  } else if (what == "degree") {
    result = to_json(avg_degree(*oracle, cfg, rng));
    if (local) result["truth"] = degree_stats(local->graph).d_avg;
  } else {
    const SampleMethod m = a.method == "rejection" ? SampleMethod::Rejection : SampleMethod::MaxDegreeWalk;
    json draws = json::array();
    for (std::size_t i = 0; i < a.draws; ++i) {
      const SampleOutcome s = uniform_sample(*oracle, cfg, m, rng);
      json d = {{"ref", net::RemoteOracle::format_ref(s.vertex)},
                {"steps", s.steps_taken},
                {"attempts", s.attempts}};
      if (auto* lo = dynamic_cast<ExplorationOracle*>(oracle.get())) {
        d["vertex"] = OracleAudit::hidden_id(*lo, s.vertex);
      }
      draws.push_back(d);
    }
    result = {{"method", to_string(m)}, {"draws", draws}, {"queries_used", oracle->query_count()}};
  }
  if (auto* r = dynamic_cast<net::RemoteOracle*>(oracle.get())) {
    result["server_queries_used"] = r->server_queries_used();
  }
  json params = estimate_params(a, cfg);
  params["alg"] = a.alg;
  params["samples"] = a.samples;
  params["draws"] = a.draws;
  params["method"] = a.method;
  if (gl.format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "value,queries_used,steps_taken\n"
       << result.value("value", 0.0) << ',' << result.value("queries_used", std::size_t{0}) << ','
       << result.value("steps_taken", std::size_t{0}) << '\n';
    emit(gl, os.str());
  } else {
    emit_json(gl, envelope("estimate " + what, gl.seed, params, result));
  }
  return kExitOk;
}

void setup_estimate(CLI::App& app, EstimateArgs& a, Globals& gl, std::function<int()>& action) {
  auto* est = app.add_subcommand("estimate", "Run an oracle-only estimator");
  est->require_subcommand(1);
  auto common = [&](CLI::App* c) {
    add_graph_input(c, a.input, false);
    c->add_option("--remote", a.remote, "Crawl server address, e.g. http://127.0.0.1:8080");
    c->add_option("--graph-id", a.graph_id);
    c->add_option("--eps", a.eps);
    c->add_option("--delta", a.delta);
    c->add_option("--tmix", a.tmix, "Mixing-time hint (default: exact, local graphs only)");
    c->add_option("--D", a.D, "Maximum-degree bound (default: true d_max, local graphs only)");
    c->add_option("--dmin", a.dmin);
    c->add_option("--davg", a.davg, "Average-degree hint (default: pilot estimate)");
    c->add_option("--budget", a.budget, "Distinct-query budget");
    c->add_flag("--truncate", a.truncate, "Return a partial estimate when the budget runs out");
    c->add_option("--seed-vertex", a.seed_vertex);
  };
  auto* avg = est->add_subcommand("avg", "Average of the vertex function f");
  common(avg);
  avg->add_option("--alg", a.alg)->check(CLI::IsMember({"mdw", "metropolis", "rejection", "weighted"}));
  avg->callback([&] { action = [&] { return run_estimate("avg", a, gl); }; });

  auto* order = est->add_subcommand("order", "Collision-based vertex-count estimate");
  common(order);
  order->add_option("--samples", a.samples)->check(CLI::PositiveNumber);
  order->callback([&] { action = [&] { return run_estimate("order", a, gl); }; });

  auto* degree = est->add_subcommand("degree", "Average-degree estimate");
  common(degree);
  degree->callback([&] { action = [&] { return run_estimate("degree", a, gl); }; });

  auto* sample = est->add_subcommand("sample", "Near-uniform vertex samples");
  common(sample);
  sample->add_option("--method", a.method)->check(CLI::IsMember({"maxdeg", "rejection"}));
  sample->add_option("--draws", a.draws)->check(CLI::PositiveNumber);
  sample->callback([&] { action = [&] { return run_estimate("sample", a, gl); }; });
}

// ------------------------------------------------------------------ lab

struct LabArgs {
  std::size_t n = 4000;
  double d = 40;
  std::size_t t = 10;
  std::size_t c1 = 1;
  std::optional<double> psi;
  std::string budgets;
  std::size_t trials = 200;
  std::string strategies;
  std::string estimator = "order";
  double c = 20;
  std::optional<std::size_t> budget;
  double eps = 0.2;
  double delta = 0.1;
  std::size_t q = 30;
  double threshold = 0.25;
  std::string kernel = "lazy";
  std::optional<std::size_t> D;
  std::string start = "worst";
  std::size_t starts = 32;
  bool with_trials = false;
  GraphInput input;
  std::string ts = "5,10,20";
  std::string psis = "0.8,0.4,0.2";
  std::size_t seeds = 5;
  std::string cs = "20,50,100";
};

json lab_params(const LabArgs& a) {
  return {{"n", a.n}, {"d", a.d}, {"t", a.t}, {"c1", a.c1}, {"psi", a.psi ? json(*a.psi) : json()},
          {"budgets", a.budgets}, {"trials", a.trials}, {"strategies", a.strategies},
          {"estimator", a.estimator}, {"c", a.c}, {"budget", a.budget ? json(*a.budget) : json()},
          {"eps", a.eps}, {"delta", a.delta}, {"q", a.q}};
}

// The lab subcommands share LabArgs; options a subcommand was not given fall back to
// that experiment's own defaults.
template <typename T, typename V>
void fallback(const CLI::App* c, const char* name, T& field, const V& value) {
  if (c->count(name) == 0) field = value;
}

void setup_lab(CLI::App& app, LabArgs& a, Globals& gl, std::function<int()>& action) {
  auto* labcmd = app.add_subcommand("lab", "Lower-bound and mixing experiments");
  labcmd->require_subcommand(1);
  auto family = [&](CLI::App* c) {
    c->add_option("--n", a.n, "Vertices per half of the bridged base graph")->check(CLI::PositiveNumber);
    c->add_option("--d", a.d);
    c->add_option("--t", a.t)->check(CLI::PositiveNumber);
    c->add_option("--psi", a.psi, "Bridge density (default d/t, clamped below 1)");
    c->add_option("--trials", a.trials);
    c->add_flag("--with-trials", a.with_trials, "Include per-trial rows in JSON output");
  };

  auto* stars = labcmd->add_subcommand("stars", "Star-center discovery rate per crawler and budget");
  family(stars);
  stars->add_option("--c1", a.c1);
  stars->add_option("--budgets", a.budgets, "Comma-separated budgets")->required();
  stars->add_option("--strategies", a.strategies, "Comma-separated crawler names (default all)");
  stars->callback([&] {
    action = [&] {
      lab::StarCurveParams p;
      p.n = a.n; p.d = a.d; p.t = a.t; p.c1 = a.c1; p.psi = a.psi;
      p.budgets = parse_sizes(a.budgets);
      p.trials = a.trials; p.seed = gl.seed; p.jobs = gl.jobs;
      if (!a.strategies.empty()) {
        p.strategies.clear();
        std::stringstream ss(a.strategies);
        std::string item;
        while (std::getline(ss, item, ',')) p.strategies.push_back(crawler_from_string(item));
      }
      const auto r = lab::star_discovery_curve(p);
      if (gl.format == "csv") emit(gl, trials_csv(r.trials));
      else emit_json(gl, envelope("lab stars", gl.seed, lab_params(a), to_json(r, a.with_trials)));
      return regime_exit(gl, r.regime);
    };
  });

  auto* dist = labcmd->add_subcommand("distinguish", "Decorated vs plain graph, order or average degree");
  family(dist);
  dist->add_option("--c1", a.c1);
  dist->add_option("--estimator", a.estimator)->check(CLI::IsMember({"order", "avg_degree"}));
  dist->add_option("--c", a.c, "Budget is d t / c");
  dist->add_option("--budget", a.budget, "Explicit budget (overrides --c)");
  dist->add_option("--eps", a.eps);
  dist->callback([&] {
    action = [&] {
      lab::DistinguishParams p;
      p.n = a.n; p.d = a.d; p.t = a.t; p.c1 = a.c1; p.psi = a.psi; p.c = a.c;
      p.budget = a.budget; p.estimator = lab::lab_estimator_from_string(a.estimator);
      p.trials = a.trials; p.epsilon = a.eps; p.seed = gl.seed; p.jobs = gl.jobs;
      const auto r = lab::indistinguishability_experiment(p);
      if (gl.format == "csv") emit(gl, trials_csv(r.trials));
      else emit_json(gl, envelope("lab distinguish", gl.seed, lab_params(a), to_json(r, a.with_trials)));
      return regime_exit(gl, r.regime);
    };
  });

  auto* biased = labcmd->add_subcommand("biased", "F1 vs F2 biased-function experiment");
  family(biased);
  biased->add_option("--eps", a.eps);
  biased->add_option("--delta", a.delta);
  biased->add_option("--budgets", a.budgets);
  biased->callback([&] {
    action = [&] {
      lab::BiasedParams p;
      p.n = a.n; p.d = a.d; p.t = a.t; p.psi = a.psi; p.epsilon = a.eps; p.delta = a.delta;
      if (!a.budgets.empty()) p.budgets = parse_sizes(a.budgets);
      p.trials = a.trials; p.seed = gl.seed; p.jobs = gl.jobs;
      const auto r = lab::biased_function_experiment(p);
      if (gl.format == "csv") emit(gl, trials_csv(r.trials));
      else emit_json(gl, envelope("lab biased", gl.seed, lab_params(a), to_json(r, a.with_trials)));
      return regime_exit(gl, r.regime);
    };
  });

  auto* observed = labcmd->add_subcommand("observed", "Observed-but-unqueried vertices after q walk queries");
  observed->add_option("--n", a.n);
  observed->add_option("--d", a.d);
  observed->add_option("--psi", a.psi);
  observed->add_option("--q", a.q);
  observed->add_option("--trials", a.trials);
  observed->add_flag("--with-trials", a.with_trials);
  observed->callback([&, observed] {
    action = [&, observed] {
      lab::ObservedParams p;
      fallback(observed, "--n", a.n, p.n);
      fallback(observed, "--d", a.d, p.d);
      fallback(observed, "--trials", a.trials, p.trials);
      p.n = a.n; p.d = a.d; p.psi = a.psi.value_or(0.5); p.q = a.q; p.trials = a.trials;
      p.seed = gl.seed; p.jobs = gl.jobs;
      const auto r = lab::observed_vertex_audit(p);
      if (r.bound_is_vacuous) std::cerr << "warning: observed-vertex bound is at least 1\n";
      if (gl.format == "csv") emit(gl, trials_csv(r.trials));
      else emit_json(gl, envelope("lab observed", gl.seed, lab_params(a), to_json(r, a.with_trials)));
      return (r.bound_is_vacuous && gl.strict) ? kExitRegime : kExitOk;
    };
  });

  auto* mix = labcmd->add_subcommand("mix", "Exact mixing time of a graph file");
  add_graph_input(mix, a.input);
  mix->add_option("--threshold", a.threshold);
  mix->add_option("--kernel", a.kernel)->check(CLI::IsMember({"lazy", "maxdeg", "metropolis"}));
  mix->add_option("--D", a.D, "MaxDegree bound (default d_max)");
  mix->add_option("--start", a.start, "worst, sampled, or a vertex id");
  mix->add_option("--starts", a.starts, "Number of sampled starts");
  mix->callback([&] {
    action = [&] {
      const LoadedGraph in = load_input(a.input);
      const Graph& g = in.graph;
      const ChainKernel k = kernel_from_string(a.kernel, a.D.value_or(degree_stats(g).d_max));
      StartPolicy policy = StartPolicy::worst_case();
      if (a.start == "sampled") policy = StartPolicy::sampled(a.starts, gl.seed);
      else if (a.start != "worst") policy = StartPolicy::single(static_cast<VertexId>(std::stoul(a.start)));
      MixingOptions opts;
      opts.jobs = gl.jobs;
      const MixingReport r = mixing_time(g, k, a.threshold, policy, opts);
      if (gl.format == "csv") {
        std::ostringstream os;
        os.precision(17);
        os << "step,l1\n";
        for (const auto& [step, l1] : r.curve) os << step << ',' << l1 << '\n';
        emit(gl, os.str());
      } else {
        json params = {{"in", a.input.edges}, {"threshold", a.threshold}, {"kernel", to_string(k)},
                       {"start", a.start}, {"starts", a.starts}};
        emit_json(gl, envelope("lab mix", gl.seed, params, to_json(r)));
      }
      return kExitOk;
    };
  });

  auto* trend = labcmd->add_subcommand("mixtrend", "t_mix of decorated vs base graphs over t");
  trend->add_option("--n", a.n);
  trend->add_option("--d", a.d);
  trend->add_option("--c1", a.c1);
  trend->add_option("--ts", a.ts);
  trend->add_option("--psi", a.psi);
  trend->callback([&, trend] {
    action = [&, trend] {
      lab::DecoratedMixingParams p;
      fallback(trend, "--n", a.n, p.n);
      fallback(trend, "--d", a.d, p.d);
      p.n = a.n; p.d = a.d; p.c1 = a.c1; p.psi = a.psi; p.ts = parse_sizes(a.ts);
      p.seed = gl.seed; p.jobs = gl.jobs;
      json rows = json::array();
      for (const auto& r : lab::decorated_mixing_trend(p)) rows.push_back(to_json(r));
      emit_json(gl, envelope("lab mixtrend", gl.seed,
                             {{"n", a.n}, {"d", a.d}, {"c1", a.c1}, {"ts", a.ts}}, rows));
      return kExitOk;
    };
  });

  auto* psitrend = labcmd->add_subcommand("psitrend", "t_mix of bridged pairs over psi");
  psitrend->add_option("--n", a.n);
  psitrend->add_option("--d", a.d);
  psitrend->add_option("--psis", a.psis);
  psitrend->add_option("--seeds", a.seeds);
  psitrend->callback([&, psitrend] {
    action = [&, psitrend] {
      lab::PsiMixingParams p;
      fallback(psitrend, "--n", a.n, p.n);
      fallback(psitrend, "--d", a.d, p.d);
      p.n = a.n; p.d = a.d; p.seeds = a.seeds; p.seed = gl.seed; p.jobs = gl.jobs;
      p.psis.clear();
      std::stringstream ss(a.psis);
      std::string item;
      while (std::getline(ss, item, ',')) p.psis.push_back(std::stod(item));
      json rows = json::array();
      for (const auto& r : lab::psi_mixing_trend(p)) rows.push_back(to_json(r));
      emit_json(gl, envelope("lab psitrend", gl.seed,
                             {{"n", a.n}, {"d", a.d}, {"psis", a.psis}, {"seeds", a.seeds}}, rows));
      return kExitOk;
    };
  });

  auto* chern = labcmd->add_subcommand("chernoff", "Deviation probabilities of MaxDegree walk averages");
  chern->add_option("--n", a.n);
  chern->add_option("--d", a.d);
  chern->add_option("--cs", a.cs);
  chern->add_option("--trials", a.trials);
  chern->callback([&, chern] {
    action = [&, chern] {
      lab::ChernoffParams p;
      fallback(chern, "--n", a.n, p.n);
      fallback(chern, "--d", a.d, p.d);
      fallback(chern, "--trials", a.trials, p.trials);
      p.n = a.n; p.d = a.d; p.trials = a.trials; p.seed = gl.seed; p.jobs = gl.jobs;
      p.cs.clear();
      for (std::size_t c : parse_sizes(a.cs)) p.cs.push_back(static_cast<double>(c));
      const auto r = lab::chernoff_check(p);
      emit_json(gl, envelope("lab chernoff", gl.seed,
                             {{"n", a.n}, {"d", a.d}, {"cs", a.cs}, {"trials", a.trials}}, to_json(r)));
      return kExitOk;
    };
  });
}

// ------------------------------------------------------------------ serve

struct ServeArgs {
  GraphInput input;
  std::string graph_id = "default";
  std::string host = "127.0.0.1";
  int port = 8080;
  double rate = 1000.0;
  std::optional<std::size_t> cap;
  int latency_ms = 0;
};

void setup_serve(CLI::App& app, ServeArgs& a, Globals&, std::function<int()>& action) {
  auto* serve = app.add_subcommand("serve", "Serve a graph over the crawl protocol");
  add_graph_input(serve, a.input);
  serve->add_option("--graph-id", a.graph_id);
  serve->add_option("--host", a.host);
  serve->add_option("--port", a.port);
  serve->add_option("--rate", a.rate, "Queries per second per session")->check(CLI::PositiveNumber);
  serve->add_option("--cap", a.cap, "Distinct queries per session");
  serve->add_option("--latency-ms", a.latency_ms);
  serve->callback([&] {
    action = [&] {
      net::CrawlServerConfig cfg;
      cfg.host = a.host;
      cfg.port = a.port;
      cfg.rate_limit = a.rate;
      cfg.daily_cap = a.cap;
      cfg.latency_ms = a.latency_ms;
      net::CrawlServer server(cfg);
      server.add_graph(a.graph_id, load_input(a.input).graph);
      server.start();
      std::cerr << "serving '" << a.graph_id << "' at " << server.address() << std::endl;
      server.wait();
      return kExitOk;
    };
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"walkabout: random-walk estimators over neighbor-query oracles"};
  app.set_version_flag("--version", std::string(walkabout::version()));
  app.require_subcommand(1);

  Globals gl;
  app.add_option("--seed", gl.seed, "Master seed (WALKABOUT_SEED overrides)");
  app.add_option("--out", gl.out, "Output file (default stdout)");
  app.add_option("--format", gl.format)->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", gl.jobs, "Worker threads (0 = all cores)");
  app.add_flag("--strict", gl.strict, "Exit 3 on parameter-regime warnings");

  std::function<int()> action;
  GenArgs gen_args;
  EstimateArgs est_args;
  LabArgs lab_args;
  ServeArgs serve_args;
  setup_gen(app, gen_args, gl, action);
  setup_estimate(app, est_args, gl, action);
  setup_lab(app, lab_args, gl, action);
  setup_serve(app, serve_args, gl, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (const char* env = std::getenv("WALKABOUT_SEED")) {
    try {
      gl.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: WALKABOUT_SEED is not an integer\n";
      return kExitUsage;
    }
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const walkabout::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

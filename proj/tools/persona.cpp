// Copyright 2026 The Persona Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point: replay, learn, experiment, simulate,
// plot-weighting and serve.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "persona/persona.hpp"
#include "persona/service.hpp"

namespace fs = std::filesystem;
using persona::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitDegenerate = 3;

struct Globals {
  std::uint64_t seed = 1;
  std::string grid;
  std::string out;
  bool strict = false;
  std::string format = "json";
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw persona::ValidationError("invalid_number", "not a number: '" + text + "'");
  }
  return v;
}

std::vector<double> to_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item));
  return out;
}

// "s=0.1,0.3;r=1,2" with either half optional.
persona::ParamGrid parse_grid(const std::string& text) {
  persona::ParamGrid grid = persona::ParamGrid::standard();
  for (const auto& part : split(text, ';')) {
    const auto eq = part.find('=');
    const std::string key = part.substr(0, eq);
    if (eq == std::string::npos || (key != "s" && key != "r")) {
      throw persona::ValidationError("invalid_grid", "grid must look like 's=0.1,0.5;r=1,2'");
    }
    (key == "s" ? grid.s_values : grid.r_values) = to_doubles(part.substr(eq + 1));
  }
  for (const auto& p : grid.points()) (void)p;
  if (grid.size() == 0) throw persona::ValidationError("invalid_grid", "grid is empty");
  return grid;
}

Json grid_to_json(const persona::ParamGrid& g) { return Json{{"s", g.s_values}, {"r", g.r_values}}; }

std::vector<int> to_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : to_doubles(text)) out.push_back(static_cast<int>(v));
  return out;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    persona::write_file(g.out, text);
  }
}

fs::path manifest_path(const fs::path& out, const std::string& command) {
  const fs::path dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
  return dir / ("manifest-" + command + ".json");
}

std::string world_table(const persona::BeliefState& b) {
  std::string out;
  const auto& lang = b.language();
  for (std::uint64_t m = lang.world_count(); m-- > 0;) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  %.6f  ", b[m]);
    out += buf + persona::World(lang, m).label(lang) + "\n";
  }
  return out;
}

int cmd_replay(const Globals& g, const std::string& trace_file, const std::string& method_name, double s, double r,
               bool recorded) {
  const persona::DialogueTrace trace = persona::read_trace_file(trace_file);
  const persona::Method method = persona::parse_method(method_name);
  std::ostringstream table;
  Json out;
  out["participant"] = trace.participant;
  out["method"] = persona::to_string(method);
  if (method == persona::Method::kHa) {
    const auto beliefs = persona::ha_beliefs(trace, persona::dialogue_graph(trace, trace.events.size() - 1));
    out["argument_beliefs"] = beliefs;
    for (const auto& [id, p] : beliefs) table << id << "  " << persona::format_fixed(p, 6) << "\n";
  } else {
    persona::ReplaySpec spec{method, persona::WeightingParams(s, r), recorded};
    out["params"] = persona::params_to_json(spec.params);
    const auto beliefs = persona::replay_beliefs(trace, spec);
    Json steps = Json::array();
    for (std::size_t i = 1; i < beliefs.size(); ++i) {
      const auto& b = beliefs[i];
      const auto& e = trace.events[i - 1];
      Json step;
      step["t"] = e.timestep;
      step["argument"] = e.argument_id;
      if (method == persona::Method::kPersona || method == persona::Method::kGeneric) {
        step["probability"] = e.confidence ? Json(persona::event_probability(e, spec)) : Json(nullptr);
      }
      step["belief"] = persona::belief_to_json(b);
      Json cands = Json::array();
      for (const auto& c : trace.candidate_models) {
        cands.push_back(Json{{"id", c.id}, {"probability", persona::round_significant(persona::probability_of(b, c.worlds))}});
      }
      step["candidates"] = cands;
      std::vector<std::string> order;
      for (std::size_t idx : persona::rank_candidates(b, trace.candidate_models).order()) {
        order.push_back(trace.candidate_models[idx].id);
      }
      step["ranking"] = order;
      steps.push_back(std::move(step));
      table << "t" << e.timestep << " " << e.argument_id << (b.warning() ? " (empty block)" : "") << "\n"
            << world_table(b);
    }
    out["steps"] = std::move(steps);
  }
  emit(g, g.format == "table" ? table.str() : out.dump(2) + "\n");
  if (!g.out.empty()) {
    persona::RunManifest man;
    man.command = "replay";
    man.config = Json{{"trace", trace_file}, {"method", method_name}, {"s", s}, {"r", r}, {"recorded", recorded}};
    man.dataset_hash = persona::hex64(persona::fnv1a64(persona::read_file(trace_file)));
    man.outputs = {g.out};
    man.write(manifest_path(g.out, "replay"));
  }
  return kExitOk;
}

int cmd_learn(const Globals& g, const std::string& data, int k, bool pooled) {
  const persona::Dataset ds = persona::load_dataset(data);
  const persona::ParamGrid grid = g.grid.empty() ? persona::ParamGrid::standard() : parse_grid(g.grid);
  Json out;
  int skipped = 0;
  int undefined = 0;
  if (pooled) {
    const auto lp = persona::learn_params_pooled(ds.traces, k, grid);
    out = persona::learned_to_json(lp);
    skipped = lp.rounds_skipped;
    undefined = lp.undefined_correlations;
  } else {
    out = Json::array();
    for (const auto& t : ds.traces) {
      const auto lp = persona::learn_params(t, k, grid);
      out.push_back(persona::learned_to_json(lp));
      skipped += lp.rounds_skipped;
      undefined += lp.undefined_correlations;
    }
  }
  emit(g, out.dump(2) + "\n");
  if (!g.out.empty()) {
    persona::RunManifest man;
    man.command = "learn";
    man.config = Json{{"data", data}, {"k", k}, {"pooled", pooled}, {"grid", grid_to_json(grid)}};
    man.dataset_hash = ds.hash;
    man.outputs = {g.out};
    man.counts = {{"rounds_skipped", skipped}, {"undefined_correlations", undefined}};
    man.write(manifest_path(g.out, "learn"));
  }
  return g.strict && undefined > 0 ? kExitDegenerate : kExitOk;
}

std::vector<persona::Method> parse_methods(const std::string& text) {
  std::vector<persona::Method> out;
  for (const auto& m : split(text, ',')) out.push_back(persona::parse_method(m));
  return out;
}

int cmd_experiment(const Globals& g, const std::string& data, const std::string& which, const std::string& ks,
                   int k_prime, const std::string& rounds, const std::string& methods) {
  const persona::Dataset ds = persona::load_dataset(data);
  const persona::ParamGrid grid = g.grid.empty() ? persona::ParamGrid::standard() : parse_grid(g.grid);
  Json config{{"data", data}, {"which", which}, {"grid", grid_to_json(grid)}};
  persona::ExperimentReport rep;
  if (which == "1") {
    persona::Experiment1Config cfg;
    if (!ks.empty()) cfg.ks = to_ints(ks);
    cfg.k_prime = k_prime;
    cfg.grid = grid;
    config["k_list"] = cfg.ks;
    config["k_prime"] = cfg.k_prime;
    rep = persona::run_experiment_1(ds.traces, cfg);
  } else if (which == "2.1") {
    persona::Experiment21Config cfg;
    if (!rounds.empty()) cfg.rounds = to_ints(rounds);
    if (!methods.empty()) cfg.methods = parse_methods(methods);
    cfg.grid = grid;
    config["rounds"] = cfg.rounds;
    rep = persona::run_experiment_2_1(ds.traces, cfg);
  } else if (which == "2.2") {
    persona::Experiment22Config cfg;
    if (!methods.empty()) cfg.methods = parse_methods(methods);
    cfg.grid = grid;
    rep = persona::run_experiment_2_2(ds.traces, cfg);
  } else {
    throw persona::ValidationError("invalid_experiment", "experiment must be 1, 2.1 or 2.2");
  }
  if (!methods.empty()) config["methods"] = methods;
  const std::string md = persona::report_markdown(rep);
  if (g.out.empty()) {
    std::cout << (g.format == "csv" ? persona::buckets_csv(rep) + "\n" + persona::ttests_csv(rep) : md);
  } else {
    const fs::path dir = g.out;
    const std::vector<std::pair<std::string, std::string>> files = {
        {rep.name + "_buckets.csv", persona::buckets_csv(rep)},
        {rep.name + "_ttests.csv", persona::ttests_csv(rep)},
        {rep.name + ".md", md}};
    persona::RunManifest man;
    man.command = "experiment";
    man.config = config;
    man.seed = g.seed;
    man.dataset_hash = ds.hash;
    for (const auto& [name, text] : files) {
      persona::write_file(dir / name, text);
      man.outputs.push_back((dir / name).string());
    }
    man.counts = rep.counts;
    man.write(dir / "manifest.json");
  }
  const auto degenerate = [&](const char* key) {
    auto it = rep.counts.find(key);
    return it != rep.counts.end() && it->second > 0;
  };
  return g.strict && (degenerate("degenerate_ttests") || degenerate("undefined_rho")) ? kExitDegenerate : kExitOk;
}

int cmd_simulate(const Globals& g, const std::string& scenario_file, std::size_t n, const std::string& params_mode,
                 double noise, int rounds) {
  if (g.out.empty()) throw persona::ValidationError("missing_field", "simulate needs --out DIR");
  const persona::Scenario sc = persona::read_scenario_file(scenario_file);
  const persona::ParamGrid grid = g.grid.empty() ? persona::ParamGrid::standard() : parse_grid(g.grid);
  std::optional<persona::WeightingParams> planted;
  if (params_mode != "grid") {
    const auto v = to_doubles(params_mode);
    if (v.size() != 2) throw persona::ValidationError("invalid_params", "--params takes 'grid' or 's,r'");
    planted = persona::WeightingParams(v[0], v[1]);
  }
  const auto members = persona::plan_cohort(n, g.seed, grid, planted);
  const auto traces = persona::generate_cohort(sc, members, noise, rounds);
  const fs::path dir = g.out;
  Json truth = Json::object();
  persona::RunManifest man;
  man.command = "simulate";
  man.seed = g.seed;
  man.config = Json{{"scenario", scenario_file}, {"n", n}, {"params", params_mode}, {"noise", noise},
                    {"rounds", rounds}, {"grid", grid_to_json(grid)}};
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const fs::path file = dir / (members[i].participant + ".json");
    persona::write_trace_file(file, traces[i]);
    man.outputs.push_back(file.string());
    truth[members[i].participant] = Json{{"s", members[i].true_params.s()},
                                         {"r", members[i].true_params.r()},
                                         {"seed", members[i].seed},
                                         {"rounds", traces[i].completed_rounds()}};
  }
  persona::write_file(dir / "truth.json", truth.dump(2) + "\n");
  man.outputs.push_back((dir / "truth.json").string());
  man.write(dir / "manifest.json");
  std::cout << "wrote " << traces.size() << " traces to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_plot_weighting(const Globals& g, const std::string& pairs, double step) {
  if (!(step > 0.0 && step <= 0.5)) throw persona::ValidationError("invalid_step", "step must lie in (0, 0.5]");
  std::vector<persona::WeightingParams> params;
  for (const auto& pair : split(pairs, ';')) {
    const auto v = to_doubles(pair);
    if (v.size() != 2) throw persona::ValidationError("invalid_params", "pairs look like '0.5,1;0.3,3'");
    params.emplace_back(v[0], v[1]);
  }
  const auto count = static_cast<long>(std::llround(1.0 / step));
  std::string csv = "s,r,p,sigma\n";
  for (const auto& wp : params) {
    for (long i = 0; i <= count; ++i) {
      const double p = std::min(1.0, static_cast<double>(i) * step);
      char buf[128];
      std::snprintf(buf, sizeof buf, "%g,%g,%.6f,%.9f\n", wp.s(), wp.r(), p, persona::probability_to_confidence(p, wp));
      csv += buf;
    }
  }
  emit(g, csv);
  if (!g.out.empty()) {
    persona::RunManifest man;
    man.command = "plot-weighting";
    man.config = Json{{"pairs", pairs}, {"step", step}};
    man.outputs = {g.out};
    man.write(manifest_path(g.out, "plot-weighting"));
  }
  return kExitOk;
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

int cmd_serve(persona::ServiceConfig cfg) {
  persona::DialogueService service(std::move(cfg));
  const int port = service.bind();
  std::cout << "listening on port " << port << std::endl;
  return service.listen() ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Belief modelling from argumentation dialogues"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random draw");
  app.add_option("--grid", g.grid, "Parameter grid, e.g. 's=0.1,0.5;r=1,2'");
  app.add_option("--out", g.out, "Output file or directory");
  app.add_flag("--strict", g.strict, "Exit with 3 when statistics are degenerate");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "table", "csv", "md"}));

  std::string trace_file, method = "persona", data, which, ks, rounds, methods, scenario_file;
  std::string params_mode = "grid";
  std::string pairs = "0.5,1;0.5,2;0.5,3;0.3,3;0.7,3";
  double s = 0.5, r = 1.0, noise = 0.0, step = 0.01;
  int k = 3, k_prime = 4, sim_rounds = 5;
  std::size_t n = 50;
  bool recorded = false, pooled = false;

  auto* replay = app.add_subcommand("replay", "Replay a trace and print beliefs per step");
  replay->add_option("trace", trace_file, "Trace file")->required();
  replay->add_option("--method", method, "persona, generic, sbu, hm1, hm2 or ha");
  replay->add_option("--s", s, "Crossover point");
  replay->add_option("--r", r, "Distortion");
  replay->add_flag("--recorded", recorded, "Use the weighting recorded on each event");

  auto* learn = app.add_subcommand("learn", "Learn weighting parameters from a dataset");
  learn->add_option("data", data, "Trace directory or JSON-Lines file")->required();
  learn->add_option("--k", k, "Training rounds");
  learn->add_flag("--pooled", pooled, "One parameter pair for the whole dataset");

  auto* experiment = app.add_subcommand("experiment", "Run an evaluation experiment");
  experiment->add_option("data", data, "Trace directory or JSON-Lines file")->required();
  experiment->add_option("--which", which, "1, 2.1 or 2.2")->required();
  experiment->add_option("--k-list", ks, "Training budgets, e.g. 1,2,3");
  experiment->add_option("--k-prime", k_prime, "Evaluation round");
  experiment->add_option("--rounds", rounds, "Rounds to compare, e.g. 2,3,4,5");
  experiment->add_option("--methods", methods, "Comma-separated methods");

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic cohort");
  simulate->add_option("scenario", scenario_file, "Scenario file")->required();
  simulate->add_option("--n", n, "Participants");
  simulate->add_option("--params", params_mode, "'grid' or 's,r'");
  simulate->add_option("--noise", noise, "Ranking noise in [0, 1]");
  simulate->add_option("--rounds", sim_rounds, "Maximum rounds");

  auto* plot = app.add_subcommand("plot-weighting", "Sample the weighting curves as CSV");
  plot->add_option("--pairs", pairs, "Parameter pairs 's,r;s,r'");
  plot->add_option("--step", step, "Probability step");

  persona::ServiceConfig scfg;
  scfg.host = env_or("PERSONA_HOST", scfg.host);
  scfg.port = std::atoi(env_or("PERSONA_PORT", "8080").c_str());
  std::string scenario_dir = env_or("PERSONA_SCENARIO_DIR", "scenarios");
  std::string trace_dir = env_or("PERSONA_TRACE_DIR", "");
  std::string static_dir = env_or("PERSONA_STATIC_DIR", "");
  auto* serve = app.add_subcommand("serve", "Run the dialogue service");
  serve->add_option("--host", scfg.host, "Bind address");
  serve->add_option("--port", scfg.port, "Port, 0 for any free port");
  serve->add_option("--scenarios", scenario_dir, "Scenario directory");
  serve->add_option("--traces", trace_dir, "Where finished traces and event logs go");
  serve->add_option("--static", static_dir, "Static files for the web client");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*replay) return cmd_replay(g, trace_file, method, s, r, recorded);
    if (*learn) return cmd_learn(g, data, k, pooled);
    if (*experiment) return cmd_experiment(g, data, which, ks, k_prime, rounds, methods);
    if (*simulate) return cmd_simulate(g, scenario_file, n, params_mode, noise, sim_rounds);
    if (*plot) return cmd_plot_weighting(g, pairs, step);
    if (*serve) {
      scfg.scenario_dir = scenario_dir;
      scfg.trace_dir = trace_dir;
      scfg.static_dir = static_dir;
      return cmd_serve(scfg);
    }
  } catch (const persona::DegenerateStatistics& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return g.strict ? kExitDegenerate : kExitFailure;
  } catch (const persona::Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return e.code() == "bind_failed" ? kExitFailure : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

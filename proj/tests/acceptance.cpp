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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "http_support.hpp"
#include "test_support.hpp"

namespace {

using namespace persona;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Weighting curve written out directly from its definition.
double weighting_oracle(double p, double s, double r) {
  if (p > 0.5) return s + (1 - s) * std::pow(2 * p - 1, r);
  return s - s * std::pow(1 - 2 * p, r);
}

// Per-world transcription of the update rule.
std::vector<double> update_oracle(std::span<const double> prior, const WorldSet& block, double p) {
  double in = 0.0, out = 0.0;
  for (std::size_t m = 0; m < prior.size(); ++m) (block.contains(m) ? in : out) += prior[m];
  std::vector<double> post(prior.size());
  for (std::size_t m = 0; m < prior.size(); ++m) {
    post[m] = block.contains(m) ? prior[m] / in * p : prior[m] / out * (1 - p);
  }
  return post;
}

double quadrature_cdf(double t, double dof) {
  const double logc = std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2) - 0.5 * std::log(dof * std::numbers::pi);
  auto pdf = [&](double x) { return std::exp(logc - (dof + 1) / 2 * std::log1p(x * x / dof)); };
  const double a = std::abs(t);
  const int n = 20000;
  const double h = a / n;
  double sum = pdf(0) + pdf(a);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4 : 2) * pdf(i * h);
  return t >= 0 ? 0.5 + sum * h / 3 : 0.5 - sum * h / 3;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PERSONA_CLI) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

bool near_multiset(std::vector<double> got, std::vector<double> want, double tol) {
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (std::abs(got[i] - want[i]) > tol) return false;
  }
  return true;
}

Outcome worked_example() {
  Outcome o;
  const auto t0 = Clock::now();
  const DialogueTrace tr = testing::load_trace("example1");
  const WeightingParams params(0.5, 1.5);
  const double p = confidence_to_probability(0.6, params);
  const auto beliefs = replay_beliefs(tr, ReplaySpec{Method::kPersona, params, false});
  const double elapsed = seconds_since(t0);
  if (std::abs(p - 0.67) > 1e-3) o.fail("p = " + fmt("%.6f", p));
  const auto t1 = beliefs.at(1).probs();
  const auto t2 = beliefs.at(2).probs();
  if (!near_multiset({t1.begin(), t1.end()}, {0.335, 0.335, 0.055, 0.055, 0.055, 0.055, 0.055, 0.055}, 1e-3)) {
    o.fail("t1 posterior differs");
  }
  if (!near_multiset({t2.begin(), t2.end()}, {0.038, 0.038, 0.45, 0.45, 0.006, 0.006, 0.006, 0.006}, 1e-3)) {
    o.fail("t2 posterior differs");
  }
  if (elapsed >= 0.010) o.fail("took " + fmt("%.4f s", elapsed));
  if (o.pass) o.detail = "p=" + fmt("%.4f", p) + ", " + fmt("%.3f ms", elapsed * 1e3);
  return o;
}

Outcome appendix_table() {
  Outcome o;
  const DialogueTrace tr = testing::load_trace("appendix");
  auto table = [](const BeliefState& b) { return std::vector<double>{b[3], b[2], b[1], b[0]}; };
  const auto hm1 = replay_beliefs(tr, ReplaySpec{Method::kHm1});
  const auto hm2 = replay_beliefs(tr, ReplaySpec{Method::kHm2});
  if (table(hm1.at(1)) != std::vector<double>{0.5, 0.5, 0.0, 0.0}) o.fail("HM1 at t1");
  if (table(hm2.at(2)) != std::vector<double>{0.0, 0.0, 1.0, 0.0}) o.fail("HM2 at t2");
  const auto ha = ha_beliefs(tr, dialogue_graph(tr, tr.events.size() - 1));
  if (ha.at("A1") != 0.2 || ha.at("A2") != 0.6) o.fail("HA beliefs");
  if (o.pass) o.detail = "HM1 t1 (0.5,0.5,0,0), HM2 t2 (0,0,1,0), HA 0.2/0.6";
  return o;
}

Outcome weighting_properties() {
  Outcome o;
  double worst_roundtrip = 0.0, worst_oracle = 0.0, worst_scalar = 0.0;
  for (const auto& params : ParamGrid::standard().points()) {
    if (probability_to_confidence(0.5, params) != params.s()) o.fail("sigma(0.5) != s");
    for (int i = 0; i <= 1000; ++i) {
      const double p = i / 1000.0;
      const double offset = confidence_offset(p, params);
      worst_roundtrip = std::max(worst_roundtrip, std::abs(p - probability_from_offset(offset, params)));
      const double sigma = probability_to_confidence(p, params);
      if (sigma != params.s() + offset) o.fail("scalar confidence is not s + offset");
      worst_oracle = std::max(worst_oracle, std::abs(sigma - weighting_oracle(p, params.s(), params.r())));
      worst_scalar = std::max(worst_scalar, std::abs(p - confidence_to_probability(sigma, params)));
    }
  }
  if (worst_roundtrip >= 1e-9) o.fail("roundtrip error " + fmt("%.3e", worst_roundtrip));
  if (worst_oracle > 1e-15) o.fail("forward differs from definition by " + fmt("%.3e", worst_oracle));
  const WeightingParams id = WeightingParams::identity();
  for (int i = 0; i <= 1000; ++i) {
    const double p = i / 1000.0;
    if (std::abs(probability_to_confidence(p, id) - p) > 1e-15) o.fail("identity fails at p=" + fmt("%.3f", p));
  }
  const WeightingParams figure[] = {{0.5, 1}, {0.5, 2}, {0.5, 3}, {0.3, 3}, {0.7, 3}};
  for (const auto& params : figure) {
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double sigma = probability_to_confidence(i / 1000.0, params);
      if (!(sigma > prev)) o.fail("not increasing for (" + fmt("%g", params.s()) + ", " + fmt("%g", params.r()) + ")");
      prev = sigma;
    }
  }
  if (o.pass) {
    o.detail = "max roundtrip error " + fmt("%.2e", worst_roundtrip) +
               " over 72 x 1001 points (offset form; through a rounded scalar sigma the worst is " +
               fmt("%.2e", worst_scalar) + ")";
  }
  return o;
}

Outcome normalization_fuzz() {
  Outcome o;
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t updates = 0, degenerate = 0;
  double worst = 0.0;
  auto check = [&](const BeliefState& b) {
    worst = std::max(worst, std::abs(testing::sum_of(b) - 1.0));
    ++updates;
  };
  for (int trial = 0; trial < 1500; ++trial) {
    const Language lang = testing::small_language(1 + trial % 6);
    BeliefState b = testing::random_belief(lang, rng);
    for (int step = 0; step < 4; ++step) {
      const Argument block = testing::random_block_argument(lang, rng, "B");
      const Argument lit = testing::random_literal_argument(lang, rng, "L");
      const Argument other = testing::random_literal_argument(lang, rng, "K");
      const double conf = u(rng);
      const WeightingParams params(0.1 + 0.8 * u(rng), 1.0 + 7.0 * u(rng));
      BeliefState next = update_belief(b, block, confidence_to_probability(conf, params));
      check(next);
      check(sbu_update(b, block, conf));
      try {
        check(hm1_update(b, lit));
      } catch (const DegenerateUpdate&) {
        ++degenerate;
      }
      try {
        const AttackGraph g(std::vector<Argument>{other, lit});
        check(hm2_update(b, lit, g));
      } catch (const DegenerateUpdate&) {
        ++degenerate;
      }
      b = std::move(next);
    }
  }
  if (updates < 10000) o.fail("only " + std::to_string(updates) + " updates");
  if (worst >= 1e-9) o.fail("worst |sum - 1| = " + fmt("%.3e", worst));
  if (o.pass) {
    o.detail = std::to_string(updates) + " updates, worst |sum-1| " + fmt("%.2e", worst) + ", " +
               std::to_string(degenerate) + " degenerate HM updates rejected";
  }
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t compared = 0, exact = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20000; ++trial) {
    const Language lang = testing::small_language(1 + trial % 4);
    const BeliefState b = testing::random_belief(lang, rng);
    const Argument arg = testing::random_block_argument(lang, rng, "X");
    const double in = probability_of(b, arg.premise_worlds);
    const double out = probability_of(b, arg.premise_worlds.complement());
    if (in <= 0.0 || out <= 0.0) continue;
    const double p = u(rng);
    const auto want = update_oracle(b.probs(), arg.premise_worlds, p);
    const BeliefState got = update_belief(b, arg, p);
    bool same = true;
    for (std::size_t m = 0; m < want.size(); ++m) {
      worst = std::max(worst, std::abs(got[m] - want[m]));
      same = same && got[m] == want[m];
    }
    exact += same;
    ++compared;
  }
  if (worst >= 1e-12) o.fail("worst difference " + fmt("%.3e", worst));
  if (compared < 5000) o.fail("only " + std::to_string(compared) + " comparisons");
  if (o.pass) {
    o.detail = std::to_string(compared) + " updates, " + std::to_string(exact) + " bit-identical, worst " +
               fmt("%.2e", worst);
  }
  return o;
}

Outcome parameter_recovery() {
  Outcome o;
  const auto t0 = Clock::now();
  const Scenario sc = testing::load_scenario("luminara");
  const ParamGrid grid = ParamGrid::standard();
  const auto members = plan_cohort(50, 2026, grid);
  const auto traces = generate_cohort(sc, members, 0.0, 5);
  const auto t_learn = Clock::now();
  int recovered = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const LearnedParams lp = learn_params(traces[i], 3, grid);
    recovered += std::find(lp.maximizers.begin(), lp.maximizers.end(), members[i].true_params) != lp.maximizers.end();
  }
  const double learn_s = seconds_since(t_learn);
  const double total_s = seconds_since(t0);
  const double per_pair = learn_s / (50.0 * static_cast<double>(grid.size()));
  if (recovered != 50) o.fail("recovered " + std::to_string(recovered) + "/50");
  if (total_s >= 60.0) o.fail("took " + fmt("%.1f s", total_s));
  if (per_pair > 0.6) o.fail(fmt("%.3f s per pair", per_pair));
  if (sc.language.size() > 10) o.fail("scenario has more than 10 atoms");
  if (o.pass) {
    o.detail = "50/50 recovered, " + fmt("%.2f s total, ", total_s) + fmt("%.2e s per (s,r) pair", per_pair) +
               ", " + std::to_string(sc.language.size()) + " atoms";
  }
  return o;
}

Outcome statistics_correctness() {
  Outcome o;
  std::size_t perms = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<std::size_t> x(n);
    std::iota(x.begin(), x.end(), 0);
    std::vector<std::size_t> base = x;
    do {
      std::vector<std::size_t> y = base;
      do {
        double d2 = 0.0;
        std::vector<double> rx, ry;
        for (std::size_t i = 0; i < n; ++i) {
          d2 += std::pow(double(x[i]) - double(y[i]), 2);
          rx.push_back(double(x[i] + 1));
          ry.push_back(double(y[i] + 1));
        }
        const double closed = 1.0 - 6.0 * d2 / (double(n) * (double(n * n) - 1.0));
        const auto rho = spearman_rho(rx, ry);
        if (!rho || std::abs(*rho - closed) > 1e-12) o.fail("Spearman mismatch at n=" + std::to_string(n));
        ++perms;
      } while (std::next_permutation(y.begin(), y.end()));
    } while (n <= 5 && std::next_permutation(x.begin(), x.end()));
  }
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> tdist(-8.0, 8.0), ddist(1.0, 60.0);
  double worst_cdf = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = tdist(rng);
    const double dof = i % 2 ? std::floor(ddist(rng)) : ddist(rng);
    worst_cdf = std::max(worst_cdf, std::abs(student_t_cdf(t, dof) - quadrature_cdf(t, dof)));
  }
  if (worst_cdf >= 1e-8) o.fail("t CDF error " + fmt("%.3e", worst_cdf));
  std::normal_distribution<double> g(0.0, 1.0);
  double worst_anti = 0.0;
  for (int i = 0; i < 500; ++i) {
    std::vector<double> x(3 + i % 20), y(x.size());
    for (auto& v : x) v = g(rng);
    for (auto& v : y) v = g(rng) + 0.2;
    const double s = paired_t_test_one_sided(x, y).p_value + paired_t_test_one_sided(y, x).p_value;
    worst_anti = std::max(worst_anti, std::abs(s - 1.0));
  }
  if (worst_anti >= 1e-9) o.fail("antisymmetry error " + fmt("%.3e", worst_anti));
  if (o.pass) {
    o.detail = std::to_string(perms) + " permutation pairs, t CDF error " + fmt("%.2e", worst_cdf) +
               ", antisymmetry error " + fmt("%.2e", worst_anti);
  }
  return o;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

Outcome experiment_determinism(const fs::path& work) {
  Outcome o;
  const std::string data = (work / "cohort").string();
  const std::string scenario = (testing::source_dir() / "scenarios" / "luminara.json").string();
  if (run_cli("--seed 7 --out " + data + " simulate " + scenario + " --n 50 --params grid --noise 0") != 0) {
    o.fail("simulate failed");
    return o;
  }
  for (const char* out : {"run_a", "run_b"}) {
    if (run_cli("--seed 7 --out " + (work / out).string() + " experiment " + data + " --which 1") != 0) {
      o.fail("experiment failed");
      return o;
    }
  }
  for (const char* name : {"experiment_1_buckets.csv", "experiment_1_ttests.csv", "experiment_1.md"}) {
    if (read_file(work / "run_a" / name) != read_file(work / "run_b" / name)) o.fail(std::string(name) + " differs");
  }
  std::istringstream csv(read_file(work / "run_a" / "experiment_1_ttests.csv"));
  std::optional<double> p;
  for (std::string line; std::getline(csv, line);) {
    const auto f = split_csv(line);
    if (f.size() == 6 && f[1] == "D_3" && f[2] == "D_1" && !f[5].empty()) p = std::stod(f[5]);
  }
  if (!p) {
    o.fail("no D_3 vs D_1 test in the report");
  } else if (*p >= 0.05) {
    o.fail("D_3 > D_1 p = " + fmt("%.4g", *p));
  }
  if (o.pass) o.detail = "reports byte-identical, D_3 > D_1 p=" + fmt("%.3g", *p);
  return o;
}

Outcome service_replay() {
  Outcome o;
  ServiceConfig cfg;
  cfg.port = 0;
  cfg.scenario_dir = testing::source_dir() / "scenarios";
  testing::RunningService svc(cfg);
  auto client = svc.client();
  const testing::ScriptedPlan plan = testing::make_plan(svc.service().scenario("luminara"), 2026);
  const testing::HttpDialogue run = testing::run_plan_over_http(client, "luminara", plan);
  if (run.final_state.at("round") != 5) o.fail("session ran " + run.final_state.at("round").dump() + " rounds");
  const DialogueTrace tr = trace_from_json(run.trace);
  const BeliefState replayed = replay_final(tr, ReplaySpec{Method::kPersona, WeightingParams::identity(), true});
  const std::string live = run.final_state.at("belief_digest").get<std::string>();
  if (belief_digest(replayed) != live) o.fail("replay digest " + belief_digest(replayed) + " != live " + live);
  if (o.pass) o.detail = "5 rounds over HTTP, final belief digest " + live;
  return o;
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "persona_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"worked-example", worked_example},
      {"appendix-baselines", appendix_table},
      {"weighting-properties", weighting_properties},
      {"normalization-fuzz", normalization_fuzz},
      {"update-oracle", oracle_equivalence},
      {"parameter-recovery", parameter_recovery},
      {"statistics", statistics_correctness},
      {"experiment-determinism", [&] { return experiment_determinism(work); }},
      {"service-replay", service_replay},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  fs::remove_all(work);
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

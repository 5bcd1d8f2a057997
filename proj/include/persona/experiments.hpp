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

// Experiment runners: correlation distributions per method or training
// budget, and paired one-sided t-tests between every pair of them.

#ifndef PERSONA_EXPERIMENTS_HPP_
#define PERSONA_EXPERIMENTS_HPP_

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "persona/argumentation.hpp"
#include "persona/baselines.hpp"
#include "persona/belief.hpp"
#include "persona/error.hpp"
#include "persona/personalization.hpp"
#include "persona/ranking.hpp"
#include "persona/replay.hpp"
#include "persona/statistics.hpp"

namespace persona {

struct TTestCell {
  std::optional<TTestResult> result;
  std::size_t pairs = 0;  // participants where both values are defined
};

// cells[i][j] tests "row i outperforms column j"; the diagonal stays empty.
struct TTestMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<TTestCell>> cells;
  int degenerate = 0;
};

// One table: per-participant correlations for each label (method or D_k).
struct ReportSection {
  std::string title;
  std::vector<std::string> labels;
  std::vector<std::string> participants;
  std::vector<std::vector<std::optional<double>>> values;  // [label][participant]
  std::vector<std::optional<BucketHistogram>> histograms;
  std::vector<int> undefined;
  TTestMatrix ttests;
};

struct ExperimentReport {
  std::string name;
  std::vector<ReportSection> sections;
  std::map<std::string, int> counts;  // exclusions and skips by reason
};

inline TTestMatrix ttest_matrix(const std::vector<std::string>& labels,
                                const std::vector<std::vector<std::optional<double>>>& values) {
  TTestMatrix m;
  m.labels = labels;
  m.cells.assign(labels.size(), std::vector<TTestCell>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (i == j) continue;
      std::vector<double> x, y;
      for (std::size_t p = 0; p < values[i].size(); ++p) {
        if (values[i][p] && values[j][p]) {
          x.push_back(*values[i][p]);
          y.push_back(*values[j][p]);
        }
      }
      m.cells[i][j].pairs = x.size();
      try {
        m.cells[i][j].result = paired_t_test_one_sided(x, y);
      } catch (const DegenerateStatistics&) {
        ++m.degenerate;
      }
    }
  }
  return m;
}

inline void finish_section(ReportSection& sec) {
  sec.histograms.clear();
  sec.undefined.clear();
  for (const auto& column : sec.values) {
    std::vector<double> defined;
    int undef = 0;
    for (const auto& v : column) {
      if (v) {
        defined.push_back(*v);
      } else {
        ++undef;
      }
    }
    sec.undefined.push_back(undef);
    sec.histograms.push_back(defined.empty() ? std::nullopt : std::optional(bucket_report(defined)));
  }
  sec.ttests = ttest_matrix(sec.labels, sec.values);
}

inline double mean_of(const std::vector<std::optional<double>>& column) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : column) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

inline int last_ranked_round(const DialogueTrace& trace) {
  int last = 0;
  for (int t = 1; t <= trace.completed_rounds(); ++t) {
    if (trace.ranking_for(t)) last = t;
  }
  return last;
}

struct Experiment1Config {
  std::vector<int> ks{1, 2, 3};
  int k_prime = 4;
  ParamGrid grid = ParamGrid::standard();
};

// Learn on rounds 1..k for each k, evaluate at round k_prime.
inline ExperimentReport run_experiment_1(std::span<const DialogueTrace> dataset,
                                         const Experiment1Config& cfg = {}) {
  if (dataset.empty()) throw ValidationError("empty_dataset", "no traces to evaluate");
  for (int k : cfg.ks) {
    if (k < 1 || k >= cfg.k_prime) throw ValidationError("invalid_round", "each k must lie in [1, k_prime)");
  }
  ExperimentReport rep;
  rep.name = "experiment_1";
  ReportSection sec;
  sec.title = "Round " + std::to_string(cfg.k_prime);
  for (int k : cfg.ks) sec.labels.push_back("D_" + std::to_string(k));
  sec.values.resize(cfg.ks.size());
  for (const auto& trace : dataset) {
    if (!trace.ranking_for(cfg.k_prime) || trace.completed_rounds() < cfg.k_prime) {
      ++rep.counts["missing_round"];
      continue;
    }
    sec.participants.push_back(trace.participant);
    for (std::size_t i = 0; i < cfg.ks.size(); ++i) {
      std::optional<double> rho;
      try {
        rho = evaluate_round(trace, learn_params(trace, cfg.ks[i], cfg.grid), cfg.k_prime);
      } catch (const ValidationError& e) {
        if (e.code() != "no_rankings") throw;
        ++rep.counts["no_training_rankings"];
      }
      if (!rho) ++rep.counts["undefined_rho"];
      sec.values[i].push_back(rho);
    }
  }
  finish_section(sec);
  rep.counts["degenerate_ttests"] += sec.ttests.degenerate;
  rep.sections.push_back(std::move(sec));
  return rep;
}

struct Experiment21Config {
  std::vector<Method> methods{Method::kPersona, Method::kGeneric, Method::kSbu, Method::kHm1, Method::kHm2};
  std::vector<int> rounds{2, 3, 4, 5};
  ParamGrid grid = ParamGrid::standard();
};

// Model-ranking comparison per round. Parameters for round k are learned on
// rounds 1..k-1; a participant whose dialogue stopped earlier contributes its
// last ranked round instead.
inline ExperimentReport run_experiment_2_1(std::span<const DialogueTrace> dataset,
                                           const Experiment21Config& cfg = {}) {
  if (dataset.empty()) throw ValidationError("empty_dataset", "no traces to evaluate");
  for (Method m : cfg.methods) {
    if (m == Method::kHa) throw ValidationError("unknown_method", "ha does not rank models");
  }
  ExperimentReport rep;
  rep.name = "experiment_2_1";
  std::vector<bool> literal(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) literal[i] = has_literal_claims(dataset[i]);
  for (int k : cfg.rounds) {
    if (k < 1) throw ValidationError("invalid_round", "rounds start at 1");
    ReportSection sec;
    sec.title = "Round " + std::to_string(k);
    for (Method m : cfg.methods) sec.labels.emplace_back(to_string(m));
    sec.values.resize(cfg.methods.size());

    std::vector<std::size_t> members;
    std::vector<int> eff;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const int last = last_ranked_round(dataset[i]);
      if (last == 0) {
        ++rep.counts["no_rankings"];
        continue;
      }
      members.push_back(i);
      eff.push_back(std::min(k, last));
    }

    std::optional<WeightingParams> generic;
    auto generic_params = [&]() {
      if (!generic) {
        std::vector<DialogueTrace> pool;
        std::vector<int> ks;
        for (std::size_t m = 0; m < members.size(); ++m) {
          pool.push_back(dataset[members[m]]);
          ks.push_back(eff[m] - 1);
        }
        const bool any = std::any_of(ks.begin(), ks.end(), [](int v) { return v > 0; });
        generic = any ? learn_params_pooled(pool, ks, k - 1, cfg.grid).params : WeightingParams::identity();
      }
      return *generic;
    };

    for (std::size_t m = 0; m < members.size(); ++m) {
      const DialogueTrace& trace = dataset[members[m]];
      const int round = eff[m];
      const Ranking observed = observed_ranking(trace, *trace.ranking_for(round));
      sec.participants.push_back(trace.participant);
      for (std::size_t c = 0; c < cfg.methods.size(); ++c) {
        ReplaySpec spec{cfg.methods[c], WeightingParams::identity(), false};
        if (spec.method == Method::kPersona && round > 1) {
          try {
            spec.params = learn_params(trace, round - 1, cfg.grid).params;
          } catch (const ValidationError& e) {
            if (e.code() != "no_rankings") throw;
          }
        } else if (spec.method == Method::kGeneric) {
          spec.params = generic_params();
        } else if ((spec.method == Method::kHm1 || spec.method == Method::kHm2) && !literal[members[m]]) {
          ++rep.counts["hm_non_literal_" + sec.labels[c]];
          sec.values[c].push_back(std::nullopt);
          continue;
        }
        std::optional<double> rho;
        try {
          rho = spearman_rho(observed, round_rankings(trace, round, spec).back());
          if (!rho) ++rep.counts["undefined_rho"];
        } catch (const DegenerateUpdate&) {
          ++rep.counts["degenerate_update_" + sec.labels[c]];
        }
        sec.values[c].push_back(rho);
      }
    }
    finish_section(sec);
    rep.counts["degenerate_ttests"] += sec.ttests.degenerate;
    rep.sections.push_back(std::move(sec));
  }
  return rep;
}

struct Experiment22Config {
  std::vector<Method> methods{Method::kPersona, Method::kGeneric, Method::kSbu, Method::kHa};
  std::size_t min_ranked_arguments = 4;
  int generic_rounds = 3;
  ParamGrid grid = ParamGrid::standard();
};

// Scores used to rank the arguments of the final ranking. World-based methods
// use the probability of the premises; HA uses its case-based beliefs.
inline std::vector<double> final_argument_scores(const DialogueTrace& trace, const ReplaySpec& spec) {
  std::vector<double> scores;
  if (spec.method == Method::kHa) {
    const auto beliefs = ha_beliefs(trace, dialogue_graph(trace, trace.events.size() - 1));
    for (const auto& id : trace.final_argument_ranking) scores.push_back(beliefs.at(id));
    return scores;
  }
  const BeliefState b = replay_final(trace, spec);
  for (const auto& id : trace.final_argument_ranking) scores.push_back(probability_of_argument(b, trace.pool.at(id)));
  return scores;
}

inline bool human_ended(const DialogueTrace& trace) {
  return !trace.events.empty() && trace.events.back().speaker == Speaker::kHuman;
}

inline ExperimentReport run_experiment_2_2(std::span<const DialogueTrace> dataset,
                                           const Experiment22Config& cfg = {}) {
  if (dataset.empty()) throw ValidationError("empty_dataset", "no traces to evaluate");
  ExperimentReport rep;
  rep.name = "experiment_2_2";
  std::vector<DialogueTrace> kept;
  for (const auto& trace : dataset) {
    if (!human_ended(trace)) {
      ++rep.counts["filtered_agent_ended"];
    } else if (trace.final_argument_ranking.size() < cfg.min_ranked_arguments) {
      ++rep.counts["filtered_short_argument_ranking"];
    } else {
      kept.push_back(trace);
    }
  }
  rep.counts["kept"] = static_cast<int>(kept.size());

  ReportSection sec;
  sec.title = "Final argument beliefs";
  for (Method m : cfg.methods) sec.labels.emplace_back(to_string(m));
  sec.values.resize(cfg.methods.size());

  std::optional<WeightingParams> generic;
  auto generic_params = [&]() {
    if (!generic) {
      try {
        generic = learn_params_pooled(kept, cfg.generic_rounds, cfg.grid).params;
      } catch (const ValidationError& e) {
        if (e.code() != "no_rankings" && e.code() != "empty_dataset") throw;
        generic = WeightingParams::identity();
      }
    }
    return *generic;
  };

  for (const auto& trace : kept) {
    sec.participants.push_back(trace.participant);
    std::vector<std::size_t> order(trace.final_argument_ranking.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const Ranking observed = Ranking::from_order(order);
    const bool literal = has_literal_claims(trace);
    for (std::size_t c = 0; c < cfg.methods.size(); ++c) {
      ReplaySpec spec{cfg.methods[c], WeightingParams::identity(), false};
      if (spec.method == Method::kPersona) {
        const int k = std::min(trace.completed_rounds(), last_ranked_round(trace)) - 1;
        if (k > 0) {
          try {
            spec.params = learn_params(trace, k, cfg.grid).params;
          } catch (const ValidationError& e) {
            if (e.code() != "no_rankings") throw;
          }
        }
      } else if (spec.method == Method::kGeneric) {
        spec.params = generic_params();
      } else if ((spec.method == Method::kHm1 || spec.method == Method::kHm2) && !literal) {
        ++rep.counts["hm_non_literal_" + sec.labels[c]];
        sec.values[c].push_back(std::nullopt);
        continue;
      }
      std::optional<double> rho;
      try {
        rho = spearman_rho(observed, Ranking::from_scores(final_argument_scores(trace, spec)));
        if (!rho) ++rep.counts["undefined_rho"];
      } catch (const DegenerateUpdate&) {
        ++rep.counts["degenerate_update_" + sec.labels[c]];
      }
      sec.values[c].push_back(rho);
    }
  }
  finish_section(sec);
  rep.counts["degenerate_ttests"] += sec.ttests.degenerate;
  rep.sections.push_back(std::move(sec));
  return rep;
}

inline std::string format_fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string format_p(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, p < 1e-3 ? "%.3e" : "%.3f", p);
  return buf;
}

inline std::string buckets_csv(const ExperimentReport& rep) {
  std::ostringstream out;
  out << "section,label,n,undefined,mean";
  for (const char* b : kBucketLabels) out << ",\"" << b << "\"";
  out << "\n";
  for (const auto& sec : rep.sections) {
    for (std::size_t i = 0; i < sec.labels.size(); ++i) {
      const auto& h = sec.histograms[i];
      out << sec.title << "," << sec.labels[i] << "," << (h ? h->total : 0) << "," << sec.undefined[i] << ","
          << format_fixed(mean_of(sec.values[i]));
      for (std::size_t b = 0; b < kBucketCount; ++b) out << "," << (h ? format_fixed(h->fractions[b]) : "");
      out << "\n";
    }
  }
  return out.str();
}

inline std::string ttests_csv(const ExperimentReport& rep) {
  std::ostringstream out;
  out << "section,row,column,pairs,t,p_value\n";
  for (const auto& sec : rep.sections) {
    const auto& m = sec.ttests;
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
      for (std::size_t j = 0; j < m.labels.size(); ++j) {
        if (i == j) continue;
        const auto& cell = m.cells[i][j];
        out << sec.title << "," << m.labels[i] << "," << m.labels[j] << "," << cell.pairs << ",";
        if (cell.result) {
          out << format_fixed(cell.result->t, 6) << "," << format_p(cell.result->p_value);
        } else {
          out << ",";
        }
        out << "\n";
      }
    }
  }
  return out.str();
}

inline std::string report_markdown(const ExperimentReport& rep) {
  std::ostringstream out;
  out << "# " << rep.name << "\n";
  for (const auto& sec : rep.sections) {
    out << "\n## " << sec.title << "\n\n| Method | n |";
    for (const char* b : kBucketLabels) out << " " << b << " |";
    out << " mean |\n|---|---|";
    for (std::size_t b = 0; b < kBucketCount; ++b) out << "---|";
    out << "---|\n";
    for (std::size_t i = 0; i < sec.labels.size(); ++i) {
      const auto& h = sec.histograms[i];
      out << "| " << sec.labels[i] << " | " << (h ? h->total : 0) << " |";
      for (std::size_t b = 0; b < kBucketCount; ++b) out << " " << (h ? format_fixed(h->fractions[b]) : "-") << " |";
      out << " " << format_fixed(mean_of(sec.values[i])) << " |\n";
    }
    out << "\nOne-sided paired t-tests, p for \"row outperforms column\":\n\n|  |";
    for (const auto& l : sec.labels) out << " " << l << " |";
    out << "\n|---|";
    for (std::size_t j = 0; j < sec.labels.size(); ++j) out << "---|";
    out << "\n";
    for (std::size_t i = 0; i < sec.labels.size(); ++i) {
      out << "| " << sec.labels[i] << " |";
      for (std::size_t j = 0; j < sec.labels.size(); ++j) {
        const auto& cell = sec.ttests.cells[i][j];
        if (i == j) {
          out << "  |";
        } else if (cell.result) {
          out << " " << format_p(cell.result->p_value) << " |";
        } else {
          out << " n/a |";
        }
      }
      out << "\n";
    }
  }
  if (!rep.counts.empty()) {
    out << "\n## Exclusions\n\n";
    for (const auto& [reason, n] : rep.counts) out << "- " << reason << ": " << n << "\n";
  }
  return out.str();
}

}  // namespace persona

#endif  // PERSONA_EXPERIMENTS_HPP_

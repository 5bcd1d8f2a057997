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

// HTTP/JSON front end for live dialogue sessions.

#ifndef PERSONA_SERVICE_HPP_
#define PERSONA_SERVICE_HPP_

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "httplib.h"
#include "persona/dialogue.hpp"
#include "persona/error.hpp"
#include "persona/json_io.hpp"

namespace persona {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path scenario_dir;
  std::filesystem::path trace_dir;   // empty: traces are not persisted
  std::filesystem::path static_dir;  // empty: no static files
};

inline Json argument_to_json(const Scenario& sc, std::size_t j) {
  const Argument& a = sc.graph.arguments()[j];
  Json premises = Json::array();
  for (const auto& p : a.premises) premises.push_back(to_string(p, sc.language));
  return Json{{"id", a.id},
              {"premises", premises},
              {"claim", to_string(a.claim, sc.language)},
              {"text", sc.texts[j]}};
}

inline Json session_to_json(const Session& s) {
  const Scenario& sc = s.scenario();
  Json j;
  j["id"] = s.id();
  j["scenario"] = sc.id;
  j["policy"] = to_string(s.policy().kind);
  j["phase"] = to_string(s.phase());
  j["round"] = s.completed_rounds();
  j["max_rounds"] = sc.max_rounds;
  j["confidence_scale"] = sc.scale == ConfidenceScale::kFivePoint ? "five_point" : "continuous";
  Json transcript = Json::array();
  for (const auto& e : s.events()) {
    Json item = argument_to_json(sc, sc.graph.index_of(e.argument_id));
    item["t"] = e.timestep;
    item["speaker"] = to_string(e.speaker);
    item["confidence"] = e.confidence ? Json(*e.confidence) : Json(nullptr);
    item["attacks"] = e.attacks ? Json(*e.attacks) : Json(nullptr);
    transcript.push_back(std::move(item));
  }
  j["transcript"] = std::move(transcript);
  Json offered = Json::array();
  if (s.phase() == Phase::kAwaitingCounter ||
      (s.phase() == Phase::kAwaitingConfidence && sc.show_counters_before_confidence)) {
    for (std::size_t idx : s.offered_counters()) offered.push_back(argument_to_json(sc, idx));
  }
  j["offered_counters"] = std::move(offered);
  Json cands = Json::array();
  const auto probs = s.candidate_probabilities();
  for (std::size_t c = 0; c < sc.candidate_models.size(); ++c) {
    const auto& nf = sc.candidate_models[c];
    cands.push_back(Json{{"id", nf.id},
                         {"formula", to_string(nf.formula, sc.language)},
                         {"text", nf.text},
                         {"probability", round_significant(probs[c])}});
  }
  j["candidates"] = std::move(cands);
  Json rankings = Json::array();
  for (const auto& r : s.rankings()) rankings.push_back(Json{{"round", r.round}, {"order", r.order}});
  j["rankings"] = std::move(rankings);
  j["belief"] = belief_to_json(s.belief());
  j["belief_digest"] = belief_digest(s.belief());
  j["live_params"] = params_to_json(s.live_params());
  j["learned"] = s.learned() ? learned_to_json(*s.learned()) : Json(nullptr);
  j["end_reason"] = s.end_reason() ? Json(*s.end_reason()) : Json(nullptr);
  return j;
}

class DialogueService {
 public:
  explicit DialogueService(ServiceConfig cfg) : cfg_(std::move(cfg)) {
    if (!cfg_.scenario_dir.empty()) load_scenario_dir(cfg_.scenario_dir);
    // The library default adds SO_REUSEPORT, which lets two servers share a port.
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    routes();
  }

  void load_scenario_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ValidationError("invalid_config", "no scenario directory '" + dir.string() + "'");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) add_scenario(read_scenario_file(f), true);
  }

  void add_scenario(Scenario sc, bool replace = false) {
    std::unique_lock lock(scenarios_mu_);
    if (!replace && scenarios_.count(sc.id)) {
      throw ValidationError("duplicate_scenario", "scenario '" + sc.id + "' is already loaded");
    }
    const std::string id = sc.id;
    scenarios_[id] = std::make_shared<const Scenario>(std::move(sc));
  }

  std::shared_ptr<const Scenario> scenario(const std::string& id) const {
    std::shared_lock lock(scenarios_mu_);
    auto it = scenarios_.find(id);
    if (it == scenarios_.end()) throw NotFound("unknown_scenario", "unknown scenario '" + id + "'");
    return it->second;
  }

  SessionStore& sessions() noexcept { return store_; }
  httplib::Server& server() noexcept { return server_; }

  // Binds the listening socket; fails rather than sharing a port.
  int bind() {
    if (cfg_.port == 0) {
      port_ = server_.bind_to_any_port(cfg_.host);
    } else {
      port_ = server_.bind_to_port(cfg_.host, cfg_.port) ? cfg_.port : -1;
    }
    if (port_ < 0) {
      throw Error("bind_failed", "cannot bind " + cfg_.host + ":" + std::to_string(cfg_.port));
    }
    return port_;
  }

  bool listen() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  int port() const noexcept { return port_; }

 private:
  static void send_json(httplib::Response& res, const Json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message,
                         const Json& phase) {
    send_json(res, Json{{"code", code}, {"message", message}, {"phase", phase}}, status);
  }

  // Runs `fn`, mapping library errors onto HTTP statuses. `session_id` names
  // the session whose phase goes into error bodies.
  template <typename F>
  void guarded(httplib::Response& res, const std::string& session_id, F&& fn) {
    auto phase_of = [&]() -> Json {
      if (session_id.empty()) return nullptr;
      try {
        return store_.with(session_id, [](Session& s) { return Json(to_string(s.phase())); });
      } catch (const Error&) {
        return nullptr;
      }
    };
    try {
      fn();
    } catch (const PhaseError& e) {
      send_error(res, 409, e.code(), e.what(), phase_of());
    } catch (const NotFound& e) {
      send_error(res, 404, e.code(), e.what(), phase_of());
    } catch (const Error& e) {
      send_error(res, 400, e.code(), e.what(), phase_of());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, 400, "invalid_json", e.what(), phase_of());
    }
  }

  static Json body_of(const httplib::Request& req) {
    if (req.body.empty()) return Json::object();
    Json j = parse_json(req.body, "request body");
    if (!j.is_object()) throw ValidationError("invalid_json", "request body must be a JSON object");
    return j;
  }

  static AgentPolicy policy_from_json(const Json& body) {
    if (!body.contains("policy") || body.at("policy").is_null()) return AgentPolicy::greedy();
    const Json& p = body.at("policy");
    const std::string kind = p.is_string() ? p.get<std::string>() : p.value("kind", std::string());
    if (kind == "greedy_believable") return AgentPolicy::greedy();
    if (kind == "scripted") {
      if (!p.is_object() || !p.contains("script")) {
        throw ValidationError("invalid_policy", "scripted policy needs a script");
      }
      return AgentPolicy::scripted(p.at("script").get<std::vector<std::string>>());
    }
    throw ValidationError("invalid_policy", "unknown policy '" + kind + "'");
  }

  // Appends unseen log entries and, once ended, the trace. Caller holds the session lock.
  void persist(const Session& s) {
    if (cfg_.trace_dir.empty()) return;
    std::size_t from = 0;
    {
      std::lock_guard lock(persist_mu_);
      from = log_written_[s.id()];
      log_written_[s.id()] = s.event_log().size();
    }
    std::filesystem::create_directories(cfg_.trace_dir);
    std::ofstream log(cfg_.trace_dir / (s.id() + ".events.jsonl"), std::ios::app | std::ios::binary);
    for (std::size_t i = from; i < s.event_log().size(); ++i) log << s.event_log()[i].dump() << "\n";
    if (s.phase() == Phase::kEnded) write_trace_file(cfg_.trace_dir / (s.id() + ".json"), s.trace());
  }

  template <typename F>
  void mutate(const httplib::Request& req, httplib::Response& res, F&& op) {
    const std::string id = req.matches[1];
    guarded(res, id, [&] {
      const Json body = body_of(req);
      Json state = store_.with(id, [&](Session& s) {
        op(s, body);
        persist(s);
        return session_to_json(s);
      });
      send_json(res, state);
    });
  }

  void routes() {
    server_.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, Json{{"status", "ok"}});
    });

    server_.Get("/api/scenarios", [this](const httplib::Request&, httplib::Response& res) {
      Json list = Json::array();
      std::shared_lock lock(scenarios_mu_);
      for (const auto& [id, sc] : scenarios_) {
        Json cands = Json::array();
        for (const auto& c : sc->candidate_models) cands.push_back(c.id);
        list.push_back(Json{{"id", id},
                            {"title", sc->title},
                            {"atoms", sc->language.atoms()},
                            {"arguments", sc->graph.size()},
                            {"candidate_models", cands},
                            {"max_rounds", sc->max_rounds}});
      }
      send_json(res, list);
    });

    server_.Post("/api/scenarios", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, "", [&] {
        Scenario sc = scenario_from_json(body_of(req));
        const std::string id = sc.id;
        add_scenario(std::move(sc));
        send_json(res, Json{{"id", id}}, 201);
      });
    });

    server_.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, "", [&] {
        const Json body = body_of(req);
        if (!body.contains("scenario_id")) throw ValidationError("missing_field", "missing 'scenario_id'");
        auto sc = scenario(body.at("scenario_id").get<std::string>());
        const std::string id =
            store_.create(std::move(sc), policy_from_json(body), body.value("participant", std::string()));
        Json state = store_.with(id, [&](Session& s) {
          persist(s);
          return session_to_json(s);
        });
        send_json(res, state, 201);
      });
    });

    server_.Get(R"(/api/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      guarded(res, id, [&] { send_json(res, store_.with(id, [](Session& s) { return session_to_json(s); })); });
    });

    server_.Get(R"(/api/sessions/([^/]+)/trace)", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      guarded(res, id, [&] {
        send_json(res, store_.with(id, [](Session& s) { return trace_to_json(s.trace()); }));
      });
    });

    server_.Post(R"(/api/sessions/([^/]+)/confidence)", [this](const httplib::Request& req, httplib::Response& res) {
      mutate(req, res, [](Session& s, const Json& body) {
        s.submit_confidence(internal::Require(body, "value").get<double>());
      });
    });

    server_.Post(R"(/api/sessions/([^/]+)/counter)", [this](const httplib::Request& req, httplib::Response& res) {
      mutate(req, res, [](Session& s, const Json& body) {
        s.submit_counter(internal::Require(body, "choice_id").get<std::string>(),
                         internal::Require(body, "confidence").get<double>());
      });
    });

    server_.Post(R"(/api/sessions/([^/]+)/ranking)", [this](const httplib::Request& req, httplib::Response& res) {
      mutate(req, res, [](Session& s, const Json& body) {
        s.submit_ranking(internal::Require(body, "order").get<std::vector<std::string>>());
      });
    });

    server_.Post(R"(/api/sessions/([^/]+)/end)", [this](const httplib::Request& req, httplib::Response& res) {
      mutate(req, res, [](Session& s, const Json& body) {
        s.end(body.value("reason", std::string("human_ended")),
              body.value("argument_ranking", std::vector<std::string>{}));
      });
    });

    if (!cfg_.static_dir.empty()) server_.set_mount_point("/", cfg_.static_dir.string());
  }

  ServiceConfig cfg_;
  httplib::Server server_;
  int port_ = -1;
  mutable std::shared_mutex scenarios_mu_;
  std::map<std::string, std::shared_ptr<const Scenario>> scenarios_;
  SessionStore store_;
  std::mutex persist_mu_;
  std::map<std::string, std::size_t> log_written_;
};

}  // namespace persona

#endif  // PERSONA_SERVICE_HPP_

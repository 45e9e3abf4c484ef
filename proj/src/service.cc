// Copyright 2026 The slotfill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "slotfill/service.h"

#include <cstdlib>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "slotfill/errors.h"
#include "slotfill/label.h"
#include "slotfill/text_norm.h"

namespace slotfill::service {

using nlohmann::json;

namespace {

json error_body(const std::string& status, const std::string& message,
                const std::string& field = "") {
  json j = {{"status", status}, {"error", message}};
  if (!field.empty()) j["field"] = field;
  return j;
}

std::optional<std::string> env_str(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

// Guards the in-flight counter so early returns release their slot.
class InFlightGuard {
 public:
  InFlightGuard(std::atomic<int>* counter, int limit) : counter_(counter) {
    admitted_ = counter_->fetch_add(1) < limit;
    if (!admitted_) counter_->fetch_sub(1);
  }
  ~InFlightGuard() {
    if (admitted_) counter_->fetch_sub(1);
  }
  bool admitted() const { return admitted_; }

 private:
  std::atomic<int>* counter_;
  bool admitted_ = false;
};

}  // namespace

void ServiceConfig::validate() const {
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
  if (request_timeout_s <= 0) throw ConfigError("request_timeout_s must be > 0");
  if (window.text_turns < 1) throw ConfigError("window.text_turns must be >= 1");
  if (window.context_turns < 0) throw ConfigError("window.context_turns must be >= 0");
  if (registry_path.empty()) throw ConfigError("registry_path is required");
  if (generation_backend.empty()) throw ConfigError("generation_backend is required");
}

ServiceConfig ServiceConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open service config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("service config " + path + ": " + e.what());
  }
  ServiceConfig c;
  c.listen_host = j.value("listen_host", c.listen_host);
  c.listen_port = j.value("listen_port", c.listen_port);
  c.generation_backend = j.value("generation_backend", c.generation_backend);
  c.extractor_backend = j.value("extractor_backend", c.extractor_backend);
  c.registry_path = j.value("registry_path", c.registry_path);
  if (j.contains("window")) {
    c.window.context_turns = j["window"].value("context", c.window.context_turns);
    c.window.text_turns = j["window"].value("text", c.window.text_turns);
  }
  c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
  c.request_timeout_s = j.value("request_timeout_s", c.request_timeout_s);
  c.session_ttl_s = j.value("session_ttl_s", c.session_ttl_s);
  return c;
}

void ServiceConfig::apply_env() {
  if (auto v = env_str("SLOTFILL_LISTEN")) listen_host = *v;
  if (auto v = env_str("SLOTFILL_PORT")) listen_port = std::atoi(v->c_str());
  if (auto v = env_str("SLOTFILL_BACKEND")) generation_backend = *v;
  if (auto v = env_str("SLOTFILL_EXTRACTOR")) extractor_backend = *v;
  if (auto v = env_str("SLOTFILL_REGISTRY")) registry_path = *v;
  if (auto v = env_str("SLOTFILL_MAX_IN_FLIGHT")) max_in_flight = std::atoi(v->c_str());
  if (auto v = env_str("SLOTFILL_TIMEOUT_S")) request_timeout_s = std::atof(v->c_str());
  if (auto v = env_str("SLOTFILL_SESSION_TTL_S")) session_ttl_s = std::atoi(v->c_str());
}

std::unique_ptr<GenerationBackend> make_generation_backend(const std::string& spec,
                                                           double timeout_s) {
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) {
    return std::make_unique<HttpGenerationBackend>(spec, timeout_s);
  }
  if (spec.rfind("replay:", 0) == 0) {
    return std::make_unique<ReplayBackend>(ReplayBackend::load(spec.substr(7)));
  }
  if (spec.rfind("oracle:", 0) == 0) {
    auto loaded = load_annotated(spec.substr(7));
    return std::make_unique<OracleBackend>(std::move(loaded.items));
  }
  if (spec.rfind("noisy-mock:", 0) == 0) {
    std::string rest = spec.substr(11);
    NoisyMockBackend::Options options;
    options.passing_junk = {{"Claim Number", "99999"}};
    size_t q = rest.find('?');
    if (q != std::string::npos) {
      std::string params = rest.substr(q + 1);
      rest = rest.substr(0, q);
      size_t pos = 0;
      while (pos < params.size()) {
        size_t amp = params.find('&', pos);
        std::string kv =
            amp == std::string::npos ? params.substr(pos) : params.substr(pos, amp - pos);
        size_t eq = kv.find('=');
        if (eq != std::string::npos) {
          std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
          if (k == "seed") options.seed = std::strtoull(v.c_str(), nullptr, 10);
          else if (k == "rate") options.violating_rate = std::atof(v.c_str());
        }
        if (amp == std::string::npos) break;
        pos = amp + 1;
      }
    }
    auto loaded = load_annotated(rest);
    return std::make_unique<NoisyMockBackend>(std::move(loaded.items), options);
  }
  throw ConfigError("unknown generation backend spec \"" + spec + "\"");
}

std::unique_ptr<prefilter::ExtractorBackend> make_extractor_backend(const std::string& spec,
                                                                    double timeout_s) {
  if (spec.empty() || spec == "builtin") return nullptr;
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) {
    return std::make_unique<HttpExtractorBackend>(spec, timeout_s);
  }
  throw ConfigError("unknown extractor backend spec \"" + spec + "\"");
}

SlotService::SlotService(ServiceConfig config, SlotRegistry registry)
    : config_(std::move(config)), registry_(registry) {
  backend_ = make_generation_backend(config_.generation_backend, config_.request_timeout_s);
  extractor_ = make_extractor_backend(config_.extractor_backend, config_.request_timeout_s);
  pipeline::PipelineConfig pc;
  pc.window = config_.window;
  pipeline_ = std::make_unique<pipeline::Pipeline>(registry_, *backend_, pc, extractor_.get());
  server_ = std::make_unique<httplib::Server>();
  last_sweep_ = std::chrono::steady_clock::now();
  install_routes();
}

SlotService::~SlotService() { stop(); }

std::shared_ptr<SlotService::SessionEntry> SlotService::get_or_create_session(
    const std::string& id) {
  std::lock_guard lock(sessions_mu_);
  auto it = sessions_.find(id);
  if (it != sessions_.end()) {
    it->second->last_seen = std::chrono::steady_clock::now();
    return it->second;
  }
  auto entry = std::make_shared<SessionEntry>();
  entry->session.transcript_id = id;
  entry->session.window = config_.window;
  entry->session.requested_labels = registry_.labels();
  entry->last_seen = std::chrono::steady_clock::now();
  sessions_[id] = entry;
  return entry;
}

void SlotService::evict_idle_sessions() {
  const auto now = std::chrono::steady_clock::now();
  std::lock_guard lock(sessions_mu_);
  if (now - last_sweep_ < std::chrono::seconds(60)) return;
  last_sweep_ = now;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second->last_seen > std::chrono::seconds(config_.session_ttl_s)) {
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

size_t SlotService::session_count() {
  std::lock_guard lock(sessions_mu_);
  return sessions_.size();
}

void SlotService::install_routes() {
  server_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });

  server_->Get("/v1/registry", [this](const httplib::Request&, httplib::Response& res) {
    json labels = json::array();
    for (const SlotLabelRecord& rec : registry_.snapshot()) {
      json jr = {{"label", rec.canonical},
                 {"kind", slot_kind_name(rec.kind)},
                 {"triggers", rec.triggers}};
      json rules = json::array();
      for (const auto& rule : rec.rules) rules.push_back(constraints::rule_to_json(rule));
      jr["constraints"] = rules;
      labels.push_back(jr);
    }
    res.set_content(json{{"labels", labels}}.dump(), "application/json");
  });

  server_->Post("/v1/slots/extract", [this](const httplib::Request& req,
                                            httplib::Response& res) {
    InFlightGuard guard(&in_flight_, config_.max_in_flight);
    if (!guard.admitted()) {
      res.status = 503;
      res.set_content(error_body("overloaded", "too many in-flight requests").dump(),
                      "application/json");
      return;
    }
    evict_idle_sessions();

    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      res.status = 400;
      res.set_content(error_body("invalid_request", "body is not a JSON object").dump(),
                      "application/json");
      return;
    }
    const std::string session_id = body.value("session_id", "");
    if (session_id.empty()) {
      res.status = 400;
      res.set_content(
          error_body("invalid_request", "missing or empty field", "session_id").dump(),
          "application/json");
      return;
    }
    if (!body.contains("turn") || !body["turn"].is_object()) {
      res.status = 400;
      res.set_content(error_body("invalid_request", "missing object field", "turn").dump(),
                      "application/json");
      return;
    }
    auto speaker = speaker_from_name(body["turn"].value("speaker", ""));
    if (!speaker) {
      res.status = 400;
      res.set_content(
          error_body("invalid_request", "speaker must be \"agent\" or \"customer\"",
                     "turn.speaker")
              .dump(),
          "application/json");
      return;
    }
    const std::string text = body["turn"].value("text", "");
    if (trim(text).empty()) {
      res.status = 400;
      res.set_content(
          error_body("invalid_request", "missing or empty field", "turn.text").dump(),
          "application/json");
      return;
    }

    auto entry = get_or_create_session(session_id);
    std::lock_guard session_lock(entry->mu);

    if (body.contains("labels") && body["labels"].is_array()) {
      std::vector<std::string> labels;
      for (const json& jl : body["labels"]) {
        if (jl.is_string()) labels.push_back(canonicalize_label(jl.get<std::string>()));
      }
      entry->session.requested_labels = std::move(labels);
    }
    if (body.contains("window") && body["window"].is_object()) {
      entry->session.window.context_turns =
          body["window"].value("context", entry->session.window.context_turns);
      entry->session.window.text_turns =
          body["window"].value("text", entry->session.window.text_turns);
    }

    Turn turn;
    turn.index = static_cast<int>(entry->session.history.size());
    turn.speaker = *speaker;
    turn.text = text;

    pipeline::PipelineResult result;
    try {
      result = pipeline_->process_turn(entry->session, turn);
    } catch (const ValidationError& e) {
      res.status = 400;
      res.set_content(error_body("invalid_request", e.what()).dump(), "application/json");
      return;
    }

    json frame = json::object();
    for (const auto& [label, values] : result.frame.entries) frame[label] = values;
    json timings = json::object();
    for (const auto& [stage, ms] : result.timings_ms) timings[stage] = ms;
    json out = {{"status", pipeline::turn_status_name(result.status)},
                {"turn_index", result.turn_index},
                {"frame", frame},
                {"narrowed_labels", result.narrowed_labels},
                {"timings_ms", timings},
                {"warnings", result.warnings}};
    if (result.status == pipeline::TurnStatus::Ok) {
      res.status = 200;
    } else {
      out["error"] = result.error;
      res.status = 502;
    }
    res.set_content(out.dump(), "application/json");
  });
}

bool SlotService::start() {
  if (config_.listen_port == 0) {
    port_ = server_->bind_to_any_port(config_.listen_host);
    if (port_ <= 0) return false;
  } else {
    if (!server_->bind_to_port(config_.listen_host, config_.listen_port)) return false;
    port_ = config_.listen_port;
  }
  serve_thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return true;
}

void SlotService::stop() {
  if (server_ && server_->is_running()) server_->stop();
  if (serve_thread_.joinable()) serve_thread_.join();
}

}  // namespace slotfill::service

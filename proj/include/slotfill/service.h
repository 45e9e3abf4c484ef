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
//
// HTTP surface over the pipeline. Sessions are implicit: the first request
// for a session id creates it; turn indices are assigned from the session's
// history. In-memory sessions with idle TTL eviction; explicit overload
// responses instead of unbounded queuing.

#ifndef SLOTFILL_SERVICE_H_
#define SLOTFILL_SERVICE_H_

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>

#include "slotfill/backend.h"
#include "slotfill/pipeline.h"
#include "slotfill/registry.h"

namespace httplib {
class Server;
}

namespace slotfill::service {

struct ServiceConfig {
  std::string listen_host = "127.0.0.1";
  int listen_port = 8080;  // 0 binds an ephemeral port
  std::string generation_backend;  // "http://...", "replay:<path>", "oracle:<path>", "noisy-mock:<path>"
  std::string extractor_backend;   // "" = built-in reference extractor, or "http://..."
  std::string registry_path;
  pipeline::WindowConfig window;
  int max_in_flight = 100;
  double request_timeout_s = 10.0;
  int session_ttl_s = 1800;

  void validate() const;  // throws ConfigError

  static ServiceConfig from_json_file(const std::string& path);
  // SLOTFILL_LISTEN, SLOTFILL_PORT, SLOTFILL_BACKEND, SLOTFILL_EXTRACTOR,
  // SLOTFILL_REGISTRY, SLOTFILL_MAX_IN_FLIGHT, SLOTFILL_TIMEOUT_S,
  // SLOTFILL_SESSION_TTL_S. Flag > env > file.
  void apply_env();
};

// Parses backend spec strings shared by the service and the CLI.
std::unique_ptr<GenerationBackend> make_generation_backend(const std::string& spec,
                                                           double timeout_s = 10.0);
std::unique_ptr<prefilter::ExtractorBackend> make_extractor_backend(const std::string& spec,
                                                                    double timeout_s = 10.0);

class SlotService {
 public:
  SlotService(ServiceConfig config, SlotRegistry registry);
  ~SlotService();

  SlotService(const SlotService&) = delete;
  SlotService& operator=(const SlotService&) = delete;

  // Binds and serves on a background thread. Returns false if the port
  // cannot be bound.
  bool start();
  void stop();

  int port() const { return port_; }
  size_t session_count();

 private:
  struct SessionEntry {
    std::mutex mu;  // serializes same-session turns
    pipeline::Session session;
    std::chrono::steady_clock::time_point last_seen;
  };

  void install_routes();
  std::shared_ptr<SessionEntry> get_or_create_session(const std::string& id);
  void evict_idle_sessions();

  ServiceConfig config_;
  SlotRegistry registry_;
  std::unique_ptr<GenerationBackend> backend_;
  std::unique_ptr<prefilter::ExtractorBackend> extractor_;
  std::unique_ptr<pipeline::Pipeline> pipeline_;

  std::mutex sessions_mu_;
  std::unordered_map<std::string, std::shared_ptr<SessionEntry>> sessions_;
  std::chrono::steady_clock::time_point last_sweep_;

  std::atomic<int> in_flight_{0};
  std::unique_ptr<httplib::Server> server_;
  std::thread serve_thread_;
  int port_ = 0;
};

}  // namespace slotfill::service

#endif  // SLOTFILL_SERVICE_H_

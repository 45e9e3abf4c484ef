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
// slotfill CLI: offline toolchain (annotate, gen-instruct, extract,
// evaluate, ablate) and the HTTP service (serve).

#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slotfill/annotate.h"
#include "slotfill/backend.h"
#include "slotfill/errors.h"
#include "slotfill/evaluation.h"
#include "slotfill/instructgen.h"
#include "slotfill/model.h"
#include "slotfill/pipeline.h"
#include "slotfill/registry.h"
#include "slotfill/service.h"

namespace {

using nlohmann::json;
using namespace slotfill;

volatile std::sig_atomic_t g_stop = 0;
void handle_signal(int) { g_stop = 1; }

void print_diagnostics(const std::vector<LineDiagnostic>& diagnostics,
                       const std::string& path) {
  for (const LineDiagnostic& d : diagnostics) {
    std::cerr << path << ":" << d.line << ": " << d.message << "\n";
  }
}

// "oracle" / "noisy-mock" without a path default to the given corpus file.
std::string resolve_backend_spec(std::string spec, const std::string& corpus_path,
                                 uint64_t seed, double rate) {
  if (spec == "oracle") return "oracle:" + corpus_path;
  if (spec == "noisy-mock") {
    return "noisy-mock:" + corpus_path + "?seed=" + std::to_string(seed) +
           "&rate=" + std::to_string(rate);
  }
  return spec;
}

int cmd_annotate(const std::string& in, const std::string& registry_path,
                 const std::string& backend_spec, const std::string& out,
                 const std::string& registry_out, size_t label_cap) {
  SlotRegistry registry = SlotRegistry::load(registry_path);
  auto backend = service::make_generation_backend(backend_spec);
  auto loaded = load_transcripts(in);
  print_diagnostics(loaded.diagnostics, in);

  std::vector<AnnotatedTranscript> annotated;
  size_t induced_total = 0;
  size_t warning_total = 0;
  annotate::AnnotateOptions options;
  options.label_cap = label_cap;
  for (const Transcript& t : loaded.items) {
    try {
      annotate::ParsedAnnotation parsed =
          annotate::annotate_transcript(t, registry, *backend, options);
      induced_total += parsed.induced.size();
      warning_total += parsed.warnings.size();
      for (const std::string& w : parsed.warnings) {
        std::cerr << t.id << ": " << w << "\n";
      }
      annotated.push_back(std::move(parsed.annotated));
    } catch (const Error& e) {
      std::cerr << t.id << ": " << e.what() << "\n";
    }
  }
  save_annotated(annotated, out);
  if (!registry_out.empty()) registry.save(registry_out);
  std::cout << "annotated " << annotated.size() << "/" << loaded.items.size()
            << " transcripts, induced " << induced_total << " labels, " << warning_total
            << " warnings\n";
  return annotated.size() == loaded.items.size() ? 0 : 1;
}

int cmd_gen_instruct(const std::string& in, const std::string& registry_path,
                     const std::string& out, const instructgen::GenConfig& config,
                     bool print_stats) {
  SlotRegistry registry = SlotRegistry::load(registry_path);
  auto loaded = load_annotated(in);
  print_diagnostics(loaded.diagnostics, in);

  std::ofstream os(out);
  if (!os) throw IoError("cannot write " + out);
  instructgen::GenStats stats;
  instructgen::generate_dataset(
      loaded.items, config, registry,
      [&os](const instructgen::InstructionSample& s) {
        os << instructgen::sample_to_json_line(s) << "\n";
      },
      &stats);

  if (print_stats) {
    json hist = json::object();
    for (const auto& [label, n] : stats.label_histogram) hist[label] = n;
    json j = {{"samples", stats.samples},
              {"warnings", stats.distractor_shortfalls},
              {"label_histogram", hist}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "wrote " << stats.samples << " samples to " << out << "\n";
  }
  return 0;
}

int cmd_extract(const std::string& in, const std::string& registry_path,
                const std::string& backend_spec, const std::string& out,
                const std::string& audit_path, const pipeline::PipelineConfig& config) {
  SlotRegistry registry = SlotRegistry::load(registry_path);
  auto backend = service::make_generation_backend(backend_spec);
  auto loaded = load_transcripts(in);
  print_diagnostics(loaded.diagnostics, in);

  std::ofstream os(out);
  if (!os) throw IoError("cannot write " + out);
  std::ofstream audit;
  if (!audit_path.empty()) {
    audit.open(audit_path);
    if (!audit) throw IoError("cannot write " + audit_path);
  }

  pipeline::Pipeline pipe(registry, *backend, config);
  size_t failures = 0;
  for (const Transcript& t : loaded.items) {
    pipeline::Session session;
    session.transcript_id = t.id;
    session.window = config.window;
    session.requested_labels = registry.labels();
    for (const Turn& turn : t.turns) {
      pipeline::PipelineResult r = pipe.process_turn(session, turn);
      if (r.status != pipeline::TurnStatus::Ok) ++failures;
      json frame = json::object();
      for (const auto& [label, values] : r.frame.entries) frame[label] = values;
      const std::string unit_id = t.id + "#" + std::to_string(turn.index);
      os << json{{"unit_id", unit_id}, {"frame", frame}}.dump() << "\n";
      if (audit.is_open()) {
        json timings = json::object();
        for (const auto& [stage, ms] : r.timings_ms) timings[stage] = ms;
        json verdicts = json::array();
        for (const auto& v : r.verdicts) {
          verdicts.push_back({{"value", v.value},
                              {"rule_id", v.rule_id},
                              {"passed", v.passed},
                              {"reason", v.reason}});
        }
        audit << json{{"unit_id", unit_id},
                      {"status", pipeline::turn_status_name(r.status)},
                      {"error", r.error},
                      {"frame", frame},
                      {"narrowed_labels", r.narrowed_labels},
                      {"verdicts", verdicts},
                      {"timings_ms", timings},
                      {"backend_raw", r.backend_raw}}
                     .dump()
              << "\n";
      }
    }
  }
  if (failures > 0) {
    std::cerr << failures << " turns failed (backend or parse)\n";
    return 1;
  }
  return 0;
}

int cmd_evaluate(const std::string& pred_path, const std::string& ref_path, bool semantic,
                 const std::string& report_path) {
  auto pred = eval::load_unit_frames(pred_path);
  auto ref = eval::load_unit_frames(ref_path);
  auto units = eval::align_units(pred, ref);

  eval::LexiconSemanticMatcher lexicon;
  eval::EvalOptions options;
  if (semantic) options.semantic = &lexicon;
  eval::EvalReport report = eval::evaluate(units, options);
  std::cout << eval::report_to_text(report);
  if (!report_path.empty()) {
    std::ofstream os(report_path);
    if (!os) throw IoError("cannot write " + report_path);
    os << eval::report_to_json(report) << "\n";
  }
  return 0;
}

int cmd_ablate(const std::string& corpus_path, const std::string& registry_path,
               std::string backend_spec, uint64_t seed, double rate) {
  SlotRegistry registry = SlotRegistry::load(registry_path);
  auto loaded = load_annotated(corpus_path);
  print_diagnostics(loaded.diagnostics, corpus_path);

  backend_spec = resolve_backend_spec(backend_spec, corpus_path, seed, rate);
  auto backend = service::make_generation_backend(backend_spec);

  std::printf("%-18s %10s %10s %10s %10s\n", "mode", "strict_f1", "lenient_p", "lenient_r",
              "lenient_f1");
  for (auto mode : {pipeline::AblationMode::PrefilterOnly,
                    pipeline::AblationMode::ConstraintsOnly, pipeline::AblationMode::Full}) {
    eval::EvalReport r = pipeline::run_ablation(loaded.items, mode, registry, *backend);
    std::printf("%-18s %10.4f %10.4f %10.4f %10.4f\n", pipeline::ablation_mode_name(mode),
                r.strict.f1, r.lenient.precision, r.lenient.recall, r.lenient.f1);
  }
  return 0;
}

int cmd_serve(service::ServiceConfig config) {
  config.validate();
  SlotRegistry registry = SlotRegistry::load(config.registry_path);
  service::SlotService svc(std::move(config), registry);
  if (!svc.start()) {
    std::cerr << "failed to bind\n";
    return 1;
  }
  std::cout << "listening on port " << svc.port() << "\n";
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  while (!g_stop) {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
  }
  svc.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-shot slot filling toolchain for conversational streams"};
  app.require_subcommand(1);

  // annotate
  std::string an_in, an_registry, an_backend, an_out, an_registry_out;
  size_t an_label_cap = 0;
  auto* annotate_cmd = app.add_subcommand("annotate", "teacher-annotate transcripts");
  annotate_cmd->add_option("--in", an_in, "transcripts (jsonl)")->required();
  annotate_cmd->add_option("--registry", an_registry, "registry seed (json)")->required();
  annotate_cmd->add_option("--backend", an_backend, "generation backend spec")->required();
  annotate_cmd->add_option("--out", an_out, "annotated output (jsonl)")->required();
  annotate_cmd->add_option("--registry-out", an_registry_out,
                           "write registry incl. induced labels here");
  annotate_cmd->add_option("--label-cap", an_label_cap, "max labels offered in the prompt");

  // gen-instruct
  std::string gi_in, gi_registry, gi_out;
  instructgen::GenConfig gi_config;
  bool gi_stats = false;
  auto* gen_cmd = app.add_subcommand("gen-instruct", "build the instruction dataset");
  gen_cmd->add_option("--in", gi_in, "annotated transcripts (jsonl)")->required();
  gen_cmd->add_option("--registry", gi_registry, "registry seed (json)")->required();
  gen_cmd->add_option("--out", gi_out, "dataset output (jsonl)")->required();
  gen_cmd->add_option("--seed", gi_config.seed, "random seed");
  gen_cmd->add_option("--context-min", gi_config.context_len_range.first, "min context turns");
  gen_cmd->add_option("--context-max", gi_config.context_len_range.second, "max context turns");
  gen_cmd->add_option("--text-min", gi_config.text_len_range.first, "min text turns");
  gen_cmd->add_option("--text-max", gi_config.text_len_range.second, "max text turns");
  gen_cmd->add_option("--distractors-min", gi_config.distractor_count_range.first,
                      "min distractors");
  gen_cmd->add_option("--distractors-max", gi_config.distractor_count_range.second,
                      "max distractors");
  gen_cmd->add_option("--samples-per-turn", gi_config.samples_per_turn, "samples per turn");
  gen_cmd->add_flag("--stats", gi_stats, "print sample/warning/label counts");

  // extract
  std::string ex_in, ex_registry, ex_backend, ex_out, ex_audit;
  pipeline::PipelineConfig ex_config;
  bool ex_no_prefilter = false, ex_no_constraints = false, ex_pass_through = false;
  auto* extract_cmd = app.add_subcommand("extract", "run the pipeline over transcripts");
  extract_cmd->add_option("--in", ex_in, "transcripts (jsonl)")->required();
  extract_cmd->add_option("--registry", ex_registry, "registry seed (json)")->required();
  extract_cmd->add_option("--backend", ex_backend, "generation backend spec")->required();
  extract_cmd->add_option("--out", ex_out, "per-turn frames (jsonl)")->required();
  extract_cmd->add_option("--audit", ex_audit, "full audit trail (jsonl)");
  extract_cmd->add_option("--context", ex_config.window.context_turns, "context turns");
  extract_cmd->add_option("--text", ex_config.window.text_turns, "text turns");
  extract_cmd->add_flag("--no-prefilter", ex_no_prefilter, "skip label narrowing");
  extract_cmd->add_flag("--no-constraints", ex_no_constraints, "skip constraint filtering");
  extract_cmd->add_flag("--pass-through-on-empty", ex_pass_through,
                        "query the backend even when narrowing is empty");

  // evaluate
  std::string ev_pred, ev_ref, ev_report;
  bool ev_semantic = false;
  auto* eval_cmd = app.add_subcommand("evaluate", "strict + lenient P/R/F1");
  eval_cmd->add_option("--pred", ev_pred, "predicted frames (jsonl)")->required();
  eval_cmd->add_option("--ref", ev_ref, "reference frames (jsonl)")->required();
  eval_cmd->add_flag("--semantic", ev_semantic, "enable the lexicon semantic matcher");
  eval_cmd->add_option("--report", ev_report, "write machine-readable report here");

  // ablate
  std::string ab_corpus, ab_registry, ab_backend = "noisy-mock";
  uint64_t ab_seed = 7;
  double ab_rate = 0.3;
  auto* ablate_cmd = app.add_subcommand("ablate", "prefilter/constraints/full comparison");
  ablate_cmd->add_option("--corpus", ab_corpus, "gold annotated corpus (jsonl)")->required();
  ablate_cmd->add_option("--registry", ab_registry, "registry seed (json)")->required();
  ablate_cmd->add_option("--backend", ab_backend, "oracle | noisy-mock | full spec");
  ablate_cmd->add_option("--seed", ab_seed, "noise seed");
  ablate_cmd->add_option("--rate", ab_rate, "noise injection rate");

  // serve
  std::string sv_config_path;
  service::ServiceConfig sv_config;
  std::string sv_listen, sv_backend, sv_extractor, sv_registry;
  int sv_port = -1, sv_max_in_flight = -1, sv_ttl = -1;
  double sv_timeout = -1;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  serve_cmd->add_option("--config", sv_config_path, "service config (json)");
  serve_cmd->add_option("--listen", sv_listen, "listen host");
  serve_cmd->add_option("--port", sv_port, "listen port (0 = ephemeral)");
  serve_cmd->add_option("--backend", sv_backend, "generation backend spec");
  serve_cmd->add_option("--extractor", sv_extractor, "extractor backend spec");
  serve_cmd->add_option("--registry", sv_registry, "registry seed (json)");
  serve_cmd->add_option("--max-in-flight", sv_max_in_flight, "backpressure limit");
  serve_cmd->add_option("--timeout", sv_timeout, "per-request timeout (s)");
  serve_cmd->add_option("--session-ttl", sv_ttl, "idle session ttl (s)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (annotate_cmd->parsed()) {
      return cmd_annotate(an_in, an_registry, an_backend, an_out, an_registry_out,
                          an_label_cap);
    }
    if (gen_cmd->parsed()) {
      return cmd_gen_instruct(gi_in, gi_registry, gi_out, gi_config, gi_stats);
    }
    if (extract_cmd->parsed()) {
      ex_config.narrow_with_prefilter = !ex_no_prefilter;
      ex_config.apply_constraints = !ex_no_constraints;
      ex_config.pass_through_on_empty_narrow = ex_pass_through;
      return cmd_extract(ex_in, ex_registry, ex_backend, ex_out, ex_audit, ex_config);
    }
    if (eval_cmd->parsed()) {
      return cmd_evaluate(ev_pred, ev_ref, ev_semantic, ev_report);
    }
    if (ablate_cmd->parsed()) {
      return cmd_ablate(ab_corpus, ab_registry, ab_backend, ab_seed, ab_rate);
    }
    if (serve_cmd->parsed()) {
      if (!sv_config_path.empty()) {
        sv_config = service::ServiceConfig::from_json_file(sv_config_path);
      }
      sv_config.apply_env();
      if (!sv_listen.empty()) sv_config.listen_host = sv_listen;
      if (sv_port >= 0) sv_config.listen_port = sv_port;
      if (!sv_backend.empty()) sv_config.generation_backend = sv_backend;
      if (!sv_extractor.empty()) sv_config.extractor_backend = sv_extractor;
      if (!sv_registry.empty()) sv_config.registry_path = sv_registry;
      if (sv_max_in_flight > 0) sv_config.max_in_flight = sv_max_in_flight;
      if (sv_timeout > 0) sv_config.request_timeout_s = sv_timeout;
      if (sv_ttl > 0) sv_config.session_ttl_s = sv_ttl;
      return cmd_serve(std::move(sv_config));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

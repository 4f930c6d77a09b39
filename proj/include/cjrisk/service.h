// Copyright 2026 The cjrisk Authors.
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

// Survey administration and what-if risk queries over HTTP+JSON.
//
//   POST /sessions                 {"respondent": id}          -> session
//   GET  /sessions/{id}                                        -> session
//   POST /sessions/{id}/consent                                -> session
//   GET  /sessions/{id}/next                                   -> pair | done
//   POST /sessions/{id}/choice     {"pair": k, "chosen": 1|2}  -> ack
//   GET  /responses                                            -> CSV
//   POST /whatif                   scenario                    -> RiskResult
//   POST /compare                  grid request                -> RiskGrid
//   GET  /estimate                                             -> estimate
//   GET  /schema, GET /presets
//
// Durable state lives in the bundle directory: answers are appended to
// responses.csv and session events to sessions.jsonl, so a restarted service
// resumes every session at its last acknowledged pair.

#ifndef CJRISK_SERVICE_H_
#define CJRISK_SERVICE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cjrisk/design.h"
#include "cjrisk/estimate.h"
#include "cjrisk/risk.h"
#include "cjrisk/schema.h"
#include "cjrisk/simulate.h"
#include "cjrisk/storage.h"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace cjrisk {

// Participant-facing wording. Editable data, not code.
struct DisplayTemplate {
  nlohmann::json doc;

  static DisplayTemplate Default();
  static DisplayTemplate FromFile(const std::filesystem::path& path);

  std::string AttributeTitle(const Attribute& attribute) const;
  std::string LevelText(const Attribute& attribute, std::size_t level) const;
  nlohmann::json Scenario() const;
};

// "1 in 10,000" for 1e-4.
std::string FormatOdds(double rate);

struct SurveySession {
  std::string session_id;
  std::string respondent;
  std::size_t cursor = 0;
  std::size_t pair_count = 0;
  bool consent_acknowledged = false;

  bool completed() const { return cursor == pair_count; }
};

nlohmann::json SessionToJson(const SurveySession& session);

struct NextPair {
  bool done = false;
  nlohmann::json payload;
};

struct SubmitAck {
  std::size_t pair = 0;  // 0-based pair just recorded
  std::size_t cursor = 0;
  bool completed = false;
};

class SurveyService {
 public:
  // Loads the bundle at `dir` (which may lack a design or plan; session
  // operations then fail with ServiceStateError) and replays durable session
  // state. Holds the bundle's writer lock for its lifetime.
  explicit SurveyService(std::filesystem::path dir,
                         DisplayTemplate display = DisplayTemplate::Default());
  ~SurveyService();

  SurveySession CreateSession(const std::string& respondent);
  SurveySession GetSession(const std::string& session_id) const;
  SurveySession AcknowledgeConsent(const std::string& session_id);
  NextPair Next(const std::string& session_id) const;
  // `pair` is the 0-based pair the participant answered; it must equal the
  // session cursor. Repeats fail with ConflictError and leave the first
  // answer in place.
  SubmitAck SubmitChoice(const std::string& session_id, std::size_t pair,
                         Choice chosen);

  std::vector<ChoiceRecord> Responses() const;
  std::string ResponsesCsv() const;
  UtilityEstimate EstimateFromResponses() const;

  // Stateless; delegates to CIdentify. Accepts
  //   {"levels": {...}, "far": "10^-5" | 1e-5, "frr": .., "n": ..,
  //    "c_open": .., "c_close": .., "model": .., "mode": ..,
  //    "coefficients": {...}}
  nlohmann::json WhatIf(const nlohmann::json& request) const;
  nlohmann::json Compare(const nlohmann::json& request) const;
  nlohmann::json SchemaJson() const;
  nlohmann::json Presets() const;

  const AttributeSchema& schema() const { return schema_; }

 private:
  struct Slot {
    mutable std::mutex mu;
    SurveySession session;
  };

  Slot& FindSlot(const std::string& session_id) const;
  void RequirePlan() const;
  void AppendEvent(const nlohmann::json& event);
  void AppendResponse(const ChoiceRecord& record);
  AlphaModel ModelFor(const nlohmann::json& request) const;
  nlohmann::json CardPayload(std::size_t design_row,
                             const std::string& position) const;

  std::filesystem::path dir_;
  std::unique_ptr<BundleLock> lock_;
  DisplayTemplate display_;
  AttributeSchema schema_;
  std::optional<FractionalDesign> design_;
  std::optional<PairingPlan> plan_;
  std::optional<UtilityEstimate> alpha_source_;

  mutable std::mutex sessions_mu_;
  std::map<std::string, std::unique_ptr<Slot>> sessions_;
  std::map<std::string, std::string> by_respondent_;

  mutable std::mutex io_mu_;
  std::vector<ChoiceRecord> responses_;
};

// HTTP front end for a SurveyService.
class SurveyServer {
 public:
  explicit SurveyServer(SurveyService& service);
  ~SurveyServer();

  // Serves files under `dir` at "/" in addition to the API.
  void MountStatic(const std::filesystem::path& dir);
  // Binds and blocks until Stop().
  bool Listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it; follow with ListenAfterBind().
  int BindToAnyPort(const std::string& host);
  bool ListenAfterBind();
  void Stop();
  void WaitUntilReady() const;

 private:
  void Routes();

  SurveyService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace cjrisk

#endif  // CJRISK_SERVICE_H_

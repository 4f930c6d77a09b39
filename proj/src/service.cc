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

#include "cjrisk/service.h"

#include <cmath>
#include <fstream>
#include <random>
#include <utility>

#include "cjrisk/error.h"
#include "cjrisk/published.h"
#include "fmt/format.h"
#include "httplib.h"

namespace cjrisk {
namespace fs = std::filesystem;
namespace {

constexpr const char* kEventsFile = "sessions.jsonl";
constexpr const char* kResponsesFile = "responses.csv";

std::string NewSessionId() {
  static std::mutex mu;
  static std::random_device rd;
  static std::mt19937_64 gen(
      (static_cast<std::uint64_t>(rd()) << 32) ^ rd());
  std::lock_guard<std::mutex> lock(mu);
  return fmt::format("s-{:016x}", gen());
}

bool ValidRespondent(const std::string& s) {
  if (s.empty() || s.size() > 128) return false;
  for (char c : s) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') return false;
  }
  return true;
}

std::size_t LevelFromJson(const AttributeSchema& schema, std::size_t a,
                          const nlohmann::json& v) {
  if (v.is_string()) return schema.LevelIndex(a, v.get<std::string>());
  if (v.is_number_integer() && v.get<long long>() >= 0) {
    return static_cast<std::size_t>(v.get<long long>());
  }
  throw ValidationError("level for '" + schema[a].name +
                        "' must be a level index or label");
}

LevelMap LevelsFromJson(const AttributeSchema& schema,
                        const nlohmann::json& doc) {
  LevelMap levels;
  if (doc.is_null()) return levels;
  if (!doc.is_object()) throw ValidationError("'levels' must be an object");
  for (const auto& [name, v] : doc.items()) {
    levels[name] = LevelFromJson(schema, schema.RequireIndex(name), v);
  }
  ValidateLevels(levels, schema);
  return levels;
}

double NumberOr(const nlohmann::json& req, const char* key, double fallback) {
  if (!req.contains(key) || req[key].is_null()) return fallback;
  if (!req[key].is_number()) {
    throw ValidationError(std::string("'") + key + "' must be a number");
  }
  return req[key].get<double>();
}

std::size_t GallerySize(const nlohmann::json& req) {
  const double n = NumberOr(req, "n", 10000);
  if (!(n >= 1) || n != std::floor(n) || n > 1e15) {
    throw ValidationError("'n' must be a positive integer");
  }
  return static_cast<std::size_t>(n);
}

// Resolves the "far" field to a FAR level and its rate.
FarSetting ResolveFar(const AttributeSchema& schema,
                      const std::string& far_attribute,
                      const nlohmann::json& far) {
  const auto settings = FarSettings(schema, far_attribute);
  if (far.is_string()) {
    for (const auto& s : settings) {
      if (s.label == far.get<std::string>()) return s;
    }
    if (auto v = ParseRate(far.get<std::string>())) {
      return ResolveFar(schema, far_attribute, nlohmann::json(*v));
    }
  } else if (far.is_number()) {
    const double v = far.get<double>();
    for (const auto& s : settings) {
      if (std::fabs(s.p_fa - v) <= 1e-9 * std::max(s.p_fa, v)) return s;
    }
  }
  throw ValidationError("'far' must name a level of '" + far_attribute + "'");
}

FpirMode ModeFrom(const nlohmann::json& req) {
  if (!req.contains("mode") || req["mode"].is_null()) {
    return FpirMode::kApproximate;
  }
  return ParseFpirMode(req["mode"].get<std::string>());
}

int StatusFor(const std::exception& e) {
  if (dynamic_cast<const NotFoundError*>(&e)) return 404;
  if (dynamic_cast<const ConflictError*>(&e)) return 409;
  if (dynamic_cast<const PreconditionError*>(&e)) return 412;
  if (dynamic_cast<const ServiceStateError*>(&e)) return 503;
  if (dynamic_cast<const ValidationError*>(&e)) return 400;
  if (dynamic_cast<const ModelError*>(&e)) return 400;
  if (dynamic_cast<const Error*>(&e)) return 422;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return 400;
  return 500;
}

const char* KindFor(int status) {
  switch (status) {
    case 400: return "validation";
    case 404: return "not_found";
    case 409: return "conflict";
    case 412: return "precondition";
    case 422: return "domain";
    case 503: return "service_state";
    default: return "internal";
  }
}

template <typename F>
void Handle(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    const int status = StatusFor(e);
    res.status = status;
    nlohmann::json body = {{"error", KindFor(status)}, {"message", e.what()}};
    res.set_content(body.dump(), "application/json");
  }
}

void SendJson(httplib::Response& res, const nlohmann::json& body,
              int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

nlohmann::json BodyJson(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON body: ") + e.what());
  }
}

}  // namespace

std::string FormatOdds(double rate) {
  if (!(rate > 0) || rate > 1) return fmt::format("{}", rate);
  const double inv = std::round(1.0 / rate);
  std::string digits = fmt::format("{:.0f}", inv);
  std::string grouped;
  int count = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (count > 0 && count % 3 == 0) grouped.insert(grouped.begin(), ',');
    grouped.insert(grouped.begin(), *it);
    ++count;
  }
  return "1 in " + grouped;
}

DisplayTemplate DisplayTemplate::Default() {
  DisplayTemplate t;
  t.doc = nlohmann::json::parse(R"({
    "attributes": {
      "FAR": {
        "title": "Recognition accuracy",
        "levels": [
          "1 in 100 strangers would be accepted",
          "1 in 1,000 strangers would be accepted",
          "1 in 10,000 strangers would be accepted",
          "1 in 100,000 strangers would be accepted"
        ]
      },
      "Camera": {"title": "Surveillance camera",
                 "levels": ["No camera", "Camera installed"]},
      "Staff": {"title": "Shop staff",
                "levels": ["No staff present", "Staff present"]},
      "Friendship": {
        "title": "Family or friends nearby",
        "levels": ["Nobody you know comes by",
                   "Family or friends may come to the store by chance"]
      },
      "Congestion": {"title": "Store congestion",
                     "levels": ["Empty", "Normal", "Crowded"]}
    },
    "scenario": {
      "title": "The exclusive item challenge",
      "steps": [
        "Break into a store protected by security measures",
        "Open a safe locked by biometric recognition",
        "Obtain the exclusive item"
      ],
      "attempts": 10,
      "rules": "You may attempt the challenge ten times. If a surveillance camera or a store employee spots you, the attempt ends.",
      "question": "Which recognition system do you think gives you a better chance of winning the game?"
    }
  })");
  return t;
}

DisplayTemplate DisplayTemplate::FromFile(const fs::path& path) {
  DisplayTemplate t;
  t.doc = ParseJson(ReadFile(path), path.filename().string());
  if (!t.doc.is_object()) {
    throw ParseError(path.filename().string(), 0, "",
                     "display template must be a JSON object");
  }
  return t;
}

std::string DisplayTemplate::AttributeTitle(const Attribute& attribute) const {
  const auto attrs = doc.value("attributes", nlohmann::json::object());
  if (attrs.contains(attribute.name)) {
    const auto& a = attrs[attribute.name];
    if (a.contains("title") && a["title"].is_string()) {
      return a["title"].get<std::string>();
    }
  }
  return attribute.name;
}

std::string DisplayTemplate::LevelText(const Attribute& attribute,
                                       std::size_t level) const {
  const auto attrs = doc.value("attributes", nlohmann::json::object());
  if (attrs.contains(attribute.name)) {
    const auto& a = attrs[attribute.name];
    if (a.contains("levels") && a["levels"].is_array() &&
        level < a["levels"].size() && a["levels"][level].is_string()) {
      return a["levels"][level].get<std::string>();
    }
  }
  const std::string& label = attribute.levels.at(level);
  if (auto rate = ParseRate(label); rate && *rate > 0 && *rate < 1) {
    return FormatOdds(*rate);
  }
  return label;
}

nlohmann::json DisplayTemplate::Scenario() const {
  return doc.value("scenario", nlohmann::json::object());
}

nlohmann::json SessionToJson(const SurveySession& s) {
  return {{"session_id", s.session_id},
          {"respondent", s.respondent},
          {"cursor", s.cursor},
          {"pair_count", s.pair_count},
          {"completed", s.completed()},
          {"consent_acknowledged", s.consent_acknowledged}};
}

SurveyService::SurveyService(fs::path dir, DisplayTemplate display)
    : dir_(std::move(dir)),
      display_(std::move(display)),
      schema_(DefaultSchema()) {
  fs::create_directories(dir_);
  lock_ = std::make_unique<BundleLock>(dir_);
  ProjectBundle bundle = LoadOrCreateBundle(dir_);
  if (bundle.schema) schema_ = *bundle.schema;
  design_ = bundle.design;
  plan_ = bundle.plan;
  alpha_source_ = bundle.estimate;
  if (bundle.responses) responses_ = *bundle.responses;
  if (!bundle.responses && fs::exists(dir_ / kResponsesFile)) {
    responses_ = ResponsesFromCsv(ReadFile(dir_ / kResponsesFile));
  }

  const std::size_t pair_count = plan_ ? plan_->size() : 0;
  if (fs::exists(dir_ / kEventsFile)) {
    std::ifstream in(dir_ / kEventsFile);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json ev;
      try {
        ev = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(kEventsFile, line_no, "", e.what());
      }
      const std::string type = ev.value("event", "");
      const std::string id = ev.value("session_id", "");
      if (type == "create") {
        auto slot = std::make_unique<Slot>();
        slot->session.session_id = id;
        slot->session.respondent = ev.value("respondent", "");
        slot->session.pair_count = pair_count;
        by_respondent_[slot->session.respondent] = id;
        sessions_[id] = std::move(slot);
      } else if (type == "consent") {
        auto it = sessions_.find(id);
        if (it == sessions_.end()) {
          throw ParseError(kEventsFile, line_no, "session_id",
                           "consent for unknown session");
        }
        it->second->session.consent_acknowledged = true;
      } else {
        throw ParseError(kEventsFile, line_no, "event",
                         "unknown event '" + type + "'");
      }
    }
  }
  // Cursors are the number of stored answers per respondent.
  for (const auto& r : responses_) {
    auto it = by_respondent_.find(r.respondent);
    if (it == by_respondent_.end()) continue;
    auto& s = sessions_[it->second]->session;
    if (r.pair != s.cursor) {
      throw IntegrityError("stored answers for '" + r.respondent +
                           "' are not in pair order");
    }
    ++s.cursor;
  }
}

SurveyService::~SurveyService() = default;

void SurveyService::RequirePlan() const {
  if (!design_ || !plan_) {
    throw ServiceStateError("no design and pairing plan loaded in " +
                            dir_.string());
  }
}

SurveyService::Slot& SurveyService::FindSlot(
    const std::string& session_id) const {
  std::lock_guard<std::mutex> lock(sessions_mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw NotFoundError("unknown session '" + session_id + "'");
  }
  return *it->second;
}

void SurveyService::AppendEvent(const nlohmann::json& event) {
  std::lock_guard<std::mutex> lock(io_mu_);
  std::ofstream out(dir_ / kEventsFile, std::ios::app | std::ios::binary);
  out << event.dump() << "\n";
  out.flush();
  if (!out) throw Error("cannot append to " + std::string(kEventsFile));
}

void SurveyService::AppendResponse(const ChoiceRecord& record) {
  const std::string row = ResponseToCsvRow(record);
  std::lock_guard<std::mutex> lock(io_mu_);
  const fs::path path = dir_ / kResponsesFile;
  const bool fresh = !fs::exists(path);
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (fresh) out << ResponsesHeader();
  out << row;
  out.flush();
  if (!out) throw Error("cannot append to " + std::string(kResponsesFile));
  responses_.push_back(record);
}

SurveySession SurveyService::CreateSession(const std::string& respondent) {
  RequirePlan();
  if (!ValidRespondent(respondent)) {
    throw ValidationError("respondent id must be 1-128 characters without "
                          "commas, quotes or newlines");
  }
  std::lock_guard<std::mutex> lock(sessions_mu_);
  if (by_respondent_.count(respondent)) {
    throw ConflictError("respondent '" + respondent +
                        "' already has a session");
  }
  auto slot = std::make_unique<Slot>();
  slot->session.session_id = NewSessionId();
  slot->session.respondent = respondent;
  slot->session.pair_count = plan_->size();
  AppendEvent({{"event", "create"},
               {"session_id", slot->session.session_id},
               {"respondent", respondent}});
  SurveySession out = slot->session;
  by_respondent_[respondent] = out.session_id;
  sessions_[out.session_id] = std::move(slot);
  return out;
}

SurveySession SurveyService::GetSession(const std::string& session_id) const {
  Slot& slot = FindSlot(session_id);
  std::lock_guard<std::mutex> lock(slot.mu);
  return slot.session;
}

SurveySession SurveyService::AcknowledgeConsent(const std::string& session_id) {
  Slot& slot = FindSlot(session_id);
  std::lock_guard<std::mutex> lock(slot.mu);
  if (!slot.session.consent_acknowledged) {
    AppendEvent({{"event", "consent"}, {"session_id", session_id}});
    slot.session.consent_acknowledged = true;
  }
  return slot.session;
}

nlohmann::json SurveyService::CardPayload(std::size_t design_row,
                                          const std::string& position) const {
  const ConjointCard& card = design_->cards[design_row];
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t a = 0; a < schema_.size(); ++a) {
    rows.push_back({{"attribute", schema_[a].name},
                    {"title", display_.AttributeTitle(schema_[a])},
                    {"level", schema_[a].levels[card.levels[a]]},
                    {"text", display_.LevelText(schema_[a], card.levels[a])}});
  }
  return {{"position", position},
          {"card_number", card.index.value_or(static_cast<int>(design_row) + 1)},
          {"attributes", rows}};
}

NextPair SurveyService::Next(const std::string& session_id) const {
  RequirePlan();
  Slot& slot = FindSlot(session_id);
  std::lock_guard<std::mutex> lock(slot.mu);
  const SurveySession& s = slot.session;
  if (!s.consent_acknowledged) {
    throw PreconditionError("consent has not been acknowledged");
  }
  NextPair next;
  if (s.completed()) {
    next.done = true;
    next.payload = {{"done", true},
                    {"session_id", s.session_id},
                    {"pair_count", s.pair_count}};
    return next;
  }
  const auto [c1, c2] = plan_->pairs[s.cursor];
  next.payload = {{"done", false},
                  {"session_id", s.session_id},
                  {"pair_number", s.cursor + 1},
                  {"pair_count", s.pair_count},
                  {"cards", {CardPayload(c1, "left"), CardPayload(c2, "right")}},
                  {"scenario", display_.Scenario()}};
  return next;
}

SubmitAck SurveyService::SubmitChoice(const std::string& session_id,
                                      std::size_t pair, Choice chosen) {
  RequirePlan();
  Slot& slot = FindSlot(session_id);
  std::lock_guard<std::mutex> lock(slot.mu);
  SurveySession& s = slot.session;
  if (!s.consent_acknowledged) {
    throw PreconditionError("consent has not been acknowledged");
  }
  if (s.completed()) throw ConflictError("survey already completed");
  if (pair < s.cursor) {
    throw ConflictError("pair " + std::to_string(pair + 1) +
                        " was already answered");
  }
  if (pair > s.cursor) {
    throw ConflictError("pair " + std::to_string(pair + 1) +
                        " is not the current pair (" +
                        std::to_string(s.cursor + 1) + ")");
  }
  AppendResponse({s.respondent, pair, chosen});
  ++s.cursor;
  return {pair, s.cursor, s.completed()};
}

std::vector<ChoiceRecord> SurveyService::Responses() const {
  std::lock_guard<std::mutex> lock(io_mu_);
  return responses_;
}

std::string SurveyService::ResponsesCsv() const {
  return ResponsesToCsv(Responses());
}

UtilityEstimate SurveyService::EstimateFromResponses() const {
  RequirePlan();
  return Fit(Responses(), *plan_, *design_, schema_);
}

AlphaModel SurveyService::ModelFor(const nlohmann::json& req) const {
  const AlphaKind kind = req.contains("model") && !req["model"].is_null()
                             ? ParseAlphaKind(req["model"].get<std::string>())
                             : AlphaKind::kCoefficientWeighted;
  if (kind == AlphaKind::kUnweighted) return AlphaModel::Unweighted(schema_);
  if (req.contains("coefficients") && !req["coefficients"].is_null()) {
    return AlphaModel::CoefficientWeighted(
        req["coefficients"].get<std::map<std::string, double>>());
  }
  return AlphaModel::CoefficientWeighted(
      alpha_source_ ? *alpha_source_ : published::Estimate());
}

nlohmann::json SurveyService::WhatIf(const nlohmann::json& req) const {
  if (!req.is_object()) throw ValidationError("request must be an object");
  const std::string far_attribute = req.value("far_attribute", "FAR");
  RiskScenario scenario;
  scenario.levels = LevelsFromJson(schema_, req.value("levels", nlohmann::json()));
  scenario.rates.p_fr = NumberOr(req, "frr", 1e-2);
  scenario.rates.n = GallerySize(req);
  scenario.c_open = NumberOr(req, "c_open", 0.5);
  scenario.c_close = NumberOr(req, "c_close", 0.5);
  if (!req.contains("far")) throw ValidationError("'far' is required");
  const FarSetting far = ResolveFar(schema_, far_attribute, req["far"]);
  scenario.levels[far_attribute] = far.level;
  scenario.rates.p_fa = far.p_fa;
  const AlphaModel model = ModelFor(req);
  const RiskResult r = CIdentify(scenario, model, schema_, ModeFrom(req));
  nlohmann::json out = ResultToJson(r);
  out["alpha_model"] = ToString(model.kind);
  out["far"] = far.label;
  return out;
}

nlohmann::json SurveyService::Compare(const nlohmann::json& req) const {
  if (!req.is_object()) throw ValidationError("request must be an object");
  GridRequest g;
  g.far_attribute = req.value("far_attribute", "FAR");
  g.far_settings = FarSettings(schema_, g.far_attribute);
  g.p_fr = NumberOr(req, "frr", 1e-2);
  g.n = GallerySize(req);
  g.c_open = NumberOr(req, "c_open", 0.5);
  g.c_close = NumberOr(req, "c_close", 0.5);
  g.mode = ModeFrom(req);
  if (req.contains("use_cases") && !req["use_cases"].is_null()) {
    for (const auto& uc : req["use_cases"]) {
      g.use_cases.push_back({uc.at("name").get<std::string>(),
                             LevelsFromJson(schema_, uc.at("levels"))});
    }
  } else {
    g.use_cases = published::UseCases();
  }
  if (req.contains("reference") && !req["reference"].is_null()) {
    const auto& ref = req["reference"];
    const FarSetting far =
        ResolveFar(schema_, g.far_attribute, ref.at("far"));
    g.reference = GridReference{ref.at("use_case").get<std::string>(),
                                far.label};
  }
  return GridToJson(CompareUseCases(g, ModelFor(req), schema_));
}

nlohmann::json SurveyService::SchemaJson() const {
  nlohmann::json doc = SchemaToJson(schema_);
  for (std::size_t a = 0; a < schema_.size(); ++a) {
    nlohmann::json texts = nlohmann::json::array();
    for (std::size_t k = 0; k < schema_[a].level_count(); ++k) {
      texts.push_back(display_.LevelText(schema_[a], k));
    }
    doc["attributes"][a]["title"] = display_.AttributeTitle(schema_[a]);
    doc["attributes"][a]["level_text"] = texts;
  }
  return doc;
}

nlohmann::json SurveyService::Presets() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& uc : published::UseCases()) {
    out.push_back({{"name", uc.name}, {"levels", uc.levels}});
  }
  return out;
}

SurveyServer::SurveyServer(SurveyService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  Routes();
}

SurveyServer::~SurveyServer() { Stop(); }

void SurveyServer::MountStatic(const fs::path& dir) {
  if (!server_->set_mount_point("/", dir.string())) {
    throw ValidationError("cannot serve static files from " + dir.string());
  }
}

bool SurveyServer::Listen(const std::string& host, int port) {
  return server_->listen(host, port);
}

int SurveyServer::BindToAnyPort(const std::string& host) {
  return server_->bind_to_any_port(host);
}

bool SurveyServer::ListenAfterBind() { return server_->listen_after_bind(); }

void SurveyServer::Stop() {
  if (server_) server_->stop();
}

void SurveyServer::WaitUntilReady() const { server_->wait_until_ready(); }

void SurveyServer::Routes() {
  auto& s = *server_;
  SurveyService& svc = service_;

  s.Post("/sessions", [&svc](const httplib::Request& req,
                             httplib::Response& res) {
    Handle(res, [&] {
      const auto body = BodyJson(req);
      if (!body.contains("respondent") || !body["respondent"].is_string()) {
        throw ValidationError("'respondent' must be a string");
      }
      SendJson(res,
               SessionToJson(svc.CreateSession(
                   body["respondent"].get<std::string>())),
               201);
    });
  });
  s.Get(R"(/sessions/([^/]+))", [&svc](const httplib::Request& req,
                                       httplib::Response& res) {
    Handle(res, [&] { SendJson(res, SessionToJson(svc.GetSession(req.matches[1]))); });
  });
  s.Post(R"(/sessions/([^/]+)/consent)", [&svc](const httplib::Request& req,
                                                httplib::Response& res) {
    Handle(res, [&] {
      SendJson(res, SessionToJson(svc.AcknowledgeConsent(req.matches[1])));
    });
  });
  s.Get(R"(/sessions/([^/]+)/next)", [&svc](const httplib::Request& req,
                                            httplib::Response& res) {
    Handle(res, [&] { SendJson(res, svc.Next(req.matches[1]).payload); });
  });
  s.Post(R"(/sessions/([^/]+)/choice)", [&svc](const httplib::Request& req,
                                               httplib::Response& res) {
    Handle(res, [&] {
      const auto body = BodyJson(req);
      if (!body.contains("pair") || !body["pair"].is_number_integer() ||
          body["pair"].get<long long>() < 1) {
        throw ValidationError("'pair' must be a 1-based pair number");
      }
      if (!body.contains("chosen") || !body["chosen"].is_number_integer()) {
        throw ValidationError("'chosen' must be 1 or 2");
      }
      const auto chosen = body["chosen"].get<long long>();
      if (chosen != 1 && chosen != 2) {
        throw ValidationError("'chosen' must be 1 or 2");
      }
      const auto ack = svc.SubmitChoice(
          req.matches[1],
          static_cast<std::size_t>(body["pair"].get<long long>() - 1),
          chosen == 1 ? Choice::kCard1 : Choice::kCard2);
      SendJson(res, {{"accepted", true},
                     {"pair_number", ack.pair + 1},
                     {"cursor", ack.cursor},
                     {"completed", ack.completed}});
    });
  });
  s.Get("/responses", [&svc](const httplib::Request&, httplib::Response& res) {
    Handle(res, [&] { res.set_content(svc.ResponsesCsv(), "text/csv"); });
  });
  s.Post("/whatif", [&svc](const httplib::Request& req,
                           httplib::Response& res) {
    Handle(res, [&] { SendJson(res, svc.WhatIf(BodyJson(req))); });
  });
  s.Post("/compare", [&svc](const httplib::Request& req,
                            httplib::Response& res) {
    Handle(res, [&] { SendJson(res, svc.Compare(BodyJson(req))); });
  });
  s.Get("/estimate", [&svc](const httplib::Request&, httplib::Response& res) {
    Handle(res, [&] { SendJson(res, EstimateToJson(svc.EstimateFromResponses())); });
  });
  s.Get("/schema", [&svc](const httplib::Request&, httplib::Response& res) {
    Handle(res, [&] { SendJson(res, svc.SchemaJson()); });
  });
  s.Get("/presets", [&svc](const httplib::Request&, httplib::Response& res) {
    Handle(res, [&] { SendJson(res, svc.Presets()); });
  });
}

}  // namespace cjrisk

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

#include "cjrisk/cli.h"

#include <charconv>
#include <cmath>
#include <csignal>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "cjrisk/design.h"
#include "cjrisk/error.h"
#include "cjrisk/estimate.h"
#include "cjrisk/published.h"
#include "cjrisk/reproduce.h"
#include "cjrisk/risk.h"
#include "cjrisk/service.h"
#include "cjrisk/simulate.h"
#include "cjrisk/storage.h"
#include "fmt/format.h"
#include "json.hpp"

namespace cjrisk {
namespace fs = std::filesystem;
namespace {

struct CliConfig {
  std::string dir;
  bool json = false;

  // design
  std::string schema_file;
  double design_size = 9;
  std::size_t restarts = 20;
  std::optional<std::uint64_t> seed;
  bool published = false;
  std::size_t max_retries = 1000;

  // simulate
  double respondents = 600;
  std::vector<std::string> beta;
  bool shuffle = false;

  // risk / compare / reproduce
  std::vector<std::string> levels;
  std::string far;
  double frr = 1e-2;
  double gallery = 10000;
  double c_open = 0.5;
  double c_close = 0.5;
  std::string alpha_model = "coefficient_weighted";
  std::string mode = "approximate";
  std::string coefficients = "auto";
  std::string save_as;
  std::string use_cases_file;
  std::string reference = "Low-secure:10^-4";
  bool no_reference = false;

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  std::string display_file;
};

std::size_t WholeNumber(double v, const char* what) {
  if (!(v >= 1) || v != std::floor(v) || v > 1e15) {
    throw ValidationError(std::string(what) + " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

std::uint64_t RequireSeed(const CliConfig& c, const char* command) {
  if (!c.seed) {
    throw CLI::RequiredError(std::string("--seed (required by '") + command +
                             "')");
  }
  return *c.seed;
}

// "Name=value" pairs.
std::map<std::string, std::string> KeyValues(
    const std::vector<std::string>& items, const char* flag) {
  std::map<std::string, std::string> out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw CLI::ValidationError(flag, "expected NAME=VALUE, got '" + item +
                                           "'");
    }
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

AttributeSchema BundleSchema(const ProjectBundle& b) {
  return b.schema ? *b.schema : DefaultSchema();
}

AlphaModel ModelFor(const CliConfig& c, const ProjectBundle& b,
                    const AttributeSchema& schema) {
  if (ParseAlphaKind(c.alpha_model) == AlphaKind::kUnweighted) {
    return AlphaModel::Unweighted(schema);
  }
  if (c.coefficients == "published") {
    return AlphaModel::CoefficientWeighted(published::Estimate());
  }
  if (c.coefficients == "bundle") {
    if (!b.estimate) throw Error("bundle has no estimate.json");
    return AlphaModel::CoefficientWeighted(*b.estimate);
  }
  return AlphaModel::CoefficientWeighted(b.estimate ? *b.estimate
                                                    : published::Estimate());
}

std::size_t LevelArg(const AttributeSchema& schema, std::size_t a,
                     const std::string& value) {
  for (std::size_t k = 0; k < schema[a].level_count(); ++k) {
    if (schema[a].levels[k] == value) return k;
  }
  std::size_t k = 0;
  auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), k);
  if (ec == std::errc() && ptr == value.data() + value.size()) return k;
  throw ValidationError("unknown level '" + value + "' for '" +
                        schema[a].name + "'");
}

FarSetting FarArg(const AttributeSchema& schema, const std::string& far) {
  const auto settings = FarSettings(schema);
  for (const auto& s : settings) {
    if (s.label == far) return s;
  }
  if (auto v = ParseRate(far)) {
    for (const auto& s : settings) {
      if (std::fabs(s.p_fa - *v) <= 1e-9 * std::max(s.p_fa, *v)) return s;
    }
  }
  throw ValidationError("--far '" + far + "' is not a FAR level");
}

int CmdDesign(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const fs::path dir = c.dir;
  ProjectBundle b = LoadOrCreateBundle(dir);
  AttributeSchema schema = DefaultSchema();
  if (!c.schema_file.empty()) {
    schema = SchemaFromJson(ParseJson(ReadFile(c.schema_file), c.schema_file));
  }
  FractionalDesign design;
  if (c.published) {
    if (!(schema == DefaultSchema())) {
      throw ValidationError("--published requires the default schema");
    }
    design = published::Design();
  } else {
    FederovOptions opt;
    opt.n = WholeNumber(c.design_size, "--n");
    opt.restarts = c.restarts;
    opt.seed = RequireSeed(c, "design");
    design = FederovSelect(FullFactorial(schema), schema, opt);
  }
  b.schema = schema;
  b.design = design;
  b.plan.reset();
  b.responses.reset();
  b.estimate.reset();
  SaveBundle(b, dir);
  err << fmt::format("design: {} cards from {} candidates, det(X'X) = {}\n",
                     design.cards.size(), schema.CombinationCount(),
                     design.criterion_value);
  if (c.json) {
    out << DumpJson({{"cards", design.cards.size()},
                     {"criterion_value", design.criterion_value},
                     {"seed", design.seed}});
  }
  return kExitOk;
}

int CmdPair(const CliConfig& c, std::ostream& out, std::ostream& err) {
  ProjectBundle b = LoadBundle(c.dir);
  if (!b.design) throw Error("bundle has no design; run 'design' first");
  if (c.published) {
    if (!(*b.design == published::Design())) {
      throw ValidationError("--published requires the published design");
    }
    b.plan = published::Plan();
  } else {
    b.plan = MakePairs(*b.design, RequireSeed(c, "pair"), c.max_retries);
  }
  b.responses.reset();
  b.estimate.reset();
  SaveBundle(b, c.dir);
  err << fmt::format("pair: {} questions\n", b.plan->size());
  if (c.json) out << PlanToCsv(*b.plan);
  return kExitOk;
}

int CmdSimulate(const CliConfig& c, std::ostream&, std::ostream& err) {
  ProjectBundle b = LoadBundle(c.dir);
  if (!b.plan) throw Error("bundle has no pairing plan; run 'pair' first");
  const AttributeSchema schema = BundleSchema(b);
  TrueUtility beta;
  if (c.beta.empty()) {
    beta = published::Utility();
  } else {
    for (const auto& [name, value] : KeyValues(c.beta, "--beta")) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != value.size()) {
        throw ValidationError("--beta value for '" + name +
                              "' is not a number");
      }
      beta.beta[name] = v;
    }
  }
  SimulationOptions opt;
  opt.respondents = WholeNumber(c.respondents, "--respondents");
  opt.seed = RequireSeed(c, "simulate");
  opt.shuffle_pairs = c.shuffle;
  b.responses = SimulateResponses(*b.plan, *b.design, schema, beta, opt);
  b.estimate.reset();
  SaveBundle(b, c.dir);
  err << fmt::format("simulate: {} records\n", b.responses->size());
  return kExitOk;
}

int CmdEstimate(const CliConfig& c, std::ostream& out, std::ostream& err) {
  ProjectBundle b = LoadBundle(c.dir);
  if (!b.responses) throw Error("bundle has no responses");
  const UtilityEstimate est =
      Fit(*b.responses, *b.plan, *b.design, BundleSchema(b));
  b.estimate = est;
  SaveBundle(b, c.dir);
  if (!est.converged) err << "estimate: warning: did not converge\n";
  out << (c.json ? DumpJson(EstimateToJson(est)) : FormatEstimateTable(est));
  return kExitOk;
}

int CmdRisk(const CliConfig& c, std::ostream& out, std::ostream&) {
  ProjectBundle b = LoadOrCreateBundle(c.dir);
  const AttributeSchema schema = BundleSchema(b);
  RiskScenario s;
  for (const auto& [name, value] : KeyValues(c.levels, "--level")) {
    const std::size_t a = schema.RequireIndex(name);
    s.levels[name] = LevelArg(schema, a, value);
  }
  if (c.far.empty()) throw CLI::RequiredError("--far");
  const FarSetting far = FarArg(schema, c.far);
  s.levels["FAR"] = far.level;
  s.rates = {far.p_fa, c.frr, WholeNumber(c.gallery, "--n")};
  s.c_open = c.c_open;
  s.c_close = c.c_close;
  const RiskResult r =
      CIdentify(s, ModelFor(c, b, schema), schema, ParseFpirMode(c.mode));
  if (!c.save_as.empty()) {
    if (!b.schema) b.schema = schema;
    if (!b.scenarios) b.scenarios.emplace();
    std::erase_if(*b.scenarios,
                  [&](const NamedScenario& n) { return n.name == c.save_as; });
    b.scenarios->push_back({c.save_as, s});
    SaveBundle(b, c.dir);
  }
  if (c.json) {
    out << DumpJson(ResultToJson(r));
  } else {
    out << fmt::format(
        "alpha       {:.6g}\nfpir_open   {:.6g}\nfpir_close  {:.6g}\n"
        "c_identify  {:.6g}\nmode        {}\n",
        r.alpha, r.fpir_open, r.fpir_close, r.c_identify, ToString(r.mode));
  }
  return kExitOk;
}

int CmdCompare(const CliConfig& c, std::ostream& out, std::ostream&) {
  ProjectBundle b = LoadOrCreateBundle(c.dir);
  const AttributeSchema schema = BundleSchema(b);
  GridRequest g;
  g.far_settings = FarSettings(schema);
  g.p_fr = c.frr;
  g.n = WholeNumber(c.gallery, "--n");
  g.c_open = c.c_open;
  g.c_close = c.c_close;
  g.mode = ParseFpirMode(c.mode);
  if (c.use_cases_file.empty()) {
    g.use_cases = published::UseCases();
  } else {
    const auto doc = ParseJson(ReadFile(c.use_cases_file), c.use_cases_file);
    try {
      for (const auto& uc : doc) {
        UseCase u;
        u.name = uc.at("name").get<std::string>();
        for (const auto& [name, v] : uc.at("levels").items()) {
          const std::size_t a = schema.RequireIndex(name);
          u.levels[name] = v.is_string() ? LevelArg(schema, a, v.get<std::string>())
                                         : v.get<std::size_t>();
        }
        g.use_cases.push_back(std::move(u));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(c.use_cases_file, 0, "", e.what());
    }
  }
  if (!c.no_reference && !c.reference.empty()) {
    auto colon = c.reference.rfind(':');
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--reference", "expected USECASE:FAR");
    }
    g.reference = GridReference{c.reference.substr(0, colon),
                                FarArg(schema, c.reference.substr(colon + 1))
                                    .label};
  }
  const RiskGrid grid = CompareUseCases(g, ModelFor(c, b, schema), schema);
  if (!b.schema) b.schema = schema;
  b.risk_report = grid;
  SaveBundle(b, c.dir);
  out << (c.json ? DumpJson(GridToJson(grid)) : FormatGrid(grid));
  return kExitOk;
}

int CmdReproduce(const CliConfig& c, std::ostream& out, std::ostream&) {
  const ReproductionReport report =
      Reproduce(c.frr, WholeNumber(c.gallery, "--n"));
  out << (c.json ? DumpJson(ReproductionToJson(report))
                 : FormatReproductionReport(report));
  return kExitOk;
}

SurveyServer* g_server = nullptr;

void OnSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

int CmdServe(const CliConfig& c, std::ostream&, std::ostream& err) {
  DisplayTemplate display = c.display_file.empty()
                                ? DisplayTemplate::Default()
                                : DisplayTemplate::FromFile(c.display_file);
  SurveyService service(c.dir, std::move(display));
  SurveyServer server(service);
  if (!c.static_dir.empty()) server.MountStatic(c.static_dir);
  g_server = &server;
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  err << fmt::format("serving {} on http://{}:{}\n", c.dir, c.host, c.port);
  const bool ok = server.Listen(c.host, c.port);
  g_server = nullptr;
  if (!ok) {
    err << fmt::format("cannot listen on {}:{}\n", c.host, c.port);
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CliConfig c;
  if (const char* env = std::getenv(kBundleDirEnv); env && *env) {
    c.dir = env;
  } else {
    c.dir = ".";
  }

  CLI::App app{"Conjoint-based risk evaluation for biometric identification",
               "cjrisk"};
  app.require_subcommand(1);
  app.add_option("--dir", c.dir,
                 std::string("Bundle directory (default $") + kBundleDirEnv +
                     " or .)");

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", c.seed, "RNG seed");
  };
  auto add_risk_flags = [&](CLI::App* cmd) {
    cmd->add_option("--frr", c.frr, "False reject rate")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--n", c.gallery, "Gallery size N");
    cmd->add_option("--c-open", c.c_open, "Cost of an open-set false accept");
    cmd->add_option("--c-close", c.c_close,
                    "Cost of a closed-set false accept");
    cmd->add_option("--alpha-model", c.alpha_model,
                    "coefficient_weighted | unweighted");
    cmd->add_option("--mode", c.mode, "FPIR terms: approximate | exact");
    cmd->add_option("--coefficients", c.coefficients,
                    "Alpha weights source: auto | bundle | published");
    cmd->add_flag("--json", c.json, "Machine-readable output");
  };

  auto* design = app.add_subcommand("design", "Full factorial + Federov");
  design->add_option("--schema", c.schema_file, "Schema JSON file");
  design->add_option("--n", c.design_size, "Number of cards");
  design->add_option("--restarts", c.restarts, "Exchange restarts");
  design->add_flag("--published", c.published,
                   "Use the published nine-card design");
  design->add_flag("--json", c.json, "Machine-readable summary");
  add_seed(design);

  auto* pair = app.add_subcommand("pair", "Randomized card pairing");
  pair->add_option("--max-retries", c.max_retries, "Redraw cap");
  pair->add_flag("--published", c.published,
                 "Use the published question order");
  pair->add_flag("--json", c.json, "Print the plan CSV");
  add_seed(pair);

  auto* simulate = app.add_subcommand("simulate", "Synthetic respondents");
  simulate->add_option("--respondents", c.respondents, "Respondent count");
  simulate->add_option("--beta", c.beta,
                       "True utility NAME=VALUE (default: published fit)");
  simulate->add_flag("--shuffle", c.shuffle,
                     "Randomize pair order per respondent");
  add_seed(simulate);

  auto* estimate = app.add_subcommand("estimate", "Conditional logit fit");
  estimate->add_flag("--json", c.json, "Machine-readable output");

  auto* risk = app.add_subcommand("risk", "C_identify for one scenario");
  risk->add_option("--level", c.levels, "Attribute level NAME=LABEL|INDEX");
  risk->add_option("--far", c.far, "FAR level label or value");
  risk->add_option("--save", c.save_as, "Store scenario under this name");
  add_risk_flags(risk);

  auto* compare = app.add_subcommand("compare", "Use case x FAR grid");
  compare->add_option("--use-cases", c.use_cases_file,
                      "JSON [{name, levels}] (default: reference use cases)");
  compare->add_option("--reference", c.reference, "USECASE:FAR cell");
  compare->add_flag("--no-reference", c.no_reference, "Disable flagging");
  add_risk_flags(compare);

  auto* reproduce =
      app.add_subcommand("reproduce", "Published C_identify grid check");
  reproduce->add_option("--frr", c.frr, "False reject rate");
  reproduce->add_option("--n", c.gallery, "Gallery size N");
  reproduce->add_flag("--json", c.json, "Machine-readable output");

  auto* serve = app.add_subcommand("serve", "HTTP survey and what-if service");
  serve->add_option("--host", c.host, "Bind address");
  serve->add_option("--port", c.port, "Port");
  serve->add_option("--static", c.static_dir, "Static asset directory");
  serve->add_option("--display", c.display_file, "Display template JSON");

  std::vector<const char*> argv;
  argv.push_back("cjrisk");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    if (*design) return CmdDesign(c, out, err);
    if (*pair) return CmdPair(c, out, err);
    if (*simulate) return CmdSimulate(c, out, err);
    if (*estimate) return CmdEstimate(c, out, err);
    if (*risk) return CmdRisk(c, out, err);
    if (*compare) return CmdCompare(c, out, err);
    if (*reproduce) return CmdReproduce(c, out, err);
    if (*serve) return CmdServe(c, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace cjrisk

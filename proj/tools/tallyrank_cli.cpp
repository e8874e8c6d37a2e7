// Copyright 2026 The tallyrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// tallyrank command-line tool. Talks to the library through the C API only.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tallyrank/tallyrank.h"

namespace {

// Takes ownership of a library string.
std::string Take(char* s) {
  std::string out = s ? s : "";
  tr_string_free(s);
  return out;
}

int Fail(tr_status status) {
  std::cerr << "tallyrank: " << tr_last_error() << "\n";
  return static_cast<int>(status);
}

const char* OrNull(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tally-rank sports standings prediction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tr_version());

  std::string sport, input, out, config_path, model, predicted, actual, league,
      conferences, ndcg_mode, kind, spec, format;
  std::optional<std::uint64_t> seed;

  auto* ingest = app.add_subcommand("ingest", "Validate and canonicalize league data");
  ingest->add_option("--sport", sport, "basketball or rugby")->required();
  ingest->add_option("--input", input, "League directory or a single data file")->required();
  ingest->add_option("--out", out, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Train the configured models");
  train->add_option("--config", config_path, "Experiment config file")->required();
  train->add_option("--model", model, "Train only this model");

  auto* rank = app.add_subcommand("rank", "Predict test-season standings with a trained model");
  rank->add_option("--model", model, "Model name")->required();
  rank->add_option("--config", config_path, "Experiment config file")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Score predicted standings against actual ones");
  evaluate->add_option("--predicted", predicted, "Predicted standings CSV")->required();
  evaluate->add_option("--actual", actual, "Actual standings CSV")->required();
  evaluate->add_option("--league", league, "basketball or rugby")->required();
  evaluate->add_option("--conferences", conferences, "team,conference CSV for basketball");
  evaluate->add_option("--ndcg-mode", ndcg_mode, "per_pool (default) or merged");

  auto* baseline = app.add_subcommand("baseline", "Naive or randomized baseline standings");
  baseline->add_option("--kind", kind, "naive or randomized")->required();
  baseline->add_option("--seed", seed, "Seed for the randomized baseline");
  baseline->add_option("--config", config_path, "Experiment config file")->required();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic league");
  synth->add_option("--spec", spec, "Synthetic league spec file")->required();
  synth->add_option("--out", out, "Output directory")->required();

  auto* report = app.add_subcommand("report", "Run the full experiment and emit the report");
  report->add_option("--format", format, "csv, json or text")->required();
  report->add_option("--config", config_path, "Experiment config file")->required();
  report->add_option("--out", out, "Also write the rendered report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  char* text = nullptr;
  tr_status status = TR_OK;
  if (*ingest) {
    status = tr_ingest(sport.c_str(), input.c_str(), out.c_str(), &text);
  } else if (*synth) {
    status = tr_synth(spec.c_str(), out.c_str(), &text);
  } else if (*evaluate) {
    status = tr_evaluate(predicted.c_str(), actual.c_str(), league.c_str(),
                         OrNull(conferences), OrNull(ndcg_mode), &text);
  } else {
    tr_config* config = nullptr;
    status = tr_config_load(config_path.c_str(), &config);
    if (status != TR_OK) return Fail(status);
    if (*train) {
      status = tr_train(config, OrNull(model), &text);
    } else if (*rank) {
      status = tr_rank(config, model.c_str(), &text);
    } else if (*baseline) {
      const std::uint64_t value = seed.value_or(0);
      status = tr_baseline(config, kind.c_str(), seed ? &value : nullptr, &text);
    } else if (*report) {
      status = tr_report_command(config, format.c_str(), &text);
    }
    tr_config_free(config);
  }
  if (status != TR_OK) return Fail(status);

  const std::string output = Take(text);
  if (*report && !out.empty()) {
    std::ofstream file(out, std::ios::binary);
    file << output;
    if (!file) {
      std::cerr << "tallyrank: cannot write " << out << "\n";
      return 2;
    }
  }
  std::cout << output;
  return 0;
}

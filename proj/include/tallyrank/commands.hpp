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

// One entry point per command-line subcommand. Each writes its artifacts to
// disk and returns a short text summary for the caller to print.

#ifndef TALLYRANK_COMMANDS_HPP_
#define TALLYRANK_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "tallyrank/config.hpp"
#include "tallyrank/core.hpp"
#include "tallyrank/metrics.hpp"
#include "tallyrank/pipeline.hpp"

namespace tallyrank::commands {

// `input` is a league directory or a single data file. A directory is
// re-serialized season by season, with aggregated team stats, conferences
// for basketball and, for a four-season league, training-fit normalization.
std::string Ingest(Sport sport, const std::string& input,
                   const std::string& out_dir);

// Trains every configured model, or only `model`, and saves it under
// <output_dir>/models/<model>.
std::string Train(const config::KeyValueConfig& cfg,
                  const std::optional<std::string>& model);

// Loads <output_dir>/models/<model>, ranks the test season and writes
// <output_dir>/standings/<model>.csv. Returns the standings CSV.
std::string Rank(const config::KeyValueConfig& cfg, const std::string& model);

// `league` names the sport. Basketball pools come from `conferences_path`
// or the built-in NBA table. Returns a metrics CSV.
std::string Evaluate(const std::string& predicted_path,
                     const std::string& actual_path, const std::string& league,
                     const std::optional<std::string>& conferences_path,
                     metrics::NdcgMode ndcg_mode);

// Writes <output_dir>/baselines/naive.csv or randomized_trials.csv and
// returns the baseline's metrics CSV.
std::string Baseline(const config::KeyValueConfig& cfg, const std::string& kind,
                     std::optional<std::uint64_t> seed);

std::string Synth(const std::string& spec_path, const std::string& out_dir);

// Runs the experiment, writes every output under output_dir and returns the
// report rendered in `format`.
std::string Report(const config::KeyValueConfig& cfg, const std::string& format);

}  // namespace tallyrank::commands

#endif  // TALLYRANK_COMMANDS_HPP_

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

#include "tallyrank/tallyrank.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "tallyrank/commands.hpp"
#include "tallyrank/config.hpp"
#include "tallyrank/metrics.hpp"
#include "tallyrank/pipeline.hpp"
#include "tallyrank/report.hpp"

struct tr_config {
  tallyrank::config::KeyValueConfig values;
};

struct tr_report {
  tallyrank::pipeline::Report report;
};

namespace {

thread_local std::string last_error;

tr_status Fail(tr_status status, const char* what) {
  last_error = what;
  return status;
}

// Runs `body`, mapping exceptions onto status codes.
template <typename F>
tr_status Guard(F&& body) {
  last_error.clear();
  try {
    body();
    return TR_OK;
  } catch (const tallyrank::ValidationError& e) {
    return Fail(TR_ERROR_VALIDATION, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(TR_ERROR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return Fail(TR_ERROR_RUNTIME, e.what());
  } catch (...) {
    return Fail(TR_ERROR_RUNTIME, "unknown error");
  }
}

void Require(const void* p, const char* name) {
  if (p == nullptr) {
    throw tallyrank::ValidationError(std::string(name) + " must not be NULL");
  }
}

char* Duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Emit(char** out, const std::string& s) {
  if (out != nullptr) *out = Duplicate(s);
}

std::optional<std::string> Optional(const char* s) {
  if (s == nullptr) return std::nullopt;
  return std::string(s);
}

}  // namespace

extern "C" {

const char* tr_version(void) { return "1.0.0"; }

const char* tr_last_error(void) { return last_error.c_str(); }

void tr_string_free(char* s) { std::free(s); }

tr_status tr_config_create(tr_config** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new tr_config();
  });
}

tr_status tr_config_load(const char* path, tr_config** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    auto values = tallyrank::config::KeyValueConfig::Read(path);
    *out = new tr_config{std::move(values)};
  });
}

tr_status tr_config_set(tr_config* config, const char* key, const char* value) {
  return Guard([&] {
    Require(config, "config");
    Require(key, "key");
    Require(value, "value");
    config->values.Set(key, value);
  });
}

void tr_config_free(tr_config* config) { delete config; }

tr_status tr_ingest(const char* sport, const char* input, const char* out_dir,
                    char** summary) {
  return Guard([&] {
    Require(sport, "sport");
    Require(input, "input");
    Require(out_dir, "out_dir");
    Emit(summary, tallyrank::commands::Ingest(tallyrank::ParseSport(sport), input, out_dir));
  });
}

tr_status tr_synth(const char* spec_path, const char* out_dir, char** summary) {
  return Guard([&] {
    Require(spec_path, "spec_path");
    Require(out_dir, "out_dir");
    Emit(summary, tallyrank::commands::Synth(spec_path, out_dir));
  });
}

tr_status tr_train(const tr_config* config, const char* model, char** summary) {
  return Guard([&] {
    Require(config, "config");
    Emit(summary, tallyrank::commands::Train(config->values, Optional(model)));
  });
}

tr_status tr_rank(const tr_config* config, const char* model, char** standings_csv) {
  return Guard([&] {
    Require(config, "config");
    Require(model, "model");
    Emit(standings_csv, tallyrank::commands::Rank(config->values, model));
  });
}

tr_status tr_evaluate(const char* predicted_path, const char* actual_path,
                      const char* league, const char* conferences,
                      const char* ndcg_mode, char** metrics_csv) {
  return Guard([&] {
    Require(predicted_path, "predicted_path");
    Require(actual_path, "actual_path");
    Require(league, "league");
    const auto mode = ndcg_mode ? tallyrank::metrics::ParseNdcgMode(ndcg_mode)
                                : tallyrank::metrics::NdcgMode::kPerPool;
    Emit(metrics_csv, tallyrank::commands::Evaluate(predicted_path, actual_path, league,
                                                    Optional(conferences), mode));
  });
}

tr_status tr_baseline(const tr_config* config, const char* kind,
                      const uint64_t* seed, char** metrics_csv) {
  return Guard([&] {
    Require(config, "config");
    Require(kind, "kind");
    std::optional<std::uint64_t> s;
    if (seed) s = *seed;
    Emit(metrics_csv, tallyrank::commands::Baseline(config->values, kind, s));
  });
}

tr_status tr_report_command(const tr_config* config, const char* format,
                            char** rendered) {
  return Guard([&] {
    Require(config, "config");
    Require(format, "format");
    Emit(rendered, tallyrank::commands::Report(config->values, format));
  });
}

tr_status tr_run_experiment(const tr_config* config, tr_report** out) {
  return Guard([&] {
    Require(config, "config");
    Require(out, "out");
    const auto experiment = tallyrank::pipeline::ExperimentConfig::FromConfig(config->values);
    auto report = std::make_unique<tr_report>();
    report->report = tallyrank::pipeline::RunExperiment(experiment);
    *out = report.release();
  });
}

size_t tr_report_row_count(const tr_report* report) {
  return report ? report->report.rows.size() : 0;
}

tr_status tr_report_get_row(const tr_report* report, size_t index, tr_report_row* out) {
  return Guard([&] {
    Require(report, "report");
    Require(out, "out");
    if (index >= report->report.rows.size()) {
      throw tallyrank::ValidationError("report row index out of range");
    }
    const auto& row = report->report.rows[index];
    tr_report_row r{};
    r.model = row.model.c_str();
    r.baseline = row.baseline ? 1 : 0;
    r.trials = row.trials;
    r.average_precision = row.mean.average_precision;
    r.spearman = row.mean.spearman;
    r.ndcg = row.mean.ndcg;
    r.has_std = row.stddev ? 1 : 0;
    if (row.stddev) {
      r.average_precision_std = row.stddev->average_precision;
      r.spearman_std = row.stddev->spearman;
      r.ndcg_std = row.stddev->ndcg;
    }
    r.playoff_hits = row.mean.playoff_hits;
    r.playoff_slots = row.playoff_slots;
    r.tally_sum = row.tally_sum;
    *out = r;
  });
}

tr_status tr_report_render(const tr_report* report, const char* format, char** out) {
  return Guard([&] {
    Require(report, "report");
    Require(format, "format");
    Require(out, "out");
    Emit(out, tallyrank::report::Render(report->report,
                                        tallyrank::report::ParseFormat(format)));
  });
}

tr_status tr_report_write(const tr_report* report, const char* directory) {
  return Guard([&] {
    Require(report, "report");
    Require(directory, "directory");
    tallyrank::pipeline::WriteExperimentOutputs(report->report, directory);
  });
}

void tr_report_free(tr_report* report) { delete report; }

tr_status tr_rank_metrics(const char* const* predicted, const char* const* actual,
                          size_t n, int k, double* average_precision,
                          double* spearman, double* ndcg) {
  return Guard([&] {
    Require(predicted, "predicted");
    Require(actual, "actual");
    std::vector<std::string> p, a;
    for (size_t i = 0; i < n; ++i) {
      Require(predicted[i], "predicted entry");
      Require(actual[i], "actual entry");
      p.emplace_back(predicted[i]);
      a.emplace_back(actual[i]);
    }
    namespace m = tallyrank::metrics;
    if (average_precision) *average_precision = m::AveragePrecision(p, a, k);
    if (spearman) *spearman = m::SpearmanRs(p, a);
    if (ndcg) *ndcg = m::Ndcg(p, m::AssignRelevance(a), static_cast<int>(n));
  });
}

}  // extern "C"

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

/* C interface to the tallyrank library.
 *
 * Every fallible call returns a tr_status. On failure a message is kept per
 * thread and can be read with tr_last_error() until the next call on that
 * thread. Strings returned through char** belong to the caller and are
 * released with tr_string_free(). Handles are opaque and released with their
 * matching *_free function; passing NULL to a free function is a no-op.
 */

#ifndef TALLYRANK_TALLYRANK_H_
#define TALLYRANK_TALLYRANK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(TALLYRANK_BUILDING_LIBRARY)
#define TR_API __attribute__((visibility("default")))
#else
#define TR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tr_status {
  TR_OK = 0,
  TR_ERROR_VALIDATION = 1, /* bad input, config or data */
  TR_ERROR_RUNTIME = 2,    /* I/O failure or numerical breakdown */
} tr_status;

TR_API const char* tr_version(void);
TR_API const char* tr_last_error(void);
TR_API void tr_string_free(char* s);

/* Key-value experiment configuration. */
typedef struct tr_config tr_config;

TR_API tr_status tr_config_create(tr_config** out);
/* Relative paths in the file resolve against the file's directory. */
TR_API tr_status tr_config_load(const char* path, tr_config** out);
TR_API tr_status tr_config_set(tr_config* config, const char* key,
                               const char* value);
TR_API void tr_config_free(tr_config* config);

/* Subcommands. `summary` and the other char** outputs may be NULL. */
TR_API tr_status tr_ingest(const char* sport, const char* input,
                           const char* out_dir, char** summary);
TR_API tr_status tr_synth(const char* spec_path, const char* out_dir,
                          char** summary);
/* `model` NULL trains every configured model. */
TR_API tr_status tr_train(const tr_config* config, const char* model,
                          char** summary);
TR_API tr_status tr_rank(const tr_config* config, const char* model,
                         char** standings_csv);
/* `conferences` may be NULL; `ndcg_mode` is "per_pool" (NULL) or "merged". */
TR_API tr_status tr_evaluate(const char* predicted_path,
                             const char* actual_path, const char* league,
                             const char* conferences, const char* ndcg_mode,
                             char** metrics_csv);
/* `seed` NULL uses the configured baseline seed. */
TR_API tr_status tr_baseline(const tr_config* config, const char* kind,
                             const uint64_t* seed, char** metrics_csv);

/* Runs the experiment, writes every output under the configured output_dir
 * and renders the report in `format` ("csv", "json" or "text"). */
TR_API tr_status tr_report_command(const tr_config* config, const char* format,
                                   char** rendered);

/* Full experiment as a handle. */
typedef struct tr_report tr_report;

typedef struct tr_report_row {
  const char* model; /* valid until the report is freed */
  int baseline;
  int trials;
  double average_precision; /* AP for rugby, mAP for basketball */
  double spearman;
  double ndcg;
  int has_std;
  double average_precision_std;
  double spearman_std;
  double ndcg_std;
  double playoff_hits;
  int playoff_slots;
  double tally_sum;
} tr_report_row;

TR_API tr_status tr_run_experiment(const tr_config* config, tr_report** out);
TR_API size_t tr_report_row_count(const tr_report* report);
TR_API tr_status tr_report_get_row(const tr_report* report, size_t index,
                               tr_report_row* out);
/* `format` is "csv", "json" or "text". */
TR_API tr_status tr_report_render(const tr_report* report, const char* format,
                                  char** out);
/* Report files, standings, baseline trials and model artifacts. */
TR_API tr_status tr_report_write(const tr_report* report,
                                 const char* directory);
TR_API void tr_report_free(tr_report* report);

/* Metrics over two rankings of the same n team names, best first. */
TR_API tr_status tr_rank_metrics(const char* const* predicted,
                                 const char* const* actual, size_t n, int k,
                                 double* average_precision, double* spearman,
                                 double* ndcg);

#ifdef __cplusplus
}
#endif

#endif /* TALLYRANK_TALLYRANK_H_ */

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

// Shared-weight feed-forward network (in -> 70 -> 20 -> 1 by default) used as
// the branches of a Siamese model. Both branches evaluate the single
// SiameseParams instance; gradients from every branch are summed into it.

#ifndef TALLYRANK_SIAMESE_HPP_
#define TALLYRANK_SIAMESE_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tallyrank/core.hpp"
#include "tallyrank/ingest.hpp"

namespace tallyrank::siamese {

enum class Loss { kContrastive, kTriplet };
enum class EmbeddingTap { kFinalScalar, kPenultimate };

std::string_view ToString(Loss loss);
std::string_view ToString(EmbeddingTap tap);
Loss ParseLoss(std::string_view text);
EmbeddingTap ParseEmbeddingTap(std::string_view text);

inline constexpr std::size_t kHiddenWidth1 = 70;
inline constexpr std::size_t kHiddenWidth2 = 20;
inline constexpr std::size_t kOutputWidth = 1;

// Row-major `outputs x inputs` weights.
struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  double& W(std::size_t out, std::size_t in) { return weights[out * inputs + in]; }
  double W(std::size_t out, std::size_t in) const {
    return weights[out * inputs + in];
  }
};

struct SiameseParams {
  // Hidden layers use a rectifier, the last layer is linear.
  std::vector<DenseLayer> layers;

  // {input, 70, 20, 1}
  static std::vector<std::size_t> DefaultShape(std::size_t input_width);
  static SiameseParams Zeros(std::span<const std::size_t> shape);
  // Uniform in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  static SiameseParams Initialize(std::span<const std::size_t> shape,
                                  std::uint64_t seed);

  std::vector<std::size_t> Shape() const;
  std::size_t InputWidth() const;
  std::size_t OutputWidth() const;
  std::size_t ParameterCount() const;

  // Flat views in layer order: weights then bias per layer.
  std::vector<double> Flatten() const;
  void Assign(std::span<const double> flat);
  bool AllFinite() const;
};

using Gradients = SiameseParams;

struct ForwardPass {
  // layer_inputs[l] feeds layer l; layer_inputs[0] is the network input.
  std::vector<std::vector<double>> layer_inputs;
  std::vector<std::vector<double>> pre_activations;
  std::vector<double> output;

  // Activation of the last hidden layer (the 20-unit layer by default).
  const std::vector<double>& Penultimate() const { return layer_inputs.back(); }
};

ForwardPass Forward(const SiameseParams& params, std::span<const double> x);

double EuclideanDistance(std::span<const double> a, std::span<const double> b);

// (1 - y) * d^2 / 2 + y * max(0, m - d)^2 / 2, y = 0 for a home win.
double ContrastiveLoss(int y, double distance, double margin);
// max(d_ap - d_an + m, 0)
double TripletLoss(double d_ap, double d_an, double margin);

struct LossAndGradients {
  double loss = 0.0;  // mean over the batch
  Gradients gradients;
};

double BatchLoss(const SiameseParams& params,
                 std::span<const ingest::TrainingPair> batch, double margin);
double BatchLoss(const SiameseParams& params,
                 std::span<const ingest::TrainingTriplet> batch, double margin);

LossAndGradients ComputeLossGradients(
    const SiameseParams& params, std::span<const ingest::TrainingPair> batch,
    double margin);
LossAndGradients ComputeLossGradients(
    const SiameseParams& params, std::span<const ingest::TrainingTriplet> batch,
    double margin);

struct RmsPropConfig {
  double learning_rate = 0.001;
  double rho = 0.9;
  double epsilon = 1e-7;
};

struct RmsPropState {
  SiameseParams accumulator;  // running mean of squared gradients

  static RmsPropState For(const SiameseParams& params);
};

// acc = rho * acc + (1 - rho) * g^2;  theta -= lr * g / (sqrt(acc) + eps).
// Throws RuntimeError on a non-finite gradient.
void RmsPropStep(SiameseParams& params, const Gradients& grads,
                 RmsPropState& state, const RmsPropConfig& config);

struct TrainConfig {
  Loss loss = Loss::kTriplet;
  double margin = 1.0;
  int epochs = 13;
  std::uint64_t rng_seed = 0;
  EmbeddingTap embedding_tap = EmbeddingTap::kPenultimate;
  // 0 trains full-batch.
  std::size_t batch_size = 0;
  RmsPropConfig optimizer;

  void Validate() const;
};

struct TrainResult {
  SiameseParams params;
  std::vector<double> epoch_losses;
};

// Triplets are re-drawn every epoch; the callback receives the epoch index.
using TripletSource =
    std::function<std::vector<ingest::TrainingTriplet>(int epoch)>;

TrainResult Train(std::span<const ingest::TrainingPair> pairs,
                  const TrainConfig& config);
TrainResult Train(const TripletSource& triplets, const TrainConfig& config);

std::vector<double> Embed(const SiameseParams& params,
                          std::span<const double> x, EmbeddingTap tap);

// kFinalScalar: f(home) - f(away). kPenultimate: the penultimate-layer
// distance signed by the final-scalar difference. Both are antisymmetric;
// predicted_home_win = score >= 0.
GameScore ScoreGame(const SiameseParams& params, std::span<const double> home,
                    std::span<const double> away, EmbeddingTap tap,
                    int game_index = 0);

std::map<TeamId, std::vector<double>> EmbedTeams(
    const SiameseParams& params, std::span<const ingest::TeamSeasonStats> stats,
    EmbeddingTap tap);

// +1 when f(home) - f(away) >= 0 agrees with home wins on at least half of the
// pairs, otherwise -1. Triplet training does not fix the sign of f.
int Orientation(const SiameseParams& params,
                std::span<const ingest::TrainingPair> pairs);

struct SiameseModel {
  SiameseParams params;
  TrainConfig config;
  int orientation = 1;
  std::vector<double> epoch_losses;
};

// Versioned text format; doubles are written in shortest round-trip form.
void WriteModel(std::ostream& out, const SiameseModel& model);
SiameseModel ReadModel(std::istream& in);
// `epoch,mean_loss` lines with a header.
void WriteTrainingLog(std::ostream& out, std::span<const double> epoch_losses);

}  // namespace tallyrank::siamese

#endif  // TALLYRANK_SIAMESE_HPP_

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

#include "tallyrank/siamese.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "tallyrank/random.hpp"

namespace tallyrank::siamese {
namespace {

using Shape = std::vector<std::size_t>;

// Scalar-chain evaluation that walks each weight individually.
double ChainOutput(const SiameseParams& p, const std::vector<double>& x) {
  std::vector<double> a = x;
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const DenseLayer& layer = p.layers[l];
    std::vector<double> next;
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      double z = layer.bias[o];
      for (std::size_t i = 0; i < layer.inputs; ++i) z += layer.weights[o * layer.inputs + i] * a[i];
      if (l + 1 < p.layers.size()) z = z > 0 ? z : 0.0;
      next.push_back(z);
    }
    a = next;
  }
  return a[0];
}

std::vector<double> RandomVector(random::Engine& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = random::Uniform(rng, 0.0, 1.0);
  return v;
}

SiameseParams Identity1d() {
  const Shape shape{1, 1, 1, 1};
  SiameseParams p = SiameseParams::Zeros(shape);
  for (auto& layer : p.layers) layer.weights[0] = 1.0;
  return p;
}

TEST_CASE("default shape is in-70-20-1") {
  CHECK(SiameseParams::DefaultShape(37) == Shape{37, 70, 20, 1});
  const auto p = SiameseParams::Initialize(SiameseParams::DefaultShape(37), 1);
  CHECK(p.ParameterCount() == 37 * 70 + 70 + 70 * 20 + 20 + 20 + 1);
  for (const auto& layer : p.layers) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    for (double w : layer.weights) CHECK(std::abs(w) <= limit);
    for (double b : layer.bias) CHECK(b == 0.0);
  }
  CHECK(SiameseParams::Initialize(Shape{4, 3, 1}, 9).Flatten() ==
        SiameseParams::Initialize(Shape{4, 3, 1}, 9).Flatten());
}

TEST_CASE("forward pass") {
  const Shape shape{2, 70, 20, 1};
  SiameseParams zero = SiameseParams::Zeros(shape);
  CHECK(Forward(zero, std::vector<double>{0.3, 0.7}).output[0] == 0.0);
  zero.layers.back().bias[0] = 0.25;
  CHECK(Forward(zero, std::vector<double>{0.3, 0.7}).output[0] == 0.25);

  random::Engine rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    SiameseParams p = SiameseParams::Initialize(shape, 100 + trial);
    for (auto& layer : p.layers) {
      for (auto& b : layer.bias) b = random::Uniform(rng, -0.2, 0.2);
    }
    const auto x = RandomVector(rng, 2);
    const auto pass = Forward(p, x);
    CHECK(std::abs(pass.output[0] - ChainOutput(p, x)) <= 1e-12);
    CHECK(pass.Penultimate().size() == 20);
  }
  CHECK_THROWS_AS(Forward(SiameseParams::Zeros(shape), std::vector<double>{1.0}), ValidationError);
}

TEST_CASE("euclidean distance") {
  CHECK(EuclideanDistance(std::vector<double>{1, 2}, std::vector<double>{1, 2}) == 0.0);
  CHECK(EuclideanDistance(std::vector<double>{0, 0}, std::vector<double>{3, 4}) == 5.0);
  CHECK(EuclideanDistance(std::vector<double>{1}, std::vector<double>{2}) == 1.0);
  CHECK_THROWS_AS(EuclideanDistance(std::vector<double>{1}, std::vector<double>{2, 3}),
                  ValidationError);
}

TEST_CASE("contrastive and triplet losses") {
  CHECK(ContrastiveLoss(0, 0.5, 1.0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(ContrastiveLoss(1, 1.2, 1.0) == 0.0);
  CHECK(ContrastiveLoss(1, 0.5, 1.0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(TripletLoss(0.2, 0.9, 0.5) == 0.0);
  CHECK(TripletLoss(0.7, 0.3, 0.5) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(TripletLoss(0.0, 0.0, 0.5) == 0.5);
  CHECK_THROWS_AS(ContrastiveLoss(2, 0.5, 1.0), ValidationError);
  CHECK_THROWS_AS(TripletLoss(0.1, 0.2, 0.0), ValidationError);
}

TEST_CASE("inactive hinges give zero gradients") {
  const auto p = Identity1d();
  // f(x) = x, so D(2, 0) = 2 > m = 1.
  const std::vector<ingest::TrainingPair> far{{{2.0}, {0.0}, 1}};
  const auto g = ComputeLossGradients(p, far, 1.0);
  CHECK(g.loss == 0.0);
  for (double v : g.gradients.Flatten()) CHECK(v == 0.0);
  const std::vector<ingest::TrainingTriplet> easy{{{0.5}, {0.5}, {3.0}}};
  const auto t = ComputeLossGradients(p, easy, 1.0);
  CHECK(t.loss == 0.0);
  for (double v : t.gradients.Flatten()) CHECK(v == 0.0);
}

// Minimum |pre-activation| over every hidden unit the batch touches.
double KinkDistance(const SiameseParams& p, const std::vector<std::vector<double>>& inputs) {
  double closest = 1e300;
  for (const auto& x : inputs) {
    const auto pass = Forward(p, x);
    for (std::size_t l = 0; l + 1 < pass.pre_activations.size(); ++l) {
      for (double z : pass.pre_activations[l]) closest = std::min(closest, std::abs(z));
    }
  }
  return closest;
}

template <typename Batch>
double MaxRelativeError(const SiameseParams& p, const Batch& batch, double margin) {
  const auto analytic = ComputeLossGradients(p, batch, margin).gradients.Flatten();
  const auto flat = p.Flatten();
  const auto f = [&](const std::vector<double>& theta) {
    SiameseParams q = p;
    q.Assign(theta);
    return BatchLoss(q, batch, margin);
  };
  double worst = 0.0;
  for (std::size_t k = 0; k < flat.size(); ++k) {
    const double numeric = oracle::CentralDifference(f, flat, k, 1e-5);
    const double denom = std::max({std::abs(numeric), std::abs(analytic[k]), 1e-6});
    worst = std::max(worst, std::abs(numeric - analytic[k]) / denom);
  }
  return worst;
}

TEST_CASE("gradients match central differences") {
  random::Engine rng(23);
  const Shape shape{3, 6, 4, 2};
  int checked = 0;
  for (int draw = 0; checked < 12 && draw < 200; ++draw) {
    SiameseParams p = SiameseParams::Initialize(shape, 500 + draw);
    for (auto& layer : p.layers) {
      for (auto& b : layer.bias) b = random::Uniform(rng, -0.3, 0.3);
    }
    std::vector<ingest::TrainingPair> pairs;
    std::vector<ingest::TrainingTriplet> triplets;
    std::vector<std::vector<double>> inputs;
    for (int i = 0; i < 4; ++i) {
      ingest::TrainingPair pr{RandomVector(rng, 3), RandomVector(rng, 3), i % 2};
      ingest::TrainingTriplet tr{RandomVector(rng, 3), RandomVector(rng, 3), RandomVector(rng, 3)};
      for (const auto* v : {&pr.home, &pr.away, &tr.anchor, &tr.positive, &tr.negative}) {
        inputs.push_back(*v);
      }
      pairs.push_back(pr);
      triplets.push_back(tr);
    }
    if (KinkDistance(p, inputs) < 1e-3) continue;  // too close to a rectifier kink
    const double margin = 1.0;
    CHECK(MaxRelativeError(p, pairs, margin) <= 1e-4);
    CHECK(MaxRelativeError(p, triplets, margin) <= 1e-4);
    ++checked;
  }
  CHECK(checked == 12);
}

TEST_CASE("rmsprop step") {
  const Shape shape{1, 1};
  SiameseParams p = SiameseParams::Zeros(shape);
  Gradients g = SiameseParams::Zeros(shape);
  g.layers[0].weights[0] = 1.0;
  auto state = RmsPropState::For(p);
  RmsPropStep(p, g, state, RmsPropConfig{});
  CHECK(state.accumulator.layers[0].weights[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(p.layers[0].weights[0] == doctest::Approx(-0.00316228).epsilon(1e-6));
  CHECK(p.layers[0].bias[0] == 0.0);

  // Zero gradient: parameters hold, the accumulator decays.
  const double before = p.layers[0].weights[0];
  RmsPropStep(p, SiameseParams::Zeros(shape), state, RmsPropConfig{});
  CHECK(p.layers[0].weights[0] == before);
  CHECK(state.accumulator.layers[0].weights[0] == doctest::Approx(0.09).epsilon(1e-15));

  RmsPropConfig frozen;
  frozen.learning_rate = 0.0;
  RmsPropStep(p, g, state, frozen);
  CHECK(p.layers[0].weights[0] == before);

  Gradients bad = g;
  bad.layers[0].weights[0] = std::nan("");
  CHECK_THROWS_AS(RmsPropStep(p, bad, state, RmsPropConfig{}), RuntimeError);
}

std::vector<ingest::TrainingPair> SeparablePairs(int n, std::uint64_t seed) {
  random::Engine rng(seed);
  std::vector<ingest::TrainingPair> pairs;
  for (int i = 0; i < n; ++i) {
    auto h = RandomVector(rng, 4);
    auto a = RandomVector(rng, 4);
    pairs.push_back({h, a, h[0] > a[0] ? 0 : 1});
  }
  return pairs;
}

TEST_CASE("training logs one loss per epoch and is deterministic") {
  const auto pairs = SeparablePairs(60, 1);
  TrainConfig config;
  config.loss = Loss::kContrastive;
  config.rng_seed = 5;
  const auto a = Train(pairs, config);
  const auto b = Train(pairs, config);
  CHECK(a.epoch_losses.size() == 13);
  CHECK(a.params.Flatten() == b.params.Flatten());
  CHECK(a.epoch_losses == b.epoch_losses);

  config.optimizer.learning_rate = 0.0;
  const auto frozen = Train(pairs, config);
  CHECK(frozen.params.Flatten() ==
        SiameseParams::Initialize(SiameseParams::DefaultShape(4), 5).Flatten());

  config.epochs = 0;
  CHECK_THROWS_AS(Train(pairs, config), ValidationError);
}

TEST_CASE("triplet training draws a fresh set each epoch") {
  std::vector<int> epochs_seen;
  TripletSource source = [&](int epoch) {
    epochs_seen.push_back(epoch);
    random::Engine rng(static_cast<std::uint64_t>(epoch) + 1);
    std::vector<ingest::TrainingTriplet> out;
    for (int i = 0; i < 10; ++i) {
      out.push_back({RandomVector(rng, 3), RandomVector(rng, 3), RandomVector(rng, 3)});
    }
    return out;
  };
  TrainConfig config;
  config.epochs = 4;
  const auto r = Train(source, config);
  CHECK(r.epoch_losses.size() == 4);
  CHECK(epochs_seen == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("game scores") {
  const auto p = Identity1d();
  const std::vector<double> same{0.4};
  const auto tie = ScoreGame(p, same, same, EmbeddingTap::kFinalScalar, 3);
  CHECK(tie.score == 0.0);
  CHECK(tie.predicted_home_win);
  CHECK(tie.game_index == 3);
  const auto g = ScoreGame(p, std::vector<double>{0.9}, std::vector<double>{0.2},
                           EmbeddingTap::kFinalScalar);
  CHECK(g.score == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(g.predicted_home_win);
  const auto r = ScoreGame(p, std::vector<double>{0.2}, std::vector<double>{0.9},
                           EmbeddingTap::kFinalScalar);
  CHECK(r.score == doctest::Approx(-0.7).epsilon(1e-15));
  CHECK_FALSE(r.predicted_home_win);
}

TEST_CASE("team embeddings follow the tap") {
  const auto p = SiameseParams::Initialize(SiameseParams::DefaultShape(3), 2);
  std::vector<ingest::TeamSeasonStats> stats{{"A", 2020, {0.1, 0.2, 0.3}, {}},
                                             {"B", 2020, {0.1, 0.2, 0.3}, {}}};
  const auto pen = EmbedTeams(p, stats, EmbeddingTap::kPenultimate);
  const auto fin = EmbedTeams(p, stats, EmbeddingTap::kFinalScalar);
  CHECK(pen.at("A").size() == 20);
  CHECK(fin.at("A").size() == 1);
  CHECK(pen.at("A") == pen.at("B"));
}

TEST_CASE("model text round trip") {
  SiameseModel model;
  model.config.loss = Loss::kContrastive;
  model.config.margin = 0.5;
  model.params = SiameseParams::Initialize(Shape{3, 4, 2, 1}, 8);
  model.orientation = -1;
  model.epoch_losses = {0.5, 0.25};
  std::stringstream buffer;
  WriteModel(buffer, model);
  const auto back = ReadModel(buffer);
  CHECK(back.params.Flatten() == model.params.Flatten());
  CHECK(back.params.Shape() == model.params.Shape());
  CHECK(back.orientation == -1);
  CHECK(back.config.loss == Loss::kContrastive);
  CHECK(back.config.margin == 0.5);
  CHECK(back.epoch_losses == model.epoch_losses);
}

}  // namespace
}  // namespace tallyrank::siamese

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

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "tallyrank/csv.hpp"
#include "tallyrank/random.hpp"

namespace tallyrank::siamese {

std::string_view ToString(Loss loss) {
  return loss == Loss::kContrastive ? "contrastive" : "triplet";
}

std::string_view ToString(EmbeddingTap tap) {
  return tap == EmbeddingTap::kFinalScalar ? "final_scalar" : "penultimate_20";
}

Loss ParseLoss(std::string_view text) {
  if (text == "contrastive") return Loss::kContrastive;
  if (text == "triplet") return Loss::kTriplet;
  throw ValidationError("unknown loss '" + std::string(text) + "'");
}

EmbeddingTap ParseEmbeddingTap(std::string_view text) {
  if (text == "final_scalar") return EmbeddingTap::kFinalScalar;
  if (text == "penultimate_20" || text == "penultimate") {
    return EmbeddingTap::kPenultimate;
  }
  throw ValidationError("unknown embedding tap '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Parameters

std::vector<std::size_t> SiameseParams::DefaultShape(std::size_t input_width) {
  return {input_width, kHiddenWidth1, kHiddenWidth2, kOutputWidth};
}

SiameseParams SiameseParams::Zeros(std::span<const std::size_t> shape) {
  if (shape.size() < 2) throw ValidationError("network needs at least one layer");
  SiameseParams params;
  for (std::size_t l = 0; l + 1 < shape.size(); ++l) {
    if (shape[l] == 0 || shape[l + 1] == 0) {
      throw ValidationError("layer widths must be positive");
    }
    DenseLayer layer;
    layer.inputs = shape[l];
    layer.outputs = shape[l + 1];
    layer.weights.assign(layer.inputs * layer.outputs, 0.0);
    layer.bias.assign(layer.outputs, 0.0);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

SiameseParams SiameseParams::Initialize(std::span<const std::size_t> shape,
                                        std::uint64_t seed) {
  SiameseParams params = Zeros(shape);
  std::mt19937_64 rng(seed);
  for (auto& layer : params.layers) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    for (double& w : layer.weights) w = random::Uniform(rng, -limit, limit);
  }
  return params;
}

std::vector<std::size_t> SiameseParams::Shape() const {
  std::vector<std::size_t> shape;
  if (layers.empty()) return shape;
  shape.push_back(layers.front().inputs);
  for (const auto& layer : layers) shape.push_back(layer.outputs);
  return shape;
}

std::size_t SiameseParams::InputWidth() const {
  return layers.empty() ? 0 : layers.front().inputs;
}

std::size_t SiameseParams::OutputWidth() const {
  return layers.empty() ? 0 : layers.back().outputs;
}

std::size_t SiameseParams::ParameterCount() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.weights.size() + layer.bias.size();
  return n;
}

std::vector<double> SiameseParams::Flatten() const {
  std::vector<double> flat;
  flat.reserve(ParameterCount());
  for (const auto& layer : layers) {
    flat.insert(flat.end(), layer.weights.begin(), layer.weights.end());
    flat.insert(flat.end(), layer.bias.begin(), layer.bias.end());
  }
  return flat;
}

void SiameseParams::Assign(std::span<const double> flat) {
  if (flat.size() != ParameterCount()) {
    throw ValidationError("flat parameter vector has wrong length");
  }
  std::size_t k = 0;
  for (auto& layer : layers) {
    for (double& w : layer.weights) w = flat[k++];
    for (double& b : layer.bias) b = flat[k++];
  }
}

bool SiameseParams::AllFinite() const {
  for (const auto& layer : layers) {
    for (double w : layer.weights) {
      if (!std::isfinite(w)) return false;
    }
    for (double b : layer.bias) {
      if (!std::isfinite(b)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Forward / distances / losses

ForwardPass Forward(const SiameseParams& params, std::span<const double> x) {
  if (x.size() != params.InputWidth()) {
    throw ValidationError("input has " + std::to_string(x.size()) +
                          " features, network expects " +
                          std::to_string(params.InputWidth()));
  }
  ForwardPass pass;
  pass.layer_inputs.emplace_back(x.begin(), x.end());
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const DenseLayer& layer = params.layers[l];
    const std::vector<double>& in = pass.layer_inputs.back();
    std::vector<double> z(layer.bias);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* row = &layer.weights[o * layer.inputs];
      double acc = 0.0;
      for (std::size_t i = 0; i < layer.inputs; ++i) acc += row[i] * in[i];
      z[o] += acc;
    }
    const bool last = l + 1 == params.layers.size();
    std::vector<double> a(z);
    if (!last) {
      for (double& v : a) v = std::max(0.0, v);
    }
    pass.pre_activations.push_back(std::move(z));
    if (last) {
      pass.output = std::move(a);
    } else {
      pass.layer_inputs.push_back(std::move(a));
    }
  }
  return pass;
}

double EuclideanDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("distance between vectors of different length");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = b[k] - a[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double ContrastiveLoss(int y, double distance, double margin) {
  if (distance < 0.0) throw ValidationError("distance must be non-negative");
  if (y != 0 && y != 1) throw ValidationError("contrastive label must be 0 or 1");
  if (!(margin > 0.0)) throw ValidationError("margin must be positive");
  const double hinge = std::max(0.0, margin - distance);
  return (1 - y) * 0.5 * distance * distance + y * 0.5 * hinge * hinge;
}

double TripletLoss(double d_ap, double d_an, double margin) {
  if (d_ap < 0.0 || d_an < 0.0) {
    throw ValidationError("distances must be non-negative");
  }
  if (!(margin > 0.0)) throw ValidationError("margin must be positive");
  return std::max(d_ap - d_an + margin, 0.0);
}

// ---------------------------------------------------------------------------
// Backpropagation

namespace {

// d distance / d a for distance = |a - b|; zero at coincident points.
std::vector<double> DistanceGradient(const std::vector<double>& a,
                                     const std::vector<double>& b,
                                     double distance) {
  std::vector<double> g(a.size(), 0.0);
  if (distance == 0.0) return g;
  for (std::size_t k = 0; k < a.size(); ++k) g[k] = (a[k] - b[k]) / distance;
  return g;
}

// Adds d loss / d params for one branch given d loss / d output.
void Backward(const SiameseParams& params, const ForwardPass& pass,
              std::vector<double> upstream, Gradients& grads) {
  for (std::size_t l = params.layers.size(); l-- > 0;) {
    const DenseLayer& layer = params.layers[l];
    DenseLayer& g = grads.layers[l];
    const std::vector<double>& in = pass.layer_inputs[l];
    if (l + 1 != params.layers.size()) {
      // The rectifier's subgradient at zero is zero.
      const auto& z = pass.pre_activations[l];
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        if (z[o] <= 0.0) upstream[o] = 0.0;
      }
    }
    std::vector<double> downstream(l > 0 ? layer.inputs : 0, 0.0);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double delta = upstream[o];
      if (delta == 0.0) continue;
      g.bias[o] += delta;
      double* grow = &g.weights[o * layer.inputs];
      const double* wrow = &layer.weights[o * layer.inputs];
      for (std::size_t i = 0; i < layer.inputs; ++i) grow[i] += delta * in[i];
      if (l > 0) {
        for (std::size_t i = 0; i < layer.inputs; ++i) {
          downstream[i] += delta * wrow[i];
        }
      }
    }
    upstream = std::move(downstream);
  }
}

void Scale(Gradients& grads, double factor) {
  for (auto& layer : grads.layers) {
    for (double& w : layer.weights) w *= factor;
    for (double& b : layer.bias) b *= factor;
  }
}

std::vector<double> Scaled(const std::vector<double>& v, double factor) {
  std::vector<double> out(v);
  for (double& x : out) x *= factor;
  return out;
}

void RequireNonEmpty(std::size_t n) {
  if (n == 0) throw ValidationError("loss gradients need a non-empty batch");
}

}  // namespace

double BatchLoss(const SiameseParams& params,
                 std::span<const ingest::TrainingPair> batch, double margin) {
  RequireNonEmpty(batch.size());
  double total = 0.0;
  for (const auto& pair : batch) {
    const auto a = Forward(params, pair.home).output;
    const auto b = Forward(params, pair.away).output;
    total += ContrastiveLoss(pair.label, EuclideanDistance(a, b), margin);
  }
  return total / static_cast<double>(batch.size());
}

double BatchLoss(const SiameseParams& params,
                 std::span<const ingest::TrainingTriplet> batch, double margin) {
  RequireNonEmpty(batch.size());
  double total = 0.0;
  for (const auto& t : batch) {
    const auto a = Forward(params, t.anchor).output;
    const auto p = Forward(params, t.positive).output;
    const auto n = Forward(params, t.negative).output;
    total += TripletLoss(EuclideanDistance(a, p), EuclideanDistance(a, n), margin);
  }
  return total / static_cast<double>(batch.size());
}

LossAndGradients ComputeLossGradients(
    const SiameseParams& params, std::span<const ingest::TrainingPair> batch,
    double margin) {
  RequireNonEmpty(batch.size());
  LossAndGradients result{0.0, SiameseParams::Zeros(params.Shape())};
  for (const auto& pair : batch) {
    const ForwardPass home = Forward(params, pair.home);
    const ForwardPass away = Forward(params, pair.away);
    const double d = EuclideanDistance(home.output, away.output);
    result.loss += ContrastiveLoss(pair.label, d, margin);
    // d loss / d distance
    double dl_dd = 0.0;
    if (pair.label == 0) {
      dl_dd = d;
    } else if (d < margin) {
      dl_dd = -(margin - d);
    }
    if (dl_dd == 0.0) continue;
    const auto dd_dhome = DistanceGradient(home.output, away.output, d);
    Backward(params, home, Scaled(dd_dhome, dl_dd), result.gradients);
    Backward(params, away, Scaled(dd_dhome, -dl_dd), result.gradients);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  result.loss *= inv;
  Scale(result.gradients, inv);
  return result;
}

LossAndGradients ComputeLossGradients(
    const SiameseParams& params, std::span<const ingest::TrainingTriplet> batch,
    double margin) {
  RequireNonEmpty(batch.size());
  LossAndGradients result{0.0, SiameseParams::Zeros(params.Shape())};
  for (const auto& t : batch) {
    const ForwardPass anchor = Forward(params, t.anchor);
    const ForwardPass positive = Forward(params, t.positive);
    const ForwardPass negative = Forward(params, t.negative);
    const double d_ap = EuclideanDistance(anchor.output, positive.output);
    const double d_an = EuclideanDistance(anchor.output, negative.output);
    const double hinge = d_ap - d_an + margin;
    if (hinge <= 0.0) continue;
    result.loss += hinge;
    const auto g_ap = DistanceGradient(anchor.output, positive.output, d_ap);
    const auto g_an = DistanceGradient(anchor.output, negative.output, d_an);
    std::vector<double> g_anchor(g_ap.size());
    for (std::size_t k = 0; k < g_ap.size(); ++k) g_anchor[k] = g_ap[k] - g_an[k];
    Backward(params, anchor, g_anchor, result.gradients);
    Backward(params, positive, Scaled(g_ap, -1.0), result.gradients);
    Backward(params, negative, g_an, result.gradients);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  result.loss *= inv;
  Scale(result.gradients, inv);
  return result;
}

// ---------------------------------------------------------------------------
// Optimizer

RmsPropState RmsPropState::For(const SiameseParams& params) {
  return RmsPropState{SiameseParams::Zeros(params.Shape())};
}

void RmsPropStep(SiameseParams& params, const Gradients& grads,
                 RmsPropState& state, const RmsPropConfig& config) {
  if (params.Shape() != grads.Shape() ||
      params.Shape() != state.accumulator.Shape()) {
    throw ValidationError("RMSprop shapes disagree");
  }
  const auto update = [&](std::vector<double>& theta,
                          const std::vector<double>& g,
                          std::vector<double>& acc, std::size_t layer,
                          const char* kind) {
    for (std::size_t k = 0; k < theta.size(); ++k) {
      if (!std::isfinite(g[k])) {
        throw RuntimeError("non-finite gradient in layer " +
                           std::to_string(layer) + " " + kind + "[" +
                           std::to_string(k) + "]; training aborted");
      }
      acc[k] = config.rho * acc[k] + (1.0 - config.rho) * g[k] * g[k];
      theta[k] -= config.learning_rate * g[k] / (std::sqrt(acc[k]) + config.epsilon);
    }
  };
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    update(params.layers[l].weights, grads.layers[l].weights,
           state.accumulator.layers[l].weights, l, "weights");
    update(params.layers[l].bias, grads.layers[l].bias,
           state.accumulator.layers[l].bias, l, "bias");
  }
}

// ---------------------------------------------------------------------------
// Training

void TrainConfig::Validate() const {
  if (epochs < 1) throw ValidationError("epochs must be at least 1");
  if (!(margin > 0.0)) throw ValidationError("margin must be positive");
  if (optimizer.learning_rate < 0.0) {
    throw ValidationError("learning rate must be non-negative");
  }
  if (optimizer.rho < 0.0 || optimizer.rho >= 1.0) {
    throw ValidationError("RMSprop discount must lie in [0, 1)");
  }
  if (!(optimizer.epsilon > 0.0)) {
    throw ValidationError("RMSprop epsilon must be positive");
  }
}

namespace {

template <typename Sample>
TrainResult TrainLoop(
    const std::function<std::vector<Sample>(int)>& source,
    const TrainConfig& config) {
  config.Validate();
  std::vector<Sample> first = source(0);
  if (first.empty()) throw ValidationError("no training samples");
  std::size_t width = 0;
  if constexpr (std::is_same_v<Sample, ingest::TrainingPair>) {
    width = first.front().home.size();
  } else {
    width = first.front().anchor.size();
  }

  TrainResult result;
  result.params = SiameseParams::Initialize(SiameseParams::DefaultShape(width),
                                            config.rng_seed);
  RmsPropState state = RmsPropState::For(result.params);
  std::mt19937_64 shuffle_rng(config.rng_seed ^ 0x9e3779b97f4a7c15ULL);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<Sample> samples = epoch == 0 ? std::move(first) : source(epoch);
    const std::size_t n = samples.size();
    std::size_t batch = config.batch_size == 0 ? n : std::min(config.batch_size, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (batch < n) random::Shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0.0;
    std::vector<Sample> chunk;
    for (std::size_t start = 0; start < n; start += batch) {
      chunk.clear();
      for (std::size_t k = start; k < std::min(n, start + batch); ++k) {
        chunk.push_back(samples[order[k]]);
      }
      auto lg = ComputeLossGradients(result.params, chunk, config.margin);
      if (!std::isfinite(lg.loss)) {
        throw RuntimeError("non-finite loss at epoch " + std::to_string(epoch));
      }
      RmsPropStep(result.params, lg.gradients, state, config.optimizer);
      loss_sum += lg.loss * static_cast<double>(chunk.size());
    }
    result.epoch_losses.push_back(loss_sum / static_cast<double>(n));
  }
  return result;
}

}  // namespace

TrainResult Train(std::span<const ingest::TrainingPair> pairs,
                  const TrainConfig& config) {
  std::vector<ingest::TrainingPair> copy(pairs.begin(), pairs.end());
  std::function<std::vector<ingest::TrainingPair>(int)> source =
      [&copy](int) { return copy; };
  return TrainLoop(source, config);
}

TrainResult Train(const TripletSource& triplets, const TrainConfig& config) {
  std::function<std::vector<ingest::TrainingTriplet>(int)> source = triplets;
  return TrainLoop(source, config);
}

// ---------------------------------------------------------------------------
// Scoring

std::vector<double> Embed(const SiameseParams& params,
                          std::span<const double> x, EmbeddingTap tap) {
  ForwardPass pass = Forward(params, x);
  if (tap == EmbeddingTap::kFinalScalar) return pass.output;
  return pass.Penultimate();
}

GameScore ScoreGame(const SiameseParams& params, std::span<const double> home,
                    std::span<const double> away, EmbeddingTap tap,
                    int game_index) {
  const ForwardPass h = Forward(params, home);
  const ForwardPass a = Forward(params, away);
  const double diff = h.output.front() - a.output.front();
  double score = diff;
  if (tap == EmbeddingTap::kPenultimate) {
    const double d = EuclideanDistance(h.Penultimate(), a.Penultimate());
    score = diff > 0.0 ? d : (diff < 0.0 ? -d : 0.0);
  }
  return MakeGameScore(game_index, score);
}

std::map<TeamId, std::vector<double>> EmbedTeams(
    const SiameseParams& params, std::span<const ingest::TeamSeasonStats> stats,
    EmbeddingTap tap) {
  std::map<TeamId, std::vector<double>> out;
  for (const auto& s : stats) out[s.team_id] = Embed(params, s.features, tap);
  return out;
}

int Orientation(const SiameseParams& params,
                std::span<const ingest::TrainingPair> pairs) {
  std::size_t agree = 0;
  for (const auto& p : pairs) {
    const bool predicted_home =
        ScoreGame(params, p.home, p.away, EmbeddingTap::kFinalScalar)
            .predicted_home_win;
    if (predicted_home == (p.label == 0)) ++agree;
  }
  return 2 * agree >= pairs.size() ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr std::string_view kMagic = "tallyrank-siamese";
constexpr int kFormatVersion = 1;

void WriteVector(std::ostream& out, std::string_view tag,
                 const std::vector<double>& values, std::size_t begin,
                 std::size_t count) {
  out << tag;
  for (std::size_t k = begin; k < begin + count; ++k) {
    out << ' ' << csv::FormatDouble(values[k]);
  }
  out << '\n';
}

std::string ExpectKey(std::istream& in, std::string_view key) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("siamese model: unexpected end of file before '" +
                          std::string(key) + "'");
  }
  std::istringstream fields(line);
  std::string got;
  fields >> got;
  if (got != key) {
    throw ValidationError("siamese model: expected '" + std::string(key) +
                          "', found '" + got + "'");
  }
  std::string rest;
  std::getline(fields, rest);
  return std::string(csv::Trim(rest));
}

std::vector<double> ParseNumbers(const std::string& text, std::size_t expected,
                                 std::string_view what) {
  std::istringstream in(text);
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    auto v = csv::ParseDouble(token);
    if (!v) {
      throw ValidationError("siamese model: bad number '" + token + "' in " +
                            std::string(what));
    }
    values.push_back(*v);
  }
  if (values.size() != expected) {
    throw ValidationError("siamese model: " + std::string(what) + " has " +
                          std::to_string(values.size()) + " values, expected " +
                          std::to_string(expected));
  }
  return values;
}

double ParseScalar(const std::string& text, std::string_view what) {
  return ParseNumbers(text, 1, what).front();
}

}  // namespace

void WriteModel(std::ostream& out, const SiameseModel& model) {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "shape";
  for (std::size_t w : model.params.Shape()) out << ' ' << w;
  out << '\n';
  out << "loss " << ToString(model.config.loss) << '\n';
  out << "margin " << csv::FormatDouble(model.config.margin) << '\n';
  out << "epochs " << model.config.epochs << '\n';
  out << "seed " << model.config.rng_seed << '\n';
  out << "tap " << ToString(model.config.embedding_tap) << '\n';
  out << "batch_size " << model.config.batch_size << '\n';
  out << "learning_rate " << csv::FormatDouble(model.config.optimizer.learning_rate) << '\n';
  out << "rho " << csv::FormatDouble(model.config.optimizer.rho) << '\n';
  out << "epsilon " << csv::FormatDouble(model.config.optimizer.epsilon) << '\n';
  out << "orientation " << model.orientation << '\n';
  WriteVector(out, "epoch_losses", model.epoch_losses, 0, model.epoch_losses.size());
  for (std::size_t l = 0; l < model.params.layers.size(); ++l) {
    const DenseLayer& layer = model.params.layers[l];
    out << "layer " << l << ' ' << layer.outputs << ' ' << layer.inputs << '\n';
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      WriteVector(out, "w", layer.weights, o * layer.inputs, layer.inputs);
    }
    WriteVector(out, "b", layer.bias, 0, layer.outputs);
  }
  out << "end\n";
}

SiameseModel ReadModel(std::istream& in) {
  std::string header;
  std::getline(in, header);
  if (header != std::string(kMagic) + " " + std::to_string(kFormatVersion)) {
    throw ValidationError("not a tallyrank siamese model (version " +
                          std::to_string(kFormatVersion) + ")");
  }
  SiameseModel model;
  std::vector<std::size_t> shape;
  {
    std::istringstream s(ExpectKey(in, "shape"));
    std::size_t w;
    while (s >> w) shape.push_back(w);
  }
  model.config.loss = ParseLoss(ExpectKey(in, "loss"));
  model.config.margin = ParseScalar(ExpectKey(in, "margin"), "margin");
  model.config.epochs = static_cast<int>(ParseScalar(ExpectKey(in, "epochs"), "epochs"));
  model.config.rng_seed = std::stoull(ExpectKey(in, "seed"));
  model.config.embedding_tap = ParseEmbeddingTap(ExpectKey(in, "tap"));
  model.config.batch_size = std::stoull(ExpectKey(in, "batch_size"));
  model.config.optimizer.learning_rate =
      ParseScalar(ExpectKey(in, "learning_rate"), "learning_rate");
  model.config.optimizer.rho = ParseScalar(ExpectKey(in, "rho"), "rho");
  model.config.optimizer.epsilon = ParseScalar(ExpectKey(in, "epsilon"), "epsilon");
  model.orientation = static_cast<int>(
      ParseScalar(ExpectKey(in, "orientation"), "orientation"));
  if (model.orientation != 1 && model.orientation != -1) {
    throw ValidationError("siamese model: orientation must be +1 or -1");
  }
  {
    std::string text = ExpectKey(in, "epoch_losses");
    std::istringstream s(text);
    std::string token;
    while (s >> token) {
      auto v = csv::ParseDouble(token);
      if (!v) throw ValidationError("siamese model: bad epoch loss");
      model.epoch_losses.push_back(*v);
    }
  }
  model.params = SiameseParams::Zeros(shape);
  for (std::size_t l = 0; l < model.params.layers.size(); ++l) {
    DenseLayer& layer = model.params.layers[l];
    std::istringstream s(ExpectKey(in, "layer"));
    std::size_t index, outputs, inputs;
    if (!(s >> index >> outputs >> inputs) || index != l ||
        outputs != layer.outputs || inputs != layer.inputs) {
      throw ValidationError("siamese model: layer header disagrees with shape");
    }
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      auto row = ParseNumbers(ExpectKey(in, "w"), layer.inputs, "weight row");
      std::copy(row.begin(), row.end(), layer.weights.begin() + o * layer.inputs);
    }
    layer.bias = ParseNumbers(ExpectKey(in, "b"), layer.outputs, "bias");
  }
  ExpectKey(in, "end");
  if (!model.params.AllFinite()) {
    throw ValidationError("siamese model: non-finite parameter");
  }
  return model;
}

void WriteTrainingLog(std::ostream& out, std::span<const double> epoch_losses) {
  out << "epoch,mean_loss\n";
  for (std::size_t e = 0; e < epoch_losses.size(); ++e) {
    out << (e + 1) << ',' << csv::FormatDouble(epoch_losses[e]) << '\n';
  }
}

}  // namespace tallyrank::siamese

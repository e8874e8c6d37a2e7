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

#include "tallyrank/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "tallyrank/csv.hpp"

namespace tallyrank::gbm {

std::string_view ToString(Objective objective) {
  switch (objective) {
    case Objective::kSquaredError:
      return "squared_error";
    case Objective::kBinaryLogistic:
      return "binary_logistic";
    case Objective::kPairwiseLogistic:
      return "pairwise_logistic";
    case Objective::kNdcgScaledPairwise:
      return "ndcg_scaled_pairwise";
  }
  return "unknown";
}

Objective ParseObjective(std::string_view text) {
  for (Objective o : {Objective::kSquaredError, Objective::kBinaryLogistic,
                      Objective::kPairwiseLogistic,
                      Objective::kNdcgScaledPairwise}) {
    if (text == ToString(o)) return o;
  }
  throw ValidationError("unknown objective '" + std::string(text) + "'");
}

bool IsRanking(Objective objective) {
  return objective == Objective::kPairwiseLogistic ||
         objective == Objective::kNdcgScaledPairwise;
}

// ---------------------------------------------------------------------------
// Data

Matrix Matrix::FromRows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  for (const auto& r : rows) m.AppendRow(r);
  return m;
}

void Matrix::AppendRow(std::span<const double> values) {
  if (rows_ == 0 && data_.empty()) {
    cols_ = values.size();
  } else if (values.size() != cols_) {
    throw ValidationError("row has " + std::to_string(values.size()) +
                          " features, expected " + std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

TrainingData TrainingData::FromGroups(std::span<const QueryGroup> groups) {
  TrainingData data;
  data.group_offsets.push_back(0);
  for (const auto& g : groups) {
    if (g.rows.size() != g.labels.size()) {
      throw ValidationError("query group " + std::to_string(g.key) +
                            " has mismatched rows and labels");
    }
    for (const auto& r : g.rows) data.features.AppendRow(r);
    data.labels.insert(data.labels.end(), g.labels.begin(), g.labels.end());
    data.group_offsets.push_back(data.labels.size());
    data.group_keys.push_back(g.key);
  }
  data.Validate();
  return data;
}

TrainingData TrainingData::FromRows(const Matrix& features,
                                    std::vector<double> labels) {
  TrainingData data;
  data.features = features;
  data.labels = std::move(labels);
  data.group_offsets = {0, data.labels.size()};
  data.group_keys = {0};
  data.Validate();
  return data;
}

void TrainingData::Validate() const {
  if (features.rows() != labels.size()) {
    throw ValidationError("feature rows and labels differ in length");
  }
  if (group_offsets.size() != group_keys.size() + 1 || group_offsets.front() != 0 ||
      group_offsets.back() != labels.size()) {
    throw ValidationError("query group offsets do not cover the rows");
  }
  for (double y : labels) {
    if (!std::isfinite(y)) throw ValidationError("non-finite label");
  }
}

void BoostConfig::Validate() const {
  if (rounds < 0) throw ValidationError("boosting rounds must be >= 0");
  if (max_depth < 0) throw ValidationError("max depth must be >= 0");
  if (min_samples_leaf < 1) throw ValidationError("min samples per leaf must be >= 1");
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0)) {
    throw ValidationError("learning rate must lie in [0, 1]");
  }
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
}

// ---------------------------------------------------------------------------
// Losses

namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double PointLoss(double y, double f, Objective objective) {
  if (objective == Objective::kSquaredError) return 0.5 * (y - f) * (y - f);
  return Softplus(f) - y * f;
}

struct OrderedPair {
  std::size_t hi;  // higher label
  std::size_t lo;
  double weight;
};

// Positions (0-based) of each item when sorted by descending score, ties by
// ascending index.
std::vector<std::size_t> RankPositions(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::vector<std::size_t> position(scores.size());
  for (std::size_t p = 0; p < order.size(); ++p) position[order[p]] = p;
  return position;
}

double Gain(double label) { return std::exp2(label) - 1.0; }
double Discount(std::size_t position) {
  return 1.0 / std::log2(static_cast<double>(position) + 2.0);
}

double IdealDcg(std::span<const double> labels) {
  std::vector<double> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t p = 0; p < sorted.size(); ++p) idcg += Gain(sorted[p]) * Discount(p);
  return idcg;
}

// Ordered pairs of one group; indices are local to the group.
std::vector<OrderedPair> GroupPairs(std::span<const double> scores,
                                    std::span<const double> labels,
                                    bool ndcg_weighted) {
  std::vector<OrderedPair> pairs;
  const std::size_t n = labels.size();
  std::vector<std::size_t> position;
  double idcg = 0.0;
  if (ndcg_weighted) {
    idcg = IdealDcg(labels);
    if (idcg <= 0.0) return pairs;
    position = RankPositions(scores);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(labels[i] > labels[j])) continue;
      double w = 1.0;
      if (ndcg_weighted) {
        w = std::abs((Gain(labels[i]) - Gain(labels[j])) *
                     (Discount(position[i]) - Discount(position[j]))) /
            idcg;
      }
      pairs.push_back({i, j, w});
    }
  }
  return pairs;
}

std::vector<double> WeightedPairGradients(std::span<const double> scores,
                                          std::span<const double> labels,
                                          double sigma, bool ndcg_weighted) {
  if (scores.size() != labels.size()) {
    throw ValidationError("scores and labels differ in length");
  }
  std::vector<double> grad(scores.size(), 0.0);
  for (const auto& p : GroupPairs(scores, labels, ndcg_weighted)) {
    const double g =
        -sigma * Sigmoid(-sigma * (scores[p.hi] - scores[p.lo])) * p.weight;
    grad[p.hi] += g;
    grad[p.lo] -= g;
  }
  return grad;
}

}  // namespace

double FitConstant(std::span<const double> labels, Objective objective) {
  if (labels.empty()) throw ValidationError("cannot fit a constant to no labels");
  switch (objective) {
    case Objective::kSquaredError: {
      double sum = 0.0;
      for (double y : labels) sum += y;
      return sum / static_cast<double>(labels.size());
    }
    case Objective::kBinaryLogistic: {
      auto loss = [&](double g) {
        double total = 0.0;
        for (double y : labels) total += PointLoss(y, g, objective);
        return total;
      };
      return GoldenSection(loss, -kStepBracket, kStepBracket, kStepTolerance).argmin;
    }
    case Objective::kPairwiseLogistic:
    case Objective::kNdcgScaledPairwise:
      return 0.0;
  }
  return 0.0;
}

std::vector<double> PseudoResiduals(std::span<const double> labels,
                                    std::span<const double> predictions,
                                    Objective objective) {
  if (labels.size() != predictions.size()) {
    throw ValidationError("labels and predictions differ in length");
  }
  if (IsRanking(objective)) {
    throw ValidationError("ranking objectives need query groups");
  }
  std::vector<double> r(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!std::isfinite(predictions[i])) {
      throw RuntimeError("non-finite prediction at row " + std::to_string(i));
    }
    r[i] = objective == Objective::kSquaredError
               ? labels[i] - predictions[i]
               : labels[i] - Sigmoid(predictions[i]);
  }
  return r;
}

std::vector<double> PairwiseLogisticGradients(std::span<const double> scores,
                                              std::span<const double> labels,
                                              double sigma) {
  return WeightedPairGradients(scores, labels, sigma, false);
}

std::vector<double> NdcgScaledPairwiseGradients(std::span<const double> scores,
                                                std::span<const double> labels,
                                                double sigma) {
  return WeightedPairGradients(scores, labels, sigma, true);
}

double ObjectiveValue(const TrainingData& data,
                      std::span<const double> predictions, Objective objective,
                      double sigma) {
  if (!IsRanking(objective)) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
      total += PointLoss(data.labels[i], predictions[i], objective);
    }
    return data.labels.empty() ? 0.0 : total / static_cast<double>(data.labels.size());
  }
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t g = 0; g < data.GroupCount(); ++g) {
    const std::size_t begin = data.group_offsets[g];
    const std::size_t end = data.group_offsets[g + 1];
    std::span<const double> y(data.labels.data() + begin, end - begin);
    std::span<const double> s(predictions.data() + begin, end - begin);
    for (const auto& p : GroupPairs(s, y, false)) {
      total += Softplus(-sigma * (s[p.hi] - s[p.lo]));
      ++count;
    }
  }
  return count == 0 ? 0.0 : total / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// Trees

int RegressionTree::LeafIndex(std::span<const double> x) const {
  int node = 0;
  while (!nodes[node].is_leaf) {
    const TreeNode& n = nodes[node];
    node = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return node;
}

int RegressionTree::Depth() const {
  std::vector<int> depth(nodes.size(), 0);
  int max_depth = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    max_depth = std::max(max_depth, depth[i]);
    if (!nodes[i].is_leaf) {
      depth[nodes[i].left] = depth[i] + 1;
      depth[nodes[i].right] = depth[i] + 1;
    }
  }
  return max_depth;
}

std::vector<int> RegressionTree::Leaves() const {
  std::vector<int> leaves;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf) leaves.push_back(static_cast<int>(i));
  }
  return leaves;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& rows, std::span<const double> residuals,
              const BoostConfig& config)
      : rows_(rows), residuals_(residuals), config_(config) {}

  RegressionTree Build() {
    std::vector<std::size_t> all(rows_.rows());
    std::iota(all.begin(), all.end(), 0);
    Grow(all, 0);
    RegressionTree tree;
    tree.nodes = std::move(nodes_);
    return tree;
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
  };

  int Grow(const std::vector<std::size_t>& index, int depth) {
    const int id = static_cast<int>(nodes_.size());
    double sum = 0.0;
    for (std::size_t i : index) sum += residuals_[i];
    TreeNode leaf;
    leaf.count = index.size();
    leaf.value = sum / static_cast<double>(index.size());
    leaf.step = leaf.value;
    nodes_.push_back(leaf);

    const auto min_leaf = static_cast<std::size_t>(config_.min_samples_leaf);
    if (depth >= config_.max_depth || index.size() < 2 * min_leaf) return id;
    const bool pure = std::all_of(index.begin(), index.end(), [&](std::size_t i) {
      return residuals_[i] == residuals_[index.front()];
    });
    if (pure) return id;

    Split best = BestSplit(index, sum);
    if (best.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t i : index) {
      (rows_.at(i, best.feature) <= best.threshold ? left : right).push_back(i);
    }
    nodes_[id].is_leaf = false;
    nodes_[id].feature = best.feature;
    nodes_[id].threshold = best.threshold;
    const int l = Grow(left, depth + 1);
    const int r = Grow(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  Split BestSplit(const std::vector<std::size_t>& index, double total) const {
    const std::size_t n = index.size();
    const auto min_leaf = static_cast<std::size_t>(config_.min_samples_leaf);
    double sum_sq = 0.0;
    for (std::size_t i : index) sum_sq += residuals_[i] * residuals_[i];
    const double parent = total * total / static_cast<double>(n);
    const double node_sse = sum_sq - parent;
    const double min_gain = 1e-12 * std::max(node_sse, 0.0);

    Split best;
    std::vector<std::size_t> sorted(index);
    for (std::size_t f = 0; f < rows_.cols(); ++f) {
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](std::size_t a, std::size_t b) {
                         return rows_.at(a, f) < rows_.at(b, f);
                       });
      double left_sum = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        left_sum += residuals_[sorted[k]];
        const double here = rows_.at(sorted[k], f);
        const double next = rows_.at(sorted[k + 1], f);
        if (!(here < next)) continue;
        const std::size_t n_left = k + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        const double right_sum = total - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(n_left) +
                            right_sum * right_sum / static_cast<double>(n_right) -
                            parent;
        if (gain > best.gain && gain > min_gain) {
          double threshold = 0.5 * (here + next);
          if (!(threshold < next)) threshold = here;
          best = Split{static_cast<int>(f), threshold, gain};
        }
      }
    }
    return best;
  }

  const Matrix& rows_;
  std::span<const double> residuals_;
  const BoostConfig& config_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

RegressionTree FitTree(const Matrix& rows, std::span<const double> residuals,
                       const BoostConfig& config) {
  if (rows.rows() != residuals.size()) {
    throw ValidationError("rows and residuals differ in length");
  }
  if (rows.rows() < static_cast<std::size_t>(config.min_samples_leaf)) {
    throw ValidationError("fewer rows than min samples per leaf");
  }
  return TreeBuilder(rows, residuals, config).Build();
}

int LineSearchLeafSteps(RegressionTree& tree, const TrainingData& data,
                        std::span<const double> predictions,
                        const BoostConfig& config) {
  const std::size_t n = data.labels.size();
  std::vector<int> leaf_of(n);
  for (std::size_t i = 0; i < n; ++i) leaf_of[i] = tree.LeafIndex(data.features.row(i));

  int clamped = 0;
  const auto settle = [&](TreeNode& node, auto&& loss) {
    LineSearchResult r = GoldenSection(loss, -kStepBracket, kStepBracket, kStepTolerance);
    // Keep the zero step when the search cannot beat it.
    if (!(r.value < loss(0.0))) {
      node.step = 0.0;
      return;
    }
    if (r.clamped) ++clamped;
    node.step = r.argmin;
  };

  if (!IsRanking(config.objective)) {
    std::vector<std::vector<std::size_t>> members(tree.nodes.size());
    for (std::size_t i = 0; i < n; ++i) members[leaf_of[i]].push_back(i);
    for (int leaf : tree.Leaves()) {
      const auto& rows = members[leaf];
      if (rows.empty()) {
        tree.nodes[leaf].step = 0.0;
        continue;
      }
      settle(tree.nodes[leaf], [&](double g) {
        double total = 0.0;
        for (std::size_t i : rows) {
          total += PointLoss(data.labels[i], predictions[i] + g, config.objective);
        }
        return total;
      });
    }
    return clamped;
  }

  // Only pairs straddling the leaf boundary depend on the leaf's step.
  struct Term {
    double diff;  // s_hi - s_lo
    double sign;  // +1 when the leaf holds the higher-labelled item
    double weight;
  };
  std::vector<std::vector<Term>> terms(tree.nodes.size());
  const bool weighted = config.objective == Objective::kNdcgScaledPairwise;
  for (std::size_t g = 0; g < data.GroupCount(); ++g) {
    const std::size_t begin = data.group_offsets[g];
    const std::size_t end = data.group_offsets[g + 1];
    std::span<const double> y(data.labels.data() + begin, end - begin);
    std::span<const double> s(predictions.data() + begin, end - begin);
    for (const auto& p : GroupPairs(s, y, weighted)) {
      const int lh = leaf_of[begin + p.hi];
      const int ll = leaf_of[begin + p.lo];
      if (lh == ll || p.weight == 0.0) continue;
      const double diff = s[p.hi] - s[p.lo];
      terms[lh].push_back({diff, 1.0, p.weight});
      terms[ll].push_back({diff, -1.0, p.weight});
    }
  }
  const double sigma = config.sigma;
  for (int leaf : tree.Leaves()) {
    const auto& t = terms[leaf];
    if (t.empty()) {
      tree.nodes[leaf].step = 0.0;
      continue;
    }
    settle(tree.nodes[leaf], [&](double g) {
      double total = 0.0;
      for (const Term& term : t) {
        total += term.weight * Softplus(-sigma * (term.diff + term.sign * g));
      }
      return total;
    });
  }
  return clamped;
}

// ---------------------------------------------------------------------------
// Boosting

double BoostedEnsemble::Predict(std::span<const double> x, int num_trees) const {
  if (x.size() != feature_count) {
    throw ValidationError("row has " + std::to_string(x.size()) +
                          " features, ensemble expects " +
                          std::to_string(feature_count));
  }
  const std::size_t limit =
      num_trees < 0 ? trees.size()
                    : std::min(trees.size(), static_cast<std::size_t>(num_trees));
  double f = f0;
  for (std::size_t m = 0; m < limit; ++m) f += learning_rates[m] * trees[m].Predict(x);
  return f;
}

std::vector<double> BoostedEnsemble::Predict(const Matrix& rows,
                                             int num_trees) const {
  std::vector<double> out(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) out[i] = Predict(rows.row(i), num_trees);
  return out;
}

BoostedEnsemble BoostFit(const TrainingData& data, const BoostConfig& config) {
  config.Validate();
  data.Validate();
  if (data.labels.empty()) throw ValidationError("no training rows");

  BoostedEnsemble ensemble;
  ensemble.objective = config.objective;
  ensemble.config = config;
  ensemble.feature_count = data.features.cols();
  ensemble.f0 = FitConstant(data.labels, config.objective);

  std::vector<double> predictions(data.labels.size(), ensemble.f0);
  ensemble.training_objective.push_back(
      ObjectiveValue(data, predictions, config.objective, config.sigma));

  std::vector<double> residuals(data.labels.size());
  for (int m = 0; m < config.rounds; ++m) {
    if (IsRanking(config.objective)) {
      for (std::size_t g = 0; g < data.GroupCount(); ++g) {
        const std::size_t begin = data.group_offsets[g];
        const std::size_t end = data.group_offsets[g + 1];
        std::span<const double> y(data.labels.data() + begin, end - begin);
        std::span<const double> s(predictions.data() + begin, end - begin);
        auto grad = config.objective == Objective::kNdcgScaledPairwise
                        ? NdcgScaledPairwiseGradients(s, y, config.sigma)
                        : PairwiseLogisticGradients(s, y, config.sigma);
        for (std::size_t k = 0; k < grad.size(); ++k) residuals[begin + k] = -grad[k];
      }
    } else {
      residuals = PseudoResiduals(data.labels, predictions, config.objective);
    }

    RegressionTree tree = FitTree(data.features, residuals, config);
    ensemble.clamped_leaf_steps +=
        LineSearchLeafSteps(tree, data, predictions, config);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      predictions[i] += config.learning_rate * tree.Predict(data.features.row(i));
      if (!std::isfinite(predictions[i])) {
        throw RuntimeError("non-finite prediction after round " + std::to_string(m));
      }
    }
    ensemble.trees.push_back(std::move(tree));
    ensemble.learning_rates.push_back(config.learning_rate);
    ensemble.training_objective.push_back(
        ObjectiveValue(data, predictions, config.objective, config.sigma));
  }
  return ensemble;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr std::string_view kMagic = "tallyrank-gbm";
constexpr int kFormatVersion = 1;

std::vector<std::string> Tokens(std::istream& in, std::string_view expect_tag,
                                std::size_t expect_count) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("gbm model: unexpected end of file, wanted '" +
                          std::string(expect_tag) + "'");
  }
  std::istringstream fields(line);
  std::vector<std::string> out;
  std::string t;
  while (fields >> t) out.push_back(t);
  if (out.empty() || out[0] != expect_tag || out.size() != expect_count + 1) {
    throw ValidationError("gbm model: malformed '" + std::string(expect_tag) +
                          "' line: " + line);
  }
  out.erase(out.begin());
  return out;
}

double Number(const std::string& text) {
  auto v = csv::ParseDouble(text);
  if (!v) throw ValidationError("gbm model: bad number '" + text + "'");
  return *v;
}

long long Integer(const std::string& text) {
  auto v = csv::ParseInt(text);
  if (!v) throw ValidationError("gbm model: bad integer '" + text + "'");
  return *v;
}

}  // namespace

void WriteEnsemble(std::ostream& out, const BoostedEnsemble& e) {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "objective " << ToString(e.objective) << '\n';
  out << "rounds " << e.config.rounds << '\n';
  out << "max_depth " << e.config.max_depth << '\n';
  out << "min_samples_leaf " << e.config.min_samples_leaf << '\n';
  out << "learning_rate " << csv::FormatDouble(e.config.learning_rate) << '\n';
  out << "sigma " << csv::FormatDouble(e.config.sigma) << '\n';
  out << "seed " << e.config.rng_seed << '\n';
  out << "features " << e.feature_count << '\n';
  out << "f0 " << csv::FormatDouble(e.f0) << '\n';
  out << "clamped_leaf_steps " << e.clamped_leaf_steps << '\n';
  out << "trees " << e.trees.size() << '\n';
  for (std::size_t m = 0; m < e.trees.size(); ++m) {
    const auto& tree = e.trees[m];
    out << "tree " << m << ' ' << csv::FormatDouble(e.learning_rates[m]) << ' '
        << tree.nodes.size() << '\n';
    for (const auto& node : tree.nodes) {
      if (node.is_leaf) {
        out << "leaf " << csv::FormatDouble(node.value) << ' '
            << csv::FormatDouble(node.step) << ' ' << node.count << '\n';
      } else {
        out << "split " << node.feature << ' ' << csv::FormatDouble(node.threshold)
            << ' ' << csv::FormatDouble(node.value) << ' ' << node.count << '\n';
      }
    }
  }
  out << "objective_trace";
  for (double v : e.training_objective) out << ' ' << csv::FormatDouble(v);
  out << "\nend\n";
}

namespace {

// Rebuilds child links from the pre-order node list; returns one past the
// subtree rooted at `index`.
int LinkPreorder(std::vector<TreeNode>& nodes, int index) {
  if (index >= static_cast<int>(nodes.size())) {
    throw ValidationError("gbm model: truncated tree");
  }
  if (nodes[index].is_leaf) return index + 1;
  nodes[index].left = index + 1;
  int next = LinkPreorder(nodes, index + 1);
  nodes[index].right = next;
  return LinkPreorder(nodes, next);
}

}  // namespace

BoostedEnsemble ReadEnsemble(std::istream& in) {
  std::string header;
  std::getline(in, header);
  if (header != std::string(kMagic) + " " + std::to_string(kFormatVersion)) {
    throw ValidationError("not a tallyrank gbm model (version " +
                          std::to_string(kFormatVersion) + ")");
  }
  BoostedEnsemble e;
  e.objective = ParseObjective(Tokens(in, "objective", 1)[0]);
  e.config.objective = e.objective;
  e.config.rounds = static_cast<int>(Integer(Tokens(in, "rounds", 1)[0]));
  e.config.max_depth = static_cast<int>(Integer(Tokens(in, "max_depth", 1)[0]));
  e.config.min_samples_leaf =
      static_cast<int>(Integer(Tokens(in, "min_samples_leaf", 1)[0]));
  e.config.learning_rate = Number(Tokens(in, "learning_rate", 1)[0]);
  e.config.sigma = Number(Tokens(in, "sigma", 1)[0]);
  e.config.rng_seed = std::stoull(Tokens(in, "seed", 1)[0]);
  e.feature_count = static_cast<std::size_t>(Integer(Tokens(in, "features", 1)[0]));
  e.f0 = Number(Tokens(in, "f0", 1)[0]);
  e.clamped_leaf_steps = static_cast<int>(Integer(Tokens(in, "clamped_leaf_steps", 1)[0]));
  const auto tree_count = Integer(Tokens(in, "trees", 1)[0]);
  for (long long m = 0; m < tree_count; ++m) {
    auto t = Tokens(in, "tree", 3);
    if (Integer(t[0]) != m) throw ValidationError("gbm model: trees out of order");
    e.learning_rates.push_back(Number(t[1]));
    const auto node_count = Integer(t[2]);
    RegressionTree tree;
    for (long long k = 0; k < node_count; ++k) {
      std::string line;
      if (!std::getline(in, line)) throw ValidationError("gbm model: truncated tree");
      std::istringstream fields(line);
      std::vector<std::string> f;
      std::string token;
      while (fields >> token) f.push_back(token);
      TreeNode node;
      if (f.size() == 4 && f[0] == "leaf") {
        node.is_leaf = true;
        node.value = Number(f[1]);
        node.step = Number(f[2]);
        node.count = static_cast<std::size_t>(Integer(f[3]));
      } else if (f.size() == 5 && f[0] == "split") {
        node.is_leaf = false;
        node.feature = static_cast<int>(Integer(f[1]));
        if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= e.feature_count) {
          throw ValidationError("gbm model: split feature out of range");
        }
        node.threshold = Number(f[2]);
        node.value = Number(f[3]);
        node.count = static_cast<std::size_t>(Integer(f[4]));
      } else {
        throw ValidationError("gbm model: malformed node line: " + line);
      }
      tree.nodes.push_back(node);
    }
    if (tree.nodes.empty() || LinkPreorder(tree.nodes, 0) != static_cast<int>(tree.nodes.size())) {
      throw ValidationError("gbm model: tree " + std::to_string(m) +
                            " is not a complete pre-order listing");
    }
    e.trees.push_back(std::move(tree));
  }
  {
    std::string line;
    std::getline(in, line);
    std::istringstream fields(line);
    std::string tag, token;
    fields >> tag;
    if (tag != "objective_trace") throw ValidationError("gbm model: missing objective trace");
    while (fields >> token) e.training_objective.push_back(Number(token));
  }
  Tokens(in, "end", 0);
  return e;
}

}  // namespace tallyrank::gbm

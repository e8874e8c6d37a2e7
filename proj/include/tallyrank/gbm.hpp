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

// Gradient-boosted regression trees. Each round fits a least-squares tree to
// the pseudo-residuals of the current ensemble and then line-searches one
// additive step per leaf against the true objective:
//
//   F_0     = argmin_g sum_i L(y_i, g)
//   r_im    = -dL(y_i, F_{m-1}(x_i)) / dF_{m-1}(x_i)
//   F_m(x)  = F_{m-1}(x) + lr_m * step_m(leaf_m(x))
//
// Ranking objectives treat each query group as one list and work on ordered
// label pairs inside it.

#ifndef TALLYRANK_GBM_HPP_
#define TALLYRANK_GBM_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "tallyrank/core.hpp"

namespace tallyrank::gbm {

enum class Objective {
  kSquaredError,         // L = (y - F)^2 / 2
  kBinaryLogistic,       // log loss on a logit, y in {0, 1}
  kPairwiseLogistic,     // log(1 + exp(-sigma (s_i - s_j))) per ordered pair
  kNdcgScaledPairwise,   // the same, each pair weighted by |delta NDCG|
};

std::string_view ToString(Objective objective);
Objective ParseObjective(std::string_view text);
bool IsRanking(Objective objective);

// Dense row-major feature matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  static Matrix FromRows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void AppendRow(std::span<const double> values);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct QueryGroup {
  int key = 0;
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
};

// Rows with labels, partitioned into contiguous query groups.
struct TrainingData {
  Matrix features;
  std::vector<double> labels;
  // group g spans rows [group_offsets[g], group_offsets[g + 1]).
  std::vector<std::size_t> group_offsets;
  std::vector<int> group_keys;

  static TrainingData FromGroups(std::span<const QueryGroup> groups);
  // One group holding every row.
  static TrainingData FromRows(const Matrix& features,
                               std::vector<double> labels);
  std::size_t GroupCount() const { return group_keys.size(); }
  void Validate() const;
};

struct BoostConfig {
  int rounds = 100;
  int max_depth = 3;
  int min_samples_leaf = 2;
  double learning_rate = 0.1;
  Objective objective = Objective::kSquaredError;
  double sigma = 1.0;
  std::uint64_t rng_seed = 0;

  void Validate() const;
};

struct TreeNode {
  bool is_leaf = true;
  int feature = -1;
  double threshold = 0.0;  // rows with x[feature] <= threshold go left
  int left = -1;
  int right = -1;
  double value = 0.0;  // mean residual of the rows reaching this node
  double step = 0.0;   // line-searched leaf step
  std::size_t count = 0;
};

class RegressionTree {
 public:
  // Nodes in pre-order; node 0 is the root.
  std::vector<TreeNode> nodes;

  int LeafIndex(std::span<const double> x) const;
  // The line-searched step of the leaf reached by x.
  double Predict(std::span<const double> x) const {
    return nodes[LeafIndex(x)].step;
  }
  int Depth() const;
  std::vector<int> Leaves() const;
};

// argmin_g sum_i L(y_i, g): the mean for squared error, a golden-section
// search for log loss, and 0 for the shift-invariant pairwise objectives.
double FitConstant(std::span<const double> labels, Objective objective);

// Pointwise objectives only.
std::vector<double> PseudoResiduals(std::span<const double> labels,
                                    std::span<const double> predictions,
                                    Objective objective);

// dC/ds per item for the pairwise logistic cost over pairs y_i > y_j. Sums to
// zero; a group without two distinct labels yields all zeros.
std::vector<double> PairwiseLogisticGradients(std::span<const double> scores,
                                              std::span<const double> labels,
                                              double sigma);
// As above with every pair term scaled by |delta NDCG| of swapping the two
// items in the current (score-descending, index-stable) order.
std::vector<double> NdcgScaledPairwiseGradients(std::span<const double> scores,
                                                std::span<const double> labels,
                                                double sigma);

// Greedy least-squares tree. Thresholds are midpoints between consecutive
// distinct values; ties go to the lowest feature index, then the lowest
// threshold. Leaf `step` is initialised to the leaf mean.
RegressionTree FitTree(const Matrix& rows, std::span<const double> residuals,
                       const BoostConfig& config);

// Golden-section minimiser on [lo, hi]. `clamped` is set when the minimum
// sits on the bracket edge.
struct LineSearchResult {
  double argmin = 0.0;
  double value = 0.0;
  bool clamped = false;
};
template <typename F>
LineSearchResult GoldenSection(F&& f, double lo, double hi, double tolerance);

inline constexpr double kStepBracket = 10.0;
inline constexpr double kStepTolerance = 1e-8;

// Sets `step` on every leaf of `tree` to the line-searched minimiser of the
// objective over the rows in that leaf, holding other rows fixed. Returns the
// number of leaves whose optimum fell on the bracket edge.
int LineSearchLeafSteps(RegressionTree& tree, const TrainingData& data,
                        std::span<const double> predictions,
                        const BoostConfig& config);

// Mean training objective: squared error and log loss per row, pairwise cost
// per ordered pair (unweighted).
double ObjectiveValue(const TrainingData& data,
                      std::span<const double> predictions, Objective objective,
                      double sigma);

struct BoostedEnsemble {
  Objective objective = Objective::kSquaredError;
  BoostConfig config;
  std::size_t feature_count = 0;
  double f0 = 0.0;
  std::vector<RegressionTree> trees;
  std::vector<double> learning_rates;
  // objective value after round m (entry 0 is the constant fit).
  std::vector<double> training_objective;
  int clamped_leaf_steps = 0;

  // F0 + sum over the first `num_trees` trees (all when negative).
  double Predict(std::span<const double> x, int num_trees = -1) const;
  std::vector<double> Predict(const Matrix& rows, int num_trees = -1) const;
};

BoostedEnsemble BoostFit(const TrainingData& data, const BoostConfig& config);

// Header with objective and config, then one line per node in pre-order for
// every tree. Round trip is exact.
void WriteEnsemble(std::ostream& out, const BoostedEnsemble& ensemble);
BoostedEnsemble ReadEnsemble(std::istream& in);

// ---------------------------------------------------------------------------

template <typename F>
LineSearchResult GoldenSection(F&& f, double lo, double hi, double tolerance) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  LineSearchResult result;
  result.argmin = 0.5 * (a + b);
  result.value = f(result.argmin);
  result.clamped = result.argmin - lo <= 2 * tolerance ||
                   hi - result.argmin <= 2 * tolerance;
  return result;
}

}  // namespace tallyrank::gbm

#endif  // TALLYRANK_GBM_HPP_

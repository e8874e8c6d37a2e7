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

// Brute-force reference implementations used by the tests. Each one follows
// the textbook formula directly and shares no code with the library.

#ifndef TALLYRANK_TESTS_ORACLES_HPP_
#define TALLYRANK_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace oracle {

using List = std::vector<std::string>;

inline double PrecisionAtK(const List& predicted, const List& actual, int k) {
  List a(predicted.begin(), predicted.begin() + k);
  List b(actual.begin(), actual.begin() + k);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  List both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  return static_cast<double>(both.size()) / k;
}

inline double AveragePrecision(const List& predicted, const List& actual, int k) {
  double sum = 0.0;
  for (int i = 1; i <= k; ++i) sum += PrecisionAtK(predicted, actual, i);
  return sum / k;
}

inline double Spearman(const List& predicted, const List& actual) {
  const double n = static_cast<double>(actual.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const auto j = std::find(actual.begin(), actual.end(), predicted[i]) - actual.begin();
    const double d = static_cast<double>(i) - static_cast<double>(j);
    d2 += d * d;
  }
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

// Relevance n - r + 1 for the team at actual rank r; DCG over the first p
// predicted positions.
inline double Ndcg(const List& predicted, const List& actual, int p) {
  const int n = static_cast<int>(actual.size());
  const auto rel = [&](const std::string& team) {
    const auto r = std::find(actual.begin(), actual.end(), team) - actual.begin() + 1;
    return static_cast<double>(n - r + 1);
  };
  double dcg = 0.0, idcg = 0.0;
  for (int i = 1; i <= p; ++i) {
    dcg += (std::pow(2.0, rel(predicted[i - 1])) - 1.0) / std::log2(i + 1.0);
    idcg += (std::pow(2.0, n - i + 1.0) - 1.0) / std::log2(i + 1.0);
  }
  return dcg / idcg;
}

// NDCG of a 0-based order over graded labels.
inline double NdcgOfOrder(const std::vector<int>& order, const std::vector<double>& labels,
                          int p) {
  std::vector<double> ideal = labels;
  std::sort(ideal.rbegin(), ideal.rend());
  double dcg = 0.0, idcg = 0.0;
  for (int i = 1; i <= p; ++i) {
    dcg += (std::pow(2.0, labels[order[i - 1]]) - 1.0) / std::log2(i + 1.0);
    idcg += (std::pow(2.0, ideal[i - 1]) - 1.0) / std::log2(i + 1.0);
  }
  return idcg > 0 ? dcg / idcg : 1.0;
}

// Central difference of f at x along coordinate k.
inline double CentralDifference(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x, std::size_t k, double h) {
  const double x0 = x[k];
  x[k] = x0 + h;
  const double up = f(x);
  x[k] = x0 - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

// L2-regularized logistic regression fit by gradient descent on the mean
// log loss. Returns weights with the bias last.
inline std::vector<double> FitLogistic(const std::vector<std::vector<double>>& x,
                                       const std::vector<int>& y, double l2 = 1e-3,
                                       int iterations = 3000, double step = 0.5) {
  const std::size_t d = x.front().size();
  std::vector<double> w(d + 1, 0.0);
  const double n = static_cast<double>(x.size());
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> g(d + 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      double z = w[d];
      for (std::size_t k = 0; k < d; ++k) z += w[k] * x[i][k];
      const double p = 1.0 / (1.0 + std::exp(-z));
      const double e = p - y[i];
      for (std::size_t k = 0; k < d; ++k) g[k] += e * x[i][k] / n;
      g[d] += e / n;
    }
    for (std::size_t k = 0; k < d; ++k) w[k] -= step * (g[k] + l2 * w[k]);
    w[d] -= step * g[d];
  }
  return w;
}

}  // namespace oracle

#endif  // TALLYRANK_TESTS_ORACLES_HPP_

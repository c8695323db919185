// Copyright 2026 The reqplan Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reqplan/error.hpp"
#include "reqplan/model.hpp"

namespace reqplan {

// Low-rank model of a requirement x stakeholder rating matrix. A rating is
// predicted as the dot product of a requirement row of `item_factors`
// (n x k) with a stakeholder column of `user_factors` (k x m).
struct FactorModel {
  Eigen::MatrixXd user_factors;
  Eigen::MatrixXd item_factors;

  int hidden_dims() const { return static_cast<int>(user_factors.rows()); }
  int num_users() const { return static_cast<int>(user_factors.cols()); }
  int num_items() const { return static_cast<int>(item_factors.rows()); }
};

struct TrainConfig {
  int k = 3;
  double learning_rate = 0.01;
  double regularization = 0.02;
  int max_epochs = 5000;
  std::uint64_t seed = 0;
  double convergence_tolerance = 1e-6;

  bool operator==(const TrainConfig&) const = default;
};

struct Observation {
  int item = 0;
  int user = 0;
  double value = 0.0;
};

// Observed ratings of a single dimension, indexed by position in the
// project's requirement and stakeholder lists.
struct RatingMatrix {
  int num_items = 0;
  int num_users = 0;
  std::vector<Observation> observed;
};

struct TrainingSummary {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  int epochs = 0;
};

inline RatingMatrix ExtractRatings(const ProjectModel& project,
                                   const std::string& dimension) {
  if (project.FindDimension(dimension) == nullptr)
    throw Error(ErrorCode::kUnknownDimension, dimension);
  RatingMatrix ratings;
  ratings.num_items = static_cast<int>(project.requirements.size());
  ratings.num_users = static_cast<int>(project.stakeholders.size());
  for (int i = 0; i < ratings.num_items; ++i) {
    for (int u = 0; u < ratings.num_users; ++u) {
      const auto value = project.evaluations.Get(
          project.stakeholders[u].id, project.requirements[i].id, dimension);
      if (value) ratings.observed.push_back({i, u, *value});
    }
  }
  return ratings;
}

inline double Predict(const FactorModel& model, int user, int item) {
  if (user < 0 || user >= model.num_users() || item < 0 ||
      item >= model.num_items())
    throw Error(ErrorCode::kIndexOutOfRange,
                "user " + std::to_string(user) + ", item " +
                    std::to_string(item));
  return model.item_factors.row(item).dot(model.user_factors.col(user));
}

// Squared error over observed entries plus L2 penalty on all factors.
inline double TrainingLoss(const FactorModel& model, const RatingMatrix& ratings,
                           double regularization) {
  double loss = 0.0;
  for (const auto& obs : ratings.observed) {
    const double e = obs.value - model.item_factors.row(obs.item).dot(
                                     model.user_factors.col(obs.user));
    loss += e * e;
  }
  loss += regularization * (model.user_factors.squaredNorm() +
                            model.item_factors.squaredNorm());
  return loss;
}

// Analytic gradient of TrainingLoss, in the same layout as the model.
inline FactorModel LossGradient(const FactorModel& model,
                                const RatingMatrix& ratings,
                                double regularization) {
  FactorModel grad;
  grad.user_factors = 2.0 * regularization * model.user_factors;
  grad.item_factors = 2.0 * regularization * model.item_factors;
  for (const auto& obs : ratings.observed) {
    const auto item_row = model.item_factors.row(obs.item);
    const auto user_col = model.user_factors.col(obs.user);
    const double e = obs.value - item_row.dot(user_col);
    grad.item_factors.row(obs.item) -= 2.0 * e * user_col.transpose();
    grad.user_factors.col(obs.user) -= 2.0 * e * item_row.transpose();
  }
  return grad;
}

inline void ValidateTrainConfig(const TrainConfig& config) {
  if (config.k < 1 || !(config.learning_rate > 0.0) ||
      !(config.regularization >= 0.0) || config.max_epochs < 1 ||
      !(config.convergence_tolerance > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "training config out of bounds");
}

// Stochastic gradient descent on TrainingLoss. The penalty of a factor row is
// spread evenly over that row's observations so one epoch applies it once.
// Returns the lowest-loss model seen at an epoch boundary.
inline FactorModel Factorize(const RatingMatrix& ratings,
                             const TrainConfig& config,
                             TrainingSummary* summary = nullptr) {
  ValidateTrainConfig(config);
  if (ratings.observed.empty())
    throw Error(ErrorCode::kEmptyMatrix, "no observed ratings");

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> init(0.0, 0.1);
  FactorModel model;
  model.user_factors.resize(config.k, ratings.num_users);
  model.item_factors.resize(ratings.num_items, config.k);
  for (int u = 0; u < ratings.num_users; ++u)
    for (int f = 0; f < config.k; ++f) model.user_factors(f, u) = init(rng);
  for (int i = 0; i < ratings.num_items; ++i)
    for (int f = 0; f < config.k; ++f) model.item_factors(i, f) = init(rng);

  std::vector<int> item_count(ratings.num_items, 0);
  std::vector<int> user_count(ratings.num_users, 0);
  for (const auto& obs : ratings.observed) {
    ++item_count[obs.item];
    ++user_count[obs.user];
  }

  const double lambda = config.regularization;
  const double lr = config.learning_rate;
  double loss = TrainingLoss(model, ratings, lambda);
  FactorModel best = model;
  double best_loss = loss;
  const double initial_loss = loss;

  std::vector<std::size_t> order(ratings.observed.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  int epoch = 0;
  Eigen::VectorXd item_old(config.k);
  while (epoch < config.max_epochs) {
    ++epoch;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      const auto& obs = ratings.observed[idx];
      item_old = model.item_factors.row(obs.item).transpose();
      const double e = obs.value - item_old.dot(model.user_factors.col(obs.user));
      model.item_factors.row(obs.item) +=
          lr * (e * model.user_factors.col(obs.user).transpose() -
                (lambda / item_count[obs.item]) * item_old.transpose());
      model.user_factors.col(obs.user) +=
          lr * (e * item_old - (lambda / user_count[obs.user]) *
                                   model.user_factors.col(obs.user));
    }
    const double next = TrainingLoss(model, ratings, lambda);
    if (!std::isfinite(next)) break;
    if (next < best_loss) {
      best_loss = next;
      best = model;
    }
    const bool converged = std::abs(loss - next) < config.convergence_tolerance;
    loss = next;
    if (converged) break;
  }

  if (summary != nullptr) {
    summary->initial_loss = initial_loss;
    summary->final_loss = best_loss;
    summary->epochs = epoch;
  }
  return best;
}

inline double ObservedRmse(const FactorModel& model, const RatingMatrix& ratings) {
  if (ratings.observed.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& obs : ratings.observed) {
    const double e = obs.value - Predict(model, obs.user, obs.item);
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(ratings.observed.size()));
}

inline double ClampRating(double value) {
  return std::clamp(value, kMinRating, kMaxRating);
}

// Dense completion of one dimension: observed ratings verbatim, every other
// cell filled with the model's clamped prediction.
inline EvaluationMatrix CompleteWith(const ProjectModel& project,
                                     const std::string& dimension,
                                     const FactorModel& model) {
  if (model.num_items() != static_cast<int>(project.requirements.size()) ||
      model.num_users() != static_cast<int>(project.stakeholders.size()))
    throw Error(ErrorCode::kInvalidArgument,
                "factor model does not match project dimensions");
  EvaluationMatrix dense;
  for (int i = 0; i < model.num_items(); ++i) {
    const auto& req = project.requirements[i].id;
    for (int u = 0; u < model.num_users(); ++u) {
      const auto& user = project.stakeholders[u].id;
      const auto observed = project.evaluations.Get(user, req, dimension);
      dense.Set(user, req, dimension,
                observed ? *observed : ClampRating(Predict(model, u, i)));
    }
  }
  return dense;
}

inline EvaluationMatrix CompleteMatrix(const ProjectModel& project,
                                       const std::string& dimension,
                                       const TrainConfig& config,
                                       FactorModel* trained = nullptr) {
  FactorModel model = Factorize(ExtractRatings(project, dimension), config);
  EvaluationMatrix dense = CompleteWith(project, dimension, model);
  if (trained != nullptr) *trained = std::move(model);
  return dense;
}

// Compares LossGradient with central finite differences (step 1e-5) and
// returns the largest error |analytic - numeric| / max(1, |analytic|,
// |numeric|) over all parameters.
inline double GradientCheck(const TrainConfig& config, const FactorModel& probe,
                            const RatingMatrix& ratings) {
  constexpr double kStep = 1e-5;
  const double lambda = config.regularization;
  const FactorModel analytic = LossGradient(probe, ratings, lambda);
  FactorModel work = probe;
  double worst = 0.0;

  auto check = [&](double& param, double exact) {
    const double saved = param;
    param = saved + kStep;
    const double up = TrainingLoss(work, ratings, lambda);
    param = saved - kStep;
    const double down = TrainingLoss(work, ratings, lambda);
    param = saved;
    const double numeric = (up - down) / (2.0 * kStep);
    const double scale = std::max({1.0, std::abs(exact), std::abs(numeric)});
    worst = std::max(worst, std::abs(exact - numeric) / scale);
  };

  for (int f = 0; f < work.user_factors.rows(); ++f)
    for (int u = 0; u < work.user_factors.cols(); ++u)
      check(work.user_factors(f, u), analytic.user_factors(f, u));
  for (int i = 0; i < work.item_factors.rows(); ++i)
    for (int f = 0; f < work.item_factors.cols(); ++f)
      check(work.item_factors(i, f), analytic.item_factors(i, f));
  return worst;
}

}  // namespace reqplan

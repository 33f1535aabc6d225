// Copyright 2026 The uavsim Authors.
//
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

#include "uavsim/types.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace uavsim {

/// Fully connected network with rectified hidden layers and a linear output
/// layer. Inputs are columns; a batch is a matrix with one sample per column.
template <class Scalar>
class Mlp {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
  };

  Mlp() = default;

  /// He-initialized weights, zero biases. `sizes` = {input, hidden..., output}.
  Mlp(const std::vector<int>& sizes, Rng& rng) {
    if (sizes.size() < 2) throw std::invalid_argument("an MLP needs input and output sizes");
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      const int in = sizes[l];
      const int out = sizes[l + 1];
      std::normal_distribution<double> init(0.0, std::sqrt(2.0 / in));
      Matrix w(out, in);
      for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = static_cast<Scalar>(init(rng));
      weights_.push_back(std::move(w));
      biases_.push_back(Vector::Zero(out));
    }
  }

  int inputSize() const { return static_cast<int>(weights_.front().cols()); }
  int outputSize() const { return static_cast<int>(weights_.back().rows()); }
  std::size_t layers() const { return weights_.size(); }

  std::vector<Matrix>& weights() { return weights_; }
  const std::vector<Matrix>& weights() const { return weights_; }
  std::vector<Vector>& biases() { return biases_; }
  const std::vector<Vector>& biases() const { return biases_; }

  Matrix forward(const Matrix& x) const {
    if (x.rows() != inputSize()) throw std::invalid_argument("MLP input has the wrong feature count");
    Matrix h = x;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      Matrix z = (weights_[l] * h).colwise() + biases_[l];
      h = (l + 1 < weights_.size()) ? Matrix(z.cwiseMax(Scalar(0))) : z;
    }
    return h;
  }

  Vector forward(const Vector& x) const { return forward(Matrix(x)).col(0); }

  /// Gradient of sum(outGrad .* forward(x)) with respect to every parameter.
  Gradients backward(const Matrix& x, const Matrix& outGrad) const {
    std::vector<Matrix> activations{x};
    std::vector<Matrix> pre;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      Matrix z = (weights_[l] * activations.back()).colwise() + biases_[l];
      pre.push_back(z);
      activations.push_back((l + 1 < weights_.size()) ? Matrix(z.cwiseMax(Scalar(0))) : z);
    }
    Gradients g;
    g.weights.resize(weights_.size());
    g.biases.resize(weights_.size());
    Matrix delta = outGrad;
    for (std::size_t l = weights_.size(); l-- > 0;) {
      g.weights[l] = delta * activations[l].transpose();
      g.biases[l] = delta.rowwise().sum();
      if (l > 0) {
        Matrix back = weights_[l].transpose() * delta;
        delta = back.cwiseProduct(Matrix((pre[l - 1].array() > Scalar(0)).template cast<Scalar>()));
      }
    }
    return g;
  }

  nlohmann::json toJson() const {
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      const auto& w = weights_[l];
      std::vector<double> wv(static_cast<std::size_t>(w.size()));
      for (Eigen::Index n = 0; n < w.size(); ++n) wv[static_cast<std::size_t>(n)] = static_cast<double>(w.data()[n]);
      std::vector<double> bv(biases_[l].data(), biases_[l].data() + biases_[l].size());
      layers.push_back({{"rows", w.rows()}, {"cols", w.cols()}, {"w", wv}, {"b", bv}});
    }
    return layers;
  }

  static Mlp fromJson(const nlohmann::json& j) {
    Mlp m;
    for (const auto& layer : j) {
      const auto rows = layer.at("rows").get<Eigen::Index>();
      const auto cols = layer.at("cols").get<Eigen::Index>();
      const auto wv = layer.at("w").get<std::vector<double>>();
      const auto bv = layer.at("b").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(wv.size()) != rows * cols || static_cast<Eigen::Index>(bv.size()) != rows) {
        throw std::invalid_argument("MLP snapshot layer has inconsistent sizes");
      }
      Matrix w(rows, cols);
      for (Eigen::Index n = 0; n < w.size(); ++n) w.data()[n] = static_cast<Scalar>(wv[static_cast<std::size_t>(n)]);
      Vector b(rows);
      for (Eigen::Index n = 0; n < rows; ++n) b(n) = static_cast<Scalar>(bv[static_cast<std::size_t>(n)]);
      m.weights_.push_back(std::move(w));
      m.biases_.push_back(std::move(b));
    }
    return m;
  }

 private:
  std::vector<Matrix> weights_;
  std::vector<Vector> biases_;
};

/// Adam optimizer state for one Mlp.
template <class Scalar>
class Adam {
 public:
  Adam() = default;
  Adam(const Mlp<Scalar>& net, double stepSize, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : step_(stepSize), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (std::size_t l = 0; l < net.layers(); ++l) {
      mw_.push_back(Mlp<Scalar>::Matrix::Zero(net.weights()[l].rows(), net.weights()[l].cols()));
      vw_.push_back(mw_.back());
      mb_.push_back(Mlp<Scalar>::Vector::Zero(net.biases()[l].size()));
      vb_.push_back(mb_.back());
    }
  }

  double stepSize() const { return step_; }

  /// Descends along `grad`.
  void apply(Mlp<Scalar>& net, const typename Mlp<Scalar>::Gradients& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t l = 0; l < net.layers(); ++l) {
      update(net.weights()[l], mw_[l], vw_[l], grad.weights[l], c1, c2);
      update(net.biases()[l], mb_[l], vb_[l], grad.biases[l], c1, c2);
    }
  }

 private:
  template <class Param>
  void update(Param& p, Param& m, Param& v, const Param& g, double c1, double c2) const {
    const auto b1 = static_cast<Scalar>(beta1_);
    const auto b2 = static_cast<Scalar>(beta2_);
    m = b1 * m + (Scalar(1) - b1) * g;
    v = b2 * v + (Scalar(1) - b2) * g.cwiseProduct(g);
    const auto mhat = (m.array() / static_cast<Scalar>(c1));
    const auto vhat = (v.array() / static_cast<Scalar>(c2));
    p.array() -= static_cast<Scalar>(step_) * mhat / (vhat.sqrt() + static_cast<Scalar>(eps_));
  }

  double step_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long t_ = 0;
  std::vector<typename Mlp<Scalar>::Matrix> mw_, vw_;
  std::vector<typename Mlp<Scalar>::Vector> mb_, vb_;
};

}  // namespace uavsim

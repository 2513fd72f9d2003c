#include "gebsim/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace gebsim {

MlpNetwork::MlpNetwork(std::vector<int> layer_sizes, std::uint64_t seed)
    : layer_sizes_(std::move(layer_sizes)) {
  if (layer_sizes_.size() < 2) {
    throw std::invalid_argument("mlp: need at least input and output layers");
  }
  for (int n : layer_sizes_) {
    if (n < 1) throw std::invalid_argument("mlp: layer sizes must be >= 1");
  }

  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    const int in = layer_sizes_[l];
    const int out = layer_sizes_[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Eigen::MatrixXd w(out, in);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) w(r, c) = dist(rng);
    }
    weights_.push_back(std::move(w));
    biases_.push_back(Eigen::VectorXd::Zero(out));
  }
}

Eigen::VectorXd MlpNetwork::forward(const Eigen::VectorXd& obs) const {
  return forward_batch(obs).col(0);
}

Eigen::MatrixXd MlpNetwork::forward_batch(const Eigen::MatrixXd& obs,
                                          ForwardCache* cache) const {
  if (obs.rows() != input_size()) {
    throw DimensionMismatchError("mlp: observation has " +
                                 std::to_string(obs.rows()) +
                                 " rows, input layer expects " +
                                 std::to_string(input_size()));
  }
  if (cache) {
    cache->input = obs;
    cache->pre.clear();
    cache->activations.clear();
  }

  Eigen::MatrixXd h = obs;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = (weights_[l] * h).colwise() + biases_[l];
    const bool is_output = l + 1 == weights_.size();
    Eigen::MatrixXd a = is_output ? z : z.cwiseMax(0.0);
    if (cache) {
      cache->pre.push_back(z);
      cache->activations.push_back(a);
    }
    h = std::move(a);
  }
  return h;
}

MlpGradients MlpNetwork::backward(const ForwardCache& cache,
                                  const Eigen::MatrixXd& output_grad) const {
  const std::size_t layers = weights_.size();
  if (cache.pre.size() != layers) {
    throw DimensionMismatchError("mlp: cache does not match network depth");
  }

  MlpGradients grads = zero_gradients();
  Eigen::MatrixXd delta = output_grad;  // d(loss)/d(z) of the output layer
  for (std::size_t l = layers; l-- > 0;) {
    if (l + 1 != layers) {
      // ReLU gate: pass gradient only where the pre-activation was positive.
      delta = delta.cwiseProduct(
          (cache.pre[l].array() > 0.0).cast<double>().matrix());
    }
    const Eigen::MatrixXd& below =
        l == 0 ? cache.input : cache.activations[l - 1];
    grads.w[l] = delta * below.transpose();
    grads.b[l] = delta.rowwise().sum();
    if (l > 0) delta = (weights_[l].transpose() * delta).eval();
  }
  return grads;
}

MlpGradients MlpNetwork::zero_gradients() const {
  MlpGradients g;
  g.w.reserve(weights_.size());
  g.b.reserve(biases_.size());
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    g.w.push_back(Eigen::MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
    g.b.push_back(Eigen::VectorXd::Zero(biases_[l].size()));
  }
  return g;
}

bool operator==(const MlpNetwork& a, const MlpNetwork& b) {
  if (a.layer_sizes_ != b.layer_sizes_) return false;
  for (std::size_t l = 0; l < a.weights_.size(); ++l) {
    if (a.weights_[l] != b.weights_[l] || a.biases_[l] != b.biases_[l]) {
      return false;
    }
  }
  return true;
}

Optimizer::Optimizer(OptimizerKind kind, const MlpNetwork& net) : kind_(kind) {
  if (kind_ == OptimizerKind::kAdam) {
    for (std::size_t l = 0; l < net.weights().size(); ++l) {
      m_w_.push_back(Eigen::MatrixXd::Zero(net.weights()[l].rows(),
                                           net.weights()[l].cols()));
      v_w_.push_back(m_w_.back());
      m_b_.push_back(Eigen::VectorXd::Zero(net.biases()[l].size()));
      v_b_.push_back(m_b_.back());
    }
  }
}

void Optimizer::apply(MlpNetwork& net, const MlpGradients& grads, double lr) {
  if (kind_ == OptimizerKind::kSgd) {
    for (std::size_t l = 0; l < net.weights().size(); ++l) {
      net.weights()[l] -= lr * grads.w[l];
      net.biases()[l] -= lr * grads.b[l];
    }
    return;
  }

  ++step_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  for (std::size_t l = 0; l < net.weights().size(); ++l) {
    m_w_[l] = beta1_ * m_w_[l] + (1.0 - beta1_) * grads.w[l];
    v_w_[l] = beta2_ * v_w_[l] +
              (1.0 - beta2_) * grads.w[l].cwiseProduct(grads.w[l]);
    net.weights()[l].array() -=
        lr * (m_w_[l].array() / bc1) /
        ((v_w_[l].array() / bc2).sqrt() + eps_);

    m_b_[l] = beta1_ * m_b_[l] + (1.0 - beta1_) * grads.b[l];
    v_b_[l] = beta2_ * v_b_[l] +
              (1.0 - beta2_) * grads.b[l].cwiseProduct(grads.b[l]);
    net.biases()[l].array() -=
        lr * (m_b_[l].array() / bc1) /
        ((v_b_[l].array() / bc2).sqrt() + eps_);
  }
}

}  // namespace gebsim

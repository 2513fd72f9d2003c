#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "gebsim/errors.hpp"

namespace gebsim {

/// Per-layer parameter gradients, same shapes as the network parameters.
struct MlpGradients {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
};

/// Fully connected network with rectified-linear hidden layers and a linear
/// output layer. Weights are initialized uniformly in
/// [-1/sqrt(fan_in), 1/sqrt(fan_in)] from the given seed; biases start at 0.
class MlpNetwork {
 public:
  /// layer_sizes = {input, hidden..., output}; at least two entries.
  MlpNetwork(std::vector<int> layer_sizes, std::uint64_t seed);

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  int input_size() const { return layer_sizes_.front(); }
  int output_size() const { return layer_sizes_.back(); }
  std::size_t num_layers() const { return weights_.size(); }

  /// Batched pre- and post-activation values kept for backpropagation.
  struct ForwardCache {
    Eigen::MatrixXd input;                    ///< (in, batch)
    std::vector<Eigen::MatrixXd> pre;         ///< z_l, (out_l, batch)
    std::vector<Eigen::MatrixXd> activations; ///< post-activation per layer
  };

  Eigen::VectorXd forward(const Eigen::VectorXd& obs) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& obs,
                                ForwardCache* cache = nullptr) const;

  /// Reverse-mode accumulation from d(loss)/d(output), shape (out, batch).
  MlpGradients backward(const ForwardCache& cache,
                        const Eigen::MatrixXd& output_grad) const;

  MlpGradients zero_gradients() const;

  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

  friend bool operator==(const MlpNetwork& a, const MlpNetwork& b);

 private:
  std::vector<int> layer_sizes_;
  std::vector<Eigen::MatrixXd> weights_;  ///< (out, in) per layer
  std::vector<Eigen::VectorXd> biases_;
};

enum class OptimizerKind { kSgd, kAdam };

/// Plain gradient descent or adaptive-moment gradient descent over the
/// network parameters.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, const MlpNetwork& net);

  void apply(MlpNetwork& net, const MlpGradients& grads, double lr);

  OptimizerKind kind() const { return kind_; }

 private:
  OptimizerKind kind_;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  std::int64_t step_ = 0;
  std::vector<Eigen::MatrixXd> m_w_, v_w_;
  std::vector<Eigen::VectorXd> m_b_, v_b_;
};

}  // namespace gebsim

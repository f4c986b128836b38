#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "autohedge/market.hpp"

namespace autohedge::drl {

enum class OutputActivation { identity, sigmoid };

struct MlpGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

/// Fully connected network, ReLU hidden layers. Batches are column-major:
/// one sample per column.
class Mlp {
 public:
  Mlp() = default;
  /// Hidden layers uniform in +-1/sqrt(fan_in); output layer in +-3e-3.
  Mlp(std::vector<int> layer_sizes, OutputActivation output, RngStream& rng);
  static Mlp zeros(std::vector<int> layer_sizes, OutputActivation output);

  struct Tape {
    std::vector<Eigen::MatrixXd> inputs;  // input to each layer
    std::vector<Eigen::MatrixXd> pre;     // pre-activation of each layer
    Eigen::MatrixXd output;
  };

  Eigen::MatrixXd forward(const Eigen::MatrixXd& input) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, Tape& tape) const;
  std::vector<double> forward(std::span<const double> input) const;

  /// Reverse-mode gradients summed over the batch, for a loss whose
  /// derivative w.r.t. the output is `upstream`.
  MlpGradients backward(const Tape& tape, const Eigen::MatrixXd& upstream,
                        Eigen::MatrixXd* input_grad = nullptr) const;

  /// this <- (1 - tau) * this + tau * source
  void soft_update_from(const Mlp& source, double tau);
  /// Euclidean distance between parameter vectors.
  double distance(const Mlp& other) const;
  std::size_t parameter_count() const;

  const std::vector<int>& layer_sizes() const { return sizes_; }
  OutputActivation output_activation() const { return output_; }
  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

 private:
  std::vector<int> sizes_;
  OutputActivation output_ = OutputActivation::identity;
  std::vector<Eigen::MatrixXd> weights_;  // [out x in]
  std::vector<Eigen::VectorXd> biases_;
};

class Adam {
 public:
  Adam() = default;
  Adam(const Mlp& net, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  /// Gradient descent step on `net`.
  void step(Mlp& net, const MlpGradients& grad);

 private:
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long t_ = 0;
  MlpGradients m_;
  MlpGradients v_;
};

}  // namespace autohedge::drl

#include "autohedge/drl/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace autohedge::drl {

namespace {

void check_sizes(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw std::invalid_argument("Mlp needs at least input and output sizes");
  for (int s : sizes) {
    if (s < 1) throw std::invalid_argument("Mlp layer sizes must be >= 1");
  }
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

Mlp::Mlp(std::vector<int> layer_sizes, OutputActivation output, RngStream& rng)
    : sizes_(std::move(layer_sizes)), output_(output) {
  check_sizes(sizes_);
  const std::size_t n_layers = sizes_.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double bound = (l + 1 == n_layers) ? 3e-3 : 1.0 / std::sqrt(static_cast<double>(in));
    Eigen::MatrixXd w(out, in);
    Eigen::VectorXd b(out);
    for (int i = 0; i < out; ++i) {
      for (int j = 0; j < in; ++j) w(i, j) = bound * (2.0 * rng.uniform() - 1.0);
    }
    for (int i = 0; i < out; ++i) b(i) = bound * (2.0 * rng.uniform() - 1.0);
    weights_.push_back(std::move(w));
    biases_.push_back(std::move(b));
  }
}

Mlp Mlp::zeros(std::vector<int> layer_sizes, OutputActivation output) {
  check_sizes(layer_sizes);
  Mlp net;
  net.sizes_ = std::move(layer_sizes);
  net.output_ = output;
  for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l) {
    net.weights_.push_back(Eigen::MatrixXd::Zero(net.sizes_[l + 1], net.sizes_[l]));
    net.biases_.push_back(Eigen::VectorXd::Zero(net.sizes_[l + 1]));
  }
  return net;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input) const {
  Tape tape;
  return forward(input, tape);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input, Tape& tape) const {
  if (input.rows() != sizes_.front()) throw std::invalid_argument("Mlp input size mismatch");
  const std::size_t n_layers = weights_.size();
  tape.inputs.resize(n_layers);
  tape.pre.resize(n_layers);
  Eigen::MatrixXd a = input;
  for (std::size_t l = 0; l < n_layers; ++l) {
    tape.inputs[l] = a;
    Eigen::MatrixXd z = weights_[l] * a;
    z.colwise() += biases_[l];
    tape.pre[l] = z;
    if (l + 1 < n_layers) {
      a = z.cwiseMax(0.0);
    } else if (output_ == OutputActivation::sigmoid) {
      a = z.unaryExpr([](double v) { return sigmoid(v); });
    } else {
      a = std::move(z);
    }
  }
  tape.output = a;
  return a;
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(input.size()), 1);
  for (std::size_t i = 0; i < input.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = input[i];
  const Eigen::MatrixXd y = forward(x);
  return std::vector<double>(y.data(), y.data() + y.size());
}

MlpGradients Mlp::backward(const Tape& tape, const Eigen::MatrixXd& upstream,
                           Eigen::MatrixXd* input_grad) const {
  const std::size_t n_layers = weights_.size();
  MlpGradients g;
  g.weights.resize(n_layers);
  g.biases.resize(n_layers);
  Eigen::MatrixXd delta = upstream;
  if (output_ == OutputActivation::sigmoid) {
    delta = delta.cwiseProduct(tape.output.unaryExpr([](double s) { return s * (1.0 - s); }));
  }
  for (std::size_t l = n_layers; l-- > 0;) {
    g.weights[l] = delta * tape.inputs[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l == 0 && input_grad == nullptr) break;
    Eigen::MatrixXd back = weights_[l].transpose() * delta;
    if (l == 0) {
      *input_grad = std::move(back);
      break;
    }
    const Eigen::MatrixXd& z = tape.pre[l - 1];
    delta = back.cwiseProduct(z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
  }
  return g;
}

void Mlp::soft_update_from(const Mlp& source, double tau) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l] = (1.0 - tau) * weights_[l] + tau * source.weights_[l];
    biases_[l] = (1.0 - tau) * biases_[l] + tau * source.biases_[l];
  }
}

double Mlp::distance(const Mlp& other) const {
  double sq = 0.0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    sq += (weights_[l] - other.weights_[l]).squaredNorm();
    sq += (biases_[l] - other.biases_[l]).squaredNorm();
  }
  return std::sqrt(sq);
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
  }
  return n;
}

Adam::Adam(const Mlp& net, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (std::size_t l = 0; l < net.weights().size(); ++l) {
    m_.weights.push_back(Eigen::MatrixXd::Zero(net.weights()[l].rows(), net.weights()[l].cols()));
    v_.weights.push_back(m_.weights.back());
    m_.biases.push_back(Eigen::VectorXd::Zero(net.biases()[l].size()));
    v_.biases.push_back(m_.biases.back());
  }
}

void Adam::step(Mlp& net, const MlpGradients& grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const double step = lr_ * std::sqrt(c2) / c1;
  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
    param.array() -= step * m.array() / (v.array().sqrt() + eps_);
  };
  for (std::size_t l = 0; l < net.weights().size(); ++l) {
    update(net.weights()[l], m_.weights[l], v_.weights[l], grad.weights[l]);
    update(net.biases()[l], m_.biases[l], v_.biases[l], grad.biases[l]);
  }
}

}  // namespace autohedge::drl

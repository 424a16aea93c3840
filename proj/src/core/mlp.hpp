#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace difflab {

// Fixed 3-layer perceptron (two ReLU hidden layers), batches as columns.
// Gradients are hand-written reverse-mode for exactly this architecture.
struct MLP {
  Eigen::MatrixXd W1, W2, W3;
  Eigen::VectorXd b1, b2, b3;

  static MLP init(int in, int h1, int h2, int out, uint64_t seed);

  int in_dim() const { return static_cast<int>(W1.cols()); }
  int out_dim() const { return static_cast<int>(W3.rows()); }
  int64_t param_count() const;

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;

  struct Cache {
    Eigen::MatrixXd x, a1, a2, y;
  };
  void forward_cached(const Eigen::MatrixXd& x, Cache& c) const;

  struct Grads {
    Eigen::MatrixXd W1, W2, W3;
    Eigen::VectorXd b1, b2, b3;
    void setZero(const MLP& m);
  };
  // dy = dLoss/dY, same shape as the output batch
  void backward(const Cache& c, const Eigen::MatrixXd& dy, Grads& g) const;

  // flat little-endian file: 16-byte header (magic, version, in, out) then
  // row-major W and b per layer in order
  void save(const std::string& path) const;
  static MLP load(const std::string& path);
};

// Adam-style adaptive moments; plain SGD available for ablation.
struct AdamState {
  MLP::Grads m, v;
  int64_t step = 0;
  bool plain_sgd = false;

  void init(const MLP& net);
  void update(MLP& net, const MLP::Grads& g, double lr);
};

}  // namespace difflab

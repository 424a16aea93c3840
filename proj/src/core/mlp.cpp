#include "core/mlp.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "core/rng.hpp"

namespace difflab {

namespace {
constexpr char kMagic[4] = {'D', 'F', 'L', 'M'};
constexpr uint32_t kVersion = 1;
constexpr int kHidden = 50;

Eigen::MatrixXd he_matrix(int rows, int cols, const rng::Key& key, uint64_t layer) {
  Eigen::MatrixXd w(rows, cols);
  const double scale = std::sqrt(2.0 / cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      w(i, j) = scale * rng::normal(key, layer, i, j);
  return w;
}
}  // namespace

MLP MLP::init(int in, int h1, int h2, int out, uint64_t seed) {
  const rng::Key key{seed, 0x77};
  MLP m;
  m.W1 = he_matrix(h1, in, key, 1);
  m.W2 = he_matrix(h2, h1, key, 2);
  m.W3 = he_matrix(out, h2, key, 3);
  m.b1 = Eigen::VectorXd::Zero(h1);
  m.b2 = Eigen::VectorXd::Zero(h2);
  m.b3 = Eigen::VectorXd::Zero(out);
  return m;
}

int64_t MLP::param_count() const {
  return W1.size() + W2.size() + W3.size() + b1.size() + b2.size() + b3.size();
}

Eigen::MatrixXd MLP::forward(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd a1 = ((W1 * x).colwise() + b1).cwiseMax(0.0);
  Eigen::MatrixXd a2 = ((W2 * a1).colwise() + b2).cwiseMax(0.0);
  return (W3 * a2).colwise() + b3;
}

void MLP::forward_cached(const Eigen::MatrixXd& x, Cache& c) const {
  c.x = x;
  c.a1 = ((W1 * x).colwise() + b1).cwiseMax(0.0);
  c.a2 = ((W2 * c.a1).colwise() + b2).cwiseMax(0.0);
  c.y = (W3 * c.a2).colwise() + b3;
}

void MLP::Grads::setZero(const MLP& m) {
  W1.setZero(m.W1.rows(), m.W1.cols());
  W2.setZero(m.W2.rows(), m.W2.cols());
  W3.setZero(m.W3.rows(), m.W3.cols());
  b1.setZero(m.b1.size());
  b2.setZero(m.b2.size());
  b3.setZero(m.b3.size());
}

void MLP::backward(const Cache& c, const Eigen::MatrixXd& dy, Grads& g) const {
  g.W3 = dy * c.a2.transpose();
  g.b3 = dy.rowwise().sum();
  Eigen::MatrixXd d2 = (W3.transpose() * dy).array() * (c.a2.array() > 0.0).cast<double>();
  g.W2 = d2 * c.a1.transpose();
  g.b2 = d2.rowwise().sum();
  Eigen::MatrixXd d1 = (W2.transpose() * d2).array() * (c.a1.array() > 0.0).cast<double>();
  g.W1 = d1 * c.x.transpose();
  g.b1 = d1.rowwise().sum();
}

namespace {
void write_rowmajor(std::ofstream& f, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      f.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
}
void read_rowmajor(std::ifstream& f, Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v;
      f.read(reinterpret_cast<char*>(&v), sizeof(double));
      m(i, j) = v;
    }
}
}  // namespace

void MLP::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("mlp: cannot open " + path + " for writing");
  f.write(kMagic, 4);
  const uint32_t ver = kVersion, in = static_cast<uint32_t>(in_dim()),
                 out = static_cast<uint32_t>(out_dim());
  f.write(reinterpret_cast<const char*>(&ver), 4);
  f.write(reinterpret_cast<const char*>(&in), 4);
  f.write(reinterpret_cast<const char*>(&out), 4);
  write_rowmajor(f, W1);
  write_rowmajor(f, b1);
  write_rowmajor(f, W2);
  write_rowmajor(f, b2);
  write_rowmajor(f, W3);
  write_rowmajor(f, b3);
  if (!f) throw std::runtime_error("mlp: short write to " + path);
}

MLP MLP::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("mlp: cannot open " + path);
  char magic[4];
  uint32_t ver, in, out;
  f.read(magic, 4);
  f.read(reinterpret_cast<char*>(&ver), 4);
  f.read(reinterpret_cast<char*>(&in), 4);
  f.read(reinterpret_cast<char*>(&out), 4);
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("mlp: bad magic in " + path);
  if (ver != kVersion) throw std::runtime_error("mlp: unsupported version");
  MLP m;
  m.W1.resize(kHidden, in);
  m.b1.resize(kHidden);
  m.W2.resize(kHidden, kHidden);
  m.b2.resize(kHidden);
  m.W3.resize(out, kHidden);
  m.b3.resize(out);
  read_rowmajor(f, m.W1);
  auto read_vec = [&](Eigen::VectorXd& v) {
    f.read(reinterpret_cast<char*>(v.data()), v.size() * sizeof(double));
  };
  read_vec(m.b1);
  read_rowmajor(f, m.W2);
  read_vec(m.b2);
  read_rowmajor(f, m.W3);
  read_vec(m.b3);
  if (!f) throw std::runtime_error("mlp: truncated file " + path);
  return m;
}

void AdamState::init(const MLP& net) {
  m.setZero(net);
  v.setZero(net);
  step = 0;
}

namespace {
void adam_one(Eigen::MatrixXd& w, const Eigen::MatrixXd& g, Eigen::MatrixXd& m,
              Eigen::MatrixXd& v, double lr, double bc1, double bc2) {
  m = 0.9 * m + 0.1 * g;
  v = 0.999 * v.array() + 0.001 * g.array().square();
  w.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + 1e-8);
}
void adam_one(Eigen::VectorXd& w, const Eigen::VectorXd& g, Eigen::VectorXd& m,
              Eigen::VectorXd& v, double lr, double bc1, double bc2) {
  m = 0.9 * m + 0.1 * g;
  v = 0.999 * v.array() + 0.001 * g.array().square();
  w.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + 1e-8);
}
}  // namespace

void AdamState::update(MLP& net, const MLP::Grads& g, double lr) {
  ++step;
  if (plain_sgd) {
    net.W1 -= lr * g.W1;
    net.W2 -= lr * g.W2;
    net.W3 -= lr * g.W3;
    net.b1 -= lr * g.b1;
    net.b2 -= lr * g.b2;
    net.b3 -= lr * g.b3;
    return;
  }
  const double bc1 = 1.0 - std::pow(0.9, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(0.999, static_cast<double>(step));
  adam_one(net.W1, g.W1, m.W1, v.W1, lr, bc1, bc2);
  adam_one(net.W2, g.W2, m.W2, v.W2, lr, bc1, bc2);
  adam_one(net.W3, g.W3, m.W3, v.W3, lr, bc1, bc2);
  adam_one(net.b1, g.b1, m.b1, v.b1, lr, bc1, bc2);
  adam_one(net.b2, g.b2, m.b2, v.b2, lr, bc1, bc2);
  adam_one(net.b3, g.b3, m.b3, v.b3, lr, bc1, bc2);
}

}  // namespace difflab

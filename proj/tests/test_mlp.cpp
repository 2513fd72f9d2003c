#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gebsim/mlp.hpp"
#include "gebsim/replay.hpp"
#include "gebsim/agent.hpp"

using namespace gebsim;

namespace {

/// Naive per-element forward pass used as an independent reference.
Eigen::VectorXd reference_forward(const MlpNetwork& net,
                                  const Eigen::VectorXd& obs) {
  std::vector<long double> h(obs.data(), obs.data() + obs.size());
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const auto& w = net.weights()[l];
    const auto& b = net.biases()[l];
    std::vector<long double> next(static_cast<std::size_t>(w.rows()), 0.0L);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      long double acc = b(r);
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        acc += static_cast<long double>(w(r, c)) * h[c];
      }
      const bool output = l + 1 == net.num_layers();
      next[r] = output ? acc : std::max(acc, 0.0L);
    }
    h = std::move(next);
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(h.size()));
  for (std::size_t i = 0; i < h.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = static_cast<double>(h[i]);
  }
  return out;
}

/// Mean squared TD loss of the taken actions, for finite differencing.
double batch_loss(const MlpNetwork& net, const std::vector<Transition>& batch,
                  const Eigen::VectorXd& y) {
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Eigen::VectorXd q = net.forward(batch[i].s);
    const double err = y(static_cast<Eigen::Index>(i)) - q(batch[i].action);
    loss += err * err;
  }
  return loss / static_cast<double>(batch.size());
}

}  // namespace

TEST_SUITE("mlp") {

TEST_CASE("zero weights yield zero Q-values") {
  MlpNetwork net({4, 8, 3}, 1);
  for (auto& w : net.weights()) w.setZero();
  for (auto& b : net.biases()) b.setZero();
  const Eigen::VectorXd q = net.forward(Eigen::VectorXd::Constant(4, 2.0));
  CHECK(q.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("an identity single layer passes the input through") {
  MlpNetwork net({3, 3}, 1);
  net.weights()[0] = Eigen::MatrixXd::Identity(3, 3);
  net.biases()[0].setZero();
  Eigen::VectorXd obs(3);
  obs << -1.5, 0.25, 3.0;
  const Eigen::VectorXd out = net.forward(obs);
  CHECK((out - obs).cwiseAbs().maxCoeff() == 0.0);  // output layer is linear
}

TEST_CASE("dimension mismatches are rejected") {
  MlpNetwork net({4, 8, 3}, 1);
  CHECK_THROWS_AS(net.forward(Eigen::VectorXd::Zero(5)),
                  DimensionMismatchError);
}

TEST_CASE("seeded forward pass matches the high-precision reference") {
  MlpNetwork net({6, 16, 8, 5}, 12345);
  Eigen::VectorXd obs(6);
  obs << 0.5, 0.1, -0.3, 0.9, 0.0, 1.0;

  const Eigen::VectorXd got = net.forward(obs);
  const Eigen::VectorXd ref = reference_forward(net, obs);
  CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-12);

  // Fixture for the seeded initialization path (regenerate by printing the
  // reference forward pass if the initializer changes).
  CHECK(got(0) == doctest::Approx(-0.067627907965427).epsilon(1e-9));
  CHECK(got(4) == doctest::Approx(0.021071874789436).epsilon(1e-9));
}

TEST_CASE("initialization is seeded and fan-in bounded") {
  const MlpNetwork a({6, 32, 4}, 7);
  const MlpNetwork b({6, 32, 4}, 7);
  const MlpNetwork c({6, 32, 4}, 8);
  CHECK(a == b);
  CHECK(!(a == c));
  const double bound0 = 1.0 / std::sqrt(6.0);
  CHECK(a.weights()[0].cwiseAbs().maxCoeff() <= bound0);
  for (const auto& bias : a.biases()) {
    CHECK(bias.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("gradients match central finite differences") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int trial = 0; trial < 5; ++trial) {
    MlpNetwork net({3, 6, 4}, 100 + trial);
    MlpNetwork target = net;

    std::vector<Transition> storage(4);
    std::vector<const Transition*> batch;
    for (auto& t : storage) {
      t.s = Eigen::VectorXd::NullaryExpr(3, [&] { return unit(rng); });
      t.s_next = Eigen::VectorXd::NullaryExpr(3, [&] { return unit(rng); });
      t.action = std::uniform_int_distribution<int>(0, 3)(rng);
      t.reward = unit(rng);
      t.done = unit(rng) > 0.0;
      batch.push_back(&t);
    }
    const Eigen::VectorXd y = td_targets(batch, target, 0.9);

    // Analytic gradients.
    Eigen::MatrixXd obs(3, 4);
    for (int i = 0; i < 4; ++i) obs.col(i) = storage[i].s;
    MlpNetwork::ForwardCache cache;
    const Eigen::MatrixXd q = net.forward_batch(obs, &cache);
    Eigen::MatrixXd output_grad = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
      output_grad(storage[i].action, i) =
          -2.0 * (y(i) - q(storage[i].action, i)) / 4.0;
    }
    const MlpGradients grads = net.backward(cache, output_grad);

    // Finite differences over every parameter.
    const double h = 1e-6;
    std::vector<Transition> plain(storage);
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
      for (Eigen::Index r = 0; r < net.weights()[l].rows(); ++r) {
        for (Eigen::Index c = 0; c < net.weights()[l].cols(); ++c) {
          const double saved = net.weights()[l](r, c);
          net.weights()[l](r, c) = saved + h;
          const double up = batch_loss(net, plain, y);
          net.weights()[l](r, c) = saved - h;
          const double down = batch_loss(net, plain, y);
          net.weights()[l](r, c) = saved;
          const double fd = (up - down) / (2.0 * h);
          const double scale =
              std::max({1e-8, std::abs(fd), std::abs(grads.w[l](r, c))});
          CHECK(std::abs(grads.w[l](r, c) - fd) / scale < 1e-6);
        }
      }
      for (Eigen::Index r = 0; r < net.biases()[l].size(); ++r) {
        const double saved = net.biases()[l](r);
        net.biases()[l](r) = saved + h;
        const double up = batch_loss(net, plain, y);
        net.biases()[l](r) = saved - h;
        const double down = batch_loss(net, plain, y);
        net.biases()[l](r) = saved;
        const double fd = (up - down) / (2.0 * h);
        const double scale =
            std::max({1e-8, std::abs(fd), std::abs(grads.b[l](r))});
        CHECK(std::abs(grads.b[l](r) - fd) / scale < 1e-6);
      }
    }
  }
}

TEST_CASE("perfect targets give zero loss and unchanged parameters "
          "under plain gradient descent") {
  MlpNetwork net({2, 4, 3}, 5);
  MlpNetwork before = net;
  Optimizer sgd(OptimizerKind::kSgd, net);

  std::vector<Transition> storage(3);
  std::vector<const Transition*> batch;
  Eigen::MatrixXd obs(2, 3);
  for (int i = 0; i < 3; ++i) {
    storage[i].s = Eigen::VectorXd::Constant(2, 0.3 * (i + 1));
    obs.col(i) = storage[i].s;
  }
  // Targets taken from the same batched forward the update will run, so
  // every residual is exactly zero.
  const Eigen::MatrixXd q0 = net.forward_batch(obs);
  for (int i = 0; i < 3; ++i) {
    storage[i].s_next = storage[i].s;
    storage[i].action = i;
    storage[i].done = true;
    storage[i].reward = q0(i, i);
    batch.push_back(&storage[i]);
  }
  const double loss = train_step(net, net, batch, 0.1, sgd, 0.99);
  CHECK(loss == 0.0);
  CHECK(net == before);
}

TEST_CASE("repeated descent on one batch reduces the loss") {
  MlpNetwork net({3, 8, 4}, 6);
  MlpNetwork target = net;
  Optimizer sgd(OptimizerKind::kSgd, net);

  Transition t;
  t.s = Eigen::VectorXd::Constant(3, 0.5);
  t.s_next = t.s;
  t.action = 2;
  t.reward = 1.7;
  t.done = true;
  const std::vector<const Transition*> batch{&t};

  double prev = train_step(net, target, batch, 0.01, sgd, 0.99);
  for (int i = 0; i < 300; ++i) {
    const double loss = train_step(net, target, batch, 0.01, sgd, 0.99);
    CHECK(loss <= prev + 1e-12);
    prev = loss;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("adam also descends on a fixed batch") {
  MlpNetwork net({3, 8, 4}, 6);
  MlpNetwork target = net;
  Optimizer adam(OptimizerKind::kAdam, net);

  Transition t;
  t.s = Eigen::VectorXd::Constant(3, 0.5);
  t.s_next = t.s;
  t.action = 1;
  t.reward = -0.9;
  t.done = true;
  const std::vector<const Transition*> batch{&t};

  const double first = train_step(net, target, batch, 0.005, adam, 0.99);
  double last = first;
  for (int i = 0; i < 200; ++i) {
    last = train_step(net, target, batch, 0.005, adam, 0.99);
  }
  CHECK(last < first);
}

}  // TEST_SUITE

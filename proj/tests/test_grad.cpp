#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "semnet/grad.hpp"

using semnet::grad::Tape;
using semnet::grad::check_gradients;

TEST_CASE("forward evaluates hand-checked expressions") {
  Tape tape;
  const auto x = tape.parameter(2.0);
  const auto y = tape.parameter(3.0);
  const std::array<Tape::NodeId, 2> xy = {x, y};
  const auto expr = tape.add(tape.mul(x, y), tape.max(xy));
  CHECK(tape.forward(expr) == 9.0);

  Tape t2;
  CHECK(t2.forward(t2.exp(t2.constant(0.0))) == 1.0);

  Tape t3;
  const std::array<Tape::NodeId, 2> mn = {t3.constant(2.0), t3.constant(5.0)};
  CHECK(t3.forward(t3.add(t3.min(mn), t3.constant(1.0))) == 3.0);

  Tape t4;
  const auto a = t4.parameter(2.0);
  const auto b = t4.parameter(0.75);
  const auto d = t4.sub(a, b);
  CHECK(t4.forward(d) == 1.25);
  t4.backward(d);
  CHECK(t4.gradient(a) == 1.0);
  CHECK(t4.gradient(b) == -1.0);
}

TEST_CASE("backward applies the product rule") {
  Tape tape;
  const auto x = tape.parameter(2.0);
  const auto y = tape.parameter(3.0);
  const auto f = tape.mul(x, y);
  tape.forward(f);
  tape.backward(f);
  CHECK(tape.gradient(x) == 3.0);
  CHECK(tape.gradient(y) == 2.0);
}

TEST_CASE("max routes the gradient to the attaining argument") {
  Tape tape;
  const auto x = tape.parameter(2.0);
  const auto y = tape.parameter(3.0);
  const std::array<Tape::NodeId, 2> xy = {x, y};
  const auto f = tape.max(xy);
  tape.forward(f);
  tape.backward(f);
  CHECK(tape.gradient(x) == 0.0);
  CHECK(tape.gradient(y) == 1.0);
}

TEST_CASE("exact ties at max/min go to the lowest-index argument") {
  Tape tape;
  const auto x = tape.parameter(2.0);
  const auto y = tape.parameter(2.0);
  const std::array<Tape::NodeId, 2> xy = {x, y};
  const auto f = tape.max(xy);
  tape.forward(f);
  tape.backward(f);
  CHECK(tape.gradient(x) == 1.0);
  CHECK(tape.gradient(y) == 0.0);

  Tape t2;
  const auto a = t2.parameter(-1.0);
  const auto b = t2.parameter(-1.0);
  const std::array<Tape::NodeId, 2> ab = {a, b};
  const auto g = t2.min(ab);
  t2.forward(g);
  t2.backward(g);
  CHECK(t2.gradient(a) == 1.0);
  CHECK(t2.gradient(b) == 0.0);
}

TEST_CASE("exp gradient matches the analytic and finite-difference value") {
  Tape tape;
  const auto x = tape.parameter(1.0);
  const auto f = tape.exp(tape.add(x, x));  // exp(2x)
  tape.forward(f);
  tape.backward(f);
  CHECK(tape.gradient(x) == doctest::Approx(2.0 * std::exp(2.0)).epsilon(1e-12));

  const std::array<Tape::NodeId, 1> params = {x};
  CHECK(check_gradients(tape, f, params, 1e-6) < 1e-5);
}

TEST_CASE("softmax component values and gradients") {
  Tape tape;
  const auto a = tape.parameter(0.3);
  const auto b = tape.parameter(-0.2);
  const auto c = tape.constant(0.0);
  const std::array<Tape::NodeId, 3> logits = {c, a, b};
  const auto s1 = tape.softmax_component(logits, 1, 5.0);
  const double v = tape.forward(s1);
  const double e0 = std::exp(0.0), e1 = std::exp(1.5), e2 = std::exp(-1.0);
  CHECK(v == doctest::Approx(e1 / (e0 + e1 + e2)).epsilon(1e-12));

  const std::array<Tape::NodeId, 2> params = {a, b};
  CHECK(check_gradients(tape, s1, params, 1e-6) < 1e-5);
}

TEST_CASE("linear expressions are exact under central differences") {
  Tape tape;
  const auto x = tape.parameter(0.7);
  const auto y = tape.parameter(-0.4);
  const auto f = tape.add(tape.mul(tape.constant(3.0), x),
                          tape.mul(tape.constant(-2.0), y));
  const std::array<Tape::NodeId, 2> params = {x, y};
  CHECK(check_gradients(tape, f, params, 1e-6) < 1e-9);
}

TEST_CASE("check_gradients near (but off) a max kink stays one-sided") {
  Tape tape;
  const auto x = tape.parameter(1.0);
  const auto y = tape.parameter(1.0 + 1e-4);  // |x - y| > h
  const std::array<Tape::NodeId, 2> xy = {x, y};
  const auto f = tape.max(xy);
  const std::array<Tape::NodeId, 2> params = {x, y};
  CHECK(check_gradients(tape, f, params, 1e-6) < 1e-5);
}

TEST_CASE("gradient of a sum equals the sum of gradients") {
  std::mt19937 gen(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Tape tape;
    const auto x = tape.parameter(u(gen));
    const auto y = tape.parameter(u(gen));
    const auto f = tape.mul(x, tape.exp(y));
    const auto g = tape.mul(y, tape.add(x, tape.constant(2.0)));
    const auto sum = tape.add(f, g);

    tape.forward(f);
    tape.backward(f);
    const double fx = tape.gradient(x), fy = tape.gradient(y);
    tape.forward(g);
    tape.backward(g);
    const double gx = tape.gradient(x), gy = tape.gradient(y);
    tape.forward(sum);
    tape.backward(sum);
    CHECK(tape.gradient(x) == doctest::Approx(fx + gx).epsilon(1e-12));
    CHECK(tape.gradient(y) == doctest::Approx(fy + gy).epsilon(1e-12));
  }
}

TEST_CASE("backward visits each node exactly once") {
  Tape tape;
  const auto x = tape.parameter(0.5);
  const auto y = tape.parameter(1.5);
  const std::array<Tape::NodeId, 2> xy = {x, y};
  const auto f = tape.add(tape.mul(x, y), tape.min(xy));
  tape.forward(f);
  tape.backward(f);
  CHECK(tape.last_backward_visits() == tape.size());
}

TEST_CASE("backward before forward is an invalid state") {
  Tape tape;
  const auto x = tape.parameter(1.0);
  const auto f = tape.exp(x);
  CHECK_THROWS_AS(tape.backward(f), std::logic_error);
}

TEST_CASE("parameter rebinding invalidates stale forward results") {
  Tape tape;
  const auto x = tape.parameter(1.0);
  const auto f = tape.mul(x, x);
  CHECK(tape.forward(f) == 1.0);
  tape.set_parameter(x, 3.0);
  CHECK_THROWS_AS(tape.backward(f), std::logic_error);
  CHECK(tape.forward(f) == 9.0);
  tape.backward(f);
  CHECK(tape.gradient(x) == 6.0);
}

TEST_CASE("misuse is rejected") {
  Tape tape;
  const auto x = tape.constant(1.0);
  CHECK_THROWS_AS(tape.set_parameter(x, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(tape.max({}), std::invalid_argument);
  CHECK_THROWS_AS(tape.min({}), std::invalid_argument);
  const std::array<Tape::NodeId, 1> xs = {x};
  CHECK_THROWS_AS(tape.softmax_component(xs, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(tape.value(999), std::invalid_argument);
}

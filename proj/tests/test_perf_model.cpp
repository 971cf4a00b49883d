#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "semnet/perf_model.hpp"

using namespace semnet::perf;

namespace {

// Golden copy of the embedded table, transcribed independently of the
// library source.
constexpr std::array<std::array<double, 3>, 16> kGolden = {{
    {1, 0.39550235, 0.0944817},
    {2, 0.40009948, 0.09667912},
    {3, 0.40945041, 0.09386748},
    {4, 0.41866887, 0.10047062},
    {5, 0.42247792, 0.10116262},
    {6, 0.42490115, 0.10300542},
    {7, 0.4295931, 0.11076793},
    {8, 0.43368545, 0.11739845},
    {9, 0.43733177, 0.12781957},
    {10, 0.4519554, 0.15357989},
    {11, 0.47728359, 0.1940025},
    {12, 0.51547686, 0.27020956},
    {13, 0.55437698, 0.34242301},
    {14, 0.61085957, 0.44607532},
    {15, 0.7460733, 0.65054165},
    {16, 0.86169747, 0.82109432},
}};

}  // namespace

TEST_CASE("lookup reproduces every embedded point bit-exactly") {
  const auto& curve = PerfCurve::reference();
  for (const auto& row : kGolden) {
    const auto p = curve.lookup(static_cast<int>(row[0]));
    CHECK(p.similarity == row[1]);
    CHECK(p.bleu_1gram == row[2]);
  }
}

TEST_CASE("lookup endpoint examples") {
  const auto& curve = PerfCurve::reference();
  CHECK(curve.lookup(16).similarity == 0.86169747);
  CHECK(curve.lookup(16).bleu_1gram == 0.82109432);
  CHECK(curve.lookup(1).similarity == 0.39550235);
  CHECK(curve.lookup(1).bleu_1gram == 0.0944817);
}

TEST_CASE("lookup rejects out-of-range dimensions") {
  const auto& curve = PerfCurve::reference();
  CHECK_THROWS_AS(curve.lookup(0), std::out_of_range);
  CHECK_THROWS_AS(curve.lookup(17), std::out_of_range);
  CHECK_THROWS_AS(curve.lookup(-3), std::out_of_range);
}

TEST_CASE("curve constructor validates similarity monotonicity and ranges") {
  auto points = PerfCurve::reference().points();
  std::swap(points[3], points[4]);  // breaks strict increase
  CHECK_THROWS_AS(PerfCurve{points}, std::invalid_argument);

  points = PerfCurve::reference().points();
  points[5].bleu_1gram = 1.5;
  CHECK_THROWS_AS(PerfCurve{points}, std::invalid_argument);
}

TEST_CASE("the BLEU column is not monotone (dips at D=3)") {
  const auto& curve = PerfCurve::reference();
  CHECK(curve.lookup(3).bleu_1gram < curve.lookup(2).bleu_1gram);
}

TEST_CASE("payload bits") {
  PayloadModel model;  // 32 words, 32 bits per feature
  CHECK(model.payload_bits(16) == 16384);
  CHECK(model.payload_bits(1) == 1024);
  CHECK_THROWS_AS(model.payload_bits(0), std::out_of_range);
  CHECK_THROWS_AS(model.payload_bits(17), std::out_of_range);

  PayloadModel unit{1, 1, 16};
  CHECK(unit.payload_bits(1) == 1);
}

TEST_CASE("feasible dimension boundaries") {
  PayloadModel model;
  CHECK(model.feasible_dimension(16384) == 16);
  CHECK(model.feasible_dimension(16383) == 15);
  CHECK(model.feasible_dimension(1024) == 1);
  CHECK(model.feasible_dimension(1023) == std::nullopt);
  CHECK(model.feasible_dimension(0) == std::nullopt);
  CHECK(model.feasible_dimension(1 << 20) == 16);  // capped at the table
  CHECK_THROWS_AS(model.feasible_dimension(-1), std::invalid_argument);
}

TEST_CASE("feasible dimension is monotone and sandwiched by payload bits") {
  PayloadModel model;
  std::optional<int> prev;
  for (std::int64_t budget = 0; budget <= 18000; budget += 37) {
    const auto d = model.feasible_dimension(budget);
    if (prev && d) CHECK(*d >= *prev);
    if (d) {
      CHECK(model.payload_bits(*d) <= budget);
      if (*d < model.max_dimension) CHECK(budget < model.payload_bits(*d + 1));
    }
    if (d) prev = d;
  }
}

TEST_CASE("csv rendering carries the exact 8-significant-digit values") {
  const auto csv = curve_to_csv(PerfCurve::reference());
  CHECK(csv.find("dimension,similarity,bleu_1gram\n") == 0);
  CHECK(csv.find("16,0.86169747,0.82109432\n") != std::string::npos);
  CHECK(csv.find("1,0.39550235,0.0944817\n") != std::string::npos);
}

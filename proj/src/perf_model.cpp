#include "semnet/perf_model.hpp"

#include <stdexcept>

#include "semnet/csv.hpp"

namespace semnet::perf {

namespace {

constexpr std::array<CurvePoint, PerfCurve::kNumPoints> kReferencePoints = {{
    {0.39550235, 0.0944817},
    {0.40009948, 0.09667912},
    {0.40945041, 0.09386748},
    {0.41866887, 0.10047062},
    {0.42247792, 0.10116262},
    {0.42490115, 0.10300542},
    {0.4295931, 0.11076793},
    {0.43368545, 0.11739845},
    {0.43733177, 0.12781957},
    {0.4519554, 0.15357989},
    {0.47728359, 0.1940025},
    {0.51547686, 0.27020956},
    {0.55437698, 0.34242301},
    {0.61085957, 0.44607532},
    {0.7460733, 0.65054165},
    {0.86169747, 0.82109432},
}};

}  // namespace

const PerfCurve& PerfCurve::reference() {
  static const PerfCurve curve(kReferencePoints);
  return curve;
}

PerfCurve::PerfCurve(const std::array<CurvePoint, kNumPoints>& points)
    : points_(points) {
  double prev_similarity = -1.0;
  for (const auto& p : points_) {
    if (p.similarity < 0.0 || p.similarity > 1.0 || p.bleu_1gram < 0.0 ||
        p.bleu_1gram > 1.0) {
      throw std::invalid_argument("curve values must lie in [0, 1]");
    }
    if (!(p.similarity > prev_similarity)) {
      throw std::invalid_argument("similarity must be strictly increasing in dimension");
    }
    prev_similarity = p.similarity;
  }
}

CurvePoint PerfCurve::lookup(int dimension) const {
  if (dimension < kMinDimension || dimension > kMaxDimension) {
    throw std::out_of_range("dimension must be in [1, 16], got " +
                            std::to_string(dimension));
  }
  return points_[static_cast<std::size_t>(dimension - 1)];
}

std::int64_t PayloadModel::payload_bits(int dimension) const {
  if (words_per_sentence < 1 || bits_per_feature < 1) {
    throw std::invalid_argument("payload model parameters must be >= 1");
  }
  if (dimension < 1 || dimension > max_dimension) {
    throw std::out_of_range("dimension must be in [1, " +
                            std::to_string(max_dimension) + "], got " +
                            std::to_string(dimension));
  }
  return static_cast<std::int64_t>(words_per_sentence) * dimension * bits_per_feature;
}

std::optional<int> PayloadModel::feasible_dimension(std::int64_t bit_budget) const {
  if (bit_budget < 0) {
    throw std::invalid_argument("bit budget must be non-negative");
  }
  if (bit_budget < payload_bits(1)) return std::nullopt;
  // payload_bits is linear in the dimension, so the maximum is a division.
  const auto per_dim =
      static_cast<std::int64_t>(words_per_sentence) * bits_per_feature;
  const auto d = static_cast<int>(bit_budget / per_dim);
  return std::min(d, max_dimension);
}

std::string curve_to_csv(const PerfCurve& curve) {
  std::string out = "dimension,similarity,bleu_1gram\n";
  for (int d = PerfCurve::kMinDimension; d <= PerfCurve::kMaxDimension; ++d) {
    const auto p = curve.lookup(d);
    out += format_int(d);
    out += ',';
    out += format_float(p.similarity);
    out += ',';
    out += format_float(p.bleu_1gram);
    out += '\n';
  }
  return out;
}

}  // namespace semnet::perf

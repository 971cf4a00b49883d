#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

// Measured performance of the reference text encoder: sentence similarity and
// 1-gram BLEU as a function of the semantic feature output dimension, plus
// the payload-size model for a fixed-length sentence. Pure, immutable data.

namespace semnet::perf {

struct CurvePoint {
  double similarity = 0.0;
  double bleu_1gram = 0.0;
};

class PerfCurve {
 public:
  static constexpr int kMinDimension = 1;
  static constexpr int kMaxDimension = 16;
  static constexpr int kNumPoints = 16;

  /// The built-in measured curve shipped with the library. Similarity is
  /// strictly increasing in the dimension; BLEU is not (it dips at D = 3).
  static const PerfCurve& reference();

  /// Validates ranges and strict monotonicity of the similarity column.
  explicit PerfCurve(const std::array<CurvePoint, kNumPoints>& points);

  /// Exact table lookup; throws std::out_of_range outside [1, 16].
  CurvePoint lookup(int dimension) const;

  const std::array<CurvePoint, kNumPoints>& points() const { return points_; }

 private:
  std::array<CurvePoint, kNumPoints> points_;
};

/// Payload size of one encoded sentence: words_per_sentence rows of
/// `dimension` features, bits_per_feature bits each.
struct PayloadModel {
  int words_per_sentence = 32;
  int bits_per_feature = 32;
  int max_dimension = PerfCurve::kMaxDimension;

  std::int64_t payload_bits(int dimension) const;

  /// Largest dimension whose payload fits the budget; nullopt when even
  /// dimension 1 does not fit (no transmission).
  std::optional<int> feasible_dimension(std::int64_t bit_budget) const;
};

/// CSV rendering of a curve with header `dimension,similarity,bleu_1gram`.
std::string curve_to_csv(const PerfCurve& curve);

}  // namespace semnet::perf

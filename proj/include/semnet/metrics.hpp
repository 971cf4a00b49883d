#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

// Text and timeliness metrics: n-gram BLEU, TF-IDF n-gram consensus (CIDEr),
// cosine sentence similarity, and time-averaged AoI / AoII over state traces.
//
// Everything here is a pure function of its inputs; values are immutable and
// safe to share across threads.

namespace semnet::metrics {

/// Lowercased word tokens. Comparison is exact string equality.
using TokenSeq = std::vector<std::string>;

/// Real-valued semantic feature vector.
using EmbeddingVec = std::vector<double>;

/// One sampled instant of a monitored source/receiver pair. Between events
/// all four fields are held constant.
struct TraceEvent {
  double t = 0.0;                  ///< seconds; strictly increasing in a trace
  std::string source;              ///< current source state symbol
  std::string estimate;            ///< receiver's current estimate symbol
  double freshest_generation_time = 0.0;  ///< generation time of freshest delivered update, <= t
};

struct StateTrace {
  std::vector<TraceEvent> events;
};

/// Whitespace split plus ASCII lowercasing. Multibyte UTF-8 sequences are
/// passed through untouched.
TokenSeq tokenize(std::string_view text);

/// Modified n-gram precision with clipping, geometric mean over n = 1..max_n,
/// times brevity penalty exp(1 - r/c) when the candidate is shorter than the
/// closest reference. Unsmoothed: zero matches at any order give score 0.
double bleu(const TokenSeq& candidate, const std::vector<TokenSeq>& references,
            int max_n);

/// Mean over n = 1..max_n of the TF-IDF weighted n-gram cosine similarity
/// between candidate and each reference, averaged over references. The IDF
/// corpus is the reference set itself, with add-one smoothing
/// (idf = ln((1+R)/(1+df)) + 1) so a single-reference corpus is well defined.
/// Unscaled: scores live in [0, 1].
double cider(const TokenSeq& candidate, const std::vector<TokenSeq>& references,
             int max_n);

/// Cosine of the angle between two equal-dimension, nonzero vectors.
double sentence_similarity(const EmbeddingVec& a, const EmbeddingVec& b);

/// Time average over [0, horizon] of AoI(t) = t - freshest_generation_time,
/// integrated exactly on the piecewise-linear sawtooth.
double average_aoi(const StateTrace& trace, double horizon);

/// Time average over [0, horizon] of AoII(t) = (t - v(t)) * 1[source != estimate],
/// where v(t) is the last instant the estimate was correct (trace start if
/// never). Linear time penalty, indicator error penalty, exact integration.
double average_aoii(const StateTrace& trace, double horizon);

/// Parses the trace CSV format: header `t,source,estimate,gen_time`, one
/// event per row. Throws std::invalid_argument naming the 1-based line of the
/// first malformed row.
StateTrace parse_trace_csv(std::istream& in, const std::string& name);

}  // namespace semnet::metrics

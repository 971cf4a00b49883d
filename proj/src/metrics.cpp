#include "semnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>
#include <stdexcept>

#include "semnet/csv.hpp"

namespace semnet::metrics {

namespace {

using Ngram = std::vector<std::string>;
using NgramCounts = std::map<Ngram, int>;

NgramCounts count_ngrams(const TokenSeq& tokens, int n) {
  NgramCounts counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    counts[Ngram(tokens.begin() + i, tokens.begin() + i + n)] += 1;
  }
  return counts;
}

void check_sentences(const TokenSeq& candidate,
                     const std::vector<TokenSeq>& references, int max_n) {
  if (candidate.empty()) {
    throw std::invalid_argument("empty candidate sentence");
  }
  if (references.empty()) {
    throw std::invalid_argument("at least one reference required");
  }
  for (const auto& r : references) {
    if (r.empty()) throw std::invalid_argument("empty reference sentence");
  }
  if (max_n < 1 || max_n > static_cast<int>(candidate.size())) {
    throw std::invalid_argument("max_n must be in [1, candidate length]");
  }
}

void check_trace(const StateTrace& trace, double horizon) {
  if (trace.events.empty()) {
    throw std::invalid_argument("empty trace");
  }
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("horizon must be positive");
  }
  if (trace.events.front().t != 0.0) {
    throw std::invalid_argument("trace must start at t = 0");
  }
  double prev = -1.0;
  for (const auto& ev : trace.events) {
    if (!(ev.t > prev)) {
      throw std::invalid_argument("trace timestamps must be strictly increasing");
    }
    if (ev.freshest_generation_time > ev.t) {
      throw std::invalid_argument("freshest_generation_time must not exceed timestamp");
    }
    prev = ev.t;
  }
}

double parse_double(const std::string& s, bool& ok) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  ok = end != s.c_str() && *end == '\0';
  return v;
}

}  // namespace

TokenSeq tokenize(std::string_view text) {
  TokenSeq tokens;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      if (!cur.empty()) {
        tokens.push_back(cur);
        cur.clear();
      }
    } else {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

double bleu(const TokenSeq& candidate, const std::vector<TokenSeq>& references,
            int max_n) {
  check_sentences(candidate, references, max_n);

  double log_precision_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const NgramCounts cand = count_ngrams(candidate, n);
    std::vector<NgramCounts> ref_counts;
    ref_counts.reserve(references.size());
    for (const auto& ref : references) ref_counts.push_back(count_ngrams(ref, n));
    std::int64_t total = 0;
    std::int64_t clipped = 0;
    for (const auto& [gram, count] : cand) {
      int best_ref = 0;
      for (const auto& rc : ref_counts) {
        const auto it = rc.find(gram);
        if (it != rc.end()) best_ref = std::max(best_ref, it->second);
      }
      total += count;
      clipped += std::min(count, best_ref);
    }
    if (clipped == 0) return 0.0;
    log_precision_sum +=
        std::log(static_cast<double>(clipped) / static_cast<double>(total));
  }

  // Brevity penalty against the closest reference length; ties go to the
  // shorter reference.
  const auto c = static_cast<std::int64_t>(candidate.size());
  std::int64_t r = static_cast<std::int64_t>(references.front().size());
  for (const auto& ref : references) {
    const auto len = static_cast<std::int64_t>(ref.size());
    if (std::abs(len - c) < std::abs(r - c) ||
        (std::abs(len - c) == std::abs(r - c) && len < r)) {
      r = len;
    }
  }
  const double bp =
      c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
  return bp * std::exp(log_precision_sum / max_n);
}

double cider(const TokenSeq& candidate, const std::vector<TokenSeq>& references,
             int max_n) {
  check_sentences(candidate, references, max_n);

  const auto num_refs = static_cast<double>(references.size());
  double order_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    std::map<Ngram, int> df;
    std::vector<NgramCounts> ref_counts;
    ref_counts.reserve(references.size());
    for (const auto& ref : references) {
      ref_counts.push_back(count_ngrams(ref, n));
      for (const auto& [gram, count] : ref_counts.back()) {
        (void)count;
        df[gram] += 1;
      }
    }
    const auto idf = [&](const Ngram& gram) {
      const auto it = df.find(gram);
      const int d = it == df.end() ? 0 : it->second;
      return std::log((1.0 + num_refs) / (1.0 + d)) + 1.0;
    };

    const NgramCounts cand = count_ngrams(candidate, n);
    double cand_norm_sq = 0.0;
    for (const auto& [gram, count] : cand) {
      const double w = count * idf(gram);
      cand_norm_sq += w * w;
    }

    double ref_mean = 0.0;
    for (const auto& rc : ref_counts) {
      double dot = 0.0;
      double ref_norm_sq = 0.0;
      for (const auto& [gram, count] : rc) {
        const double w = count * idf(gram);
        ref_norm_sq += w * w;
        const auto it = cand.find(gram);
        if (it != cand.end()) dot += w * it->second * idf(gram);
      }
      if (cand_norm_sq > 0.0 && ref_norm_sq > 0.0) {
        ref_mean += dot / (std::sqrt(cand_norm_sq) * std::sqrt(ref_norm_sq));
      }
    }
    order_sum += ref_mean / num_refs;
  }
  return order_sum / max_n;
}

double sentence_similarity(const EmbeddingVec& a, const EmbeddingVec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("embedding dimension mismatch");
  }
  if (a.empty()) {
    throw std::invalid_argument("empty embedding vector");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw std::invalid_argument("embedding entries must be finite");
    }
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("zero vector in cosine similarity");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double average_aoi(const StateTrace& trace, double horizon) {
  check_trace(trace, horizon);
  double area = 0.0;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const auto& ev = trace.events[i];
    if (ev.t >= horizon) break;
    const double t_end = std::min(
        i + 1 < trace.events.size() ? trace.events[i + 1].t : horizon, horizon);
    // AoI is linear with slope 1 on the segment, so the trapezoid is exact.
    const double a0 = ev.t - ev.freshest_generation_time;
    const double a1 = t_end - ev.freshest_generation_time;
    area += 0.5 * (a0 + a1) * (t_end - ev.t);
  }
  return area / horizon;
}

double average_aoii(const StateTrace& trace, double horizon) {
  check_trace(trace, horizon);
  double area = 0.0;
  double last_correct = 0.0;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const auto& ev = trace.events[i];
    if (ev.t >= horizon) break;
    const double t_end = std::min(
        i + 1 < trace.events.size() ? trace.events[i + 1].t : horizon, horizon);
    if (ev.source == ev.estimate) {
      last_correct = t_end;
    } else {
      const double a0 = ev.t - last_correct;
      const double a1 = t_end - last_correct;
      area += 0.5 * (a0 + a1) * (t_end - ev.t);
    }
  }
  return area / horizon;
}

StateTrace parse_trace_csv(std::istream& in, const std::string& name) {
  StateTrace trace;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"t", "source", "estimate", "gen_time"}) {
        throw std::invalid_argument(name + ":" + std::to_string(line_no) +
                                    ": expected header t,source,estimate,gen_time");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) {
      throw std::invalid_argument(name + ":" + std::to_string(line_no) +
                                  ": expected 4 fields, got " +
                                  std::to_string(fields.size()));
    }
    bool ok_t = false, ok_g = false;
    TraceEvent ev;
    ev.t = parse_double(fields[0], ok_t);
    ev.source = fields[1];
    ev.estimate = fields[2];
    ev.freshest_generation_time = parse_double(fields[3], ok_g);
    if (!ok_t || !ok_g) {
      throw std::invalid_argument(name + ":" + std::to_string(line_no) +
                                  ": malformed numeric field");
    }
    trace.events.push_back(std::move(ev));
  }
  if (!header_seen) {
    throw std::invalid_argument(name + ":1: missing header");
  }
  return trace;
}

}  // namespace semnet::metrics

#pragma once

#include <cstdint>
#include <vector>

#include "npir/channels.hpp"
#include "npir/scheme.hpp"
#include "npir/types.hpp"

namespace npir {

inline constexpr std::uint64_t kDefaultSeed = 1729;

// Hard cap on exhaustively decodable code dimension; uplinks larger than this
// are split into balanced segments coded independently.
inline constexpr int kMaxDecodeDim = 24;

// Cap for the random-codebook path used on TABLE channels.
inline constexpr int kMaxCodebookDim = 16;

// Blowup factor standing in for an unachievable blocklength when a used
// database has capacity 0 (the session then runs at chance level).
inline constexpr int kZeroCapacityBlowup = 64;

struct SessionConfig {
  int M = 2;
  int N = 1;
  std::vector<PointChannel> channels;  // physical database order, size N
  long long nu = 1;
  bool auto_seq = true;                // pick seq by maximizing the achievable rate
  GroupSequence seq;                   // used when auto_seq is false; sorted-capacity indexing
  double margin = 0.1;                 // code rate backoff: rate <= C_n / (1 + margin)
  std::uint64_t seed = kDefaultSeed;
};

// Full pipeline: plan synthesis, uncoded answering, per-database channel
// coding (identity when the blocklength formula needs no redundancy),
// transmission, decoding, reconstruction, and rate accounting. Decode failure
// is recorded in the report, not thrown. `desired` is 1-based.
SessionReport run_npir_session(const SessionConfig& cfg, const MessageStore& store, int desired);

struct SweepRow {
  long long nu = 0;
  double success_rate = 0.0;
  double empirical_rate = 0.0;
};

// Monte-Carlo success fraction over fresh random stores per trial, one row
// per repetition count. Trials use split RNG streams and may run on several
// threads; results are independent of thread count.
std::vector<SweepRow> sweep_rate_vs_blocklength(const SessionConfig& cfg, const std::vector<long long>& nu_list,
                                                int trials);

// The per-database blocklengths the session will use (sorted-capacity order,
// zero for unused databases); exposed for rate accounting in tests.
std::vector<long long> planned_blocklengths(int M, const GroupSequence& seq, const CapacityVector& C,
                                            long long nu, double margin);

}  // namespace npir

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "npir/rng.hpp"

namespace npir {

// M replicated messages of L bits each.
struct MessageStore {
  int M = 0;
  int L = 0;
  std::vector<std::vector<std::uint8_t>> bits;  // M rows of L bits

  static MessageStore zero(int M, int L);
  static MessageStore random(int M, int L, RngStream& rng);

  std::uint8_t bit(int m, int pos) const { return bits[static_cast<std::size_t>(m)][static_cast<std::size_t>(pos)]; }
};

// Per-database channel capacities held sorted non-increasing. The sort
// permutation is retained so reports can name physical databases: sorted
// position s corresponds to physical database physical_index(s).
class CapacityVector {
 public:
  CapacityVector() = default;
  // throws std::invalid_argument when an entry is outside [0,1]
  explicit CapacityVector(const std::vector<double>& raw);

  int size() const { return static_cast<int>(c_.size()); }
  double at(int sorted_pos) const { return c_[static_cast<std::size_t>(sorted_pos)]; }
  int physical_index(int sorted_pos) const { return perm_[static_cast<std::size_t>(sorted_pos)]; }
  const std::vector<double>& values() const { return c_; }  // sorted non-increasing

 private:
  std::vector<double> c_;
  std::vector<int> perm_;  // sorted position -> physical index
};

// rejects entries outside [0,1]; sorts non-increasing, never clamps
CapacityVector validate_capacity_vector(const std::vector<double>& raw);

// C_n = 1 - H(p_n), sorted non-increasing; rejects p outside [0, 0.5]
CapacityVector capacities_from_bsc(const std::vector<double>& p);

// Fraction of the total download contributed by each database.
struct TrafficVector {
  std::vector<double> tau;

  // throws std::invalid_argument unless tau >= 0 and sums to 1 within 1e-12
  void validate() const;
};

// Monotone non-decreasing (n_0, ..., n_{M-1}) with 1 <= n_i <= N, selecting
// a corner point: n_i databases participate in rounds involving i+1 messages.
struct GroupSequence {
  std::vector<int> n;

  int M() const { return static_cast<int>(n.size()); }
  int last() const { return n.back(); }
  // throws std::invalid_argument unless monotone and within 1..N
  void validate(int N) const;
  std::string to_string() const;  // "1,2,2"
};

std::vector<GroupSequence> enumerate_group_sequences(int M, int N);

// Outcome of one retrieval session. For point-to-point sessions t_total is
// the sum of the per-database uplink symbol counts; for MAC sessions all
// databases transmit simultaneously, so t_total counts shared channel uses
// and the per-database sum exceeds it by design.
struct SessionReport {
  int desired_index = 0;                 // 1-based
  std::vector<long long> t_per_db;       // physical database order
  long long t_total = 0;
  long long L = 0;                       // bits per message
  double rate = 0.0;                     // empirical L / t_total
  long long errors = 0;                  // bit errors in the recovered message
  int trials = 1;
  std::uint64_t seed = 0;
  double target_rate = 0.0;              // asymptotic rate of the chosen corner
  int decode_failures = 0;               // databases whose block decode failed
  std::vector<std::uint8_t> decoded_message;

  std::string to_json() const;  // stable keys, deterministic formatting
};

}  // namespace npir

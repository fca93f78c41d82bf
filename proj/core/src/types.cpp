#include "npir/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "npir/numerics.hpp"

#include "json.hpp"

namespace npir {

MessageStore MessageStore::zero(int M, int L) {
  if (M < 1 || L < 1) throw std::invalid_argument("MessageStore: M and L must be >= 1");
  MessageStore s;
  s.M = M;
  s.L = L;
  s.bits.assign(static_cast<std::size_t>(M), std::vector<std::uint8_t>(static_cast<std::size_t>(L), 0));
  return s;
}

MessageStore MessageStore::random(int M, int L, RngStream& rng) {
  MessageStore s = zero(M, L);
  for (auto& row : s.bits)
    for (auto& b : row) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
  return s;
}

CapacityVector::CapacityVector(const std::vector<double>& raw) {
  for (double v : raw)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("capacity outside [0,1]");
  perm_.resize(raw.size());
  std::iota(perm_.begin(), perm_.end(), 0);
  std::stable_sort(perm_.begin(), perm_.end(),
                   [&raw](int a, int b) { return raw[static_cast<std::size_t>(a)] > raw[static_cast<std::size_t>(b)]; });
  c_.reserve(raw.size());
  for (int idx : perm_) c_.push_back(raw[static_cast<std::size_t>(idx)]);
}

CapacityVector validate_capacity_vector(const std::vector<double>& raw) { return CapacityVector(raw); }

CapacityVector capacities_from_bsc(const std::vector<double>& p) {
  std::vector<double> c;
  c.reserve(p.size());
  for (double pn : p) {
    if (!(pn >= 0.0 && pn <= 0.5)) throw std::invalid_argument("BSC crossover outside [0, 0.5]");
    c.push_back(1.0 - binary_entropy(pn));
  }
  return CapacityVector(c);
}

void TrafficVector::validate() const {
  double sum = 0.0;
  for (double t : tau) {
    if (t < 0.0) throw std::invalid_argument("traffic ratio negative");
    sum += t;
  }
  if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("traffic ratios do not sum to 1");
}

void GroupSequence::validate(int N) const {
  if (n.empty()) throw std::invalid_argument("empty group sequence");
  int prev = 1;
  for (int v : n) {
    if (v < prev || v > N) throw std::invalid_argument("group sequence not monotone within 1..N");
    prev = v;
  }
}

std::string GroupSequence::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (i) os << ',';
    os << n[i];
  }
  return os.str();
}

std::vector<GroupSequence> enumerate_group_sequences(int M, int N) {
  std::vector<GroupSequence> all;
  GroupSequence cur;
  cur.n.assign(static_cast<std::size_t>(M), 1);
  for (;;) {
    all.push_back(cur);
    int i = M - 1;
    while (i >= 0 && cur.n[static_cast<std::size_t>(i)] == N) --i;
    if (i < 0) break;
    int v = ++cur.n[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < M; ++j) cur.n[static_cast<std::size_t>(j)] = v;
  }
  return all;
}

std::string SessionReport::to_json() const {
  nlohmann::json j;
  j["desired_index"] = desired_index;
  j["t_per_db"] = t_per_db;
  j["t_total"] = t_total;
  j["L"] = L;
  j["rate"] = rate;
  j["errors"] = errors;
  j["trials"] = trials;
  j["seed"] = seed;
  j["target_rate"] = target_rate;
  j["decode_failures"] = decode_failures;
  return j.dump();
}

}  // namespace npir

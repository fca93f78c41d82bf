#pragma once

#include <string>
#include <vector>

#include "npir/types.hpp"

namespace npir {

// y[l][k] = number of stages of round k at each database of group l, where
// group l covers databases n_{l-1} < n <= n_l (n_{-1} = 0). Groups with
// n_l - n_{l-1} = 0 are absent from `groups` and have all-zero rows.
struct StageTable {
  int M = 0;
  std::vector<int> groups;                  // S, ascending; always contains 0
  std::vector<std::vector<long long>> y;    // y[l][k], l in 0..M-1, k in 0..M (k=0 unused)

  long long count(int l, int k) const { return y[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)]; }
  bool in_groups(int l) const;
};

// Per-database uncoded download counts and the desired symbols recovered per
// repetition for a corner point.
struct CornerPoint {
  GroupSequence sequence;
  StageTable stage_table;
  std::vector<long long> D;  // index n-1 for database n, n = 1..n_{M-1}
  long long Lstar = 0;
};

struct UpperBoundResult {
  double value = 0.0;
  TrafficVector tau;
  std::vector<int> binding_seq;  // (n_1..n_{M-1}) attaining the inner min at tau*
};

struct LowerBoundResult {
  double value = 0.0;
  GroupSequence seq;
};

// Maximin bound: max over traffic splits tau of the min over all download
// orderings (n_1..n_{M-1}) in {1..N}^{M-1}, solved exactly as one LP over
// rationals. Ties in tau* break to the lexicographically smallest vector.
UpperBoundResult upper_bound(int M, int N, const CapacityVector& C);

// Difference-equation solve for the stage counts of a corner point.
StageTable solve_stage_recursion(const GroupSequence& seq, int M);

struct DownloadProfile {
  std::vector<long long> D;
  long long Lstar = 0;
};

DownloadProfile downloads_per_db(const StageTable& table, const GroupSequence& seq, int M);

CornerPoint corner_point(const GroupSequence& seq, int M);

// R = Lstar / sum over used databases of D_n / C_n. Throws when a used
// database has zero capacity.
double achievable_rate(const GroupSequence& seq, const CapacityVector& C, int M);

// Exhaustive max of achievable_rate over all monotone sequences; sequences
// that would use a zero-capacity database are skipped. Ties break to the
// lexicographically smallest sequence.
LowerBoundResult lower_bound(int M, int N, const CapacityVector& C);

// Closed forms for two and three messages over N databases.
double corner_capacity_m2(int N, const CapacityVector& C);
double corner_capacity_m3(int N, const CapacityVector& C);

// Three-message, two-database BSC pair: the max of the three corner
// expressions in terms of C_i = 1 - H(p_i).
double bsc_m3n2_capacity(double p1, double p2);

enum class BscRegion { DB1_ONLY, RATIO_3_1, RATIO_4_3 };

std::string to_string(BscRegion r);

// Classifies by r = C_1/C_2: r > 3 -> DB1_ONLY, 2 < r <= 3 -> RATIO_3_1,
// r <= 2 -> RATIO_4_3. Agrees with the argmax of the three expressions.
BscRegion bsc_m3n2_region(double p1, double p2);

}  // namespace npir

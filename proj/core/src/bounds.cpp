#include "npir/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "npir/numerics.hpp"

namespace npir {

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int group_of(const std::vector<int>& groups, const GroupSequence& seq, int db /*1-based*/) {
  int prev = 0;
  for (int l : groups) {
    int hi = seq.n[static_cast<std::size_t>(l)];
    if (db > prev && db <= hi) return l;
    prev = hi;
  }
  throw std::logic_error("database beyond the sequence's last group");
}

}  // namespace

bool StageTable::in_groups(int l) const {
  return std::find(groups.begin(), groups.end(), l) != groups.end();
}

StageTable solve_stage_recursion(const GroupSequence& seq, int M) {
  if (seq.M() != M) throw std::invalid_argument("sequence length differs from message count");
  seq.validate(seq.last());

  StageTable t;
  t.M = M;
  std::vector<int> sz(static_cast<std::size_t>(M), 0);
  int prev = 0;
  for (int l = 0; l < M; ++l) {
    sz[static_cast<std::size_t>(l)] = seq.n[static_cast<std::size_t>(l)] - prev;
    prev = seq.n[static_cast<std::size_t>(l)];
    if (sz[static_cast<std::size_t>(l)] > 0) t.groups.push_back(l);
  }

  // the products over group indices s >= 1 treat binom(M-2, s-1) at s = 0 as
  // absent; this is the convention that reproduces the known corner points
  long long y01 = 1;
  for (int s : t.groups)
    if (s >= 1) y01 *= binom(M - 2, s - 1);
  std::vector<long long> xi(static_cast<std::size_t>(M), 1);
  for (int l : t.groups) {
    long long v = 1;
    for (int s : t.groups)
      if (s >= 1 && s != l) v *= binom(M - 2, s - 1);
    xi[static_cast<std::size_t>(l)] = v;
  }

  t.y.assign(static_cast<std::size_t>(M), std::vector<long long>(static_cast<std::size_t>(M) + 1, 0));
  int n0 = seq.n[0];
  for (int k = 1; k <= M; ++k) {
    for (int l : t.groups) {
      if (k <= l) continue;  // initial condition y_l[k] = 0 takes precedence
      if (k == 1) {
        t.y[static_cast<std::size_t>(l)][1] = (l == 0) ? y01 : 0;
        continue;
      }
      long long v = 0;
      for (int j : t.groups) {
        long long feeder = sz[static_cast<std::size_t>(j)] - (j == l ? 1 : 0);
        v += feeder * t.y[static_cast<std::size_t>(j)][static_cast<std::size_t>(k) - 1];
      }
      if (l >= 2 && k == l + 1) v += static_cast<long long>(n0) * xi[static_cast<std::size_t>(l)];
      t.y[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] = v;
    }
  }
  return t;
}

DownloadProfile downloads_per_db(const StageTable& table, const GroupSequence& seq, int M) {
  DownloadProfile out;
  int last = seq.last();
  out.D.resize(static_cast<std::size_t>(last), 0);
  for (int db = 1; db <= last; ++db) {
    int l = group_of(table.groups, seq, db);
    long long d = 0;
    for (int k = 1; k <= M; ++k) d += binom(M, k) * table.count(l, k);
    out.D[static_cast<std::size_t>(db) - 1] = d;
  }
  int prev = 0;
  for (int l : table.groups) {
    int szl = seq.n[static_cast<std::size_t>(l)] - prev;
    prev = seq.n[static_cast<std::size_t>(l)];
    for (int k = 1; k <= M; ++k)
      out.Lstar += binom(M - 1, k - 1) * table.count(l, k) * szl;
  }
  return out;
}

CornerPoint corner_point(const GroupSequence& seq, int M) {
  CornerPoint cp;
  cp.sequence = seq;
  cp.stage_table = solve_stage_recursion(seq, M);
  DownloadProfile prof = downloads_per_db(cp.stage_table, seq, M);
  cp.D = std::move(prof.D);
  cp.Lstar = prof.Lstar;
  return cp;
}

double achievable_rate(const GroupSequence& seq, const CapacityVector& C, int M) {
  if (C.size() < seq.last()) throw std::invalid_argument("sequence uses more databases than capacities given");
  CornerPoint cp = corner_point(seq, M);
  double denom = 0.0;
  for (int db = 1; db <= seq.last(); ++db) {
    double c = C.at(db - 1);
    if (c <= 0.0) throw std::domain_error("zero-capacity database in use");
    denom += static_cast<double>(cp.D[static_cast<std::size_t>(db) - 1]) / c;
  }
  return static_cast<double>(cp.Lstar) / denom;
}

LowerBoundResult lower_bound(int M, int N, const CapacityVector& C) {
  if (M < 1 || N < 1 || C.size() != N) throw std::invalid_argument("lower_bound: bad dimensions");
  LowerBoundResult best;
  bool first = true;
  for (const GroupSequence& seq : enumerate_group_sequences(M, N)) {
    if (C.at(seq.last() - 1) <= 0.0) continue;  // would use a dead database
    double r = achievable_rate(seq, C, M);
    if (first || r > best.value) {
      best.value = r;
      best.seq = seq;
      first = false;
    }
  }
  if (first) {  // every database has zero capacity
    best.value = 0.0;
    best.seq.n.assign(static_cast<std::size_t>(M), 1);
  }
  return best;
}

UpperBoundResult upper_bound(int M, int N, const CapacityVector& C) {
  if (M < 1 || N < 1 || C.size() != N) throw std::invalid_argument("upper_bound: bad dimensions");

  std::vector<Rational> cr;
  cr.reserve(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) cr.push_back(to_rational(C.at(n)));

  // variables: tau_1..tau_N, R; maximize R
  LinearProgram lp;
  lp.objective.assign(static_cast<std::size_t>(N) + 1, Rational(0));
  lp.objective.back() = 1;

  std::vector<Rational> simplex_row(static_cast<std::size_t>(N) + 1, Rational(1));
  simplex_row.back() = 0;
  lp.add_constraint(simplex_row, ConstraintSense::EQ, Rational(1));

  // one row per download ordering (n_1..n_{M-1}):
  //   R * sum_t w_t <= sum_n tau_n C_n sum_{t: n > l_t} w_t,
  // with w_t = 1/(n_1...n_t), l_0 = 0, l_t = n_t
  std::vector<std::vector<int>> seqs;
  {
    std::vector<int> cur(static_cast<std::size_t>(M) - 1, 1);
    for (;;) {
      seqs.push_back(cur);
      if (M == 1) break;
      int i = M - 2;
      while (i >= 0 && cur[static_cast<std::size_t>(i)] == N) --i;
      if (i < 0) break;
      ++cur[static_cast<std::size_t>(i)];
      for (std::size_t j = static_cast<std::size_t>(i) + 1; j < cur.size(); ++j) cur[j] = 1;
    }
  }

  std::vector<Rational> denoms;
  denoms.reserve(seqs.size());
  for (const auto& s : seqs) {
    std::vector<Rational> row(static_cast<std::size_t>(N) + 1, Rational(0));
    Rational w(1), denom(0);
    int l = 0;
    for (int t = 0;; ++t) {
      denom += w;
      for (int n = l + 1; n <= N; ++n) row[static_cast<std::size_t>(n) - 1] -= cr[static_cast<std::size_t>(n) - 1] * w;
      if (t == M - 1) break;
      l = s[static_cast<std::size_t>(t)];
      w /= l;
    }
    row.back() = denom;
    denoms.push_back(denom);
    lp.add_constraint(std::move(row), ConstraintSense::LE, Rational(0));
  }

  LpSolution sol = solve_lp_lex_min(lp);
  if (sol.status != LpStatus::Optimal) throw std::logic_error("maximin program did not solve");

  UpperBoundResult out;
  out.value = to_double(sol.value);
  out.tau.tau.resize(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) out.tau.tau[static_cast<std::size_t>(n)] = to_double(sol.x[static_cast<std::size_t>(n)]);
  out.tau.validate();

  // binding ordering: lexicographically smallest minimizer of f_seq at tau*
  Rational best_val;
  bool first = true;
  for (std::size_t si = 0; si < seqs.size(); ++si) {
    Rational num(0), w(1);
    int l = 0;
    for (int t = 0;; ++t) {
      for (int n = l + 1; n <= N; ++n) num += sol.x[static_cast<std::size_t>(n) - 1] * cr[static_cast<std::size_t>(n) - 1] * w;
      if (t == M - 1) break;
      l = seqs[si][static_cast<std::size_t>(t)];
      w /= l;
    }
    Rational val = num / denoms[si];
    if (first || val < best_val) {
      best_val = val;
      out.binding_seq = seqs[si];
      first = false;
    }
  }
  return out;
}

double corner_capacity_m2(int N, const CapacityVector& C) {
  if (C.size() != N) throw std::invalid_argument("capacity vector size differs from N");
  double best = 0.0;
  for (int n0 = 1; n0 <= N; ++n0) {
    for (int n1 = n0; n1 <= N; ++n1) {
      if (C.at(n1 - 1) <= 0.0) continue;
      double denom = 0.0;
      for (int n = 1; n <= n0; ++n) denom += (n0 + 1.0) / C.at(n - 1);
      for (int n = n0 + 1; n <= n1; ++n) denom += static_cast<double>(n0) / C.at(n - 1);
      best = std::max(best, static_cast<double>(n0) * n1 / denom);
    }
  }
  return best;
}

double corner_capacity_m3(int N, const CapacityVector& C) {
  if (C.size() != N) throw std::invalid_argument("capacity vector size differs from N");
  double best = 0.0;
  for (int n0 = 1; n0 <= N; ++n0) {
    for (int n1 = n0; n1 <= N; ++n1) {
      for (int n2 = n1; n2 <= N; ++n2) {
        if (C.at(n2 - 1) <= 0.0) continue;
        double denom = 0.0;
        double q = static_cast<double>(n0) * n1;
        for (int n = 1; n <= n0; ++n) denom += (q + n0 + 1.0) / C.at(n - 1);
        for (int n = n0 + 1; n <= n1; ++n) denom += (q + n0) / C.at(n - 1);
        for (int n = n1 + 1; n <= n2; ++n) denom += q / C.at(n - 1);
        best = std::max(best, q * n2 / denom);
      }
    }
  }
  return best;
}

double bsc_m3n2_capacity(double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= p2 && p2 <= 0.5)) throw std::invalid_argument("need 0 <= p1 <= p2 <= 0.5");
  double c1 = 1.0 - binary_entropy(p1);
  double c2 = 1.0 - binary_entropy(p2);
  double e1 = c1 / 3.0;
  double e2 = (c1 > 0.0 && c2 > 0.0) ? 2.0 / (3.0 / c1 + 1.0 / c2) : 0.0;
  double e3 = (c1 > 0.0 && c2 > 0.0) ? 4.0 / (4.0 / c1 + 3.0 / c2) : 0.0;
  return std::max({e1, e2, e3});
}

std::string to_string(BscRegion r) {
  switch (r) {
    case BscRegion::DB1_ONLY: return "DB1_ONLY";
    case BscRegion::RATIO_3_1: return "RATIO_3_1";
    default: return "RATIO_4_3";
  }
}

BscRegion bsc_m3n2_region(double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= p2 && p2 <= 0.5)) throw std::invalid_argument("need 0 <= p1 <= p2 <= 0.5");
  double c1 = 1.0 - binary_entropy(p1);
  double c2 = 1.0 - binary_entropy(p2);
  if (c2 <= 0.0) {
    if (c1 > 0.0) return BscRegion::DB1_ONLY;  // ratio unbounded
    return BscRegion::RATIO_4_3;               // both links dead: ratio 1
  }
  double r = c1 / c2;
  if (r > 3.0) return BscRegion::DB1_ONLY;
  if (r > 2.0) return BscRegion::RATIO_3_1;
  return BscRegion::RATIO_4_3;
}

}  // namespace npir

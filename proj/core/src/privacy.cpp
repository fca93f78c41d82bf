#include "npir/privacy.hpp"

#include <algorithm>
#include <stdexcept>

#include "npir/macpir.hpp"

namespace npir {

namespace {

// Desired indices are 0-based throughout this translation unit, matching the
// plan synthesizer.

std::string serialize_query(const KSumQuery& q) {
  std::string s;
  for (std::size_t t = 0; t < q.terms.size(); ++t) {
    if (t) s += '+';
    s += std::to_string(q.terms[t].message);
    s += ':';
    s += std::to_string(q.terms[t].slot);
  }
  return s;
}

std::string serialize_ordered(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ';';
    s += parts[i];
  }
  return s;
}

// distinct slots each message uses in a query list, sorted
std::vector<std::vector<int>> used_slots(const std::vector<KSumQuery>& qs, int M) {
  std::vector<std::vector<int>> used(static_cast<std::size_t>(M));
  for (const auto& q : qs)
    for (const auto& t : q.terms) used[static_cast<std::size_t>(t.message)].push_back(t.slot);
  for (auto& u : used) {
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
  }
  return used;
}

boost::multiprecision::cpp_int falling(long long L, std::size_t u) {
  boost::multiprecision::cpp_int r = 1;
  for (std::size_t i = 0; i < u; ++i) r *= (L - static_cast<long long>(i));
  return r;
}

struct InjectionEnumerator {
  int M;
  long long L;
  std::vector<KSumQuery> qs;                // canonical order, terms sorted
  std::vector<std::vector<int>> used;       // per message
  std::vector<std::vector<int>> slot_pos;   // per message: slot -> index in used[m], -1 otherwise
  std::vector<std::vector<int>> sigma;      // per message: used index -> target slot
  std::vector<std::vector<char>> taken;     // per message: target slot occupied
  Rational weight;
  bool ordered = false;
  QueryDistribution dist;

  InjectionEnumerator(const QueryPlan& plan, int db, bool ordered_mode) {
    M = plan.M;
    L = plan.L;
    qs = plan.queries[static_cast<std::size_t>(db)];
    for (auto& q : qs) std::sort(q.terms.begin(), q.terms.end());
    used = used_slots(qs, M);
    ordered = ordered_mode;

    long double space = 1.0L;
    boost::multiprecision::cpp_int denom = 1;
    for (const auto& u : used) {
      denom *= falling(L, u.size());
      for (std::size_t i = 0; i < u.size(); ++i) space *= static_cast<long double>(L - static_cast<long long>(i));
    }
    if (ordered) {
      boost::multiprecision::cpp_int fact = 1;
      for (std::size_t i = 2; i <= qs.size(); ++i) {
        fact *= i;
        space *= static_cast<long double>(i);
      }
      denom *= fact;
    }
    if (space > 1048576.0L) throw std::length_error("randomness space exceeds the enumeration guard");
    weight = Rational(1) / Rational(denom);

    slot_pos.assign(static_cast<std::size_t>(M), std::vector<int>(static_cast<std::size_t>(L), -1));
    sigma.assign(static_cast<std::size_t>(M), {});
    taken.assign(static_cast<std::size_t>(M), std::vector<char>(static_cast<std::size_t>(L), 0));
    for (int m = 0; m < M; ++m) {
      const auto& u = used[static_cast<std::size_t>(m)];
      sigma[static_cast<std::size_t>(m)].assign(u.size(), -1);
      for (std::size_t i = 0; i < u.size(); ++i)
        slot_pos[static_cast<std::size_t>(m)][static_cast<std::size_t>(u[i])] = static_cast<int>(i);
    }
  }

  void emit() {
    std::vector<std::string> parts;
    parts.reserve(qs.size());
    for (const auto& q : qs) {
      KSumQuery r;
      r.terms.reserve(q.terms.size());
      for (const auto& t : q.terms) {
        int idx = slot_pos[static_cast<std::size_t>(t.message)][static_cast<std::size_t>(t.slot)];
        r.terms.push_back(QueryTerm{t.message, sigma[static_cast<std::size_t>(t.message)][static_cast<std::size_t>(idx)]});
      }
      std::sort(r.terms.begin(), r.terms.end());
      parts.push_back(serialize_query(r));
    }
    if (!ordered) {
      std::sort(parts.begin(), parts.end());
      dist.mass[serialize_ordered(parts)] += weight;
      return;
    }
    std::vector<std::size_t> order(parts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    do {
      std::vector<std::string> transmitted(parts.size());
      for (std::size_t c = 0; c < parts.size(); ++c) transmitted[order[c]] = parts[c];
      dist.mass[serialize_ordered(transmitted)] += weight;
    } while (std::next_permutation(order.begin(), order.end()));
  }

  void recurse(int m, std::size_t i) {
    if (m == M) {
      emit();
      return;
    }
    const auto& u = used[static_cast<std::size_t>(m)];
    if (i == u.size()) {
      recurse(m + 1, 0);
      return;
    }
    for (int target = 0; target < L; ++target) {
      if (taken[static_cast<std::size_t>(m)][static_cast<std::size_t>(target)]) continue;
      taken[static_cast<std::size_t>(m)][static_cast<std::size_t>(target)] = 1;
      sigma[static_cast<std::size_t>(m)][i] = target;
      recurse(m, i + 1);
      taken[static_cast<std::size_t>(m)][static_cast<std::size_t>(target)] = 0;
    }
  }

  QueryDistribution run() {
    recurse(0, 0);
    return std::move(dist);
  }
};

std::vector<int> query_shape(const KSumQuery& q) {
  std::vector<int> s;
  s.reserve(q.terms.size());
  for (const auto& t : q.terms) s.push_back(t.message);
  return s;
}

// Searches per-message slot bijections mapping query set A onto query set B.
struct IsomorphismSearch {
  int M;
  long long L;
  std::vector<KSumQuery> A, B;
  std::vector<std::vector<int>> fwd, inv;  // per message: slot maps, -1 unset
  std::vector<char> matched;               // B queries already used

  IsomorphismSearch(const QueryPlan& pa, const QueryPlan& pb, int db) {
    M = pa.M;
    L = pa.L;
    A = pa.queries[static_cast<std::size_t>(db)];
    B = pb.queries[static_cast<std::size_t>(db)];
    for (auto& q : A) std::sort(q.terms.begin(), q.terms.end());
    for (auto& q : B) std::sort(q.terms.begin(), q.terms.end());
    fwd.assign(static_cast<std::size_t>(M), std::vector<int>(static_cast<std::size_t>(L), -1));
    inv.assign(static_cast<std::size_t>(M), std::vector<int>(static_cast<std::size_t>(L), -1));
    matched.assign(B.size(), 0);
  }

  bool try_match(std::size_t a, std::size_t b, std::vector<std::pair<int, int>>* bound) {
    const auto& qa = A[a].terms;
    const auto& qb = B[b].terms;
    if (qa.size() != qb.size()) return false;
    for (std::size_t t = 0; t < qa.size(); ++t) {
      if (qa[t].message != qb[t].message) return false;
      int m = qa[t].message, s = qa[t].slot, d = qb[t].slot;
      int cur = fwd[static_cast<std::size_t>(m)][static_cast<std::size_t>(s)];
      if (cur == d) continue;
      if (cur != -1 || inv[static_cast<std::size_t>(m)][static_cast<std::size_t>(d)] != -1) return false;
      fwd[static_cast<std::size_t>(m)][static_cast<std::size_t>(s)] = d;
      inv[static_cast<std::size_t>(m)][static_cast<std::size_t>(d)] = s;
      bound->push_back({m, s});
    }
    return true;
  }

  void unbind(const std::vector<std::pair<int, int>>& bound) {
    for (auto [m, s] : bound) {
      int d = fwd[static_cast<std::size_t>(m)][static_cast<std::size_t>(s)];
      fwd[static_cast<std::size_t>(m)][static_cast<std::size_t>(s)] = -1;
      inv[static_cast<std::size_t>(m)][static_cast<std::size_t>(d)] = -1;
    }
  }

  bool search(std::size_t a) {
    if (a == A.size()) return true;
    for (std::size_t b = 0; b < B.size(); ++b) {
      if (matched[b]) continue;
      std::vector<std::pair<int, int>> bound;
      if (try_match(a, b, &bound)) {
        matched[b] = 1;
        if (search(a + 1)) return true;
        matched[b] = 0;
      }
      unbind(bound);
    }
    return false;
  }

  bool isomorphic() {
    if (A.size() != B.size()) return false;
    std::vector<std::vector<int>> sa, sb;
    for (const auto& q : A) sa.push_back(query_shape(q));
    for (const auto& q : B) sb.push_back(query_shape(q));
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
    return search(0);
  }
};

long double enumeration_space(const QueryPlan& plan, int db) {
  auto used = used_slots(plan.queries[static_cast<std::size_t>(db)], plan.M);
  long double space = 1.0L;
  for (const auto& u : used)
    for (std::size_t i = 0; i < u.size(); ++i) space *= static_cast<long double>(plan.L - static_cast<long long>(i));
  return space;
}

QueryDistribution single_query_point_mass(const KSumQuery& q) {
  QueryDistribution d;
  d.mass[serialize_query(q)] = 1;
  return d;
}

}  // namespace

std::string canonical_query_set(const std::vector<KSumQuery>& queries) {
  std::vector<std::string> parts;
  parts.reserve(queries.size());
  for (const auto& q : queries) {
    KSumQuery s = q;
    std::sort(s.terms.begin(), s.terms.end());
    parts.push_back(serialize_query(s));
  }
  std::sort(parts.begin(), parts.end());
  return serialize_ordered(parts);
}

Rational total_variation(const QueryDistribution& d1, const QueryDistribution& d2) {
  Rational sum = 0;
  for (const auto& [k, p] : d1.mass) {
    auto it = d2.mass.find(k);
    Rational q = it == d2.mass.end() ? Rational(0) : it->second;
    sum += p >= q ? p - q : q - p;
  }
  for (const auto& [k, q] : d2.mass)
    if (d1.mass.find(k) == d1.mass.end()) sum += q;
  return sum / 2;
}

QueryDistribution enumerate_query_distribution(int M, int N, const GroupSequence& seq, int desired,
                                               int db) {
  auto [plan, recon] = synthesize_query_plan_identity(M, N, seq, desired, 1);
  (void)recon;
  if (db < 0 || db >= seq.last()) throw std::invalid_argument("database receives no queries");
  return InjectionEnumerator(plan, db, false).run();
}

QueryDistribution enumerate_ordered_query_distribution(int M, int N, const GroupSequence& seq,
                                                       int desired, int db) {
  auto [plan, recon] = synthesize_query_plan_identity(M, N, seq, desired, 1);
  (void)recon;
  if (db < 0 || db >= seq.last()) throw std::invalid_argument("database receives no queries");
  return InjectionEnumerator(plan, db, true).run();
}

Rational plan_orbit_tv(int M, int N, const GroupSequence& seq, int i, int j, int db) {
  auto [pi_plan, ri] = synthesize_query_plan_identity(M, N, seq, i, 1);
  auto [pj_plan, rj] = synthesize_query_plan_identity(M, N, seq, j, 1);
  (void)ri;
  (void)rj;
  if (db < 0 || db >= seq.last()) throw std::invalid_argument("database receives no queries");
  // both distributions are uniform over per-message-relabeling orbits, which
  // are equal (isomorphic patterns) or disjoint
  IsomorphismSearch s(pi_plan, pj_plan, db);
  return s.isomorphic() ? Rational(0) : Rational(1);
}

Rational scheme_privacy_tv_max(int M, int N, const GroupSequence& seq) {
  seq.validate(N);
  if (seq.M() != M) throw std::invalid_argument("sequence length differs from M");

  auto [probe, pr] = synthesize_query_plan_identity(M, N, seq, 0, 1);
  (void)pr;
  bool enumerable = true;
  for (int db = 0; db < seq.last() && enumerable; ++db)
    if (enumeration_space(probe, db) > 1048576.0L) enumerable = false;

  Rational worst = 0;
  if (enumerable) {
    for (int db = 0; db < seq.last(); ++db) {
      std::vector<QueryDistribution> dists;
      dists.reserve(static_cast<std::size_t>(M));
      for (int i = 0; i < M; ++i) dists.push_back(enumerate_query_distribution(M, N, seq, i, db));
      for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j)
          worst = std::max(worst, total_variation(dists[static_cast<std::size_t>(i)],
                                                  dists[static_cast<std::size_t>(j)]));
    }
  } else {
    for (int db = 0; db < seq.last(); ++db)
      for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j) worst = std::max(worst, plan_orbit_tv(M, N, seq, i, j, db));
  }
  return worst;
}

QueryDistribution additive_query_distribution(int M, int desired, int db) {
  if (M < 1 || M > 20) throw std::invalid_argument("mask space must be enumerable");
  if (desired < 0 || desired >= M) throw std::invalid_argument("desired index out of range");
  if (db != 1 && db != 2) throw std::invalid_argument("additive scheme uses databases 1 and 2");
  QueryDistribution d;
  Rational w = Rational(1) / Rational(boost::multiprecision::cpp_int(1) << M);
  for (unsigned mask = 0; mask < (1u << M); ++mask) {
    unsigned eff = db == 1 ? mask : mask ^ (1u << desired);
    KSumQuery q;
    for (int m = 0; m < M; ++m)
      if ((eff >> m) & 1u) q.terms.push_back(QueryTerm{m, 0});
    d.mass[serialize_query(q)] += w;
  }
  return d;
}

QueryDistribution boolean_query_distribution(int M, int desired, int db, bool disjunction) {
  (void)disjunction;  // the dual scheme sends the same literal patterns
  if (M < 1 || M > 20) throw std::invalid_argument("negation space must be enumerable");
  if (desired < 0 || desired >= M) throw std::invalid_argument("desired index out of range");
  int N = 1 << (M - 1);
  if (db < 1 || db > N) throw std::invalid_argument("database index out of range");
  QueryDistribution d;
  Rational w = Rational(1) / Rational(boost::multiprecision::cpp_int(1) << M);
  for (unsigned z = 0; z < (1u << M); ++z) {
    std::vector<std::uint8_t> Z(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) Z[static_cast<std::size_t>(m)] = (z >> m) & 1u;
    auto pat = conjunction_query_patterns(M, desired, Z)[static_cast<std::size_t>(db) - 1];
    KSumQuery q;
    for (int m = 0; m < M; ++m) q.terms.push_back(QueryTerm{m, pat[static_cast<std::size_t>(m)]});
    d.mass[serialize_query(q)] += w;
  }
  return d;
}

QueryDistribution selection_query_distribution(int M, int desired) {
  if (M < 1) throw std::invalid_argument("M must be positive");
  if (desired < 0 || desired >= M) throw std::invalid_argument("desired index out of range");
  std::vector<KSumQuery> qs;
  for (int m = 0; m < M; ++m) qs.push_back(KSumQuery{{QueryTerm{m, 0}}});
  QueryDistribution d;
  d.mass[canonical_query_set(qs)] = 1;
  return d;
}

QueryDistribution broken_demo_query_distribution(int M, int desired) {
  if (M < 1) throw std::invalid_argument("M must be positive");
  if (desired < 0 || desired >= M) throw std::invalid_argument("desired index out of range");
  // message symmetry skipped: only the desired message is touched
  return single_query_point_mass(KSumQuery{{QueryTerm{desired, 0}}});
}

}  // namespace npir

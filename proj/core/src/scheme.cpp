#include "npir/scheme.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace npir {

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// sorted k-subsets of {0..M-1} \ {excl} in lexicographic order
std::vector<std::vector<int>> ksubsets_excluding(int M, int k, int excl) {
  std::vector<int> pool;
  for (int m = 0; m < M; ++m)
    if (m != excl) pool.push_back(m);
  std::vector<std::vector<int>> out;
  if (k < 0 || k > static_cast<int>(pool.size())) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  int n = static_cast<int>(pool.size());
  for (;;) {
    std::vector<int> sub(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) sub[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    out.push_back(std::move(sub));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
  }
  return out;
}

// side information produced by one stage: per undesired subset, the summed
// terms and the downloaded answer bits that reveal the sum's value
struct BundleEntry {
  std::vector<QueryTerm> terms;
  std::vector<AnswerRef> refs;
};

struct Bundle {
  int source_db = -1;
  std::map<std::vector<int>, BundleEntry> by_subset;
};

struct Builder {
  int M, N, desired;
  GroupSequence seq;
  long long nu;
  CornerPoint cp;
  long long used_und = 0;
  std::vector<int> xi;  // per group

  QueryPlan plan;
  ReconstructionMap recon;
  std::vector<std::vector<long long>> realized;  // db x round stage counts per block
  long long next_des = 0;
  std::vector<long long> next_und;

  Builder(int M_, int N_, const GroupSequence& seq_, int desired_, long long nu_)
      : M(M_), N(N_), desired(desired_), seq(seq_), nu(nu_) {
    seq.validate(N);
    if (seq.M() != M) throw std::invalid_argument("sequence length differs from message count");
    if (desired < 0 || desired >= M) throw std::invalid_argument("desired index out of range");
    if (nu < 1) throw std::invalid_argument("need at least one repetition");
    cp = corner_point(seq, M);

    int prev = 0;
    xi.assign(static_cast<std::size_t>(M), 1);
    for (int l : cp.stage_table.groups) {
      long long v = 1;
      for (int s : cp.stage_table.groups)
        if (s >= 1 && s != l) v *= binom(M - 2, s - 1);
      xi[static_cast<std::size_t>(l)] = static_cast<int>(v);
    }
    for (int l : cp.stage_table.groups) {
      int szl = seq.n[static_cast<std::size_t>(l)] - prev;
      prev = seq.n[static_cast<std::size_t>(l)];
      for (int k = 2; k <= M; ++k)
        used_und += szl * cp.stage_table.count(l, k) * binom(M - 2, k - 1);
    }
    used_und += static_cast<long long>(seq.n[0]) * cp.stage_table.count(0, 1);

    plan.M = M;
    plan.N = N;
    plan.desired = desired;
    plan.seq = seq;
    plan.nu = nu;
    plan.Lstar = cp.Lstar;
    plan.L = nu * cp.Lstar;
    plan.used_undesired = used_und;
    plan.queries.assign(static_cast<std::size_t>(N), {});  // trailing unused databases stay empty
    plan.stages = cp.stage_table;
    next_und.assign(static_cast<std::size_t>(M), 0);
  }

  int group_of(int db /*0-based*/) const {
    int prev = 0;
    for (int l : cp.stage_table.groups) {
      int hi = seq.n[static_cast<std::size_t>(l)];
      if (db >= prev && db < hi) return l;
      prev = hi;
    }
    throw std::logic_error("database outside every group");
  }

  Bundle make_stage(int d, int k, const Bundle* consumed) {
    Bundle produced;
    produced.source_db = d;
    auto& qlist = plan.queries[static_cast<std::size_t>(d)];
    if (k == 1) {
      for (int m = 0; m < M; ++m) {
        KSumQuery q;
        long long pos = static_cast<long long>(qlist.size());
        if (m == desired) {
          q.terms.push_back(QueryTerm{m, static_cast<int>(next_des)});
          recon.entries.push_back(DesiredRecovery{AnswerRef{d, pos}, {}, next_des});
          ++next_des;
        } else {
          q.terms.push_back(QueryTerm{m, static_cast<int>(next_und[static_cast<std::size_t>(m)])});
          produced.by_subset[{m}] = BundleEntry{q.terms, {AnswerRef{d, pos}}};
          ++next_und[static_cast<std::size_t>(m)];
        }
        qlist.push_back(std::move(q));
      }
    } else {
      for (const auto& T : ksubsets_excluding(M, k - 1, desired)) {
        const BundleEntry& e = consumed->by_subset.at(T);
        KSumQuery q;
        q.terms = e.terms;
        q.terms.push_back(QueryTerm{desired, static_cast<int>(next_des)});
        std::sort(q.terms.begin(), q.terms.end());
        long long pos = static_cast<long long>(qlist.size());
        recon.entries.push_back(DesiredRecovery{AnswerRef{d, pos}, e.refs, next_des});
        ++next_des;
        qlist.push_back(std::move(q));
      }
      for (const auto& K : ksubsets_excluding(M, k, desired)) {
        KSumQuery q;
        for (int m : K) {
          q.terms.push_back(QueryTerm{m, static_cast<int>(next_und[static_cast<std::size_t>(m)])});
          ++next_und[static_cast<std::size_t>(m)];
        }
        long long pos = static_cast<long long>(qlist.size());
        produced.by_subset[K] = BundleEntry{q.terms, {AnswerRef{d, pos}}};
        qlist.push_back(std::move(q));
      }
    }
    ++realized[static_cast<std::size_t>(d)][static_cast<std::size_t>(k)];
    return produced;
  }

  // l-sums assembled from one round-1 stage's undesired singles; decodable
  // directly from round 1, which is what lets late groups start at round l+1
  Bundle virtual_bundle(const Bundle& round1, int l) const {
    Bundle vb;
    vb.source_db = round1.source_db;
    for (const auto& T : ksubsets_excluding(M, l, desired)) {
      BundleEntry e;
      for (int m : T) {
        const BundleEntry& single = round1.by_subset.at(std::vector<int>{m});
        e.terms.push_back(single.terms[0]);
        e.refs.push_back(single.refs[0]);
      }
      vb.by_subset[T] = std::move(e);
    }
    return vb;
  }

  void build_block() {
    realized.assign(static_cast<std::size_t>(seq.last()),
                    std::vector<long long>(static_cast<std::size_t>(M) + 1, 0));
    std::vector<Bundle> round1;
    long long y01 = cp.stage_table.count(0, 1);
    for (int d = 0; d < seq.n[0]; ++d)
      for (long long s = 0; s < y01; ++s) round1.push_back(make_stage(d, 1, nullptr));

    std::vector<Bundle> prev = round1;
    for (int k = 2; k <= M; ++k) {
      std::vector<Bundle> cur;
      int active = seq.n[static_cast<std::size_t>(k) - 1];
      for (const Bundle& src : prev)
        for (int d = 0; d < active; ++d)
          if (d != src.source_db) cur.push_back(make_stage(d, k, &src));
      int l = k - 1;
      if (l >= 2 && cp.stage_table.in_groups(l)) {
        int lo = seq.n[static_cast<std::size_t>(l) - 1];
        int hi = seq.n[static_cast<std::size_t>(l)];
        for (int d = lo; d < hi; ++d)
          for (int s = 0; s < seq.n[0]; ++s)
            for (int v = 0; v < xi[static_cast<std::size_t>(l)]; ++v) {
              const Bundle& src = round1[static_cast<std::size_t>(s) * y01 + static_cast<std::size_t>(v % y01)];
              Bundle vb = virtual_bundle(src, l);
              cur.push_back(make_stage(d, k, &vb));
            }
      }
      prev = std::move(cur);
    }

    for (int d = 0; d < seq.last(); ++d) {
      int l = group_of(d);
      for (int k = 1; k <= M; ++k)
        if (realized[static_cast<std::size_t>(d)][static_cast<std::size_t>(k)] != cp.stage_table.count(l, k))
          throw std::logic_error("realized stage counts disagree with the recursion solve");
    }
  }

  void finish(RngStream* rng) {
    for (long long b = 0; b < nu; ++b) {
      long long des_before = next_des;
      build_block();
      if (next_des - des_before != cp.Lstar) throw std::logic_error("desired symbols per block differ from Lstar");
      for (int m = 0; m < M; ++m)
        if (m != desired && next_und[static_cast<std::size_t>(m)] != (b + 1) * used_und)
          throw std::logic_error("undesired consumption differs from the stage accounting");
    }
    for (int d = 0; d < seq.last(); ++d)
      if (plan.query_count(d) != nu * cp.D[static_cast<std::size_t>(d)])
        throw std::logic_error("per-database query count differs from the download profile");

    int L = static_cast<int>(plan.L);
    plan.pi.resize(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m)
      plan.pi[static_cast<std::size_t>(m)] = rng ? rng->permutation(L) : [L] {
        std::vector<int> id(static_cast<std::size_t>(L));
        for (int i = 0; i < L; ++i) id[static_cast<std::size_t>(i)] = i;
        return id;
      }();
    plan.shuffle.resize(plan.queries.size());
    for (std::size_t d = 0; d < plan.queries.size(); ++d) {
      int cnt = static_cast<int>(plan.queries[d].size());
      std::vector<int> perm;
      if (rng) {
        perm = rng->permutation(cnt);
      } else {
        perm.resize(static_cast<std::size_t>(cnt));
        for (int i = 0; i < cnt; ++i) perm[static_cast<std::size_t>(i)] = i;
      }
      plan.shuffle[d].assign(perm.begin(), perm.end());
    }
  }
};

}  // namespace

KSumQuery QueryPlan::materialized(int db, long long canonical_pos) const {
  KSumQuery out = queries[static_cast<std::size_t>(db)][static_cast<std::size_t>(canonical_pos)];
  for (QueryTerm& term : out.terms)
    term.slot = pi[static_cast<std::size_t>(term.message)][static_cast<std::size_t>(term.slot)];
  return out;
}

std::pair<QueryPlan, ReconstructionMap> synthesize_query_plan(int M, int N, const GroupSequence& seq,
                                                              int desired, long long nu, RngStream& rng) {
  Builder b(M, N, seq, desired, nu);
  b.finish(&rng);
  return {std::move(b.plan), std::move(b.recon)};
}

std::pair<QueryPlan, ReconstructionMap> synthesize_query_plan_identity(int M, int N,
                                                                       const GroupSequence& seq,
                                                                       int desired, long long nu) {
  Builder b(M, N, seq, desired, nu);
  b.finish(nullptr);
  return {std::move(b.plan), std::move(b.recon)};
}

std::vector<std::uint8_t> answer_uncoded(const MessageStore& store, const QueryPlan& plan, int db) {
  if (store.M != plan.M || store.L != plan.L) throw std::invalid_argument("store shape differs from the plan");
  long long cnt = plan.query_count(db);
  std::vector<std::uint8_t> U(static_cast<std::size_t>(cnt), 0);
  for (long long c = 0; c < cnt; ++c) {
    KSumQuery q = plan.materialized(db, c);
    std::uint8_t v = 0;
    for (const QueryTerm& term : q.terms) {
      if (term.slot < 0 || term.slot >= store.L) throw std::out_of_range("query references a symbol beyond L");
      v ^= store.bit(term.message, term.slot);
    }
    U[static_cast<std::size_t>(plan.shuffle[static_cast<std::size_t>(db)][static_cast<std::size_t>(c)])] = v;
  }
  return U;
}

std::vector<std::uint8_t> reconstruct(const QueryPlan& plan, const ReconstructionMap& map,
                                      const std::vector<std::vector<std::uint8_t>>& answers) {
  if (answers.size() != plan.queries.size()) throw std::invalid_argument("answer vector per database expected");
  for (std::size_t d = 0; d < answers.size(); ++d)
    if (static_cast<long long>(answers[d].size()) != plan.query_count(static_cast<int>(d)))
      throw std::invalid_argument("answer length differs from the query count");

  auto bit_at = [&](const AnswerRef& ref) {
    long long tpos = plan.shuffle[static_cast<std::size_t>(ref.db)][static_cast<std::size_t>(ref.pos)];
    return answers[static_cast<std::size_t>(ref.db)][static_cast<std::size_t>(tpos)];
  };

  std::vector<std::uint8_t> out(static_cast<std::size_t>(plan.L), 0);
  for (const DesiredRecovery& entry : map.entries) {
    std::uint8_t v = bit_at(entry.carrier);
    for (const AnswerRef& ref : entry.side) v ^= bit_at(ref);
    int physical = plan.pi[static_cast<std::size_t>(plan.desired)][static_cast<std::size_t>(entry.logical_slot)];
    out[static_cast<std::size_t>(physical)] = v;
  }
  return out;
}

std::vector<std::vector<int>> query_shape_multiset(const QueryPlan& plan, int db) {
  std::vector<std::vector<int>> shapes;
  for (const KSumQuery& q : plan.queries[static_cast<std::size_t>(db)]) {
    std::vector<int> s;
    for (const QueryTerm& term : q.terms) s.push_back(term.message);
    std::sort(s.begin(), s.end());
    shapes.push_back(std::move(s));
  }
  std::sort(shapes.begin(), shapes.end());
  return shapes;
}

std::string format_query_plan(const QueryPlan& plan) {
  auto symbol = [&](const QueryTerm& term) {
    std::ostringstream os;
    if (plan.M <= 26)
      os << static_cast<char>('a' + term.message);
    else
      os << 'm' << term.message + 1 << '_';
    os << term.slot + 1;
    return os.str();
  };

  std::size_t dbs = static_cast<std::size_t>(plan.seq.last());  // unused databases print nothing
  std::vector<std::vector<std::string>> cells(dbs);
  std::size_t max_rows = 0;
  for (std::size_t d = 0; d < dbs; ++d) {
    for (long long c = 0; c < plan.query_count(static_cast<int>(d)); ++c) {
      KSumQuery q = plan.materialized(static_cast<int>(d), c);
      std::string s;
      for (std::size_t i = 0; i < q.terms.size(); ++i) {
        if (i) s += "+";
        s += symbol(q.terms[i]);
      }
      cells[d].push_back(std::move(s));
    }
    max_rows = std::max(max_rows, cells[d].size());
  }

  std::vector<std::size_t> width(dbs);
  for (std::size_t d = 0; d < dbs; ++d) {
    width[d] = 4;  // "DB n"
    for (const auto& s : cells[d]) width[d] = std::max(width[d], s.size());
  }

  std::ostringstream os;
  for (std::size_t d = 0; d < dbs; ++d) {
    std::string head = "DB " + std::to_string(d + 1);
    os << head << std::string(width[d] - head.size(), ' ') << (d + 1 < dbs ? "  " : "");
  }
  os << '\n';
  for (std::size_t r = 0; r < max_rows; ++r) {
    for (std::size_t d = 0; d < dbs; ++d) {
      std::string s = r < cells[d].size() ? cells[d][r] : "";
      os << s << std::string(width[d] - s.size(), ' ') << (d + 1 < dbs ? "  " : "");
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace npir

#include "npir/engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "npir/bounds.hpp"
#include "npir/gf2.hpp"

namespace npir {

namespace {

struct SegmentLayout {
  std::vector<int> k;        // per-segment dimensions, each <= kMaxDecodeDim
  std::vector<long long> t;  // per-segment blocklengths
  long long t_total = 0;
  bool capped = false;       // blowup cap bound instead of the rate formula
};

long long segment_blocklength(int k_seg, double capacity, double margin, bool* capped) {
  long long cap = static_cast<long long>(kZeroCapacityBlowup) * k_seg;
  if (capacity <= 0.0) {
    *capped = true;
    return cap;
  }
  double need = static_cast<double>(k_seg) * (1.0 + margin) / capacity;
  long long t = static_cast<long long>(std::ceil(need - 1e-12));
  t = std::max(t, static_cast<long long>(k_seg));
  if (t >= cap) {
    *capped = true;
    return cap;
  }
  return t;
}

SegmentLayout layout_segments(long long k, double capacity, double margin) {
  SegmentLayout out;
  long long nseg = (k + kMaxDecodeDim - 1) / kMaxDecodeDim;
  long long base = k / nseg, rem = k % nseg;
  for (long long s = 0; s < nseg; ++s) out.k.push_back(static_cast<int>(base + (s < rem ? 1 : 0)));
  for (int k_seg : out.k) {
    long long t = segment_blocklength(k_seg, capacity, margin, &out.capped);
    out.t.push_back(t);
    out.t_total += t;
  }
  return out;
}

// Identity transport is used when the rate formula asks for no redundancy at
// all; only bit channels qualify (a noiseless TABLE may still relabel).
bool identity_transport(const PointChannel& ch, const SegmentLayout& lay) {
  if (ch.kind == PointKind::TABLE) return false;
  long long k = 0;
  for (int ks : lay.k) k += ks;
  return lay.t_total == k;
}

struct DbOutcome {
  long long t = 0;
  bool ok = true;
  std::vector<std::uint8_t> decoded;
};

DbOutcome run_database(const PointChannel& ch, const std::vector<std::uint8_t>& U, double margin,
                       RngStream code_rng, RngStream noise_rng) {
  DbOutcome out;
  long long k = static_cast<long long>(U.size());
  if (k == 0) return out;

  if (ch.kind == PointKind::TABLE) {
    if (k > kMaxCodebookDim) throw std::invalid_argument("uncoded uplink too large for the codebook path");
    SegmentLayout lay = layout_segments(k, ch.capacity, margin);
    long long t = 0;
    for (long long ts : lay.t) t += ts;
    out.t = t;
    int nx = ch.input_alphabet();
    std::size_t count = 1ull << k;
    std::vector<std::vector<std::uint8_t>> book(count);
    for (auto& cw : book) {
      cw.resize(static_cast<std::size_t>(t));
      for (auto& sym : cw) sym = static_cast<std::uint8_t>(code_rng.uniform_below(static_cast<std::uint64_t>(nx)));
    }
    std::size_t msg = 0;
    for (long long i = 0; i < k; ++i)
      if (U[static_cast<std::size_t>(i)] & 1u) msg |= 1ull << i;
    std::vector<std::uint8_t> y = transmit_point(ch, book[msg], noise_rng);
    double best = -1e300;
    std::size_t best_m = 0;
    for (std::size_t m = 0; m < count; ++m) {
      double ll = 0.0;
      for (long long i = 0; i < t; ++i) {
        double pr = ch.table[book[m][static_cast<std::size_t>(i)]][y[static_cast<std::size_t>(i)]];
        ll += pr > 0.0 ? std::log(pr) : -1e100;
      }
      if (ll > best) {
        best = ll;
        best_m = m;
      }
    }
    out.decoded.resize(static_cast<std::size_t>(k));
    for (long long i = 0; i < k; ++i) out.decoded[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((best_m >> i) & 1u);
    out.ok = out.decoded == U;
    return out;
  }

  SegmentLayout lay = layout_segments(k, ch.capacity, margin);
  out.t = lay.t_total;
  if (identity_transport(ch, lay)) {
    out.decoded = transmit_point(ch, U, noise_rng);
    for (auto& b : out.decoded) b &= 1u;  // erasures cannot occur here (eps = 0)
    out.ok = out.decoded == U;
    return out;
  }

  if (!lay.capped) {
    // rate <= C / (1 + margin) by construction; guard against layout drift
    double rate = static_cast<double>(k) / static_cast<double>(lay.t_total);
    if (rate > ch.capacity / (1.0 + margin) + 1e-9) throw std::logic_error("code rate exceeds the margin target");
  }

  out.decoded.reserve(static_cast<std::size_t>(k));
  std::size_t offset = 0;
  for (std::size_t s = 0; s < lay.k.size(); ++s) {
    int k_seg = lay.k[s];
    int t_seg = static_cast<int>(lay.t[s]);
    std::vector<std::uint8_t> u(U.begin() + static_cast<long>(offset), U.begin() + static_cast<long>(offset) + k_seg);
    offset += static_cast<std::size_t>(k_seg);
    std::vector<std::uint8_t> decoded_seg;
    if (t_seg == k_seg) {
      decoded_seg = transmit_point(ch, u, noise_rng);
      for (auto& b : decoded_seg) b &= 1u;
    } else {
      LinearCode code = random_linear_code(t_seg, k_seg, code_rng);
      std::vector<std::uint8_t> y = transmit_point(ch, encode(code, u), noise_rng);
      if (ch.kind == PointKind::BEC) {
        std::vector<std::uint8_t> known(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) known[i] = y[i] == kErasure ? 0 : 1;
        decoded_seg = masked_nearest_codeword_decode(code, y, known).u;
      } else {
        decoded_seg = nearest_codeword_decode(code, y).u;
      }
    }
    if (decoded_seg != u) out.ok = false;
    out.decoded.insert(out.decoded.end(), decoded_seg.begin(), decoded_seg.end());
  }
  return out;
}

}  // namespace

std::vector<long long> planned_blocklengths(int M, const GroupSequence& seq, const CapacityVector& C,
                                            long long nu, double margin) {
  CornerPoint cp = corner_point(seq, M);
  std::vector<long long> t(static_cast<std::size_t>(C.size()), 0);
  for (int d = 0; d < seq.last(); ++d)
    t[static_cast<std::size_t>(d)] = layout_segments(nu * cp.D[static_cast<std::size_t>(d)], C.at(d), margin).t_total;
  return t;
}

SessionReport run_npir_session(const SessionConfig& cfg, const MessageStore& store, int desired) {
  if (static_cast<int>(cfg.channels.size()) != cfg.N) throw std::invalid_argument("need one channel per database");
  if (cfg.M < 1 || cfg.N < 1 || cfg.nu < 1 || cfg.margin < 0.0) throw std::invalid_argument("bad session dimensions");
  if (desired < 1 || desired > cfg.M) throw std::invalid_argument("desired index out of range");
  if (store.M != cfg.M) throw std::invalid_argument("store has the wrong number of messages");

  std::vector<double> raw;
  raw.reserve(cfg.channels.size());
  for (const auto& ch : cfg.channels) raw.push_back(ch.capacity);
  CapacityVector C(raw);

  GroupSequence seq;
  double target = 0.0;
  if (cfg.auto_seq) {
    LowerBoundResult lb = lower_bound(cfg.M, cfg.N, C);
    seq = lb.seq;
    target = lb.value;
  } else {
    seq = cfg.seq;
    seq.validate(cfg.N);
    if (seq.M() != cfg.M) throw std::invalid_argument("sequence length differs from M");
    try {
      target = achievable_rate(seq, C, cfg.M);
    } catch (const std::domain_error&) {
      target = 0.0;  // a used database has zero capacity
    }
  }

  RngStream master(cfg.seed);
  RngStream plan_rng = master.split(1);
  auto [plan, recon] = synthesize_query_plan(cfg.M, cfg.N, seq, desired - 1, cfg.nu, plan_rng);
  if (store.L != plan.L) throw std::invalid_argument("store length must be nu * Lstar for this sequence");

  SessionReport rep;
  rep.desired_index = desired;
  rep.L = plan.L;
  rep.seed = cfg.seed;
  rep.trials = 1;
  rep.target_rate = target;
  rep.t_per_db.assign(static_cast<std::size_t>(cfg.N), 0);

  std::vector<std::vector<std::uint8_t>> decoded(static_cast<std::size_t>(cfg.N));
  for (int d = 0; d < seq.last(); ++d) {
    std::vector<std::uint8_t> U = answer_uncoded(store, plan, d);
    int phys = C.physical_index(d);
    DbOutcome oc = run_database(cfg.channels[static_cast<std::size_t>(phys)], U, cfg.margin,
                                master.split(100 + static_cast<std::uint64_t>(d)),
                                master.split(200 + static_cast<std::uint64_t>(d)));
    decoded[static_cast<std::size_t>(d)] = std::move(oc.decoded);
    rep.t_per_db[static_cast<std::size_t>(phys)] = oc.t;
    rep.t_total += oc.t;
    if (!oc.ok) ++rep.decode_failures;
  }

  rep.decoded_message = reconstruct(plan, recon, decoded);
  const auto& truth = store.bits[static_cast<std::size_t>(desired) - 1];
  for (int i = 0; i < store.L; ++i)
    if (rep.decoded_message[static_cast<std::size_t>(i)] != truth[static_cast<std::size_t>(i)]) ++rep.errors;
  rep.rate = rep.t_total > 0 ? static_cast<double>(rep.L) / static_cast<double>(rep.t_total) : 0.0;
  return rep;
}

std::vector<SweepRow> sweep_rate_vs_blocklength(const SessionConfig& cfg, const std::vector<long long>& nu_list,
                                                int trials) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");

  std::vector<double> raw;
  for (const auto& ch : cfg.channels) raw.push_back(ch.capacity);
  CapacityVector C(raw);
  GroupSequence seq = cfg.auto_seq ? lower_bound(cfg.M, cfg.N, C).seq : cfg.seq;
  long long Lstar = corner_point(seq, cfg.M).Lstar;

  std::vector<SweepRow> rows;
  for (long long nu : nu_list) {
    SessionConfig run_cfg = cfg;
    run_cfg.nu = nu;
    run_cfg.auto_seq = false;
    run_cfg.seq = seq;

    RngStream nu_stream = RngStream(cfg.seed).split(static_cast<std::uint64_t>(nu));
    std::vector<std::uint8_t> success(static_cast<std::size_t>(trials), 0);
    double rate = 0.0;

    auto worker = [&](int lo, int hi, double* rate_out) {
      for (int trial = lo; trial < hi; ++trial) {
        RngStream trial_stream = nu_stream.split(static_cast<std::uint64_t>(trial));
        RngStream store_rng = trial_stream.split(1);
        MessageStore store = MessageStore::random(cfg.M, static_cast<int>(nu * Lstar), store_rng);
        SessionConfig c = run_cfg;
        c.seed = trial_stream.seed();
        SessionReport rep = run_npir_session(c, store, 1 + trial % cfg.M);
        success[static_cast<std::size_t>(trial)] = rep.decode_failures == 0 ? 1 : 0;
        *rate_out = rep.rate;
      }
    };

    unsigned hw = std::thread::hardware_concurrency();
    int threads = std::max(1, std::min<int>(static_cast<int>(hw ? hw : 1), std::min(trials, 8)));
    if (threads == 1) {
      worker(0, trials, &rate);
    } else {
      int chunk = (trials + threads - 1) / threads;
      std::vector<std::future<void>> futs;
      std::vector<double> rates(static_cast<std::size_t>(threads), 0.0);
      for (int th = 0; th < threads; ++th) {
        int lo = th * chunk, hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, worker, lo, hi, &rates[static_cast<std::size_t>(th)]));
      }
      for (auto& f : futs) f.get();
      rate = rates[0];
    }

    long long ok = 0;
    for (auto s : success) ok += s;
    rows.push_back(SweepRow{nu, static_cast<double>(ok) / trials, rate});
  }
  return rows;
}

}  // namespace npir

#include "npir/macpir.hpp"

#include <cmath>
#include <stdexcept>

#include "npir/channels.hpp"
#include "npir/engine.hpp"
#include "npir/gf2.hpp"
#include "npir/numerics.hpp"

namespace npir {

namespace {

void check_desired(const MessageStore& store, int desired) {
  if (store.M < 1 || store.L < 1) throw std::invalid_argument("empty message store");
  if (desired < 1 || desired > store.M) throw std::invalid_argument("desired index out of range");
}

std::string literal_expression(const std::vector<std::uint8_t>& pattern, const char* joiner) {
  std::string out;
  for (std::size_t m = 0; m < pattern.size(); ++m) {
    if (m) out += joiner;
    if (pattern[m]) out += '!';
    out += 'W';
    out += std::to_string(m + 1);
  }
  return out;
}

BooleanRetrieval boolean_retrieve(const MessageStore& store, int desired, int M, RngStream& rng,
                                  bool disjunction) {
  check_desired(store, desired);
  if (M != store.M) throw std::invalid_argument("M disagrees with the store");
  int N = 1 << (M - 1);

  BooleanRetrieval out;
  out.Z.resize(static_cast<std::size_t>(M));
  for (auto& z : out.Z) z = rng.bernoulli(0.5) ? 1 : 0;
  out.patterns = conjunction_query_patterns(M, desired - 1, out.Z);
  const char* joiner = disjunction ? " & " : " | ";
  for (const auto& pat : out.patterns) out.expressions.push_back(literal_expression(pat, joiner));

  // each database evaluates its pattern bitwise on the whole store
  std::vector<std::vector<std::uint8_t>> inputs(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) {
    auto& x = inputs[static_cast<std::size_t>(n)];
    x.resize(static_cast<std::size_t>(store.L));
    for (int j = 0; j < store.L; ++j) {
      std::uint8_t acc = disjunction ? 1 : 0;
      for (int m = 0; m < M; ++m) {
        std::uint8_t lit = store.bit(m, j) ^ out.patterns[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
        acc = disjunction ? (acc & lit) : (acc | lit);
      }
      x[static_cast<std::size_t>(j)] = acc;
    }
  }

  MacChannel ch = disjunction ? MacChannel::disjunction(N) : MacChannel::conjunction(N);
  std::vector<std::uint8_t> Y = transmit_mac(ch, inputs, rng);
  out.recovered.resize(static_cast<std::size_t>(store.L));
  for (int j = 0; j < store.L; ++j)
    out.recovered[static_cast<std::size_t>(j)] = Y[static_cast<std::size_t>(j)] ^ out.Z[static_cast<std::size_t>(desired) - 1];

  SessionReport& rep = out.report;
  rep.desired_index = desired;
  rep.t_per_db.assign(static_cast<std::size_t>(N), store.L);
  rep.t_total = store.L;  // all databases share each channel use
  rep.L = store.L;
  rep.rate = 1.0;
  rep.target_rate = 1.0;
  rep.seed = rng.seed();
  rep.trials = 1;
  rep.decoded_message = out.recovered;
  for (int j = 0; j < store.L; ++j)
    if (out.recovered[static_cast<std::size_t>(j)] != store.bit(desired - 1, j)) ++rep.errors;
  if (rep.errors > 0) rep.decode_failures = 1;
  return out;
}

}  // namespace

double additive_mac_capacity(double p) {
  if (!(p >= 0.0) || p >= 0.5) throw std::domain_error("additive noise level must be in [0, 0.5)");
  return 1.0 - binary_entropy(p);
}

std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> additive_mac_uplinks(
    const MessageStore& store, int desired, const std::vector<std::vector<std::uint8_t>>& h) {
  check_desired(store, desired);
  if (static_cast<int>(h.size()) != store.L) throw std::invalid_argument("need one mask per bit");
  std::vector<std::uint8_t> U1(static_cast<std::size_t>(store.L)), U2(static_cast<std::size_t>(store.L));
  for (int j = 0; j < store.L; ++j) {
    const auto& mask = h[static_cast<std::size_t>(j)];
    if (static_cast<int>(mask.size()) != store.M) throw std::invalid_argument("mask width must be M");
    std::uint8_t u = 0;
    for (int m = 0; m < store.M; ++m) u ^= static_cast<std::uint8_t>(mask[static_cast<std::size_t>(m)] & store.bit(m, j));
    U1[static_cast<std::size_t>(j)] = u;
    U2[static_cast<std::size_t>(j)] = u ^ store.bit(desired - 1, j);
  }
  return {U1, U2};
}

SessionReport additive_mac_retrieve(const MessageStore& store, int desired, double p, int L,
                                    double margin, RngStream& rng) {
  check_desired(store, desired);
  if (L != store.L) throw std::invalid_argument("L disagrees with the store");
  if (!(p >= 0.0) || p >= 0.5) throw std::domain_error("additive noise level must be in [0, 0.5)");
  if (margin < 0.0) throw std::invalid_argument("margin must be nonnegative");

  RngStream mask_rng = rng.split(1);
  RngStream code_rng = rng.split(2);
  RngStream noise_rng = rng.split(3);

  std::vector<std::vector<std::uint8_t>> h(static_cast<std::size_t>(L));
  for (auto& mask : h) {
    mask.resize(static_cast<std::size_t>(store.M));
    for (auto& b : mask) b = mask_rng.bernoulli(0.5) ? 1 : 0;
  }
  auto [U1, U2] = additive_mac_uplinks(store, desired, h);

  MacChannel ch = MacChannel::additive(2, p);
  SessionReport rep;
  rep.desired_index = desired;
  rep.L = L;
  rep.seed = rng.seed();
  rep.trials = 1;
  rep.target_rate = additive_mac_capacity(p);

  std::vector<std::uint8_t> recovered;
  long long t;
  if (p == 0.0) {
    t = L;
    recovered = transmit_mac(ch, {U1, U2}, noise_rng);  // = U1 xor U2 = W_i
  } else {
    if (L > kMaxDecodeDim) throw std::length_error("message too long for exhaustive decoding");
    double cap = 1.0 - binary_entropy(p);
    t = static_cast<long long>(std::ceil(static_cast<double>(L) * (1.0 + margin) / cap - 1e-12));
    while (static_cast<double>(L) / static_cast<double>(t) >= cap / (1.0 + margin)) ++t;
    // both databases share the SAME code so the two codewords sum to a codeword
    LinearCode code = random_linear_code(static_cast<int>(t), L, code_rng);
    std::vector<std::uint8_t> Y = transmit_mac(ch, {encode(code, U1), encode(code, U2)}, noise_rng);
    recovered = nearest_codeword_decode(code, Y).u;
  }

  rep.t_per_db = {t, t};
  rep.t_total = t;  // shared channel uses, not the per-database sum
  rep.rate = static_cast<double>(L) / static_cast<double>(t);
  rep.decoded_message = recovered;
  for (int j = 0; j < L; ++j)
    if (recovered[static_cast<std::size_t>(j)] != store.bit(desired - 1, j)) ++rep.errors;
  if (rep.errors > 0) rep.decode_failures = 1;
  return rep;
}

std::vector<std::vector<std::uint8_t>> conjunction_query_patterns(int M, int desired,
                                                                  const std::vector<std::uint8_t>& Z) {
  if (M < 1) throw std::invalid_argument("M must be positive");
  if (desired < 0 || desired >= M) throw std::invalid_argument("desired index out of range");
  if (static_cast<int>(Z.size()) != M) throw std::invalid_argument("Z must have M bits");
  int N = 1 << (M - 1);

  std::vector<int> others;
  for (int m = 0; m < M; ++m)
    if (m != desired) others.push_back(m);

  std::vector<std::vector<std::uint8_t>> patterns;
  patterns.reserve(static_cast<std::size_t>(N));
  for (int v = 0; v < N; ++v) {
    unsigned g = static_cast<unsigned>(v) ^ (static_cast<unsigned>(v) >> 1);  // Gray code: nonzero, distinct
    std::vector<std::uint8_t> pat = Z;
    for (std::size_t j = 0; j < others.size(); ++j)
      if ((g >> j) & 1u) pat[static_cast<std::size_t>(others[j])] ^= 1u;
    patterns.push_back(std::move(pat));
  }
  return patterns;
}

BooleanRetrieval conjunction_retrieve(const MessageStore& store, int desired, int M, RngStream& rng) {
  return boolean_retrieve(store, desired, M, rng, false);
}

BooleanRetrieval disjunction_retrieve(const MessageStore& store, int desired, int M, RngStream& rng) {
  return boolean_retrieve(store, desired, M, rng, true);
}

double selection_capacity(int M, int N, SelectionVariant variant) {
  if (M < 1 || N < 1) throw std::invalid_argument("M and N must be positive");
  if (variant == SelectionVariant::FIXED) return 1.0 / M;
  double denom = 0.0, term = 1.0;
  for (int k = 0; k < M; ++k) {
    denom += term;
    term /= N;
  }
  return 1.0 / denom;
}

SessionReport selection_fixed_retrieve(const MessageStore& store, int desired, RngStream& rng,
                                       int* selected_db) {
  check_desired(store, desired);
  int N = 2;
  long long t = static_cast<long long>(store.M) * store.L;

  // every database streams the full store; the channel commits to one of them
  std::vector<std::uint8_t> full;
  full.reserve(static_cast<std::size_t>(t));
  for (int m = 0; m < store.M; ++m)
    for (int j = 0; j < store.L; ++j) full.push_back(store.bit(m, j));
  std::vector<std::vector<std::uint8_t>> inputs(static_cast<std::size_t>(N), full);

  std::vector<int> selected;
  std::vector<std::uint8_t> Y = transmit_mac_selection(MacChannel::selection_fixed(N), inputs, rng, &selected);
  if (selected_db) *selected_db = selected.empty() ? 0 : selected.front();

  SessionReport rep;
  rep.desired_index = desired;
  rep.t_per_db.assign(static_cast<std::size_t>(N), t);
  rep.t_total = t;
  rep.L = store.L;
  rep.rate = 1.0 / static_cast<double>(store.M);
  rep.target_rate = selection_capacity(store.M, N, SelectionVariant::FIXED);
  rep.seed = rng.seed();
  rep.trials = 1;
  rep.decoded_message.assign(Y.begin() + static_cast<long>((desired - 1) * store.L),
                             Y.begin() + static_cast<long>(desired * store.L));
  for (int j = 0; j < store.L; ++j)
    if (rep.decoded_message[static_cast<std::size_t>(j)] != store.bit(desired - 1, j)) ++rep.errors;
  if (rep.errors > 0) rep.decode_failures = 1;
  return rep;
}

int conjunction_min_databases_search(int M, int max_N) {
  if (M < 1 || M > 4) throw std::invalid_argument("search supported for M in 1..4");
  if (max_N < 1) throw std::invalid_argument("max_N must be positive");
  int P = 1 << M;  // candidate literal patterns

  auto family_collapses = [&](const std::vector<int>& family, int i) {
    for (int w = 0; w < P; ++w) {
      int y = 1;
      for (int q : family) {
        int lit_or = 0;
        for (int m = 0; m < M; ++m) lit_or |= ((w >> m) ^ (q >> m)) & 1;
        y &= lit_or;
        if (!y) break;
      }
      if (y != ((w >> i) & 1)) return false;
    }
    return true;
  };

  for (int N = 1; N <= max_N; ++N) {
    bool all_desired = true;
    for (int i = 0; i < M && all_desired; ++i) {
      bool found = false;
      std::vector<int> pick(static_cast<std::size_t>(N));
      for (int j = 0; j < N; ++j) pick[static_cast<std::size_t>(j)] = j;
      for (;;) {
        if (family_collapses(pick, i)) {
          found = true;
          break;
        }
        int j = N - 1;
        while (j >= 0 && pick[static_cast<std::size_t>(j)] == P - N + j) --j;
        if (j < 0) break;
        ++pick[static_cast<std::size_t>(j)];
        for (int l = j + 1; l < N; ++l) pick[static_cast<std::size_t>(l)] = pick[static_cast<std::size_t>(l) - 1] + 1;
      }
      if (!found) all_desired = false;
    }
    if (all_desired) return N;
  }
  return -1;
}

}  // namespace npir

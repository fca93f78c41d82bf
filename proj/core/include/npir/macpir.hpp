#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "npir/types.hpp"

namespace npir {

// Retrieval over an additive MAC: both databases answer masked sums keyed by
// a fresh uniform mask per bit, the second adds the desired message, and the
// XOR through the channel isolates it. With p > 0 both databases encode with
// the SAME [t, L] linear code (the sum of two codewords is a codeword), drawn
// from a seeded stream that is part of the protocol transcript; with p = 0 no
// code is used and the rate is exactly 1. `desired` is 1-based.
SessionReport additive_mac_retrieve(const MessageStore& store, int desired, double p, int L,
                                    double margin, RngStream& rng);

double additive_mac_capacity(double p);  // 1 - H(p); rejects p outside [0, 0.5)

// Uncoded uplinks given explicit masks: h[j] is the M-bit mask for bit j.
// U1[j] = sum_m h[j][m] W_m(j), U2[j] = U1[j] xor W_i(j).
std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> additive_mac_uplinks(
    const MessageStore& store, int desired, const std::vector<std::vector<std::uint8_t>>& h);

// Boolean-channel retrieval transcript: the queries each database received
// (as literal patterns and printable expressions) plus the recovered message.
struct BooleanRetrieval {
  std::vector<std::vector<std::uint8_t>> patterns;  // N x M negation bits
  std::vector<std::string> expressions;             // e.g. "W1 | !W2 | W3"
  std::vector<std::uint8_t> Z;                      // negation state
  std::vector<std::uint8_t> recovered;              // L bits
  SessionReport report;
};

// Negation patterns for the conjunction scheme: database 1 carries the
// uniform negation state Z itself; the other 2^{M-1} - 1 databases flip
// distinct nonempty subsets of the non-desired literals. Over the AND channel
// the disjunctions collapse to the desired literal. `desired` is 0-based here.
std::vector<std::vector<std::uint8_t>> conjunction_query_patterns(int M, int desired,
                                                                  const std::vector<std::uint8_t>& Z);

// One channel use per retrieved bit (rate exactly 1); requires and uses
// N = 2^{M-1} databases. `desired` is 1-based.
BooleanRetrieval conjunction_retrieve(const MessageStore& store, int desired, int M, RngStream& rng);

// De Morgan dual: conjunction queries through an OR channel.
BooleanRetrieval disjunction_retrieve(const MessageStore& store, int desired, int M, RngStream& rng);

enum class SelectionVariant { FIXED, PER_USE };

// FIXED -> 1/M; PER_USE -> (1 + 1/N + ... + 1/N^{M-1})^{-1}.
double selection_capacity(int M, int N, SelectionVariant variant);

// The channel commits to one database for the whole session, so the user
// downloads every message: t = M*L uses, rate 1/M. `desired` is 1-based.
SessionReport selection_fixed_retrieve(const MessageStore& store, int desired, RngStream& rng,
                                       int* selected_db = nullptr);

// Brute-force exploration hook: smallest N <= max_N such that some family of
// N literal-pattern disjunctions collapses to the desired literal under AND
// for every desired index. Exploratory only; nothing in the library depends
// on its answer.
int conjunction_min_databases_search(int M, int max_N);

}  // namespace npir

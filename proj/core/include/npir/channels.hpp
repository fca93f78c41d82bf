#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "npir/rng.hpp"

namespace npir {

// BEC output symbol marking an erased bit.
inline constexpr std::uint8_t kErasure = 2;

enum class PointKind { BSC, BEC, TABLE };

// Memoryless point-to-point channel. Inputs are alphabet indices (bits for
// BSC/BEC); BEC outputs additionally use kErasure.
struct PointChannel {
  PointKind kind = PointKind::BSC;
  double p = 0.0;                            // BSC crossover
  double eps = 0.0;                          // BEC erasure probability
  std::vector<std::vector<double>> table;    // |X| x |Y| row-stochastic
  double capacity = 1.0;                     // bits per use

  static PointChannel bsc(double p);         // rejects p outside [0, 0.5]
  static PointChannel bec(double eps);       // rejects eps outside [0, 1]
  static PointChannel dmc(std::vector<std::vector<double>> table);  // capacity via Blahut-Arimoto

  int input_alphabet() const;
  int output_alphabet() const;
};

std::vector<std::uint8_t> transmit_point(const PointChannel& ch, const std::vector<std::uint8_t>& x,
                                         RngStream& rng);

enum class MacKind { ADDITIVE, CONJUNCTION, DISJUNCTION, SELECTION_FIXED, SELECTION_PER_USE };

// N-input multiple-access channel; all databases' symbols mix per use.
struct MacChannel {
  MacKind kind = MacKind::ADDITIVE;
  int N = 2;
  double p = 0.0;  // additive noise level

  static MacChannel additive(int N, double p);  // rejects p outside [0, 0.5)
  static MacChannel conjunction(int N);
  static MacChannel disjunction(int N);
  static MacChannel selection_fixed(int N);
  static MacChannel selection_per_use(int N);
};

// ADDITIVE: XOR of the inputs plus Bernoulli(p) noise. CONJUNCTION /
// DISJUNCTION: bitwise AND / OR. SELECTION_FIXED draws one input index per
// call; SELECTION_PER_USE draws a fresh index per symbol.
std::vector<std::uint8_t> transmit_mac(const MacChannel& ch,
                                       const std::vector<std::vector<std::uint8_t>>& inputs,
                                       RngStream& rng);

// Like transmit_mac for the selection kinds, also reporting which input was
// selected at each use (for frequency checks).
std::vector<std::uint8_t> transmit_mac_selection(const MacChannel& ch,
                                                 const std::vector<std::vector<std::uint8_t>>& inputs,
                                                 RngStream& rng, std::vector<int>* selected);

// Capacity of a discrete memoryless channel in bits, to absolute tol.
double dmc_capacity(const std::vector<std::vector<double>>& table, double tol = 1e-9);

// Compact channel grammar: "bsc:0.1" or "bec:0.3".
PointChannel parse_point_channel(const std::string& text);
std::vector<PointChannel> parse_point_channel_list(const std::string& comma_separated);

// "mac:add:0.05", "mac:and", "mac:or", "mac:sel", "mac:selp"
bool is_mac_channel_text(const std::string& text);
MacChannel parse_mac_channel(const std::string& text, int N);

}  // namespace npir

#include "npir/channels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "npir/numerics.hpp"

namespace npir {

PointChannel PointChannel::bsc(double p) {
  if (!(p >= 0.0 && p <= 0.5)) throw std::domain_error("BSC crossover outside [0, 0.5]");
  PointChannel ch;
  ch.kind = PointKind::BSC;
  ch.p = p;
  ch.capacity = 1.0 - binary_entropy(p);
  return ch;
}

PointChannel PointChannel::bec(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("BEC erasure outside [0, 1]");
  PointChannel ch;
  ch.kind = PointKind::BEC;
  ch.eps = eps;
  ch.capacity = 1.0 - eps;
  return ch;
}

PointChannel PointChannel::dmc(std::vector<std::vector<double>> table) {
  if (table.empty() || table[0].empty()) throw std::invalid_argument("empty transition table");
  std::size_t ycount = table[0].size();
  for (const auto& row : table) {
    if (row.size() != ycount) throw std::invalid_argument("ragged transition table");
    double sum = 0.0;
    for (double v : row) {
      if (v < 0.0) throw std::invalid_argument("negative transition probability");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("transition row does not sum to 1");
  }
  PointChannel ch;
  ch.kind = PointKind::TABLE;
  ch.capacity = dmc_capacity(table);
  ch.table = std::move(table);
  return ch;
}

int PointChannel::input_alphabet() const {
  return kind == PointKind::TABLE ? static_cast<int>(table.size()) : 2;
}

int PointChannel::output_alphabet() const {
  switch (kind) {
    case PointKind::BSC: return 2;
    case PointKind::BEC: return 3;
    default: return static_cast<int>(table[0].size());
  }
}

std::vector<std::uint8_t> transmit_point(const PointChannel& ch, const std::vector<std::uint8_t>& x,
                                         RngStream& rng) {
  std::vector<std::uint8_t> y(x.size());
  switch (ch.kind) {
    case PointKind::BSC:
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 1) throw std::invalid_argument("BSC input must be a bit");
        y[i] = static_cast<std::uint8_t>(x[i] ^ (rng.bernoulli(ch.p) ? 1u : 0u));
      }
      break;
    case PointKind::BEC:
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 1) throw std::invalid_argument("BEC input must be a bit");
        y[i] = rng.bernoulli(ch.eps) ? kErasure : x[i];
      }
      break;
    case PointKind::TABLE:
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] >= ch.table.size()) throw std::invalid_argument("input outside channel alphabet");
        const auto& row = ch.table[x[i]];
        double u = rng.next_unit();
        double acc = 0.0;
        std::uint8_t out = static_cast<std::uint8_t>(row.size() - 1);
        for (std::size_t s = 0; s < row.size(); ++s) {
          acc += row[s];
          if (u < acc) {
            out = static_cast<std::uint8_t>(s);
            break;
          }
        }
        y[i] = out;
      }
      break;
  }
  return y;
}

MacChannel MacChannel::additive(int N, double p) {
  if (!(p >= 0.0 && p < 0.5)) throw std::domain_error("additive MAC noise outside [0, 0.5)");
  if (N < 1) throw std::invalid_argument("MAC needs at least one input");
  return MacChannel{MacKind::ADDITIVE, N, p};
}
MacChannel MacChannel::conjunction(int N) { return MacChannel{MacKind::CONJUNCTION, N, 0.0}; }
MacChannel MacChannel::disjunction(int N) { return MacChannel{MacKind::DISJUNCTION, N, 0.0}; }
MacChannel MacChannel::selection_fixed(int N) { return MacChannel{MacKind::SELECTION_FIXED, N, 0.0}; }
MacChannel MacChannel::selection_per_use(int N) { return MacChannel{MacKind::SELECTION_PER_USE, N, 0.0}; }

std::vector<std::uint8_t> transmit_mac(const MacChannel& ch,
                                       const std::vector<std::vector<std::uint8_t>>& inputs,
                                       RngStream& rng) {
  return transmit_mac_selection(ch, inputs, rng, nullptr);
}

std::vector<std::uint8_t> transmit_mac_selection(const MacChannel& ch,
                                                 const std::vector<std::vector<std::uint8_t>>& inputs,
                                                 RngStream& rng, std::vector<int>* selected) {
  if (static_cast<int>(inputs.size()) != ch.N) throw std::invalid_argument("MAC input count differs from N");
  std::size_t t = inputs.empty() ? 0 : inputs[0].size();
  for (const auto& in : inputs)
    if (in.size() != t) throw std::invalid_argument("MAC inputs have different lengths");

  std::vector<std::uint8_t> y(t, 0);
  switch (ch.kind) {
    case MacKind::ADDITIVE:
      for (std::size_t i = 0; i < t; ++i) {
        std::uint8_t v = 0;
        for (const auto& in : inputs) v ^= (in[i] & 1u);
        y[i] = static_cast<std::uint8_t>(v ^ (rng.bernoulli(ch.p) ? 1u : 0u));
      }
      break;
    case MacKind::CONJUNCTION:
      for (std::size_t i = 0; i < t; ++i) {
        std::uint8_t v = 1;
        for (const auto& in : inputs) v &= (in[i] & 1u);
        y[i] = v;
      }
      break;
    case MacKind::DISJUNCTION:
      for (std::size_t i = 0; i < t; ++i) {
        std::uint8_t v = 0;
        for (const auto& in : inputs) v |= (in[i] & 1u);
        y[i] = v;
      }
      break;
    case MacKind::SELECTION_FIXED: {
      int n = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(ch.N)));
      if (selected) selected->assign(t, n);
      y = inputs[static_cast<std::size_t>(n)];
      break;
    }
    case MacKind::SELECTION_PER_USE:
      if (selected) selected->resize(t);
      for (std::size_t i = 0; i < t; ++i) {
        int n = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(ch.N)));
        if (selected) (*selected)[i] = n;
        y[i] = inputs[static_cast<std::size_t>(n)][i];
      }
      break;
  }
  return y;
}

double dmc_capacity(const std::vector<std::vector<double>>& table, double tol) {
  std::size_t nx = table.size();
  std::size_t ny = table[0].size();
  std::vector<double> q(nx, 1.0 / static_cast<double>(nx));
  std::vector<double> r(ny), d(nx);
  double tol_nats = tol * std::log(2.0);
  for (int iter = 0; iter < 200000; ++iter) {
    for (std::size_t y = 0; y < ny; ++y) {
      double s = 0.0;
      for (std::size_t x = 0; x < nx; ++x) s += q[x] * table[x][y];
      r[y] = s;
    }
    double lo = 0.0, hi = -1.0;
    for (std::size_t x = 0; x < nx; ++x) {
      double s = 0.0;
      for (std::size_t y = 0; y < ny; ++y)
        if (table[x][y] > 0.0 && r[y] > 0.0) s += table[x][y] * std::log(table[x][y] / r[y]);
      d[x] = s;
      lo += q[x] * s;
      hi = std::max(hi, s);
    }
    if (hi - lo <= tol_nats) return lo / std::log(2.0);
    double norm = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      q[x] *= std::exp(d[x] - hi);  // shift for stability
      norm += q[x];
    }
    for (auto& v : q) v /= norm;
  }
  throw std::runtime_error("capacity iteration did not converge");
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_prob(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("cannot parse ") + what + ": " + text);
  }
  if (used != text.size()) throw std::invalid_argument(std::string("trailing junk in ") + what + ": " + text);
  return v;
}

}  // namespace

PointChannel parse_point_channel(const std::string& text) {
  std::vector<std::string> parts = split(text, ':');
  if (parts.size() == 2 && parts[0] == "bsc") return PointChannel::bsc(parse_prob(parts[1], "bsc parameter"));
  if (parts.size() == 2 && parts[0] == "bec") return PointChannel::bec(parse_prob(parts[1], "bec parameter"));
  throw std::invalid_argument("unknown channel spec: " + text + " (expected bsc:<p> or bec:<eps>)");
}

std::vector<PointChannel> parse_point_channel_list(const std::string& comma_separated) {
  std::vector<PointChannel> out;
  for (const std::string& part : split(comma_separated, ',')) out.push_back(parse_point_channel(part));
  return out;
}

bool is_mac_channel_text(const std::string& text) { return text.rfind("mac:", 0) == 0; }

MacChannel parse_mac_channel(const std::string& text, int N) {
  std::vector<std::string> parts = split(text, ':');
  if (parts.size() >= 2 && parts[0] == "mac") {
    if (parts[1] == "add" && parts.size() == 3) return MacChannel::additive(N, parse_prob(parts[2], "mac noise"));
    if (parts[1] == "and" && parts.size() == 2) return MacChannel::conjunction(N);
    if (parts[1] == "or" && parts.size() == 2) return MacChannel::disjunction(N);
    if (parts[1] == "sel" && parts.size() == 2) return MacChannel::selection_fixed(N);
    if (parts[1] == "selp" && parts.size() == 2) return MacChannel::selection_per_use(N);
  }
  throw std::invalid_argument("unknown MAC spec: " + text);
}

}  // namespace npir

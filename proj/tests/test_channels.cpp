#include <cmath>

#include "doctest.h"
#include "npir/channels.hpp"
#include "npir/numerics.hpp"

using namespace npir;

TEST_CASE("point channel factories validate and expose capacity") {
  PointChannel b = PointChannel::bsc(0.1);
  CHECK(b.kind == PointKind::BSC);
  CHECK(b.capacity == doctest::Approx(1.0 - binary_entropy(0.1)).epsilon(1e-15));
  CHECK(PointChannel::bsc(0.0).capacity == 1.0);
  CHECK(PointChannel::bsc(0.5).capacity == 0.0);
  CHECK_THROWS_AS(PointChannel::bsc(0.6), std::domain_error);
  CHECK_THROWS_AS(PointChannel::bsc(-0.1), std::domain_error);

  PointChannel e = PointChannel::bec(0.3);
  CHECK(e.kind == PointKind::BEC);
  CHECK(e.capacity == doctest::Approx(0.7).epsilon(1e-15));
  CHECK_THROWS_AS(PointChannel::bec(1.5), std::domain_error);

  CHECK_THROWS_AS(PointChannel::dmc({{0.5, 0.4}}), std::invalid_argument);  // not row-stochastic
}

TEST_CASE("blahut-arimoto capacity matches closed forms") {
  PointChannel as_table = PointChannel::dmc({{0.9, 0.1}, {0.1, 0.9}});
  CHECK(as_table.capacity == doctest::Approx(1.0 - binary_entropy(0.1)).epsilon(1e-9));
  // Z-channel with leak 1/2: capacity log2(5/4)
  PointChannel z = PointChannel::dmc({{1.0, 0.0}, {0.5, 0.5}});
  CHECK(z.capacity == doctest::Approx(0.321928094887362).epsilon(1e-9));
  // noiseless ternary channel: log2(3)
  PointChannel t3 = PointChannel::dmc({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(t3.capacity == doctest::Approx(std::log2(3.0)).epsilon(1e-9));
}

TEST_CASE("point transmission behaves per kind") {
  RngStream rng(99);
  std::vector<std::uint8_t> x = {0, 1, 1, 0, 1};
  CHECK(transmit_point(PointChannel::bsc(0.0), x, rng) == x);
  auto erased = transmit_point(PointChannel::bec(1.0), x, rng);
  for (auto y : erased) CHECK(y == kErasure);

  long long flips = 0, n = 100000;
  PointChannel noisy = PointChannel::bsc(0.3);
  std::vector<std::uint8_t> zeros(static_cast<std::size_t>(n), 0);
  auto out = transmit_point(noisy, zeros, rng);
  for (auto y : out) flips += y;
  double frac = static_cast<double>(flips) / static_cast<double>(n);
  CHECK(std::abs(frac - 0.3) < 5.0 * std::sqrt(0.3 * 0.7 / static_cast<double>(n)));
}

TEST_CASE("mac transmission: xor, and, or") {
  RngStream rng(7);
  std::vector<std::vector<std::uint8_t>> in = {{0, 0, 1, 1}, {0, 1, 0, 1}};
  CHECK(transmit_mac(MacChannel::additive(2, 0.0), in, rng) == std::vector<std::uint8_t>{0, 1, 1, 0});
  CHECK(transmit_mac(MacChannel::conjunction(2), in, rng) == std::vector<std::uint8_t>{0, 0, 0, 1});
  CHECK(transmit_mac(MacChannel::disjunction(2), in, rng) == std::vector<std::uint8_t>{0, 1, 1, 1});
  CHECK_THROWS_AS(MacChannel::additive(2, 0.5), std::domain_error);
  CHECK_THROWS_AS(transmit_mac(MacChannel::conjunction(3), in, rng), std::invalid_argument);
}

TEST_CASE("selection channels report the chosen database") {
  RngStream rng(123);
  std::vector<std::vector<std::uint8_t>> in = {{0, 0, 0, 0}, {1, 1, 1, 1}};
  std::vector<int> sel;
  auto y = transmit_mac_selection(MacChannel::selection_fixed(2), in, rng, &sel);
  REQUIRE(sel.size() == 4);
  for (int s : sel) CHECK(s == sel[0]);  // one draw per session
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(y[i] == in[static_cast<std::size_t>(sel[i])][i]);

  std::vector<std::vector<std::uint8_t>> big = {std::vector<std::uint8_t>(4000, 0),
                                                std::vector<std::uint8_t>(4000, 1)};
  auto y2 = transmit_mac_selection(MacChannel::selection_per_use(2), big, rng, &sel);
  long long ones = 0;
  for (auto b : y2) ones += b;
  CHECK(ones > 1700);  // roughly half selected from each database
  CHECK(ones < 2300);
}

TEST_CASE("channel grammar round-trips") {
  PointChannel b = parse_point_channel("bsc:0.1");
  CHECK(b.kind == PointKind::BSC);
  CHECK(b.p == doctest::Approx(0.1).epsilon(1e-15));
  PointChannel e = parse_point_channel("bec:0.3");
  CHECK(e.kind == PointKind::BEC);
  CHECK(e.eps == doctest::Approx(0.3).epsilon(1e-15));

  auto list = parse_point_channel_list("bsc:0.1,bec:0.3,bsc:0");
  REQUIRE(list.size() == 3);
  CHECK(list[2].capacity == 1.0);

  CHECK_THROWS_AS(parse_point_channel("bsc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_point_channel("bsc:zebra"), std::invalid_argument);
  CHECK_THROWS_AS(parse_point_channel("laplace:0.1"), std::invalid_argument);

  CHECK(is_mac_channel_text("mac:add:0.05"));
  CHECK(is_mac_channel_text("mac:and"));
  CHECK(!is_mac_channel_text("bsc:0.1"));
  MacChannel m = parse_mac_channel("mac:add:0.05", 2);
  CHECK(m.kind == MacKind::ADDITIVE);
  CHECK(m.p == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(parse_mac_channel("mac:and", 4).kind == MacKind::CONJUNCTION);
  CHECK(parse_mac_channel("mac:or", 4).kind == MacKind::DISJUNCTION);
  CHECK(parse_mac_channel("mac:sel", 2).kind == MacKind::SELECTION_FIXED);
  CHECK(parse_mac_channel("mac:selp", 2).kind == MacKind::SELECTION_PER_USE);
  CHECK_THROWS_AS(parse_mac_channel("mac:nope", 2), std::invalid_argument);
}

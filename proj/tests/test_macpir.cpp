#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "npir/macpir.hpp"

using namespace npir;

TEST_CASE("additive capacity values") {
  CHECK(additive_mac_capacity(0.0) == 1.0);
  CHECK(additive_mac_capacity(0.11) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(additive_mac_capacity(0.499) < 0.01);
  CHECK_THROWS_AS(additive_mac_capacity(0.5), std::domain_error);
  CHECK_THROWS_AS(additive_mac_capacity(-0.1), std::domain_error);
}

TEST_CASE("additive uplinks follow the mask algebra") {
  MessageStore store = MessageStore::zero(3, 2);
  store.bits = {{1, 0}, {0, 1}, {1, 1}};
  std::vector<std::vector<std::uint8_t>> h = {{1, 1, 0}, {0, 1, 1}};
  auto [U1, U2] = additive_mac_uplinks(store, 2, h);
  // bit 0: h = (1,1,0) -> U1 = W1(0)^W2(0) = 1; U2 = U1 ^ W2(0) = 1
  // bit 1: h = (0,1,1) -> U1 = W2(1)^W3(1) = 0; U2 = U1 ^ W2(1) = 1
  CHECK(U1 == std::vector<std::uint8_t>{1, 0});
  CHECK(U2 == std::vector<std::uint8_t>{1, 1});
}

TEST_CASE("additive retrieval is exact on the clean channel for every store") {
  for (int M = 1; M <= 3; ++M)
    for (int L = 1; L <= 2; ++L) {
      int cells = M * L;
      for (unsigned fill = 0; fill < (1u << cells); ++fill) {
        MessageStore store = MessageStore::zero(M, L);
        for (int c = 0; c < cells; ++c)
          store.bits[static_cast<std::size_t>(c / L)][static_cast<std::size_t>(c % L)] = (fill >> c) & 1u;
        for (int i = 1; i <= M; ++i) {
          RngStream rng(1000u * fill + static_cast<unsigned>(10 * M + i));
          SessionReport rep = additive_mac_retrieve(store, i, 0.0, L, 0.2, rng);
          CHECK(rep.errors == 0);
          CHECK(rep.decode_failures == 0);
          CHECK(rep.rate == 1.0);
          CHECK(rep.t_total == L);
        }
      }
    }
}

TEST_CASE("additive blocklength backs off strictly below capacity") {
  MessageStore store = MessageStore::zero(2, 16);
  RngStream rng(5);
  SessionReport rep = additive_mac_retrieve(store, 1, 0.05, 16, 0.2, rng);
  // 1 - H(0.05) = 0.7136; 16 * 1.2 / 0.7136 = 26.9 -> 27, and 16/27 < 0.7136/1.2
  CHECK(rep.t_total == 27);
  REQUIRE(rep.t_per_db.size() == 2);
  CHECK(rep.t_per_db[0] == 27);  // both share the channel uses
  CHECK(rep.t_per_db[1] == 27);
  CHECK(rep.rate == doctest::Approx(16.0 / 27.0));
  CHECK(static_cast<double>(rep.L) / static_cast<double>(rep.t_total) <
        additive_mac_capacity(0.05) / 1.2);
  CHECK(rep.target_rate == doctest::Approx(additive_mac_capacity(0.05)));
}

TEST_CASE("conjunction patterns walk the non-desired subsets") {
  std::vector<std::uint8_t> Z = {0, 0, 0};
  auto pats = conjunction_query_patterns(3, 0, Z);
  REQUIRE(pats.size() == 4);
  CHECK(pats[0] == std::vector<std::uint8_t>{0, 0, 0});  // database 1 sends Z itself
  // remaining rows flip nonempty subsets of literals 2 and 3 (reflected-code order)
  CHECK(pats[1] == std::vector<std::uint8_t>{0, 1, 0});
  CHECK(pats[2] == std::vector<std::uint8_t>{0, 1, 1});
  CHECK(pats[3] == std::vector<std::uint8_t>{0, 0, 1});

  std::vector<std::uint8_t> Z2 = {1, 0, 1};
  auto pats2 = conjunction_query_patterns(3, 1, Z2);
  REQUIRE(pats2.size() == 4);
  CHECK(pats2[0] == Z2);                                   // flips apply to messages 1 and 3
  CHECK(pats2[1] == std::vector<std::uint8_t>{0, 0, 1});
  CHECK(pats2[2] == std::vector<std::uint8_t>{0, 0, 0});
  CHECK(pats2[3] == std::vector<std::uint8_t>{1, 0, 0});
}

TEST_CASE("boolean retrieval is exact for every store and desired index") {
  for (int M = 1; M <= 3; ++M) {
    int L = 2;
    int cells = M * L;
    for (unsigned fill = 0; fill < (1u << cells); ++fill) {
      MessageStore store = MessageStore::zero(M, L);
      for (int c = 0; c < cells; ++c)
        store.bits[static_cast<std::size_t>(c / L)][static_cast<std::size_t>(c % L)] = (fill >> c) & 1u;
      for (int i = 1; i <= M; ++i) {
        RngStream rc(31u * fill + static_cast<unsigned>(i));
        BooleanRetrieval conj = conjunction_retrieve(store, i, M, rc);
        CHECK(conj.recovered == store.bits[static_cast<std::size_t>(i - 1)]);
        CHECK(conj.report.errors == 0);
        CHECK(conj.report.rate == 1.0);
        CHECK(conj.report.t_total == L);

        RngStream rd(77u * fill + static_cast<unsigned>(i));
        BooleanRetrieval disj = disjunction_retrieve(store, i, M, rd);
        CHECK(disj.recovered == store.bits[static_cast<std::size_t>(i - 1)]);
        CHECK(disj.report.errors == 0);
        CHECK(disj.report.rate == 1.0);
      }
    }
  }
}

TEST_CASE("literal expressions are printable") {
  MessageStore store = MessageStore::zero(3, 1);
  RngStream rng(123);
  BooleanRetrieval r = conjunction_retrieve(store, 1, 3, rng);
  REQUIRE(r.expressions.size() == 4);
  for (const std::string& e : r.expressions) {
    CHECK(e.find("W1") != std::string::npos);
    CHECK(e.find("W2") != std::string::npos);
    CHECK(e.find("W3") != std::string::npos);
    CHECK(e.find(" | ") != std::string::npos);  // databases evaluate disjunctions
    CHECK(e.find(" & ") == std::string::npos);
  }
  // each pattern bit shows up as plain or negated literal
  for (std::size_t d = 0; d < r.patterns.size(); ++d)
    for (int m = 0; m < 3; ++m) {
      std::string lit = "W" + std::to_string(m + 1);
      bool negated = r.expressions[d].find("!" + lit) != std::string::npos;
      CHECK(negated == (r.patterns[d][static_cast<std::size_t>(m)] != 0));
    }

  RngStream rng2(123);
  BooleanRetrieval dual = disjunction_retrieve(store, 1, 3, rng2);
  for (const std::string& e : dual.expressions) {
    CHECK(e.find(" & ") != std::string::npos);  // databases evaluate conjunctions
    CHECK(e.find(" | ") == std::string::npos);
  }
}

TEST_CASE("selection capacities") {
  CHECK(selection_capacity(4, 2, SelectionVariant::FIXED) == 0.25);
  CHECK(selection_capacity(1, 5, SelectionVariant::FIXED) == 1.0);
  CHECK(selection_capacity(2, 2, SelectionVariant::PER_USE) == 2.0 / 3.0);
  CHECK(selection_capacity(3, 2, SelectionVariant::PER_USE) == doctest::Approx(4.0 / 7.0));
  CHECK(selection_capacity(2, 1, SelectionVariant::PER_USE) == 0.5);  // N = 1 degenerates to 1/M
  CHECK(selection_capacity(1, 3, SelectionVariant::PER_USE) == 1.0);
  CHECK_THROWS_AS(selection_capacity(0, 2, SelectionVariant::FIXED), std::invalid_argument);
  CHECK_THROWS_AS(selection_capacity(2, 0, SelectionVariant::PER_USE), std::invalid_argument);
}

TEST_CASE("fixed-selection retrieval downloads everything and recovers exactly") {
  RngStream rng(909);
  for (int M = 1; M <= 3; ++M) {
    MessageStore store = MessageStore::random(M, 4, rng);
    for (int i = 1; i <= M; ++i) {
      int picked = -1;
      RngStream session = rng.split(static_cast<std::uint64_t>(10 * M + i));
      SessionReport rep = selection_fixed_retrieve(store, i, session, &picked);
      CHECK(rep.errors == 0);
      CHECK(rep.t_total == static_cast<long long>(M) * 4);
      CHECK(rep.rate == doctest::Approx(1.0 / M));
      CHECK(rep.target_rate == doctest::Approx(1.0 / M));
      CHECK(picked >= 0);
      CHECK(picked <= 1);
    }
  }
}

TEST_CASE("smallest database families for the conjunction scheme") {
  CHECK(conjunction_min_databases_search(1, 4) == 1);
  CHECK(conjunction_min_databases_search(2, 4) == 2);
  CHECK(conjunction_min_databases_search(3, 8) == 4);
}

TEST_CASE("retrieval input validation") {
  MessageStore store = MessageStore::zero(2, 4);
  RngStream rng(3);
  CHECK_THROWS_AS(additive_mac_retrieve(store, 0, 0.0, 4, 0.2, rng), std::invalid_argument);
  CHECK_THROWS_AS(additive_mac_retrieve(store, 3, 0.0, 4, 0.2, rng), std::invalid_argument);
  CHECK_THROWS_AS(additive_mac_retrieve(store, 1, 0.6, 4, 0.2, rng), std::domain_error);
  MessageStore wide = MessageStore::zero(2, 30);
  CHECK_THROWS_AS(additive_mac_retrieve(wide, 1, 0.1, 30, 0.2, rng), std::length_error);
  CHECK_THROWS_AS(conjunction_retrieve(store, 1, 3, rng), std::invalid_argument);  // store says M=2
  CHECK_THROWS_AS(selection_fixed_retrieve(store, 5, rng), std::invalid_argument);
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "npir/bounds.hpp"
#include "npir/types.hpp"

namespace npir {

// One GF(2) summand: symbol `slot` of message `message`. Slots here are
// logical (order-of-use); the plan's per-message permutations map them to
// physical symbol indices when queries are materialized.
struct QueryTerm {
  int message = 0;
  int slot = 0;

  friend bool operator==(const QueryTerm& a, const QueryTerm& b) {
    return a.message == b.message && a.slot == b.slot;
  }
  friend bool operator<(const QueryTerm& a, const QueryTerm& b) {
    return a.message != b.message ? a.message < b.message : a.slot < b.slot;
  }
};

// GF(2) sum of symbols from distinct messages (1 <= |terms| <= M).
struct KSumQuery {
  std::vector<QueryTerm> terms;  // sorted by message
};

// Reference to one answer bit: database (sorted index) and canonical query
// position within that database's list.
struct AnswerRef {
  int db = 0;
  long long pos = 0;
};

// How one desired symbol is recovered: XOR the carrying answer with the side
// answers, then place the result at logical desired slot `logical_slot`.
struct DesiredRecovery {
  AnswerRef carrier;
  std::vector<AnswerRef> side;
  long long logical_slot = 0;
};

struct ReconstructionMap {
  std::vector<DesiredRecovery> entries;  // Lstar * nu entries
};

// Complete per-session query plan. Queries are stored in canonical
// (stage-layout) order; `shuffle[d][c]` gives the transmitted position of
// canonical query c at database d, so databases see a uniformly shuffled
// order while golden layouts stay printable.
struct QueryPlan {
  int M = 0;
  int N = 0;
  int desired = 0;  // 0-based internally
  GroupSequence seq;
  long long nu = 1;
  long long Lstar = 0;
  long long L = 0;                                   // nu * Lstar
  long long used_undesired = 0;                      // fresh undesired slots per block
  std::vector<std::vector<int>> pi;                  // per message: logical -> physical
  std::vector<std::vector<KSumQuery>> queries;       // per database (sorted index)
  std::vector<std::vector<long long>> shuffle;       // canonical -> transmitted
  StageTable stages;                                 // echo of the recursion solve

  long long query_count(int db) const { return static_cast<long long>(queries[static_cast<std::size_t>(db)].size()); }
  // materialized query: logical slots replaced by physical symbol indices
  KSumQuery materialized(int db, long long canonical_pos) const;
};

// Builds the full plan: round-1 stages, side-information-consuming stages for
// later rounds (each stage's pure sums feed one new stage at every other
// active database), the round-1-derived extra stages for groups entering at
// round l+1 >= 3, message symmetry within every stage, fresh per-message
// permutations, and a uniform per-database query shuffle. Verifies the
// realized stage counts against solve_stage_recursion and per-database totals
// against downloads_per_db, throwing std::logic_error on mismatch.
// `desired` is 0-based; store length must equal nu * Lstar.
std::pair<QueryPlan, ReconstructionMap> synthesize_query_plan(int M, int N, const GroupSequence& seq,
                                                              int desired, long long nu, RngStream& rng);

// Same with identity permutations and no shuffle (for documentation tables
// and structural tests).
std::pair<QueryPlan, ReconstructionMap> synthesize_query_plan_identity(int M, int N,
                                                                       const GroupSequence& seq,
                                                                       int desired, long long nu);

// Database db's truthful uncoded answers in transmitted order (length nu*D_db).
std::vector<std::uint8_t> answer_uncoded(const MessageStore& store, const QueryPlan& plan, int db);

// Recovers the desired message (physical symbol order) from correctly decoded
// per-database answer vectors (transmitted order).
std::vector<std::uint8_t> reconstruct(const QueryPlan& plan, const ReconstructionMap& map,
                                      const std::vector<std::vector<std::uint8_t>>& answers);

// Multiset of message-index combinations queried at a database, sorted; equal
// across desired indices by message symmetry.
std::vector<std::vector<int>> query_shape_multiset(const QueryPlan& plan, int db);

// Table layout in canonical order, one column per database, symbols printed
// as a1, b2, ... after permutation materialization.
std::string format_query_plan(const QueryPlan& plan);

}  // namespace npir

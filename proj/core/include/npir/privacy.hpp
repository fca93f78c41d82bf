#pragma once

#include <map>
#include <string>
#include <vector>

#include "npir/numerics.hpp"
#include "npir/scheme.hpp"

namespace npir {

// Exact distribution over canonically serialized query sets.
struct QueryDistribution {
  std::map<std::string, Rational> mass;
};

// 1/2 sum |d1 - d2|, exact.
Rational total_variation(const QueryDistribution& d1, const QueryDistribution& d2);

// Canonical serialization of a materialized query set: terms sorted within a
// query, queries sorted lexicographically (order-insensitive on purpose).
std::string canonical_query_set(const std::vector<KSumQuery>& queries);

// Exact distribution of the query set database `db` receives, by full
// enumeration of the per-message symbol relabelings that can alter the set
// (injections of used logical slots into message positions). Throws
// std::length_error when the enumeration space exceeds 2^20 tuples.
QueryDistribution enumerate_query_distribution(int M, int N, const GroupSequence& seq, int desired,
                                               int db);

// As above but over ordered query lists, additionally enumerating the
// per-database shuffle; same 2^20 guard.
QueryDistribution enumerate_ordered_query_distribution(int M, int N, const GroupSequence& seq,
                                                       int desired, int db);

// Certificate route for corners too large to enumerate: the query-set
// distribution for desired index i is uniform over the orbit of the logical
// query pattern under per-message slot bijections, so the TV between two
// desired indices is 0 when the patterns are isomorphic and 1 otherwise.
// Returns the exact TV by backtracking bijection search.
Rational plan_orbit_tv(int M, int N, const GroupSequence& seq, int i, int j, int db);

// Max TV over all desired-index pairs and all databases, choosing enumeration
// when the space fits the guard and the orbit certificate otherwise.
Rational scheme_privacy_tv_max(int M, int N, const GroupSequence& seq);

// MAC protocol query distributions (exhaustive over mask / negation space).
QueryDistribution additive_query_distribution(int M, int desired, int db);           // db in {1, 2}
QueryDistribution boolean_query_distribution(int M, int desired, int db, bool disjunction);
QueryDistribution selection_query_distribution(int M, int desired);

// Mutant generator with the message-symmetry step skipped (queries touch only
// the desired message); its TV across desired indices is strictly positive,
// demonstrating the verifier has power.
QueryDistribution broken_demo_query_distribution(int M, int desired);

}  // namespace npir

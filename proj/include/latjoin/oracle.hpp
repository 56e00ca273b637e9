#pragma once
// Brute-force join oracle: backtracking over variables with per-relation
// prefix pruning and FD filtering.  Independent of every executor; used as
// ground truth throughout the test suites.

#include "latjoin/relation.hpp"

namespace latjoin {

struct OracleOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    Relation output;           // over all query variables, in query var order
    uint64_t extension_steps;  // backtracking work, the oracle's cost measure
};

constexpr uint64_t kDefaultOracleBudget = 100'000'000;

OracleResult brute_force_join(const Query& q, const Database& db,
                              uint64_t budget = kDefaultOracleBudget);

// Re-check that every tuple satisfies each relation membership and each FD;
// used by the oracle's own self test.
bool oracle_self_check(const Query& q, const Database& db, const Relation& out);

}  // namespace latjoin

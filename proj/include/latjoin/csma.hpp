#pragma once
// CSM proof sequences built from dual-CLLP certificates, and the CSMA
// executor: degree partitioning, budgeted joins, and LP restarts.

#include <memory>

#include "latjoin/bounds.hpp"
#include "latjoin/relation.hpp"

namespace latjoin {

struct CsmRule {
    enum Kind { CD, CC, SM } kind;
    // CD: h(y) -> h(y|x) + h(x), with x strictly below y.
    // CC: h(y|x) + h(x) -> h(y), with x strictly below y.
    // SM: h(x) + h(y | x^y) -> h(x v y), with x, y incomparable.
    ElemId x, y;
    Int mult;
};

struct CsmSequence {
    std::vector<CsmRule> rules;
    Int d;      // certificate denominator
    Int scale;  // doubling factor accumulated by the constructive proof
    Int D;      // d * scale; executor adjustments use mult / D
};

// Fixpoint of down-closure plus c_{Y|X} > 0 composition, starting from K.
std::vector<ElemId> conditional_closure(const Lattice& lat, const std::vector<ElemId>& k,
                                        const DualCertificate& cert);

// A pair A, B in Kbar with s_{A,B} > 0 and A v B outside Kbar; throws when
// none exists (the certificate is then infeasible).
std::pair<ElemId, ElemId> find_violating_pair(const Lattice& lat,
                                              const std::vector<ElemId>& kbar,
                                              const DualCertificate& cert);

// The constructive proof: grow K from {hat0}, manufacture needed terms with
// CD/CC rules, duplicate multiplicities lazily when a rule would consume the
// last copy of a term.  Identical rules are emitted once (so trivially
// consecutive); the rule count is at most |L|^2.
CsmSequence build_csm_sequence(const Lattice& lat, const DualCertificate& cert);

struct DegreePart {
    Relation table;
    Rat log_count;   // n_X^{(j)}: bound on log2 |pi_X(part)|
    Rat log_degree;  // n_{Y|X}^{(j)}: bound on the max log-degree in the part
};

// Partition by integer log-degree buckets, then split each bucket so its
// projection stays within 2^(n_Y - j - 1); every part satisfies
// log_count + log_degree <= n_sup exactly.
std::vector<DegreePart> partition_by_degree(const Relation& rel, const std::vector<int>& x_vars,
                                            const Rat& n_sup);

struct CsmaParams {
    std::optional<Rat> theta_override;  // default: (D-1)(|L|^2 ceil(log2 l) + 1)
    uint64_t max_restarts = 1000;
    bool trace = false;
};

struct CsmaTraceNode {
    std::string rule;
    size_t parts = 0;
    uint64_t ops = 0;
};

struct CsmaRunResult {
    Relation output;
    CostCounter cost;
    Rat initial_opt;
    Int ell;                 // partition fan-out bound used for reporting
    size_t cd_rules = 0;     // in the initial sequence
    uint64_t branches = 1;   // leaves of the execution tree
    uint64_t restarts = 0;
    uint64_t inv_checks = 0; // Inv1/Inv2 verifications that all passed
    std::vector<CsmaTraceNode> trace;
};

// Execute CSMA for the query against the pair set P0 (input cardinalities
// plus declared degree bounds).  Every rule application re-verifies Inv1
// (guards bound their pairs) and Inv2 (adjusted certificate feasible with
// objective <= the budget base); violations throw.
CsmaRunResult run_csma(const Query& q, const Database& db, const Lattice& lat,
                       const PairSet& pairs0, const CsmaParams& params = {});

}  // namespace latjoin

#pragma once
// Chains, chain hypergraphs, the chain bound, goodness and tightness tests,
// chain selection (Shearer / dual Shearer / exhaustive), and the Chain
// Algorithm executor.

#include <optional>

#include "latjoin/bounds.hpp"
#include "latjoin/normality.hpp"
#include "latjoin/relation.hpp"

namespace latjoin {

struct Chain {
    std::vector<ElemId> elems;  // hat0 = C_0 < C_1 < ... < C_k = hat1
    int levels() const { return (int)elems.size() - 1; }
};

Chain make_chain(const Lattice& lat, std::vector<ElemId> elems);  // validates shape

// e(X) for an arbitrary lattice element: levels i with X^C_i != X^C_{i-1}.
std::vector<int> chain_footprint(const Lattice& lat, const Chain& c, ElemId x);

// vertices 1..k; i in e_j iff R_j covers level i.
Hypergraph chain_hypergraph(const Lattice& lat, const Chain& c,
                            const std::vector<ElemId>& rel_elems,
                            const std::vector<std::string>& rel_names);

struct GoodnessResult {
    bool good = true;
    int bad_rel = -1;   // index into rel_elems of the first violation
    int bad_level = -1;
};

// C_{i-1} v (R_j ^ C_i) == C_i on every covered level.
GoodnessResult is_good_chain(const Lattice& lat, const Chain& c,
                             const std::vector<ElemId>& rel_elems);

struct ChainBound {
    bool finite = true;
    Rat bound;                 // sum w_j n_j at the cover optimum
    std::vector<Rat> weights;  // per relation
};

ChainBound chain_bound(const Lattice& lat, const Chain& c, const std::vector<ElemId>& rel_elems,
                       const std::vector<std::string>& rel_names, const std::vector<Rat>& log_card);

// Greedy selection over join-irreducibles below the inputs (Shearer) or
// meet-irreducibles from the top (dual Shearer); both return good chains
// whose hypergraphs have no isolated vertex.
Chain select_chain_shearer(const Lattice& lat, const std::vector<ElemId>& rel_elems);
Chain select_chain_dual(const Lattice& lat, const std::vector<ElemId>& rel_elems);

// All good chains with finite bound, minimum-bound one first; exponential in
// the lattice size, guarded by a cap.
struct ExhaustiveChains {
    Chain best;
    ChainBound best_bound;
    size_t good_chain_count = 0;
};
ExhaustiveChains select_chain_exhaustive(const Lattice& lat, const std::vector<ElemId>& rel_elems,
                                         const std::vector<std::string>& rel_names,
                                         const std::vector<Rat>& log_card, int lattice_cap = 40);

// Tightness: the chain is good for every element of L and footprints satisfy
// e(X v Y) contained in e(X) u e(Y); includes the monotonicity sanity check.
bool chain_tightness_check(const Lattice& lat, const Chain& c);

struct ChainRunResult {
    Relation output;
    CostCounter cost;
    std::vector<size_t> level_sizes;
};

// The Chain Algorithm: level by level, per-tuple argmin branching over the
// covering relations, expansion, and verification against every covering
// relation and every fd.
ChainRunResult run_chain(const Query& q, const Database& db, const Lattice& lat,
                         const Chain& c, const std::vector<ElemId>& rel_elems);

}  // namespace latjoin

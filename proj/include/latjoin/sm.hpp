#pragma once
// SM-proof sequences over multisets of lattice elements, proof search,
// the goodness labeling, the SM bound, and the SMA executor with
// heavy/light partitioning.

#include <map>
#include <set>

#include "latjoin/bounds.hpp"
#include "latjoin/normality.hpp"
#include "latjoin/relation.hpp"

namespace latjoin {

struct SmStep {
    ElemId x, y;  // incomparable elements consumed, replaced by (x^y, xvy)
};

struct SmProof {
    std::map<ElemId, int> initial;  // element -> multiplicity (q_j summed)
    std::vector<SmStep> steps;
    int d = 1;  // copies of h(1) the proof must produce
};

// Replay the steps on the multiset; throws if a step consumes an element not
// present or a comparable pair.  Returns the final multiset.
std::map<ElemId, int> replay_proof(const Lattice& lat, const SmProof& proof);

// The final multiset must be a chain containing hat1 with multiplicity >= d.
bool proof_succeeds(const Lattice& lat, const SmProof& proof);

enum class SmSearchMode { Distributive, Exhaustive };

struct SmSearchResult {
    enum Outcome { Found, ProvenNonexistent, BudgetExhausted } outcome;
    SmProof proof;           // valid when Found
    uint64_t states_visited = 0;
};

// Distributive mode: greedy any-order stepping, preferring steps that
// maximize the sum|e|^2 progress measure (termination guaranteed there).
// Exhaustive mode: memoized DFS over multiset states under a node budget;
// distinguishes proven nonexistence from budget exhaustion.
SmSearchResult find_sm_proof(const Lattice& lat, const std::map<ElemId, int>& initial, int d,
                             SmSearchMode mode, uint64_t state_budget = 2'000'000);

struct GoodnessTrace {
    bool good = false;
    int failing_step = -1;            // A(X,Y) empty there, when != -1
    bool label_missing_at_top = false;
    std::vector<std::set<int>> final_labels;  // per accumulated copy
    std::set<int> top_labels;                 // union over copies of hat1
    int total_labels = 0;
};

// The labeling procedure: initial label 1 everywhere, fresh labels f(j) per
// j in A(X,Y) on X^Y != 0, propagation of f(j) to copies holding j.  Copies
// consumed by a step are bound to the live copy with the smallest index.
GoodnessTrace check_goodness(const Lattice& lat, const SmProof& proof);

struct SmBoundResult {
    bool provable = false;  // some cover vertex admits an SM-proof
    Rat bound;              // min sum w_j n_j over provable vertices
    std::vector<Rat> weights;
    SmProof proof;          // for the best provable vertex
    bool budget_hit = false;  // some vertex search ran out of budget
};

// Min over co-atomic cover-polytope vertices whose inequality admits an
// SM-proof (search-backed).
SmBoundResult sm_bound(const Lattice& lat, const std::vector<ElemId>& rel_elems,
                       const std::vector<std::string>& rel_names, const std::vector<Rat>& log_card,
                       uint64_t state_budget = 2'000'000);

struct SmaPlan {
    std::vector<int> table_of_copy;  // copy index -> relation index (initial tables)
    std::vector<ElemId> elem_of_copy;
    SmProof proof;
    LatticeFunc h_star;  // optimal primal, monotonized
    std::vector<Rat> w_star;
    int d = 1;
};

// Assemble an SMA plan from the LLP optimum: dual weights w* scaled to a
// multiset, a good SM-proof found by search, and the step-tightness check
// h*(Y) - h*(X^Y) == h*(XvY) - h*(X) on every step.
SmaPlan make_sma_plan(const Query& q, const Lattice& lat, const LatticeQuery& lq,
                      uint64_t state_budget = 2'000'000);

struct SmaRunResult {
    Relation output;
    CostCounter cost;
    uint64_t cache_bound_checks = 0;  // all passed or run_sma throws
    size_t heavy_total = 0;
};

// Algorithm: per step split pi_Z(T(Y)) into light/heavy at the h*-gap
// threshold, T(XvY) = expanded light join, T(X^Y) = heavy projection meet;
// final answer = union of T(1) copies semi-join reduced with every input and
// fd-verified.  Refuses plans whose proof is not good; asserts the cache
// bound log|T(B)| <= h*(B) after every step.
SmaRunResult run_sma(const Query& q, const Database& db, const Lattice& lat, const SmaPlan& plan);

}  // namespace latjoin

#pragma once
// The lattice linear program (LLP), its conditional generalization (CLLP),
// their exact duals, Lovasz monotonization, and output-inequality checking.

#include <optional>

#include "latjoin/lattice.hpp"
#include "latjoin/lattice_function.hpp"
#include "latjoin/lp.hpp"

namespace latjoin {

// Default denominator exponent for dyadic log2 approximations of
// non-power-of-two cardinalities in bound reporting.
constexpr uint64_t kDefaultLogDenom = 24;
// Executor paths cap the denominator so exact threshold tests stay cheap.
constexpr uint64_t kExecutorLogDenomCap = 12;

// Relations resolved to lattice elements (closures), with log-cardinalities.
struct LatticeQuery {
    const Lattice* lat = nullptr;
    std::vector<std::string> rel_names;
    std::vector<ElemId> rel_elems;  // closure of each relation's attr set
    std::vector<Rat> log_card;      // n_j = log2 N_j (dyadic, rounded up)
};

LatticeQuery make_lattice_query(const Query& q, const Lattice& lat,
                                const std::vector<Int>& cardinalities,
                                uint64_t log_denom = kDefaultLogDenom);

// A conditional pair (X, Y), X strictly below Y, with log-degree bound.
struct CondPair {
    ElemId sub;  // X (hat0 for plain cardinality constraints)
    ElemId sup;  // Y
    Rat log_bound;
    std::string name;  // provenance label, e.g. relation name
};

using PairSet = std::vector<CondPair>;

// The pair set {(hat0, R_j)} plus declared degree bounds.
PairSet default_pair_set(const Query& q, const Lattice& lat, const LatticeQuery& lq,
                         uint64_t log_denom = kDefaultLogDenom);

// ---- LLP ----------------------------------------------------------------

struct LlpRowRefs {
    std::vector<std::pair<ElemId, ElemId>> submod_pairs;  // row order
    int first_card_row = 0;                               // rows [first, first+m)
};

// max h(1) s.t. submodularity on incomparable pairs, h(R_j) <= n_j, h >= 0.
LinearProgram build_llp(const LatticeQuery& lq, LlpRowRefs* refs = nullptr);

struct LlpSolution {
    Rat optimum;                  // h*(1)
    LatticeFunc h;                // optimal primal, Lovasz-monotonized
    LatticeFunc h_raw;            // optimal primal as returned by the solver
    std::vector<Rat> w;           // dual weights per relation
    std::map<std::pair<ElemId, ElemId>, Rat> s;  // dual submodularity weights
};

// Solve the LLP exactly; dual taken from the same tableau, then support-
// minimized deterministically.  Throws on an unbounded LLP (uncovered
// co-atom) with has_value()==false instead: see the bool flag.
struct LlpOutcome {
    bool bounded = true;
    LlpSolution sol;  // valid when bounded
};
LlpOutcome solve_llp(const LatticeQuery& lq);

// ---- CLLP ---------------------------------------------------------------

// max h(1) s.t. log-degree rows h(Y)-h(X) <= n_{Y|X}, submodularity,
// monotonicity, h(0)=0, h >= 0.
LinearProgram build_cllp(const Lattice& lat, const PairSet& pairs);

struct DualCertificate {
    PairSet pairs;
    std::vector<Rat> c;                              // per pair
    std::map<std::pair<ElemId, ElemId>, Rat> s;      // incomparable {A,B}, A<B by id
    std::map<std::pair<ElemId, ElemId>, Rat> m;      // comparable (X,Y), X strictly below Y
    Rat objective() const;

    Rat netflow(const Lattice& lat, ElemId z) const;
    bool feasible(const Lattice& lat) const;  // nonneg + netflow constraints
};

// min sum n_{Y|X} c_{Y|X} s.t. netflow(1) >= 1, netflow(Z) >= 0 on interior.
LinearProgram build_dual_cllp(const Lattice& lat, const PairSet& pairs,
                              std::vector<std::pair<char, ElemId>>* var_index = nullptr);

struct CllpSolution {
    Rat optimum;
    LatticeFunc h;      // monotonized optimal primal
    DualCertificate cert;
};

CllpSolution solve_cllp(const Lattice& lat, const PairSet& pairs);

// ---- odds and ends --------------------------------------------------------

// hbar(0)=0, hbar(X)=min_{Y>=X} h(Y); rejects non-submodular input.
LatticeFunc lovasz_monotonize(const Lattice& lat, const LatticeFunc& h);

struct OutputInequality {
    bool valid = false;
    std::map<std::pair<ElemId, ElemId>, Rat> s;  // certificate when valid
};

// Does sum_j w_j h(R_j) >= h(1) hold for every polymatroid?  Decided by
// dual-LLP feasibility with w fixed (Farkas via phase-1 simplex).
OutputInequality check_output_inequality(const Lattice& lat,
                                         const std::vector<ElemId>& rel_elems,
                                         const std::vector<Rat>& w);

// max over strictly normal h of h(1) subject to h(R_j) <= n_j; equals the
// LLP optimum exactly when the lattice is normal w.r.t. the inputs.
struct NormalOptimum {
    Rat optimum;
    LatticeFunc h;                 // the strictly normal optimum
    std::vector<Rat> coatom_mass;  // a_i per co-atom
};
NormalOptimum solve_normal_optimum(const LatticeQuery& lq);

}  // namespace latjoin

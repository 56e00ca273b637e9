#pragma once
// The lattice of FD-closed attribute sets: order, meet/join, Hasse diagram,
// irreducibles, Moebius function, distributivity, and embeddings.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latjoin/attrset.hpp"
#include "latjoin/query.hpp"

namespace latjoin {

using ElemId = int;

struct Lattice {
    std::vector<std::string> var_names;
    std::vector<AttrSet> elements;  // closed sets, sorted by (popcount, bits)
    ElemId hat0 = -1, hat1 = -1;
    std::vector<std::vector<ElemId>> join_table;
    std::vector<std::vector<ElemId>> meet_table;
    std::vector<std::pair<ElemId, ElemId>> covers;  // (lower, upper)
    std::vector<std::vector<ElemId>> covers_up;     // per element
    std::vector<std::vector<ElemId>> covers_down;
    std::vector<ElemId> join_irreducibles;
    std::vector<ElemId> meet_irreducibles;
    std::vector<ElemId> atoms;
    std::vector<ElemId> coatoms;
    AttrSet redundant_vars;  // variables equivalent to a set not containing them

    int size() const { return (int)elements.size(); }

    ElemId id_of(AttrSet s) const {
        auto it = index_.find(s.bits);
        if (it == index_.end()) return -1;
        return it->second;
    }

    bool leq(ElemId a, ElemId b) const { return elements[a].subset_of(elements[b]); }
    bool less(ElemId a, ElemId b) const { return a != b && leq(a, b); }
    bool incomparable(ElemId a, ElemId b) const { return !leq(a, b) && !leq(b, a); }

    ElemId join(ElemId a, ElemId b) const { return join_table[a][b]; }
    ElemId meet(ElemId a, ElemId b) const { return meet_table[a][b]; }

    bool is_join_irreducible(ElemId x) const { return covers_down[x].size() == 1; }
    bool is_meet_irreducible(ElemId x) const { return covers_up[x].size() == 1; }

    std::string name(ElemId x) const;

    // |{U in S : U <= Z}|, the compaction count c(Z, S).
    int coatom_count_c(ElemId z, const std::vector<ElemId>& s) const;

    // x AND (y OR z) == (x AND y) OR (x AND z) for all triples.
    bool is_distributive() const;

    // Diagnostic: an M3 sublattice {U, X, Y, Z, top} sharing the lattice top,
    // if one exists.  (Its presence implies non-normality; the converse is
    // only conjectured, so callers must not conclude normality from absence.)
    std::optional<std::array<ElemId, 5>> find_m3_with_shared_top() const;

    void rebuild_index();  // after filling `elements`

  private:
    std::map<uint32_t, ElemId> index_;
};

// Enumerate all closed sets of the query's FDs and assemble the lattice.
Lattice build_lattice(const Query& q);

// The lattice 2^names (no FDs).
Lattice boolean_algebra(const std::vector<std::string>& names);

// Moebius function mu(X, Y) for X <= Y, computed by the recursive sieve
// mu(X,X)=1, mu(X,Y) = -sum_{X <= Z < Y} mu(X,Z); memoized per lattice.
class MoebiusTable {
  public:
    explicit MoebiusTable(const Lattice& lat);
    const Int& mu(ElemId x, ElemId y) const;  // requires x <= y

  private:
    const Lattice& lat_;
    std::vector<std::vector<Int>> table_;  // indexed [x][y], junk when !(x<=y)
};

// A join-preserving map between lattices with f(1) = 1'.
struct Embedding {
    const Lattice* source = nullptr;
    const Lattice* target = nullptr;
    std::vector<ElemId> map;            // source element -> target element
    std::vector<ElemId> right_adjoint;  // target element -> source element

    // f(X) <= Y  iff  X <= r(Y), for all pairs; plus join preservation.
    bool is_valid() const;
};

// Compute the right adjoint r(Y) = max{X : f(X) <= Y} and wrap up.
Embedding make_embedding(const Lattice& src, const Lattice& tgt, std::vector<ElemId> map);

}  // namespace latjoin

#pragma once
// Co-atomic hypergraph, fractional edge covers, normality decisions for
// functions and lattices, and worst-case quasi-product materialization.

#include <optional>

#include "latjoin/bounds.hpp"
#include "latjoin/lattice_function.hpp"
#include "latjoin/relation.hpp"

namespace latjoin {

struct Hypergraph {
    std::vector<ElemId> vertices;            // lattice element ids
    std::vector<std::string> edge_names;
    std::vector<std::vector<int>> edges;     // vertex positions per edge
};

// vertices = co-atoms; edge e_j = co-atoms NOT above R_j.
Hypergraph coatomic_hypergraph(const Lattice& lat, const std::vector<ElemId>& rel_elems,
                               const std::vector<std::string>& rel_names);

struct EdgeCover {
    bool finite = true;          // false when an isolated vertex exists
    Rat rho;                     // optimal weighted cover value
    std::vector<Rat> weights;    // per edge
};

// min sum w_j n_j s.t. every vertex covered, w >= 0.
EdgeCover fractional_edge_cover(const Hypergraph& hg, const std::vector<Rat>& edge_cost);

// All vertices of {w >= 0 : every vertex covered}, by exhaustive basis
// enumeration with rational Gaussian elimination; deduplicated and sorted.
std::vector<std::vector<Rat>> cover_polytope_vertices(const Hypergraph& hg,
                                                      int max_dimension_cap = 12);

struct NormalLatticeVerdict {
    bool normal = false;
    // when non-normal: the failing cover vertex and a violating submodular h
    std::vector<Rat> witness_w;
    LatticeFunc witness_h;
    // when normal: the vertices that were checked
    std::vector<std::vector<Rat>> checked_vertices;
};

// Enumerate cover-polytope vertices of the co-atomic hypergraph and check
// each output inequality; normality w.r.t. the given inputs.
NormalLatticeVerdict is_normal_lattice(const Lattice& lat, const std::vector<ElemId>& rel_elems,
                                       const std::vector<std::string>& rel_names,
                                       int coatom_cap = 12);

// Materialization of an integral normal h as a quasi-product instance.
struct Materialization {
    CanonicalEmbedding embedding;
    std::vector<int> full_schema;     // all query vars
    Relation full_instance;           // D over all variables
    Database database;                // projections per relation + interners
};

// Builds the canonical instance [2]^atoms and pulls it back through the
// canonical embedding; requires h integral and normal.
Materialization materialize_normal(const Query& q, const Lattice& lat, const LatticeFunc& h);

}  // namespace latjoin

#pragma once
// Exact-rational functions on lattice elements: Moebius inversion, the
// polymatroid axioms, step functions, normality, and the canonical embedding
// of an integral normal function into a Boolean algebra.

#include <optional>
#include <vector>

#include "latjoin/lattice.hpp"
#include "latjoin/rational.hpp"

namespace latjoin {

struct LatticeFunc {
    std::vector<Rat> values;  // per element id

    Rat& operator[](ElemId x) { return values[x]; }
    const Rat& operator[](ElemId x) const { return values[x]; }
    int size() const { return (int)values.size(); }

    static LatticeFunc zero(const Lattice& lat) { return {std::vector<Rat>(lat.size(), Rat(0))}; }
};

// g(X) = sum_{Y >= X} mu(X,Y) h(Y); computed as the triangular solve of
// h(X) = sum_{Y >= X} g(Y), which is the same thing in exact rationals.
LatticeFunc mobius_invert(const Lattice& lat, const LatticeFunc& h);

// h(X) = sum_{Y >= X} g(Y).
LatticeFunc mobius_apply(const Lattice& lat, const LatticeFunc& g);

// h_Z(X) = 1 if X is not below Z, else 0.
LatticeFunc step_function(const Lattice& lat, ElemId z);

bool is_nonnegative(const LatticeFunc& h);
bool is_monotone(const Lattice& lat, const LatticeFunc& h);
// h(X^Y) + h(XvY) <= h(X) + h(Y) on all incomparable pairs.
bool is_submodular(const Lattice& lat, const LatticeFunc& h);
// nonnegative + monotone + submodular + h(0)=0.
bool is_polymatroid(const Lattice& lat, const LatticeFunc& h);

struct NormalDecomposition {
    bool normal = false;
    LatticeFunc g;              // Moebius inverse
    std::vector<Rat> step_coeffs;  // a_Z = -g(Z) for Z != 1, valid when normal
};

// Normal iff g(X) <= 0 for all X != 1 and h(0) = 0 (equivalently
// g(1) = -sum_{Z<1} g(Z)); then h = sum a_Z h_Z with a_Z = -g(Z).
NormalDecomposition normal_decomposition(const Lattice& lat, const LatticeFunc& h);

// Strictly normal: normal with g supported on co-atoms and the top only.
bool is_strictly_normal(const Lattice& lat, const NormalDecomposition& d);

// Canonical embedding of an integral normal h: -g(Z) fresh atoms per Z != 1;
// each lattice element maps to the union of the atom groups of the Z's NOT
// above it (the complement form of the upside-down construction, which is the
// variable renaming of the quasi-product instance).
struct CanonicalEmbedding {
    int num_atoms = 0;
    std::vector<std::pair<ElemId, int>> atom_group;  // atom -> (Z, index within group)
    std::vector<std::vector<int>> image;             // element -> sorted atom list
};

// Requires h integral and normal; throws otherwise.
CanonicalEmbedding canonical_embedding(const Lattice& lat, const LatticeFunc& h);

// Materialize as a Lattice-level Embedding into the Boolean algebra 2^atoms
// (only for small atom counts; used for validation and tests).
Embedding to_lattice_embedding(const Lattice& lat, const CanonicalEmbedding& ce,
                               Lattice& target_storage);

// Pull a function back through an embedding: (h' o f)(X) = h'(f(X)).
LatticeFunc pull_back(const Embedding& f, const LatticeFunc& h_target);

}  // namespace latjoin

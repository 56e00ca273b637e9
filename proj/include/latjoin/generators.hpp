#pragma once
// Instance generators: product instances, quasi-product pullbacks through a
// canonical embedding, the modular M3 instance, and AGM worst cases from
// fractional vertex packings.

#include <random>

#include "latjoin/bounds.hpp"
#include "latjoin/lattice_function.hpp"
#include "latjoin/oracle.hpp"

namespace latjoin {

struct GeneratedInstance {
    Database database;       // per-relation projections, interners, udf tables
    Relation full_instance;  // D over all query variables
};

// Product instance: R_j = product of the given per-variable domains.
GeneratedInstance gen_product(const Query& q, const std::vector<Int>& domain_sizes);

// Quasi-product: pull the product instance over the embedding's atoms back
// through the variable renaming; atom i ranges over [atom_domain[i]].
// Tokens of a variable are the "_"-joined atom values of its closure image.
GeneratedInstance gen_quasi_product(const Query& q, const Lattice& lat,
                                    const CanonicalEmbedding& ce,
                                    const std::vector<Int>& atom_domain);

// Quasi-product at the strictly-normal optimum for uniform size N = 2^n:
// requires the co-atom masses a_i * n to be integral.  Throws when the
// lattice is not normal w.r.t. the inputs (optimum falls short of the LLP).
GeneratedInstance gen_quasi_worst_case(const Query& q, const Lattice& lat, const Int& N);

// D = {(i,j,k) : i+j+k = 0 mod N} for the M3 query R(x),S(y),T(z).
GeneratedInstance gen_m3_modular(const Query& q, const Int& N);

// AGM worst case for FD-free queries: product instance with |domain(x_i)| =
// 2^{v_i n} from an optimal fractional vertex packing; requires integrality.
GeneratedInstance gen_agm_worst(const Query& q, const Int& N);

// Fill the registry's Table entries for every UDF-backed fd from the full
// instance (which must satisfy the fds).  Totality on executor probes holds
// because quasi-products project onto every value combination.
void derive_table_udfs(const Query& q, GeneratedInstance& inst);

// Keep a random subset of the full instance's tuples (each kept with
// probability keep_prob) and rebuild the per-relation projections.
void sample_subset(const Query& q, GeneratedInstance& inst, double keep_prob, uint64_t seed);

}  // namespace latjoin

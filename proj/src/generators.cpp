#include "latjoin/generators.hpp"

#include <algorithm>

namespace latjoin {

namespace {

void project_relations(const Query& q, GeneratedInstance& inst) {
    for (auto& r : q.relations) {
        std::vector<int> vars;
        for (auto& a : r.attrs) vars.push_back(q.var_index(a));
        inst.database.relations[r.name] = inst.full_instance.project(vars);
    }
}

}  // namespace

GeneratedInstance gen_product(const Query& q, const std::vector<Int>& domain_sizes) {
    if ((int)domain_sizes.size() != q.num_vars())
        throw std::invalid_argument("one domain size per variable required");
    GeneratedInstance inst;
    int k = q.num_vars();
    inst.database.interners.resize(k);
    Int total = 1;
    for (auto& d : domain_sizes) total *= d;
    if (total > 10'000'000) throw std::runtime_error("product instance too large");
    std::vector<int> all_vars(k);
    for (int v = 0; v < k; ++v) all_vars[v] = v;
    std::vector<Tuple> tuples;
    Tuple cur(k, 0);
    std::vector<Int> counter(k, 0);
    uint64_t n = total.convert_to<uint64_t>();
    for (int v = 0; v < k; ++v) cur[v] = inst.database.intern(v, "0");
    for (uint64_t i = 0; i < n; ++i) {
        tuples.push_back(cur);
        for (int v = k - 1; v >= 0; --v) {
            counter[v] += 1;
            if (counter[v] < domain_sizes[v]) {
                cur[v] = inst.database.intern(v, counter[v].str());
                break;
            }
            counter[v] = 0;
            cur[v] = inst.database.intern(v, "0");
        }
    }
    inst.full_instance = Relation(all_vars, std::move(tuples));
    project_relations(q, inst);
    return inst;
}

GeneratedInstance gen_quasi_product(const Query& q, const Lattice& lat,
                                    const CanonicalEmbedding& ce,
                                    const std::vector<Int>& atom_domain) {
    if ((int)atom_domain.size() != ce.num_atoms)
        throw std::invalid_argument("one domain size per atom required");
    GeneratedInstance inst;
    int k = q.num_vars();
    inst.database.interners.resize(k);
    std::vector<std::vector<int>> var_atoms(k);
    for (int v = 0; v < k; ++v)
        var_atoms[v] = ce.image[lat.id_of(q.closure(AttrSet::single(v)))];

    Int total = 1;
    for (auto& d : atom_domain) total *= d;
    if (total > 10'000'000) throw std::runtime_error("quasi-product instance too large");
    uint64_t n = total.convert_to<uint64_t>();

    std::vector<Int> counter(ce.num_atoms, 0);
    std::vector<std::string> atom_tok(ce.num_atoms, "0");
    std::vector<int> all_vars(k);
    for (int v = 0; v < k; ++v) all_vars[v] = v;
    std::vector<Tuple> tuples;
    auto emit = [&]() {
        Tuple t(k);
        for (int v = 0; v < k; ++v) {
            std::string tok;
            for (size_t i = 0; i < var_atoms[v].size(); ++i) {
                if (i) tok += "_";
                tok += atom_tok[var_atoms[v][i]];
            }
            if (var_atoms[v].empty()) tok = "0";
            t[v] = inst.database.intern(v, tok);
        }
        tuples.push_back(std::move(t));
    };
    for (uint64_t i = 0; i < n; ++i) {
        emit();
        for (int a = ce.num_atoms - 1; a >= 0; --a) {
            counter[a] += 1;
            if (counter[a] < atom_domain[a]) {
                atom_tok[a] = counter[a].str();
                break;
            }
            counter[a] = 0;
            atom_tok[a] = "0";
        }
    }
    inst.full_instance = Relation(all_vars, std::move(tuples));
    project_relations(q, inst);
    derive_table_udfs(q, inst);
    return inst;
}

GeneratedInstance gen_quasi_worst_case(const Query& q, const Lattice& lat, const Int& N) {
    if (!is_power_of_two(N)) throw std::invalid_argument("quasi generation wants N a power of two");
    uint64_t n = floor_log2(N);
    std::vector<Int> cards(q.relations.size(), N);
    LatticeQuery lq = make_lattice_query(q, lat, cards);
    LlpOutcome llp = solve_llp(lq);
    if (!llp.bounded) throw std::runtime_error("LLP unbounded: no finite worst case");
    NormalOptimum no = solve_normal_optimum(lq);
    if (no.optimum != llp.sol.optimum)
        throw std::runtime_error(
            "lattice is not normal w.r.t. the inputs: no quasi-product worst case (normal optimum " +
            rat_str(no.optimum) + " < LLP " + rat_str(llp.sol.optimum) + ")");
    for (auto& a : no.coatom_mass)
        if (!rat_is_integer(a))
            throw std::runtime_error("co-atom mass " + rat_str(a) +
                                     " not integral at n=" + std::to_string(n) +
                                     "; pick N so the masses are integers");
    CanonicalEmbedding ce = canonical_embedding(lat, no.h);
    std::vector<Int> atom_domain(ce.num_atoms, 2);
    return gen_quasi_product(q, lat, ce, atom_domain);
}

GeneratedInstance gen_m3_modular(const Query& q, const Int& N) {
    if (q.num_vars() != 3) throw std::invalid_argument("m3 generator expects three variables");
    GeneratedInstance inst;
    inst.database.interners.resize(3);
    std::vector<int> all_vars = {0, 1, 2};
    std::vector<Tuple> tuples;
    uint64_t n = N.convert_to<uint64_t>();
    for (uint64_t i = 0; i < n; ++i)
        for (uint64_t j = 0; j < n; ++j) {
            uint64_t kk = (2 * n - i - j) % n;  // i + j + k = 0 mod N
            Tuple t(3);
            t[0] = inst.database.intern(0, std::to_string(i));
            t[1] = inst.database.intern(1, std::to_string(j));
            t[2] = inst.database.intern(2, std::to_string(kk));
            tuples.push_back(std::move(t));
        }
    inst.full_instance = Relation(all_vars, std::move(tuples));
    project_relations(q, inst);
    derive_table_udfs(q, inst);
    return inst;
}

GeneratedInstance gen_agm_worst(const Query& q, const Int& N) {
    if (!q.fds.empty())
        throw std::invalid_argument("agm-worst is for FD-free queries; use quasi");
    if (!is_power_of_two(N)) throw std::invalid_argument("agm-worst wants N a power of two");
    uint64_t n = floor_log2(N);
    // fractional vertex packing: max sum v_i s.t. sum_{i in R_j} v_i <= n_j
    LinearProgram lp;
    lp.maximize = true;
    for (int v = 0; v < q.num_vars(); ++v) lp.add_var("v_" + q.vars[v], 1);
    for (auto& r : q.relations) {
        int row = lp.add_row('L', Rat(Int(n)), "pack_" + r.name);
        for (int v : r.attr_set.members()) lp.add_term(row, v, 1);
    }
    LpSolution sol = solve_exact(lp);
    if (sol.status != LpSolution::Optimal) throw std::logic_error("packing LP failed");
    std::vector<Int> domains;
    for (int v = 0; v < q.num_vars(); ++v) {
        if (!rat_is_integer(sol.primal[v]))
            throw std::runtime_error("packing exponent " + rat_str(sol.primal[v]) +
                                     " not integral; pick N so v_i log N are integers");
        domains.push_back(pow2(rat_num(sol.primal[v]).convert_to<uint64_t>()));
    }
    return gen_product(q, domains);
}

void derive_table_udfs(const Query& q, GeneratedInstance& inst) {
    for (auto& fd : q.fds) {
        if (fd.provenance != FdProvenance::Udf) continue;
        Udf u;
        u.kind = Udf::Table;
        int rhs = fd.rhs.members()[0];
        std::vector<int> lhs = fd.lhs.members();
        for (auto& t : inst.full_instance.tuples()) {
            std::vector<std::string> key;
            for (int v : lhs) key.push_back(inst.database.token(v, t[v]));
            std::string val = inst.database.token(rhs, t[rhs]);
            auto [it, fresh] = u.table.try_emplace(key, val);
            if (!fresh && it->second != val)
                throw std::logic_error("full instance violates fd backing UDF " + fd.udf);
        }
        inst.database.udfs.udfs[fd.udf] = std::move(u);
    }
}

void sample_subset(const Query& q, GeneratedInstance& inst, double keep_prob, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Tuple> kept;
    for (auto& t : inst.full_instance.tuples())
        if (unif(rng) <= keep_prob) kept.push_back(t);
    inst.full_instance = Relation(inst.full_instance.schema(), std::move(kept));
    project_relations(q, inst);
}

}  // namespace latjoin

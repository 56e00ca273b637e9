#include <cassert>
#include <iostream>
#include "latjoin/lattice.hpp"
#include "latjoin/bounds.hpp"
#include "latjoin/chain.hpp"
#include "latjoin/sm.hpp"
#include "latjoin/oracle.hpp"
#include "latjoin/generators.hpp"
using namespace latjoin;

Query badchain_query() {
    // R(abc), S(ade), T(bdf), U(cef); within each input any two attrs
    // determine the third; af->b, be->a, cd->a close the lattice to 12 elems
    std::vector<std::tuple<std::vector<std::string>, std::vector<std::string>, std::string>> fds;
    auto tri = [&](std::string g, std::string a, std::string b, std::string c) {
        fds.push_back({{a,b},{c},"guard:"+g});
        fds.push_back({{a,c},{b},"guard:"+g});
        fds.push_back({{b,c},{a},"guard:"+g});
    };
    tri("R","a","b","c"); tri("S","a","d","e"); tri("T","b","d","f"); tri("U","c","e","f");
    fds.push_back({{"a","f"},{"b"},"udf:u_af_b"});
    fds.push_back({{"b","e"},{"a"},"udf:u_be_a"});
    fds.push_back({{"c","d"},{"a"},"udf:u_cd_a"});
    return make_query({"a","b","c","d","e","f"},
                      {{"R",{"a","b","c"}},{"S",{"a","d","e"}},{"T",{"b","d","f"}},{"U",{"c","e","f"}}},
                      fds);
}

int main() {
    Query q = badchain_query();
    Lattice lat = build_lattice(q);
    std::cout << "badchain lattice size = " << lat.size() << "\n";
    assert(lat.size() == 12);
    assert(lat.coatoms.size() == 4);

    Int N(64);  // n = 6, divisible by 3
    LatticeQuery lq = make_lattice_query(q, lat, {N, N, N, N});
    LlpOutcome o = solve_llp(lq);
    std::cout << "badchain LLP = " << rat_str(o.sol.optimum) << " (expect 8 = 4/3*6)\n";
    assert(o.sol.optimum == Rat(8));

    // exhaustive chain search: min over good chains should be 3/2 n = 9
    ExhaustiveChains ec = select_chain_exhaustive(lat, lq.rel_elems, lq.rel_names, lq.log_card);
    std::cout << "min good-chain bound = " << rat_str(ec.best_bound.bound)
              << " over " << ec.good_chain_count << " chains\n";
    assert(ec.best_bound.bound == Rat(9));

    // SM bound = 4/3 n
    SmBoundResult sb = sm_bound(lat, lq.rel_elems, lq.rel_names, lq.log_card);
    std::cout << "sm bound = " << rat_str(sb.bound) << " provable=" << sb.provable << "\n";
    assert(sb.provable && sb.bound == Rat(8));

    // SMA plan + run on the quasi worst case
    GeneratedInstance inst = gen_quasi_worst_case(q, lat, N);
    std::cout << "|D| = " << inst.full_instance.size() << " (expect 2^8 = 256)\n";
    assert(inst.full_instance.size() == 256);
    for (auto& [name, rel] : inst.database.relations)
        std::cout << "|" << name << "| = " << rel.size() << "\n";

    SmaPlan plan = make_sma_plan(q, lat, lq);
    std::cout << "proof steps = " << plan.proof.steps.size() << ", d = " << plan.d << "\n";
    SmaRunResult run = run_sma(q, inst.database, lat, plan);
    std::cout << "SMA output = " << run.output.size() << "\n";
    OracleResult orc = brute_force_join(q, inst.database);
    std::cout << "oracle output = " << orc.output.size() << " steps=" << orc.extension_steps << "\n";
    assert(run.output.tuples() == orc.output.tuples());
    assert(orc.output.size() == 256);

    // chain run on fig1 adversarial instance
    Query f1 = make_query({"x","y","z","u"},
                          {{"R",{"x","y"}},{"S",{"y","z"}},{"T",{"z","u"}}},
                          {{{"x","z"},{"u"},"udf:f"},{{"y","u"},{"x"},"udf:g"}});
    Lattice f1lat = build_lattice(f1);
    Database db;
    db.interners.resize(4);
    {
        Udf pf; pf.kind = Udf::Proj; pf.proj_index = 0;
        db.udfs.udfs["f"] = pf;  // f(x,z) = x
        Udf pg; pg.kind = Udf::Proj; pg.proj_index = 1;
        db.udfs.udfs["g"] = pg;  // g(y,u) = u
        int n = 32;
        std::vector<Tuple> rows;
        for (int i = 1; i <= n/2; ++i) {
            rows.push_back({db.intern(0,"1"), db.intern(1,std::to_string(i))});
            rows.push_back({db.intern(0,std::to_string(i)), db.intern(1,"1")});
        }
        std::vector<Tuple> s_rows, t_rows;
        for (auto& r : rows) {
            s_rows.push_back({db.intern(1, db.token(0,r[0])), db.intern(2, db.token(1,r[1]))});
            t_rows.push_back({db.intern(2, db.token(0,r[0])), db.intern(3, db.token(1,r[1]))});
        }
        db.relations["R"] = Relation({0,1}, rows);
        db.relations["S"] = Relation({1,2}, s_rows);
        db.relations["T"] = Relation({2,3}, t_rows);
    }
    // chain 0 < y < yz < 1
    Chain c = make_chain(f1lat, {f1lat.hat0, f1lat.id_of(f1.attr_set({"y"})),
                                 f1lat.id_of(f1.attr_set({"y","z"})), f1lat.hat1});
    std::vector<ElemId> rel_elems;
    for (auto& r : f1.relations) rel_elems.push_back(f1lat.id_of(f1.closure(r.attr_set)));
    auto good = is_good_chain(f1lat, c, rel_elems);
    assert(good.good);
    ChainRunResult cr = run_chain(f1, db, f1lat, c, rel_elems);
    OracleResult f1o = brute_force_join(f1, db);
    std::cout << "chain output = " << cr.output.size() << " oracle = " << f1o.output.size()
              << " chain ops = " << cr.cost.total() << " oracle steps = " << f1o.extension_steps << "\n";
    assert(cr.output.tuples() == f1o.output.tuples());
    std::cout << "scratch OK\n";
    return 0;
}

#include "latjoin/chain.hpp"

#include <algorithm>
#include <functional>

namespace latjoin {

Chain make_chain(const Lattice& lat, std::vector<ElemId> elems) {
    if (elems.empty() || elems.front() != lat.hat0 || elems.back() != lat.hat1)
        throw std::invalid_argument("chain must run from bottom to top");
    for (size_t i = 1; i < elems.size(); ++i)
        if (!lat.less(elems[i - 1], elems[i]))
            throw std::invalid_argument("chain must be strictly increasing");
    return {std::move(elems)};
}

std::vector<int> chain_footprint(const Lattice& lat, const Chain& c, ElemId x) {
    std::vector<int> e;
    for (int i = 1; i <= c.levels(); ++i)
        if (lat.meet(x, c.elems[i]) != lat.meet(x, c.elems[i - 1])) e.push_back(i);
    return e;
}

Hypergraph chain_hypergraph(const Lattice& lat, const Chain& c,
                            const std::vector<ElemId>& rel_elems,
                            const std::vector<std::string>& rel_names) {
    Hypergraph hg;
    for (int i = 1; i <= c.levels(); ++i) hg.vertices.push_back(c.elems[i]);
    for (size_t j = 0; j < rel_elems.size(); ++j) {
        hg.edge_names.push_back(rel_names.empty() ? "e" + std::to_string(j) : rel_names[j]);
        std::vector<int> e;
        for (int i : chain_footprint(lat, c, rel_elems[j])) e.push_back(i - 1);
        hg.edges.push_back(std::move(e));
    }
    return hg;
}

GoodnessResult is_good_chain(const Lattice& lat, const Chain& c,
                             const std::vector<ElemId>& rel_elems) {
    for (size_t j = 0; j < rel_elems.size(); ++j) {
        for (int i : chain_footprint(lat, c, rel_elems[j])) {
            ElemId z = lat.join(c.elems[i - 1], lat.meet(rel_elems[j], c.elems[i]));
            if (z != c.elems[i]) return {false, (int)j, i};
        }
    }
    return {};
}

ChainBound chain_bound(const Lattice& lat, const Chain& c, const std::vector<ElemId>& rel_elems,
                       const std::vector<std::string>& rel_names,
                       const std::vector<Rat>& log_card) {
    Hypergraph hg = chain_hypergraph(lat, c, rel_elems, rel_names);
    EdgeCover cover = fractional_edge_cover(hg, log_card);
    ChainBound out;
    if (!cover.finite) {
        out.finite = false;
        return out;
    }
    out.bound = cover.rho;
    out.weights = cover.weights;
    return out;
}

Chain select_chain_shearer(const Lattice& lat, const std::vector<ElemId>& rel_elems) {
    // join-irreducibles below the order ideal generated by the inputs
    std::vector<ElemId> pool;
    for (ElemId x : lat.join_irreducibles)
        for (ElemId r : rel_elems)
            if (lat.leq(x, r)) {
                pool.push_back(x);
                break;
            }
    std::vector<ElemId> chain = {lat.hat0};
    std::vector<bool> used(lat.size(), false);
    ElemId cur = lat.hat0;
    while (cur != lat.hat1) {
        std::vector<std::pair<ElemId, ElemId>> cands;  // (join, x)
        for (ElemId x : pool) {
            if (used[x]) continue;
            ElemId jn = lat.join(cur, x);
            if (jn != cur) cands.push_back({jn, x});
        }
        if (cands.empty())
            throw std::logic_error("chain selection stalled: inputs do not join to top");
        // keep candidates whose join is minimal in lattice order, pick the
        // lowest (join id, element id) for determinism
        std::pair<ElemId, ElemId> best = {-1, -1};
        for (auto& [jn, x] : cands) {
            bool minimal = true;
            for (auto& [jn2, x2] : cands)
                if (jn2 != jn && lat.less(jn2, jn)) minimal = false;
            if (!minimal) continue;
            if (best.first < 0 || jn < best.first || (jn == best.first && x < best.second))
                best = {jn, x};
        }
        used[best.second] = true;
        chain.push_back(best.first);
        cur = best.first;
    }
    return make_chain(lat, chain);
}

Chain select_chain_dual(const Lattice& lat, const std::vector<ElemId>& rel_elems) {
    (void)rel_elems;
    // mirror of the primal: descend by meeting with meet-irreducibles,
    // keeping each meet as high as possible
    std::vector<ElemId> down = {lat.hat1};
    std::vector<bool> used(lat.size(), false);
    ElemId cur = lat.hat1;
    while (cur != lat.hat0) {
        std::vector<std::pair<ElemId, ElemId>> cands;  // (meet, x)
        for (ElemId x : lat.meet_irreducibles) {
            if (used[x]) continue;
            ElemId mt = lat.meet(cur, x);
            if (mt != cur) cands.push_back({mt, x});
        }
        if (cands.empty()) throw std::logic_error("dual chain selection stalled");
        // keep candidates whose meet is maximal in lattice order
        std::pair<ElemId, ElemId> best = {-1, -1};
        for (auto& [mt, x] : cands) {
            bool maximal = true;
            for (auto& [mt2, x2] : cands)
                if (mt2 != mt && lat.less(mt, mt2)) maximal = false;
            if (!maximal) continue;
            if (best.first < 0 || mt < best.first || (mt == best.first && x < best.second))
                best = {mt, x};
        }
        used[best.second] = true;
        down.push_back(best.first);
        cur = best.first;
    }
    std::reverse(down.begin(), down.end());
    return make_chain(lat, down);
}

ExhaustiveChains select_chain_exhaustive(const Lattice& lat, const std::vector<ElemId>& rel_elems,
                                         const std::vector<std::string>& rel_names,
                                         const std::vector<Rat>& log_card, int lattice_cap) {
    if (lat.size() > lattice_cap)
        throw std::runtime_error("lattice too large for exhaustive chain search");
    ExhaustiveChains out;
    std::vector<ElemId> cur = {lat.hat0};
    bool have_best = false;
    std::function<void()> rec = [&]() {
        if (cur.back() == lat.hat1) {
            Chain c{cur};
            if (!is_good_chain(lat, c, rel_elems).good) return;
            ChainBound b = chain_bound(lat, c, rel_elems, rel_names, log_card);
            if (!b.finite) return;
            out.good_chain_count += 1;
            if (!have_best || b.bound < out.best_bound.bound) {
                have_best = true;
                out.best = c;
                out.best_bound = b;
            }
            return;
        }
        for (ElemId nxt = 0; nxt < lat.size(); ++nxt)
            if (lat.less(cur.back(), nxt)) {
                cur.push_back(nxt);
                rec();
                cur.pop_back();
            }
    };
    rec();
    if (!have_best) throw std::runtime_error("no good chain with finite bound exists");
    return out;
}

bool chain_tightness_check(const Lattice& lat, const Chain& c) {
    // the chain must be good for every lattice element
    std::vector<ElemId> everything;
    for (ElemId x = 0; x < lat.size(); ++x) everything.push_back(x);
    if (!is_good_chain(lat, c, everything).good) return false;
    std::vector<std::vector<int>> foot(lat.size());
    for (ElemId x = 0; x < lat.size(); ++x) foot[x] = chain_footprint(lat, c, x);
    // monotonicity sanity: X <= Y implies e(X) within e(Y)
    for (ElemId x = 0; x < lat.size(); ++x)
        for (ElemId y = 0; y < lat.size(); ++y)
            if (lat.less(x, y) &&
                !std::includes(foot[y].begin(), foot[y].end(), foot[x].begin(), foot[x].end()))
                return false;
    for (ElemId x = 0; x < lat.size(); ++x)
        for (ElemId y = x + 1; y < lat.size(); ++y) {
            std::vector<int> u;
            std::set_union(foot[x].begin(), foot[x].end(), foot[y].begin(), foot[y].end(),
                           std::back_inserter(u));
            const auto& fj = foot[lat.join(x, y)];
            if (!std::includes(u.begin(), u.end(), fj.begin(), fj.end())) return false;
        }
    return true;
}

ChainRunResult run_chain(const Query& q, const Database& db, const Lattice& lat, const Chain& c,
                         const std::vector<ElemId>& rel_elems) {
    auto good = is_good_chain(lat, c, rel_elems);
    if (!good.good)
        throw std::invalid_argument("chain is not good for relation " +
                                    q.relations[good.bad_rel].name);
    ChainRunResult res;

    // expand all inputs to their closures up front
    std::vector<Relation> expanded;
    for (auto& r : q.relations)
        expanded.push_back(expand(db.relations.at(r.name), db, q, &res.cost));

    // per level, the relations covering it
    int k = c.levels();
    std::vector<std::vector<int>> covering(k + 1);
    for (size_t j = 0; j < rel_elems.size(); ++j)
        for (int i : chain_footprint(lat, c, rel_elems[j])) covering[i].push_back((int)j);
    for (int i = 1; i <= k; ++i)
        if (covering[i].empty())
            throw std::invalid_argument("chain hypergraph has an isolated vertex at level " +
                                        std::to_string(i));

    std::vector<int> empty_schema;
    Relation cur(empty_schema, {Tuple{}});  // Q_0 = {()}
    res.level_sizes.push_back(cur.size());

    for (int i = 1; i <= k; ++i) {
        AttrSet ci = lat.elements[c.elems[i]];
        AttrSet ci_prev = lat.elements[c.elems[i - 1]];
        std::vector<int> ci_vars = ci.members();

        // per covering relation: the projection vars R_j ^ C_i, split into the
        // shared part (in C_{i-1}) and the new part
        struct Cover {
            int rel;
            std::vector<int> shared;   // vars of R_j ^ C_{i-1}
            std::vector<int> fresh;    // vars of R_j ^ C_i not in C_{i-1}
            const Relation* table;
        };
        std::vector<Cover> covers;
        for (int j : covering[i]) {
            Cover cv;
            cv.rel = j;
            AttrSet rj = lat.elements[rel_elems[j]];
            cv.shared = (rj & ci_prev).members();
            cv.fresh = ((rj & ci) - ci_prev).members();
            cv.table = &expanded[j];
            std::vector<int> order = cv.shared;
            order.insert(order.end(), cv.fresh.begin(), cv.fresh.end());
            cv.table->index_for(order);  // warm the index cache
            covers.push_back(std::move(cv));
        }

        std::vector<Tuple> next;
        for (auto& t : cur.tuples()) {
            // argmin over covering relations of |t join proj(R_j)|
            int best = -1;
            size_t best_count = 0;
            for (size_t ci_idx = 0; ci_idx < covers.size(); ++ci_idx) {
                const Cover& cv = covers[ci_idx];
                std::vector<int> order = cv.shared;
                order.insert(order.end(), cv.fresh.begin(), cv.fresh.end());
                const auto& idx = cv.table->index_for(order);
                Tuple key;
                for (int v : cv.shared) key.push_back(t[cur.col_of(v)]);
                auto [lo, hi] = idx.prefix_range(key);
                res.cost.index_probes += 1;
                size_t count = hi - lo;
                if (best < 0 || count < best_count) {
                    best = (int)ci_idx;
                    best_count = count;
                }
            }
            const Cover& bc = covers[best];
            std::vector<int> order = bc.shared;
            order.insert(order.end(), bc.fresh.begin(), bc.fresh.end());
            const auto& idx = bc.table->index_for(order);
            Tuple key;
            for (int v : bc.shared) key.push_back(t[cur.col_of(v)]);
            auto [lo, hi] = idx.prefix_range(key);

            // candidate tuples over C_{i-1} u (R_j* ^ C_i), then expand to C_i
            std::vector<int> cand_schema = cur.schema();
            cand_schema.insert(cand_schema.end(), bc.fresh.begin(), bc.fresh.end());
            std::vector<Tuple> cand;
            for (size_t r = lo; r < hi; ++r) {
                Tuple row = t;
                row.insert(row.end(), idx.rows[r].begin() + bc.shared.size(), idx.rows[r].end());
                res.cost.tuples_emitted += 1;
                cand.push_back(std::move(row));
            }
            Relation t_exp = expand(Relation(cand_schema, std::move(cand)), db, q, &res.cost);
            // expansion target is C_i by goodness
            if (t_exp.attr_set() != ci) throw std::logic_error("expansion missed C_i");

            // verify against every other covering relation: membership of the
            // R_j ^ C_i projection, and re-expansion consistency
            for (auto& t2 : t_exp.tuples()) {
                bool keep = true;
                for (size_t other = 0; other < covers.size() && keep; ++other) {
                    if ((int)other == best) continue;
                    const Cover& oc = covers[other];
                    std::vector<int> oorder = oc.shared;
                    oorder.insert(oorder.end(), oc.fresh.begin(), oc.fresh.end());
                    const auto& oidx = oc.table->index_for(oorder);
                    Tuple okey;
                    for (int v : oorder) okey.push_back(t2[t_exp.col_of(v)]);
                    auto [olo, ohi] = oidx.prefix_range(okey);
                    res.cost.index_probes += 1;
                    if (olo == ohi) {
                        keep = false;
                        break;
                    }
                    // re-expansion of t join proj_{R_j ^ C_i}(t2) must equal t2
                    std::vector<int> re_schema = cur.schema();
                    Tuple re_row = t;
                    for (int v : oc.fresh) {
                        if (cur.col_of(v) >= 0) continue;
                        re_schema.push_back(v);
                        re_row.push_back(t2[t_exp.col_of(v)]);
                    }
                    Relation re = expand(Relation(re_schema, {re_row}), db, q, &res.cost);
                    if (re.size() != 1) {
                        keep = false;
                        break;
                    }
                    Tuple re_aligned(ci_vars.size());
                    for (size_t vv = 0; vv < ci_vars.size(); ++vv)
                        re_aligned[vv] = re.tuples()[0][re.col_of(ci_vars[vv])];
                    Tuple t2_aligned(ci_vars.size());
                    for (size_t vv = 0; vv < ci_vars.size(); ++vv)
                        t2_aligned[vv] = t2[t_exp.col_of(ci_vars[vv])];
                    if (re_aligned != t2_aligned) keep = false;
                }
                if (keep) {
                    Tuple aligned(ci_vars.size());
                    for (size_t vv = 0; vv < ci_vars.size(); ++vv)
                        aligned[vv] = t2[t_exp.col_of(ci_vars[vv])];
                    next.push_back(std::move(aligned));
                    res.cost.tuples_emitted += 1;
                }
            }
        }
        cur = Relation(ci_vars, std::move(next));
        res.level_sizes.push_back(cur.size());
        if (cur.size() == 0) break;  // empty level: empty output
    }

    if (cur.attr_set() != lat.elements[lat.hat1]) {
        // emptied out early: produce the empty relation over all vars
        std::vector<int> all_vars;
        for (int v = 0; v < q.num_vars(); ++v) all_vars.push_back(v);
        cur = Relation(all_vars, {});
    }
    res.output = std::move(cur);
    return res;
}

}  // namespace latjoin

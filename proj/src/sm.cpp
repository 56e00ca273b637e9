#include "latjoin/sm.hpp"

#include <algorithm>
#include <functional>

namespace latjoin {

std::map<ElemId, int> replay_proof(const Lattice& lat, const SmProof& proof) {
    std::map<ElemId, int> ms = proof.initial;
    auto take = [&](ElemId e) {
        auto it = ms.find(e);
        if (it == ms.end() || it->second == 0)
            throw std::invalid_argument("proof step consumes an absent element: " + lat.name(e));
        if (--it->second == 0) ms.erase(it);
    };
    auto put = [&](ElemId e) { ms[e] += 1; };
    for (auto& st : proof.steps) {
        if (!lat.incomparable(st.x, st.y))
            throw std::invalid_argument("proof step on comparable pair");
        take(st.x);
        take(st.y);
        put(lat.meet(st.x, st.y));
        put(lat.join(st.x, st.y));
    }
    return ms;
}

bool proof_succeeds(const Lattice& lat, const SmProof& proof) {
    std::map<ElemId, int> fin = replay_proof(lat, proof);
    std::vector<ElemId> elems;
    for (auto& [e, c] : fin)
        if (c > 0) elems.push_back(e);
    for (size_t i = 0; i < elems.size(); ++i)
        for (size_t j = i + 1; j < elems.size(); ++j)
            if (lat.incomparable(elems[i], elems[j])) return false;
    auto it = fin.find(lat.hat1);
    return it != fin.end() && it->second >= proof.d;
}

namespace {

// |e_X| = number of co-atoms not above X; progress measure uses its square.
std::vector<int> coatom_edge_sizes(const Lattice& lat) {
    std::vector<int> sz(lat.size(), 0);
    for (ElemId x = 0; x < lat.size(); ++x)
        for (ElemId z : lat.coatoms)
            if (!lat.leq(x, z)) sz[x] += 1;
    return sz;
}

using Multiset = std::vector<std::pair<ElemId, int>>;  // sorted by element

Multiset to_ms(const std::map<ElemId, int>& m) {
    Multiset v;
    for (auto& [e, c] : m)
        if (c > 0) v.push_back({e, c});
    return v;
}

bool is_terminal(const Lattice& lat, const Multiset& ms) {
    for (size_t i = 0; i < ms.size(); ++i)
        for (size_t j = i + 1; j < ms.size(); ++j)
            if (lat.incomparable(ms[i].first, ms[j].first)) return false;
    return true;
}

bool terminal_success(const Lattice& lat, const Multiset& ms, int d) {
    for (auto& [e, c] : ms)
        if (e == lat.hat1) return c >= d;
    return d <= 0;
}

Multiset apply_step(const Lattice& lat, Multiset ms, ElemId x, ElemId y) {
    auto dec = [&](ElemId e) {
        for (auto& p : ms)
            if (p.first == e) {
                p.second -= 1;
                return;
            }
    };
    auto inc = [&](ElemId e) {
        for (auto& p : ms)
            if (p.first == e) {
                p.second += 1;
                return;
            }
        ms.push_back({e, 1});
    };
    dec(x);
    dec(y);
    inc(lat.meet(x, y));
    inc(lat.join(x, y));
    Multiset out;
    for (auto& p : ms)
        if (p.second > 0) out.push_back(p);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

SmSearchResult find_sm_proof(const Lattice& lat, const std::map<ElemId, int>& initial, int d,
                             SmSearchMode mode, uint64_t state_budget) {
    SmSearchResult res;
    res.proof.initial = initial;
    res.proof.d = d;
    std::vector<int> esz = coatom_edge_sizes(lat);

    if (mode == SmSearchMode::Distributive) {
        // any order terminates; prefer the step with the largest progress
        Multiset ms = to_ms(initial);
        while (!is_terminal(lat, ms)) {
            long best_gain = -1;
            std::pair<ElemId, ElemId> best = {-1, -1};
            for (size_t i = 0; i < ms.size(); ++i)
                for (size_t j = i + 1; j < ms.size(); ++j) {
                    ElemId x = ms[i].first, y = ms[j].first;
                    if (!lat.incomparable(x, y)) continue;
                    long before = (long)esz[x] * esz[x] + (long)esz[y] * esz[y];
                    ElemId mt = lat.meet(x, y), jn = lat.join(x, y);
                    long after = (long)esz[mt] * esz[mt] + (long)esz[jn] * esz[jn];
                    if (after - before > best_gain) {
                        best_gain = after - before;
                        best = {x, y};
                    }
                }
            res.proof.steps.push_back({best.first, best.second});
            ms = apply_step(lat, ms, best.first, best.second);
            res.states_visited += 1;
        }
        res.outcome = terminal_success(lat, ms, d) ? SmSearchResult::Found
                                                   : SmSearchResult::ProvenNonexistent;
        return res;
    }

    // exhaustive DFS over multiset states with memoized failures
    std::set<Multiset> failed;
    uint64_t visited = 0;
    bool budget_hit = false;
    std::vector<SmStep> steps;
    std::function<bool(const Multiset&)> dfs = [&](const Multiset& ms) -> bool {
        if (is_terminal(lat, ms)) return terminal_success(lat, ms, d);
        if (failed.count(ms)) return false;
        if (++visited > state_budget) {
            budget_hit = true;
            return false;
        }
        // candidate steps ordered by progress gain, then by ids
        std::vector<std::tuple<long, ElemId, ElemId>> cands;
        for (size_t i = 0; i < ms.size(); ++i)
            for (size_t j = i + 1; j < ms.size(); ++j) {
                ElemId x = ms[i].first, y = ms[j].first;
                if (!lat.incomparable(x, y)) continue;
                long before = (long)esz[x] * esz[x] + (long)esz[y] * esz[y];
                ElemId mt = lat.meet(x, y), jn = lat.join(x, y);
                long after = (long)esz[mt] * esz[mt] + (long)esz[jn] * esz[jn];
                cands.push_back({-(after - before), x, y});
            }
        std::sort(cands.begin(), cands.end());
        for (auto& [neg, x, y] : cands) {
            steps.push_back({x, y});
            if (dfs(apply_step(lat, ms, x, y))) return true;
            steps.pop_back();
            if (budget_hit) return false;
        }
        failed.insert(ms);
        return false;
    };
    bool ok = dfs(to_ms(initial));
    res.states_visited = visited;
    if (ok) {
        res.proof.steps = steps;
        res.outcome = SmSearchResult::Found;
    } else {
        res.outcome = budget_hit ? SmSearchResult::BudgetExhausted : SmSearchResult::ProvenNonexistent;
    }
    return res;
}

GoodnessTrace check_goodness(const Lattice& lat, const SmProof& proof) {
    GoodnessTrace tr;
    struct Copy {
        ElemId elem;
        std::set<int> labels;
        bool live = true;
    };
    std::vector<Copy> copies;
    for (auto& [e, c] : proof.initial)
        for (int i = 0; i < c; ++i) copies.push_back({e, {1}, true});
    int next_label = 2;
    tr.total_labels = 1;

    auto find_live = [&](ElemId e) -> int {
        for (size_t i = 0; i < copies.size(); ++i)
            if (copies[i].live && copies[i].elem == e) return (int)i;
        return -1;
    };

    for (size_t s = 0; s < proof.steps.size(); ++s) {
        const SmStep& st = proof.steps[s];
        int cx = find_live(st.x);
        int cy = find_live(st.y);
        if (cx < 0 || cy < 0) throw std::invalid_argument("goodness: step consumes absent copy");
        std::set<int> a;
        std::set_intersection(copies[cx].labels.begin(), copies[cx].labels.end(),
                              copies[cy].labels.begin(), copies[cy].labels.end(),
                              std::inserter(a, a.end()));
        if (a.empty()) {
            tr.good = false;
            tr.failing_step = (int)s;
            return tr;
        }
        copies[cx].live = false;
        copies[cy].live = false;
        ElemId mt = lat.meet(st.x, st.y);
        ElemId jn = lat.join(st.x, st.y);
        size_t n_before = copies.size();
        // the join copy inherits A(X,Y); the meet copy gets fresh labels f(j)
        copies.push_back({jn, a, true});
        std::map<int, int> fresh;  // j -> f(j)
        if (mt != lat.hat0) {
            std::set<int> fl;
            for (int j : a) {
                fresh[j] = next_label;
                fl.insert(next_label);
                ++next_label;
                tr.total_labels += 1;
            }
            copies.push_back({mt, fl, true});
        }
        // propagate f(j) to every accumulated copy holding j, including the
        // consumed ones but not the two just created
        for (size_t i = 0; i < n_before && !fresh.empty(); ++i) {
            std::vector<int> add;
            for (int j : copies[i].labels)
                if (fresh.count(j)) add.push_back(fresh[j]);
            for (int f : add) copies[i].labels.insert(f);
        }
    }
    for (auto& c : copies) {
        if (c.elem == lat.hat1) tr.top_labels.insert(c.labels.begin(), c.labels.end());
        tr.final_labels.push_back(c.labels);
    }
    tr.good = (int)tr.top_labels.size() == tr.total_labels;
    tr.label_missing_at_top = !tr.good;
    return tr;
}

SmBoundResult sm_bound(const Lattice& lat, const std::vector<ElemId>& rel_elems,
                       const std::vector<std::string>& rel_names, const std::vector<Rat>& log_card,
                       uint64_t state_budget) {
    Hypergraph hg = coatomic_hypergraph(lat, rel_elems, rel_names);
    auto vertices = cover_polytope_vertices(hg);
    SmBoundResult out;
    for (auto& w : vertices) {
        // scale w_j = q_j / d
        Int d = 1;
        for (auto& v : w) d = boost::multiprecision::lcm(d, rat_den(v));
        std::map<ElemId, int> initial;
        for (size_t j = 0; j < w.size(); ++j) {
            Int q = rat_num(w[j]) * (d / rat_den(w[j]));
            if (q > 64) { d = -1; break; }  // unreasonable multiset; skip
            if (q > 0) initial[rel_elems[j]] += q.convert_to<int>();
        }
        if (d < 0) continue;
        SmSearchResult sr =
            find_sm_proof(lat, initial, d.convert_to<int>(), SmSearchMode::Exhaustive, state_budget);
        if (sr.outcome == SmSearchResult::BudgetExhausted) out.budget_hit = true;
        if (sr.outcome != SmSearchResult::Found) continue;
        Rat val = 0;
        for (size_t j = 0; j < w.size(); ++j) val += w[j] * log_card[j];
        if (!out.provable || val < out.bound) {
            out.provable = true;
            out.bound = val;
            out.weights = w;
            out.proof = sr.proof;
        }
    }
    return out;
}

SmaPlan make_sma_plan(const Query& q, const Lattice& lat, const LatticeQuery& lq,
                      uint64_t state_budget) {
    LlpOutcome llp = solve_llp(lq);
    if (!llp.bounded) throw std::runtime_error("LLP unbounded; no SMA plan");
    SmaPlan plan;
    plan.h_star = llp.sol.h;
    plan.w_star = llp.sol.w;

    Int d = 1;
    for (auto& v : plan.w_star) d = boost::multiprecision::lcm(d, rat_den(v));
    if (d > 64) throw std::runtime_error("dual weights have an impractical denominator");
    plan.d = d.convert_to<int>();
    std::map<ElemId, int> initial;
    for (size_t j = 0; j < plan.w_star.size(); ++j) {
        Int qj = rat_num(plan.w_star[j]) * (d / rat_den(plan.w_star[j]));
        for (Int i = 0; i < qj; ++i) {
            plan.table_of_copy.push_back((int)j);
            plan.elem_of_copy.push_back(lq.rel_elems[j]);
            initial[lq.rel_elems[j]] += 1;
        }
    }
    SmSearchResult sr = find_sm_proof(lat, initial, plan.d, SmSearchMode::Exhaustive, state_budget);
    if (sr.outcome != SmSearchResult::Found)
        throw std::runtime_error("no SM-proof for the optimal dual weights (SMA inapplicable)");
    plan.proof = sr.proof;
    // try alternate proofs until one is good; the search order is
    // deterministic, so retry by excluding the found step sequences is not
    // needed for the bundled fixtures -- check and fail loudly instead
    GoodnessTrace g = check_goodness(lat, plan.proof);
    if (!g.good) throw std::runtime_error("found SM-proof is not good; SMA refused");
    // step tightness for the monotonized optimum
    for (auto& st : plan.proof.steps) {
        ElemId mt = lat.meet(st.x, st.y), jn = lat.join(st.x, st.y);
        if (plan.h_star[st.y] - plan.h_star[mt] != plan.h_star[jn] - plan.h_star[st.x])
            throw std::runtime_error("SM step not tight for h*; solver/plan inconsistency");
    }
    return plan;
}

SmaRunResult run_sma(const Query& q, const Database& db, const Lattice& lat, const SmaPlan& plan) {
    GoodnessTrace g = check_goodness(lat, plan.proof);
    if (!g.good) throw std::invalid_argument("run_sma: proof is not good");
    SmaRunResult res;
    const LatticeFunc& h = plan.h_star;

    struct CacheEntry {
        ElemId elem;
        Relation table;
        bool live = true;
    };
    std::vector<CacheEntry> cache;
    auto check_cache_bound = [&](const CacheEntry& ce) {
        res.cache_bound_checks += 1;
        if (ce.table.size() == 0) return;
        if (!log2_leq(Int(ce.table.size()), h[ce.elem]))
            throw std::runtime_error("cache bound violated: log|T(" + lat.name(ce.elem) +
                                     ")| > h*; solver/plan inconsistency");
    };

    for (size_t c = 0; c < plan.table_of_copy.size(); ++c) {
        const RelationDecl& rd = q.relations[plan.table_of_copy[c]];
        Relation t = expand(db.relations.at(rd.name), db, q, &res.cost);
        cache.push_back({plan.elem_of_copy[c], std::move(t), true});
        check_cache_bound(cache.back());
    }

    auto find_live = [&](ElemId e) -> int {
        for (size_t i = 0; i < cache.size(); ++i)
            if (cache[i].live && cache[i].elem == e) return (int)i;
        return -1;
    };

    for (auto& st : plan.proof.steps) {
        int cx = find_live(st.x), cy = find_live(st.y);
        if (cx < 0 || cy < 0) throw std::logic_error("run_sma: step consumes absent table");
        ElemId mt = lat.meet(st.x, st.y), jn = lat.join(st.x, st.y);
        Relation& tx = cache[cx].table;
        Relation& ty = cache[cy].table;
        std::vector<int> z_vars = lat.elements[mt].members();
        Rat gap = h[st.y] - h[mt];  // == h[jn] - h[st.x] by plan tightness

        // classify pi_Z(T(Y)) by degree against 2^gap; the threshold is
        // monotone in the degree, so binary-search the cutoff over the
        // sorted distinct degree values
        Relation proj_y = ty.project(z_vars);
        std::vector<std::pair<Tuple, Int>> degrees;
        for (auto& v : proj_y.tuples()) {
            degrees.push_back({v, ty.degree(z_vars, v)});
            res.cost.index_probes += 1;
        }
        std::vector<Int> distinct;
        for (auto& [v, dg] : degrees) distinct.push_back(dg);
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        // cutoff = largest degree with log2(deg) <= gap
        Int cutoff = 0;
        {
            size_t lo = 0, hi = distinct.size();
            while (lo < hi) {
                size_t mid = (lo + hi) / 2;
                if (log2_leq(distinct[mid], gap)) lo = mid + 1;
                else hi = mid;
            }
            if (lo > 0) cutoff = distinct[lo - 1];
        }
        std::vector<Tuple> lite_rows, heavy_rows;
        for (auto& [v, dg] : degrees) (dg <= cutoff ? lite_rows : heavy_rows).push_back(v);
        Relation lite(z_vars, std::move(lite_rows));
        Relation heavy(z_vars, std::move(heavy_rows));
        res.heavy_total += heavy.size();

        // T(X ^ Y) = pi_Z(T(X)) intersect Heavy(Z)
        Relation meet_table = tx.project(z_vars).semijoin(heavy, &res.cost);
        // T(X v Y) = (T(X) join (T(Y) semijoin Lite))^+
        Relation ty_lite = ty.semijoin(lite, &res.cost);
        Relation joined = tx.join(ty_lite, &res.cost);
        Relation join_table = expand(joined, db, q, &res.cost);
        if (join_table.attr_set() != lat.elements[jn])
            throw std::logic_error("run_sma: join expansion missed X v Y");

        cache[cx].live = false;
        cache[cy].live = false;
        cache.push_back({mt, std::move(meet_table), true});
        check_cache_bound(cache.back());
        cache.push_back({jn, std::move(join_table), true});
        check_cache_bound(cache.back());
    }

    // union of the T(1) tables, semi-join reduced with all inputs, fd-verified
    std::vector<int> all_vars;
    for (int v = 0; v < q.num_vars(); ++v) all_vars.push_back(v);
    Relation out(all_vars, {});
    for (auto& ce : cache)
        if (ce.live && ce.elem == lat.hat1) out = out.unite(ce.table.project(all_vars));
    for (auto& r : q.relations) out = out.semijoin(db.relations.at(r.name), &res.cost);
    // expansion over a closed schema verifies every fd and drops violators
    out = expand(out, db, q, &res.cost);
    res.output = std::move(out);
    return res;
}

}  // namespace latjoin

#include "latjoin/bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace latjoin {

LatticeQuery make_lattice_query(const Query& q, const Lattice& lat,
                                const std::vector<Int>& cardinalities, uint64_t log_denom) {
    if (cardinalities.size() != q.relations.size())
        throw std::invalid_argument("cardinality count mismatch");
    LatticeQuery lq;
    lq.lat = &lat;
    for (size_t j = 0; j < q.relations.size(); ++j) {
        lq.rel_names.push_back(q.relations[j].name);
        ElemId e = lat.id_of(q.closure(q.relations[j].attr_set));
        if (e < 0) throw std::logic_error("relation closure not in lattice");
        lq.rel_elems.push_back(e);
        if (cardinalities[j] < 1) throw std::invalid_argument("cardinality must be >= 1");
        lq.log_card.push_back(dyadic_log2_ceil(cardinalities[j], log_denom));
    }
    return lq;
}

PairSet default_pair_set(const Query& q, const Lattice& lat, const LatticeQuery& lq,
                         uint64_t log_denom) {
    PairSet pairs;
    for (size_t j = 0; j < lq.rel_elems.size(); ++j)
        pairs.push_back({lat.hat0, lq.rel_elems[j], lq.log_card[j], lq.rel_names[j]});
    for (auto& db : q.degree_bounds) {
        ElemId sub = lat.id_of(q.closure(db.sub));
        ElemId sup = lat.id_of(q.closure(db.sup));
        if (sub < 0 || sup < 0 || !lat.less(sub, sup))
            throw ValidationError("degree bound does not map to a strict lattice pair");
        pairs.push_back({sub, sup, dyadic_log2_ceil(db.bound, log_denom),
                         "deg(" + lat.name(sup) + "|" + lat.name(sub) + ")"});
    }
    return pairs;
}

LinearProgram build_llp(const LatticeQuery& lq, LlpRowRefs* refs) {
    const Lattice& lat = *lq.lat;
    LinearProgram lp;
    lp.maximize = true;
    for (ElemId x = 0; x < lat.size(); ++x)
        lp.add_var("h_" + lat.name(x), x == lat.hat1 ? Rat(1) : Rat(0));
    LlpRowRefs local;
    for (ElemId x = 0; x < lat.size(); ++x)
        for (ElemId y = x + 1; y < lat.size(); ++y) {
            if (!lat.incomparable(x, y)) continue;
            int r = lp.add_row('L', Rat(0), "sm_" + lat.name(x) + "_" + lat.name(y));
            lp.add_term(r, lat.meet(x, y), 1);
            lp.add_term(r, lat.join(x, y), 1);
            lp.add_term(r, x, -1);
            lp.add_term(r, y, -1);
            local.submod_pairs.push_back({x, y});
        }
    local.first_card_row = (int)lp.rows.size();
    for (size_t j = 0; j < lq.rel_elems.size(); ++j) {
        int r = lp.add_row('L', lq.log_card[j], "card_" + lq.rel_names[j]);
        lp.add_term(r, lq.rel_elems[j], 1);
    }
    if (refs) *refs = local;
    return lp;
}

LlpOutcome solve_llp(const LatticeQuery& lq) {
    const Lattice& lat = *lq.lat;
    LlpRowRefs refs;
    LinearProgram lp = build_llp(lq, &refs);
    LpSolution sol = solve_exact(lp);
    LlpOutcome out;
    if (sol.status == LpSolution::Unbounded) {
        out.bounded = false;
        return out;
    }
    if (sol.status != LpSolution::Optimal) throw std::logic_error("LLP not optimal");
    out.sol.optimum = sol.objective;
    out.sol.h_raw.values = sol.primal;
    out.sol.h = lovasz_monotonize(lat, out.sol.h_raw);

    // support-minimized dual: re-solve the explicit dual LP for determinism
    // and small certificates, then verify strong duality
    LinearProgram dual;
    dual.maximize = false;
    std::vector<int> w_vars;
    for (size_t j = 0; j < lq.rel_elems.size(); ++j)
        w_vars.push_back(dual.add_var("w_" + lq.rel_names[j], lq.log_card[j]));
    std::vector<int> s_vars;
    for (auto& [x, y] : refs.submod_pairs)
        s_vars.push_back(dual.add_var("s_" + lat.name(x) + "_" + lat.name(y)));
    // one row per lattice element Z: netflow_s(Z) + [Z == R_j] w_j >= c_Z
    for (ElemId z = 0; z < lat.size(); ++z) {
        int r = dual.add_row('G', z == lat.hat1 ? Rat(1) : Rat(0), "nf_" + lat.name(z));
        for (size_t p = 0; p < refs.submod_pairs.size(); ++p) {
            auto [x, y] = refs.submod_pairs[p];
            Rat coef = 0;
            if (lat.meet(x, y) == z) coef += 1;
            if (lat.join(x, y) == z) coef += 1;
            if (x == z || y == z) coef -= 1;
            if (coef != 0) dual.add_term(r, s_vars[p], coef);
        }
        for (size_t j = 0; j < lq.rel_elems.size(); ++j)
            if (lq.rel_elems[j] == z) dual.add_term(r, w_vars[j], 1);
    }
    LpSolution ds = solve_exact_min_support(dual);
    if (ds.status != LpSolution::Optimal || ds.objective != sol.objective)
        throw std::logic_error("strong duality violated in LLP solve");
    for (size_t j = 0; j < lq.rel_elems.size(); ++j) out.sol.w.push_back(ds.primal[w_vars[j]]);
    for (size_t p = 0; p < refs.submod_pairs.size(); ++p)
        if (ds.primal[s_vars[p]] != 0) out.sol.s[refs.submod_pairs[p]] = ds.primal[s_vars[p]];
    return out;
}

LinearProgram build_cllp(const Lattice& lat, const PairSet& pairs) {
    LinearProgram lp;
    lp.maximize = true;
    for (ElemId x = 0; x < lat.size(); ++x)
        lp.add_var("h_" + lat.name(x), x == lat.hat1 ? Rat(1) : Rat(0));
    {
        int r = lp.add_row('E', Rat(0), "zero_bottom");
        lp.add_term(r, lat.hat0, 1);
    }
    for (auto& p : pairs) {
        int r = lp.add_row('L', p.log_bound, "deg_" + p.name);
        lp.add_term(r, p.sup, 1);
        lp.add_term(r, p.sub, -1);
    }
    for (ElemId x = 0; x < lat.size(); ++x)
        for (ElemId y = x + 1; y < lat.size(); ++y) {
            if (!lat.incomparable(x, y)) continue;
            int r = lp.add_row('L', Rat(0), "sm_" + lat.name(x) + "_" + lat.name(y));
            lp.add_term(r, lat.meet(x, y), 1);
            lp.add_term(r, lat.join(x, y), 1);
            lp.add_term(r, x, -1);
            lp.add_term(r, y, -1);
        }
    // monotonicity on covers spans all comparable pairs
    for (auto& [lo, hi] : lat.covers) {
        int r = lp.add_row('L', Rat(0), "mono_" + lat.name(lo) + "_" + lat.name(hi));
        lp.add_term(r, lo, 1);
        lp.add_term(r, hi, -1);
    }
    return lp;
}

Rat DualCertificate::objective() const {
    Rat o = 0;
    for (size_t i = 0; i < pairs.size(); ++i) o += pairs[i].log_bound * c[i];
    return o;
}

Rat DualCertificate::netflow(const Lattice& lat, ElemId z) const {
    Rat f = 0;
    for (size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i].sup == z) f += c[i];
        if (pairs[i].sub == z) f -= c[i];
    }
    for (auto& [ab, v] : s) {
        auto [a, b] = ab;
        if (lat.meet(a, b) == z) f += v;
        if (lat.join(a, b) == z) f += v;
        if (a == z || b == z) f -= v;
    }
    for (auto& [xy, v] : m) {
        auto [x, y] = xy;
        if (y == z) f -= v;  // X < Z: inflow of -m per the dual sign
        if (x == z) f += v;
    }
    return f;
}

bool DualCertificate::feasible(const Lattice& lat) const {
    for (auto& v : c)
        if (v < 0) return false;
    for (auto& [k, v] : s)
        if (v < 0) return false;
    for (auto& [k, v] : m)
        if (v < 0) return false;
    if (netflow(lat, lat.hat1) < 1) return false;
    for (ElemId z = 0; z < lat.size(); ++z)
        if (z != lat.hat0 && z != lat.hat1 && netflow(lat, z) < 0) return false;
    return true;
}

LinearProgram build_dual_cllp(const Lattice& lat, const PairSet& pairs,
                              std::vector<std::pair<char, ElemId>>* var_index) {
    LinearProgram lp;
    lp.maximize = false;
    std::vector<int> c_vars;
    for (size_t i = 0; i < pairs.size(); ++i)
        c_vars.push_back(lp.add_var("c_" + pairs[i].name, pairs[i].log_bound));
    std::vector<std::pair<ElemId, ElemId>> s_pairs, m_pairs;
    std::vector<int> s_vars, m_vars;
    for (ElemId x = 0; x < lat.size(); ++x)
        for (ElemId y = x + 1; y < lat.size(); ++y) {
            if (lat.incomparable(x, y)) {
                s_pairs.push_back({x, y});
                s_vars.push_back(lp.add_var("s_" + lat.name(x) + "_" + lat.name(y)));
            } else if (lat.less(x, y)) {
                m_pairs.push_back({x, y});
                m_vars.push_back(lp.add_var("m_" + lat.name(x) + "_" + lat.name(y)));
            } else if (lat.less(y, x)) {
                m_pairs.push_back({y, x});
                m_vars.push_back(lp.add_var("m_" + lat.name(y) + "_" + lat.name(x)));
            }
        }
    for (ElemId z = 0; z < lat.size(); ++z) {
        if (z == lat.hat0) continue;
        int r = lp.add_row('G', z == lat.hat1 ? Rat(1) : Rat(0), "nf_" + lat.name(z));
        for (size_t i = 0; i < pairs.size(); ++i) {
            Rat coef = 0;
            if (pairs[i].sup == z) coef += 1;
            if (pairs[i].sub == z) coef -= 1;
            if (coef != 0) lp.add_term(r, c_vars[i], coef);
        }
        for (size_t i = 0; i < s_pairs.size(); ++i) {
            auto [a, b] = s_pairs[i];
            Rat coef = 0;
            if (lat.meet(a, b) == z) coef += 1;
            if (lat.join(a, b) == z) coef += 1;
            if (a == z || b == z) coef -= 1;
            if (coef != 0) lp.add_term(r, s_vars[i], coef);
        }
        for (size_t i = 0; i < m_pairs.size(); ++i) {
            auto [x, y] = m_pairs[i];
            Rat coef = 0;
            if (y == z) coef -= 1;
            if (x == z) coef += 1;
            if (coef != 0) lp.add_term(r, m_vars[i], coef);
        }
    }
    if (var_index) {
        var_index->clear();
        for (size_t i = 0; i < pairs.size(); ++i) var_index->push_back({'c', (ElemId)i});
        for (size_t i = 0; i < s_pairs.size(); ++i) var_index->push_back({'s', (ElemId)i});
        for (size_t i = 0; i < m_pairs.size(); ++i) var_index->push_back({'m', (ElemId)i});
    }
    return lp;
}

CllpSolution solve_cllp(const Lattice& lat, const PairSet& pairs) {
    LinearProgram primal = build_cllp(lat, pairs);
    LpSolution ps = solve_exact(primal);
    if (ps.status == LpSolution::Unbounded)
        throw std::runtime_error("CLLP unbounded: some co-atom is unconstrained");
    if (ps.status != LpSolution::Optimal) throw std::logic_error("CLLP primal not optimal");

    LinearProgram dual = build_dual_cllp(lat, pairs);
    LpSolution ds = solve_exact_min_support(dual);
    if (ds.status != LpSolution::Optimal || ds.objective != ps.objective)
        throw std::logic_error("strong duality violated in CLLP solve");

    CllpSolution out;
    out.optimum = ps.objective;
    LatticeFunc hraw;
    hraw.values = ps.primal;
    out.h = lovasz_monotonize(lat, hraw);
    out.cert.pairs = pairs;
    out.cert.c.assign(pairs.size(), Rat(0));
    int v = 0;
    for (size_t i = 0; i < pairs.size(); ++i) out.cert.c[i] = ds.primal[v++];
    for (ElemId x = 0; x < lat.size(); ++x)
        for (ElemId y = x + 1; y < lat.size(); ++y) {
            if (lat.incomparable(x, y)) {
                if (ds.primal[v] != 0) out.cert.s[{x, y}] = ds.primal[v];
                ++v;
            } else if (lat.less(x, y)) {
                if (ds.primal[v] != 0) out.cert.m[{x, y}] = ds.primal[v];
                ++v;
            } else if (lat.less(y, x)) {
                if (ds.primal[v] != 0) out.cert.m[{y, x}] = ds.primal[v];
                ++v;
            }
        }
    if (!out.cert.feasible(lat)) throw std::logic_error("CLLP dual certificate infeasible");
    return out;
}

LatticeFunc lovasz_monotonize(const Lattice& lat, const LatticeFunc& h) {
    if (!is_nonnegative(h) || !is_submodular(lat, h))
        throw std::invalid_argument("monotonization requires a nonnegative submodular input");
    LatticeFunc hb = LatticeFunc::zero(lat);
    for (ElemId x = 0; x < lat.size(); ++x) {
        if (x == lat.hat0) continue;
        Rat best = h[x];
        for (ElemId y = x; y < lat.size(); ++y)
            if (lat.leq(x, y) && h[y] < best) best = h[y];
        hb[x] = best;
    }
    return hb;
}

OutputInequality check_output_inequality(const Lattice& lat,
                                         const std::vector<ElemId>& rel_elems,
                                         const std::vector<Rat>& w) {
    // feasibility of s >= 0 with netflow_s(Z) >= c_Z, c_1 = 1, c_{R_j} = -w_j
    LinearProgram lp;
    lp.maximize = false;
    std::vector<std::pair<ElemId, ElemId>> s_pairs;
    std::vector<int> s_vars;
    for (ElemId x = 0; x < lat.size(); ++x)
        for (ElemId y = x + 1; y < lat.size(); ++y)
            if (lat.incomparable(x, y)) {
                s_pairs.push_back({x, y});
                s_vars.push_back(lp.add_var("s_" + lat.name(x) + "_" + lat.name(y)));
            }
    for (ElemId z = 0; z < lat.size(); ++z) {
        Rat cz = z == lat.hat1 ? Rat(1) : Rat(0);
        for (size_t j = 0; j < rel_elems.size(); ++j)
            if (rel_elems[j] == z) cz -= w[j];
        int r = lp.add_row('G', cz, "nf_" + lat.name(z));
        for (size_t i = 0; i < s_pairs.size(); ++i) {
            auto [a, b] = s_pairs[i];
            Rat coef = 0;
            if (lat.meet(a, b) == z) coef += 1;
            if (lat.join(a, b) == z) coef += 1;
            if (a == z || b == z) coef -= 1;
            if (coef != 0) lp.add_term(r, s_vars[i], coef);
        }
    }
    LpSolution sol = solve_exact_min_support(lp);
    OutputInequality out;
    if (sol.status != LpSolution::Optimal) return out;  // infeasible: not valid
    out.valid = true;
    for (size_t i = 0; i < s_pairs.size(); ++i)
        if (sol.primal[s_vars[i]] != 0) out.s[s_pairs[i]] = sol.primal[s_vars[i]];
    return out;
}

NormalOptimum solve_normal_optimum(const LatticeQuery& lq) {
    const Lattice& lat = *lq.lat;
    LinearProgram lp;
    lp.maximize = true;
    std::vector<int> a_vars;
    for (ElemId z : lat.coatoms) a_vars.push_back(lp.add_var("a_" + lat.name(z), 1));
    for (size_t j = 0; j < lq.rel_elems.size(); ++j) {
        int r = lp.add_row('L', lq.log_card[j], "card_" + lq.rel_names[j]);
        for (size_t i = 0; i < lat.coatoms.size(); ++i)
            if (!lat.leq(lq.rel_elems[j], lat.coatoms[i])) lp.add_term(r, a_vars[i], 1);
    }
    LpSolution sol = solve_exact(lp);
    if (sol.status != LpSolution::Optimal)
        throw std::runtime_error("normal-optimum LP unbounded: some co-atom uncovered");
    NormalOptimum out;
    out.optimum = sol.objective;
    out.coatom_mass = sol.primal;
    out.h = LatticeFunc::zero(lat);
    for (ElemId x = 0; x < lat.size(); ++x) {
        Rat v = 0;
        for (size_t i = 0; i < lat.coatoms.size(); ++i)
            if (!lat.leq(x, lat.coatoms[i])) v += sol.primal[i];
        out.h[x] = v;
    }
    return out;
}

}  // namespace latjoin

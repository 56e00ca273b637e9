#include "latjoin/oracle.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace latjoin {

namespace {

struct Plan {
    // variable binding order: relation-carried variables first (query order),
    // then UDF-determined ones once their inputs are bound
    std::vector<int> order;
    struct Step {
        int var;
        std::vector<const Fd*> determining;          // UDFs fixing this var
        std::vector<const Relation*> prefix_rel;     // relations to prefix-check here
        std::vector<std::vector<int>> prefix_order;  // their index orders
        std::vector<size_t> prefix_len;              // bound columns count
        std::vector<const Fd*> check_udfs;           // UDFs fully bound here
    };
    std::vector<Step> steps;
    std::vector<std::vector<Value>> domains;  // active domain per var, sorted
};

Plan make_plan(const Query& q, const Database& db) {
    Plan plan;
    int k = q.num_vars();
    std::vector<bool> placed(k, false);
    std::vector<bool> in_relation(k, false);
    for (auto& r : q.relations)
        for (int v : r.attr_set.members()) in_relation[v] = true;

    for (int v = 0; v < k; ++v)
        if (in_relation[v]) {
            plan.order.push_back(v);
            placed[v] = true;
        }
    // place UDF-determined variables once their inputs are placed
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto& fd : q.fds) {
            if (fd.provenance != FdProvenance::Udf) continue;
            int rv = fd.rhs.members()[0];
            if (placed[rv]) continue;
            bool ready = true;
            for (int lv : fd.lhs.members()) ready &= placed[lv];
            if (ready) {
                plan.order.push_back(rv);
                placed[rv] = true;
                progress = true;
            }
        }
    }
    for (int v = 0; v < k; ++v)
        if (!placed[v])
            throw ValidationError("oracle: variable " + q.vars[v] +
                                  " is in no relation and not UDF-determined");

    std::vector<int> pos(k, -1);
    for (size_t i = 0; i < plan.order.size(); ++i) pos[plan.order[i]] = (int)i;

    plan.domains.assign(k, {});
    {
        std::vector<std::set<Value>> doms(k);
        for (auto& r : q.relations) {
            auto it = db.relations.find(r.name);
            if (it == db.relations.end()) throw ValidationError("oracle: no data for " + r.name);
            const Relation& rel = it->second;
            for (int v : rel.schema()) {
                int c = rel.col_of(v);
                for (auto& t : rel.tuples()) doms[v].insert(t[c]);
            }
        }
        for (int v = 0; v < k; ++v) plan.domains[v].assign(doms[v].begin(), doms[v].end());
    }

    for (size_t i = 0; i < plan.order.size(); ++i) {
        Plan::Step step;
        step.var = plan.order[i];
        for (auto& fd : q.fds) {
            if (fd.provenance != FdProvenance::Udf) continue;
            bool inputs_bound = true;
            for (int lv : fd.lhs.members()) inputs_bound &= pos[lv] <= (int)i;
            if (!inputs_bound) continue;
            if (fd.rhs.members()[0] == step.var && !fd.lhs.test(step.var)) {
                if (pos[fd.rhs.members()[0]] == (int)i) step.determining.push_back(&fd);
            } else {
                int last = -1;
                for (int v : (fd.lhs | fd.rhs).members()) last = std::max(last, pos[v]);
                if (last == (int)i) step.check_udfs.push_back(&fd);
            }
        }
        for (auto& r : q.relations) {
            const Relation& rel = db.relations.at(r.name);
            if (rel.col_of(step.var) < 0) continue;
            std::vector<int> bound;
            for (size_t j = 0; j <= i; ++j)
                if (rel.col_of(plan.order[j]) >= 0) bound.push_back(plan.order[j]);
            std::vector<int> order = bound;
            for (int v : rel.schema())
                if (std::find(bound.begin(), bound.end(), v) == bound.end()) order.push_back(v);
            step.prefix_rel.push_back(&rel);
            step.prefix_order.push_back(order);
            step.prefix_len.push_back(bound.size());
            rel.index_for(order);  // build up front, outside the counted loop
        }
        plan.steps.push_back(std::move(step));
    }
    return plan;
}

}  // namespace

OracleResult brute_force_join(const Query& q, const Database& db, uint64_t budget) {
    q.validate();
    Plan plan = make_plan(q, db);
    int k = q.num_vars();
    std::vector<Value> binding(k, -1);
    std::vector<Tuple> out;
    uint64_t steps = 0;

    std::vector<std::vector<Value>> cands(plan.order.size());
    std::vector<size_t> cursor(plan.order.size(), 0);

    auto candidates_for = [&](size_t depth) {
        const Plan::Step& st = plan.steps[depth];
        std::vector<Value>& cs = cands[depth];
        cs.clear();
        if (!st.determining.empty()) {
            // every determining UDF must agree on the single candidate
            std::optional<Value> v;
            bool ok = true;
            for (const Fd* fd : st.determining) {
                std::vector<std::string> args;
                for (int lv : fd->lhs.members()) args.push_back(db.token(lv, binding[lv]));
                Value w = db.intern(st.var, db.udfs.eval(fd->udf, args));
                if (!v) v = w;
                else ok &= (*v == w);
            }
            if (ok && v) cs.push_back(*v);
        } else {
            cs = plan.domains[st.var];
        }
    };

    auto consistent = [&](size_t depth) -> bool {
        const Plan::Step& st = plan.steps[depth];
        for (size_t r = 0; r < st.prefix_rel.size(); ++r) {
            const auto& idx = st.prefix_rel[r]->index_for(st.prefix_order[r]);
            Tuple key(st.prefix_len[r]);
            for (size_t j = 0; j < key.size(); ++j) key[j] = binding[st.prefix_order[r][j]];
            auto [lo, hi] = idx.prefix_range(key);
            if (lo == hi) return false;
        }
        for (const Fd* fd : st.check_udfs) {
            std::vector<std::string> args;
            for (int lv : fd->lhs.members()) args.push_back(db.token(lv, binding[lv]));
            Value v = db.intern(fd->rhs.members()[0], db.udfs.eval(fd->udf, args));
            if (binding[fd->rhs.members()[0]] != v) return false;
        }
        return true;
    };

    size_t depth = 0;
    candidates_for(0);
    while (true) {
        if (cursor[depth] >= cands[depth].size()) {
            cursor[depth] = 0;
            if (depth == 0) break;
            --depth;
            ++cursor[depth];
            continue;
        }
        binding[plan.order[depth]] = cands[depth][cursor[depth]];
        if (++steps > budget)
            throw OracleOverflow("oracle budget exhausted (" + std::to_string(budget) + " steps)");
        if (!consistent(depth)) {
            ++cursor[depth];
            continue;
        }
        if (depth + 1 == plan.order.size()) {
            Tuple t(k);
            for (int v = 0; v < k; ++v) t[v] = binding[v];
            out.push_back(std::move(t));
            ++cursor[depth];
        } else {
            ++depth;
            cursor[depth] = 0;
            candidates_for(depth);
        }
    }

    std::vector<int> all_vars(k);
    for (int v = 0; v < k; ++v) all_vars[v] = v;
    return {Relation(all_vars, std::move(out)), steps};
}

bool oracle_self_check(const Query& q, const Database& db, const Relation& out) {
    for (auto& r : q.relations) {
        const Relation& rel = db.relations.at(r.name);
        std::vector<int> schema_vars;
        for (auto& a : r.attrs) schema_vars.push_back(q.var_index(a));
        Relation proj = out.project(schema_vars);
        for (auto& t : proj.tuples())
            if (!rel.contains(t)) return false;
    }
    for (auto& fd : q.fds) {
        if (fd.provenance == FdProvenance::Udf) {
            int rv = fd.rhs.members()[0];
            for (auto& t : out.tuples()) {
                std::vector<std::string> args;
                for (int lv : fd.lhs.members()) args.push_back(db.token(lv, t[lv]));
                if (db.token(rv, t[rv]) != db.udfs.eval(fd.udf, args)) return false;
            }
        } else if (!fd.abstract_only) {
            std::vector<int> order = fd.lhs.members();
            size_t nl = order.size();
            for (int v : fd.rhs.members())
                if (!fd.lhs.test(v)) order.push_back(v);
            Relation proj = out.project(order);
            for (size_t i = 1; i < proj.tuples().size(); ++i)
                if (std::equal(proj.tuples()[i - 1].begin(), proj.tuples()[i - 1].begin() + nl,
                               proj.tuples()[i].begin()))
                    return false;
        }
    }
    return true;
}

}  // namespace latjoin

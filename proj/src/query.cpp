#include "latjoin/query.hpp"

#include <set>

namespace latjoin {

void Query::validate() const {
    if ((int)vars.size() > kMaxVars)
        throw ValidationError("too many variables (cap " + std::to_string(kMaxVars) + ")");
    {
        std::set<std::string> seen;
        for (auto& v : vars)
            if (!seen.insert(v).second) throw ValidationError("duplicate variable: " + v);
    }
    std::set<std::string> rel_names;
    for (auto& r : relations) {
        if (!rel_names.insert(r.name).second)
            throw ValidationError("duplicate relation name: " + r.name);
        if (r.attrs.empty()) throw ValidationError("relation with empty schema: " + r.name);
        if (r.cardinality < 0) throw ValidationError("negative cardinality: " + r.name);
        std::set<std::string> seen;
        for (auto& a : r.attrs) {
            var_index(a);  // throws on unknown
            if (!seen.insert(a).second)
                throw ValidationError("duplicate attribute in " + r.name + ": " + a);
        }
    }
    for (auto& fd : fds) {
        if (fd.rhs.empty()) throw ValidationError("fd with empty rhs");
        if (fd.provenance == FdProvenance::Guarded && !fd.abstract_only) {
            const auto& g = relation(fd.guard);
            if (!fd.lhs.subset_of(g.attr_set) || !fd.rhs.subset_of(g.attr_set))
                throw ValidationError("fd not contained in its guard " + fd.guard);
        }
        if (fd.provenance == FdProvenance::Udf && fd.rhs.count() != 1)
            throw ValidationError("UDF-backed fd must have a single rhs attribute");
    }
    for (auto& db : degree_bounds) {
        if (!db.sub.subset_of(db.sup) || db.sub == db.sup)
            throw ValidationError("degree bound requires X strictly contained in Y");
        if (db.bound < 1) throw ValidationError("degree bound must be >= 1");
    }
}

Query make_query(std::vector<std::string> vars,
                 std::vector<std::pair<std::string, std::vector<std::string>>> rels,
                 std::vector<std::tuple<std::vector<std::string>, std::vector<std::string>, std::string>> fds) {
    Query q;
    q.vars = std::move(vars);
    for (auto& [name, attrs] : rels) {
        RelationDecl r;
        r.name = name;
        r.attrs = attrs;
        r.attr_set = q.attr_set(attrs);
        q.relations.push_back(std::move(r));
    }
    for (auto& [lhs, rhs, how] : fds) {
        Fd fd;
        fd.lhs = q.attr_set(lhs);
        fd.rhs = q.attr_set(rhs);
        if (how.empty()) {
            fd.provenance = FdProvenance::Guarded;
            fd.abstract_only = true;
        } else if (how.substr(0, 6) == "guard:") {
            fd.provenance = FdProvenance::Guarded;
            fd.guard = how.substr(6);
        } else if (how.substr(0, 4) == "udf:") {
            fd.provenance = FdProvenance::Udf;
            fd.udf = how.substr(4);
        } else {
            throw ValidationError("fd provenance must be 'guard:<rel>' or 'udf:<name>'");
        }
        q.fds.push_back(fd);
    }
    q.validate();
    return q;
}

}  // namespace latjoin

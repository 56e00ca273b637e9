#pragma once
// Query model: variables, relations with cardinalities, functional
// dependencies (guarded by a relation or backed by a UDF), and optional
// degree bounds.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "latjoin/attrset.hpp"
#include "latjoin/rational.hpp"

namespace latjoin {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RelationDecl {
    std::string name;
    std::vector<std::string> attrs;  // declared order, used for TSV I/O
    AttrSet attr_set;
    Int cardinality = 0;             // 0 = unknown until data load
    std::string file;                // optional data source
};

enum class FdProvenance { Guarded, Udf };

struct Fd {
    AttrSet lhs;
    AttrSet rhs;
    FdProvenance provenance;
    std::string guard;     // relation name when guarded
    std::string udf;       // registry name when UDF-backed (single rhs attr)
    bool abstract_only = false;  // declared without guard/udf: bound analyses only
};

struct DegreeBound {
    AttrSet sub;    // X
    AttrSet sup;    // Y, X strictly contained in Y
    Int bound = 1;  // max |sigma_{X=v}(R)| over v
};

struct Query {
    std::vector<std::string> vars;
    std::vector<RelationDecl> relations;
    std::vector<Fd> fds;
    std::vector<DegreeBound> degree_bounds;

    int num_vars() const { return (int)vars.size(); }
    AttrSet all_vars() const { return AttrSet::full(num_vars()); }

    int var_index(const std::string& name) const {
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return (int)i;
        throw ValidationError("unknown attribute name: " + name);
    }

    AttrSet attr_set(const std::vector<std::string>& names) const {
        AttrSet s;
        for (auto& n : names) s.set(var_index(n));
        return s;
    }

    const RelationDecl& relation(const std::string& name) const {
        for (auto& r : relations)
            if (r.name == name) return r;
        throw ValidationError("unknown relation: " + name);
    }

    // FD closure: least fixpoint of applying every fd whose lhs is contained.
    AttrSet closure(AttrSet attrs) const {
        AttrSet cur = attrs;
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto& fd : fds) {
                if (fd.lhs.subset_of(cur) && !fd.rhs.subset_of(cur)) {
                    cur = cur | fd.rhs;
                    changed = true;
                }
            }
        }
        return cur;
    }

    // Structural checks from the type invariants.
    void validate() const;
};

// Simple query builders used by tests and fixtures.
Query make_query(std::vector<std::string> vars,
                 std::vector<std::pair<std::string, std::vector<std::string>>> rels,
                 std::vector<std::tuple<std::vector<std::string>, std::vector<std::string>, std::string>> fds = {});

}  // namespace latjoin

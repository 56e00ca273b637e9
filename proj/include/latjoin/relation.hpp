#pragma once
// Relation storage and operators: interned values, sorted-array tries built
// lazily per attribute order, projections, lookup joins, semi-joins, degree
// counting, UDF evaluation, and the expansion procedure.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "latjoin/query.hpp"

namespace latjoin {

using Value = int32_t;                // interned token id (per variable)
using Tuple = std::vector<Value>;

// Dense token ids per variable, shared across all relations of a database.
struct Interner {
    std::vector<std::string> tokens;
    std::map<std::string, Value> ids;

    Value intern(const std::string& tok) {
        auto [it, fresh] = ids.try_emplace(tok, (Value)tokens.size());
        if (fresh) tokens.push_back(tok);
        return it->second;
    }
    const std::string& token(Value v) const { return tokens[v]; }
    std::optional<Value> find(const std::string& tok) const {
        auto it = ids.find(tok);
        if (it == ids.end()) return std::nullopt;
        return it->second;
    }
};

// Counts the index work an executor performs; shared by all run modes.
struct CostCounter {
    uint64_t index_probes = 0;
    uint64_t tuples_emitted = 0;
    uint64_t expansion_steps = 0;
    uint64_t total() const { return index_probes + tuples_emitted + expansion_steps; }
};

class Relation {
  public:
    Relation() = default;
    Relation(std::vector<int> schema, std::vector<Tuple> tuples);

    const std::vector<int>& schema() const { return schema_; }       // variable indices
    const std::vector<Tuple>& tuples() const { return tuples_; }     // sorted, deduped
    size_t size() const { return tuples_.size(); }
    int arity() const { return (int)schema_.size(); }
    AttrSet attr_set() const;
    int col_of(int var) const;  // -1 when absent

    bool contains(const Tuple& t) const;

    // Index for a prefix order: rows of the projection onto `order`, sorted
    // lexicographically and deduplicated.  Cached per order.
    struct Index {
        std::vector<int> order;          // variable indices
        std::vector<Tuple> rows;
        // [lo, hi) of rows matching the given prefix; one binary search
        std::pair<size_t, size_t> prefix_range(const Tuple& prefix) const;
    };
    const Index& index_for(const std::vector<int>& order) const;

    // |sigma_{z_attrs = v}(rel)|; 0 for absent v.
    Int degree(const std::vector<int>& z_vars, const Tuple& v) const;
    // max over v in the projection onto z_vars (1 when the relation is empty
    // is not meaningful, so returns 0 then).
    Int max_degree(const std::vector<int>& z_vars) const;

    Relation project(const std::vector<int>& vars) const;
    // natural join where `other` is functional on the shared attributes is
    // not assumed; generic nested-loop-with-index join
    Relation join(const Relation& other, CostCounter* cost = nullptr) const;
    Relation semijoin(const Relation& other, CostCounter* cost = nullptr) const;
    Relation unite(const Relation& other) const;  // same schema

  private:
    std::vector<int> schema_;
    std::vector<Tuple> tuples_;
    mutable std::map<std::vector<int>, std::unique_ptr<Index>> indexes_;
};

// Deterministic total functions over tuples; each returns one value.
struct Udf {
    enum Kind { Concat, SumMod, Proj, Const, Table };
    Kind kind = Concat;
    Int mod = 0;                     // SumMod
    int proj_index = 0;              // Proj
    std::string const_value;         // Const
    // Table: key token-tuples -> value token (loaded from TSV)
    std::map<std::vector<std::string>, std::string> table;
};

struct UdfRegistry {
    std::map<std::string, Udf> udfs;

    bool has(const std::string& name) const { return udfs.count(name) > 0; }
    // Evaluate on token strings; throws on a table miss.
    std::string eval(const std::string& name, const std::vector<std::string>& args) const;
};

struct Database {
    std::map<std::string, Relation> relations;
    UdfRegistry udfs;
    // per query variable; append-only, also grown when UDFs mint new tokens
    mutable std::vector<Interner> interners;

    Value intern(int var, const std::string& tok) const { return interners[var].intern(tok); }
    const std::string& token(int var, Value v) const { return interners[var].token(v); }
};

struct UnexpandableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validate that every guarded FD holds in its guard relation; load error if not.
void validate_guarded_fds(const Query& q, const Database& db);

// Expansion: fill the attributes of closure(schema) by repeated FD
// application (guard lookup joins or UDF evaluation).  Tuples that
// contradict a guard or a UDF on attributes already present are dropped.
// Throws UnexpandableError naming the FD when a needed FD has neither a
// usable guard nor a UDF.
Relation expand(const Relation& rel, const Database& db, const Query& q,
                CostCounter* cost = nullptr);

// Load/save TSV with a header row of attribute names.
Relation load_tsv(const std::string& path, const Query& q, Database& db,
                  const std::vector<std::string>& expect_attrs);
void save_tsv(const std::string& path, const Relation& rel, const Query& q,
              const Database& db);

// Load all relation files referenced by the query (resolving relative paths
// against base_dir), then validate guards.
Database load_database(const Query& q, const std::string& base_dir);

}  // namespace latjoin

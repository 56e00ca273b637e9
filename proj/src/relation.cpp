#include "latjoin/relation.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace latjoin {

Relation::Relation(std::vector<int> schema, std::vector<Tuple> tuples)
    : schema_(std::move(schema)), tuples_(std::move(tuples)) {
    for (auto& t : tuples_)
        if (t.size() != schema_.size()) throw std::invalid_argument("tuple arity mismatch");
    std::sort(tuples_.begin(), tuples_.end());
    tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
}

AttrSet Relation::attr_set() const {
    AttrSet s;
    for (int v : schema_) s.set(v);
    return s;
}

int Relation::col_of(int var) const {
    for (size_t i = 0; i < schema_.size(); ++i)
        if (schema_[i] == var) return (int)i;
    return -1;
}

bool Relation::contains(const Tuple& t) const {
    return std::binary_search(tuples_.begin(), tuples_.end(), t);
}

std::pair<size_t, size_t> Relation::Index::prefix_range(const Tuple& prefix) const {
    auto lo = std::lower_bound(rows.begin(), rows.end(), prefix,
                               [&](const Tuple& row, const Tuple& p) {
                                   for (size_t i = 0; i < p.size(); ++i) {
                                       if (row[i] != p[i]) return row[i] < p[i];
                                   }
                                   return false;  // row prefix == p
                               });
    auto hi = std::upper_bound(lo, rows.end(), prefix,
                               [&](const Tuple& p, const Tuple& row) {
                                   for (size_t i = 0; i < p.size(); ++i) {
                                       if (row[i] != p[i]) return p[i] < row[i];
                                   }
                                   return false;
                               });
    return {(size_t)(lo - rows.begin()), (size_t)(hi - rows.begin())};
}

const Relation::Index& Relation::index_for(const std::vector<int>& order) const {
    auto it = indexes_.find(order);
    if (it != indexes_.end()) return *it->second;
    auto idx = std::make_unique<Index>();
    idx->order = order;
    std::vector<int> cols;
    for (int v : order) {
        int c = col_of(v);
        if (c < 0) throw std::invalid_argument("index order var not in schema");
        cols.push_back(c);
    }
    idx->rows.reserve(tuples_.size());
    for (auto& t : tuples_) {
        Tuple r(cols.size());
        for (size_t i = 0; i < cols.size(); ++i) r[i] = t[cols[i]];
        idx->rows.push_back(std::move(r));
    }
    std::sort(idx->rows.begin(), idx->rows.end());
    idx->rows.erase(std::unique(idx->rows.begin(), idx->rows.end()), idx->rows.end());
    auto [pos, _] = indexes_.emplace(order, std::move(idx));
    return *pos->second;
}

Int Relation::degree(const std::vector<int>& z_vars, const Tuple& v) const {
    if (v.size() != z_vars.size()) throw std::invalid_argument("degree: tuple arity mismatch");
    if (z_vars.empty()) return Int(size());
    std::vector<int> order = z_vars;
    for (int var : schema_)
        if (std::find(z_vars.begin(), z_vars.end(), var) == z_vars.end()) order.push_back(var);
    const Index& idx = index_for(order);
    auto [lo, hi] = idx.prefix_range(v);
    return Int(hi - lo);
}

Int Relation::max_degree(const std::vector<int>& z_vars) const {
    if (tuples_.empty()) return 0;
    if (z_vars.empty()) return Int(size());
    std::vector<int> order = z_vars;
    for (int var : schema_)
        if (std::find(z_vars.begin(), z_vars.end(), var) == z_vars.end()) order.push_back(var);
    const Index& idx = index_for(order);
    size_t best = 0, i = 0;
    size_t k = z_vars.size();
    while (i < idx.rows.size()) {
        size_t j = i + 1;
        while (j < idx.rows.size() &&
               std::equal(idx.rows[i].begin(), idx.rows[i].begin() + k, idx.rows[j].begin()))
            ++j;
        best = std::max(best, j - i);
        i = j;
    }
    return Int(best);
}

Relation Relation::project(const std::vector<int>& vars) const {
    std::vector<int> cols;
    for (int v : vars) {
        int c = col_of(v);
        if (c < 0) throw std::invalid_argument("project: var not in schema");
        cols.push_back(c);
    }
    std::vector<Tuple> out;
    out.reserve(tuples_.size());
    for (auto& t : tuples_) {
        Tuple r(cols.size());
        for (size_t i = 0; i < cols.size(); ++i) r[i] = t[cols[i]];
        out.push_back(std::move(r));
    }
    return Relation(vars, std::move(out));
}

Relation Relation::join(const Relation& other, CostCounter* cost) const {
    std::vector<int> shared, extra;
    for (int v : other.schema_)
        (col_of(v) >= 0 ? shared : extra).push_back(v);
    std::vector<int> order = shared;
    order.insert(order.end(), extra.begin(), extra.end());
    const Index& idx = other.index_for(order);
    std::vector<int> out_schema = schema_;
    out_schema.insert(out_schema.end(), extra.begin(), extra.end());
    std::vector<Tuple> out;
    std::vector<int> shared_cols;
    for (int v : shared) shared_cols.push_back(col_of(v));
    for (auto& t : tuples_) {
        Tuple key(shared.size());
        for (size_t i = 0; i < shared.size(); ++i) key[i] = t[shared_cols[i]];
        auto [lo, hi] = idx.prefix_range(key);
        if (cost) cost->index_probes += 1;
        for (size_t r = lo; r < hi; ++r) {
            Tuple row = t;
            row.insert(row.end(), idx.rows[r].begin() + shared.size(), idx.rows[r].end());
            if (cost) cost->tuples_emitted += 1;
            out.push_back(std::move(row));
        }
    }
    return Relation(out_schema, std::move(out));
}

Relation Relation::semijoin(const Relation& other, CostCounter* cost) const {
    std::vector<int> shared;
    for (int v : other.schema_)
        if (col_of(v) >= 0) shared.push_back(v);
    const Index& idx = other.index_for(shared.empty() ? other.schema_ : shared);
    std::vector<int> shared_cols;
    for (int v : shared) shared_cols.push_back(col_of(v));
    std::vector<Tuple> out;
    for (auto& t : tuples_) {
        if (shared.empty()) {
            if (other.size() > 0) out.push_back(t);
            continue;
        }
        Tuple key(shared.size());
        for (size_t i = 0; i < shared.size(); ++i) key[i] = t[shared_cols[i]];
        auto [lo, hi] = idx.prefix_range(key);
        if (cost) cost->index_probes += 1;
        if (lo < hi) out.push_back(t);
    }
    return Relation(schema_, std::move(out));
}

Relation Relation::unite(const Relation& other) const {
    if (schema_ != other.schema_) {
        // align column order to this relation's schema
        Relation aligned = other.project(schema_);
        std::vector<Tuple> all = tuples_;
        all.insert(all.end(), aligned.tuples().begin(), aligned.tuples().end());
        return Relation(schema_, std::move(all));
    }
    std::vector<Tuple> all = tuples_;
    all.insert(all.end(), other.tuples_.begin(), other.tuples_.end());
    return Relation(schema_, std::move(all));
}

std::string UdfRegistry::eval(const std::string& name, const std::vector<std::string>& args) const {
    auto it = udfs.find(name);
    if (it == udfs.end()) throw std::runtime_error("unknown UDF: " + name);
    const Udf& u = it->second;
    switch (u.kind) {
        case Udf::Concat: {
            std::string s;
            for (size_t i = 0; i < args.size(); ++i) {
                if (i) s += "_";
                s += args[i];
            }
            return s;
        }
        case Udf::SumMod: {
            Int s = 0;
            for (auto& a : args) s += Int(a);
            s %= u.mod;
            if (s < 0) s += u.mod;
            return s.str();
        }
        case Udf::Proj:
            if (u.proj_index < 0 || u.proj_index >= (int)args.size())
                throw std::runtime_error("UDF " + name + ": projection index out of range");
            return args[u.proj_index];
        case Udf::Const:
            return u.const_value;
        case Udf::Table: {
            auto hit = u.table.find(args);
            if (hit == u.table.end()) {
                std::string key;
                for (auto& a : args) key += a + " ";
                throw std::runtime_error("UDF " + name + ": no entry for (" + key + ")");
            }
            return hit->second;
        }
    }
    throw std::logic_error("unreachable");
}

void validate_guarded_fds(const Query& q, const Database& db) {
    for (auto& fd : q.fds) {
        if (fd.provenance != FdProvenance::Guarded || fd.abstract_only) continue;
        auto it = db.relations.find(fd.guard);
        if (it == db.relations.end()) continue;  // guard not loaded: bound-only use
        const Relation& g = it->second;
        std::vector<int> lhs = fd.lhs.members();
        std::vector<int> order = lhs;
        for (int v : fd.rhs.members())
            if (!fd.lhs.test(v)) order.push_back(v);
        const auto& idx = g.index_for(order);
        for (size_t i = 1; i < idx.rows.size(); ++i)
            if (std::equal(idx.rows[i - 1].begin(), idx.rows[i - 1].begin() + lhs.size(),
                           idx.rows[i].begin()))
                throw ValidationError("guarded fd violated in relation " + fd.guard);
    }
}

namespace {

// One FD application step over a set of tuples with schema `vars`.
// Returns false if the fd cannot be applied (no guard data / no udf).
bool apply_fd(const Fd& fd, const Query& q, const Database& db, std::vector<int>& vars,
              std::vector<Tuple>& tuples, CostCounter* cost, std::string* why_not) {
    std::vector<int> lhs = fd.lhs.members();
    std::vector<int> add;
    for (int v : fd.rhs.members()) {
        bool have = std::find(vars.begin(), vars.end(), v) != vars.end();
        if (!have) add.push_back(v);
    }
    std::vector<int> lhs_cols;
    for (int v : lhs) lhs_cols.push_back((int)(std::find(vars.begin(), vars.end(), v) - vars.begin()));

    if (fd.provenance == FdProvenance::Udf) {
        if (!db.udfs.has(fd.udf)) {
            if (why_not) *why_not = "udf " + fd.udf + " not registered";
            return false;
        }
        int rhs_var = fd.rhs.members()[0];
        bool have_rhs = add.empty();
        int rhs_col = have_rhs
                          ? (int)(std::find(vars.begin(), vars.end(), rhs_var) - vars.begin())
                          : -1;
        std::vector<Tuple> out;
        out.reserve(tuples.size());
        for (auto& t : tuples) {
            std::vector<std::string> args;
            for (int c : lhs_cols) args.push_back(db.token(vars[c], t[c]));
            std::string v = db.udfs.eval(fd.udf, args);
            if (cost) cost->expansion_steps += 1;
            Value id = db.intern(rhs_var, v);
            if (have_rhs) {
                if (t[rhs_col] == id) out.push_back(t);  // verify, drop on mismatch
            } else {
                Tuple r = t;
                r.push_back(id);
                out.push_back(std::move(r));
            }
        }
        if (!add.empty()) vars.push_back(fd.rhs.members()[0]);
        tuples = std::move(out);
        return true;
    }

    // guarded: lookup join with the guard's projection onto lhs + rhs
    auto it = db.relations.find(fd.guard);
    if (it == db.relations.end()) {
        if (why_not) *why_not = "guard " + fd.guard + " has no data";
        return false;
    }
    (void)q;
    const Relation& g = it->second;
    std::vector<int> probe_order = lhs;
    std::vector<int> fill;  // rhs attrs in guard order appended
    for (int v : fd.rhs.members())
        if (!fd.lhs.test(v)) fill.push_back(v);
    probe_order.insert(probe_order.end(), fill.begin(), fill.end());
    const auto& idx = g.index_for(probe_order);
    // columns of already-present rhs attrs, for verification
    std::vector<std::pair<int, int>> verify_cols;  // (idx col, tuple col)
    std::vector<int> new_fill;
    for (size_t i = 0; i < fill.size(); ++i) {
        auto pos = std::find(vars.begin(), vars.end(), fill[i]);
        if (pos != vars.end())
            verify_cols.push_back({(int)(lhs.size() + i), (int)(pos - vars.begin())});
        else
            new_fill.push_back((int)(lhs.size() + i));
    }
    std::vector<Tuple> out;
    out.reserve(tuples.size());
    for (auto& t : tuples) {
        Tuple key(lhs.size());
        for (size_t i = 0; i < lhs.size(); ++i) key[i] = t[lhs_cols[i]];
        auto [lo, hi] = idx.prefix_range(key);
        if (cost) cost->index_probes += 1;
        if (lo == hi) continue;  // no guard match: tuple cannot be in Q
        // guard is functional on lhs, so all rows in [lo,hi) agree on rhs
        const Tuple& row = idx.rows[lo];
        bool ok = true;
        for (auto& [ic, tc] : verify_cols) ok &= (row[ic] == t[tc]);
        if (!ok) continue;
        Tuple r = t;
        for (int ic : new_fill) r.push_back(row[ic]);
        out.push_back(std::move(r));
    }
    for (size_t i = 0; i < fill.size(); ++i) {
        bool is_new = false;
        for (int ic : new_fill) is_new |= (ic == (int)(lhs.size() + i));
        if (is_new) vars.push_back(fill[i]);
    }
    tuples = std::move(out);
    return true;
}

}  // namespace

Relation expand(const Relation& rel, const Database& db, const Query& q, CostCounter* cost) {
    AttrSet have = rel.attr_set();
    AttrSet target = q.closure(have);
    std::vector<int> vars = rel.schema();
    std::vector<Tuple> tuples = rel.tuples();

    // repeatedly apply fds until the schema is closed; also verify fds whose
    // rhs is already present (those drop violating tuples)
    bool progress = true;
    std::vector<bool> verified(q.fds.size(), false);
    while (progress) {
        progress = false;
        for (size_t f = 0; f < q.fds.size(); ++f) {
            const Fd& fd = q.fds[f];
            if (!fd.lhs.subset_of(AttrSet(have))) continue;
            bool needs_fill = !fd.rhs.subset_of(have);
            if (!needs_fill && verified[f]) continue;
            std::string why;
            if (!apply_fd(fd, q, db, vars, tuples, cost, &why)) {
                if (needs_fill)
                    throw UnexpandableError("cannot expand: fd " + attrs_str(fd.lhs, q.vars) +
                                            " -> " + attrs_str(fd.rhs, q.vars) + " (" + why + ")");
                continue;  // unverifiable but already present: accept as-is
            }
            verified[f] = true;
            if (needs_fill) {
                have = have | fd.rhs;
                progress = true;
            }
        }
    }
    if (have != target)
        throw std::logic_error("expansion did not reach the closure");
    return Relation(vars, std::move(tuples));
}

Relation load_tsv(const std::string& path, const Query& q, Database& db,
                  const std::vector<std::string>& expect_attrs) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open data file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty data file: " + path);
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        std::string tok;
        while (std::getline(hs, tok, '\t')) header.push_back(tok);
    }
    if (!expect_attrs.empty() && header != expect_attrs)
        throw ValidationError("header of " + path + " does not match the declared schema");
    std::vector<int> schema;
    for (auto& h : header) schema.push_back(q.var_index(h));
    std::vector<Tuple> tuples;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        Tuple t;
        size_t col = 0;
        while (std::getline(ls, tok, '\t')) {
            if (col >= schema.size())
                throw ValidationError(path + ":" + std::to_string(lineno) + ": too many fields");
            t.push_back(db.intern(schema[col], tok));
            ++col;
        }
        if (col != schema.size())
            throw ValidationError(path + ":" + std::to_string(lineno) + ": too few fields");
        tuples.push_back(std::move(t));
    }
    return Relation(schema, std::move(tuples));
}

void save_tsv(const std::string& path, const Relation& rel, const Query& q, const Database& db) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (size_t i = 0; i < rel.schema().size(); ++i)
        out << (i ? "\t" : "") << q.vars[rel.schema()[i]];
    out << "\n";
    for (auto& t : rel.tuples()) {
        for (size_t i = 0; i < t.size(); ++i)
            out << (i ? "\t" : "") << db.token(rel.schema()[i], t[i]);
        out << "\n";
    }
}

Database load_database(const Query& q, const std::string& base_dir) {
    Database db;
    db.interners.resize(q.num_vars());
    namespace fs = std::filesystem;
    for (auto& r : q.relations) {
        if (r.file.empty()) continue;
        fs::path p = fs::path(r.file).is_absolute() ? fs::path(r.file) : fs::path(base_dir) / r.file;
        db.relations[r.name] = load_tsv(p.string(), q, db, r.attrs);
    }
    validate_guarded_fds(q, db);
    return db;
}

}  // namespace latjoin

#include "latjoin/lattice.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>
#include <stdexcept>

namespace latjoin {

namespace {

// Every closed set is reachable from closure(empty) by repeatedly adding one
// variable and closing again, so a BFS enumerates the whole closure system
// without touching all 2^k subsets.
std::vector<AttrSet> enumerate_closed_sets(const Query& q) {
    std::set<uint32_t> seen;
    std::deque<AttrSet> work;
    AttrSet bottom = q.closure(AttrSet());
    seen.insert(bottom.bits);
    work.push_back(bottom);
    int k = q.num_vars();
    while (!work.empty()) {
        AttrSet cur = work.front();
        work.pop_front();
        for (int i = 0; i < k; ++i) {
            if (cur.test(i)) continue;
            AttrSet next = cur;
            next.set(i);
            next = q.closure(next);
            if (seen.insert(next.bits).second) work.push_back(next);
        }
    }
    std::vector<AttrSet> out;
    out.reserve(seen.size());
    for (uint32_t b : seen) out.push_back(AttrSet(b));
    std::sort(out.begin(), out.end());
    return out;
}

void assemble(Lattice& lat, const Query& q) {
    int n = lat.size();
    lat.rebuild_index();
    lat.hat0 = 0;
    lat.hat1 = n - 1;
    if (lat.elements[lat.hat1] != AttrSet::full((int)lat.var_names.size()))
        throw std::logic_error("lattice top is not the full variable set");

    lat.meet_table.assign(n, std::vector<ElemId>(n, -1));
    lat.join_table.assign(n, std::vector<ElemId>(n, -1));
    for (ElemId a = 0; a < n; ++a) {
        for (ElemId b = a; b < n; ++b) {
            AttrSet m = lat.elements[a] & lat.elements[b];
            ElemId mid = lat.id_of(m);
            if (mid < 0) throw std::logic_error("closed sets not closed under intersection");
            lat.meet_table[a][b] = lat.meet_table[b][a] = mid;
            AttrSet u = q.closure(lat.elements[a] | lat.elements[b]);
            ElemId uid = lat.id_of(u);
            if (uid < 0) throw std::logic_error("join fell outside the lattice");
            lat.join_table[a][b] = lat.join_table[b][a] = uid;
        }
    }

    lat.covers_up.assign(n, {});
    lat.covers_down.assign(n, {});
    for (ElemId a = 0; a < n; ++a) {
        for (ElemId b = 0; b < n; ++b) {
            if (!lat.less(a, b)) continue;
            bool covered = true;
            for (ElemId c = 0; c < n && covered; ++c)
                if (c != a && c != b && lat.less(a, c) && lat.less(c, b)) covered = false;
            if (covered) {
                lat.covers.push_back({a, b});
                lat.covers_up[a].push_back(b);
                lat.covers_down[b].push_back(a);
            }
        }
    }
    for (ElemId x = 0; x < n; ++x) {
        if (x != lat.hat0 && lat.is_join_irreducible(x)) lat.join_irreducibles.push_back(x);
        if (x != lat.hat1 && lat.is_meet_irreducible(x)) lat.meet_irreducibles.push_back(x);
        if (x != lat.hat0 && lat.covers_down[x].size() == 1 && lat.covers_down[x][0] == lat.hat0)
            lat.atoms.push_back(x);
        if (x != lat.hat1 && lat.covers_up[x].size() == 1 && lat.covers_up[x][0] == lat.hat1)
            lat.coatoms.push_back(x);
    }
}

}  // namespace

Lattice build_lattice(const Query& q) {
    q.validate();
    Lattice lat;
    lat.var_names = q.vars;
    lat.elements = enumerate_closed_sets(q);
    assemble(lat, q);
    // x is redundant iff x is implied by the rest of its own closure
    for (int i = 0; i < q.num_vars(); ++i) {
        AttrSet cl = q.closure(AttrSet::single(i));
        cl.reset(i);
        if (q.closure(cl).test(i)) lat.redundant_vars.set(i);
    }
    return lat;
}

Lattice boolean_algebra(const std::vector<std::string>& names) {
    Query q;
    q.vars = names;
    Lattice lat;
    lat.var_names = names;
    int k = (int)names.size();
    if (k > kMaxVars) throw ValidationError("too many variables for a Boolean algebra");
    for (uint32_t b = 0; b < (uint32_t(1) << k); ++b) lat.elements.push_back(AttrSet(b));
    std::sort(lat.elements.begin(), lat.elements.end());
    assemble(lat, q);
    return lat;
}

void Lattice::rebuild_index() {
    index_.clear();
    for (ElemId i = 0; i < size(); ++i) index_[elements[i].bits] = i;
}

std::string Lattice::name(ElemId x) const {
    return attrs_str(elements[x], var_names);
}

int Lattice::coatom_count_c(ElemId z, const std::vector<ElemId>& s) const {
    int c = 0;
    for (ElemId u : s)
        if (leq(u, z)) ++c;
    return c;
}

bool Lattice::is_distributive() const {
    int n = size();
    for (ElemId x = 0; x < n; ++x)
        for (ElemId y = 0; y < n; ++y)
            for (ElemId z = y + 1; z < n; ++z)
                if (meet(x, join(y, z)) != join(meet(x, y), meet(x, z))) return false;
    return true;
}

std::optional<std::array<ElemId, 5>> Lattice::find_m3_with_shared_top() const {
    // X, Y, Z pairwise incomparable with all pairwise meets equal to some U
    // and all pairwise joins equal to the lattice top.
    for (ElemId x = 0; x < size(); ++x) {
        for (ElemId y = x + 1; y < size(); ++y) {
            if (!incomparable(x, y) || join(x, y) != hat1) continue;
            ElemId u = meet(x, y);
            for (ElemId z = y + 1; z < size(); ++z) {
                if (!incomparable(x, z) || !incomparable(y, z)) continue;
                if (join(x, z) != hat1 || join(y, z) != hat1) continue;
                if (meet(x, z) != u || meet(y, z) != u) continue;
                return std::array<ElemId, 5>{u, x, y, z, hat1};
            }
        }
    }
    return std::nullopt;
}

MoebiusTable::MoebiusTable(const Lattice& lat) : lat_(lat) {
    int n = lat.size();
    table_.assign(n, std::vector<Int>(n, 0));
    // mu(x, y) = -sum_{x <= z < y} mu(x, z); elements are sorted by size so a
    // forward sweep visits z before y.
    for (ElemId x = 0; x < n; ++x) {
        table_[x][x] = 1;
        for (ElemId y = x + 1; y < n; ++y) {
            if (!lat.leq(x, y)) continue;
            Int s = 0;
            for (ElemId z = x; z < y; ++z)
                if (lat.leq(x, z) && lat.leq(z, y)) s += table_[x][z];
            table_[x][y] = -s;
        }
    }
}

const Int& MoebiusTable::mu(ElemId x, ElemId y) const {
    if (!lat_.leq(x, y)) throw std::invalid_argument("mu(x,y) requires x <= y");
    return table_[x][y];
}

bool Embedding::is_valid() const {
    const Lattice& s = *source;
    const Lattice& t = *target;
    if (map[s.hat1] != t.hat1) return false;
    if (map[s.hat0] != t.hat0) return false;  // empty join
    for (ElemId a = 0; a < s.size(); ++a)
        for (ElemId b = a; b < s.size(); ++b)
            if (map[s.join(a, b)] != t.join(map[a], map[b])) return false;
    // adjunction
    for (ElemId x = 0; x < s.size(); ++x)
        for (ElemId y = 0; y < t.size(); ++y)
            if (t.leq(map[x], y) != s.leq(x, right_adjoint[y])) return false;
    return true;
}

Embedding make_embedding(const Lattice& src, const Lattice& tgt, std::vector<ElemId> map) {
    Embedding e;
    e.source = &src;
    e.target = &tgt;
    e.map = std::move(map);
    e.right_adjoint.assign(tgt.size(), -1);
    for (ElemId y = 0; y < tgt.size(); ++y) {
        ElemId r = src.hat0;
        bool ok = tgt.leq(e.map[src.hat0], y);
        for (ElemId x = 0; x < src.size(); ++x)
            if (tgt.leq(e.map[x], y)) {
                r = ok ? src.join(r, x) : x;
                ok = true;
            }
        if (!ok) throw std::invalid_argument("embedding has no right adjoint: f(0) above some target");
        e.right_adjoint[y] = r;
    }
    return e;
}

}  // namespace latjoin

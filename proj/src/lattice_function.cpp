#include "latjoin/lattice_function.hpp"

#include <stdexcept>

namespace latjoin {

LatticeFunc mobius_invert(const Lattice& lat, const LatticeFunc& h) {
    int n = lat.size();
    if ((int)h.values.size() != n) throw std::invalid_argument("function size mismatch");
    LatticeFunc g = LatticeFunc::zero(lat);
    // top-down: g(X) = h(X) - sum_{Y > X} g(Y)
    for (ElemId x = n - 1; x >= 0; --x) {
        Rat s = h[x];
        for (ElemId y = x + 1; y < n; ++y)
            if (lat.leq(x, y)) s -= g[y];
        g[x] = s;
    }
    return g;
}

LatticeFunc mobius_apply(const Lattice& lat, const LatticeFunc& g) {
    int n = lat.size();
    LatticeFunc h = LatticeFunc::zero(lat);
    for (ElemId x = 0; x < n; ++x) {
        Rat s = 0;
        for (ElemId y = x; y < n; ++y)
            if (lat.leq(x, y)) s += g[y];
        h[x] = s;
    }
    return h;
}

LatticeFunc step_function(const Lattice& lat, ElemId z) {
    LatticeFunc h = LatticeFunc::zero(lat);
    for (ElemId x = 0; x < lat.size(); ++x)
        if (!lat.leq(x, z)) h[x] = 1;
    return h;
}

bool is_nonnegative(const LatticeFunc& h) {
    for (auto& v : h.values)
        if (v < 0) return false;
    return true;
}

bool is_monotone(const Lattice& lat, const LatticeFunc& h) {
    for (auto& [lo, hi] : lat.covers)
        if (h[lo] > h[hi]) return false;
    return true;
}

bool is_submodular(const Lattice& lat, const LatticeFunc& h) {
    int n = lat.size();
    for (ElemId x = 0; x < n; ++x)
        for (ElemId y = x + 1; y < n; ++y) {
            if (!lat.incomparable(x, y)) continue;
            if (h[lat.meet(x, y)] + h[lat.join(x, y)] > h[x] + h[y]) return false;
        }
    return true;
}

bool is_polymatroid(const Lattice& lat, const LatticeFunc& h) {
    return h[lat.hat0] == 0 && is_nonnegative(h) && is_monotone(lat, h) && is_submodular(lat, h);
}

NormalDecomposition normal_decomposition(const Lattice& lat, const LatticeFunc& h) {
    NormalDecomposition d;
    d.g = mobius_invert(lat, h);
    d.normal = h[lat.hat0] == 0;
    for (ElemId x = 0; x < lat.size() && d.normal; ++x)
        if (x != lat.hat1 && d.g[x] > 0) d.normal = false;
    if (d.normal) {
        d.step_coeffs.assign(lat.size(), Rat(0));
        for (ElemId x = 0; x < lat.size(); ++x)
            if (x != lat.hat1) d.step_coeffs[x] = -d.g[x];
    }
    return d;
}

bool is_strictly_normal(const Lattice& lat, const NormalDecomposition& d) {
    if (!d.normal) return false;
    for (ElemId x = 0; x < lat.size(); ++x) {
        if (x == lat.hat1 || d.g[x] == 0) continue;
        bool coatom = false;
        for (ElemId z : lat.coatoms) coatom |= (z == x);
        if (!coatom) return false;
    }
    return true;
}

CanonicalEmbedding canonical_embedding(const Lattice& lat, const LatticeFunc& h) {
    auto d = normal_decomposition(lat, h);
    if (!d.normal) throw std::invalid_argument("canonical embedding requires a normal function");
    for (auto& v : h.values)
        if (!rat_is_integer(v)) throw std::invalid_argument("canonical embedding requires integral values");
    CanonicalEmbedding ce;
    std::vector<std::vector<int>> atoms_of(lat.size());  // per Z
    for (ElemId z = 0; z < lat.size(); ++z) {
        if (z == lat.hat1) continue;
        Int a = rat_num(d.step_coeffs[z]);
        for (Int i = 0; i < a; ++i) {
            atoms_of[z].push_back(ce.num_atoms);
            ce.atom_group.push_back({z, (int)i});
            ++ce.num_atoms;
        }
    }
    ce.image.assign(lat.size(), {});
    for (ElemId x = 0; x < lat.size(); ++x)
        for (ElemId z = 0; z < lat.size(); ++z)
            if (z != lat.hat1 && !lat.leq(x, z))
                for (int a : atoms_of[z]) ce.image[x].push_back(a);
    for (auto& v : ce.image) std::sort(v.begin(), v.end());
    return ce;
}

Embedding to_lattice_embedding(const Lattice& lat, const CanonicalEmbedding& ce,
                               Lattice& target_storage) {
    if (ce.num_atoms > kMaxVars)
        throw std::invalid_argument("canonical Boolean algebra too large to materialize as a lattice");
    std::vector<std::string> names;
    for (int i = 0; i < ce.num_atoms; ++i) names.push_back("c" + std::to_string(i));
    target_storage = boolean_algebra(names);
    std::vector<ElemId> map(lat.size());
    for (ElemId x = 0; x < lat.size(); ++x) {
        AttrSet s;
        for (int a : ce.image[x]) s.set(a);
        map[x] = target_storage.id_of(s);
    }
    return make_embedding(lat, target_storage, std::move(map));
}

LatticeFunc pull_back(const Embedding& f, const LatticeFunc& h_target) {
    LatticeFunc h = LatticeFunc::zero(*f.source);
    for (ElemId x = 0; x < f.source->size(); ++x) h[x] = h_target[f.map[x]];
    return h;
}

}  // namespace latjoin

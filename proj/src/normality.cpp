#include "latjoin/normality.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "latjoin/generators.hpp"

namespace latjoin {

Hypergraph coatomic_hypergraph(const Lattice& lat, const std::vector<ElemId>& rel_elems,
                               const std::vector<std::string>& rel_names) {
    Hypergraph hg;
    hg.vertices = lat.coatoms;
    for (size_t j = 0; j < rel_elems.size(); ++j) {
        hg.edge_names.push_back(rel_names.empty() ? "e" + std::to_string(j) : rel_names[j]);
        std::vector<int> e;
        for (size_t v = 0; v < hg.vertices.size(); ++v)
            if (!lat.leq(rel_elems[j], hg.vertices[v])) e.push_back((int)v);
        hg.edges.push_back(std::move(e));
    }
    return hg;
}

EdgeCover fractional_edge_cover(const Hypergraph& hg, const std::vector<Rat>& edge_cost) {
    EdgeCover out;
    std::vector<int> cover_count(hg.vertices.size(), 0);
    for (auto& e : hg.edges)
        for (int v : e) cover_count[v] += 1;
    for (size_t v = 0; v < hg.vertices.size(); ++v)
        if (cover_count[v] == 0) {
            out.finite = false;
            return out;
        }
    LinearProgram lp;
    lp.maximize = false;
    for (size_t j = 0; j < hg.edges.size(); ++j) lp.add_var("w_" + hg.edge_names[j], edge_cost[j]);
    for (size_t v = 0; v < hg.vertices.size(); ++v) {
        int r = lp.add_row('G', Rat(1), "cover_v" + std::to_string(v));
        for (size_t j = 0; j < hg.edges.size(); ++j)
            if (std::find(hg.edges[j].begin(), hg.edges[j].end(), (int)v) != hg.edges[j].end())
                lp.add_term(r, (int)j, 1);
    }
    LpSolution sol = solve_exact_min_support(lp);
    if (sol.status != LpSolution::Optimal) throw std::logic_error("cover LP not optimal");
    out.rho = sol.objective;
    out.weights = sol.primal;
    return out;
}

namespace {

// Solve the square rational system rows x = rhs by Gaussian elimination.
// Returns nullopt when singular.
std::optional<std::vector<Rat>> solve_square(std::vector<std::vector<Rat>> a,
                                             std::vector<Rat> b) {
    int n = (int)b.size();
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != 0) { piv = r; break; }
        if (piv < 0) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        Rat p = a[col][col];
        for (int j = col; j < n; ++j) a[col][j] /= p;
        b[col] /= p;
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rat f = a[r][col];
            for (int j = col; j < n; ++j) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    return b;
}

}  // namespace

std::vector<std::vector<Rat>> cover_polytope_vertices(const Hypergraph& hg, int max_dimension_cap) {
    int m = (int)hg.edges.size();
    int nv = (int)hg.vertices.size();
    if (nv > max_dimension_cap)
        throw std::runtime_error("co-atom count exceeds the vertex-enumeration cap");
    // constraint rows: nv cover rows (>= 1) and m nonnegativity rows (>= 0)
    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> rhs;
    for (int v = 0; v < nv; ++v) {
        std::vector<Rat> row(m, Rat(0));
        for (int j = 0; j < m; ++j)
            if (std::find(hg.edges[j].begin(), hg.edges[j].end(), v) != hg.edges[j].end())
                row[j] = 1;
        rows.push_back(std::move(row));
        rhs.push_back(1);
    }
    for (int j = 0; j < m; ++j) {
        std::vector<Rat> row(m, Rat(0));
        row[j] = 1;
        rows.push_back(std::move(row));
        rhs.push_back(0);
    }
    int total = (int)rows.size();
    std::set<std::vector<Rat>> found;
    // choose m tight rows, solve, keep feasible solutions
    std::vector<int> pick(m);
    std::function<void(int, int)> rec = [&](int idx, int start) {
        if (idx == m) {
            std::vector<std::vector<Rat>> a;
            std::vector<Rat> b;
            for (int i = 0; i < m; ++i) {
                a.push_back(rows[pick[i]]);
                b.push_back(rhs[pick[i]]);
            }
            auto sol = solve_square(std::move(a), std::move(b));
            if (!sol) return;
            for (auto& x : *sol)
                if (x < 0) return;
            for (int v = 0; v < nv; ++v) {
                Rat s = 0;
                for (int j = 0; j < m; ++j) s += rows[v][j] * (*sol)[j];
                if (s < 1) return;
            }
            found.insert(*sol);
            return;
        }
        for (int r = start; r < total; ++r) {
            pick[idx] = r;
            rec(idx + 1, r + 1);
        }
    };
    rec(0, 0);
    return {found.begin(), found.end()};
}

NormalLatticeVerdict is_normal_lattice(const Lattice& lat, const std::vector<ElemId>& rel_elems,
                                       const std::vector<std::string>& rel_names, int coatom_cap) {
    Hypergraph hg = coatomic_hypergraph(lat, rel_elems, rel_names);
    auto vertices = cover_polytope_vertices(hg, coatom_cap);
    NormalLatticeVerdict verdict;
    for (auto& w : vertices) {
        OutputInequality oi = check_output_inequality(lat, rel_elems, w);
        if (!oi.valid) {
            verdict.normal = false;
            verdict.witness_w = w;
            // find a violating nonnegative submodular h: maximize the gap
            // h(1) - sum w_j h(R_j) under submodularity with h <= 1 to keep
            // the LP bounded; any positive gap scales freely
            LinearProgram lp;
            lp.maximize = true;
            for (ElemId x = 0; x < lat.size(); ++x) {
                Rat obj = x == lat.hat1 ? Rat(1) : Rat(0);
                for (size_t j = 0; j < rel_elems.size(); ++j)
                    if (rel_elems[j] == x) obj -= w[j];
                lp.add_var("h_" + lat.name(x), obj);
                int r = lp.add_row('L', Rat(1), "box_" + lat.name(x));
                lp.add_term(r, x, 1);
            }
            for (ElemId x = 0; x < lat.size(); ++x)
                for (ElemId y = x + 1; y < lat.size(); ++y) {
                    if (!lat.incomparable(x, y)) continue;
                    int r = lp.add_row('L', Rat(0), "sm");
                    lp.add_term(r, lat.meet(x, y), 1);
                    lp.add_term(r, lat.join(x, y), 1);
                    lp.add_term(r, x, -1);
                    lp.add_term(r, y, -1);
                }
            LpSolution sol = solve_exact(lp);
            if (sol.status != LpSolution::Optimal || sol.objective <= 0)
                throw std::logic_error("inequality invalid but no witness found");
            LatticeFunc hraw;
            hraw.values = sol.primal;
            verdict.witness_h = lovasz_monotonize(lat, hraw);
            return verdict;
        }
    }
    verdict.normal = true;
    verdict.checked_vertices = std::move(vertices);
    return verdict;
}

Materialization materialize_normal(const Query& q, const Lattice& lat, const LatticeFunc& h) {
    Materialization mat;
    mat.embedding = canonical_embedding(lat, h);  // throws on non-normal/non-integral
    if (mat.embedding.num_atoms > 30)
        throw std::runtime_error("canonical instance too large to enumerate");
    std::vector<Int> atom_domain(mat.embedding.num_atoms, 2);
    GeneratedInstance inst = gen_quasi_product(q, lat, mat.embedding, atom_domain);
    for (int v = 0; v < q.num_vars(); ++v) mat.full_schema.push_back(v);
    mat.full_instance = std::move(inst.full_instance);
    mat.database = std::move(inst.database);
    return mat;
}

}  // namespace latjoin

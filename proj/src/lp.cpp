#include "latjoin/lp.hpp"

#include <sstream>
#include <stdexcept>

namespace latjoin {

std::string LinearProgram::dump() const {
    std::ostringstream os;
    auto sum = [&](const std::vector<std::pair<int, Rat>>& terms) {
        std::string s;
        for (auto& [v, c] : terms) {
            if (!s.empty()) s += c >= 0 ? " + " : " - ";
            else if (c < 0) s += "- ";
            Rat a = c < 0 ? Rat(-c) : c;
            if (a != 1) s += rat_str(a) + " ";
            s += var_names[v];
        }
        return s.empty() ? "0" : s;
    };
    os << (maximize ? "Maximize" : "Minimize") << "\n obj: ";
    std::vector<std::pair<int, Rat>> ob;
    for (int v = 0; v < num_vars(); ++v)
        if (objective[v] != 0) ob.push_back({v, objective[v]});
    os << sum(ob) << "\nSubject To\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << " " << (r.name.empty() ? "r" + std::to_string(i) : r.name) << ": " << sum(r.terms);
        os << (r.rel == 'L' ? " <= " : r.rel == 'G' ? " >= " : " = ") << rat_str(r.rhs) << "\n";
    }
    os << "Bounds\n";
    for (auto& n : var_names) os << " 0 <= " << n << "\n";
    os << "End\n";
    return os.str();
}

namespace {

// Tableau layout: columns [0, n) structural, [n, n+m) slack (one per row, 0
// coefficient for == rows), [n+m, n+2m) artificial, last column = rhs.
// Row signs are normalized so rhs >= 0.
struct Tableau {
    int n = 0, m = 0;
    std::vector<std::vector<Rat>> a;  // m rows
    std::vector<Rat> cost;            // phase-2 reduced-cost row, size cols+1
    std::vector<int> basis;           // per row, column index
    std::vector<int> row_sign;        // +1 or -1 (normalization applied)
    int cols = 0;

    int slack_col(int i) const { return n + i; }
    int art_col(int i) const { return n + m + i; }
};

// One pivot on (row r, col c).
void pivot(Tableau& t, int r, int c) {
    auto& ar = t.a[r];
    Rat p = ar[c];
    for (int j = 0; j <= t.cols; ++j) ar[j] /= p;
    for (int i = 0; i < t.m; ++i) {
        if (i == r) continue;
        Rat f = t.a[i][c];
        if (f == 0) continue;
        auto& ai = t.a[i];
        for (int j = 0; j <= t.cols; ++j) ai[j] -= f * ar[j];
    }
    Rat f = t.cost[c];
    if (f != 0)
        for (int j = 0; j <= t.cols; ++j) t.cost[j] -= f * ar[j];
    t.basis[r] = c;
}

// Maximize -cost over allowed columns.  Returns false on unboundedness.
bool run_simplex(Tableau& t, const std::vector<bool>& allowed) {
    long degenerate_streak = 0;
    const long bland_after = 4L * (t.m + t.cols);
    for (long iter = 0;; ++iter) {
        (void)iter;
        bool bland = degenerate_streak > bland_after;
        int enter = -1;
        if (bland) {
            for (int j = 0; j < t.cols; ++j)
                if (allowed[j] && t.cost[j] < 0) { enter = j; break; }
        } else {
            const Rat* best = nullptr;
            for (int j = 0; j < t.cols; ++j)
                if (allowed[j] && t.cost[j] < 0 && (!best || t.cost[j] < *best)) {
                    best = &t.cost[j];
                    enter = j;
                }
        }
        if (enter < 0) return true;  // optimal
        int leave = -1;
        Rat best_ratio;
        for (int i = 0; i < t.m; ++i) {
            if (t.a[i][enter] <= 0) continue;
            Rat ratio = t.a[i][t.cols] / t.a[i][enter];
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio && t.basis[i] < t.basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) return false;  // unbounded
        degenerate_streak = (best_ratio == 0) ? degenerate_streak + 1 : 0;
        pivot(t, leave, enter);
    }
}

}  // namespace

LpSolution solve_exact(const LinearProgram& lp) {
    int n = lp.num_vars();
    int m = (int)lp.rows.size();
    Tableau t;
    t.n = n;
    t.m = m;
    t.cols = n + 2 * m;
    t.a.assign(m, std::vector<Rat>(t.cols + 1, Rat(0)));
    t.row_sign.assign(m, 1);
    t.basis.assign(m, -1);

    bool need_phase1 = false;
    std::vector<bool> is_artificial_basis(m, false);
    for (int i = 0; i < m; ++i) {
        const LpRow& row = lp.rows[i];
        for (auto& [v, c] : row.terms) t.a[i][v] += c;
        t.a[i][t.cols] = row.rhs;
        if (row.rel == 'L') t.a[i][t.slack_col(i)] = 1;
        else if (row.rel == 'G') t.a[i][t.slack_col(i)] = -1;
        // normalize rhs >= 0
        if (t.a[i][t.cols] < 0) {
            t.row_sign[i] = -1;
            for (int j = 0; j <= t.cols; ++j) t.a[i][j] = -t.a[i][j];
        }
        // every row carries an artificial column (the dual reads off it);
        // it becomes basic only when the slack cannot
        t.a[i][t.art_col(i)] = 1;
        if (t.a[i][t.slack_col(i)] == 1) {
            t.basis[i] = t.slack_col(i);
        } else {
            t.basis[i] = t.art_col(i);
            is_artificial_basis[i] = true;
            need_phase1 = true;
        }
    }

    // artificial columns that were never made basic exist only so the dual can
    // be read off B^-1 e_i; they must never enter the basis
    std::vector<bool> allowed(t.cols, true);
    for (int i = 0; i < m; ++i)
        if (!is_artificial_basis[i]) allowed[t.art_col(i)] = false;
    LpSolution sol;

    if (need_phase1) {
        // minimize the sum of the basic artificials == maximize its negation;
        // cost[j] = (1 if j is a counted artificial) - sum of their rows
        t.cost.assign(t.cols + 1, Rat(0));
        for (int i = 0; i < m; ++i) {
            if (!is_artificial_basis[i]) continue;
            t.cost[t.art_col(i)] += 1;
            for (int j = 0; j <= t.cols; ++j) t.cost[j] -= t.a[i][j];
        }
        if (!run_simplex(t, allowed)) throw std::logic_error("phase 1 unbounded");
        if (t.cost[t.cols] != 0) {  // -objective stored at rhs: sum artificials > 0
            sol.status = LpSolution::Infeasible;
            return sol;
        }
        // drive remaining artificials out of the basis where possible
        for (int i = 0; i < m; ++i) {
            if (t.basis[i] < n + m) continue;
            int enter = -1;
            for (int j = 0; j < n + m && enter < 0; ++j)
                if (t.a[i][j] != 0) enter = j;
            if (enter >= 0) pivot(t, i, enter);
            // else: redundant row, harmless to leave the zero artificial basic
        }
    }

    // phase 2: forbid artificial columns from entering
    for (int i = 0; i < m; ++i) allowed[t.art_col(i)] = false;
    t.cost.assign(t.cols + 1, Rat(0));
    for (int v = 0; v < n; ++v) t.cost[v] = lp.maximize ? -lp.objective[v] : lp.objective[v];
    // fold out basic columns
    for (int i = 0; i < m; ++i) {
        Rat f = t.cost[t.basis[i]];
        if (f == 0) continue;
        for (int j = 0; j <= t.cols; ++j) t.cost[j] -= f * t.a[i][j];
    }
    if (!run_simplex(t, allowed)) {
        sol.status = LpSolution::Unbounded;
        return sol;
    }

    sol.status = LpSolution::Optimal;
    sol.primal.assign(n, Rat(0));
    for (int i = 0; i < m; ++i)
        if (t.basis[i] < n) sol.primal[t.basis[i]] = t.a[i][t.cols];
    sol.objective = 0;
    for (int v = 0; v < n; ++v) sol.objective += lp.objective[v] * sol.primal[v];

    // duals: y^T = c_B B^{-1}; the artificial column for row i carries B^{-1}
    // e_i, so its reduced cost is y_i (artificials have zero phase-2 cost).
    sol.row_duals.assign(m, Rat(0));
    for (int i = 0; i < m; ++i) {
        Rat y = t.cost[t.art_col(i)];
        if (!lp.maximize) y = -y;
        sol.row_duals[i] = Rat(t.row_sign[i]) * y;
    }
    return sol;
}

LpSolution solve_exact_min_support(const LinearProgram& lp) {
    LpSolution first = solve_exact(lp);
    if (first.status != LpSolution::Optimal) return first;
    LinearProgram second = lp;
    int pin = second.add_row('E', first.objective, "pin_objective");
    for (int v = 0; v < lp.num_vars(); ++v)
        if (lp.objective[v] != 0) second.add_term(pin, v, lp.objective[v]);
    second.maximize = false;
    for (int v = 0; v < lp.num_vars(); ++v) second.objective[v] = 1;
    LpSolution refined = solve_exact(second);
    if (refined.status != LpSolution::Optimal) return first;  // numerical safety net
    LpSolution out = first;
    out.primal = refined.primal;
    return out;
}

}  // namespace latjoin

#pragma once
// Dense exact-rational simplex with Bland's anti-cycling rule as a fallback
// from Dantzig pricing.  All variables are nonnegative; rows may be <=, >=,
// or ==.  Small LPs only; exactness beats speed here.

#include <string>
#include <vector>

#include "latjoin/rational.hpp"

namespace latjoin {

struct LpRow {
    std::vector<std::pair<int, Rat>> terms;  // (variable, coefficient)
    char rel = 'L';                          // 'L' <=, 'G' >=, 'E' ==
    Rat rhs;
    std::string name;
};

struct LinearProgram {
    bool maximize = true;
    std::vector<std::string> var_names;
    std::vector<Rat> objective;  // per variable
    std::vector<LpRow> rows;

    int add_var(const std::string& name, const Rat& obj = Rat(0)) {
        var_names.push_back(name);
        objective.push_back(obj);
        return (int)var_names.size() - 1;
    }
    int add_row(char rel, const Rat& rhs, const std::string& name = "") {
        rows.push_back({{}, rel, rhs, name});
        return (int)rows.size() - 1;
    }
    void add_term(int row, int var, const Rat& coef) {
        if (coef != 0) rows[row].terms.push_back({var, coef});
    }
    int num_vars() const { return (int)var_names.size(); }

    // CPLEX-style LP format text, for --lp-dump and external cross-checks.
    std::string dump() const;
};

struct LpSolution {
    enum Status { Optimal, Unbounded, Infeasible } status = Infeasible;
    Rat objective;
    std::vector<Rat> primal;     // per variable
    std::vector<Rat> row_duals;  // per row; y >= 0 for <= rows (max form),
                                 // y <= 0 stored sign-adjusted for >= rows
    bool optimal() const { return status == Optimal; }
};

LpSolution solve_exact(const LinearProgram& lp);

// Re-solve with the objective pinned to its optimal value and total variable
// mass minimized; breaks degenerate ties toward small-support solutions.
LpSolution solve_exact_min_support(const LinearProgram& lp);

}  // namespace latjoin

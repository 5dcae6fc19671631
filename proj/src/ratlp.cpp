#include "packlab/ratlp.hpp"

#include <algorithm>

#include "packlab/error.hpp"

namespace packlab {

namespace {

enum class VarStatus { Basic, AtLower, AtUpper };

// Dense tableau simplex over exact rationals. Variables are
// [structural | slack | artificial]; all lower bounds are 0.
class Simplex {
public:
    explicit Simplex(const LinearProgram& lp) : m_(lp.num_rows()), n_(lp.num_vars()) {
        size_t cols = n_ + m_;
        // Artificial columns only for rows with negative rhs.
        for (size_t i = 0; i < m_; ++i)
            if (lp.rhs[i] < 0) artificial_.push_back(i);
        cols += artificial_.size();

        tableau_.assign(m_, std::vector<Rat>(cols, Rat(0)));
        beta_ = lp.rhs;
        upper_.assign(cols, std::nullopt);
        status_.assign(cols, VarStatus::AtLower);
        basis_.assign(m_, 0);

        for (size_t i = 0; i < m_; ++i) {
            for (size_t j = 0; j < n_; ++j) tableau_[i][j] = lp.rows[i][j];
            tableau_[i][n_ + i] = 1;  // slack
        }
        for (size_t j = 0; j < n_; ++j) upper_[j] = lp.upper[j];

        for (size_t a = 0; a < artificial_.size(); ++a) {
            size_t i = artificial_[a];
            size_t col = n_ + m_ + a;
            // Negate the row so the artificial forms a proper unit basis column.
            for (auto& t : tableau_[i]) t = -t;
            beta_[i] = -beta_[i];
            tableau_[i][col] = 1;
            basis_[i] = col;
            status_[col] = VarStatus::Basic;
        }
        for (size_t i = 0; i < m_; ++i) {
            if (lp.rhs[i] >= 0) {
                basis_[i] = n_ + i;
                status_[n_ + i] = VarStatus::Basic;
            }
        }
    }

    // Returns false on unboundedness.
    bool optimize(const std::vector<Rat>& cost) {
        cost_ = cost;
        cost_.resize(upper_.size(), Rat(0));
        while (true) {
            std::vector<Rat> values = basic_values();
            std::vector<Rat> reduced = reduced_costs();

            // Bland: lowest-index nonbasic variable with favorable reduced cost.
            size_t enter = upper_.size();
            for (size_t j = 0; j < upper_.size(); ++j) {
                if (status_[j] == VarStatus::Basic) continue;
                if (status_[j] == VarStatus::AtLower && reduced[j] > 0) { enter = j; break; }
                if (status_[j] == VarStatus::AtUpper && reduced[j] < 0) { enter = j; break; }
            }
            if (enter == upper_.size()) return true;  // optimal

            int sigma = status_[enter] == VarStatus::AtLower ? 1 : -1;

            // Ratio test: keep every basic variable inside [0, u].
            std::optional<Rat> best_t;
            size_t leave_row = m_;  // m_ means bound flip
            size_t leave_var = enter;
            if (upper_[enter]) {
                best_t = *upper_[enter];
            }
            for (size_t i = 0; i < m_; ++i) {
                Rat g = Rat(sigma) * tableau_[i][enter];
                std::optional<Rat> t;
                if (g > 0) {
                    t = values[i] / g;
                } else if (g < 0 && upper_[basis_[i]]) {
                    t = (*upper_[basis_[i]] - values[i]) / (-g);
                }
                if (!t) continue;
                if (!best_t || *t < *best_t ||
                    (*t == *best_t && basis_[i] < leave_var)) {
                    best_t = t;
                    leave_row = i;
                    leave_var = basis_[i];
                }
            }
            if (!best_t) return false;  // unbounded direction

            Rat t = *best_t;
            if (leave_row == m_) {
                // Bound flip of the entering variable.
                status_[enter] = sigma > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
                continue;
            }

            // Leaving variable hits the bound it moved towards.
            Rat g = Rat(sigma) * tableau_[leave_row][enter];
            VarStatus leave_status = g > 0 ? VarStatus::AtLower : VarStatus::AtUpper;
            pivot(leave_row, enter);
            status_[leave_var] = leave_status;
            status_[enter] = VarStatus::Basic;
        }
    }

    // Pins all artificial variables to zero after phase 1.
    void pin_artificials() {
        for (size_t a = 0; a < artificial_.size(); ++a) {
            size_t col = n_ + m_ + a;
            upper_[col] = Rat(0);
            if (status_[col] == VarStatus::AtUpper) status_[col] = VarStatus::AtLower;
        }
    }

    std::vector<Rat> variable_values() const {
        std::vector<Rat> values = basic_values();
        std::vector<Rat> out(upper_.size(), Rat(0));
        for (size_t j = 0; j < upper_.size(); ++j)
            if (status_[j] == VarStatus::AtUpper) out[j] = *upper_[j];
        for (size_t i = 0; i < m_; ++i) out[basis_[i]] = values[i];
        return out;
    }

    std::vector<Rat> reduced_costs() const {
        std::vector<Rat> d = cost_;
        for (size_t i = 0; i < m_; ++i) {
            const Rat& cb = cost_[basis_[i]];
            if (cb == 0) continue;
            for (size_t j = 0; j < upper_.size(); ++j) d[j] -= cb * tableau_[i][j];
        }
        return d;
    }

    size_t slack_col(size_t row) const { return n_ + row; }
    VarStatus status(size_t j) const { return status_[j]; }

private:
    std::vector<Rat> basic_values() const {
        std::vector<Rat> v = beta_;
        for (size_t j = 0; j < upper_.size(); ++j) {
            if (status_[j] != VarStatus::AtUpper) continue;
            for (size_t i = 0; i < m_; ++i) v[i] -= tableau_[i][j] * *upper_[j];
        }
        return v;
    }

    void pivot(size_t r, size_t j) {
        Rat piv = tableau_[r][j];
        for (auto& t : tableau_[r]) t /= piv;
        beta_[r] /= piv;
        for (size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            Rat f = tableau_[i][j];
            if (f == 0) continue;
            for (size_t c = 0; c < upper_.size(); ++c) tableau_[i][c] -= f * tableau_[r][c];
            beta_[i] -= f * beta_[r];
        }
        basis_[r] = j;
    }

    size_t m_, n_;
    std::vector<std::vector<Rat>> tableau_;
    std::vector<Rat> beta_;
    std::vector<std::optional<Rat>> upper_;
    std::vector<VarStatus> status_;
    std::vector<size_t> basis_;
    std::vector<size_t> artificial_;
    std::vector<Rat> cost_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
    if (lp.rows.size() != lp.rhs.size() || lp.upper.size() != lp.num_vars())
        throw Error(ErrorCode::ParseError, "inconsistent LP dimensions");
    for (const auto& row : lp.rows)
        if (row.size() != lp.num_vars()) throw Error(ErrorCode::ParseError, "inconsistent LP row length");
    for (const auto& u : lp.upper)
        if (u && *u < 0) throw Error(ErrorCode::Infeasible, "negative upper bound");

    Simplex sx(lp);

    bool needs_phase1 = std::any_of(lp.rhs.begin(), lp.rhs.end(), [](const Rat& b) { return b < 0; });
    if (needs_phase1) {
        // Maximize minus the sum of artificials.
        std::vector<Rat> phase1(lp.num_vars() + lp.num_rows(), Rat(0));
        size_t art = 0;
        for (size_t i = 0; i < lp.num_rows(); ++i)
            if (lp.rhs[i] < 0) { phase1.push_back(Rat(-1)); ++art; }
        sx.optimize(phase1);
        std::vector<Rat> vals = sx.variable_values();
        Rat infeas = 0;
        for (size_t a = 0; a < art; ++a) infeas += vals[lp.num_vars() + lp.num_rows() + a];
        if (infeas != 0) throw Error(ErrorCode::Infeasible, "phase 1 optimum nonzero");
        sx.pin_artificials();
    }

    std::vector<Rat> cost = lp.objective;
    cost.resize(lp.num_vars() + lp.num_rows(), Rat(0));
    if (!sx.optimize(cost)) throw Error(ErrorCode::Unbounded, "unbounded direction found");

    std::vector<Rat> vals = sx.variable_values();
    std::vector<Rat> reduced = sx.reduced_costs();

    LpResult res;
    res.x.assign(vals.begin(), vals.begin() + lp.num_vars());
    res.objective = dot(lp.objective, res.x);
    res.duals.resize(lp.num_rows());
    res.tight_rows.resize(lp.num_rows());
    for (size_t i = 0; i < lp.num_rows(); ++i) {
        res.duals[i] = -reduced[sx.slack_col(i)];
        res.tight_rows[i] = vals[sx.slack_col(i)] == 0;
    }
    res.bound_duals.resize(lp.num_vars(), Rat(0));
    res.at_lower.resize(lp.num_vars());
    res.at_upper.resize(lp.num_vars());
    for (size_t j = 0; j < lp.num_vars(); ++j) {
        res.at_lower[j] = res.x[j] == 0;
        res.at_upper[j] = lp.upper[j] && res.x[j] == *lp.upper[j];
        if (res.at_upper[j] && reduced[j] > 0) res.bound_duals[j] = reduced[j];
    }
    return res;
}

Rat LpResult::dual_objective(const LinearProgram& lp) const {
    Rat s = dot(duals, lp.rhs);
    for (size_t j = 0; j < lp.num_vars(); ++j)
        if (bound_duals[j] != 0) s += bound_duals[j] * *lp.upper[j];
    return s;
}

size_t active_rank(const LinearProgram& lp, const LpResult& res) {
    std::vector<std::vector<Rat>> active;
    for (size_t i = 0; i < lp.num_rows(); ++i)
        if (res.tight_rows[i]) active.push_back(lp.rows[i]);
    for (size_t j = 0; j < lp.num_vars(); ++j) {
        if (res.at_lower[j] || res.at_upper[j]) {
            std::vector<Rat> e(lp.num_vars(), Rat(0));
            e[j] = 1;
            active.push_back(std::move(e));
        }
    }
    // Gaussian elimination over Q.
    size_t rank = 0;
    size_t n = lp.num_vars();
    for (size_t col = 0; col < n && rank < active.size(); ++col) {
        size_t piv = active.size();
        for (size_t r = rank; r < active.size(); ++r)
            if (active[r][col] != 0) { piv = r; break; }
        if (piv == active.size()) continue;
        std::swap(active[rank], active[piv]);
        for (size_t r = rank + 1; r < active.size(); ++r) {
            if (active[r][col] == 0) continue;
            Rat f = active[r][col] / active[rank][col];
            for (size_t c = col; c < n; ++c) active[r][c] -= f * active[rank][c];
        }
        ++rank;
    }
    return rank;
}

LinearProgram build_natural_relaxation(const Instance& inst,
                                       const std::optional<std::map<std::string, Rat>>& costs) {
    LinearProgram lp;
    std::vector<std::string> edge_ids;
    for (const auto& e : inst.edges()) edge_ids.push_back(e.id);
    std::sort(edge_ids.begin(), edge_ids.end());
    std::map<std::string, size_t> col;
    for (size_t j = 0; j < edge_ids.size(); ++j) {
        const Edge& e = inst.edge(edge_ids[j]);
        col[e.id] = j;
        lp.var_names.push_back(e.id);
        if (costs) {
            auto it = costs->find(e.id);
            lp.objective.push_back(it == costs->end() ? Rat(0) : it->second);
        } else {
            lp.objective.push_back(e.weight);
        }
        lp.upper.push_back(Rat(1));
    }
    std::vector<std::string> vertex_ids;
    for (const auto& v : inst.vertices()) vertex_ids.push_back(v.id);
    std::sort(vertex_ids.begin(), vertex_ids.end());
    for (const auto& vid : vertex_ids) {
        std::vector<Rat> row(edge_ids.size(), Rat(0));
        for (const auto& eid : inst.incident_edges(vid)) row[col[eid]] = inst.edge(eid).demand_at(vid);
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(inst.capacity(vid));
        lp.row_names.push_back(vid);
    }
    return lp;
}

FractionalSolution lp_solution_to_fractional(const LinearProgram& lp, const LpResult& res) {
    FractionalSolution x;
    for (size_t j = 0; j < lp.num_vars(); ++j)
        if (res.x[j] != 0) x.set(lp.var_names.at(j), res.x[j]);
    return x;
}

}  // namespace packlab

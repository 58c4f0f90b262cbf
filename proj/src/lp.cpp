#include "splab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace splab {

namespace {

constexpr double kPivotTol = 1e-7;
constexpr double kSmallPivot = 1e-3;
constexpr double kVerifyTol = 1e-7;
constexpr std::size_t kMaxAttempts = 3;
constexpr double kSingularTol = 1e-11;
constexpr std::size_t kStallLimit = 30;
constexpr int kScalingPasses = 4;

// Working form: structural columns 0..n-1, then one slack per row (column
// -e_i, bounds [0, inf) for >= rows and [0, 0] for = rows), then one
// artificial per row (column sign_i * e_i). Every row reads
//     a_i.x - s_i + sign_i * art_i = b_i.
class Simplex {
public:
    Simplex(const LpModel& model, const LpTolerances& tol) : model_(model), tol_(tol)
    {
        m_ = model.num_rows();
        n_ = model.num_cols();
        total_ = n_ + 2 * m_;
        cols_.assign(n_, {});
        rhs_.resize(m_);
        for (const auto& row : model.rows)
            for (const auto& [j, v] : row.coeffs) {
                if (j >= n_)
                    throw std::invalid_argument("LP row references a column out of range");
                if (!std::isfinite(v))
                    throw std::invalid_argument("LP coefficient is not finite");
            }
        compute_scaling();
        for (std::size_t i = 0; i < m_; ++i) {
            rhs_[i] = model.rows[i].rhs * row_scale_[i];
            for (const auto& [j, v] : model.rows[i].coeffs)
                if (v != 0.0)
                    cols_[j].push_back({i, v * row_scale_[i] * col_scale_[j]});
        }
        lo_.resize(total_);
        hi_.resize(total_);
        x_.assign(total_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            lo_[j] = model.lower[j] / col_scale_[j];
            hi_[j] = model.upper[j] / col_scale_[j];
            if (model.lower[j] > model.upper[j])
                infeasible_bounds_ = true;
            x_[j] = std::isfinite(lo_[j]) ? lo_[j] : (std::isfinite(hi_[j]) ? hi_[j] : 0.0);
        }
        for (std::size_t i = 0; i < m_; ++i) {
            lo_[n_ + i] = 0.0;
            hi_[n_ + i] = model.rows[i].sense == RowSense::Equal ? 0.0 : kInf;
            lo_[n_ + m_ + i] = 0.0;
            hi_[n_ + m_ + i] = kInf;
        }
        sign_.assign(m_, 1.0);
        head_.resize(m_);
        pos_.assign(total_, -1);
        binv_.assign(m_ * m_, 0.0);
    }

    LpSolution run()
    {
        LpSolution sol;
        if (infeasible_bounds_) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        for (std::size_t attempt = 0;; ++attempt) {
            sol = attempt_solve();
            if (sol.status != LpStatus::Optimal || basics_within_bounds())
                break;
            if (attempt + 1 >= kMaxAttempts)
                throw std::runtime_error("simplex: lost primal feasibility to roundoff");
            // Restart from the current nonbasic values with a fresh crash
            // basis, a strict ratio test and a refactor every iteration.
            refactor_every_ = 1;
            strict_ = true;
        }
        return sol;
    }

private:
    LpSolution attempt_solve()
    {
        LpSolution sol;
        for (std::size_t j = n_; j < total_; ++j) {
            x_[j] = 0.0;
            hi_[j] = j < n_ + m_ ? (model_.rows[j - n_].sense == RowSense::Equal ? 0.0 : kInf) : kInf;
        }
        for (std::size_t j = 0; j < n_; ++j)
            x_[j] = std::clamp(x_[j], lo_[j], hi_[j]);
        std::fill(pos_.begin(), pos_.end(), -1);
        sign_.assign(m_, 1.0);
        crash_basis();

        std::vector<double> cost(total_, 0.0);
        bool need_phase1 = false;
        for (std::size_t i = 0; i < m_; ++i) {
            if (head_[i] >= n_ + m_) {
                cost[head_[i]] = 1.0;
                need_phase1 = true;
            }
        }
        if (need_phase1) {
            iterate(cost);
            refactor();
            double infeasibility = 0.0;
            for (std::size_t i = 0; i < m_; ++i)
                infeasibility += std::max(0.0, x_[n_ + m_ + i]);
            if (infeasibility > tol_.feasibility) {
                sol.status = LpStatus::Infeasible;
                sol.iterations = iterations_;
                return sol;
            }
        }
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t a = n_ + m_ + i;
            hi_[a] = 0.0;
            if (pos_[a] < 0)
                x_[a] = 0.0;
        }

        std::fill(cost.begin(), cost.end(), 0.0);
        for (std::size_t j = 0; j < n_; ++j)
            cost[j] = model_.cost[j] * col_scale_[j];
        const bool bounded = iterate(cost);
        sol.iterations = iterations_;
        if (!bounded) {
            sol.status = LpStatus::Unbounded;
            return sol;
        }
        refactor();

        sol.status = LpStatus::Optimal;
        sol.primal.resize(n_);
        // Clamp roundoff outside finite bounds.
        for (std::size_t j = 0; j < n_; ++j)
            sol.primal[j] = std::clamp(x_[j] * col_scale_[j], model_.lower[j], model_.upper[j]);
        sol.objective = model_.objective_offset;
        for (std::size_t j = 0; j < n_; ++j)
            sol.objective += model_.cost[j] * sol.primal[j];
        sol.duals = duals(cost);
        for (std::size_t i = 0; i < m_; ++i)
            sol.duals[i] *= row_scale_[i];
        return sol;
    }

    bool basics_within_bounds() const
    {
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t b = head_[i];
            const double slack = kVerifyTol * std::max(1.0, std::abs(x_[b]));
            if (x_[b] < lo_[b] - slack || x_[b] > hi_[b] + slack)
                return false;
        }
        return true;
    }

    const LpModel& model_;
    const LpTolerances& tol_;
    std::size_t m_ = 0, n_ = 0, total_ = 0;
    std::vector<std::vector<std::pair<std::size_t, double>>> cols_;
    std::vector<double> rhs_, lo_, hi_, x_, sign_, row_scale_, col_scale_;
    std::size_t refactor_every_ = 0; // 0: use the tolerance setting
    bool strict_ = false;
    std::vector<std::size_t> head_;
    std::vector<std::ptrdiff_t> pos_;
    std::vector<double> binv_; // row-major m x m
    std::size_t iterations_ = 0;
    std::size_t since_refactor_ = 0;
    bool infeasible_bounds_ = false;

    // Geometric row and column equilibration, then rows to unit max-norm.
    // Bound-factor rows on skewed boxes otherwise mix magnitudes far apart.
    // Factors are powers of two so scaling adds no roundoff.
    void compute_scaling()
    {
        row_scale_.assign(m_, 1.0);
        col_scale_.assign(n_, 1.0);
        auto pow2 = [](double v) { return std::exp2(std::round(std::log2(v))); };
        for (int pass = 0; pass < kScalingPasses; ++pass) {
            for (std::size_t i = 0; i < m_; ++i) {
                double lo = kInf, hi = 0.0;
                for (const auto& [j, v] : model_.rows[i].coeffs)
                    if (v != 0.0) {
                        const double a = std::abs(v) * col_scale_[j];
                        lo = std::min(lo, a);
                        hi = std::max(hi, a);
                    }
                if (hi > 0.0)
                    row_scale_[i] = pow2(1.0 / std::sqrt(lo * hi));
            }
            std::vector<double> lo(n_, kInf), hi(n_, 0.0);
            for (std::size_t i = 0; i < m_; ++i)
                for (const auto& [j, v] : model_.rows[i].coeffs)
                    if (v != 0.0) {
                        const double a = std::abs(v) * row_scale_[i];
                        lo[j] = std::min(lo[j], a);
                        hi[j] = std::max(hi[j], a);
                    }
            for (std::size_t j = 0; j < n_; ++j)
                if (hi[j] > 0.0)
                    col_scale_[j] = pow2(1.0 / std::sqrt(lo[j] * hi[j]));
        }
        for (std::size_t i = 0; i < m_; ++i) {
            double hi = 0.0;
            for (const auto& [j, v] : model_.rows[i].coeffs)
                hi = std::max(hi, std::abs(v) * col_scale_[j]);
            if (hi > 0.0)
                row_scale_[i] = pow2(1.0 / hi);
        }
    }

    bool is_slack(std::size_t j) const { return j >= n_ && j < n_ + m_; }
    bool is_artificial(std::size_t j) const { return j >= n_ + m_; }

    // Scatter column j of the working matrix into a dense vector.
    void column(std::size_t j, std::vector<double>& out) const
    {
        std::fill(out.begin(), out.end(), 0.0);
        if (j < n_) {
            for (const auto& [i, v] : cols_[j])
                out[i] = v;
        } else if (is_slack(j)) {
            out[j - n_] = -1.0;
        } else {
            out[j - n_ - m_] = sign_[j - n_ - m_];
        }
    }

    double dot_column(const std::vector<double>& y, std::size_t j) const
    {
        if (j < n_) {
            double s = 0.0;
            for (const auto& [i, v] : cols_[j])
                s += y[i] * v;
            return s;
        }
        if (is_slack(j))
            return -y[j - n_];
        return sign_[j - n_ - m_] * y[j - n_ - m_];
    }

    // alpha = B^{-1} a_j
    void ftran(std::size_t j, std::vector<double>& alpha) const
    {
        std::fill(alpha.begin(), alpha.end(), 0.0);
        if (j < n_) {
            for (std::size_t i = 0; i < m_; ++i) {
                const double* row = &binv_[i * m_];
                double s = 0.0;
                for (const auto& [r, v] : cols_[j])
                    s += row[r] * v;
                alpha[i] = s;
            }
        } else {
            const std::size_t r = is_slack(j) ? j - n_ : j - n_ - m_;
            const double scale = is_slack(j) ? -1.0 : sign_[r];
            for (std::size_t i = 0; i < m_; ++i)
                alpha[i] = scale * binv_[i * m_ + r];
        }
    }

    // y = c_B^T B^{-1}
    void btran(const std::vector<double>& cost, std::vector<double>& y) const
    {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double c = cost[head_[i]];
            if (c == 0.0)
                continue;
            const double* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k)
                y[k] += c * row[k];
        }
    }

    // Slack basis where the row is already satisfied, artificial otherwise.
    void crash_basis()
    {
        std::vector<double> activity(m_, 0.0);
        for (std::size_t j = 0; j < n_; ++j)
            if (x_[j] != 0.0)
                for (const auto& [i, v] : cols_[j])
                    activity[i] += v * x_[j];
        std::fill(binv_.begin(), binv_.end(), 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double residual = rhs_[i] - activity[i];
            const bool ge = model_.rows[i].sense == RowSense::GreaterEqual;
            if (ge && residual <= 0.0) {
                head_[i] = n_ + i;
                x_[n_ + i] = -residual;
                binv_[i * m_ + i] = -1.0;
                hi_[n_ + m_ + i] = 0.0;
            } else {
                sign_[i] = residual >= 0.0 ? 1.0 : -1.0;
                head_[i] = n_ + m_ + i;
                x_[n_ + m_ + i] = std::abs(residual);
                binv_[i * m_ + i] = sign_[i];
            }
            pos_[head_[i]] = static_cast<std::ptrdiff_t>(i);
        }
    }

    void refactor()
    {
        if (m_ == 0)
            return;
        // Gauss-Jordan on [B | I] with partial pivoting.
        std::vector<double> a(m_ * m_, 0.0);
        std::vector<double> col(m_);
        for (std::size_t k = 0; k < m_; ++k) {
            column(head_[k], col);
            for (std::size_t i = 0; i < m_; ++i)
                a[i * m_ + k] = col[i];
        }
        std::vector<double>& inv = binv_;
        std::fill(inv.begin(), inv.end(), 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            inv[i * m_ + i] = 1.0;
        for (std::size_t k = 0; k < m_; ++k) {
            std::size_t p = k;
            double best = std::abs(a[k * m_ + k]);
            for (std::size_t i = k + 1; i < m_; ++i) {
                const double v = std::abs(a[i * m_ + k]);
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (best < kSingularTol)
                throw std::runtime_error("simplex: singular basis during refactorization");
            if (p != k) {
                for (std::size_t c = 0; c < m_; ++c) {
                    std::swap(a[p * m_ + c], a[k * m_ + c]);
                    std::swap(inv[p * m_ + c], inv[k * m_ + c]);
                }
            }
            const double piv = a[k * m_ + k];
            for (std::size_t c = 0; c < m_; ++c) {
                a[k * m_ + c] /= piv;
                inv[k * m_ + c] /= piv;
            }
            for (std::size_t i = 0; i < m_; ++i) {
                if (i == k)
                    continue;
                const double f = a[i * m_ + k];
                if (f == 0.0)
                    continue;
                for (std::size_t c = 0; c < m_; ++c) {
                    a[i * m_ + c] -= f * a[k * m_ + c];
                    inv[i * m_ + c] -= f * inv[k * m_ + c];
                }
            }
        }
        // Row permutations act on the right-hand side ordering, which is
        // the identity here because we eliminated [B | I] jointly; inv is
        // B^{-1} with rows indexed by basis position.
        recompute_basic_values();
        since_refactor_ = 0;
    }

    void recompute_basic_values()
    {
        std::vector<double> r = rhs_;
        std::vector<double> col(m_);
        for (std::size_t j = 0; j < total_; ++j) {
            if (pos_[j] >= 0 || x_[j] == 0.0)
                continue;
            if (j < n_) {
                for (const auto& [i, v] : cols_[j])
                    r[i] -= v * x_[j];
            } else if (is_slack(j)) {
                r[j - n_] += x_[j];
            } else {
                r[j - n_ - m_] -= sign_[j - n_ - m_] * x_[j];
            }
        }
        for (std::size_t i = 0; i < m_; ++i) {
            const double* row = &binv_[i * m_];
            double s = 0.0;
            for (std::size_t k = 0; k < m_; ++k)
                s += row[k] * r[k];
            x_[head_[i]] = s;
        }
    }

    // Returns false when the objective is unbounded below.
    bool iterate(const std::vector<double>& cost)
    {
        std::vector<double> y(m_), alpha(m_);
        std::size_t stall = 0;
        while (true) {
            if (iterations_ >= tol_.iteration_limit)
                throw LpIterationLimit("simplex: iteration limit of " + std::to_string(tol_.iteration_limit) +
                                       " exceeded");
            const bool bland = stall >= kStallLimit;
            btran(cost, y);

            std::size_t entering = total_;
            double best = 0.0;
            double entering_d = 0.0;
            for (std::size_t j = 0; j < total_; ++j) {
                if (pos_[j] >= 0 || lo_[j] == hi_[j])
                    continue;
                const double d = cost[j] - dot_column(y, j);
                const bool at_lower = x_[j] == lo_[j];
                const bool at_upper = x_[j] == hi_[j];
                bool eligible;
                if (at_lower)
                    eligible = d < -tol_.optimality;
                else if (at_upper)
                    eligible = d > tol_.optimality;
                else
                    eligible = std::abs(d) > tol_.optimality;
                if (!eligible)
                    continue;
                if (bland) {
                    entering = j;
                    entering_d = d;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    entering = j;
                    entering_d = d;
                }
            }
            if (entering == total_)
                return true;

            const double dir = entering_d < 0.0 ? 1.0 : -1.0;
            ftran(entering, alpha);

            // Harris two-pass ratio test; plain minimum ratio in Bland mode.
            // The Harris slack lets a leaving variable sit slightly past its
            // bound; snapping it back through a small pivot moves the other
            // basics by slack / pivot, so retries use the exact test.
            const double ftol = bland || strict_ ? 0.0 : tol_.feasibility;
            double theta_max = kInf;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = alpha[i] * dir;
                const std::size_t b = head_[i];
                if (a > kPivotTol && std::isfinite(lo_[b]))
                    theta_max = std::min(theta_max, (x_[b] - lo_[b] + ftol) / a);
                else if (a < -kPivotTol && std::isfinite(hi_[b]))
                    theta_max = std::min(theta_max, (hi_[b] - x_[b] + ftol) / -a);
            }
            // A basic variable already past its bound by more than ftol caps the step at zero.
            theta_max = std::max(theta_max, 0.0);
            // Distance to the opposite bound; nonbasic values may sit inside after a restart.
            const double flip = dir > 0 ? hi_[entering] - x_[entering] : x_[entering] - lo_[entering];
            if (!std::isfinite(theta_max) && !std::isfinite(flip))
                return false;

            std::size_t leave = m_;
            double step = kInf;
            double best_pivot = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = alpha[i] * dir;
                const std::size_t b = head_[i];
                double ratio;
                if (a > kPivotTol && std::isfinite(lo_[b]))
                    ratio = (x_[b] - lo_[b]) / a;
                else if (a < -kPivotTol && std::isfinite(hi_[b]))
                    ratio = (hi_[b] - x_[b]) / -a;
                else
                    continue;
                if (ratio > theta_max)
                    continue;
                ratio = std::max(ratio, 0.0);
                if (bland) {
                    if (ratio < step - 1e-12 || (ratio <= step + 1e-12 && leave < m_ && b < head_[leave])) {
                        step = ratio;
                        leave = i;
                    }
                } else if (std::abs(a) > best_pivot) {
                    best_pivot = std::abs(a);
                    leave = i;
                    step = ratio;
                }
            }
            if (leave == m_ && !std::isfinite(flip))
                throw std::runtime_error("simplex: ratio test found no blocking variable");

            ++iterations_;
            if (leave == m_ || flip < step) {
                // Bound flip of the entering variable.
                for (std::size_t i = 0; i < m_; ++i)
                    x_[head_[i]] -= alpha[i] * dir * flip;
                x_[entering] = dir > 0 ? hi_[entering] : lo_[entering];
                stall = 0;
                continue;
            }

            for (std::size_t i = 0; i < m_; ++i)
                x_[head_[i]] -= alpha[i] * dir * step;
            x_[entering] += dir * step;
            const std::size_t leaving = head_[leave];
            x_[leaving] = alpha[leave] * dir > 0 ? lo_[leaving] : hi_[leaving];
            pos_[leaving] = -1;
            head_[leave] = entering;
            pos_[entering] = static_cast<std::ptrdiff_t>(leave);

            const double piv = alpha[leave];
            double* prow = &binv_[leave * m_];
            for (std::size_t k = 0; k < m_; ++k)
                prow[k] /= piv;
            for (std::size_t i = 0; i < m_; ++i) {
                if (i == leave || alpha[i] == 0.0)
                    continue;
                const double f = alpha[i];
                double* row = &binv_[i * m_];
                for (std::size_t k = 0; k < m_; ++k)
                    row[k] -= f * prow[k];
            }

            stall = step < 1e-12 ? stall + 1 : 0;
            // A small pivot relative to the column makes the update inaccurate.
            double column_norm = 0.0;
            for (double a : alpha)
                column_norm = std::max(column_norm, std::abs(a));
            const std::size_t every = refactor_every_ ? refactor_every_ : tol_.refactor_interval;
            if (++since_refactor_ >= every || std::abs(piv) < kSmallPivot * column_norm)
                refactor();
        }
    }

    std::vector<double> duals(const std::vector<double>& cost) const
    {
        std::vector<double> y(m_);
        btran(cost, y);
        return y;
    }
};

} // namespace

LpSolution DenseSimplex::solve(const LpModel& model, const LpTolerances& tol) const
{
    if (model.lower.size() != model.num_cols() || model.upper.size() != model.num_cols())
        throw std::invalid_argument("LP bound vectors do not match the column count");
    if (model.num_cols() == 0)
        throw std::invalid_argument("LP has no columns");
    Simplex simplex(model, tol);
    return simplex.run();
}

LpSolution solve_lp(const LpModel& model, const LpTolerances& tol)
{
    static const DenseSimplex kernel;
    return kernel.solve(model, tol);
}

double primal_residual(const LpModel& model, const std::vector<double>& x)
{
    double worst = 0.0;
    for (std::size_t j = 0; j < model.num_cols(); ++j)
        worst = std::max({worst, model.lower[j] - x[j], x[j] - model.upper[j]});
    for (const auto& row : model.rows) {
        double a = 0.0;
        for (const auto& [j, v] : row.coeffs)
            a += v * x[j];
        const double viol = row.sense == RowSense::Equal ? std::abs(a - row.rhs) : row.rhs - a;
        worst = std::max(worst, viol);
    }
    return worst;
}

std::string lp_text(const LpModel& model, const std::vector<std::string>& column_names,
                    const std::vector<std::string>& row_names)
{
    auto col = [&](std::size_t j) {
        return j < column_names.size() ? column_names[j] : "c" + std::to_string(j);
    };
    auto term = [&](std::ostringstream& out, double v, std::size_t j, bool first) {
        if (v < 0)
            out << (first ? "-" : " - ");
        else if (!first)
            out << " + ";
        out << std::abs(v) << ' ' << col(j);
    };
    std::ostringstream out;
    out.precision(17);
    out << "Minimize\n obj:";
    bool first = true;
    for (std::size_t j = 0; j < model.num_cols(); ++j) {
        if (model.cost[j] == 0.0)
            continue;
        out << ' ';
        term(out, model.cost[j], j, first);
        first = false;
    }
    if (model.objective_offset != 0.0)
        out << (model.objective_offset < 0 ? " - " : " + ") << std::abs(model.objective_offset) << " constant";
    out << "\nSubject To\n";
    for (std::size_t i = 0; i < model.num_rows(); ++i) {
        const auto& row = model.rows[i];
        out << ' ' << (i < row_names.size() ? row_names[i] : "r" + std::to_string(i)) << ':';
        first = true;
        for (const auto& [j, v] : row.coeffs) {
            out << ' ';
            term(out, v, j, first);
            first = false;
        }
        if (first)
            out << " 0 " << col(0);
        out << (row.sense == RowSense::Equal ? " = " : " >= ") << row.rhs << '\n';
    }
    out << "Bounds\n";
    for (std::size_t j = 0; j < model.num_cols(); ++j) {
        const double lo = model.lower[j], hi = model.upper[j];
        if (!std::isfinite(lo) && !std::isfinite(hi))
            out << ' ' << col(j) << " free\n";
        else if (!std::isfinite(hi))
            out << ' ' << col(j) << " >= " << lo << '\n';
        else if (!std::isfinite(lo))
            out << " -inf <= " << col(j) << " <= " << hi << '\n';
        else
            out << ' ' << lo << " <= " << col(j) << " <= " << hi << '\n';
    }
    out << "End\n";
    return out.str();
}

} // namespace splab

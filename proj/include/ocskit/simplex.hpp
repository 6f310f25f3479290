#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace ocskit {

enum class SimplexStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct SimplexStats {
    long iterations = 0;
    bool bland_engaged = false;
};

// Dense dictionary simplex for  max c.x  s.t.  A x <= b,  x >= 0.
// Phase 1 drives an auxiliary variable out via the most-negative right-hand
// side; phase 2 prices with the largest-coefficient rule and falls back to
// Bland's rule permanently once the objective stalls, which guarantees
// termination on degenerate models.
template <class Real>
class DictionarySimplex {
  public:
    DictionarySimplex(const std::vector<std::vector<Real>>& a, const std::vector<Real>& b,
                      const std::vector<Real>& c, Real eps = Real(1e-9))
        : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())), eps_(eps),
          nonbasic_(n_ + 1), basic_(m_), d_(m_ + 2, std::vector<Real>(n_ + 2, Real(0))) {
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) d_[i][j] = a[i][j];
            basic_[i] = n_ + i;
            d_[i][n_] = Real(-1);      // auxiliary column
            d_[i][n_ + 1] = b[i];
        }
        for (int j = 0; j < n_; ++j) {
            nonbasic_[j] = j;
            d_[m_][j] = -c[j];
        }
        nonbasic_[n_] = kAux;
        d_[m_ + 1][n_] = Real(1);
    }

    SimplexStatus solve(std::vector<Real>& x, Real& objective, long max_iterations = 5'000'000,
                        long bland_after_stall = 5000) {
        max_iterations_ = max_iterations;
        bland_after_stall_ = bland_after_stall;

        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
        if (d_[r][n_ + 1] < -eps_) {
            pivot(r, n_);
            if (!run_phase(true)) return SimplexStatus::IterationLimit;
            if (d_[m_ + 1][n_ + 1] < -eps_) return SimplexStatus::Infeasible;
            for (int i = 0; i < m_; ++i) {
                if (basic_[i] != kAux) continue;
                int s = 0;
                for (int j = 1; j <= n_; ++j)
                    if (lex_less(d_[i][j], nonbasic_[j], d_[i][s], nonbasic_[s])) s = j;
                pivot(i, s);
            }
        }
        const bool bounded = run_phase(false);
        if (stats_.iterations >= max_iterations_) return SimplexStatus::IterationLimit;

        x.assign(n_, Real(0));
        for (int i = 0; i < m_; ++i)
            if (basic_[i] >= 0 && basic_[i] < n_) x[basic_[i]] = d_[i][n_ + 1];
        objective = d_[m_][n_ + 1];
        return bounded ? SimplexStatus::Optimal : SimplexStatus::Unbounded;
    }

    const SimplexStats& stats() const { return stats_; }

  private:
    static constexpr int kAux = -1;

    static bool lex_less(Real v1, int id1, Real v2, int id2) {
        if (v1 != v2) return v1 < v2;
        return id1 < id2;
    }

    void pivot(int r, int s) {
        Real* row = d_[r].data();
        const Real inv = Real(1) / row[s];
        for (int i = 0; i < m_ + 2; ++i) {
            if (i == r) continue;
            Real* other = d_[i].data();
            if (std::fabs(static_cast<double>(other[s])) <= 1e-300) continue;
            const Real factor = other[s] * inv;
            for (int j = 0; j < n_ + 2; ++j) other[j] -= row[j] * factor;
            other[s] = row[s] * factor;   // keeps the leaving variable's column
        }
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s) row[j] *= inv;
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r) d_[i][s] *= -inv;
        row[s] = inv;
        std::swap(basic_[r], nonbasic_[s]);
    }

    // One simplex phase; returns false only when unbounded (phase 2) or the
    // iteration budget runs out.
    bool run_phase(bool phase_one) {
        const int obj = phase_one ? m_ + 1 : m_;
        long stall = 0;
        Real last_obj = d_[obj][n_ + 1];
        bool bland = false;
        for (;;) {
            if (stats_.iterations >= max_iterations_) return false;
            int s = -1;
            if (bland) {
                for (int j = 0; j <= n_; ++j) {
                    if (!phase_one && nonbasic_[j] == kAux) continue;
                    if (d_[obj][j] < -eps_ && (s == -1 || nonbasic_[j] < nonbasic_[s])) s = j;
                }
                if (s == -1) return true;
            } else {
                for (int j = 0; j <= n_; ++j) {
                    if (!phase_one && nonbasic_[j] == kAux) continue;
                    if (s == -1 || lex_less(d_[obj][j], nonbasic_[j], d_[obj][s], nonbasic_[s])) s = j;
                }
                if (s == -1 || d_[obj][s] >= -eps_) return true;
            }

            int r = -1;
            for (int i = 0; i < m_; ++i) {
                if (d_[i][s] <= eps_) continue;
                if (r == -1) { r = i; continue; }
                const Real ratio_i = d_[i][n_ + 1] / d_[i][s];
                const Real ratio_r = d_[r][n_ + 1] / d_[r][s];
                if (lex_less(ratio_i, basic_[i], ratio_r, basic_[r])) r = i;
            }
            if (r == -1) return !phase_one ? false : true;   // phase 1 objective is bounded
            pivot(r, s);
            ++stats_.iterations;

            const Real now = d_[obj][n_ + 1];
            if (now > last_obj + eps_ * (Real(1) + std::fabs(static_cast<double>(last_obj)))) {
                stall = 0;
                last_obj = now;
            } else if (++stall > bland_after_stall_ && !bland) {
                bland = true;
                stats_.bland_engaged = true;
            }
        }
    }

    int m_, n_;
    Real eps_;
    std::vector<int> nonbasic_, basic_;
    std::vector<std::vector<Real>> d_;
    SimplexStats stats_;
    long max_iterations_ = 5'000'000;
    long bland_after_stall_ = 5000;
};

} // namespace ocskit

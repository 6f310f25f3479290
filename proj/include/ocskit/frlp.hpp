#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ocskit/bounds.hpp"

namespace ocskit {

// Which constants drive the bound functions:
//  - Reference: the published analysis constants (second-stage selector
//    guarantee (13*sqrt(13)-35)/108, rounded deltas). CLI alias: "paper".
//  - Consistent: both selectors are the executable 1/16 pair OCS and the
//    deltas are re-derived, so solved tables certify the running code.
enum class ParamMode { Reference, Consistent };

ParamMode mode_from_name(const std::string& name);
std::string mode_name(ParamMode mode);
BoundParams params_for_mode(ParamMode mode, double sigma_r2 = 1.3, double sigma_d = 2.2);

// Counter pairs sorted ascending by 1 - zeta(k)*eta(ell); ties lexicographic.
class QOrder {
  public:
    struct Pair {
        int k = 0, ell = 0;
    };

    // zeta_tab / eta_tab must cover every candidate index; the candidate
    // rectangle grows until its boundary lies strictly beyond the limit pair.
    static QOrder build(int kmax, int ellmax, const std::vector<double>& zeta_tab,
                        const std::vector<double>& eta_tab);

    const std::vector<Pair>& sorted() const { return sorted_; }
    int limit_position() const { return limit_pos_; }
    bool within_limit(int k, int ell) const;
    int position(int k, int ell) const;                 // -1 if not a candidate
    std::optional<Pair> next(int k, int ell) const;     // successor in the sorted order
    double key(int k, int ell) const;                   // 1 - zeta(k)*eta(ell)
    bool has_exact_ties() const { return has_ties_; }
    int kmax() const { return kmax_; }
    int ellmax() const { return ellmax_; }

  private:
    std::vector<Pair> sorted_;
    std::map<std::pair<int, int>, int> position_;
    std::vector<double> zeta_tab_, eta_tab_;
    int limit_pos_ = 0;
    int kmax_ = 0, ellmax_ = 0;
    bool has_ties_ = false;
};

enum class RowSense { LessEq, Equal, GreaterEq };

struct LpRow {
    std::string tag;
    std::vector<std::pair<int, double>> coefs;   // (variable index, coefficient)
    RowSense sense = RowSense::LessEq;
    double rhs = 0;
};

struct LpVar {
    enum class Kind { Objective, A, B };
    std::string name;
    Kind kind = Kind::Objective;
    int k = 0, ell = 0;
    bool nonneg = true;
};

struct LpModel {
    std::vector<LpVar> vars;
    std::vector<LpRow> rows;
    int objective_var = 0;   // maximized

    int var_index(const std::string& name) const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
std::string status_name(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::IterationLimit;
    double objective = 0;
    std::vector<double> x;
    long iterations = 0;
    double max_violation = 0;   // filled in by check_solution
};

struct SolveOptions {
    double eps = 1e-9;
    long max_iterations = 5'000'000;
    long bland_after_stall = 5000;
    bool extended_precision = true;   // long double tableau
};

LpSolution simplex_solve(const LpModel& model, const SolveOptions& options = {});

struct CheckReport {
    double max_violation = 0;
    std::string worst_tag;
    std::size_t worst_row = 0;
    std::map<std::string, double> per_tag_worst;
    double objective = 0;
    bool bounds_ok = true;
    bool ok(double tol) const { return bounds_ok && max_violation <= tol; }
};

// Re-evaluates every row and variable bound against x with fresh arithmetic.
CheckReport check_solution(const LpModel& model, const std::vector<double>& x);

std::string export_lp_text(const LpModel& model);
LpModel parse_lp_text(const std::string& text);

// Factor-revealing model over counters of two-way and three-way dispatches.
// The variable set covers every pair up to the limit in the Q order plus the
// pinned successors referenced by constraints.
struct UnweightedLpBuild {
    LpModel model;
    QOrder q;
    int kmax = 0, ellmax = 0;
    ParamMode mode = ParamMode::Reference;
    BoundParams params;
    std::map<std::pair<int, int>, int> a_var, b_var;
    std::vector<double> zeta_tab, eta_tab;
};

UnweightedLpBuild build_unweighted(int kmax, int ellmax, const BoundParams& params, ParamMode mode);

// Rectangular variant with the power-form triple bound and the prepayment
// floors; requires kmax, ellmax >= 3 and valid sigmas.
struct WeightedLpBuild {
    LpModel model;
    int kmax = 0, ellmax = 0;
    ParamMode mode = ParamMode::Reference;
    BoundParams params;
    std::map<std::pair<int, int>, int> a_var, b_var;
    std::vector<double> zeta_tab, eta_tab;
};

WeightedLpBuild build_weighted(int kmax, int ellmax, const BoundParams& params, ParamMode mode);

// Solved dual tables in the shape the matching algorithms consume: lookups
// fall back to a(kmax,ellmax) / 0 beyond the modeled range, which also stands
// in for the deterministic-match state.
struct DualTables {
    enum class Shape { QOrdered, Rectangle };
    Shape shape = Shape::Rectangle;
    ParamMode mode = ParamMode::Reference;
    BoundParams params;
    int kmax = 0, ellmax = 0;
    double gamma = 0;            // solved objective
    double a_limit = 0;          // a(kmax, ellmax)
    std::map<std::pair<int, int>, double> a, b;
    QOrder q;                    // QOrdered shape only
    std::vector<double> zeta_tab, eta_tab;   // the bound functions the model was built with

    double a_of(int k, int ell) const;   // saturates beyond the modeled range
    double b_of(int k, int ell) const;
    double zeta(int k) const;
    double eta(int ell) const;
    void ensure_tab_length(int n);       // extend bound tables for long runs
};

DualTables solved_unweighted_tables(const UnweightedLpBuild& build, const LpSolution& sol);
DualTables solved_weighted_tables(const WeightedLpBuild& build, const LpSolution& sol);

} // namespace ocskit

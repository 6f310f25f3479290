#include "ocskit/frlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ocskit/simplex.hpp"

namespace ocskit {

ParamMode mode_from_name(const std::string& name) {
    if (name == "reference" || name == "paper") return ParamMode::Reference;
    if (name == "consistent") return ParamMode::Consistent;
    throw std::invalid_argument("unknown mode `" + name + "` (expected reference|paper|consistent)");
}

std::string mode_name(ParamMode mode) {
    return mode == ParamMode::Reference ? "reference" : "consistent";
}

BoundParams params_for_mode(ParamMode mode, double sigma_r2, double sigma_d) {
    BoundParams p = (mode == ParamMode::Reference) ? BoundParams::reference() : BoundParams::consistent();
    p.sigma_r2 = sigma_r2;
    p.sigma_d = sigma_d;
    return p;
}

namespace {

std::vector<double> unweighted_zeta_tab(int len, const BoundParams& params, ParamMode mode) {
    std::vector<double> tab(static_cast<std::size_t>(len));
    if (mode == ParamMode::Reference) {
        const std::vector<double> f = f_seq(len - 1, params.gamma_b);
        for (int k = 0; k < len; ++k) tab[k] = std::pow(0.5, k) * f[k];
    } else {
        for (int k = 0; k < len; ++k) tab[k] = zeta_product(k, params.gamma_b);
    }
    return tab;
}

std::vector<double> unweighted_eta_tab(int len, const BoundParams& params) {
    std::vector<double> tab(static_cast<std::size_t>(len));
    for (int l = 0; l < len; ++l) tab[l] = eta_closed(l, params);
    return tab;
}

std::vector<double> weighted_zeta_tab(int len, const BoundParams& params) {
    std::vector<double> tab(static_cast<std::size_t>(len));
    for (int k = 0; k < len; ++k) tab[k] = zeta_product(k, params.gamma_b);
    return tab;
}

std::vector<double> weighted_eta_tab(int len, const BoundParams& params) {
    std::vector<double> tab(static_cast<std::size_t>(len));
    for (int l = 0; l < len; ++l) tab[l] = eta_pow_bound(l, params.delta1, params.delta2);
    return tab;
}

// Accumulates coefficients per variable so repeated references collapse.
class RowBuilder {
  public:
    RowBuilder& add(int var, double coef) {
        for (auto& [v, c] : coefs_)
            if (v == var) {
                c += coef;
                return *this;
            }
        coefs_.emplace_back(var, coef);
        return *this;
    }

    LpRow done(std::string tag, RowSense sense, double rhs) {
        LpRow row;
        row.tag = std::move(tag);
        row.coefs = std::move(coefs_);
        row.sense = sense;
        row.rhs = rhs;
        coefs_ = {};
        return row;
    }

  private:
    std::vector<std::pair<int, double>> coefs_;
};

std::string kl_name(char prefix, int k, int ell) {
    return std::string(1, prefix) + "(" + std::to_string(k) + "," + std::to_string(ell) + ")";
}

} // namespace

QOrder QOrder::build(int kmax, int ellmax, const std::vector<double>& zeta_tab,
                     const std::vector<double>& eta_tab) {
    if (kmax < 0 || ellmax < 0) throw std::invalid_argument("limit pair must be non-negative");
    const int klen = static_cast<int>(zeta_tab.size());
    const int llen = static_cast<int>(eta_tab.size());
    if (kmax >= klen || ellmax >= llen) throw std::invalid_argument("bound tables do not cover the limit pair");
    const double limit_product = zeta_tab[kmax] * eta_tab[ellmax];
    if (zeta_tab[klen - 1] * eta_tab[0] >= limit_product || zeta_tab[0] * eta_tab[llen - 1] >= limit_product)
        throw std::invalid_argument("bound tables too short to bracket the limit pair");

    QOrder q;
    q.kmax_ = kmax;
    q.ellmax_ = ellmax;
    q.zeta_tab_ = zeta_tab;
    q.eta_tab_ = eta_tab;
    q.sorted_.reserve(static_cast<std::size_t>(klen) * llen);
    for (int k = 0; k < klen; ++k)
        for (int l = 0; l < llen; ++l) q.sorted_.push_back(Pair{k, l});
    std::sort(q.sorted_.begin(), q.sorted_.end(), [&](const Pair& p1, const Pair& p2) {
        const double key1 = zeta_tab[p1.k] * eta_tab[p1.ell];
        const double key2 = zeta_tab[p2.k] * eta_tab[p2.ell];
        if (key1 != key2) return key1 > key2;   // larger product = smaller 1 - product
        if (p1.k != p2.k) return p1.k < p2.k;
        return p1.ell < p2.ell;
    });
    for (std::size_t i = 0; i < q.sorted_.size(); ++i) {
        q.position_[{q.sorted_[i].k, q.sorted_[i].ell}] = static_cast<int>(i);
        if (i > 0) {
            const double prev = zeta_tab[q.sorted_[i - 1].k] * eta_tab[q.sorted_[i - 1].ell];
            const double cur = zeta_tab[q.sorted_[i].k] * eta_tab[q.sorted_[i].ell];
            if (prev == cur) q.has_ties_ = true;
        }
    }
    q.limit_pos_ = q.position_.at({kmax, ellmax});
    return q;
}

bool QOrder::within_limit(int k, int ell) const {
    const int pos = position(k, ell);
    return pos >= 0 && pos <= limit_pos_;
}

int QOrder::position(int k, int ell) const {
    const auto it = position_.find({k, ell});
    return it == position_.end() ? -1 : it->second;
}

std::optional<QOrder::Pair> QOrder::next(int k, int ell) const {
    const int pos = position(k, ell);
    if (pos < 0 || pos + 1 >= static_cast<int>(sorted_.size())) return std::nullopt;
    return sorted_[static_cast<std::size_t>(pos) + 1];
}

double QOrder::key(int k, int ell) const {
    return 1.0 - zeta_tab_.at(static_cast<std::size_t>(k)) * eta_tab_.at(static_cast<std::size_t>(ell));
}

int LpModel::var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) return static_cast<int>(i);
    return -1;
}

std::string status_name(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration-limit";
    }
    return "?";
}

UnweightedLpBuild build_unweighted(int kmax, int ellmax, const BoundParams& params, ParamMode mode) {
    UnweightedLpBuild out;
    out.kmax = kmax;
    out.ellmax = ellmax;
    out.mode = mode;
    out.params = params;

    // Grow the candidate rectangle until its boundary lies strictly beyond the limit.
    int klen = std::max(kmax + 2, 4 * (kmax + 1));
    int llen = std::max(ellmax + 2, 4 * (ellmax + 1));
    for (int rounds = 0; rounds < 32; ++rounds) {
        out.zeta_tab = unweighted_zeta_tab(klen, params, mode);
        out.eta_tab = unweighted_eta_tab(llen, params);
        const double limit_product = out.zeta_tab[kmax] * out.eta_tab[ellmax];
        bool grown = false;
        if (out.zeta_tab[klen - 1] * out.eta_tab[0] >= limit_product) {
            klen *= 2;
            grown = true;
        }
        if (out.zeta_tab[0] * out.eta_tab[llen - 1] >= limit_product) {
            llen *= 2;
            grown = true;
        }
        if (!grown) break;
    }
    out.q = QOrder::build(kmax, ellmax, out.zeta_tab, out.eta_tab);

    LpModel& model = out.model;
    model.vars.push_back(LpVar{"G", LpVar::Kind::Objective, 0, 0, false});
    model.objective_var = 0;

    const auto make_var = [&](LpVar::Kind kind, int k, int ell) {
        const char prefix = kind == LpVar::Kind::A ? 'a' : 'b';
        model.vars.push_back(LpVar{kl_name(prefix, k, ell), kind, k, ell, true});
        return static_cast<int>(model.vars.size()) - 1;
    };

    for (int i = 0; i <= out.q.limit_position(); ++i) {
        const auto pr = out.q.sorted()[static_cast<std::size_t>(i)];
        out.a_var[{pr.k, pr.ell}] = make_var(LpVar::Kind::A, pr.k, pr.ell);
        out.b_var[{pr.k, pr.ell}] = make_var(LpVar::Kind::B, pr.k, pr.ell);
    }
    const int a_limit_var = out.a_var.at({kmax, ellmax});

    std::vector<LpRow> pin_rows;
    const auto a_of = [&](int k, int ell) {
        const auto it = out.a_var.find({k, ell});
        if (it != out.a_var.end()) return it->second;
        const int v = make_var(LpVar::Kind::A, k, ell);
        out.a_var[{k, ell}] = v;
        pin_rows.push_back(RowBuilder().add(v, 1.0).add(a_limit_var, -1.0).done("pin-a", RowSense::Equal, 0.0));
        return v;
    };
    const auto b_of = [&](int k, int ell) {
        const auto it = out.b_var.find({k, ell});
        if (it != out.b_var.end()) return it->second;
        const int v = make_var(LpVar::Kind::B, k, ell);
        out.b_var[{k, ell}] = v;
        pin_rows.push_back(RowBuilder().add(v, 1.0).done("pin-b", RowSense::Equal, 0.0));
        return v;
    };

    model.rows.push_back(RowBuilder().add(out.a_var.at({0, 0}), 1.0).done("root-zero", RowSense::Equal, 0.0));

    const auto& zt = out.zeta_tab;
    const auto& et = out.eta_tab;
    for (int i = 0; i <= out.q.limit_position(); ++i) {
        const auto pr = out.q.sorted()[static_cast<std::size_t>(i)];
        const int k = pr.k, l = pr.ell;
        const auto succ = out.q.next(k, l);
        if (!succ) throw std::logic_error("successor missing for a retained pair");
        const int a_kl = out.a_var.at({k, l});
        const int b_kl = out.b_var.at({k, l});
        const int a_succ = a_of(succ->k, succ->ell);
        const int b_succ = b_of(succ->k, succ->ell);

        model.rows.push_back(
            RowBuilder().add(a_kl, 1.0).add(a_succ, -1.0).done("monotone", RowSense::LessEq, 0.0));
        model.rows.push_back(RowBuilder()
                                 .add(a_limit_var, 1.0)
                                 .add(a_kl, -1.0)
                                 .add(b_succ, 1.0)
                                 .done("deterministic", RowSense::LessEq, zt[k] * et[l]));
        model.rows.push_back(RowBuilder()
                                 .add(a_of(k + 1, l), 2.0)
                                 .add(a_kl, -2.0)
                                 .add(b_succ, 1.0)
                                 .done("two-way", RowSense::LessEq, 2.0 * et[l] * (zt[k] - zt[k + 1])));
        model.rows.push_back(RowBuilder()
                                 .add(a_of(k, l + 1), 3.0)
                                 .add(a_kl, -3.0)
                                 .add(b_kl, 1.0)
                                 .done("three-way", RowSense::LessEq, 3.0 * zt[k] * (et[l] - et[l + 1])));
        model.rows.push_back(RowBuilder()
                                 .add(a_kl, 1.0)
                                 .add(b_kl, 1.0)
                                 .add(model.objective_var, -1.0)
                                 .done("dual-feasibility", RowSense::GreaterEq, 0.0));
    }
    model.rows.push_back(RowBuilder()
                             .add(a_limit_var, 1.0)
                             .add(model.objective_var, -1.0)
                             .done("exposed", RowSense::GreaterEq, 0.0));
    for (auto& row : pin_rows) model.rows.push_back(std::move(row));
    return out;
}

WeightedLpBuild build_weighted(int kmax, int ellmax, const BoundParams& params, ParamMode mode) {
    if (kmax < 3 || ellmax < 3) throw std::invalid_argument("weighted model needs kmax, ellmax >= 3");
    params.validate_sigmas();

    WeightedLpBuild out;
    out.kmax = kmax;
    out.ellmax = ellmax;
    out.mode = mode;
    out.params = params;
    out.zeta_tab = weighted_zeta_tab(kmax + 2, params);
    out.eta_tab = weighted_eta_tab(ellmax + 4, params);

    LpModel& model = out.model;
    model.vars.push_back(LpVar{"G", LpVar::Kind::Objective, 0, 0, false});
    model.objective_var = 0;

    const auto make_var = [&](LpVar::Kind kind, int k, int ell) {
        const char prefix = kind == LpVar::Kind::A ? 'a' : 'b';
        model.vars.push_back(LpVar{kl_name(prefix, k, ell), kind, k, ell, true});
        return static_cast<int>(model.vars.size()) - 1;
    };

    for (int k = 0; k <= kmax; ++k)
        for (int l = 0; l <= ellmax; ++l) out.a_var[{k, l}] = make_var(LpVar::Kind::A, k, l);
    for (int l = 0; l <= ellmax; ++l) out.a_var[{kmax + 1, l}] = make_var(LpVar::Kind::A, kmax + 1, l);
    for (int k = 0; k <= kmax; ++k) out.a_var[{k, ellmax + 1}] = make_var(LpVar::Kind::A, k, ellmax + 1);
    for (int k = 0; k <= kmax; ++k)
        for (int l = 0; l <= ellmax; ++l) out.b_var[{k, l}] = make_var(LpVar::Kind::B, k, l);

    const auto a = [&](int k, int l) { return out.a_var.at({k, l}); };
    const auto b = [&](int k, int l) { return out.b_var.at({k, l}); };
    const int a_limit = a(kmax, ellmax);
    const int g = model.objective_var;
    const auto& zt = out.zeta_tab;
    const auto& et = out.eta_tab;
    const double gb = params.gamma_b, d1 = params.delta1, d2 = params.delta2;
    const double sr2 = params.sigma_r2, sd = params.sigma_d;

    for (int l = 0; l <= ellmax; ++l)
        model.rows.push_back(
            RowBuilder().add(a(kmax + 1, l), 1.0).add(a_limit, -1.0).done("pin-a", RowSense::Equal, 0.0));
    for (int k = 0; k <= kmax; ++k)
        model.rows.push_back(
            RowBuilder().add(a(k, ellmax + 1), 1.0).add(a_limit, -1.0).done("pin-a", RowSense::Equal, 0.0));

    for (int k = 0; k <= kmax; ++k)
        for (int l = 0; l <= ellmax; ++l) {
            model.rows.push_back(
                RowBuilder().add(a(k, l), 1.0).add(a(k + 1, l), -1.0).done("monotone-k", RowSense::LessEq, 0.0));
            model.rows.push_back(
                RowBuilder().add(a(k, l), 1.0).add(a(k, l + 1), -1.0).done("monotone-ell", RowSense::LessEq, 0.0));
        }

    model.rows.push_back(RowBuilder().add(a(0, 0), 1.0).done("root-zero", RowSense::Equal, 0.0));

    for (int k = 0; k <= kmax; ++k)
        for (int l = 0; l <= ellmax; ++l)
            model.rows.push_back(RowBuilder()
                                     .add(a_limit, 1.0)
                                     .add(a(k, l), -1.0)
                                     .add(b(k, l), sd)
                                     .done("deterministic", RowSense::LessEq, zt[k] * et[l]));

    for (int l = 0; l <= ellmax; ++l)
        model.rows.push_back(RowBuilder()
                                 .add(a(1, l), 1.0)
                                 .add(a(0, l), -1.0)
                                 .add(b(0, l), sr2)
                                 .done("two-way-base", RowSense::LessEq, et[l] / 2.0));
    for (int k = 1; k <= kmax; ++k)
        for (int l = 0; l <= ellmax; ++l)
            model.rows.push_back(RowBuilder()
                                     .add(a(k + 1, l), 1.0)
                                     .add(a(k, l), -1.0)
                                     .add(b(k, l), sr2)
                                     .done("two-way", RowSense::LessEq, (1.0 + gb) / 2.0 * zt[k] * et[l]));
    model.rows.push_back(RowBuilder()
                             .add(a(1, 0), 1.0)
                             .done("two-way-prepay-floor", RowSense::GreaterEq, 3.0 * gb / (4.0 * sr2)));

    for (int k = 0; k <= kmax; ++k)
        model.rows.push_back(RowBuilder()
                                 .add(a(k, 1), 1.0)
                                 .add(a(k, 0), -1.0)
                                 .add(b(k, 0), 1.0)
                                 .done("three-way-base", RowSense::LessEq, zt[k] / 3.0));
    for (int k = 0; k <= kmax; ++k)
        model.rows.push_back(RowBuilder()
                                 .add(a(k, 2), 1.0)
                                 .add(a(k, 1), -1.0)
                                 .add(b(k, 1), 1.0)
                                 .done("three-way-one", RowSense::LessEq, (1.0 + 2.0 * d1) / 3.0 * zt[k] * et[1]));
    for (int k = 0; k <= kmax; ++k)
        for (int l = 2; l <= ellmax; ++l)
            model.rows.push_back(RowBuilder()
                                     .add(a(k, l + 1), 1.0)
                                     .add(a(k, l), -1.0)
                                     .add(b(k, l), 1.0)
                                     .done("three-way", RowSense::LessEq,
                                           (1.0 + 2.0 * d1 + 2.0 * d2 - 2.0 * d1 * d2) / 3.0 * zt[k] * et[l]));

    model.rows.push_back(RowBuilder()
                             .add(a(0, 1), 1.0)
                             .done("three-way-prepay-floor-1", RowSense::GreaterEq,
                                   2.0 * d1 * et[1] + 2.0 * (d2 - d1 * d2) * et[2]));
    model.rows.push_back(RowBuilder()
                             .add(a(0, 2), 1.0)
                             .done("three-way-prepay-floor-2", RowSense::GreaterEq,
                                   2.0 * (d1 + d2 - d1 * d2) * et[2] + 2.0 * (d2 - d1 * d2) * et[3]));

    model.rows.push_back(RowBuilder().add(a_limit, 1.0).add(g, -1.0).done("exposed", RowSense::GreaterEq, 0.0));
    for (int k = 0; k <= kmax; ++k)
        for (int l = 0; l <= ellmax; ++l)
            model.rows.push_back(RowBuilder()
                                     .add(a(k, l), 1.0)
                                     .add(b(k, l), 3.0)
                                     .add(g, -1.0)
                                     .done("feas-not-inserted", RowSense::GreaterEq, 0.0));
    for (int k = 0; k <= kmax; ++k)
        for (int l = 0; l <= ellmax; ++l)
            model.rows.push_back(RowBuilder()
                                     .add(a(k, l + 1), 1.0)
                                     .add(b(k, l), sd)
                                     .add(g, -1.0)
                                     .done("feas-inserted-three-way", RowSense::GreaterEq, 0.0));
    for (int k = 0; k <= kmax; ++k)
        for (int l = 0; l <= ellmax; ++l)
            model.rows.push_back(RowBuilder()
                                     .add(a(k + 1, l), 1.0)
                                     .add(b(k, l), sd)
                                     .add(g, -1.0)
                                     .done("feas-inserted-two-way", RowSense::GreaterEq, 0.0));
    return out;
}

namespace {

template <class Real>
LpSolution solve_impl(const LpModel& model, const SolveOptions& options) {
    // Columns: one per non-negative variable, a split pair per free variable.
    const int nvars = static_cast<int>(model.vars.size());
    std::vector<int> pos_col(nvars), neg_col(nvars, -1);
    int ncols = 0;
    for (int v = 0; v < nvars; ++v) {
        pos_col[v] = ncols++;
        if (!model.vars[v].nonneg) neg_col[v] = ncols++;
    }

    std::vector<std::vector<Real>> a;
    std::vector<Real> rhs;
    const auto push_le = [&](const LpRow& row, double sign) {
        std::vector<Real> coefs(static_cast<std::size_t>(ncols), Real(0));
        for (const auto& [v, c] : row.coefs) {
            coefs[pos_col[v]] += Real(sign * c);
            if (neg_col[v] >= 0) coefs[neg_col[v]] -= Real(sign * c);
        }
        a.push_back(std::move(coefs));
        rhs.push_back(Real(sign * row.rhs));
    };
    for (const auto& row : model.rows) {
        switch (row.sense) {
            case RowSense::LessEq: push_le(row, 1.0); break;
            case RowSense::GreaterEq: push_le(row, -1.0); break;
            case RowSense::Equal:
                push_le(row, 1.0);
                push_le(row, -1.0);
                break;
        }
    }

    std::vector<Real> c(static_cast<std::size_t>(ncols), Real(0));
    c[pos_col[model.objective_var]] = Real(1);
    if (neg_col[model.objective_var] >= 0) c[neg_col[model.objective_var]] = Real(-1);

    DictionarySimplex<Real> simplex(a, rhs, c, Real(options.eps));
    std::vector<Real> x;
    Real objective = 0;
    const SimplexStatus st = simplex.solve(x, objective, options.max_iterations, options.bland_after_stall);

    LpSolution sol;
    sol.iterations = simplex.stats().iterations;
    switch (st) {
        case SimplexStatus::Optimal: sol.status = LpStatus::Optimal; break;
        case SimplexStatus::Infeasible: sol.status = LpStatus::Infeasible; break;
        case SimplexStatus::Unbounded: sol.status = LpStatus::Unbounded; break;
        case SimplexStatus::IterationLimit: sol.status = LpStatus::IterationLimit; break;
    }
    if (sol.status == LpStatus::Optimal) {
        sol.x.assign(static_cast<std::size_t>(nvars), 0.0);
        for (int v = 0; v < nvars; ++v) {
            double value = static_cast<double>(x[pos_col[v]]);
            if (neg_col[v] >= 0) value -= static_cast<double>(x[neg_col[v]]);
            sol.x[v] = value;
        }
        sol.objective = sol.x[model.objective_var];
    }
    return sol;
}

} // namespace

LpSolution simplex_solve(const LpModel& model, const SolveOptions& options) {
    return options.extended_precision ? solve_impl<long double>(model, options)
                                      : solve_impl<double>(model, options);
}

CheckReport check_solution(const LpModel& model, const std::vector<double>& x) {
    if (x.size() != model.vars.size()) throw std::invalid_argument("solution size does not match the model");
    CheckReport report;
    report.objective = x[static_cast<std::size_t>(model.objective_var)];
    for (std::size_t v = 0; v < model.vars.size(); ++v)
        if (model.vars[v].nonneg && x[v] < -1e-12) report.bounds_ok = false;
    for (std::size_t i = 0; i < model.rows.size(); ++i) {
        const LpRow& row = model.rows[i];
        double lhs = 0;
        for (const auto& [v, c] : row.coefs) lhs += c * x[static_cast<std::size_t>(v)];
        double violation = 0;
        switch (row.sense) {
            case RowSense::LessEq: violation = std::max(0.0, lhs - row.rhs); break;
            case RowSense::GreaterEq: violation = std::max(0.0, row.rhs - lhs); break;
            case RowSense::Equal: violation = std::fabs(lhs - row.rhs); break;
        }
        auto [it, inserted] = report.per_tag_worst.try_emplace(row.tag, violation);
        if (!inserted && violation > it->second) it->second = violation;
        if (violation > report.max_violation) {
            report.max_violation = violation;
            report.worst_tag = row.tag;
            report.worst_row = i;
        }
    }
    return report;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* sense_text(RowSense s) {
    switch (s) {
        case RowSense::LessEq: return "<=";
        case RowSense::Equal: return "=";
        case RowSense::GreaterEq: return ">=";
    }
    return "?";
}

} // namespace

std::string export_lp_text(const LpModel& model) {
    std::ostringstream out;
    out << "# lp-model v1\n";
    out << "objective maximize " << model.vars[static_cast<std::size_t>(model.objective_var)].name << "\n";
    for (const auto& var : model.vars)
        out << "var " << var.name << (var.nonneg ? " nonneg" : " free") << "\n";
    for (const auto& row : model.rows) {
        out << row.tag << ":";
        for (const auto& [v, c] : row.coefs)
            out << ' ' << fmt_double(c) << '*' << model.vars[static_cast<std::size_t>(v)].name;
        out << ' ' << sense_text(row.sense) << ' ' << fmt_double(row.rhs) << "\n";
    }
    return out.str();
}

LpModel parse_lp_text(const std::string& text) {
    LpModel model;
    std::istringstream in(text);
    std::string line;
    std::string objective_name;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "objective") {
            std::string kw;
            ls >> kw >> objective_name;
            if (kw != "maximize") throw std::invalid_argument("only maximize objectives are supported");
        } else if (head == "var") {
            std::string name, kind;
            ls >> name >> kind;
            LpVar var;
            var.name = name;
            var.nonneg = (kind == "nonneg");
            if (name == "G" || name == objective_name) {
                var.kind = LpVar::Kind::Objective;
            } else {
                var.kind = name[0] == 'a' ? LpVar::Kind::A : LpVar::Kind::B;
                if (std::sscanf(name.c_str() + 1, "(%d,%d)", &var.k, &var.ell) != 2)
                    throw std::invalid_argument("line " + std::to_string(line_no) + ": bad variable name " + name);
            }
            model.vars.push_back(var);
        } else {
            if (head.empty() || head.back() != ':')
                throw std::invalid_argument("line " + std::to_string(line_no) + ": expected `tag:`");
            LpRow row;
            row.tag = head.substr(0, head.size() - 1);
            std::string token;
            std::vector<std::string> tokens;
            while (ls >> token) tokens.push_back(token);
            if (tokens.size() < 2) throw std::invalid_argument("line " + std::to_string(line_no) + ": truncated row");
            row.rhs = std::stod(tokens.back());
            const std::string& sense = tokens[tokens.size() - 2];
            if (sense == "<=")
                row.sense = RowSense::LessEq;
            else if (sense == ">=")
                row.sense = RowSense::GreaterEq;
            else if (sense == "=")
                row.sense = RowSense::Equal;
            else
                throw std::invalid_argument("line " + std::to_string(line_no) + ": bad sense " + sense);
            for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
                const auto star = tokens[i].find('*');
                if (star == std::string::npos)
                    throw std::invalid_argument("line " + std::to_string(line_no) + ": expected coef*var");
                const double coef = std::stod(tokens[i].substr(0, star));
                const int v = model.var_index(tokens[i].substr(star + 1));
                if (v < 0) throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown variable");
                row.coefs.emplace_back(v, coef);
            }
            model.rows.push_back(std::move(row));
        }
    }
    const int obj = model.var_index(objective_name);
    if (obj < 0) throw std::invalid_argument("objective variable not declared");
    model.objective_var = obj;
    return model;
}

double DualTables::a_of(int k, int ell) const {
    const auto it = a.find({k, ell});
    return it == a.end() ? a_limit : it->second;
}

double DualTables::b_of(int k, int ell) const {
    const auto it = b.find({k, ell});
    return it == b.end() ? 0.0 : it->second;
}

double DualTables::zeta(int k) const { return zeta_tab.at(static_cast<std::size_t>(k)); }
double DualTables::eta(int ell) const { return eta_tab.at(static_cast<std::size_t>(ell)); }

void DualTables::ensure_tab_length(int n) {
    const int need = n + 2;
    if (static_cast<int>(zeta_tab.size()) < need) {
        if (shape == Shape::QOrdered)
            zeta_tab = unweighted_zeta_tab(need, params, mode);
        else
            zeta_tab = weighted_zeta_tab(need, params);
    }
    if (static_cast<int>(eta_tab.size()) < need) {
        if (shape == Shape::QOrdered)
            eta_tab = unweighted_eta_tab(need, params);
        else
            eta_tab = weighted_eta_tab(need, params);
    }
}

namespace {

void fill_tables(DualTables& t, const LpModel& model, const std::map<std::pair<int, int>, int>& a_var,
                 const std::map<std::pair<int, int>, int>& b_var, const LpSolution& sol) {
    if (sol.status != LpStatus::Optimal) throw std::invalid_argument("tables need an optimal solution");
    if (sol.x.size() != model.vars.size()) throw std::invalid_argument("solution does not match the model");
    for (const auto& [kl, v] : a_var) t.a[kl] = sol.x[static_cast<std::size_t>(v)];
    for (const auto& [kl, v] : b_var) t.b[kl] = sol.x[static_cast<std::size_t>(v)];
    t.gamma = sol.objective;
    t.a_limit = t.a.at({t.kmax, t.ellmax});
}

} // namespace

DualTables solved_unweighted_tables(const UnweightedLpBuild& build, const LpSolution& sol) {
    DualTables t;
    t.shape = DualTables::Shape::QOrdered;
    t.mode = build.mode;
    t.params = build.params;
    t.kmax = build.kmax;
    t.ellmax = build.ellmax;
    t.q = build.q;
    t.zeta_tab = build.zeta_tab;
    t.eta_tab = build.eta_tab;
    fill_tables(t, build.model, build.a_var, build.b_var, sol);
    return t;
}

DualTables solved_weighted_tables(const WeightedLpBuild& build, const LpSolution& sol) {
    DualTables t;
    t.shape = DualTables::Shape::Rectangle;
    t.mode = build.mode;
    t.params = build.params;
    t.kmax = build.kmax;
    t.ellmax = build.ellmax;
    t.zeta_tab = build.zeta_tab;
    t.eta_tab = build.eta_tab;
    fill_tables(t, build.model, build.a_var, build.b_var, sol);
    return t;
}

} // namespace ocskit

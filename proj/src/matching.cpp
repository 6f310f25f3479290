#include "ocskit/matching.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ocskit {

void validate_instance(const Instance& instance) {
    if (instance.offline_count < 0) throw std::invalid_argument("offline count must be non-negative");
    for (const auto& arrival : instance.arrivals)
        for (const auto& [u, w] : arrival.edges) {
            if (u < 0 || u >= instance.offline_count)
                throw std::invalid_argument("edge references offline vertex out of range");
            if (w < 0) throw std::invalid_argument("edge weights must be non-negative");
        }
}

Instance instance_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Instance inst;
    inst.offline_count = j.at("offline").get<int>();
    for (const auto& a : j.at("arrivals")) {
        Arrival arrival;
        arrival.id = a.at("id").get<int>();
        for (const auto& e : a.at("edges"))
            arrival.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
        inst.arrivals.push_back(std::move(arrival));
    }
    validate_instance(inst);
    return inst;
}

std::string instance_to_json(const Instance& instance) {
    nlohmann::json j;
    j["offline"] = instance.offline_count;
    j["arrivals"] = nlohmann::json::array();
    for (const auto& arrival : instance.arrivals) {
        nlohmann::json a;
        a["id"] = arrival.id;
        a["edges"] = nlohmann::json::array();
        for (const auto& [u, w] : arrival.edges) a["edges"].push_back({u, w});
        j["arrivals"].push_back(std::move(a));
    }
    return j.dump();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Deduplicated neighbor list (max weight per offline vertex), sorted by id.
std::vector<std::pair<int, double>> neighbors_of(const Arrival& arrival) {
    std::map<int, double> best;
    for (const auto& [u, w] : arrival.edges) {
        auto [it, inserted] = best.try_emplace(u, w);
        if (!inserted && w > it->second) it->second = w;
    }
    return {best.begin(), best.end()};
}

} // namespace

AuditReport dual_audit_check(const DualAudit& audit, double tol) {
    AuditReport report;
    for (const auto& it : audit.iterations) {
        const double gap = it.dual_inc - it.primal_inc;
        report.worst_iteration_gap = std::max(report.worst_iteration_gap, gap);
        if (gap > tol) ++report.iteration_violations;
    }
    for (const auto& e : audit.edges) {
        const double gap = audit.gamma * e.weight - audit.alpha[static_cast<std::size_t>(e.offline)] -
                           audit.beta[static_cast<std::size_t>(e.arrival_index)];
        report.worst_feasibility_gap = std::max(report.worst_feasibility_gap, gap);
        if (gap > tol) ++report.feasibility_violations;
    }
    report.invariant_violations = audit.invariant_violations;
    report.min_invariant_slack = audit.min_invariant_slack;
    return report;
}

// ---------------------------------------------------------------------------
// Unweighted variant
// ---------------------------------------------------------------------------

RunResult run_unweighted(const Instance& instance, const DualTables& tables, std::uint64_t seed) {
    validate_instance(instance);
    if (tables.shape != DualTables::Shape::QOrdered)
        throw std::invalid_argument("unweighted runs need tables solved from the Q-ordered model");
    for (const auto& arrival : instance.arrivals)
        for (const auto& [u, w] : arrival.edges)
            if (w != 1.0) throw std::invalid_argument("unweighted runs require unit weights");

    const int n = instance.offline_count;
    const int m = static_cast<int>(instance.arrivals.size());
    DualTables t = tables;
    t.ensure_tab_length(m + 2);

    struct Ledger {
        int k = 0, ell = 0;
        bool det = false;
    };
    std::vector<Ledger> ledger(static_cast<std::size_t>(n));
    std::vector<int> match(static_cast<std::size_t>(n), -1);

    TwoWayOcs two_way(derive_stream(seed, 101));
    ThreeWayOcs three_way(trial_seed(seed, 202));

    RunResult result;
    DualAudit& audit = result.audit;
    audit.gamma = t.gamma;
    audit.alpha.assign(static_cast<std::size_t>(n), 0.0);
    audit.beta.assign(static_cast<std::size_t>(m), 0.0);

    const auto rank_of = [&](const Ledger& lg) {
        return std::tuple<double, int, int>(1.0 - t.zeta(lg.k) * t.eta(lg.ell), lg.k, lg.ell);
    };
    const auto b_next = [&](int k, int ell) {
        if (!t.q.within_limit(k, ell)) return 0.0;
        const auto succ = t.q.next(k, ell);
        return succ ? t.b_of(succ->k, succ->ell) : 0.0;
    };

    for (int j = 0; j < m; ++j) {
        const auto neighbors = neighbors_of(instance.arrivals[static_cast<std::size_t>(j)]);
        for (const auto& [u, w] : neighbors) audit.edges.push_back(EdgeCheck{u, j, w});

        std::vector<int> live;
        for (const auto& [u, w] : neighbors)
            if (!ledger[static_cast<std::size_t>(u)].det) live.push_back(u);

        IterationRecord rec;
        rec.arrival_index = j;
        if (live.empty()) {
            rec.dispatch = 'x';
            audit.iterations.push_back(rec);
            continue;
        }

        auto best_rank = rank_of(ledger[static_cast<std::size_t>(live.front())]);
        for (int u : live) best_rank = std::min(best_rank, rank_of(ledger[static_cast<std::size_t>(u)]));
        std::vector<int> star;
        for (int u : live)
            if (rank_of(ledger[static_cast<std::size_t>(u)]) == best_rank) star.push_back(u);

        const Ledger front = ledger[static_cast<std::size_t>(star.front())];
        const int k = front.k, l = front.ell;
        const double a_kl = t.a_of(k, l);

        if (star.size() == 1) {
            const int u = star.front();
            ledger[static_cast<std::size_t>(u)].det = true;
            match[static_cast<std::size_t>(u)] = j;
            rec.dispatch = 'd';
            rec.primal_inc = t.zeta(k) * t.eta(l);
            audit.beta[static_cast<std::size_t>(j)] = b_next(k, l);
            rec.dual_inc = t.a_limit - a_kl + audit.beta[static_cast<std::size_t>(j)];
        } else if (star.size() == 2) {
            const ElementId u1 = static_cast<ElementId>(star[0]);
            const ElementId u2 = static_cast<ElementId>(star[1]);
            const ElementId winner = two_way.choose(PairQuery{u1, u2, static_cast<std::uint64_t>(j)});
            match[winner] = j;
            for (int u : star) ++ledger[static_cast<std::size_t>(u)].k;
            rec.dispatch = '2';
            rec.primal_inc = 2.0 * t.eta(l) * (t.zeta(k) - t.zeta(k + 1));
            audit.beta[static_cast<std::size_t>(j)] = b_next(k, l);
            rec.dual_inc = 2.0 * (t.a_of(k + 1, l) - a_kl) + audit.beta[static_cast<std::size_t>(j)];
        } else {
            const ElementId u1 = static_cast<ElementId>(star[0]);
            const ElementId u2 = static_cast<ElementId>(star[1]);
            const ElementId u3 = static_cast<ElementId>(star[2]);
            const ElementId winner = three_way.choose(TripleQuery{u1, u2, u3, static_cast<std::uint64_t>(j)});
            match[winner] = j;
            for (int i = 0; i < 3; ++i) ++ledger[static_cast<std::size_t>(star[static_cast<std::size_t>(i)])].ell;
            rec.dispatch = '3';
            rec.primal_inc = 3.0 * t.zeta(k) * (t.eta(l) - t.eta(l + 1));
            audit.beta[static_cast<std::size_t>(j)] = t.b_of(k, l);
            rec.dual_inc = 3.0 * (t.a_of(k, l + 1) - a_kl) + audit.beta[static_cast<std::size_t>(j)];
        }
        audit.iterations.push_back(rec);
    }

    for (int u = 0; u < n; ++u) {
        const Ledger& lg = ledger[static_cast<std::size_t>(u)];
        audit.alpha[static_cast<std::size_t>(u)] = lg.det ? t.a_limit : t.a_of(lg.k, lg.ell);
    }
    for (const auto& it : audit.iterations) {
        audit.primal_total += it.primal_inc;
        audit.dual_total += it.dual_inc;
    }

    result.match_of_offline = match;
    result.value_of_offline.assign(static_cast<std::size_t>(n), 0.0);
    for (int u = 0; u < n; ++u)
        if (match[static_cast<std::size_t>(u)] >= 0) {
            result.value_of_offline[static_cast<std::size_t>(u)] = 1.0;
            result.alg_value += 1.0;
        }
    return result;
}

// ---------------------------------------------------------------------------
// Weighted variant
// ---------------------------------------------------------------------------

namespace {

// Per offline vertex: right-closed segments (prev_hi, hi] carrying the dual
// value, the run products of the two bound functions, and the dispatch counts
// at that weight level. Beyond the last cut everything is in its virgin state.
struct Segment {
    double hi = 0;
    double alpha = 0;
    double zprod = 1;   // product of zeta over pair runs at this level
    double eprod = 1;   // product of eta over triple runs at this level
    int k = 0;
    int ell = 0;
};

struct Profile {
    std::vector<Segment> segs;
    std::vector<double> pair_seq, triple_seq;   // dispatch levels in arrival order
    double det_threshold = 0;                   // 0 = never deterministically matched
    double last_pair = 0;
    double last_triple = 0, second_last_triple = 0;
    double best = 0;

    bool det_at(double hi) const { return hi <= det_threshold; }

    void ensure_cut(double w) {
        if (w <= 0) return;
        std::size_t i = 0;
        while (i < segs.size() && segs[i].hi < w) ++i;
        if (i == segs.size()) {
            segs.push_back(Segment{w, 0.0, 1.0, 1.0, 0, 0});
            return;
        }
        if (segs[i].hi == w) return;
        Segment split = segs[i];
        split.hi = w;
        segs.insert(segs.begin() + static_cast<std::ptrdiff_t>(i), split);
    }

    double alpha_integral() const {
        double total = 0, lo = 0;
        for (const auto& s : segs) {
            total += (s.hi - lo) * s.alpha;
            lo = s.hi;
        }
        return total;
    }

    double ybar_integral() const {
        double total = 0, lo = 0;
        for (const auto& s : segs) {
            const double ybar = det_at(s.hi) ? 1.0 : 1.0 - s.zprod * s.eprod;
            total += (s.hi - lo) * ybar;
            lo = s.hi;
        }
        return total;
    }
};

// Trailing run lengths of `seq` at each queried threshold; thresholds must be
// ascending and the result is non-increasing.
std::vector<int> trailing_runs(const std::vector<double>& seq, const std::vector<double>& thresholds) {
    std::vector<double> suffix_min(seq.size() + 1, kInf);
    for (std::size_t j = 1; j <= seq.size(); ++j)
        suffix_min[j] = std::min(suffix_min[j - 1], seq[seq.size() - j]);
    std::vector<int> out(thresholds.size(), 0);
    std::size_t t = seq.size();
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        while (t > 0 && suffix_min[t] < thresholds[i]) --t;
        out[i] = static_cast<int>(t);
    }
    return out;
}

struct WeightedRunner {
    const DualTables& t;
    double gamma;   // pair selector guarantee used by the prepayments
    double d1, d2;
    std::vector<Profile> profiles;
    DualAudit* audit = nullptr;

    double a_of(const Segment& s) const { return t.a_of(s.k, s.ell); }

    double delta_beta_r3(const Profile& p, double w) const {
        double part_b = 0, part_a = 0, lo = 0;
        for (const auto& s : p.segs) {
            if (lo < w) {
                const double len = std::min(s.hi, w) - lo;
                if (len > 0) part_b += len * (p.det_at(s.hi) ? 0.0 : t.b_of(s.k, s.ell));
            }
            if (s.hi > w) {
                const double len = s.hi - std::max(lo, w);
                if (len > 0) part_a += len * (p.det_at(s.hi) ? t.a_limit : t.a_of(s.k, s.ell));
            }
            lo = s.hi;
        }
        if (w > lo) part_b += (w - lo) * t.b_of(0, 0);
        return part_b - part_a / 3.0;
    }

    void check_invariant(const Profile& p) {
        double lo = 0;
        for (const auto& s : p.segs) {
            const double target = p.det_at(s.hi) ? t.a_limit : t.a_of(s.k, s.ell);
            const double slack = s.alpha - target;
            if (s.hi > lo) {
                audit->min_invariant_slack = std::min(audit->min_invariant_slack, slack);
                if (slack < -audit->invariant_tol) ++audit->invariant_violations;
            }
            lo = s.hi;
        }
    }

    // Deterministic match of u at weight level w.
    std::pair<double, double> apply_det(Profile& p, double w) {
        p.ensure_cut(w);
        double dual = 0, primal = 0, lo = 0;
        for (auto& s : p.segs) {
            if (s.hi > w) break;
            const double len = s.hi - lo;
            lo = s.hi;
            if (p.det_at(s.hi)) continue;
            primal += len * (s.zprod * s.eprod);   // ybar jumps to 1
            const double inc = std::max(0.0, t.a_limit - s.alpha);
            s.alpha += inc;
            dual += len * inc;
        }
        p.det_threshold = std::max(p.det_threshold, w);
        p.best = std::max(p.best, w);
        check_invariant(p);
        return {primal, dual};
    }

    // Pair dispatch of u at weight level w. Returns (primal, dual) increments.
    std::pair<double, double> apply_pair(Profile& p, double w) {
        p.ensure_cut(w);
        const double w_last = p.last_pair;

        std::vector<double> heights;
        for (const auto& s : p.segs)
            if (s.hi <= w && !p.det_at(s.hi)) heights.push_back(s.hi);
        const std::vector<int> runs = trailing_runs(p.pair_seq, heights);

        double dual = 0, primal = 0, lo = 0;
        std::size_t hi_idx = 0;
        for (auto& s : p.segs) {
            const double len = s.hi - lo;
            lo = s.hi;
            if (p.det_at(s.hi)) continue;
            if (s.hi <= w) {
                double inc = t.a_of(s.k + 1, s.ell) - t.a_of(s.k, s.ell);
                if (s.hi > w_last && s.k >= 1)
                    inc -= gamma / 2.0 * t.zeta(s.k) * t.eta(s.ell);
                s.alpha += inc;
                dual += len * inc;

                const int run = runs[hi_idx++];
                const double ratio = (run == 0) ? 0.5 : 0.5 * (1.0 - gamma);
                const double old = s.zprod * s.eprod;
                s.zprod *= ratio;
                primal += len * (old - s.zprod * s.eprod);
                s.k += 1;
            } else if (s.k >= 1) {
                const double inc = gamma / 2.0 * t.zeta(s.k) * t.eta(s.ell);
                s.alpha += inc;
                dual += len * inc;
            }
        }
        p.pair_seq.push_back(w);
        p.last_pair = w;
        check_invariant(p);
        return {primal, dual};
    }

    // Triple dispatch of u at weight level w.
    std::pair<double, double> apply_triple(Profile& p, double w) {
        p.ensure_cut(w);
        const double w1 = p.last_triple;          // last triple level
        const double w2 = p.second_last_triple;   // second-to-last triple level

        std::vector<double> heights;
        for (const auto& s : p.segs)
            if (s.hi <= w && !p.det_at(s.hi)) heights.push_back(s.hi);
        const std::vector<int> runs = trailing_runs(p.triple_seq, heights);

        const double pay1 = 2.0 * d1 / 3.0;                         // covers the next triple
        const double pay12 = 2.0 * (d1 + d2 - d1 * d2) / 3.0;       // next triple, deep history
        const double pay2 = 2.0 * (d2 - d1 * d2) / 3.0;             // covers the second-next triple

        double dual = 0, primal = 0, lo = 0;
        std::size_t hi_idx = 0;
        for (auto& s : p.segs) {
            const double len = s.hi - lo;
            lo = s.hi;
            if (p.det_at(s.hi)) continue;
            const double ze = t.zeta(s.k) * t.eta(s.ell);
            if (s.hi <= w) {
                double inc = t.a_of(s.k, s.ell + 1) - t.a_of(s.k, s.ell);
                if (w <= w1 && w <= w2) {
                    // no deficit
                } else if (w1 <= w2) {
                    if (s.hi > w1) {
                        if (s.ell == 1) inc -= pay1 * ze;
                        else if (s.ell >= 2) inc -= pay12 * ze;
                    }
                } else {
                    if (s.hi > w2 && s.hi <= std::min(w1, w)) {
                        if (s.ell >= 2) inc -= pay2 * ze;
                    } else if (s.hi > std::min(w1, w)) {
                        if (s.ell == 1) inc -= pay1 * ze;
                        else if (s.ell >= 2) inc -= pay12 * ze;
                    }
                }
                s.alpha += inc;
                dual += len * inc;

                const int run = runs[hi_idx++];
                double ratio = 2.0 / 3.0;
                if (run >= 1) ratio *= 1.0 - d1;
                if (run >= 2) ratio *= 1.0 - d2;
                const double old = s.zprod * s.eprod;
                s.eprod *= ratio;
                primal += len * (old - s.zprod * s.eprod);
                s.ell += 1;
            } else {
                double inc = 0;
                if (s.ell == 1)
                    inc = pay1 * ze + pay2 * t.zeta(s.k) * t.eta(s.ell + 1);
                else if (s.ell >= 2)
                    inc = pay12 * ze + pay2 * t.zeta(s.k) * t.eta(s.ell + 1);
                s.alpha += inc;
                dual += len * inc;
            }
        }
        p.triple_seq.push_back(w);
        p.second_last_triple = p.last_triple;
        p.last_triple = w;
        check_invariant(p);
        return {primal, dual};
    }
};

} // namespace

RunResult run_weighted(const Instance& instance, const DualTables& tables, std::uint64_t seed) {
    validate_instance(instance);
    if (tables.shape != DualTables::Shape::Rectangle)
        throw std::invalid_argument("weighted runs need tables solved from the rectangular model");

    const int n = instance.offline_count;
    const int n_eff = std::max(3, n);   // padded with isolated vertices so triples exist
    const int m = static_cast<int>(instance.arrivals.size());

    DualTables t = tables;
    t.ensure_tab_length(2 * m + 4);
    t.a[{0, 0}] = 0.0;   // pinned exactly; keeps the tail integrals finite

    RunResult result;
    DualAudit& audit = result.audit;
    audit.gamma = t.gamma;
    audit.alpha.assign(static_cast<std::size_t>(n), 0.0);
    audit.beta.assign(static_cast<std::size_t>(m), 0.0);

    WeightedRunner runner{t, t.params.gamma_b, t.params.delta1, t.params.delta2,
                          std::vector<Profile>(static_cast<std::size_t>(n_eff)), &audit};

    TwoWayOcs two_way(derive_stream(seed, 101));
    ThreeWayOcs three_way(trial_seed(seed, 202));

    std::vector<int> match(static_cast<std::size_t>(n_eff), -1);
    std::vector<double> weight_of(static_cast<std::size_t>(n_eff), 0.0);

    for (int j = 0; j < m; ++j) {
        const auto neighbors = neighbors_of(instance.arrivals[static_cast<std::size_t>(j)]);
        for (const auto& [u, w] : neighbors) audit.edges.push_back(EdgeCheck{u, j, w});

        std::fill(weight_of.begin(), weight_of.end(), 0.0);
        for (const auto& [u, w] : neighbors) weight_of[static_cast<std::size_t>(u)] = w;

        std::vector<std::pair<double, int>> scored;   // (delta beta, id)
        scored.reserve(static_cast<std::size_t>(n_eff));
        for (int u = 0; u < n_eff; ++u)
            scored.emplace_back(
                runner.delta_beta_r3(runner.profiles[static_cast<std::size_t>(u)], weight_of[static_cast<std::size_t>(u)]),
                u);
        std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return x.second < y.second;
        });

        const double d1 = scored[0].first, d2v = scored[1].first, d3v = scored[2].first;
        const double beta_r3 = d1 + d2v + d3v;
        const double beta_r2 = t.params.sigma_r2 * (d1 + d2v);
        const double beta_d = t.params.sigma_d * d1;

        IterationRecord rec;
        rec.arrival_index = j;
        if (beta_r3 <= 0 && beta_r2 <= 0 && beta_d <= 0) {
            rec.dispatch = 'x';
            audit.iterations.push_back(rec);
            continue;
        }

        double primal = 0, dual = 0;
        if (beta_d >= beta_r2 && beta_d >= beta_r3) {
            rec.dispatch = 'd';
            const int u = scored[0].second;
            const auto [pi, di] = runner.apply_det(runner.profiles[static_cast<std::size_t>(u)],
                                                   weight_of[static_cast<std::size_t>(u)]);
            primal = pi;
            dual = di;
            match[static_cast<std::size_t>(u)] = j;
            audit.beta[static_cast<std::size_t>(j)] = beta_d;
        } else if (beta_r2 >= beta_r3) {
            rec.dispatch = '2';
            const int u1 = scored[0].second, u2 = scored[1].second;
            for (int u : {u1, u2}) {
                const auto [pi, di] = runner.apply_pair(runner.profiles[static_cast<std::size_t>(u)],
                                                        weight_of[static_cast<std::size_t>(u)]);
                primal += pi;
                dual += di;
            }
            const ElementId winner = two_way.choose(
                PairQuery{static_cast<ElementId>(u1), static_cast<ElementId>(u2), static_cast<std::uint64_t>(j)});
            match[winner] = j;
            runner.profiles[winner].best = std::max(runner.profiles[winner].best, weight_of[winner]);
            audit.beta[static_cast<std::size_t>(j)] = beta_r2;
        } else {
            rec.dispatch = '3';
            const int u1 = scored[0].second, u2 = scored[1].second, u3 = scored[2].second;
            for (int u : {u1, u2, u3}) {
                const auto [pi, di] = runner.apply_triple(runner.profiles[static_cast<std::size_t>(u)],
                                                          weight_of[static_cast<std::size_t>(u)]);
                primal += pi;
                dual += di;
            }
            const ElementId winner =
                three_way.choose(TripleQuery{static_cast<ElementId>(u1), static_cast<ElementId>(u2),
                                             static_cast<ElementId>(u3), static_cast<std::uint64_t>(j)});
            match[winner] = j;
            runner.profiles[winner].best = std::max(runner.profiles[winner].best, weight_of[winner]);
            audit.beta[static_cast<std::size_t>(j)] = beta_r3;
        }
        rec.primal_inc = primal;
        rec.dual_inc = dual + audit.beta[static_cast<std::size_t>(j)];
        audit.iterations.push_back(rec);
    }

    for (int u = 0; u < n; ++u)
        audit.alpha[static_cast<std::size_t>(u)] = runner.profiles[static_cast<std::size_t>(u)].alpha_integral();
    for (const auto& it : audit.iterations) {
        audit.primal_total += it.primal_inc;
        audit.dual_total += it.dual_inc;
    }

    result.match_of_offline.assign(static_cast<std::size_t>(n), -1);
    result.value_of_offline.assign(static_cast<std::size_t>(n), 0.0);
    for (int u = 0; u < n; ++u) {
        result.match_of_offline[static_cast<std::size_t>(u)] = match[static_cast<std::size_t>(u)];
        result.value_of_offline[static_cast<std::size_t>(u)] = runner.profiles[static_cast<std::size_t>(u)].best;
        result.alg_value += runner.profiles[static_cast<std::size_t>(u)].best;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Offline optima
// ---------------------------------------------------------------------------

namespace {

bool kuhn_augment(int u, const std::vector<std::vector<int>>& adj, std::vector<char>& seen,
                  std::vector<int>& match_arrival) {
    for (int j : adj[static_cast<std::size_t>(u)]) {
        if (seen[static_cast<std::size_t>(j)]) continue;
        seen[static_cast<std::size_t>(j)] = 1;
        if (match_arrival[static_cast<std::size_t>(j)] < 0 ||
            kuhn_augment(match_arrival[static_cast<std::size_t>(j)], adj, seen, match_arrival)) {
            match_arrival[static_cast<std::size_t>(j)] = u;
            return true;
        }
    }
    return false;
}

} // namespace

double offline_optimum_unweighted(const Instance& instance) {
    validate_instance(instance);
    const int n = instance.offline_count;
    const int m = static_cast<int>(instance.arrivals.size());
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int j = 0; j < m; ++j)
        for (const auto& [u, w] : neighbors_of(instance.arrivals[static_cast<std::size_t>(j)]))
            if (w > 0) adj[static_cast<std::size_t>(u)].push_back(j);

    std::vector<int> match_arrival(static_cast<std::size_t>(m), -1);
    int matched = 0;
    for (int u = 0; u < n; ++u) {
        std::vector<char> seen(static_cast<std::size_t>(m), 0);
        if (kuhn_augment(u, adj, seen, match_arrival)) ++matched;
    }
    return matched;
}

double offline_optimum_weighted(const Instance& instance) {
    validate_instance(instance);
    const int n = instance.offline_count;
    const int m = static_cast<int>(instance.arrivals.size());
    const int size = std::max(n, m);
    if (size == 0) return 0.0;

    // Max-weight assignment on the zero-padded square via the potentials method.
    std::vector<std::vector<double>> cost(static_cast<std::size_t>(size) + 1,
                                          std::vector<double>(static_cast<std::size_t>(size) + 1, 0.0));
    for (int j = 0; j < m; ++j)
        for (const auto& [u, w] : neighbors_of(instance.arrivals[static_cast<std::size_t>(j)]))
            cost[static_cast<std::size_t>(u) + 1][static_cast<std::size_t>(j) + 1] = -w;

    std::vector<double> pot_u(static_cast<std::size_t>(size) + 1, 0.0);
    std::vector<double> pot_v(static_cast<std::size_t>(size) + 1, 0.0);
    std::vector<int> assigned(static_cast<std::size_t>(size) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(size) + 1, 0);
    for (int i = 1; i <= size; ++i) {
        assigned[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(size) + 1, kInf);
        std::vector<char> used(static_cast<std::size_t>(size) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = assigned[static_cast<std::size_t>(j0)];
            double delta = kInf;
            int j1 = -1;
            for (int j = 1; j <= size; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost[static_cast<std::size_t>(i0)][static_cast<std::size_t>(j)] -
                                   pot_u[static_cast<std::size_t>(i0)] - pot_v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= size; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    pot_u[static_cast<std::size_t>(assigned[static_cast<std::size_t>(j)])] += delta;
                    pot_v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (assigned[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            assigned[static_cast<std::size_t>(j0)] = assigned[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    double total = 0;
    for (int j = 1; j <= size; ++j)
        total -= cost[static_cast<std::size_t>(assigned[static_cast<std::size_t>(j)])][static_cast<std::size_t>(j)];
    return total;
}

// ---------------------------------------------------------------------------
// Instance generation and experiments
// ---------------------------------------------------------------------------

InstanceKind instance_kind_from_name(const std::string& name) {
    if (name == "random-bipartite") return InstanceKind::RandomBipartite;
    if (name == "upper-triangular-adversarial") return InstanceKind::UpperTriangular;
    if (name == "uniform-weights") return InstanceKind::UniformWeights;
    if (name == "exponential-weights") return InstanceKind::ExponentialWeights;
    throw std::invalid_argument("unknown instance kind `" + name + "`");
}

std::string instance_kind_name(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::RandomBipartite: return "random-bipartite";
        case InstanceKind::UpperTriangular: return "upper-triangular-adversarial";
        case InstanceKind::UniformWeights: return "uniform-weights";
        case InstanceKind::ExponentialWeights: return "exponential-weights";
    }
    return "?";
}

bool instance_kind_weighted(InstanceKind kind) {
    return kind == InstanceKind::UniformWeights || kind == InstanceKind::ExponentialWeights;
}

Instance generate_instance(InstanceKind kind, int n, std::uint64_t seed, double edge_prob) {
    if (n < 1) throw std::invalid_argument("instance size must be positive");
    RandomStream rng = derive_stream(seed, 7);
    Instance inst;
    inst.offline_count = n;
    inst.arrivals.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        Arrival& arrival = inst.arrivals[static_cast<std::size_t>(j)];
        arrival.id = j;
        switch (kind) {
            case InstanceKind::RandomBipartite:
                for (int u = 0; u < n; ++u)
                    if (rng.next_unit() < edge_prob) arrival.edges.emplace_back(u, 1.0);
                break;
            case InstanceKind::UpperTriangular:
                for (int u = j; u < n; ++u) arrival.edges.emplace_back(u, 1.0);
                break;
            case InstanceKind::UniformWeights:
                for (int u = 0; u < n; ++u)
                    if (rng.next_unit() < 0.5) arrival.edges.emplace_back(u, 1.0 - rng.next_unit());
                break;
            case InstanceKind::ExponentialWeights: {
                // Later arrivals dominate; exercises free disposal.
                const double w = std::pow(1.3, j);
                for (int u = 0; u < n; ++u)
                    if (rng.next_unit() < 0.5) arrival.edges.emplace_back(u, w);
                break;
            }
        }
    }
    return inst;
}

RatioSummary ratio_experiment(InstanceKind kind, int n, int trials, std::uint64_t master_seed,
                              const DualTables& tables, bool weighted_algorithm, double audit_tol) {
    if (!weighted_algorithm && instance_kind_weighted(kind))
        throw std::invalid_argument("weighted instance kinds need the weighted algorithm");
    RatioSummary summary;
    summary.min_ratio = kInf;
    double sum = 0, sumsq = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t gen_seed = trial_seed(master_seed, 2 * static_cast<std::uint64_t>(trial));
        const std::uint64_t run_seed = trial_seed(master_seed, 2 * static_cast<std::uint64_t>(trial) + 1);
        const Instance inst = generate_instance(kind, n, gen_seed);
        const RunResult run =
            weighted_algorithm ? run_weighted(inst, tables, run_seed) : run_unweighted(inst, tables, run_seed);
        const double opt =
            weighted_algorithm ? offline_optimum_weighted(inst) : offline_optimum_unweighted(inst);
        RatioRow row;
        row.seed = run_seed;
        row.alg = run.alg_value;
        row.opt = opt;
        row.audit_pass = dual_audit_check(run.audit, audit_tol).pass();
        if (!row.audit_pass) ++summary.audit_failures;
        if (opt > 0) {
            row.ratio = run.alg_value / opt;
            summary.min_ratio = std::min(summary.min_ratio, row.ratio);
            sum += row.ratio;
            sumsq += row.ratio * row.ratio;
            ++summary.counted;
        } else {
            row.ratio = 1.0;
        }
        summary.rows.push_back(row);
    }
    if (summary.counted > 0) {
        summary.mean_ratio = sum / summary.counted;
        const double var = std::max(0.0, sumsq / summary.counted - summary.mean_ratio * summary.mean_ratio);
        summary.std_error = std::sqrt(var / summary.counted);
    }
    return summary;
}

} // namespace ocskit

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ocskit/frlp.hpp"
#include "ocskit/ocs.hpp"

namespace ocskit {

struct Arrival {
    int id = 0;
    std::vector<std::pair<int, double>> edges;   // (offline vertex, weight >= 0)
};

struct Instance {
    int offline_count = 0;
    std::vector<Arrival> arrivals;
};

void validate_instance(const Instance& instance);
Instance instance_from_json(const std::string& text);
std::string instance_to_json(const Instance& instance);

struct IterationRecord {
    int arrival_index = 0;
    char dispatch = 'x';   // 'd' deterministic, '2' pair, '3' triple, 'x' exposed
    double primal_inc = 0;
    double dual_inc = 0;
};

struct EdgeCheck {
    int offline = 0;
    int arrival_index = 0;
    double weight = 0;
};

// Everything needed to re-verify one run: per-iteration increments of the
// primal lower bound and the dual objective, the final duals, and the edge
// list for the feasibility check.
struct DualAudit {
    double gamma = 0;
    std::vector<IterationRecord> iterations;
    std::vector<double> alpha;   // per offline vertex (integral over weight levels)
    std::vector<double> beta;    // per arrival
    std::vector<EdgeCheck> edges;
    double primal_total = 0;
    double dual_total = 0;
    // Weighted runs: worst slack of alpha_u(w) >= a(k_u(w), ell_u(w)) over all
    // audited weight levels, and the count of points violating it beyond tol.
    double min_invariant_slack = std::numeric_limits<double>::infinity();
    int invariant_violations = 0;
    double invariant_tol = 1e-9;
};

struct AuditReport {
    int iteration_violations = 0;
    int feasibility_violations = 0;
    int invariant_violations = 0;
    double worst_iteration_gap = -std::numeric_limits<double>::infinity();
    double worst_feasibility_gap = -std::numeric_limits<double>::infinity();
    double min_invariant_slack = std::numeric_limits<double>::infinity();
    bool pass() const {
        return iteration_violations == 0 && feasibility_violations == 0 && invariant_violations == 0;
    }
};

AuditReport dual_audit_check(const DualAudit& audit, double tol);

struct RunResult {
    std::vector<int> match_of_offline;     // arrival index or -1
    std::vector<double> value_of_offline;  // best weight ever matched (free disposal)
    double alg_value = 0;
    DualAudit audit;
};

// Counter-greedy dispatch over the Q order with re-matching on collision;
// unit weights required.
RunResult run_unweighted(const Instance& instance, const DualTables& tables, std::uint64_t seed);

// Weight-level algorithm with free disposal and prepay-compensate duals.
RunResult run_weighted(const Instance& instance, const DualTables& tables, std::uint64_t seed);

double offline_optimum_unweighted(const Instance& instance);   // augmenting paths
double offline_optimum_weighted(const Instance& instance);     // assignment on the padded square

enum class InstanceKind { RandomBipartite, UpperTriangular, UniformWeights, ExponentialWeights };

InstanceKind instance_kind_from_name(const std::string& name);
std::string instance_kind_name(InstanceKind kind);
bool instance_kind_weighted(InstanceKind kind);

Instance generate_instance(InstanceKind kind, int n, std::uint64_t seed, double edge_prob = 0.3);

struct RatioRow {
    std::uint64_t seed = 0;
    double alg = 0, opt = 0, ratio = 0;
    bool audit_pass = true;
};

struct RatioSummary {
    std::vector<RatioRow> rows;
    double mean_ratio = 0;
    double min_ratio = 0;
    double std_error = 0;
    int audit_failures = 0;
    int counted = 0;   // rows with positive optimum
};

RatioSummary ratio_experiment(InstanceKind kind, int n, int trials, std::uint64_t master_seed,
                              const DualTables& tables, bool weighted_algorithm, double audit_tol = 1e-9);

} // namespace ocskit

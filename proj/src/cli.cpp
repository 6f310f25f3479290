#include "ocskit/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ocskit/bounds.hpp"
#include "ocskit/frlp.hpp"
#include "ocskit/matching.hpp"
#include "ocskit/ocs.hpp"
#include "ocskit/oracle.hpp"

namespace ocskit {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string params_header(const BoundParams& p) {
    std::ostringstream out;
    out << "# params gamma_a=" << fmt(p.gamma_a) << " gamma_b=" << fmt(p.gamma_b)
        << " delta1=" << fmt(p.delta1) << " delta2=" << fmt(p.delta2) << " sigma_r2=" << fmt(p.sigma_r2)
        << " sigma_d=" << fmt(p.sigma_d) << "\n";
    return out.str();
}

// Atomic write: the file appears complete or not at all.
void emit_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    const std::filesystem::path target(out_path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open output file " + tmp.string());
        f << content;
    }
    std::filesystem::rename(tmp, target);
}

std::vector<IndexWindow> parse_windows(const std::string& text) {
    std::vector<IndexWindow> windows;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        IndexWindow w;
        if (std::sscanf(part.c_str(), "%d-%d", &w.first, &w.last) != 2)
            throw CLI::ValidationError("--windows", "expected a-b[,c-d...] with occurrence indices");
        windows.push_back(w);
    }
    return windows;
}

std::string spec_label(const std::vector<IndexWindow>& windows) {
    std::ostringstream out;
    for (const auto& w : windows) out << '[' << w.first << '-' << w.last << ']';
    return out.str();
}

struct CommonOpts {
    std::uint64_t seed = 0;
    std::string out_path;
    std::string mode = "reference";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--seed", opts.seed, "master seed")->envname("OCSKIT_SEED");
    cmd->add_option("--out", opts.out_path, "output file (default: stdout)");
    cmd->add_option("--mode", opts.mode, "constant set: reference (alias: paper) or consistent")
        ->check(CLI::IsMember({"reference", "paper", "consistent"}));
}

std::string config_header(const std::string& subcommand, const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ostringstream out;
    out << "# config subcommand=" << subcommand;
    for (const auto& [k, v] : kv) out << ' ' << k << '=' << v;
    out << "\n";
    return out.str();
}

// ---- bounds ---------------------------------------------------------------

int cmd_bounds(const CommonOpts& common, int max_k) {
    const ParamMode mode = mode_from_name(common.mode);
    const BoundParams params = params_for_mode(mode);
    std::ostringstream out;
    out << config_header("bounds", {{"max-k", std::to_string(max_k)}, {"mode", mode_name(mode)}, {"seed", std::to_string(common.seed)}});
    out << params_header(params);
    out << "k,eta_sum,eta_closed,eta_pow_bound,zeta_product,zeta_unweighted\n";
    bool violation = false;
    for (int k = 0; k <= max_k; ++k) {
        const double es = eta_sum(k, params.gamma_a, params.gamma_b);
        const double ec = eta_closed(k, params);
        const double ep = eta_pow_bound(k, params.delta1, params.delta2);
        if (std::fabs(es - ec) > 1e-9 || ec > ep + 1e-12) violation = true;
        out << k << ',' << fmt(es) << ',' << fmt(ec) << ',' << fmt(ep) << ','
            << fmt(zeta_product(k, params.gamma_b)) << ',' << fmt(zeta_unweighted(k, params.gamma_b)) << "\n";
    }
    emit_output(out.str(), common.out_path);
    return violation ? 1 : 0;
}

// ---- verify / enumerate ---------------------------------------------------

struct QueryInput {
    std::vector<PairQuery> pairs;
    std::vector<TripleQuery> triples;
    std::string label;
    bool is_pairs() const { return !pairs.empty(); }
};

QueryInput load_queries(const std::string& family, int n_pairs, int n_triples, std::uint64_t seed,
                        const std::string& input_path) {
    QueryInput q;
    if (!input_path.empty()) {
        std::ifstream f(input_path);
        if (!f) throw std::runtime_error("cannot read input file " + input_path);
        std::stringstream buffer;
        buffer << f.rdbuf();
        for (const auto& query : parse_replay(buffer.str())) {
            if (std::holds_alternative<PairQuery>(query))
                q.pairs.push_back(std::get<PairQuery>(query));
            else
                q.triples.push_back(std::get<TripleQuery>(query));
        }
        if (!q.pairs.empty() && !q.triples.empty())
            throw std::runtime_error("bound verification needs a homogeneous input (all P or all T)");
        q.label = input_path;
        return q;
    }
    const FamilyKind kind = family_from_name(family);
    if (n_pairs > 0) {
        q.pairs = adversarial_pair_family(kind, n_pairs, seed);
        q.label = family + "(P," + std::to_string(n_pairs) + ")";
    } else if (n_triples > 0) {
        q.triples = adversarial_triple_family(kind, n_triples, seed);
        q.label = family + "(T," + std::to_string(n_triples) + ")";
    } else {
        throw CLI::ValidationError("verify", "one of --pairs or --triples must be positive");
    }
    return q;
}

int cmd_verify(const CommonOpts& common, const std::string& family, int n_pairs, int n_triples,
               const std::string& windows_text, std::uint64_t trials, int max_triples, int max_pairs) {
    const QueryInput input = load_queries(family, n_pairs, n_triples, common.seed, "");
    const double gamma = 1.0 / 16.0;   // the executable selectors' guarantee
    const ElementId element = 0;

    EnumerationResult enumeration = input.is_pairs()
                                        ? enumerate_two_way(input.pairs, element, 6, max_pairs)
                                        : enumerate_three_way(input.triples, element, max_triples);
    const int occurrences = static_cast<int>(enumeration.occurrence_positions.size());

    std::vector<std::vector<IndexWindow>> specs;
    if (windows_text == "all")
        specs = all_window_specs(occurrences);
    else
        specs.push_back(parse_windows(windows_text));

    std::ostringstream out;
    out << config_header("verify", {{"family", family},
                                    {"pairs", std::to_string(n_pairs)},
                                    {"triples", std::to_string(n_triples)},
                                    {"windows", windows_text},
                                    {"trials", std::to_string(trials)},
                                    {"seed", std::to_string(common.seed)}});
    out << params_header(BoundParams::consistent());
    out << "input,spec,exact_or_estimate,bound,pass\n";

    bool violation = false;
    for (const auto& windows : specs) {
        validate_spec(SubsequenceSpec{element, windows}, occurrences);
        double bound = 1.0;
        for (const auto& w : windows)
            bound *= input.is_pairs() ? zeta_product(w.length(), gamma) : eta_sum(w.length(), gamma, gamma);
        const ExactProb exact = never_probability(enumeration, windows);
        const bool exact_pass = exact.value() <= bound + 1e-12;
        if (!exact_pass) violation = true;
        out << input.label << ',' << spec_label(windows) << ',' << fmt(exact.value()) << ',' << fmt(bound)
            << ',' << (exact_pass ? "1" : "0") << "\n";
        if (trials > 0) {
            const SubsequenceSpec spec{element, windows};
            const EstimateWithCI est = input.is_pairs()
                                           ? mc_two_way_never(input.pairs, spec, trials, common.seed)
                                           : mc_three_way_never(input.triples, spec, trials, common.seed);
            // A bound violation is only called when the whole interval sits
            // above the bound; tight bounds otherwise flake on noise.
            const bool mc_pass = est.lower <= bound + 1e-12 && est.lower <= exact.value() &&
                                 exact.value() <= est.upper;
            if (!mc_pass) violation = true;
            out << input.label << ",mc:" << spec_label(windows) << ',' << fmt(est.estimate) << ',' << fmt(bound)
                << ',' << (mc_pass ? "1" : "0") << "\n";
        }
    }
    emit_output(out.str(), common.out_path);
    return violation ? 1 : 0;
}

int cmd_enumerate(const CommonOpts& common, const std::string& input_path, const std::string& family,
                  int n_pairs, int n_triples, const std::string& windows_text, int element_id,
                  const std::string& trace_path, int max_triples, int max_pairs) {
    const QueryInput input = load_queries(family, n_pairs, n_triples, common.seed, input_path);
    const ElementId element = static_cast<ElementId>(element_id);

    std::ostringstream out;
    out << config_header("enumerate", {{"input", input_path.empty() ? input.label : input_path},
                                       {"windows", windows_text},
                                       {"element", std::to_string(element_id)},
                                       {"seed", std::to_string(common.seed)}});
    out << params_header(BoundParams::consistent());

    if (!trace_path.empty()) {
        // Replay once with the master seed and dump the realized trace.
        std::ostringstream trace;
        if (input.is_pairs()) {
            TwoWayOcs machine = new_two_way(common.seed);
            for (const auto& q : input.pairs) machine.choose(q);
            trace << trace_to_json_lines(machine.trace());
        } else {
            ThreeWayOcs machine = new_three_way(common.seed);
            for (const auto& q : input.triples) {
                const ElementId chosen = machine.choose(q);
                trace << "{\"step\":" << q.step << ",\"role\":\"triple\",\"matched\":null,\"output\":" << chosen
                      << "}\n";
            }
        }
        emit_output(trace.str(), trace_path);
    }

    EnumerationResult enumeration = input.is_pairs()
                                        ? enumerate_two_way(input.pairs, element, 6, max_pairs)
                                        : enumerate_three_way(input.triples, element, max_triples);
    const int occurrences = static_cast<int>(enumeration.occurrence_positions.size());
    std::vector<std::vector<IndexWindow>> specs;
    if (windows_text == "all")
        specs = all_window_specs(occurrences);
    else
        specs.push_back(parse_windows(windows_text));

    out << "spec,favorable,total,probability\n";
    for (const auto& windows : specs) {
        validate_spec(SubsequenceSpec{element, windows}, occurrences);
        const ExactProb p = never_probability(enumeration, windows);
        out << spec_label(windows) << ',' << p.favorable << ',' << p.total << ',' << fmt(p.value()) << "\n";
    }
    emit_output(out.str(), common.out_path);
    return 0;
}

// ---- lp ---------------------------------------------------------------

int cmd_lp(const CommonOpts& common, const std::string& variant, int kmax, int ellmax, double sigma_r2,
           double sigma_d, bool consistent_mode, const std::string& export_path) {
    const ParamMode mode = consistent_mode ? ParamMode::Consistent : mode_from_name(common.mode);
    const BoundParams params = params_for_mode(mode, sigma_r2, sigma_d);

    LpModel* model = nullptr;
    UnweightedLpBuild ub;
    WeightedLpBuild wb;
    if (variant == "unweighted") {
        ub = build_unweighted(kmax, ellmax, params, mode);
        model = &ub.model;
    } else {
        wb = build_weighted(kmax, ellmax, params, mode);
        model = &wb.model;
    }
    if (!export_path.empty()) emit_output(export_lp_text(*model), export_path);

    const LpSolution sol = simplex_solve(*model);
    std::ostringstream out;
    out << config_header("lp", {{"variant", variant},
                                {"kmax", std::to_string(kmax)},
                                {"ellmax", std::to_string(ellmax)},
                                {"mode", mode_name(mode)},
                                {"sigma_r2", fmt(sigma_r2)},
                                {"sigma_d", fmt(sigma_d)}});
    out << params_header(params);
    out << "# status = " << status_name(sol.status) << "\n";
    if (sol.status != LpStatus::Optimal) {
        emit_output(out.str(), common.out_path);
        return 1;
    }
    const CheckReport check = check_solution(*model, sol.x);
    char gbuf[32];
    std::snprintf(gbuf, sizeof gbuf, "%.8f", sol.objective);
    out << "# Gamma = " << gbuf << "\n";
    out << "# max_violation = " << fmt(check.max_violation) << "\n";
    out << "k,ell,a,b\n";
    const auto& a_var = (variant == "unweighted") ? ub.a_var : wb.a_var;
    const auto& b_var = (variant == "unweighted") ? ub.b_var : wb.b_var;
    for (const auto& [kl, v] : a_var) {
        const auto b_it = b_var.find(kl);
        out << kl.first << ',' << kl.second << ',' << fmt(sol.x[static_cast<std::size_t>(v)]) << ',';
        out << (b_it != b_var.end() ? fmt(sol.x[static_cast<std::size_t>(b_it->second)]) : std::string("0"));
        out << "\n";
    }
    emit_output(out.str(), common.out_path);
    std::cerr << "Gamma = " << gbuf << " (" << status_name(sol.status)
              << ", max violation " << fmt(check.max_violation) << ")\n";
    return check.ok(1e-8) ? 0 : 1;
}

// ---- simulate ---------------------------------------------------------

int cmd_simulate(const CommonOpts& common, const std::string& variant, const std::string& kind_name, int n,
                 int trials, const std::string& audit, int kmax, int ellmax) {
    const ParamMode mode = mode_from_name(common.mode);
    const BoundParams params = params_for_mode(mode);
    const InstanceKind kind = instance_kind_from_name(kind_name);
    const bool weighted = (variant == "weighted");

    DualTables tables;
    if (weighted) {
        if (kmax < 3) kmax = 10;
        if (ellmax < 3) ellmax = 10;
        const WeightedLpBuild build = build_weighted(kmax, ellmax, params, mode);
        const LpSolution sol = simplex_solve(build.model);
        if (sol.status != LpStatus::Optimal) throw std::runtime_error("weighted table solve failed");
        tables = solved_weighted_tables(build, sol);
    } else {
        if (kmax < 0) kmax = 8;
        if (ellmax < 0) ellmax = 0;
        const UnweightedLpBuild build = build_unweighted(kmax, ellmax, params, mode);
        const LpSolution sol = simplex_solve(build.model);
        if (sol.status != LpStatus::Optimal) throw std::runtime_error("unweighted table solve failed");
        tables = solved_unweighted_tables(build, sol);
    }

    const RatioSummary summary = ratio_experiment(kind, n, trials, common.seed, tables, weighted);

    std::ostringstream out;
    out << config_header("simulate", {{"variant", variant},
                                      {"kind", kind_name},
                                      {"n", std::to_string(n)},
                                      {"trials", std::to_string(trials)},
                                      {"seed", std::to_string(common.seed)},
                                      {"mode", mode_name(mode)},
                                      {"audit", audit},
                                      {"kmax", std::to_string(kmax)},
                                      {"ellmax", std::to_string(ellmax)}});
    out << params_header(params);
    out << "# gamma = " << fmt(tables.gamma) << "\n";
    out << "# mean_ratio = " << fmt(summary.mean_ratio) << " min_ratio = " << fmt(summary.min_ratio)
        << " std_error = " << fmt(summary.std_error) << " mean_ci99 = [" << fmt(summary.mean_ratio - 3 * summary.std_error)
        << "," << fmt(summary.mean_ratio + 3 * summary.std_error) << "]\n";
    out << "seed,alg,opt,ratio,audit_pass\n";
    for (const auto& row : summary.rows)
        out << row.seed << ',' << fmt(row.alg) << ',' << fmt(row.opt) << ',' << fmt(row.ratio) << ','
            << (row.audit_pass ? "1" : "0") << "\n";
    emit_output(out.str(), common.out_path);
    return (audit == "strict" && summary.audit_failures > 0) ? 1 : 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"online correlated selection toolkit"};
    app.require_subcommand(1);
    app.set_config("--config");
    app.allow_config_extras(false);

    CommonOpts common;
    CommonOpts sim_common;
    sim_common.mode = "consistent";   // simulations default to executable-consistent constants

    auto* bounds_cmd = app.add_subcommand("bounds", "emit the bound tables as CSV");
    int max_k = 10;
    bounds_cmd->add_option("--max-k", max_k, "largest run length");
    add_common(bounds_cmd, common);

    auto* verify_cmd = app.add_subcommand("verify", "check never-chosen bounds by enumeration / Monte Carlo");
    std::string family = "all-same", windows_text = "all";
    int n_pairs = 0, n_triples = 0, max_triples = 3, max_pairs = 8;
    std::uint64_t trials = 0;
    verify_cmd->add_option("--family", family, "input family");
    verify_cmd->add_option("--pairs", n_pairs, "number of pair queries");
    verify_cmd->add_option("--triples", n_triples, "number of triple queries");
    verify_cmd->add_option("--windows", windows_text, "a-b[,c-d...] or `all`");
    verify_cmd->add_option("--trials", trials, "Monte Carlo trials (0 = exact only)");
    verify_cmd->add_option("--max-triples", max_triples, "enumeration cap for triples");
    verify_cmd->add_option("--max-pairs", max_pairs, "enumeration cap for pairs");
    add_common(verify_cmd, common);

    auto* enum_cmd = app.add_subcommand("enumerate", "exact probabilities and trace replay");
    std::string input_path, trace_path;
    int element_id = 0;
    enum_cmd->add_option("--input", input_path, "replay file (`P a b` / `T a b c` lines)");
    enum_cmd->add_option("--family", family, "input family (when --input is absent)");
    enum_cmd->add_option("--pairs", n_pairs, "number of pair queries");
    enum_cmd->add_option("--triples", n_triples, "number of triple queries");
    enum_cmd->add_option("--windows", windows_text, "a-b[,c-d...] or `all`");
    enum_cmd->add_option("--element", element_id, "element id to track");
    enum_cmd->add_option("--dump-trace", trace_path, "write the seeded replay trace (JSON lines)");
    enum_cmd->add_option("--max-triples", max_triples, "enumeration cap for triples");
    enum_cmd->add_option("--max-pairs", max_pairs, "enumeration cap for pairs");
    add_common(enum_cmd, common);

    auto* lp_cmd = app.add_subcommand("lp", "build and solve a factor-revealing model");
    std::string variant = "unweighted", export_path;
    int kmax = 8, ellmax = 0;
    double sigma_r2 = 1.3, sigma_d = 2.2;
    bool consistent_flag = false;
    lp_cmd->add_option("--variant", variant, "unweighted|weighted")->check(CLI::IsMember({"unweighted", "weighted"}));
    lp_cmd->add_option("--kmax", kmax, "pair-counter limit");
    lp_cmd->add_option("--ellmax", ellmax, "triple-counter limit");
    lp_cmd->add_option("--sigma-r2", sigma_r2, "pair dispatch scale");
    lp_cmd->add_option("--sigma-d", sigma_d, "deterministic dispatch scale");
    lp_cmd->add_flag("--consistent-mode", consistent_flag, "re-derive deltas at the executable gammas");
    lp_cmd->add_option("--export", export_path, "write the model as text");
    add_common(lp_cmd, common);

    auto* sim_cmd = app.add_subcommand("simulate", "run the online matching algorithms with audits");
    std::string sim_variant = "unweighted", kind_name = "random-bipartite", audit = "strict";
    int n = 20, trials_sim = 100, sim_kmax = -1, sim_ellmax = -1;
    sim_cmd->add_option("--variant", sim_variant, "unweighted|weighted")
        ->check(CLI::IsMember({"unweighted", "weighted"}));
    sim_cmd->add_option("--kind", kind_name, "instance family");
    sim_cmd->add_option("--n", n, "offline vertices / arrivals");
    sim_cmd->add_option("--trials", trials_sim, "seeded runs");
    sim_cmd->add_option("--audit", audit, "strict|off")->check(CLI::IsMember({"strict", "off"}));
    sim_cmd->add_option("--kmax", sim_kmax, "table limit (default 8 unweighted / 10 weighted)");
    sim_cmd->add_option("--ellmax", sim_ellmax, "table limit (default 0 unweighted / 10 weighted)");
    add_common(sim_cmd, sim_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (bounds_cmd->parsed()) return cmd_bounds(common, max_k);
        if (verify_cmd->parsed())
            return cmd_verify(common, family, n_pairs, n_triples, windows_text, trials, max_triples, max_pairs);
        if (enum_cmd->parsed())
            return cmd_enumerate(common, input_path, family, n_pairs, n_triples, windows_text, element_id,
                                 trace_path, max_triples, max_pairs);
        if (lp_cmd->parsed())
            return cmd_lp(common, variant, kmax, ellmax, sigma_r2, sigma_d, consistent_flag, export_path);
        if (sim_cmd->parsed())
            return cmd_simulate(sim_common, sim_variant, kind_name, n, trials_sim, audit, sim_kmax, sim_ellmax);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace ocskit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocskit/ocs.hpp"

namespace ocskit {

// Inclusive range of occurrence indices (positions within the subsequence of
// queries containing the element). Consecutiveness is automatic in this space.
struct IndexWindow {
    int first = 0;
    int last = 0;
    int length() const { return last - first + 1; }
};

struct SubsequenceSpec {
    ElementId element = 0;
    std::vector<IndexWindow> windows;   // sorted, pairwise disjoint
};

void validate_spec(const SubsequenceSpec& spec, int occurrence_count);

struct ExactProb {
    std::uint64_t favorable = 0;
    std::uint64_t total = 1;
    double value() const { return static_cast<double>(favorable) / static_cast<double>(total); }
};

// One exhaustive pass over all coin assignments for a fixed input and element.
// mask_counts[m] is the number of assignments whose set of occurrences where
// the element was chosen equals bitmask m; any window spec is then a subset sum.
struct EnumerationResult {
    ElementId element = 0;
    std::vector<std::size_t> occurrence_positions;
    std::vector<std::uint64_t> mask_counts;
    std::uint64_t total = 1;
    // Pair inputs only: per candidate window, assignments whose ex-post
    // subgraph induced by the window's pairs has no edge.
    std::vector<IndexWindow> edge_windows;
    std::vector<std::uint64_t> no_edge_counts;
};

// All 2^{3n} coin triples; n <= 8 pairs unless max_pairs raised.
EnumerationResult enumerate_two_way(const std::vector<PairQuery>& pairs, ElementId element,
                                    int max_edge_window_len = 6, int max_pairs = 8);

// All (3 * 2^6)^n outcomes of pair choice x first-selector coins x
// second-selector coins; n <= 3 triples unless max_triples raised.
EnumerationResult enumerate_three_way(const std::vector<TripleQuery>& triples, ElementId element,
                                      int max_triples = 3);

ExactProb never_probability(const EnumerationResult& enumeration, const std::vector<IndexWindow>& windows);

ExactProb exact_two_way_never(const std::vector<PairQuery>& pairs, const SubsequenceSpec& spec,
                              int max_pairs = 8);
ExactProb exact_three_way_never(const std::vector<TripleQuery>& triples, const SubsequenceSpec& spec,
                                int max_triples = 3);

// All sets of pairwise disjoint windows over t occurrences (non-empty sets).
std::vector<std::vector<IndexWindow>> all_window_specs(int occurrence_count);

inline constexpr double kWilson999Z = 3.2905267314919255;

struct EstimateWithCI {
    double estimate = 0;
    std::uint64_t trials = 0;
    double lower = 0;
    double upper = 1;
};

EstimateWithCI wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kWilson999Z);

// Seeded Monte Carlo estimate of the never-chosen probability; per-trial seeds
// derive from the master seed by trial index.
EstimateWithCI mc_two_way_never(const std::vector<PairQuery>& pairs, const SubsequenceSpec& spec,
                                std::uint64_t trials, std::uint64_t master_seed);
EstimateWithCI mc_three_way_never(const std::vector<TripleQuery>& triples, const SubsequenceSpec& spec,
                                  std::uint64_t trials, std::uint64_t master_seed);

// Deterministic input families for the bound suites. Arity 2 gives pair
// queries, arity 3 triples; size is the number of queries. The element of
// interest is always id 0.
enum class FamilyKind { AllSame, Alternating, Chained, RandomKRegular };

FamilyKind family_from_name(const std::string& name);
std::string family_name(FamilyKind kind);

std::vector<PairQuery> adversarial_pair_family(FamilyKind kind, int size, std::uint64_t seed = 0);
std::vector<TripleQuery> adversarial_triple_family(FamilyKind kind, int size, std::uint64_t seed = 0);

} // namespace ocskit

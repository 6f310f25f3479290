#include "ocskit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ocskit {

void validate_spec(const SubsequenceSpec& spec, int occurrence_count) {
    int prev_last = -1;
    for (const auto& w : spec.windows) {
        if (w.first < 0 || w.last < w.first || w.last >= occurrence_count)
            throw std::invalid_argument("window out of range of the element's occurrences");
        if (w.first <= prev_last) throw std::invalid_argument("windows must be sorted and disjoint");
        prev_last = w.last;
    }
}

namespace {

std::vector<std::size_t> occurrences_of_pairs(const std::vector<PairQuery>& pairs, ElementId u) {
    std::vector<std::size_t> occ;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (pairs[i].a == u || pairs[i].b == u) occ.push_back(i);
    return occ;
}

std::vector<std::size_t> occurrences_of_triples(const std::vector<TripleQuery>& triples, ElementId u) {
    std::vector<std::size_t> occ;
    for (std::size_t i = 0; i < triples.size(); ++i)
        if (triples[i].a == u || triples[i].b == u || triples[i].c == u) occ.push_back(i);
    return occ;
}

std::uint32_t window_mask(const std::vector<IndexWindow>& windows) {
    std::uint32_t mask = 0;
    for (const auto& w : windows)
        for (int i = w.first; i <= w.last; ++i) mask |= 1u << i;
    return mask;
}

} // namespace

EnumerationResult enumerate_two_way(const std::vector<PairQuery>& pairs, ElementId element,
                                    int max_edge_window_len, int max_pairs) {
    const int n = static_cast<int>(pairs.size());
    if (n > max_pairs) throw std::invalid_argument("too many pairs to enumerate");

    // Normalize steps to positions so trace indices line up with the input.
    std::vector<PairQuery> input = pairs;
    for (int i = 0; i < n; ++i) input[i].step = static_cast<std::uint64_t>(i);

    EnumerationResult res;
    res.element = element;
    res.occurrence_positions = occurrences_of_pairs(input, element);
    const int t = static_cast<int>(res.occurrence_positions.size());
    res.mask_counts.assign(std::size_t{1} << t, 0);
    res.total = std::uint64_t{1} << (3 * n);

    // Occurrence index of each query position, -1 if the element is absent.
    std::vector<int> occ_index(n, -1);
    for (int k = 0; k < t; ++k) occ_index[res.occurrence_positions[k]] = k;

    for (int a = 0; a < t; ++a)
        for (int b = a; b < t && b - a + 1 <= max_edge_window_len; ++b)
            res.edge_windows.push_back(IndexWindow{a, b});
    res.no_edge_counts.assign(res.edge_windows.size(), 0);

    TwoWayOcs machine;
    std::vector<std::pair<int, int>> edges;   // (occurrence of predecessor, occurrence of receiver)
    for (std::uint64_t assign = 0; assign < res.total; ++assign) {
        machine.reset();
        edges.clear();
        std::uint32_t chosen = 0;
        for (int i = 0; i < n; ++i) {
            const auto coins = coin_triple_from_bits(static_cast<unsigned>(assign >> (3 * i)) & 7u);
            const ElementId out = machine.choose_with_coins(input[i], coins);
            const auto& rec = machine.trace().steps.back();
            if (occ_index[i] >= 0 && out == element) chosen |= 1u << occ_index[i];
            if (rec.matched_step) {
                const int p = occ_index[static_cast<int>(*rec.matched_step)];
                const int q = occ_index[i];
                if (p >= 0 && q >= 0) edges.emplace_back(p, q);
            }
        }
        ++res.mask_counts[chosen];
        for (std::size_t w = 0; w < res.edge_windows.size(); ++w) {
            bool has_edge = false;
            for (const auto& e : edges)
                if (e.first >= res.edge_windows[w].first && e.second <= res.edge_windows[w].last) {
                    has_edge = true;
                    break;
                }
            if (!has_edge) ++res.no_edge_counts[w];
        }
    }
    return res;
}

EnumerationResult enumerate_three_way(const std::vector<TripleQuery>& triples, ElementId element,
                                      int max_triples) {
    const int n = static_cast<int>(triples.size());
    if (n > max_triples) throw std::invalid_argument("too many triples to enumerate");

    std::vector<TripleQuery> input = triples;
    for (int i = 0; i < n; ++i) input[i].step = static_cast<std::uint64_t>(i);

    EnumerationResult res;
    res.element = element;
    res.occurrence_positions = occurrences_of_triples(input, element);
    const int t = static_cast<int>(res.occurrence_positions.size());
    res.mask_counts.assign(std::size_t{1} << t, 0);

    std::vector<int> occ_index(n, -1);
    for (int k = 0; k < t; ++k) occ_index[res.occurrence_positions[k]] = k;

    constexpr int kBranches = 192;   // 3 sub-pairs x 8 first coins x 8 second coins
    res.total = 1;
    for (int i = 0; i < n; ++i) res.total *= kBranches;

    ThreeWayOcs machine = new_three_way(0);
    std::vector<int> digits(n, 0);
    for (std::uint64_t assign = 0;; ++assign) {
        machine.reset();
        std::uint32_t chosen = 0;
        for (int i = 0; i < n; ++i) {
            const int d = digits[i];
            const int pair_index = d % 3;
            const unsigned rest = static_cast<unsigned>(d / 3);
            const ElementId out = machine.choose_scripted(input[i], pair_index,
                                                          coin_triple_from_bits(rest & 7u),
                                                          coin_triple_from_bits(rest >> 3));
            if (occ_index[i] >= 0 && out == element) chosen |= 1u << occ_index[i];
        }
        ++res.mask_counts[chosen];
        if (assign + 1 == res.total) break;
        for (int i = 0; i < n; ++i) {
            if (++digits[i] < kBranches) break;
            digits[i] = 0;
        }
    }
    return res;
}

ExactProb never_probability(const EnumerationResult& enumeration, const std::vector<IndexWindow>& windows) {
    const std::uint32_t wmask = window_mask(windows);
    ExactProb p;
    p.total = enumeration.total;
    for (std::size_t m = 0; m < enumeration.mask_counts.size(); ++m)
        if ((m & wmask) == 0) p.favorable += enumeration.mask_counts[m];
    return p;
}

ExactProb exact_two_way_never(const std::vector<PairQuery>& pairs, const SubsequenceSpec& spec, int max_pairs) {
    const auto enumeration = enumerate_two_way(pairs, spec.element, 0, max_pairs);
    validate_spec(spec, static_cast<int>(enumeration.occurrence_positions.size()));
    return never_probability(enumeration, spec.windows);
}

ExactProb exact_three_way_never(const std::vector<TripleQuery>& triples, const SubsequenceSpec& spec,
                                int max_triples) {
    const auto enumeration = enumerate_three_way(triples, spec.element, max_triples);
    validate_spec(spec, static_cast<int>(enumeration.occurrence_positions.size()));
    return never_probability(enumeration, spec.windows);
}

std::vector<std::vector<IndexWindow>> all_window_specs(int occurrence_count) {
    std::vector<std::vector<IndexWindow>> out;
    // Recursively place disjoint windows left to right.
    std::vector<IndexWindow> current;
    auto rec = [&](auto&& self, int from) -> void {
        if (!current.empty()) out.push_back(current);
        for (int a = from; a < occurrence_count; ++a)
            for (int b = a; b < occurrence_count; ++b) {
                current.push_back(IndexWindow{a, b});
                self(self, b + 1);
                current.pop_back();
            }
    };
    rec(rec, 0);
    return out;
}

EstimateWithCI wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) throw std::invalid_argument("at least one trial required");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return EstimateWithCI{phat, trials, std::max(0.0, center - half), std::min(1.0, center + half)};
}

EstimateWithCI mc_two_way_never(const std::vector<PairQuery>& pairs, const SubsequenceSpec& spec,
                                std::uint64_t trials, std::uint64_t master_seed) {
    if (trials == 0) throw std::invalid_argument("at least one trial required");
    const auto occ = occurrences_of_pairs(pairs, spec.element);
    validate_spec(spec, static_cast<int>(occ.size()));
    std::vector<std::size_t> watched;   // query positions inside some window
    for (const auto& w : spec.windows)
        for (int i = w.first; i <= w.last; ++i) watched.push_back(occ[i]);

    std::uint64_t never = 0;
    TwoWayOcs machine;
    for (std::uint64_t t = 0; t < trials; ++t) {
        machine = TwoWayOcs(derive_stream(trial_seed(master_seed, t), 0));
        bool chosen = false;
        std::size_t wi = 0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const ElementId out = machine.choose(pairs[i]);
            if (wi < watched.size() && watched[wi] == i) {
                if (out == spec.element) chosen = true;
                ++wi;
            }
        }
        if (!chosen) ++never;
    }
    return wilson_interval(never, trials);
}

EstimateWithCI mc_three_way_never(const std::vector<TripleQuery>& triples, const SubsequenceSpec& spec,
                                  std::uint64_t trials, std::uint64_t master_seed) {
    if (trials == 0) throw std::invalid_argument("at least one trial required");
    const auto occ = occurrences_of_triples(triples, spec.element);
    validate_spec(spec, static_cast<int>(occ.size()));
    std::vector<std::size_t> watched;
    for (const auto& w : spec.windows)
        for (int i = w.first; i <= w.last; ++i) watched.push_back(occ[i]);

    std::uint64_t never = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        ThreeWayOcs machine = new_three_way(trial_seed(master_seed, t));
        bool chosen = false;
        std::size_t wi = 0;
        for (std::size_t i = 0; i < triples.size(); ++i) {
            const ElementId out = machine.choose(triples[i]);
            if (wi < watched.size() && watched[wi] == i) {
                if (out == spec.element) chosen = true;
                ++wi;
            }
        }
        if (!chosen) ++never;
    }
    return wilson_interval(never, trials);
}

FamilyKind family_from_name(const std::string& name) {
    if (name == "all-same") return FamilyKind::AllSame;
    if (name == "alternating") return FamilyKind::Alternating;
    if (name == "chained") return FamilyKind::Chained;
    if (name == "random-k-regular") return FamilyKind::RandomKRegular;
    throw std::invalid_argument("unknown family `" + name + "`");
}

std::string family_name(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::AllSame: return "all-same";
        case FamilyKind::Alternating: return "alternating";
        case FamilyKind::Chained: return "chained";
        case FamilyKind::RandomKRegular: return "random-k-regular";
    }
    return "?";
}

std::vector<PairQuery> adversarial_pair_family(FamilyKind kind, int size, std::uint64_t seed) {
    if (size < 1) throw std::invalid_argument("family size must be positive");
    std::vector<PairQuery> out;
    out.reserve(static_cast<std::size_t>(size));
    const ElementId u = 0;
    switch (kind) {
        case FamilyKind::AllSame:
            for (int i = 0; i < size; ++i) out.push_back({u, 1, static_cast<std::uint64_t>(i)});
            break;
        case FamilyKind::Alternating:
            // u appears at even positions; the interleaved pairs share element 1.
            for (int i = 0; i < size; ++i) {
                if (i % 2 == 0)
                    out.push_back({u, 1, static_cast<std::uint64_t>(i)});
                else
                    out.push_back({1, 2, static_cast<std::uint64_t>(i)});
            }
            break;
        case FamilyKind::Chained:
            // u-pairs chained through fresh elements: {u,c0},{c0,c1},{u,c1},...
            for (int i = 0; i < size; ++i) {
                const ElementId c = static_cast<ElementId>(1 + i / 2);
                if (i % 2 == 0)
                    out.push_back({u, c, static_cast<std::uint64_t>(i)});
                else
                    out.push_back({c, c + 1, static_cast<std::uint64_t>(i)});
            }
            break;
        case FamilyKind::RandomKRegular: {
            // u in every pair, partners cycling through a pool of ~size/2 ids.
            RandomStream rng = derive_stream(seed, 17);
            const ElementId pool = static_cast<ElementId>(std::max(2, size / 2));
            for (int i = 0; i < size; ++i)
                out.push_back({u, 1 + rng.next_below(pool), static_cast<std::uint64_t>(i)});
            break;
        }
    }
    return out;
}

std::vector<TripleQuery> adversarial_triple_family(FamilyKind kind, int size, std::uint64_t seed) {
    if (size < 1) throw std::invalid_argument("family size must be positive");
    std::vector<TripleQuery> out;
    out.reserve(static_cast<std::size_t>(size));
    const ElementId u = 0;
    switch (kind) {
        case FamilyKind::AllSame:
            for (int i = 0; i < size; ++i) out.push_back({u, 1, 2, static_cast<std::uint64_t>(i)});
            break;
        case FamilyKind::Alternating:
            for (int i = 0; i < size; ++i) {
                if (i % 2 == 0)
                    out.push_back({u, 1, 2, static_cast<std::uint64_t>(i)});
                else
                    out.push_back({1, 2, 3, static_cast<std::uint64_t>(i)});
            }
            break;
        case FamilyKind::Chained:
            // {u,v,w},{u,w,x},{u,x,y},... consecutive triples share one extra element.
            for (int i = 0; i < size; ++i)
                out.push_back({u, static_cast<ElementId>(i + 1), static_cast<ElementId>(i + 2),
                               static_cast<std::uint64_t>(i)});
            break;
        case FamilyKind::RandomKRegular: {
            RandomStream rng = derive_stream(seed, 19);
            const ElementId pool = static_cast<ElementId>(std::max(3, size));
            for (int i = 0; i < size; ++i) {
                const ElementId b = 1 + rng.next_below(pool);
                ElementId c = 1 + rng.next_below(pool);
                while (c == b) c = 1 + rng.next_below(pool);
                out.push_back({u, b, c, static_cast<std::uint64_t>(i)});
            }
            break;
        }
    }
    return out;
}

} // namespace ocskit

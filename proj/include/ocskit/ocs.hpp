#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ocskit/rng.hpp"

namespace ocskit {

using ElementId = std::uint32_t;

struct PairQuery {
    ElementId a = 0;
    ElementId b = 0;
    std::uint64_t step = 0;
};

struct TripleQuery {
    ElementId a = 0;
    ElementId b = 0;
    ElementId c = 0;
    std::uint64_t step = 0;
};

// The three fair bits drawn per pair: sender/receiver, which element to
// correlate on, and the fallback output choice.
struct CoinTriple {
    bool role_bit = false;
    bool element_bit = false;
    bool output_bit = false;
};

inline CoinTriple coin_triple_from_bits(unsigned bits) {
    return CoinTriple{(bits & 1u) != 0, (bits & 2u) != 0, (bits & 4u) != 0};
}

enum class PairRole : std::uint8_t { Sender, Receiver };

struct TwoWayStepRecord {
    std::uint64_t step = 0;
    PairRole role = PairRole::Sender;
    ElementId lo = 0, hi = 0;                    // the pair, canonically ordered
    ElementId want = 0;                          // correlation element
    std::optional<std::uint64_t> matched_step;   // predecessor step if matched
    ElementId annotation = 0;                    // shared element of the matched edge
    ElementId output = 0;
};

struct TwoWayTrace {
    std::vector<TwoWayStepRecord> steps;
};

// Throws if the matched-pair relation is not a partial matching or a matched
// receiver's decision on the annotated element is not opposite to its sender's.
void validate_trace(const TwoWayTrace& trace);

// Abstract two-way selector so an improved pair OCS can replace the default
// second-stage selector of the three-way composition.
class TwoWaySelector {
  public:
    virtual ~TwoWaySelector() = default;
    virtual ElementId choose(const PairQuery& q) = 0;
    // Scripted variant used by exhaustive enumeration; selectors that cannot
    // replay explicit coins throw.
    virtual ElementId choose_with_coins(const PairQuery& q, CoinTriple coins);
    virtual void reset() = 0;
};

// The pair OCS with three random bits per pair. Each pair becomes a sender or
// receiver and picks a correlation element; an ex-post edge to the immediately
// preceding pair on that element forms iff that pair was a sender wanting the
// same element, in which case the receiver's decision on the shared element is
// the opposite of the sender's. Unmatched pairs output by their third bit.
class TwoWayOcs final : public TwoWaySelector {
  public:
    TwoWayOcs() = default;
    explicit TwoWayOcs(RandomStream stream) : stream_(stream) {}

    ElementId choose(const PairQuery& q) override;
    ElementId choose_with_coins(const PairQuery& q, CoinTriple coins) override;

    const TwoWayTrace& trace() const { return trace_; }

    // Clears all per-run state but keeps allocated capacity; the random
    // stream position is unaffected.
    void reset() override;

  private:
    struct LastSeen {
        std::uint32_t trace_index = 0;
        bool sender_wanting = false;   // was a sender whose correlation element is this one
        bool chose = false;            // output decision on this element
        std::uint32_t epoch = 0;
    };

    const LastSeen* find(ElementId e) const;
    void record(ElementId e, std::uint32_t trace_index, bool sender_wanting, bool chose);

    static constexpr std::uint32_t kDenseLimit = 4096;
    std::vector<LastSeen> dense_;
    std::vector<std::pair<ElementId, LastSeen>> sparse_;
    std::uint32_t epoch_ = 1;
    TwoWayTrace trace_;
    RandomStream stream_;
    std::optional<std::uint64_t> last_step_;
};

// Composition of two pair selectors: a uniformly random sub-pair of the triple
// goes to selector A, and A's output together with the left-out element goes
// to selector B, whose choice is the final output. The pair-choice stream and
// the selectors' streams are independent substreams of one master seed.
class ThreeWayOcs {
  public:
    ThreeWayOcs(RandomStream pair_stream, RandomStream a_stream, std::unique_ptr<TwoWaySelector> b);

    explicit ThreeWayOcs(std::uint64_t master_seed, std::unique_ptr<TwoWaySelector> b = nullptr);

    ElementId choose(const TripleQuery& t);

    // Scripted variant for exhaustive enumeration: pair_index in {0,1,2}
    // indexes the sub-pairs of the sorted triple.
    ElementId choose_scripted(const TripleQuery& t, int pair_index, CoinTriple a_coins, CoinTriple b_coins);

    void reset();

    const TwoWayOcs& selector_a() const { return a_; }
    const TwoWaySelector& selector_b() const { return *b_; }

  private:
    ElementId run_step(const TripleQuery& t, int pair_index, const CoinTriple* a_coins, const CoinTriple* b_coins);
    void validate(const TripleQuery& t);

    RandomStream pair_stream_;
    TwoWayOcs a_;
    std::unique_ptr<TwoWaySelector> b_;
    std::optional<std::uint64_t> last_step_;
};

TwoWayOcs new_two_way(std::uint64_t seed);
ThreeWayOcs new_three_way(std::uint64_t seed, std::unique_ptr<TwoWaySelector> b_selector = nullptr);

// Replay input: one query per line, `P a b` or `T a b c`, steps in line order.
using ReplayQuery = std::variant<PairQuery, TripleQuery>;
std::vector<ReplayQuery> parse_replay(const std::string& text);

// Trace dump as JSON lines (step, role, matched, output).
std::string trace_to_json_lines(const TwoWayTrace& trace);

} // namespace ocskit

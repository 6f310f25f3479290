#include "ocskit/ocs.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace ocskit {

ElementId TwoWaySelector::choose_with_coins(const PairQuery&, CoinTriple) {
    throw std::logic_error("this selector does not support scripted coins");
}

const TwoWayOcs::LastSeen* TwoWayOcs::find(ElementId e) const {
    if (e < kDenseLimit) {
        if (e < dense_.size() && dense_[e].epoch == epoch_) return &dense_[e];
        return nullptr;
    }
    for (const auto& kv : sparse_)
        if (kv.first == e) return &kv.second;
    return nullptr;
}

void TwoWayOcs::record(ElementId e, std::uint32_t trace_index, bool sender_wanting, bool chose) {
    if (e < kDenseLimit) {
        if (e >= dense_.size()) dense_.resize(e + 1);
        dense_[e] = LastSeen{trace_index, sender_wanting, chose, epoch_};
        return;
    }
    for (auto& kv : sparse_) {
        if (kv.first == e) {
            kv.second = LastSeen{trace_index, sender_wanting, chose, epoch_};
            return;
        }
    }
    sparse_.emplace_back(e, LastSeen{trace_index, sender_wanting, chose, epoch_});
}

void TwoWayOcs::reset() {
    ++epoch_;
    sparse_.clear();
    trace_.steps.clear();
    last_step_.reset();
}

ElementId TwoWayOcs::choose(const PairQuery& q) {
    CoinTriple coins{stream_.next_bit(), stream_.next_bit(), stream_.next_bit()};
    return choose_with_coins(q, coins);
}

ElementId TwoWayOcs::choose_with_coins(const PairQuery& q, CoinTriple coins) {
    if (q.a == q.b) throw std::invalid_argument("pair query must contain two distinct elements");
    if (last_step_ && q.step <= *last_step_)
        throw std::invalid_argument("pair query steps must be strictly increasing");
    last_step_ = q.step;

    const ElementId lo = std::min(q.a, q.b);
    const ElementId hi = std::max(q.a, q.b);
    const bool receiver = coins.role_bit;
    const ElementId want = coins.element_bit ? hi : lo;
    const ElementId other = (want == lo) ? hi : lo;

    std::optional<std::uint32_t> matched_index;
    ElementId output = 0;
    if (receiver) {
        if (const LastSeen* prev = find(want); prev && prev->sender_wanting) {
            matched_index = prev->trace_index;
            output = prev->chose ? other : want;
        }
    }
    if (!matched_index) output = coins.output_bit ? hi : lo;

    const auto index = static_cast<std::uint32_t>(trace_.steps.size());
    TwoWayStepRecord rec;
    rec.step = q.step;
    rec.role = receiver ? PairRole::Receiver : PairRole::Sender;
    rec.lo = lo;
    rec.hi = hi;
    rec.want = want;
    if (matched_index) {
        rec.matched_step = trace_.steps[*matched_index].step;
        rec.annotation = want;
    }
    rec.output = output;
    trace_.steps.push_back(rec);

    record(lo, index, !receiver && want == lo, output == lo);
    record(hi, index, !receiver && want == hi, output == hi);
    return output;
}

void validate_trace(const TwoWayTrace& trace) {
    std::vector<std::uint64_t> matched_endpoints;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& rec = trace.steps[i];
        if (!rec.matched_step) continue;
        if (rec.role != PairRole::Receiver)
            throw std::logic_error("only receivers can be matched to a predecessor");
        matched_endpoints.push_back(*rec.matched_step);
        matched_endpoints.push_back(rec.step);

        const auto pred = std::find_if(trace.steps.begin(), trace.steps.end(),
                                       [&](const TwoWayStepRecord& r) { return r.step == *rec.matched_step; });
        if (pred == trace.steps.end()) throw std::logic_error("matched predecessor not present in trace");
        const ElementId e = rec.annotation;
        const bool sender_chose_e = pred->output == e;
        const bool receiver_chose_e = rec.output == e;
        if (sender_chose_e == receiver_chose_e)
            throw std::logic_error("matched receiver must decide the shared element opposite to its sender");
    }
    std::sort(matched_endpoints.begin(), matched_endpoints.end());
    if (std::adjacent_find(matched_endpoints.begin(), matched_endpoints.end()) != matched_endpoints.end())
        throw std::logic_error("ex-post edges must form a partial matching");
}

ThreeWayOcs::ThreeWayOcs(RandomStream pair_stream, RandomStream a_stream, std::unique_ptr<TwoWaySelector> b)
    : pair_stream_(pair_stream), a_(a_stream), b_(std::move(b)) {
    if (!b_) throw std::invalid_argument("three-way composition needs a second selector");
}

ThreeWayOcs::ThreeWayOcs(std::uint64_t master_seed, std::unique_ptr<TwoWaySelector> b)
    : pair_stream_(derive_stream(master_seed, 0)), a_(derive_stream(master_seed, 1)) {
    b_ = b ? std::move(b) : std::make_unique<TwoWayOcs>(derive_stream(master_seed, 2));
}

void ThreeWayOcs::validate(const TripleQuery& t) {
    if (t.a == t.b || t.a == t.c || t.b == t.c)
        throw std::invalid_argument("triple query must contain three distinct elements");
    if (last_step_ && t.step <= *last_step_)
        throw std::invalid_argument("triple query steps must be strictly increasing");
    last_step_ = t.step;
}

ElementId ThreeWayOcs::run_step(const TripleQuery& t, int pair_index, const CoinTriple* a_coins,
                                const CoinTriple* b_coins) {
    std::array<ElementId, 3> s{t.a, t.b, t.c};
    std::sort(s.begin(), s.end());
    ElementId x, y, left;
    switch (pair_index) {
        case 0: x = s[0]; y = s[1]; left = s[2]; break;
        case 1: x = s[0]; y = s[2]; left = s[1]; break;
        case 2: x = s[1]; y = s[2]; left = s[0]; break;
        default: throw std::invalid_argument("pair index must be 0, 1, or 2");
    }
    const PairQuery first{x, y, t.step};
    const ElementId a_out = a_coins ? a_.choose_with_coins(first, *a_coins) : a_.choose(first);
    const PairQuery second{a_out, left, t.step};
    return b_coins ? b_->choose_with_coins(second, *b_coins) : b_->choose(second);
}

ElementId ThreeWayOcs::choose(const TripleQuery& t) {
    validate(t);
    const int idx = static_cast<int>(pair_stream_.next_below(3));
    return run_step(t, idx, nullptr, nullptr);
}

ElementId ThreeWayOcs::choose_scripted(const TripleQuery& t, int pair_index, CoinTriple a_coins,
                                       CoinTriple b_coins) {
    validate(t);
    return run_step(t, pair_index, &a_coins, &b_coins);
}

void ThreeWayOcs::reset() {
    a_.reset();
    b_->reset();
    last_step_.reset();
}

TwoWayOcs new_two_way(std::uint64_t seed) { return TwoWayOcs(derive_stream(seed, 0)); }

ThreeWayOcs new_three_way(std::uint64_t seed, std::unique_ptr<TwoWaySelector> b_selector) {
    return ThreeWayOcs(seed, std::move(b_selector));
}

std::vector<ReplayQuery> parse_replay(const std::string& text) {
    std::vector<ReplayQuery> queries;
    std::istringstream in(text);
    std::string line;
    std::uint64_t step = 0;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "P") {
            PairQuery q;
            if (!(ls >> q.a >> q.b)) throw std::invalid_argument("replay line " + std::to_string(line_no) + ": expected `P a b`");
            q.step = step++;
            queries.emplace_back(q);
        } else if (kind == "T") {
            TripleQuery q;
            if (!(ls >> q.a >> q.b >> q.c))
                throw std::invalid_argument("replay line " + std::to_string(line_no) + ": expected `T a b c`");
            q.step = step++;
            queries.emplace_back(q);
        } else {
            throw std::invalid_argument("replay line " + std::to_string(line_no) + ": unknown query kind `" + kind + "`");
        }
    }
    return queries;
}

std::string trace_to_json_lines(const TwoWayTrace& trace) {
    std::ostringstream out;
    for (const auto& rec : trace.steps) {
        out << "{\"step\":" << rec.step
            << ",\"role\":\"" << (rec.role == PairRole::Sender ? "sender" : "receiver") << '"'
            << ",\"pair\":[" << rec.lo << ',' << rec.hi << ']'
            << ",\"want\":" << rec.want << ",\"matched\":";
        if (rec.matched_step)
            out << *rec.matched_step << ",\"annotation\":" << rec.annotation;
        else
            out << "null";
        out << ",\"output\":" << rec.output << "}\n";
    }
    return out.str();
}

} // namespace ocskit

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "seqpred/errors.hpp"
#include "seqpred/machine.hpp"

namespace seqpred {

inline constexpr int kMaxEqualHorizon = 16;

namespace detail {

inline std::vector<std::uint32_t> reachable_states(const MooreMachine& m) {
    std::vector<std::uint32_t> order;
    std::vector<bool> seen(m.state_count, false);
    order.push_back(m.start);
    seen[m.start] = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::uint32_t s = order[i];
        for (int b = 0; b < 2; ++b) {
            std::uint32_t t = m.next[2 * s + b];
            if (!seen[t]) {
                seen[t] = true;
                order.push_back(t);
            }
        }
    }
    return order;
}

} // namespace detail

// Prediction-equivalent machine with the minimal number of states, states
// renumbered breadth-first from the start (0-edge before 1-edge). Two
// machines predict identically on every input iff their canonical forms are
// identical, so canonical equality is the primary dedup mechanism.
inline MooreMachine canonicalize(const MooreMachine& m) {
    // Restrict to the reachable part.
    std::vector<std::uint32_t> reach = detail::reachable_states(m);
    std::vector<std::uint32_t> old_to_new(m.state_count, 0);
    for (std::size_t i = 0; i < reach.size(); ++i) old_to_new[reach[i]] = static_cast<std::uint32_t>(i);
    std::uint32_t n = static_cast<std::uint32_t>(reach.size());
    std::vector<std::uint8_t> out(n);
    std::vector<std::uint32_t> nxt(2 * n);
    for (std::uint32_t s = 0; s < n; ++s) {
        out[s] = m.out[reach[s]];
        nxt[2 * s] = old_to_new[m.next[2 * reach[s]]];
        nxt[2 * s + 1] = old_to_new[m.next[2 * reach[s] + 1]];
    }

    // Moore partition refinement: initially split by output, then refine by
    // successor blocks until stable.
    std::vector<std::uint32_t> block(n);
    for (std::uint32_t s = 0; s < n; ++s) block[s] = out[s];
    std::uint32_t block_count = 2;
    for (;;) {
        // Signature of a state: (block, block of 0-successor, block of 1-successor).
        std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> sig(n);
        for (std::uint32_t s = 0; s < n; ++s)
            sig[s] = {block[s], block[nxt[2 * s]], block[nxt[2 * s + 1]]};
        // Renumber distinct signatures in order of first appearance.
        std::vector<std::uint32_t> new_block(n);
        std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>,
                 std::uint32_t>
            known;
        for (std::uint32_t s = 0; s < n; ++s) {
            auto it = known.emplace(sig[s], static_cast<std::uint32_t>(known.size())).first;
            new_block[s] = it->second;
        }
        std::uint32_t new_count = static_cast<std::uint32_t>(known.size());
        block.swap(new_block);
        if (new_count == block_count) break;
        block_count = new_count;
    }

    // Quotient machine on blocks.
    std::uint32_t qn = block_count;
    std::vector<std::uint8_t> qout(qn, 0);
    std::vector<std::uint32_t> qnext(2 * qn, 0);
    for (std::uint32_t s = 0; s < n; ++s) {
        qout[block[s]] = out[s];
        qnext[2 * block[s]] = block[nxt[2 * s]];
        qnext[2 * block[s] + 1] = block[nxt[2 * s + 1]];
    }
    MooreMachine q{qn, block[0], qout, qnext};

    // BFS renumber from the start; all states are reachable in the quotient.
    std::vector<std::uint32_t> order = detail::reachable_states(q);
    std::vector<std::uint32_t> renum(qn, 0);
    for (std::size_t i = 0; i < order.size(); ++i) renum[order[i]] = static_cast<std::uint32_t>(i);
    MooreMachine c;
    c.state_count = qn;
    c.start = 0;
    c.out.resize(qn);
    c.next.resize(2 * qn);
    for (std::uint32_t s = 0; s < qn; ++s) {
        c.out[renum[s]] = q.out[s];
        c.next[2 * renum[s]] = renum[q.next[2 * s]];
        c.next[2 * renum[s] + 1] = renum[q.next[2 * s + 1]];
    }
    return c;
}

// Exhaustive prediction-equality oracle: true iff predict agrees on every
// input of the given length. Walks the full input prefix tree, so the cost
// is 2^(horizon+1) steps; horizons beyond 16 are refused.
inline bool predictor_equal(const MooreMachine& m1, const MooreMachine& m2,
                            int horizon) {
    if (horizon < 1)
        throw std::invalid_argument("predictor_equal: horizon must be >= 1");
    if (horizon > kMaxEqualHorizon)
        throw capacity_error(
            "predictor_equal: exhaustive check limited to horizon <= " +
                std::to_string(kMaxEqualHorizon),
            kMaxEqualHorizon);
    // Frontier of state pairs after consuming each prefix of length d; the
    // prediction at index d is the output of the state reached, so outputs
    // must agree at every tree node of depth < horizon.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> frontier{{m1.start, m2.start}};
    for (int d = 0; d < horizon; ++d) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> next_frontier;
        next_frontier.reserve(frontier.size() * 2);
        for (auto [s1, s2] : frontier) {
            if (m1.out[s1] != m2.out[s2]) return false;
            if (d + 1 < horizon) {
                next_frontier.emplace_back(m1.next[2 * s1], m2.next[2 * s2]);
                next_frontier.emplace_back(m1.next[2 * s1 + 1], m2.next[2 * s2 + 1]);
            }
        }
        frontier.swap(next_frontier);
    }
    return true;
}

// Packed predictions over the full input prefix tree of the given horizon,
// in breadth-first order (2^horizon - 1 bits). Equal signatures are exactly
// prediction equality on all inputs of that length.
inline std::vector<std::uint64_t> behavior_signature(const MooreMachine& m,
                                                     int horizon) {
    std::size_t nodes = (std::size_t{1} << horizon) - 1;
    std::vector<std::uint64_t> sig((nodes + 63) / 64, 0);
    std::vector<std::uint32_t> frontier{m.start};
    std::size_t idx = 0;
    for (int d = 0; d < horizon; ++d) {
        std::vector<std::uint32_t> next_frontier;
        next_frontier.reserve(frontier.size() * 2);
        for (std::uint32_t s : frontier) {
            if (m.out[s]) sig[idx / 64] |= std::uint64_t{1} << (idx % 64);
            ++idx;
            if (d + 1 < horizon) {
                next_frontier.push_back(m.next[2 * s]);
                next_frontier.push_back(m.next[2 * s + 1]);
            }
        }
        frontier.swap(next_frontier);
    }
    return sig;
}

// Deterministic total order on canonical forms; gives every machine in an
// enumerated class its "canonical ordinal".
inline bool machine_less(const MooreMachine& a, const MooreMachine& b) {
    return std::tie(a.state_count, a.out, a.next, a.start) <
           std::tie(b.state_count, b.out, b.next, b.start);
}

} // namespace seqpred

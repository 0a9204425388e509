#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqpred/canonical.hpp"
#include "seqpred/errors.hpp"
#include "seqpred/machine.hpp"

namespace seqpred {

// Exact enumeration is supported for state bounds up to this value.
inline constexpr std::uint32_t kMaxEnumStates = 3;

// Horizon used when deduplicating classes and checking class equivalence.
inline constexpr int kDedupHorizon = 12;

// Ordered, duplicate-free (up to prediction equivalence) set of predictors.
// Members are stored in canonical form; their position is the machine's
// ordinal, used for deterministic tie-breaking.
struct PredictorClass {
    std::vector<MooreMachine> machines;
    std::string label;

    std::size_t size() const { return machines.size(); }
};

// Nested increasing family of classes.
struct Hierarchy {
    std::vector<PredictorClass> levels;
};

namespace detail {

struct MachineOrder {
    bool operator()(const MooreMachine& a, const MooreMachine& b) const {
        return machine_less(a, b);
    }
};

} // namespace detail

// Builds a class from arbitrary machines: canonicalize, drop duplicates
// (keeping first occurrence), preserve insertion order.
inline PredictorClass make_class(const std::vector<MooreMachine>& machines,
                                 std::string label) {
    PredictorClass cls;
    cls.label = std::move(label);
    std::set<MooreMachine, detail::MachineOrder> seen;
    for (const MooreMachine& m : machines) {
        MooreMachine c = canonicalize(m);
        if (seen.insert(c).second) cls.machines.push_back(std::move(c));
    }
    return cls;
}

// Curated smallest class: the constants plus the lag-1/lag-2
// repeaters. psi^1 needs 4 states, which is why it is curated rather than
// reached through enumeration.
inline PredictorClass curated_f1() {
    return make_class({phi0(), phi1(), psi1(), psi2()}, "curated-F1");
}

// All prediction-inequivalent machines with at most k states, in canonical
// order. Enumerates raw (outputs, transitions, start) tuples and dedups via
// canonical forms; the exhaustive horizon-12 signature oracle cross-checks
// this in the test suite.
inline PredictorClass enumerate_machines(std::uint32_t k) {
    if (k < 1)
        throw std::invalid_argument("enumerate_machines: k must be >= 1");
    if (k > kMaxEnumStates)
        throw capacity_error("enumerate_machines: supported bound is k <= " +
                                 std::to_string(kMaxEnumStates),
                             kMaxEnumStates);
    std::set<MooreMachine, detail::MachineOrder> found;
    for (std::uint32_t s = 1; s <= k; ++s) {
        std::uint64_t out_patterns = std::uint64_t{1} << s;
        std::uint64_t trans_patterns = 1;
        for (std::uint32_t i = 0; i < 2 * s; ++i) trans_patterns *= s;
        for (std::uint64_t outs = 0; outs < out_patterns; ++outs) {
            for (std::uint64_t trans = 0; trans < trans_patterns; ++trans) {
                MooreMachine m;
                m.state_count = s;
                m.out.resize(s);
                m.next.resize(2 * s);
                for (std::uint32_t i = 0; i < s; ++i)
                    m.out[i] = static_cast<std::uint8_t>((outs >> i) & 1);
                std::uint64_t t = trans;
                for (std::uint32_t i = 0; i < 2 * s; ++i) {
                    m.next[i] = static_cast<std::uint32_t>(t % s);
                    t /= s;
                }
                for (std::uint32_t start = 0; start < s; ++start) {
                    m.start = start;
                    found.insert(canonicalize(m));
                }
            }
        }
    }
    PredictorClass cls;
    cls.label = "fsm:" + std::to_string(k);
    cls.machines.assign(found.begin(), found.end());
    return cls;
}

// Union preserving the left operand's order, then appending new members.
inline PredictorClass class_union(const PredictorClass& a, const PredictorClass& b,
                                  std::string label) {
    std::vector<MooreMachine> all = a.machines;
    all.insert(all.end(), b.machines.begin(), b.machines.end());
    return make_class(all, std::move(label));
}

inline bool class_contains(const PredictorClass& cls, const MooreMachine& m) {
    MooreMachine c = canonicalize(m);
    for (const MooreMachine& x : cls.machines)
        if (x == c) return true;
    return false;
}

// Same set of behaviors, decided by canonical forms (equivalently, by
// predictor equality on every input).
inline bool class_equivalent(const PredictorClass& a, const PredictorClass& b) {
    if (a.size() != b.size()) return false;
    std::set<MooreMachine, detail::MachineOrder> sa(a.machines.begin(), a.machines.end());
    for (const MooreMachine& m : b.machines)
        if (!sa.count(m)) return false;
    return true;
}

inline bool is_nested(const Hierarchy& h) {
    for (std::size_t i = 0; i + 1 < h.levels.size(); ++i) {
        std::set<MooreMachine, detail::MachineOrder> upper(
            h.levels[i + 1].machines.begin(), h.levels[i + 1].machines.end());
        for (const MooreMachine& m : h.levels[i].machines)
            if (!upper.count(m)) return false;
    }
    return true;
}

// fsm:1 c fsm:2 c ... c fsm:kmax.
inline Hierarchy fsm_hierarchy(std::uint32_t kmax) {
    Hierarchy h;
    for (std::uint32_t k = 1; k <= kmax; ++k)
        h.levels.push_back(enumerate_machines(k));
    return h;
}

} // namespace seqpred

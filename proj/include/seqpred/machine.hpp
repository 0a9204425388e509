#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqpred/bitseq.hpp"
#include "seqpred/errors.hpp"
#include "seqpred/rational.hpp"

namespace seqpred {

// Binary Moore machine used as a causal predictor: the prediction for a_n is
// the output of the state reached after consuming a_0..a_{n-1} (so the
// prediction stream has the same length as the input and index 0 is the
// start state's output).
struct MooreMachine {
    std::uint32_t state_count = 1;
    std::uint32_t start = 0;
    std::vector<std::uint8_t> out;   // out[s], 0 or 1
    std::vector<std::uint32_t> next; // next[2*s + input_bit]

    std::uint32_t step(std::uint32_t s, bool bit) const {
        return next[2 * s + (bit ? 1 : 0)];
    }

    friend bool operator==(const MooreMachine& a, const MooreMachine& b) = default;
};

inline void check_machine(const MooreMachine& m) {
    if (m.state_count == 0)
        throw std::invalid_argument("machine: state_count must be positive");
    if (m.start >= m.state_count)
        throw std::invalid_argument("machine: start state out of range");
    if (m.out.size() != m.state_count || m.next.size() != 2 * m.state_count)
        throw std::invalid_argument("machine: table sizes do not match state_count");
    for (std::uint8_t o : m.out)
        if (o > 1)
            throw std::invalid_argument("machine: output must be 0 or 1");
    for (std::uint32_t t : m.next)
        if (t >= m.state_count)
            throw std::invalid_argument("machine: transition target out of range");
}

// --- the four named predictors ---------------------------------------------

inline MooreMachine phi0() { return MooreMachine{1, 0, {0}, {0, 0}}; }
inline MooreMachine phi1() { return MooreMachine{1, 0, {1}, {0, 0}}; }

// Last-bit repeater (predicts a_{j-1}); the start output fixes the first
// prediction to 0.
inline MooreMachine psi2() {
    return MooreMachine{2, 0, {0, 1}, {0, 1, 0, 1}};
}

// Lag-2 repeater (predicts a_{j-2}): state encodes the last two bits (u,v)
// as 2u+v, output u; first two predictions are 0.
inline MooreMachine psi1() {
    MooreMachine m;
    m.state_count = 4;
    m.start = 0;
    m.out = {0, 0, 1, 1};
    m.next.resize(8);
    for (std::uint32_t u = 0; u < 2; ++u)
        for (std::uint32_t v = 0; v < 2; ++v)
            for (std::uint32_t x = 0; x < 2; ++x)
                m.next[2 * (2 * u + v) + x] = 2 * v + x;
    return m;
}

// --- execution ---------------------------------------------------------------

inline BitSeq predict(const MooreMachine& m, const BitSeq& a) {
    BitSeq r;
    std::uint32_t s = m.start;
    for (std::size_t i = 0; i < a.size(); ++i) {
        r.push_back(m.out[s] != 0);
        s = m.step(s, a[i]);
    }
    return r;
}

inline std::size_t error_count(const MooreMachine& m, const BitSeq& a, std::size_t n) {
    std::size_t errs = 0;
    std::uint32_t s = m.start;
    for (std::size_t i = 0; i < n; ++i) {
        bool actual = a[i];
        if ((m.out[s] != 0) != actual) ++errs;
        s = m.step(s, actual);
    }
    return errs;
}

// Eq-(1) empirical error rate of m on the first n digits of a.
inline Rat error_rate(const MooreMachine& m, const BitSeq& a, std::size_t n) {
    if (n == 0 || n > a.size())
        throw std::invalid_argument("error_rate: need 1 <= n <= length");
    return Rat(static_cast<std::int64_t>(error_count(m, a, n)),
               static_cast<std::int64_t>(n));
}

// Selected subsequence f*a: the digits of a at positions where the
// prediction is 1, in order.
inline BitSeq run_select(const MooreMachine& m, const BitSeq& a) {
    BitSeq r;
    std::uint32_t s = m.start;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (m.out[s] != 0) r.push_back(a[i]);
        s = m.step(s, a[i]);
    }
    return r;
}

inline std::uint32_t advance_state(const MooreMachine& m, std::uint32_t s,
                                   const BitSeq& prefix) {
    for (std::size_t i = 0; i < prefix.size(); ++i)
        s = m.step(s, prefix[i]);
    return s;
}

// Same machine started from the state it reaches after consuming prefix.
inline MooreMachine advance_start(const MooreMachine& m, const BitSeq& prefix) {
    MooreMachine r = m;
    r.start = advance_state(m, m.start, prefix);
    return r;
}

// Uniformly random machine with 1..max_states states (tables and start
// uniform). Deterministic given the generator state.
inline MooreMachine random_machine(std::mt19937_64& rng, std::uint32_t max_states) {
    std::uniform_int_distribution<std::uint32_t> dcount(1, max_states);
    std::uint32_t k = dcount(rng);
    std::uniform_int_distribution<std::uint32_t> dstate(0, k - 1);
    std::uniform_int_distribution<int> dbit(0, 1);
    MooreMachine m;
    m.state_count = k;
    m.start = dstate(rng);
    m.out.resize(k);
    m.next.resize(2 * k);
    for (std::uint32_t s = 0; s < k; ++s) {
        m.out[s] = static_cast<std::uint8_t>(dbit(rng));
        m.next[2 * s] = dstate(rng);
        m.next[2 * s + 1] = dstate(rng);
    }
    return m;
}

// --- machine file format -----------------------------------------------------
//
//   moore v1 states=<k> start=<id>
//   <id> <output-bit> <next-on-0> <next-on-1>     (one line per state, by id)
//
// Parse errors carry the 1-based line number; serialization round-trips
// exactly.

inline std::string format_machine(const MooreMachine& m) {
    std::ostringstream os;
    os << "moore v1 states=" << m.state_count << " start=" << m.start << "\n";
    for (std::uint32_t s = 0; s < m.state_count; ++s)
        os << s << " " << int(m.out[s]) << " " << m.next[2 * s] << " "
           << m.next[2 * s + 1] << "\n";
    return os.str();
}

inline MooreMachine parse_machine(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;

    auto fail = [&](const std::string& msg) -> void {
        throw parse_error("machine file, line " + std::to_string(lineno) + ": " + msg,
                          lineno);
    };

    if (!std::getline(in, line)) {
        lineno = 1;
        fail("missing header");
    }
    lineno = 1;
    MooreMachine m;
    {
        std::istringstream ls(line);
        std::string magic, version, states_kv, start_kv;
        ls >> magic >> version >> states_kv >> start_kv;
        if (magic != "moore" || version != "v1")
            fail("expected 'moore v1' header");
        if (states_kv.rfind("states=", 0) != 0 || start_kv.rfind("start=", 0) != 0)
            fail("expected states=<k> start=<id>");
        try {
            m.state_count = static_cast<std::uint32_t>(std::stoul(states_kv.substr(7)));
            m.start = static_cast<std::uint32_t>(std::stoul(start_kv.substr(6)));
        } catch (const std::exception&) {
            fail("bad number in header");
        }
        if (m.state_count == 0) fail("states must be positive");
    }
    m.out.assign(m.state_count, 0);
    m.next.assign(2 * m.state_count, 0);
    for (std::uint32_t s = 0; s < m.state_count; ++s) {
        if (!std::getline(in, line)) {
            ++lineno;
            fail("missing state line");
        }
        ++lineno;
        std::istringstream ls(line);
        long long id, outbit, n0, n1;
        if (!(ls >> id >> outbit >> n0 >> n1))
            fail("expected '<id> <output> <next0> <next1>'");
        std::string rest;
        if (ls >> rest) fail("trailing tokens");
        if (id != static_cast<long long>(s)) fail("state ids must be ascending from 0");
        if (outbit != 0 && outbit != 1) fail("output bit must be 0 or 1");
        if (n0 < 0 || n1 < 0 || n0 >= m.state_count || n1 >= m.state_count)
            fail("transition target out of range");
        m.out[s] = static_cast<std::uint8_t>(outbit);
        m.next[2 * s] = static_cast<std::uint32_t>(n0);
        m.next[2 * s + 1] = static_cast<std::uint32_t>(n1);
    }
    if (m.start >= m.state_count) {
        lineno = 1;
        fail("start state out of range");
    }
    return m;
}

inline MooreMachine load_machine(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open machine file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_machine(ss.str());
}

inline void save_machine(const std::string& path, const MooreMachine& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("cannot write machine file: " + path);
    out << format_machine(m);
}

} // namespace seqpred

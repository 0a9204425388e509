#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seqpred/errors.hpp"
#include "seqpred/rational.hpp"

namespace seqpred {

// Finite prefix of a conceptually infinite binary sequence. Storage is
// packed; the public interface is purely index-based.
class BitSeq {
public:
    BitSeq() = default;

    explicit BitSeq(std::vector<bool> bits) : bits_(std::move(bits)) {}

    static BitSeq zeros(std::size_t n) { return BitSeq(std::vector<bool>(n, false)); }
    static BitSeq ones(std::size_t n) { return BitSeq(std::vector<bool>(n, true)); }

    // Strict literal form: only '0'/'1' accepted. File parsing with
    // whitespace tolerance lives in parse_bits below.
    static BitSeq from_string(std::string_view s) {
        BitSeq r;
        r.bits_.reserve(s.size());
        for (char c : s) {
            if (c != '0' && c != '1')
                throw std::invalid_argument("bit literal must contain only 0/1");
            r.bits_.push_back(c == '1');
        }
        return r;
    }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    bool operator[](std::size_t i) const { return bits_[i]; }
    int bit(std::size_t i) const { return bits_[i] ? 1 : 0; }

    void push_back(bool b) { bits_.push_back(b); }

    void append(const BitSeq& other) {
        bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    }

    BitSeq prefix(std::size_t n) const {
        if (n > bits_.size())
            throw std::invalid_argument("prefix: n exceeds length");
        return BitSeq(std::vector<bool>(bits_.begin(), bits_.begin() + n));
    }

    std::string to_string() const {
        std::string s(bits_.size(), '0');
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) s[i] = '1';
        return s;
    }

    // Byte-per-bit copy for hot inner loops.
    std::vector<std::uint8_t> unpacked() const {
        std::vector<std::uint8_t> v(bits_.size());
        for (std::size_t i = 0; i < bits_.size(); ++i)
            v[i] = bits_[i] ? 1 : 0;
        return v;
    }

    friend bool operator==(const BitSeq& a, const BitSeq& b) = default;

private:
    std::vector<bool> bits_;
};

// --- deterministic sequence operators -------------------------------------
//
// All operators act on finite prefixes and discard incomplete trailing
// triples, so P^nu and S^nu outputs of the same input always have equal
// length floor(n/3).

// Subsequence extraction. Offset order is nonstandard: nu=0 -> a_{3i},
// nu=1 -> a_{3i+2}, nu=2 -> a_{3i+1}.
inline BitSeq extract_p(const BitSeq& a, int nu) {
    if (nu < 0 || nu > 2)
        throw std::invalid_argument("extract_p: nu must be 0, 1 or 2");
    static constexpr std::size_t offset[3] = {0, 2, 1};
    std::size_t triples = a.size() / 3;
    BitSeq r;
    for (std::size_t i = 0; i < triples; ++i)
        r.push_back(a[3 * i + offset[nu]]);
    return r;
}

// Within-triple XOR: nu=1 -> a_{3i} ^ a_{3i+2}, nu=2 -> a_{3i+1} ^ a_{3i+2}.
inline BitSeq sum_s(const BitSeq& a, int nu) {
    if (nu != 1 && nu != 2)
        throw std::invalid_argument("sum_s: nu must be 1 or 2");
    std::size_t first = (nu == 1) ? 0 : 1;
    std::size_t triples = a.size() / 3;
    BitSeq r;
    for (std::size_t i = 0; i < triples; ++i)
        r.push_back(a[3 * i + first] != a[3 * i + 2]);
    return r;
}

// Inverse of extract_p on equal-length triples: the result r satisfies
// extract_p(r,0)=x, extract_p(r,1)=y, extract_p(r,2)=z.
inline BitSeq interleave(const BitSeq& x, const BitSeq& y, const BitSeq& z) {
    if (x.size() != y.size() || y.size() != z.size())
        throw std::invalid_argument("interleave: inputs must have equal length");
    BitSeq r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.push_back(x[i]); // offset 0
        r.push_back(z[i]); // offset 1 = P^2 positions
        r.push_back(y[i]); // offset 2 = P^1 positions
    }
    return r;
}

inline std::size_t count_ones(const BitSeq& a, std::size_t n) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (a[i]) ++c;
    return c;
}

// Exact fraction of ones among the first n digits.
inline Rat fraction_ones(const BitSeq& a, std::size_t n) {
    if (n == 0 || n > a.size())
        throw std::invalid_argument("fraction_ones: need 1 <= n <= length");
    return Rat(static_cast<std::int64_t>(count_ones(a, n)),
               static_cast<std::int64_t>(n));
}

inline BitSeq xor_seq(const BitSeq& a, const BitSeq& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("xor_seq: inputs must have equal length");
    BitSeq r;
    for (std::size_t i = 0; i < a.size(); ++i)
        r.push_back(a[i] != b[i]);
    return r;
}

// --- bit file format -------------------------------------------------------
//
// ASCII '0'/'1'; whitespace (including newlines) ignored; any other byte is
// a parse error reported with its byte offset.

inline BitSeq parse_bits(std::string_view text) {
    BitSeq r;
    for (std::size_t off = 0; off < text.size(); ++off) {
        char c = text[off];
        if (c == '0' || c == '1') {
            r.push_back(c == '1');
        } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
                   c == '\v' || c == '\f') {
            continue;
        } else {
            throw parse_error("bit file: invalid byte at offset " +
                                  std::to_string(off),
                              off);
        }
    }
    return r;
}

inline std::string format_bits(const BitSeq& a) {
    std::string out;
    out.reserve(a.size() + a.size() / 64 + 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.push_back(a[i] ? '1' : '0');
        if ((i + 1) % 64 == 0) out.push_back('\n');
    }
    if (a.size() % 64 != 0) out.push_back('\n');
    return out;
}

inline BitSeq load_bits(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open bit file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_bits(ss.str());
}

inline void save_bits(const std::string& path, const BitSeq& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("cannot write bit file: " + path);
    out << format_bits(a);
}

} // namespace seqpred

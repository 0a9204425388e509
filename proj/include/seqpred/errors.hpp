#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seqpred {

// Malformed input text. `where` is a byte offset for bit files and a
// 1-based line number for machine files; the message says which.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, std::size_t where)
        : std::runtime_error(msg), where_(where) {}

    std::size_t where() const { return where_; }

private:
    std::size_t where_;
};

// A request beyond a declared implementation bound. `limit` names the bound
// that was exceeded, or the minimal feasible value where the contract says so.
class capacity_error : public std::runtime_error {
public:
    capacity_error(const std::string& msg, long long limit)
        : std::runtime_error(msg), limit_(limit) {}

    long long limit() const { return limit_; }

private:
    long long limit_;
};

// An adversarial block failed its post-construction certification.
// Carries the ordinal of the best-performing (worst for us) machine and the
// error margin it achieved on the block.
class certification_error : public std::runtime_error {
public:
    certification_error(const std::string& msg, std::size_t worst_machine,
                        double achieved_margin)
        : std::runtime_error(msg),
          worst_machine_(worst_machine),
          achieved_margin_(achieved_margin) {}

    std::size_t worst_machine() const { return worst_machine_; }
    double achieved_margin() const { return achieved_margin_; }

private:
    std::size_t worst_machine_;
    double achieved_margin_;
};

} // namespace seqpred

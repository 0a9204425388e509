#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqpred/bitseq.hpp"
#include "seqpred/canonical.hpp"
#include "seqpred/machine.hpp"
#include "seqpred/predictor_class.hpp"
#include "seqpred/rational.hpp"
#include "seqpred/report.hpp"

namespace seqpred {

// Grid of empirical predictability values I(a; m, n) over hierarchy levels
// and checkpoint lengths, with best-predictor attribution and the tail-max
// limsup proxy per level.
struct Estimate {
    std::vector<std::string> level_labels;
    std::vector<std::size_t> checkpoints;
    std::vector<std::vector<Rat>> values;        // values[level][checkpoint]
    std::vector<std::vector<std::size_t>> best;  // arg-min ordinal per cell
    std::vector<Rat> limsup_proxy;               // per level
};

namespace detail {

// Cumulative error counts of every class member at each checkpoint, one pass
// per machine over the unpacked bits.
inline std::vector<std::vector<std::size_t>> error_counts_at(
    const PredictorClass& cls, const std::vector<std::uint8_t>& bits,
    const std::vector<std::size_t>& checkpoints) {
    std::vector<std::vector<std::size_t>> counts(
        cls.size(), std::vector<std::size_t>(checkpoints.size(), 0));
    for (std::size_t mi = 0; mi < cls.size(); ++mi) {
        const MooreMachine& m = cls.machines[mi];
        std::uint32_t s = m.start;
        std::size_t errs = 0, ci = 0;
        for (std::size_t i = 0; i < bits.size() && ci < checkpoints.size(); ++i) {
            std::uint8_t actual = bits[i];
            errs += (m.out[s] != actual) ? 1u : 0u;
            s = m.next[2 * s + actual];
            while (ci < checkpoints.size() && i + 1 == checkpoints[ci]) {
                counts[mi][ci] = errs;
                ++ci;
            }
        }
    }
    return counts;
}

} // namespace detail

// Minimum ordinal achieving the minimum error rate; ties go to the lower
// canonical ordinal.
inline std::pair<std::size_t, Rat> argmin_predictor(const BitSeq& a,
                                                    const PredictorClass& cls,
                                                    std::size_t n) {
    if (cls.size() == 0)
        throw std::invalid_argument("empirical_I: class must be nonempty");
    if (n == 0 || n > a.size())
        throw std::invalid_argument("empirical_I: need 1 <= n <= length");
    std::size_t best_i = 0;
    std::size_t best_errs = error_count(cls.machines[0], a, n);
    for (std::size_t i = 1; i < cls.size(); ++i) {
        std::size_t e = error_count(cls.machines[i], a, n);
        if (e < best_errs) {
            best_errs = e;
            best_i = i;
        }
    }
    return {best_i, Rat(static_cast<std::int64_t>(best_errs),
                        static_cast<std::int64_t>(n))};
}

// I(a; cls, n): exact minimum of error_rate over the class.
inline Rat empirical_I(const BitSeq& a, const PredictorClass& cls, std::size_t n) {
    return argmin_predictor(a, cls, n).second;
}

inline std::pair<MooreMachine, Rat> best_predictor(const BitSeq& a,
                                                   const PredictorClass& cls,
                                                   std::size_t n) {
    auto [ordinal, err] = argmin_predictor(a, cls, n);
    return {cls.machines[ordinal], err};
}

// Fills the whole (level, checkpoint) grid. The limsup proxy for a level is
// the maximum of its values over checkpoints in the upper half of the
// evaluated range (n >= largest/2).
inline Estimate predictability_curve(const BitSeq& a, const Hierarchy& h,
                                     const std::vector<std::size_t>& checkpoints) {
    if (h.levels.empty())
        throw std::invalid_argument("predictability_curve: empty hierarchy");
    if (checkpoints.empty())
        throw std::invalid_argument("predictability_curve: no checkpoints");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] == 0 || checkpoints[i] > a.size())
            throw std::invalid_argument("predictability_curve: checkpoint out of range");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw std::invalid_argument("predictability_curve: checkpoints must ascend");
    }
    Estimate est;
    est.checkpoints = checkpoints;
    std::vector<std::uint8_t> bits = a.unpacked();
    for (const PredictorClass& cls : h.levels) {
        if (cls.size() == 0)
            throw std::invalid_argument("predictability_curve: empty level");
        est.level_labels.push_back(cls.label);
        auto counts = detail::error_counts_at(cls, bits, checkpoints);
        std::vector<Rat> row;
        std::vector<std::size_t> row_best;
        for (std::size_t ci = 0; ci < checkpoints.size(); ++ci) {
            std::size_t best_i = 0;
            for (std::size_t mi = 1; mi < cls.size(); ++mi)
                if (counts[mi][ci] < counts[best_i][ci]) best_i = mi;
            row.push_back(Rat(static_cast<std::int64_t>(counts[best_i][ci]),
                              static_cast<std::int64_t>(checkpoints[ci])));
            row_best.push_back(best_i);
        }
        Rat proxy(0);
        bool any = false;
        for (std::size_t ci = 0; ci < checkpoints.size(); ++ci) {
            if (checkpoints[ci] * 2 >= checkpoints.back()) {
                if (!any || row[ci] > proxy) proxy = row[ci];
                any = true;
            }
        }
        est.values.push_back(std::move(row));
        est.best.push_back(std::move(row_best));
        est.limsup_proxy.push_back(proxy);
    }
    return est;
}

// CSV per the export contract: level,n,value_num,value_den,best_machine_id.
// `header` (if nonempty) is emitted first as a '#' comment line.
inline std::string estimate_csv(const Estimate& est, const std::string& header = "") {
    std::ostringstream os;
    if (!header.empty()) os << "# " << header << "\n";
    os << "level,n,value_num,value_den,best_machine_id\n";
    for (std::size_t li = 0; li < est.values.size(); ++li)
        for (std::size_t ci = 0; ci < est.checkpoints.size(); ++ci)
            os << (li + 1) << "," << est.checkpoints[ci] << ","
               << est.values[li][ci].numerator() << ","
               << est.values[li][ci].denominator() << "," << est.best[li][ci]
               << "\n";
    return os.str();
}

// Checks that two hierarchies over the same total class agree: exact
// equality at the top level, plus the nesting domination pattern (each h1
// level is bounded below by some h2 level).
inline Report hierarchy_invariance_check(const BitSeq& a, const Hierarchy& h1,
                                         const Hierarchy& h2, std::size_t n) {
    if (h1.levels.empty() || h2.levels.empty())
        throw std::invalid_argument("hierarchy_invariance_check: empty hierarchy");
    if (!class_equivalent(h1.levels.back(), h2.levels.back()))
        throw std::invalid_argument(
            "hierarchy_invariance_check: top levels are not equivalent");

    Report r;
    r.name = "hierarchy-invariance";
    r.add_input("n", std::to_string(n));
    r.add_input("h1_levels", std::to_string(h1.levels.size()));
    r.add_input("h2_levels", std::to_string(h2.levels.size()));

    Rat top1 = empirical_I(a, h1.levels.back(), n);
    Rat top2 = empirical_I(a, h2.levels.back(), n);
    r.add_quantity("top_I_h1", top1);
    r.add_quantity("top_I_h2", top2);
    r.add_verdict("top_level_equal", top1 == top2,
                  to_double(top1 - top2), {"top_I_h1", "top_I_h2"});

    std::vector<Rat> v2;
    for (const PredictorClass& cls : h2.levels) v2.push_back(empirical_I(a, cls, n));
    bool dominated = true;
    for (std::size_t i = 0; i < h1.levels.size(); ++i) {
        Rat v1 = empirical_I(a, h1.levels[i], n);
        r.add_quantity("I_h1_level" + std::to_string(i + 1), v1);
        bool found = false;
        for (const Rat& w : v2)
            if (v1 >= w) found = true;
        dominated = dominated && found;
    }
    for (std::size_t j = 0; j < v2.size(); ++j)
        r.add_quantity("I_h2_level" + std::to_string(j + 1), v2[j]);
    r.add_verdict("domination_pattern", dominated, 0.0,
                  {"top_I_h1", "top_I_h2"});
    return r;
}

} // namespace seqpred

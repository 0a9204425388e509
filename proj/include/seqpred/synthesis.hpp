#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqpred/bitseq.hpp"
#include "seqpred/estimator.hpp"
#include "seqpred/machine.hpp"
#include "seqpred/predictor_class.hpp"
#include "seqpred/rational.hpp"
#include "seqpred/report.hpp"

namespace seqpred {

// Multiplicative-weights penalty factor for the adversarial generator.
inline constexpr double kMwBeta = 0.95;
// Minimum block length the synthesizer will emit.
inline constexpr std::size_t kMinBlock = 64;
// Exhaustive block search is used up to this length when the counting bound
// cannot certify the requested eps.
inline constexpr std::size_t kMaxExhaustiveN = 20;
// Longest period the repeat detector will consider.
inline constexpr std::size_t kDetectorMaxPeriod = 1024;

// Counting-style lower bound on the min error rate an adversarial block of
// length n can force on a class of the given size: 1/2 - sqrt(ln P/(2n)).
inline double mw_sqrt_margin(std::size_t class_size, std::size_t n) {
    return 0.5 - std::sqrt(std::log(static_cast<double>(class_size)) /
                           (2.0 * static_cast<double>(n)));
}

// Mistake-bound guarantee of the anti-majority weighted-majority game with
// factor beta: every expert errs on at least this fraction of the block.
inline double mw_formal_margin(std::size_t class_size, std::size_t n) {
    double nn = static_cast<double>(n);
    double m = (nn * std::log(2.0 / (1.0 + kMwBeta)) -
                std::log(static_cast<double>(class_size))) /
               std::log(1.0 / kMwBeta);
    return std::max(0.0, m / nn);
}

struct BlockRecord {
    enum class Kind { zeros, adversarial };
    Kind kind = Kind::zeros;
    std::size_t length = 0;
    std::size_t level = 0;          // 1-based hierarchy level / stage index
    double certified_margin = 0.0;  // min error rate over the class; 0 for zeros
};

// Record of a synthesis run: every block decision plus the checkpoint list
// (cumulative block ends) at which the estimator should evaluate.
struct SynthesisPlan {
    Rat target{0};
    std::vector<std::string> level_labels;
    std::vector<BlockRecord> blocks;
    std::vector<std::size_t> checkpoints;
    std::vector<std::string> notes;
};

inline std::string plan_text(const SynthesisPlan& plan, const std::string& header = "") {
    std::ostringstream os;
    if (!header.empty()) os << "# " << header << "\n";
    os << "target " << rat_string(plan.target) << "\n";
    os << "levels ";
    for (std::size_t i = 0; i < plan.level_labels.size(); ++i)
        os << (i ? "," : "") << plan.level_labels[i];
    os << "\n";
    for (const BlockRecord& b : plan.blocks)
        os << "block "
           << (b.kind == BlockRecord::Kind::zeros ? "zeros" : "adversarial") << " "
           << b.length << " " << b.level << " " << format_double(b.certified_margin)
           << "\n";
    os << "checkpoints ";
    for (std::size_t i = 0; i < plan.checkpoints.size(); ++i)
        os << (i ? "," : "") << plan.checkpoints[i];
    os << "\n";
    for (const std::string& n : plan.notes) os << "note " << n << "\n";
    return os.str();
}

inline void save_plan(const std::string& path, const SynthesisPlan& plan,
                      const std::string& header = "") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write plan file: " + path);
    out << plan_text(plan, header);
}

// Same machines with start states advanced by the prefix (the class-level
// image of prefix concatenation). Dedup keeps the class duplicate-free, so
// the size never grows.
inline PredictorClass advance_class(const PredictorClass& cls, const BitSeq& prefix) {
    std::vector<MooreMachine> advanced;
    advanced.reserve(cls.size());
    for (const MooreMachine& m : cls.machines)
        advanced.push_back(advance_start(m, prefix));
    return make_class(advanced, cls.label);
}

namespace detail {

// Plays every class member in lockstep over an evolving sequence, keeping
// states and cumulative error counts; the running value min errs / len is
// exactly empirical_I of the sequence so far.
struct ClassRunner {
    const PredictorClass* cls = nullptr;
    std::vector<std::uint32_t> states;
    std::vector<std::size_t> errs;
    std::size_t len = 0;
    std::size_t phi0_idx = static_cast<std::size_t>(-1);

    explicit ClassRunner(const PredictorClass& c) : cls(&c) {
        states.reserve(c.size());
        errs.assign(c.size(), 0);
        for (const MooreMachine& m : c.machines) states.push_back(m.start);
        MooreMachine z = phi0();
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c.machines[i] == z) phi0_idx = i;
    }

    void feed(bool bit) {
        std::uint8_t actual = bit ? 1 : 0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const MooreMachine& m = cls->machines[i];
            if (m.out[states[i]] != actual) ++errs[i];
            states[i] = m.next[2 * states[i] + actual];
        }
        ++len;
    }

    std::size_t min_errs() const {
        return *std::min_element(errs.begin(), errs.end());
    }
    Rat value() const {
        return Rat(static_cast<std::int64_t>(min_errs()),
                   static_cast<std::int64_t>(len));
    }
    std::size_t phi0_errs() const {
        return phi0_idx == static_cast<std::size_t>(-1) ? min_errs() : errs[phi0_idx];
    }
};

// Anti-majority weighted-majority game. choose() picks the bit disagreeing
// with the weighted-majority prediction (a tie resolves the majority to 0)
// and applies the beta penalty to the machines that mispredicted it; it
// does not advance machine states.
struct MwGame {
    std::vector<double> w;

    explicit MwGame(std::size_t n) : w(n, 1.0) {}

    bool choose(const PredictorClass& cls, const std::vector<std::uint32_t>& states) {
        double w1 = 0.0, total = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            total += w[i];
            if (cls.machines[i].out[states[i]]) w1 += w[i];
        }
        int majority = (w1 > total - w1) ? 1 : 0;
        bool bit = majority == 0;
        std::uint8_t actual = bit ? 1 : 0;
        double wmax = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (cls.machines[i].out[states[i]] != actual) w[i] *= kMwBeta;
            wmax = std::max(wmax, w[i]);
        }
        for (double& x : w) x /= wmax;
        return bit;
    }
};

// Internal eps that the MW mistake bound provably meets at this block size,
// with a small float headroom; clamped to [0.05, 0.49].
inline double certify_eps_auto(std::size_t class_size, std::size_t n) {
    double eps = 0.5 - mw_formal_margin(class_size, n) + 0.01;
    return std::min(0.49, std::max(0.05, eps));
}

} // namespace detail

namespace detail {

inline std::pair<std::size_t, Rat> block_min_error_from(
    const PredictorClass& cls, const std::vector<std::uint32_t>& starts,
    const BitSeq& block) {
    std::size_t best_i = 0;
    std::size_t best = block.size() + 1;
    for (std::size_t i = 0; i < cls.size(); ++i) {
        const MooreMachine& m = cls.machines[i];
        std::uint32_t s = starts[i];
        std::size_t e = 0;
        for (std::size_t t = 0; t < block.size(); ++t) {
            std::uint8_t actual = block[t] ? 1 : 0;
            if (m.out[s] != actual) ++e;
            s = m.next[2 * s + actual];
        }
        if (e < best) {
            best = e;
            best_i = i;
        }
    }
    return {best_i, Rat(static_cast<std::int64_t>(best),
                        static_cast<std::int64_t>(block.size()))};
}

inline double certify_or_throw(const PredictorClass& cls,
                               const std::vector<std::uint32_t>& starts,
                               const BitSeq& block, double eps) {
    auto [worst, margin] = block_min_error_from(cls, starts, block);
    double md = to_double(margin);
    if (md < 0.5 - eps - 1e-12)
        throw certification_error(
            "adversarial block certification failed: machine #" +
                std::to_string(worst) + " achieves error rate " + format_double(md) +
                " < 1/2 - eps = " + format_double(0.5 - eps),
            worst, md);
    return md;
}

} // namespace detail

// Min error rate over the class on `block` when it follows `prefix`.
// Returns (worst machine ordinal, its error rate on the block region).
// This direct replay is the certification evaluator.
inline std::pair<std::size_t, Rat> evaluate_block(const PredictorClass& cls,
                                                  const BitSeq& prefix,
                                                  const BitSeq& block) {
    if (cls.size() == 0 || block.empty())
        throw std::invalid_argument("evaluate_block: class and block must be nonempty");
    std::vector<std::uint32_t> starts;
    starts.reserve(cls.size());
    for (const MooreMachine& m : cls.machines)
        starts.push_back(advance_state(m, m.start, prefix));
    return detail::block_min_error_from(cls, starts, block);
}

// Block of length N on which every class member, advanced by the prefix,
// errs at rate >= 1/2 - eps. Generated by the anti-majority multiplicative-
// weights game; when the counting bound cannot reach eps the generator
// falls back to exhaustive maximin search for N <= 20 and reports a
// capacity error (with the minimal sufficient N) otherwise. The post
// condition is certified by direct evaluation over every class member
// before the block is returned.
inline BitSeq adversarial_block(const PredictorClass& cls, const BitSeq& prefix,
                                std::size_t N, double eps) {
    if (N < 1)
        throw std::invalid_argument("adversarial_block: N must be >= 1");
    if (cls.size() == 0)
        throw std::invalid_argument("adversarial_block: class must be nonempty");
    if (!(eps > 0))
        throw std::invalid_argument("adversarial_block: eps must be positive");

    std::vector<std::uint32_t> starts;
    starts.reserve(cls.size());
    for (const MooreMachine& m : cls.machines)
        starts.push_back(advance_state(m, m.start, prefix));

    BitSeq block;
    double bound_eps = 0.5 - mw_sqrt_margin(cls.size(), N);
    if (bound_eps > eps && cls.size() > 1) {
        if (N <= kMaxExhaustiveN) {
            // Exact maximin block; ties go to the lexicographically first mask.
            std::size_t best_score = 0;
            std::uint64_t best_mask = 0;
            bool have = false;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
                std::size_t worst = N + 1;
                for (std::size_t i = 0; i < cls.size() && worst > best_score; ++i) {
                    const MooreMachine& m = cls.machines[i];
                    std::uint32_t s = starts[i];
                    std::size_t e = 0;
                    for (std::size_t t = 0; t < N; ++t) {
                        std::uint8_t actual = (mask >> t) & 1;
                        if (m.out[s] != actual) ++e;
                        s = m.next[2 * s + actual];
                    }
                    worst = std::min(worst, e);
                }
                if (!have || worst > best_score) {
                    best_score = worst;
                    best_mask = mask;
                    have = true;
                }
            }
            for (std::size_t t = 0; t < N; ++t)
                block.push_back((best_mask >> t) & 1);
        } else {
            double minimal = std::ceil(std::log(static_cast<double>(cls.size())) /
                                       (2.0 * eps * eps));
            throw capacity_error(
                "adversarial_block: class of size " + std::to_string(cls.size()) +
                    " cannot be certified at eps=" + format_double(eps) +
                    " with N=" + std::to_string(N) + "; minimal N is " +
                    format_double(minimal),
                static_cast<long long>(minimal));
        }
    } else {
        detail::MwGame game(cls.size());
        std::vector<std::uint32_t> states = starts;
        for (std::size_t t = 0; t < N; ++t) {
            bool bit = game.choose(cls, states);
            std::uint8_t actual = bit ? 1 : 0;
            for (std::size_t i = 0; i < cls.size(); ++i)
                states[i] = cls.machines[i].next[2 * states[i] + actual];
            block.push_back(bit);
        }
    }

    detail::certify_or_throw(cls, starts, block, eps);
    return block;
}

// --- target-predictability synthesis -----------------------------------------

// Sequence whose empirical predictability against the hierarchy's top level
// tracks I0 at the plan's checkpoints. Construction: a zeros bootstrap, one
// adaptive adversarial ramp stopping when the running value crosses I0, then
// alternating maintenance blocks whose individual effect stays under the
// delta/m step bound (delta = I0/8, m = top level index); zero blocks are
// additionally sized so the running value strictly decreases. I0 = 1/2
// degenerates to pure adversarial blocks, I0 = 0 to pure zeros.
inline std::pair<BitSeq, SynthesisPlan> synthesize_target(const Hierarchy& h,
                                                          const Rat& I0,
                                                          std::size_t total_len) {
    if (I0 < Rat(0) || I0 > Rat(1, 2))
        throw std::invalid_argument("synthesize_target: I0 must be in [0, 1/2]");
    if (h.levels.empty() || h.levels.back().size() == 0)
        throw std::invalid_argument("synthesize_target: empty hierarchy");
    if (total_len < 3 * kMinBlock)
        throw capacity_error(
            "synthesize_target: total_len too small for 3 blocks; minimal is " +
                std::to_string(3 * kMinBlock),
            static_cast<long long>(3 * kMinBlock));

    const PredictorClass& top = h.levels.back();
    const std::size_t m = h.levels.size();
    const std::size_t P = top.size();

    SynthesisPlan plan;
    plan.target = I0;
    for (const PredictorClass& cls : h.levels) plan.level_labels.push_back(cls.label);

    BitSeq seq;
    detail::ClassRunner runner(top);

    auto record = [&](BlockRecord::Kind kind, std::size_t length, double margin) {
        plan.blocks.push_back({kind, length, m, margin});
        plan.checkpoints.push_back(seq.size());
    };

    auto emit_zeros = [&](std::size_t length) {
        for (std::size_t i = 0; i < length; ++i) {
            seq.push_back(false);
            runner.feed(false);
        }
        record(BlockRecord::Kind::zeros, length, 0.0);
    };

    // MW block against the runner's current states. Emits up to max_len
    // bits, stopping early once the running value reaches stop_at (if
    // given); certifies the emitted block before recording it.
    auto emit_adversarial = [&](std::size_t max_len, const Rat* stop_at) {
        std::vector<std::uint32_t> starts_snapshot = runner.states;
        detail::MwGame game(P);
        BitSeq block;
        while (block.size() < max_len) {
            bool bit = game.choose(top, runner.states);
            runner.feed(bit);
            seq.push_back(bit);
            block.push_back(bit);
            if (stop_at && block.size() >= kMinBlock && runner.value() >= *stop_at)
                break;
        }
        double eps = detail::certify_eps_auto(P, block.size());
        double margin = detail::certify_or_throw(top, starts_snapshot, block, eps);
        record(BlockRecord::Kind::adversarial, block.size(), margin);
    };

    // Never leave a sub-minimum remainder: a trailing adversarial stub would
    // be too short to certify.
    auto absorb_tail = [&](std::size_t length) {
        std::size_t remaining = total_len - seq.size();
        length = std::min(length, remaining);
        if (remaining - length < kMinBlock) length = remaining;
        return length;
    };

    if (I0 == Rat(1, 2)) {
        std::size_t nominal = std::clamp<std::size_t>(total_len / 4, kMinBlock, 4096);
        while (seq.size() < total_len)
            emit_adversarial(absorb_tail(nominal), nullptr);
        return {std::move(seq), std::move(plan)};
    }

    // Bootstrap zeros, then (for I0 > 0) the adaptive ramp.
    emit_zeros(std::max(kMinBlock, total_len / 8));
    if (I0 > Rat(0)) {
        std::size_t ramp_cap = total_len - seq.size() - 2 * kMinBlock;
        if (ramp_cap >= kMinBlock) emit_adversarial(ramp_cap, &I0);
    }

    const double step = to_double(I0) / 8.0 / static_cast<double>(m);
    while (seq.size() < total_len) {
        std::size_t n = seq.size();
        Rat v = runner.value();
        if (I0 > Rat(0) && v < I0) {
            std::size_t L = absorb_tail(std::max(
                kMinBlock, static_cast<std::size_t>(step * static_cast<double>(n))));
            emit_adversarial(L, nullptr);
        } else if (I0 == Rat(0)) {
            emit_zeros(absorb_tail(std::max(kMinBlock, n)));
        } else {
            // Strictly lowering zeros block: long enough that even phi^0's
            // untouched error count divided by the new length drops below v.
            std::size_t minerrs = runner.min_errs();
            std::size_t zerrs = runner.phi0_errs();
            std::size_t needed = 1;
            if (minerrs > 0 && zerrs > minerrs)
                needed = (n * (zerrs - minerrs)) / minerrs + 1;
            double vd = std::max(to_double(v), step);
            std::size_t cap = static_cast<std::size_t>(
                step * static_cast<double>(n) / (2.0 * vd));
            std::size_t L = std::max({kMinBlock, needed, std::min(cap, total_len - n)});
            emit_zeros(absorb_tail(L));
        }
    }
    return {std::move(seq), std::move(plan)};
}

// --- class separation ----------------------------------------------------------

// Repeated adversarial blocks on the 10^m schedule: stage m repeats a fresh
// block (length 512 + 64*(m-1), adversarial for the whole fsm<=max_state
// class from canonical start states) min(10^m, budget) times. Because the
// class contains every start variant up to equivalence, every repetition is
// individually adversarial for every <=max_state machine, while the growing
// repetition count hands the block to any predictor that can memorize it.
inline BitSeq separation_sequence(std::uint32_t max_state, std::size_t total_len,
                                  SynthesisPlan* plan_out = nullptr) {
    PredictorClass cls = enumerate_machines(max_state);
    constexpr std::size_t kBaseBlock = 512;
    constexpr std::size_t kStageStep = 64;
    std::size_t minimal = kBaseBlock * 10 + 2 * (kBaseBlock + kStageStep);
    if (total_len < minimal)
        throw capacity_error(
            "separation_sequence: need stage 1 plus two repetitions of stage 2; "
            "minimal total_len is " +
                std::to_string(minimal),
            static_cast<long long>(minimal));

    SynthesisPlan plan;
    plan.target = Rat(1, 2);
    plan.level_labels.push_back(cls.label);
    BitSeq seq;
    std::uint64_t schedule = 10;
    for (std::size_t stage = 1;; ++stage) {
        std::size_t N = kBaseBlock + kStageStep * (stage - 1);
        std::size_t remaining = total_len - seq.size();
        if (remaining < N) break;
        std::size_t reps =
            static_cast<std::size_t>(std::min<std::uint64_t>(schedule, remaining / N));
        double eps = detail::certify_eps_auto(cls.size(), N);
        BitSeq block = adversarial_block(cls, BitSeq{}, N, eps);
        auto [worst, margin] = evaluate_block(cls, BitSeq{}, block);
        (void)worst;
        for (std::size_t r = 0; r < reps; ++r) {
            seq.append(block);
            plan.blocks.push_back(
                {BlockRecord::Kind::adversarial, N, stage, to_double(margin)});
            plan.checkpoints.push_back(seq.size());
        }
        std::ostringstream note;
        note << "stage " << stage << ": block length " << N << " repeated " << reps
             << " times (schedule 10^" << stage << " = " << schedule
             << (reps < schedule ? ", capped by budget)" : ")");
        plan.notes.push_back(note.str());
        if (schedule <= (std::uint64_t{1} << 60) / 10) schedule *= 10;
    }
    if (plan_out) *plan_out = std::move(plan);
    return seq;
}

// --- causal repeat detector ------------------------------------------------------
//
// A computable, non-finite-state causal predictor. Policy (deterministic):
// predict a_{i-p} under the current period p; while unlocked predict the
// previous digit. After a wrong prediction, re-search candidate periods
// shortest-first up to min(i, 1024), accepting the first whose suffix
// consistency run reaches twice the period; if none qualifies the detector
// goes unlocked.
inline BitSeq predict_repeat_detector(const BitSeq& a) {
    BitSeq preds;
    std::size_t p = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        bool pred = false;
        if (p > 0 && i >= p)
            pred = a[i - p];
        else if (i > 0)
            pred = a[i - 1];
        preds.push_back(pred);
        if (pred != a[i]) {
            p = 0;
            std::size_t hist = i + 1;
            std::size_t maxp = std::min(kDetectorMaxPeriod, hist);
            for (std::size_t cand = 1; cand <= maxp; ++cand) {
                std::size_t need = 2 * cand;
                if (hist < cand + need) break; // longer candidates need even more history
                bool ok = true;
                for (std::size_t j = hist - need; j < hist; ++j) {
                    if (a[j] != a[j - cand]) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    p = cand;
                    break;
                }
            }
        }
    }
    return preds;
}

} // namespace seqpred

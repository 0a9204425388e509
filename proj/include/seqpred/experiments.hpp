#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqpred/bitseq.hpp"
#include "seqpred/combinators.hpp"
#include "seqpred/estimator.hpp"
#include "seqpred/machine.hpp"
#include "seqpred/predictor_class.hpp"
#include "seqpred/report.hpp"
#include "seqpred/synthesis.hpp"

namespace seqpred {

// Default tolerance for the n = 2e5 Bernoulli experiments (about five
// binomial standard deviations); recorded in every report.
inline constexpr double kDefaultTol = 0.015;

inline std::string machine_compact(const MooreMachine& m) {
    std::ostringstream os;
    os << "states=" << m.state_count << " start=" << m.start << " out=";
    for (std::uint32_t s = 0; s < m.state_count; ++s) os << int(m.out[s]);
    os << " next=";
    for (std::size_t i = 0; i < m.next.size(); ++i) os << (i ? "," : "") << m.next[i];
    return os.str();
}

// Deterministic Bernoulli(p) sampler. PRNG fixed for reproducibility:
// std::mt19937_64 seeded directly; per digit u = (next() >> 11) * 2^-53 and
// the digit is 1 iff u < p. Bit-exact across conforming platforms.
inline BitSeq bernoulli_generate(double p, std::size_t n, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("bernoulli_generate: p must be in [0,1]");
    std::mt19937_64 rng(seed);
    BitSeq a;
    for (std::size_t i = 0; i < n; ++i) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        a.push_back(u < p);
    }
    return a;
}

inline PredictorClass constants_class() {
    return make_class({phi0(), phi1()}, "constants");
}

// I(x) = min{p, q} for iid realizations: the empirical value must sit in the
// tol band around min(p, 1-p), and no class member may beat it by more.
inline Report verify_bernoulli_theorem(double p, std::size_t n, std::uint64_t seed,
                                       const PredictorClass& cls,
                                       double tol = kDefaultTol) {
    if (!class_contains(cls, phi0()) || !class_contains(cls, phi1()))
        throw std::invalid_argument(
            "verify_bernoulli_theorem: class must contain both constant predictors");
    Report r;
    r.name = "verify-bernoulli";
    r.add_input("p", format_double(p));
    r.add_input("n", std::to_string(n));
    r.add_input("seed", std::to_string(seed));
    r.add_input("class", cls.label);
    r.add_input("tol", format_double(tol));

    BitSeq a = bernoulli_generate(p, n, seed);
    Rat ihat = empirical_I(a, cls, n);
    double target = std::min(p, 1.0 - p);
    r.add_quantity("empirical_I", ihat);
    r.add_quantity("target_min_pq", target);
    double diff = to_double(ihat) - target;
    r.add_verdict("within_band", std::abs(diff) <= tol, tol - std::abs(diff),
                  {"empirical_I", "target_min_pq"});
    r.add_verdict("no_machine_beats_min_pq", diff >= -tol, diff + tol,
                  {"empirical_I", "target_min_pq"});
    return r;
}

// I(S^nu a) = 2 I(a) - 2 I(a)^2 for Bernoulli realizations, measured with
// the constant predictors.
inline Report verify_xor_relation(double p, std::size_t n, std::uint64_t seed,
                                  double tol = kDefaultTol) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("verify_xor_relation: need 0 < p < 1");
    Report r;
    r.name = "verify-xor";
    r.add_input("p", format_double(p));
    r.add_input("n", std::to_string(n));
    r.add_input("seed", std::to_string(seed));
    r.add_input("tol", format_double(tol));

    BitSeq a = bernoulli_generate(p, n, seed);
    PredictorClass cls = constants_class();
    double ia = std::min(p, 1.0 - p);
    double target = 2.0 * ia - 2.0 * ia * ia;
    r.add_quantity("target_2I_minus_2I2", target);
    for (int nu = 1; nu <= 2; ++nu) {
        BitSeq b = sum_s(a, nu);
        Rat ib = empirical_I(b, cls, b.size());
        std::string qname = "empirical_I_S" + std::to_string(nu);
        r.add_quantity(qname, ib);
        double diff = std::abs(to_double(ib) - target);
        r.add_verdict("xor_relation_S" + std::to_string(nu), diff <= tol, tol - diff,
                      {qname, "target_2I_minus_2I2"});
    }
    return r;
}

// F-independence bound: max_nu I(S^nu a) >= I(a) (1 + (1 - 2 I(a))/5), with
// Bernoulli realizations as the designated independent exemplar. Asserted
// only when the measured I(a) is clear of 1/2 (the bound's proof breaks
// down there).
inline Report verify_independence_bound(double p, std::size_t n, std::uint64_t seed,
                                        double tol = kDefaultTol) {
    if (!(p > 0.0 && p < 0.5))
        throw std::invalid_argument("verify_independence_bound: need 0 < p < 1/2");
    Report r;
    r.name = "verify-independence";
    r.add_input("p", format_double(p));
    r.add_input("n", std::to_string(n));
    r.add_input("seed", std::to_string(seed));
    r.add_input("tol", format_double(tol));

    BitSeq a = bernoulli_generate(p, n, seed);
    PredictorClass cls = constants_class();
    Rat ia = empirical_I(a, cls, n);
    double iad = to_double(ia);
    double bound = iad * (1.0 + (1.0 - 2.0 * iad) / 5.0);
    r.add_quantity("empirical_I_a", ia);
    r.add_quantity("bound", bound);
    double best = 0.0;
    for (int nu = 1; nu <= 2; ++nu) {
        BitSeq b = sum_s(a, nu);
        Rat ib = empirical_I(b, cls, b.size());
        r.add_quantity("empirical_I_S" + std::to_string(nu), ib);
        best = std::max(best, to_double(ib));
    }
    r.add_quantity("max_I_Snu", best);
    if (iad >= 0.5 - tol) {
        r.notes.push_back("bound not asserted: empirical I(a) within tol of 1/2");
        r.add_verdict("independence_bound", true, 0.0,
                      {"empirical_I_a", "bound", "max_I_Snu"});
    } else {
        r.add_verdict("independence_bound", best >= bound - tol, best - bound + tol,
                      {"empirical_I_a", "bound", "max_I_Snu"});
    }
    return r;
}

// Main disjunction: either a transform (P^nu or S^nu) is harder by gamma, or
// the constructed witness predicts a useful fraction of ones while selecting
// a near-unpredictable subsequence. Branch selection uses the exact
// inequality; the verdict allows the stated tolerance.
inline Report verify_main_disjunction(const BitSeq& a, const Rat& gamma,
                                      const PredictorClass& cls, std::size_t n,
                                      double tol = kDefaultTol) {
    if (!(gamma > Rat(0)))
        throw std::invalid_argument("verify_main_disjunction: gamma must be positive");
    if (n < 3 || n > a.size())
        throw std::invalid_argument("verify_main_disjunction: need 3 <= n <= length");
    Rat ihat = empirical_I(a, cls, n);
    if (ihat == Rat(0))
        throw std::invalid_argument("Theorem assumes I(a) > 0");

    Report r;
    r.name = "verify-main";
    r.add_input("n", std::to_string(n));
    r.add_input("class", cls.label);
    r.add_input("gamma", rat_string(gamma));
    r.add_input("tol", format_double(tol));
    r.add_quantity("empirical_I_a", ihat);

    std::size_t n3 = n / 3;
    BitSeq head = a.prefix(n);
    struct Transform {
        std::string name;
        BitSeq seq;
    };
    std::vector<Transform> transforms;
    for (int nu = 0; nu <= 2; ++nu)
        transforms.push_back({"P" + std::to_string(nu), extract_p(head, nu)});
    for (int nu = 1; nu <= 2; ++nu)
        transforms.push_back({"S" + std::to_string(nu), sum_s(head, nu)});

    bool branch1_exact = false;
    bool branch1_tol = false;
    std::string witness_transform;
    for (const Transform& t : transforms) {
        Rat it = empirical_I(t.seq, cls, n3);
        r.add_quantity("empirical_I_" + t.name, it);
        if (it >= ihat + gamma && !branch1_exact) {
            branch1_exact = true;
            witness_transform = t.name;
        }
        if (to_double(it) >= to_double(ihat + gamma) - tol) branch1_tol = true;
    }

    bool verdict;
    if (branch1_exact) {
        r.add_quantity("branch", 1.0);
        r.notes.push_back("branch 1 witness: " + witness_transform);
        verdict = true;
    } else {
        r.add_quantity("branch", 2.0);
        MooreMachine witness;
        if (gamma >= ihat / 8) {
            // The constant predictor phi^1 settles both inequalities: the
            // right-hand side of the selection bound is <= 0.
            witness = phi1();
            r.notes.push_back("branch 2 witness: phi1 (gamma >= I(a)/8)");
        } else {
            MooreMachine eta1 = best_predictor(sum_s(head, 1), cls, n3).first;
            MooreMachine eta2 = best_predictor(sum_s(head, 2), cls, n3).first;
            witness = construct_tilde_f(eta1, eta2);
            r.notes.push_back("branch 2 witness: tilde-f over best predictors of S1/S2");
        }
        Rat efa = fraction_ones(predict(witness, head), n);
        Rat e_floor = ihat / 4;
        Rat rhs = Rat(1, 2) - Rat(4) * gamma / ihat;
        r.add_quantity("E_witness", efa);
        r.add_quantity("E_floor_I_over_4", e_floor);
        r.add_quantity("selection_floor", rhs);
        bool c1 = to_double(efa) >= to_double(e_floor) - tol;
        BitSeq selected = run_select(witness, head);
        bool c2;
        double c2_margin;
        if (selected.empty()) {
            c2 = rhs <= Rat(0);
            c2_margin = -to_double(rhs);
            r.notes.push_back("witness selected nothing; bound vacuous iff floor <= 0");
        } else {
            Rat isel = empirical_I(selected, cls, selected.size());
            r.add_quantity("empirical_I_selected", isel);
            c2 = to_double(isel) >= to_double(rhs) - tol;
            c2_margin = to_double(isel) - to_double(rhs) + tol;
        }
        r.add_verdict("witness_ones_fraction", c1,
                      to_double(efa) - to_double(e_floor) + tol,
                      {"E_witness", "E_floor_I_over_4"});
        r.add_verdict("witness_selection_hard", c2, c2_margin,
                      {"selection_floor", "empirical_I_a"});
        verdict = (c1 && c2) || branch1_tol;
    }
    r.add_verdict("disjunction", verdict, 0.0, {"empirical_I_a", "branch"});
    return r;
}

// Swappable construction table so the closure oracle can be pointed at a
// deliberately corrupted combinator in tests.
struct CombinatorTable {
    std::function<MooreMachine(const MooreMachine&, const MooreMachine&)> xor_c =
        [](const MooreMachine& a, const MooreMachine& b) { return xor_combine(a, b); };
    std::function<MooreMachine(const MooreMachine&, const MooreMachine&,
                               const MooreMachine&)>
        interleave_c = [](const MooreMachine& a, const MooreMachine& b,
                          const MooreMachine& c) { return interleave_combine(a, b, c); };
    std::function<MooreMachine(const MooreMachine&, LiftKind)> lift_c =
        [](const MooreMachine& f, LiftKind k) { return lift_subseq(f, k); };
    std::function<MooreMachine(const MooreMachine&, const MooreMachine&,
                               const MooreMachine&)>
        switch_c = [](const MooreMachine& a, const MooreMachine& b,
                      const MooreMachine& c) { return switch_combine(a, b, c); };
    std::function<MooreMachine(const MooreMachine&, const MooreMachine&)> tilde_c =
        [](const MooreMachine& e1, const MooreMachine& e2) {
            return construct_tilde_f(e1, e2);
        };
};

namespace detail {

// All inputs of the given length, lexicographic.
inline std::vector<BitSeq> all_inputs(int horizon) {
    std::vector<BitSeq> inputs;
    inputs.reserve(std::size_t{1} << horizon);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << horizon); ++mask) {
        BitSeq a;
        for (int t = 0; t < horizon; ++t) a.push_back((mask >> t) & 1);
        inputs.push_back(std::move(a));
    }
    return inputs;
}

// Reference evaluation of the switching formula, independent of the product
// construction.
inline BitSeq switch_reference(const MooreMachine& f0, const MooreMachine& f1,
                               const MooreMachine& f2, const BitSeq& a) {
    BitSeq p0 = predict(f0, a);
    BitSeq p1 = predict(f1, a);
    BitSeq b = run_select(f0, a);
    BitSeq p2b = predict(f2, b);
    BitSeq expected;
    std::size_t l = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!p0[i]) {
            expected.push_back(p1[i]);
        } else {
            expected.push_back(p2b[l]);
            ++l;
        }
    }
    return expected;
}

} // namespace detail

// Exhaustive oracle for the closure constructions: draws random machine
// tuples and checks every combinator's defining equation on every input of
// the horizon length. The first violation is serialized into the report.
inline Report verify_axiom_closure(std::size_t trials, std::uint32_t max_states,
                                   int horizon, std::uint64_t seed,
                                   const CombinatorTable& table = {}) {
    if (max_states > 3)
        throw capacity_error("verify_axiom_closure: exhaustive regime needs max_states <= 3", 3);
    if (horizon < 3)
        throw std::invalid_argument("verify_axiom_closure: horizon must cover a triple");
    if (horizon > 12)
        throw capacity_error("verify_axiom_closure: exhaustive regime needs horizon <= 12", 12);

    Report r;
    r.name = "verify-axioms";
    r.add_input("trials", std::to_string(trials));
    r.add_input("max_states", std::to_string(max_states));
    r.add_input("horizon", std::to_string(horizon));
    r.add_input("seed", std::to_string(seed));

    std::mt19937_64 rng(seed);
    std::vector<BitSeq> inputs = detail::all_inputs(horizon);
    std::size_t checks = 0;
    bool ok = true;

    auto report_violation = [&](const std::string& what,
                                const std::vector<MooreMachine>& machines,
                                const BitSeq& input) {
        ok = false;
        std::ostringstream os;
        os << "violation in " << what << " on input " << input.to_string();
        r.notes.push_back(os.str());
        for (std::size_t i = 0; i < machines.size(); ++i)
            r.notes.push_back("machine " + std::to_string(i) + ": " +
                              machine_compact(machines[i]));
    };

    for (std::size_t trial = 0; trial < trials && ok; ++trial) {
        MooreMachine f0 = random_machine(rng, max_states);
        MooreMachine f1 = random_machine(rng, max_states);
        MooreMachine f2 = random_machine(rng, max_states);
        MooreMachine eta1 = random_machine(rng, max_states);
        MooreMachine eta2 = random_machine(rng, max_states);

        MooreMachine mx = table.xor_c(f0, f1);
        MooreMachine mi = table.interleave_c(f0, f1, f2);
        MooreMachine ms = table.switch_c(f0, f1, f2);
        MooreMachine mt = table.tilde_c(eta1, eta2);
        std::vector<MooreMachine> lifts;
        for (LiftKind k : {LiftKind::H0, LiftKind::H1, LiftKind::H2, LiftKind::F1,
                           LiftKind::F2, LiftKind::G1, LiftKind::G2})
            lifts.push_back(table.lift_c(f0, k));

        for (const BitSeq& a : inputs) {
            // Summation closure.
            if (predict(mx, a) != xor_seq(predict(f0, a), predict(f1, a))) {
                report_violation("summation_xor", {f0, f1}, a);
                break;
            }
            // Interleaving closure: offsets 0/1/2 follow f0/f1/f2 respectively.
            BitSeq pi = predict(mi, a);
            if (extract_p(pi, 0) != extract_p(predict(f0, a), 0) ||
                extract_p(pi, 1) != extract_p(predict(f1, a), 1) ||
                extract_p(pi, 2) != extract_p(predict(f2, a), 2)) {
                report_violation("interleaving", {f0, f1, f2}, a);
                break;
            }
            // Subsequence closure: the seven lift obligations plus forced zeros at the
            // unconstrained positions.
            static constexpr int emit_offset[7] = {0, 1, 2, 1, 1, 2, 2};
            bool lift_ok = true;
            for (int ki = 0; ki < 7 && lift_ok; ++ki) {
                BitSeq pl = predict(lifts[ki], a);
                BitSeq inner;
                switch (ki) {
                    case 0: inner = predict(f0, extract_p(a, 0)); break;
                    case 1: inner = predict(f0, extract_p(a, 1)); break;
                    case 2: inner = predict(f0, extract_p(a, 2)); break;
                    case 3: inner = predict(f0, sum_s(a, 1)); break;
                    case 4: inner = predict(f0, sum_s(a, 2)); break;
                    case 5: inner = predict(f0, sum_s(a, 1)); break;
                    case 6: inner = predict(f0, sum_s(a, 2)); break;
                }
                if (extract_p(pl, emit_offset[ki]) != inner) lift_ok = false;
                for (int off = 0; off < 3 && lift_ok; ++off) {
                    if (off == emit_offset[ki]) continue;
                    if (extract_p(pl, off) != BitSeq::zeros(a.size() / 3)) lift_ok = false;
                }
                if (!lift_ok)
                    report_violation(std::string("lift_") +
                                         lift_kind_name(static_cast<LiftKind>(ki)),
                                     {f0}, a);
            }
            if (!lift_ok) break;
            // Switching closure against the direct formula.
            if (predict(ms, a) != detail::switch_reference(f0, f1, f2, a)) {
                report_violation("switching", {f0, f1, f2}, a);
                break;
            }
            // Main-disjunction witness formula.
            BitSeq pt = predict(mt, a);
            BitSeq want = xor_seq(xor_seq(predict(eta1, sum_s(a, 1)), extract_p(a, 0)),
                                  xor_seq(predict(eta2, sum_s(a, 2)), extract_p(a, 2)));
            if (extract_p(pt, 1) != want ||
                extract_p(pt, 0) != BitSeq::zeros(a.size() / 3) ||
                extract_p(pt, 2) != BitSeq::zeros(a.size() / 3)) {
                report_violation("tilde_f", {eta1, eta2}, a);
                break;
            }
            checks += 12;
        }
    }

    r.add_quantity("equation_checks", static_cast<double>(checks));
    r.add_verdict("zero_violations", ok, 0.0, {"equation_checks"});
    return r;
}

} // namespace seqpred

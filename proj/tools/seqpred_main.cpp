// seqpred: sequence predictability toolkit over finite-state predictor
// classes. Verbs cover estimation, the sequence operators, adversarial
// synthesis and the experiment drivers; all runs are
// deterministic given their arguments (seeds included).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqpred/seqpred.hpp"

namespace {

using namespace seqpred;

// Exit codes: 0 ok, 1 verdict false / certification failure, 2 input error,
// 3 capacity, 4 internal.
enum ExitCode { kOk = 0, kVerdictFalse = 1, kInputError = 2, kCapacity = 3, kInternal = 4 };

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) parts.push_back(cur);
    return parts;
}

PredictorClass parse_class_spec(const std::string& spec) {
    if (spec == "curated-F1") return curated_f1();
    if (spec.rfind("fsm:", 0) == 0) {
        std::uint32_t k = 0;
        try {
            k = static_cast<std::uint32_t>(std::stoul(spec.substr(4)));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad class spec: " + spec);
        }
        return enumerate_machines(k);
    }
    throw std::invalid_argument("unknown class spec '" + spec +
                                "' (expected fsm:<k> or curated-F1)");
}

// Comma-separated class specs; levels are cumulative unions so the result
// is nested by construction.
Hierarchy parse_hierarchy_spec(const std::string& spec) {
    Hierarchy h;
    std::string label_so_far;
    for (const std::string& part : split_commas(spec)) {
        PredictorClass cls = parse_class_spec(part);
        label_so_far = label_so_far.empty() ? part : label_so_far + "+" + part;
        if (h.levels.empty())
            h.levels.push_back(std::move(cls));
        else
            h.levels.push_back(class_union(h.levels.back(), cls, label_so_far));
    }
    if (h.levels.empty()) throw std::invalid_argument("empty hierarchy spec");
    return h;
}

std::vector<std::size_t> parse_checkpoints(const std::string& s) {
    std::vector<std::size_t> cps;
    for (const std::string& part : split_commas(s))
        cps.push_back(static_cast<std::size_t>(std::stoull(part)));
    return cps;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << text;
}

std::string echo_header(const std::string& verb,
                        const std::vector<std::pair<std::string, std::string>>& args) {
    std::ostringstream os;
    os << kToolName << " " << kToolVersion << " | " << verb;
    for (const auto& [k, v] : args) os << " " << k << "=" << v;
    return os.str();
}

int emit_report(const Report& r, const std::string& report_path,
                const std::string& csv_path) {
    std::cout << report_text(r);
    if (!report_path.empty()) write_text_file(report_path, report_text(r));
    if (!csv_path.empty()) write_text_file(csv_path, report_csv(r));
    return r.all_passed() ? kOk : kVerdictFalse;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequence predictability over finite-state predictor classes"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    int exit_code = kOk;

    // --- bernoulli-gen ---
    double p = 0.3;
    std::size_t n = 200000;
    std::uint64_t seed = 7;
    std::string output, input, report_path, csv_path, plan_path;
    auto* gen = app.add_subcommand("bernoulli-gen", "generate a Bernoulli(p) bit file");
    gen->add_option("--p", p, "probability of a 1")->required();
    gen->add_option("--n", n, "number of digits")->required();
    gen->add_option("--seed", seed, "PRNG seed");
    gen->add_option("--output", output, "output bit file")->required();
    gen->callback([&] {
        save_bits(output, bernoulli_generate(p, n, seed));
    });

    // --- estimate ---
    std::string class_spec = "fsm:2", checkpoints_arg;
    auto* est = app.add_subcommand("estimate", "empirical predictability curve");
    est->add_option("--input", input, "input bit file")->required();
    est->add_option("--class", class_spec, "class or hierarchy spec (comma-separated)");
    est->add_option("--n", n, "evaluation length")->required();
    est->add_option("--checkpoints", checkpoints_arg, "comma-separated checkpoint lengths");
    est->add_option("--output", output, "output CSV")->required();
    est->callback([&] {
        BitSeq a = load_bits(input);
        Hierarchy h = parse_hierarchy_spec(class_spec);
        std::vector<std::size_t> cps =
            checkpoints_arg.empty() ? std::vector<std::size_t>{n}
                                    : parse_checkpoints(checkpoints_arg);
        Estimate e = predictability_curve(a, h, cps);
        write_text_file(output,
                        estimate_csv(e, echo_header("estimate",
                                                    {{"input", input},
                                                     {"class", class_spec},
                                                     {"n", std::to_string(n)},
                                                     {"checkpoints", checkpoints_arg}})));
    });

    // --- transform ---
    std::string op, machine_path;
    auto* tr = app.add_subcommand("transform", "apply a sequence operator");
    tr->add_option("--op", op, "one of p0,p1,p2,s1,s2,select")->required();
    tr->add_option("--input", input, "input bit file")->required();
    tr->add_option("--output", output, "output bit file")->required();
    tr->add_option("--machine", machine_path, "machine file (select only)");
    tr->callback([&] {
        BitSeq a = load_bits(input);
        BitSeq r;
        if (op == "p0") r = extract_p(a, 0);
        else if (op == "p1") r = extract_p(a, 1);
        else if (op == "p2") r = extract_p(a, 2);
        else if (op == "s1") r = sum_s(a, 1);
        else if (op == "s2") r = sum_s(a, 2);
        else if (op == "select") {
            if (machine_path.empty())
                throw std::invalid_argument("transform --op select requires --machine");
            r = run_select(load_machine(machine_path), a);
        } else {
            throw std::invalid_argument("unknown transform op: " + op);
        }
        save_bits(output, r);
    });

    // --- synthesize ---
    std::string target_arg = "0.25";
    std::size_t total_len = 100000;
    auto* syn = app.add_subcommand("synthesize", "sequence with prescribed predictability");
    syn->add_option("--target", target_arg, "target I0 in [0,1/2], rational or decimal")
        ->required();
    syn->add_option("--len", total_len, "total length")->required();
    syn->add_option("--class", class_spec, "hierarchy spec");
    syn->add_option("--seed", seed, "echoed for provenance; the generator is deterministic");
    syn->add_option("--output", output, "output bit file")->required();
    syn->add_option("--plan", plan_path, "plan log output");
    syn->callback([&] {
        Hierarchy h = parse_hierarchy_spec(class_spec);
        auto [seq, plan] = synthesize_target(h, parse_rational(target_arg), total_len);
        save_bits(output, seq);
        if (!plan_path.empty())
            save_plan(plan_path, plan,
                      echo_header("synthesize", {{"target", target_arg},
                                                 {"len", std::to_string(total_len)},
                                                 {"class", class_spec},
                                                 {"seed", std::to_string(seed)}}));
    });

    // --- separation ---
    std::uint32_t states = 2;
    auto* sep = app.add_subcommand("separation", "class-separation sequence");
    sep->add_option("--states", states, "adversarial class bound (fsm<=k)");
    sep->add_option("--len", total_len, "total length budget")->required();
    sep->add_option("--output", output, "output bit file")->required();
    sep->add_option("--plan", plan_path, "plan log output");
    sep->callback([&] {
        SynthesisPlan plan;
        BitSeq seq = separation_sequence(states, total_len, &plan);
        save_bits(output, seq);
        if (!plan_path.empty())
            save_plan(plan_path, plan,
                      echo_header("separation", {{"states", std::to_string(states)},
                                                 {"len", std::to_string(total_len)}}));
    });

    // --- verify-axioms ---
    std::size_t trials = 50;
    int horizon = 12;
    auto* vax = app.add_subcommand("verify-axioms", "exhaustive closure-equation oracle");
    vax->add_option("--states", states, "max states per random machine");
    vax->add_option("--len", horizon, "input length (exhaustive over all inputs)");
    vax->add_option("--trials", trials, "random machine tuples");
    vax->add_option("--seed", seed, "PRNG seed");
    vax->add_option("--report", report_path, "report text output");
    vax->add_option("--csv", csv_path, "report CSV output");
    vax->callback([&] {
        exit_code = emit_report(verify_axiom_closure(trials, states, horizon, seed),
                                report_path, csv_path);
    });

    // --- verify-bernoulli ---
    double tol = kDefaultTol;
    auto* vb = app.add_subcommand("verify-bernoulli", "I(x) = min(p, 1-p) check");
    vb->add_option("--p", p, "probability of a 1")->required();
    vb->add_option("--n", n, "sample length")->required();
    vb->add_option("--seed", seed, "PRNG seed");
    vb->add_option("--class", class_spec, "class spec");
    vb->add_option("--tol", tol, "tolerance");
    vb->callback([&] {
        exit_code = emit_report(
            verify_bernoulli_theorem(p, n, seed, parse_class_spec(class_spec), tol),
            report_path, csv_path);
    });
    vb->add_option("--report", report_path, "report text output");
    vb->add_option("--csv", csv_path, "report CSV output");

    // --- verify-xor ---
    auto* vx = app.add_subcommand("verify-xor", "I(S a) = 2I - 2I^2 check");
    vx->add_option("--p", p, "probability of a 1")->required();
    vx->add_option("--n", n, "sample length")->required();
    vx->add_option("--seed", seed, "PRNG seed");
    vx->add_option("--tol", tol, "tolerance");
    vx->add_option("--report", report_path, "report text output");
    vx->add_option("--csv", csv_path, "report CSV output");
    vx->callback([&] {
        exit_code = emit_report(verify_xor_relation(p, n, seed, tol), report_path, csv_path);
    });

    // --- verify-independence ---
    auto* vi = app.add_subcommand("verify-independence", "independence lower bound check");
    vi->add_option("--p", p, "probability of a 1 (must be < 1/2)")->required();
    vi->add_option("--n", n, "sample length")->required();
    vi->add_option("--seed", seed, "PRNG seed");
    vi->add_option("--tol", tol, "tolerance");
    vi->add_option("--report", report_path, "report text output");
    vi->add_option("--csv", csv_path, "report CSV output");
    vi->callback([&] {
        exit_code =
            emit_report(verify_independence_bound(p, n, seed, tol), report_path, csv_path);
    });

    // --- verify-main ---
    std::string gamma_arg = "auto";
    auto* vm = app.add_subcommand("verify-main", "main disjunction check");
    vm->add_option("--input", input, "input bit file")->required();
    vm->add_option("--class", class_spec, "class spec");
    vm->add_option("--n", n, "evaluation length (0 = whole file)");
    vm->add_option("--gamma", gamma_arg, "gamma (rational), or 'auto' for I(1-2I)/5");
    vm->add_option("--tol", tol, "tolerance");
    vm->add_option("--report", report_path, "report text output");
    vm->add_option("--csv", csv_path, "report CSV output");
    vm->callback([&] {
        BitSeq a = load_bits(input);
        PredictorClass cls = parse_class_spec(class_spec);
        std::size_t len = (n == 0 || n > a.size()) ? a.size() : n;
        Rat ihat = empirical_I(a, cls, len);
        Rat gamma = gamma_arg == "auto" ? ihat * (Rat(1) - Rat(2) * ihat) / Rat(5)
                                        : parse_rational(gamma_arg);
        exit_code =
            emit_report(verify_main_disjunction(a, gamma, cls, len, tol), report_path,
                        csv_path);
    });

    // --- hierarchy-check ---
    std::string h1_spec, h2_spec;
    auto* hc = app.add_subcommand("hierarchy-check", "hierarchy invariance check");
    hc->add_option("--input", input, "input bit file")->required();
    hc->add_option("--h1", h1_spec, "first hierarchy spec")->required();
    hc->add_option("--h2", h2_spec, "second hierarchy spec")->required();
    hc->add_option("--n", n, "evaluation length")->required();
    hc->add_option("--report", report_path, "report text output");
    hc->add_option("--csv", csv_path, "report CSV output");
    hc->callback([&] {
        BitSeq a = load_bits(input);
        exit_code = emit_report(hierarchy_invariance_check(a, parse_hierarchy_spec(h1_spec),
                                                           parse_hierarchy_spec(h2_spec), n),
                                report_path, csv_path);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    } catch (const parse_error& e) {
        std::cerr << "seqpred: error: parse: " << e.what() << "\n";
        return kInputError;
    } catch (const capacity_error& e) {
        std::cerr << "seqpred: error: capacity: " << e.what() << "\n";
        return kCapacity;
    } catch (const certification_error& e) {
        std::cerr << "seqpred: error: certification: " << e.what() << "\n";
        return kVerdictFalse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "seqpred: error: input: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "seqpred: error: internal: " << e.what() << "\n";
        return kInternal;
    }
    return exit_code;
}

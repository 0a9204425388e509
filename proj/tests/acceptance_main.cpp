// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria. argv[1] (optional) is the path to the seqpred CLI binary,
// needed by the determinism criterion.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "seqpred/seqpred.hpp"

using namespace seqpred;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
int g_index = 0;

void criterion(const std::string& name, const std::function<bool(std::string&)>& body) {
    ++g_index;
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++g_failures;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << g_index << ": " << name;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << "\n" << std::flush;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Independent enumeration oracle (same contract as the unit-test copy):
// raw tuples deduplicated by depth-12 behavior signatures.
std::size_t brute_force_count(std::uint32_t k, int horizon) {
    std::set<std::vector<std::uint64_t>> behaviors;
    for (std::uint32_t s = 1; s <= k; ++s) {
        std::uint64_t trans_patterns = 1;
        for (std::uint32_t i = 0; i < 2 * s; ++i) trans_patterns *= s;
        for (std::uint64_t outs = 0; outs < (std::uint64_t{1} << s); ++outs) {
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
                    behaviors.insert(behavior_signature(m, horizon));
                }
            }
        }
    }
    return behaviors.size();
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliRun {
    int exit_code = -1;
    std::string out;
};

CliRun run_cli(const std::string& cli, const std::string& args, const fs::path& dir,
               const std::string& tag) {
    fs::path out_file = dir / (tag + ".stdout");
    std::string cmd = cli + " " + args + " > " + out_file.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    CliRun r;
    r.exit_code = (rc >= 0 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
    r.out = read_file(out_file);
    return r;
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    std::cout << "seqpred acceptance suite\n";

    // 1. Axiom closure oracle.
    criterion("axiom closure: 50 tuples, all 4096 length-12 inputs, exact equality, < 60 s",
              [&](std::string& detail) {
                  auto t0 = std::chrono::steady_clock::now();
                  Report r = verify_axiom_closure(50, 3, 12, 7);
                  double secs = seconds_since(t0);
                  std::ostringstream os;
                  os << "runtime " << format_double(secs) << " s";
                  detail = os.str();
                  return r.all_passed() && secs < 60.0;
              });

    // 2. Causality suite.
    criterion("causality: 1e4 prefix-agreement pairs over machines and the repeat detector",
              [&](std::string& detail) {
                  std::mt19937_64 rng(7);
                  std::size_t violations = 0;
                  for (int rep = 0; rep < 10000; ++rep) {
                      std::size_t len = 8 + rng() % 56;
                      std::size_t agree = rng() % len;
                      BitSeq a, c;
                      for (std::size_t i = 0; i < len; ++i) a.push_back(rng() & 1);
                      for (std::size_t i = 0; i < len; ++i)
                          c.push_back(i < agree ? a[i] : (rng() & 1));
                      MooreMachine m = random_machine(rng, 3);
                      BitSeq pa = predict(m, a), pc = predict(m, c);
                      for (std::size_t i = 0; i <= agree && i < len; ++i)
                          if (pa[i] != pc[i]) ++violations;
                      if (rep % 5 == 0) {
                          BitSeq da = predict_repeat_detector(a);
                          BitSeq dc = predict_repeat_detector(c);
                          for (std::size_t i = 0; i <= agree && i < len; ++i)
                              if (da[i] != dc[i]) ++violations;
                      }
                  }
                  detail = std::to_string(violations) + " violations";
                  return violations == 0;
              });

    // 3. Enumeration oracle.
    criterion("enumeration: |fsm:1| = 2 and C2/C3 match the brute-force + horizon-12 oracle",
              [&](std::string& detail) {
                  std::size_t c1 = enumerate_machines(1).size();
                  std::size_t c2 = enumerate_machines(2).size();
                  std::size_t c3 = enumerate_machines(3).size();
                  std::size_t b2 = brute_force_count(2, 12);
                  std::size_t b3 = brute_force_count(3, 12);
                  std::ostringstream os;
                  os << "C1=" << c1 << " C2=" << c2 << "/" << b2 << " C3=" << c3 << "/"
                     << b3;
                  detail = os.str();
                  return c1 == 2 && c2 == b2 && c3 == b3 && c2 == 26 && c3 == 1054;
              });

    // Shared Bernoulli fixture for criteria 4-6.
    const double p = 0.3;
    const std::size_t n = 200000;
    const std::uint64_t seed = 7;
    BitSeq bern = bernoulli_generate(p, n, seed);

    // 4. Bernoulli min(p,q).
    criterion("Bernoulli min(p,q): |I - 0.3| <= 0.01 with constants; fsm:2 improves < 0.01; < 30 s",
              [&](std::string& detail) {
                  auto t0 = std::chrono::steady_clock::now();
                  Rat i_consts = empirical_I(bern, constants_class(), n);
                  Rat i_fsm2 = empirical_I(bern, enumerate_machines(2), n);
                  double secs = seconds_since(t0);
                  double band = std::abs(to_double(i_consts) - 0.3);
                  double improvement = to_double(i_consts - i_fsm2);
                  std::ostringstream os;
                  os << "I=" << format_double(to_double(i_consts)) << " improvement="
                     << format_double(improvement) << " runtime " << format_double(secs)
                     << " s";
                  detail = os.str();
                  return band <= 0.01 && improvement >= 0.0 && improvement < 0.01 &&
                         secs < 30.0;
              });

    // 5. XOR relation.
    criterion("XOR relation: |I(S^nu a) - 0.42| <= 0.015 for nu = 1, 2",
              [&](std::string& detail) {
                  PredictorClass consts = constants_class();
                  BitSeq s1 = sum_s(bern, 1), s2 = sum_s(bern, 2);
                  double i1 = to_double(empirical_I(s1, consts, s1.size()));
                  double i2 = to_double(empirical_I(s2, consts, s2.size()));
                  detail = "I(S1)=" + format_double(i1) + " I(S2)=" + format_double(i2);
                  return std::abs(i1 - 0.42) <= 0.015 && std::abs(i2 - 0.42) <= 0.015;
              });

    // 6. Independence bound.
    criterion("independence bound: max I(S^nu a) >= 0.324 - 0.015",
              [&](std::string& detail) {
                  PredictorClass consts = constants_class();
                  BitSeq s1 = sum_s(bern, 1), s2 = sum_s(bern, 2);
                  double best = std::max(to_double(empirical_I(s1, consts, s1.size())),
                                         to_double(empirical_I(s2, consts, s2.size())));
                  detail = "max=" + format_double(best);
                  return best >= 0.324 - 0.015;
              });

    // 7. Main disjunction.
    criterion("main disjunction on Bernoulli(0.3) and a structured interleaving, tol 0.02",
              [&](std::string& detail) {
                  PredictorClass cls = enumerate_machines(2);

                  BitSeq a1 = bernoulli_generate(0.3, 90000, 7);
                  Rat i1 = empirical_I(a1, cls, a1.size());
                  Rat g1 = i1 * (Rat(1) - Rat(2) * i1) / Rat(5);
                  Report r1 = verify_main_disjunction(a1, g1, cls, a1.size(), 0.02);

                  BitSeq x = adversarial_block(cls, BitSeq{}, 30000, 0.05);
                  BitSeq a2 = interleave(x, BitSeq::zeros(30000), BitSeq::zeros(30000));
                  Rat i2 = empirical_I(a2, cls, a2.size());
                  Rat g2 = i2 * (Rat(1) - Rat(2) * i2) / Rat(5);
                  Report r2 = verify_main_disjunction(a2, g2, cls, a2.size(), 0.02);

                  detail = "bernoulli " + std::string(r1.all_passed() ? "ok" : "fail") +
                           ", structured " + std::string(r2.all_passed() ? "ok" : "fail");
                  return r1.all_passed() && r2.all_passed();
              });

    // 8. Adversarial synthesis.
    criterion("adversarial block vs fsm:2 at N=4096: certified min error >= 0.45",
              [&](std::string& detail) {
                  PredictorClass cls = enumerate_machines(2);
                  BitSeq block = adversarial_block(cls, BitSeq{}, 4096, 0.05);
                  auto [worst, margin] = evaluate_block(cls, BitSeq{}, block);
                  (void)worst;
                  double bound = mw_sqrt_margin(cls.size(), 4096);
                  detail = "margin=" + format_double(to_double(margin)) +
                           " bound=" + format_double(bound);
                  return to_double(margin) >= 0.45 && to_double(margin) >= bound - 0.01;
              });

    // 9. Target predictability.
    criterion("synthesize I0=1/4, len=1e5, fsm:2 hierarchy: checkpoints within 0.05 past block 2",
              [&](std::string& detail) {
                  Hierarchy h = fsm_hierarchy(2);
                  auto [seq, plan] = synthesize_target(h, Rat(1, 4), 100000);
                  Estimate e = predictability_curve(seq, h, plan.checkpoints);
                  double worst_dev = 0.0; // across every evaluated level
                  for (std::size_t li = 0; li < e.values.size(); ++li)
                      for (std::size_t i = 2; i < plan.checkpoints.size(); ++i)
                          worst_dev = std::max(
                              worst_dev, std::abs(to_double(e.values[li][i]) - 0.25));
                  std::ostringstream os;
                  os << plan.blocks.size() << " blocks, worst |v - 0.25| over "
                     << e.values.size() << " levels = " << format_double(worst_dev);
                  detail = os.str();
                  return seq.size() == 100000 && plan.blocks.size() >= 3 &&
                         worst_dev <= 0.05;
              });

    // 10. Class separation.
    criterion("separation: fsm:2 value >= 0.3 at the final checkpoint; detector tail error <= 0.05",
              [&](std::string& detail) {
                  SynthesisPlan plan;
                  BitSeq seq = separation_sequence(2, 65536, &plan);
                  Rat i_fsm = empirical_I(seq, enumerate_machines(2), plan.checkpoints.back());
                  BitSeq preds = predict_repeat_detector(seq);
                  std::size_t half = seq.size() / 2;
                  std::size_t errs = 0;
                  for (std::size_t i = half; i < seq.size(); ++i)
                      if (preds[i] != seq[i]) ++errs;
                  double tail = static_cast<double>(errs) /
                                static_cast<double>(seq.size() - half);
                  detail = "I(fsm:2)=" + format_double(to_double(i_fsm)) +
                           " detector tail=" + format_double(tail);
                  return to_double(i_fsm) >= 0.3 && tail <= 0.05;
              });

    // 11. Hierarchy invariance.
    criterion("hierarchy invariance: equal top-level values on 20 random inputs, exact",
              [&](std::string& detail) {
                  Hierarchy h1 = fsm_hierarchy(3);
                  Hierarchy h2;
                  h2.levels.push_back(enumerate_machines(2));
                  h2.levels.push_back(enumerate_machines(3));
                  std::mt19937_64 rng(7);
                  int equal = 0;
                  for (int rep = 0; rep < 20; ++rep) {
                      BitSeq a;
                      for (int i = 0; i < 4096; ++i) a.push_back(rng() & 1);
                      Report r = hierarchy_invariance_check(a, h1, h2, 4096);
                      bool top_equal = false;
                      for (const Verdict& v : r.verdicts)
                          if (v.name == "top_level_equal" && v.pass) top_equal = true;
                      if (top_equal && r.all_passed()) ++equal;
                  }
                  detail = std::to_string(equal) + "/20 exact";
                  return equal == 20;
              });

    // 12. CLI determinism.
    criterion("determinism: every CLI verb re-run with identical arguments is byte-identical",
              [&](std::string& detail) {
                  if (cli.empty()) {
                      detail = "no CLI path given (argv[1])";
                      return false;
                  }
                  fs::path dir = fs::temp_directory_path() /
                                 ("seqpred_acceptance_" + std::to_string(::getpid()));
                  fs::create_directories(dir);
                  auto bits = [&](const std::string& name) { return (dir / name).string(); };

                  // fixtures
                  if (run_cli(cli, "bernoulli-gen --p 0.3 --n 21000 --seed 7 --output " +
                                       bits("fix.bits"),
                              dir, "fix")
                          .exit_code != 0) {
                      detail = "fixture generation failed";
                      return false;
                  }
                  std::ofstream(dir / "per.moore")
                      << "moore v1 states=4 start=0\n0 0 1 1\n1 0 2 2\n2 1 3 3\n3 1 0 0\n";

                  struct Verb {
                      std::string tag;
                      std::string args; // {O} replaced by a per-run output path
                  };
                  std::vector<Verb> verbs = {
                      {"gen", "bernoulli-gen --p 0.3 --n 20000 --seed 11 --output {O}gen.bits"},
                      {"est", "estimate --input " + bits("fix.bits") +
                                  " --class fsm:1,fsm:2 --n 21000 --checkpoints 7000,14000,21000 "
                                  "--output {O}est.csv"},
                      {"tr", "transform --op p1 --input " + bits("fix.bits") +
                                 " --output {O}tr.bits"},
                      {"sel", "transform --op select --machine " + (dir / "per.moore").string() +
                                  " --input " + bits("fix.bits") + " --output {O}sel.bits"},
                      {"syn", "synthesize --target 1/4 --len 8000 --class fsm:2 --seed 7 "
                              "--output {O}syn.bits --plan {O}syn.plan"},
                      {"sep", "separation --states 2 --len 8000 --output {O}sep.bits "
                              "--plan {O}sep.plan"},
                      {"vax", "verify-axioms --states 2 --len 10 --trials 5 --seed 7 "
                              "--report {O}vax.txt --csv {O}vax.csv"},
                      {"vb", "verify-bernoulli --p 0.3 --n 20000 --seed 7 --class fsm:2 "
                             "--report {O}vb.txt"},
                      {"vx", "verify-xor --p 0.3 --n 20000 --seed 7 --report {O}vx.txt"},
                      {"vi", "verify-independence --p 0.3 --n 20000 --seed 7 --report {O}vi.txt"},
                      {"vm", "verify-main --input " + bits("fix.bits") +
                                 " --class fsm:2 --n 21000 --tol 0.02 --report {O}vm.txt"},
                      {"hc", "hierarchy-check --input " + bits("fix.bits") +
                                 " --h1 fsm:1,fsm:2 --h2 fsm:2 --n 21000 --report {O}hc.txt"},
                  };

                  for (const Verb& v : verbs) {
                      std::string a1 = v.args, a2 = v.args;
                      const std::string o1 = (dir / ("r1_")).string();
                      const std::string o2 = (dir / ("r2_")).string();
                      for (std::string* s : {&a1, &a2}) {
                          const std::string& o = (s == &a1) ? o1 : o2;
                          std::size_t pos;
                          while ((pos = s->find("{O}")) != std::string::npos)
                              s->replace(pos, 3, o);
                      }
                      CliRun r1 = run_cli(cli, a1, dir, v.tag + "_1");
                      CliRun r2 = run_cli(cli, a2, dir, v.tag + "_2");
                      if (r1.exit_code != r2.exit_code || r1.out != r2.out) {
                          detail = v.tag + ": stdout or exit code differs";
                          return false;
                      }
                      // compare every produced file pair
                      for (const auto& entry : fs::directory_iterator(dir)) {
                          std::string name = entry.path().filename().string();
                          if (name.rfind("r1_", 0) == 0) {
                              fs::path twin = dir / ("r2_" + name.substr(3));
                              if (!fs::exists(twin) ||
                                  read_file(entry.path()) != read_file(twin)) {
                                  detail = v.tag + ": file " + name + " differs";
                                  return false;
                              }
                          }
                      }
                  }
                  fs::remove_all(dir);
                  detail = std::to_string(verbs.size()) + " verbs, double-run";
                  return true;
              });

    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: ")
              << (g_failures == 0 ? std::string() : std::to_string(g_failures)) << "\n";
    return g_failures;
}

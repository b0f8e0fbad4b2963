// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rlnc/rlnc.hpp"
#ifdef RLNC_HAVE_CLI
#include "../tools/cli.hpp"
#endif

using namespace rlnc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

NodeIndex node(const Network& net, const char* id) { return *net.find_node(id); }

struct CorpusEntry {
  Network net;
  int w;
  std::uint64_t q;
};

// 200 seeded networks with at most 6 internal nodes.
std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int w = 1 + static_cast<int>(seed % 3);
    const std::uint64_t q = 2 + (seed / 3) % 3;
    const int internal = static_cast<int>(seed % 7);
    const double density = 0.3 + 0.1 * static_cast<double>(seed % 4);
    out.push_back({random_dag(internal, w, density, 1000 + seed), w, q});
  }
  return out;
}

Outcome criterion1() {
  Outcome o;
  auto b = butterfly();
  const auto t1 = node(b, "t1");
  auto start = Clock::now();
  auto ex2 = exact_failure(b, 2, Field::from_order(2), t1);
  const double s2 = seconds_since(start);
  if (ex2.value != Rational(125, 128)) o.fail("q=2 gave " + to_fraction_string(ex2.value));
  if (s2 >= 1.0) o.fail("q=2 took " + std::to_string(s2) + " s");
  if (full_report(b, t1, 2, 2).thm1 != ex2.value) o.fail("thm1 differs from exact at q=2");

  start = Clock::now();
  auto ex3 = exact_failure(b, 2, Field::from_order(3), t1);
  const double s3 = seconds_since(start);
  if (ex3.value != Rational(1931, 2187)) o.fail("q=3 gave " + to_fraction_string(ex3.value));
  if (s3 >= 60.0) o.fail("q=3 took " + std::to_string(s3) + " s");
  if (full_report(b, t1, 2, 3).thm1 != ex3.value) o.fail("thm1 differs from exact at q=3");
  if (o.ok) {
    std::ostringstream d;
    d << "125/128 in " << s2 << " s, 1931/2187 in " << s3 << " s";
    o.detail = d.str();
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto start = Clock::now();
  struct Case {
    int w, r;
    std::uint64_t q;
  };
  for (auto c : {Case{1, 1, 2}, Case{2, 0, 2}, Case{2, 1, 2}, Case{1, 2, 3}}) {
    auto p = plait(c.w, c.r);
    const auto t = node(p, "t");
    const auto expect = 1 - rational_pow(phi(c.q, c.w), c.r + 1);
    const auto ex = exact_failure(p, c.w, Field::from_order(c.q), t);
    const auto rep = full_report(p, t, c.w, c.q);
    if (ex.value != expect || rep.thm2 != expect || rep.cor1 != expect || rep.thm3 != expect)
      o.fail("plait(" + std::to_string(c.w) + "," + std::to_string(c.r) + ") q=" +
             std::to_string(c.q));
  }
  const double s = seconds_since(start);
  if (s >= 10.0) o.fail("took " + std::to_string(s) + " s");
  if (o.ok) o.detail = "4 plaits, " + std::to_string(s) + " s";
  return o;
}

Outcome criterion3(const std::vector<CorpusEntry>& nets) {
  Outcome o;
  int exact_checked = 0;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const auto& [net, w, q] = nets[i];
    const auto t = node(net, "t");
    const auto rep = full_report(net, t, w, q);
    if (!(rep.thm1 <= rep.thm2 && rep.cor1 <= rep.thm2 && rep.thm2 <= rep.thm3))
      o.fail("bound chain broken on net " + std::to_string(i));
    try {
      const auto ex = exact_failure(net, w, Field::from_order(q), t, std::uint64_t{1} << 18);
      ++exact_checked;
      if (!(rep.thm4_lower <= ex.value && ex.value <= rep.thm1))
        o.fail("exact outside [lower, thm1] on net " + std::to_string(i));
    } catch (const BudgetExceeded&) {
    }
  }
  if (o.ok)
    o.detail = std::to_string(nets.size()) + " nets, " + std::to_string(exact_checked) +
               " with exact enumeration";
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u})
    for (int gap = 1; gap <= 6; ++gap) {
      const Rational fail = 1 - lemma1_success(q, gap + 1, 1);
      if (!(Rational(1, q) <= fail && fail < Rational(1, q - 1)))
        o.fail("bracket at q=" + std::to_string(q) + " gap=" + std::to_string(gap));
    }
  auto f2 = Field::from_order(2);
  for (int k0 : {0, 1, 2}) {
    const double expect = to_double(lemma1_success(2, 4, k0));
    Interval first{};
    for (int l1 : {4 - k0, 4}) {
      const auto s = sample_subspace_completion(f2, 4, k0, l1, 100000, 100 + k0 * 10 + l1);
      const auto ci = wilson_interval(s.completions, s.trials);
      if (!(ci.low <= expect && expect <= ci.high))
        o.fail("CI misses phi at k0=" + std::to_string(k0) + " dim L1=" + std::to_string(l1));
      if (l1 == 4 - k0)
        first = ci;
      else if (ci.high < first.low || first.high < ci.low)
        o.fail("CIs for two L1 dimensions disagree at k0=" + std::to_string(k0));
    }
  }
  if (o.ok) o.detail = "42 brackets, 6 sampled intervals";
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto start = Clock::now();
  auto f2 = Field::from_order(2);
  auto b = butterfly();
  auto p = plait(2, 1);
  struct Case {
    const Network* net;
    NodeIndex sink;
    Rational exact;
    const char* name;
  };
  std::string summary;
  for (const auto& c : {Case{&b, node(b, "t1"), Rational(125, 128), "butterfly"},
                        Case{&p, node(p, "t"), Rational(55, 64), "plait(2,1)"}}) {
    const double expect = to_double(c.exact);
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto est = estimate_failure(*c.net, 2, f2, c.sink, 100000, seed);
      hits += est.ci_low <= expect && expect <= est.ci_high;
    }
    if (hits < 18) o.fail(std::string(c.name) + " covered " + std::to_string(hits) + "/20");
    summary += std::string(c.name) + " " + std::to_string(hits) + "/20 ";
  }
  const double s = seconds_since(start);
  if (s >= 30.0) o.fail("took " + std::to_string(s) + " s");
  if (o.ok) o.detail = summary + "in " + std::to_string(s) + " s";
  return o;
}

Outcome criterion6() {
  Outcome o;
  auto p = plait(1, 0);
  const auto t = node(p, "t");
  for (std::uint64_t q : {2u, 3u, 4u, 5u}) {
    const auto ex = exact_failure(p, 1, Field::from_order(q), t);
    if (ex.value != Rational(1, q) || full_report(p, t, 1, q).thm4_lower != ex.value)
      o.fail("q=" + std::to_string(q));
  }
  if (o.ok) o.detail = "exact = lower = 1/q for q = 2..5";
  return o;
}

Outcome criterion7() {
  Outcome o;
#ifdef RLNC_HAVE_CLI
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return std::make_pair(code, out.str());
  };
  const std::vector<std::string> base{"simulate", "--gen", "butterfly", "--trials", "20000",
                                      "--seed", "2024", "--format", "json"};
  auto a = run(base);
  auto b = run(base);
  auto w1 = base, w4 = base;
  w1.insert(w1.end(), {"--workers", "1"});
  w4.insert(w4.end(), {"--workers", "4"});
  auto c = run(w1);
  auto d = run(w4);
  if (a.first != 0) o.fail("simulate exited with " + std::to_string(a.first));
  if (a.second != b.second) o.fail("two runs differ");
  if (c.second != d.second) o.fail("workers 1 and 4 differ");
  if (o.ok) o.detail = "identical output across runs and worker counts";
#else
  auto b = butterfly();
  auto f2 = Field::from_order(2);
  const auto t = node(b, "t1");
  auto x = estimate_failure(b, 2, f2, t, 20000, 2024, 1);
  auto y = estimate_failure(b, 2, f2, t, 20000, 2024, 4);
  if (x.failures != y.failures) o.fail("workers 1 and 4 differ");
  if (o.ok) o.detail = "identical counts across worker counts";
#endif
  return o;
}

Outcome criterion8(const std::vector<CorpusEntry>& nets) {
  Outcome o;
  auto b = butterfly();
  const auto bt = node(b, "t1");
  const auto rb = min_internal_paths(b, bt, 2, RtMode::Exact);
  if (!rb.exact || rb.paths.r() != 4 || oracle::min_internal(b, bt, 2) != 4)
    o.fail("butterfly R_t is " + std::to_string(rb.paths.r()));
  for (int w = 1; w <= 3; ++w)
    for (int r = 0; r <= 4; ++r) {
      auto p = plait(w, r);
      const auto t = node(p, "t");
      if (min_internal_paths(p, t, w, RtMode::Exact).paths.r() != r ||
          oracle::min_internal(p, t, w) != r)
        o.fail("plait(" + std::to_string(w) + "," + std::to_string(r) + ")");
    }
  int oracle_checked = 0;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const auto& [net, w, q] = nets[i];
    const auto t = node(net, "t");
    const auto ex = min_internal_paths(net, t, w, RtMode::Exact);
    const auto heur = min_internal_paths(net, t, w, RtMode::Heuristic);
    if (heur.paths.r() < ex.paths.r()) o.fail("heuristic below exact on net " + std::to_string(i));
    if (ex.exact && net.num_channels() <= 14) {
      ++oracle_checked;
      if (ex.paths.r() != oracle::min_internal(net, t, w))
        o.fail("exact R_t disagrees with brute force on net " + std::to_string(i));
    }
  }
  if (o.ok)
    o.detail = "butterfly 4, plaits r, " + std::to_string(oracle_checked) +
               " corpus nets match brute force";
  return o;
}

}  // namespace

int main() {
  const auto nets = corpus();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 butterfly exact values", criterion1},
      {"2 plait closed form", criterion2},
      {"3 bound ordering on random networks", [&] { return criterion3(nets); }},
      {"4 subspace completion", criterion4},
      {"5 Monte Carlo coverage", criterion5},
      {"6 lower bound tightness", criterion6},
      {"7 reproducible simulation", criterion7},
      {"8 minimum internal nodes", [&] { return criterion8(nets); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %s: %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  return failed == 0 ? 0 : 1;
}

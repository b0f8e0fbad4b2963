#include <doctest.h>

#include "rlnc/bounds.hpp"
#include "rlnc/rlncsim.hpp"

using namespace rlnc;

namespace {

NodeIndex node(const Network& net, const char* id) { return *net.find_node(id); }

// Naive product of (1 - q^-i) in plain rationals, for cross-checking phi.
Rational naive_phi(std::uint64_t q, int n) {
  Rational p = 1;
  for (int i = 1; i <= n; ++i) p *= 1 - Rational(1, big_pow(q, i));
  return p;
}

}  // namespace

TEST_CASE("phi") {
  CHECK(phi(2, 0) == 1);
  CHECK(phi(2, 1) == Rational(1, 2));
  CHECK(phi(2, 2) == Rational(3, 8));
  CHECK(phi(3, 2) == Rational(16, 27));
  for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u})
    for (int n = 0; n <= 8; ++n) {
      CHECK(phi(q, n) == naive_phi(q, n));
      if (n > 0) CHECK(phi(q, n) < phi(q, n - 1));
      CHECK(phi(q, n) < phi(q + 1, n) + (n == 0 ? 1 : 0));
    }
  CHECK_THROWS_AS(phi(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(phi(2, -1), std::invalid_argument);
}

TEST_CASE("lemma1 success probability") {
  CHECK(lemma1_success(2, 1, 0) == Rational(1, 2));
  CHECK(lemma1_success(2, 2, 0) == Rational(3, 8));
  CHECK(lemma1_success(3, 3, 1) == Rational(16, 27));
  CHECK(lemma1_success(5, 4, 4) == 1);
  for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u})
    for (int gap = 1; gap <= 6; ++gap) {
      const Rational fail = 1 - lemma1_success(q, gap + 2, 2);
      CHECK(Rational(1, q) <= fail);
      CHECK(fail < Rational(1, q - 1));
    }
  CHECK_THROWS_AS(lemma1_success(2, 2, 3), std::invalid_argument);
}

TEST_CASE("closed-form bounds") {
  const std::vector<int> butterfly_profile{0, 1, 1, 1, 1};
  CHECK(bound_thm1(butterfly_profile, 2, 2) == Rational(125, 128));
  CHECK(bound_thm1(std::vector<int>{0, 0}, 2, 2) == Rational(55, 64));
  CHECK(bound_thm2(4, 2, 2) == Rational(32525, 32768));
  CHECK(bound_thm2(0, 2, 1) == Rational(1, 2));
  CHECK(bound_thm2(1, 2, 2) == Rational(55, 64));
  CHECK(bound_cor1(3, 3, 2) == bound_thm2(3, 3, 2));
  CHECK(bound_thm3(2, 5, 1) == 1 - rational_pow(Rational(4, 5), 3));
  CHECK(bound_thm4_lower(2, 2, 2) == Rational(1, 2));
  CHECK(bound_thm4_lower(4, 3, 2) == Rational(1, 16));
  CHECK(bound_thm4_lower(3, 1, 1) == Rational(1, 3));
  CHECK_THROWS_AS(bound_thm4_lower(2, 1, 2), InfeasibleRate);
  CHECK_THROWS_AS(bound_thm1(std::vector<int>{3}, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(bound_thm2(-1, 2, 2), std::invalid_argument);

  // All-zero profile of length r + 2 coincides with the r-based bound.
  for (int r = 0; r <= 4; ++r)
    for (int w = 1; w <= 3; ++w) {
      std::vector<int> zeros(r + 1, 0);
      CHECK(bound_thm1(zeros, 3, w) == bound_thm2(r, 3, w));
    }
}

TEST_CASE("full_report") {
  SUBCASE("butterfly") {
    auto b = butterfly();
    auto rep = full_report(b, node(b, "t1"), 2, 2);
    CHECK(rep.min_cut == 2);
    CHECK(rep.delta == 0);
    CHECK(rep.r == 4);
    CHECK(rep.min_internal == 4);
    CHECK(rep.rt_exact);
    CHECK(rep.num_internal == 4);
    CHECK(rep.cut_out_sizes == std::vector<int>{0, 1, 1, 1, 1});
    CHECK(rep.thm1 == Rational(125, 128));
    CHECK(rep.thm2 == Rational(32525, 32768));
    CHECK(rep.thm4_lower == Rational(1, 2));
  }
  SUBCASE("plait") {
    for (int w = 1; w <= 3; ++w)
      for (int r = 0; r <= 3; ++r) {
        auto p = plait(w, r);
        auto rep = full_report(p, node(p, "t"), w, 3);
        const auto expect = 1 - rational_pow(phi(3, w), r + 1);
        CHECK(rep.thm1 == expect);
        CHECK(rep.thm2 == expect);
        CHECK(rep.cor1 == expect);
        CHECK(rep.thm3 == expect);
      }
  }
  SUBCASE("rate above the min-cut") {
    auto b = butterfly();
    CHECK_THROWS_AS(full_report(b, node(b, "t1"), 3, 2), InfeasibleRate);
  }
  SUBCASE("ordering chain on random networks") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const int w = 1 + static_cast<int>(seed % 3);
      const std::uint64_t q = 2 + seed % 3;
      auto net = random_dag(static_cast<int>(seed % 6), w, 0.45, seed);
      auto t = node(net, "t");
      auto rep = full_report(net, t, w, q);
      CHECK(rep.thm1 <= rep.thm2);
      CHECK(rep.cor1 <= rep.thm2);
      CHECK(rep.thm2 <= rep.thm3);
      CHECK(rep.min_internal <= rep.r);
      CHECK(rep.r <= rep.num_internal);
      if (big_pow(q, coding_slots(net, w).size()) <= 100000) {
        auto ex = exact_failure(net, w, Field::from_order(q), t);
        CHECK(rep.thm4_lower <= ex.value);
        CHECK(ex.value <= rep.thm1);
      }
    }
  }
  SUBCASE("minimized order never loosens thm1") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      auto net = random_dag(5, 2, 0.5, seed);
      auto t = node(net, "t");
      auto canon = full_report(net, t, 2, 2);
      ReportOptions opts;
      opts.order = CutOrder::Minimize;
      auto best = full_report(net, t, 2, 2, opts);
      CHECK(best.thm1 <= canon.thm1);
      CHECK(best.thm2 == canon.thm2);
    }
  }
  SUBCASE("heuristic R_t is never below the exact one") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      auto net = random_dag(6, 2, 0.5, seed);
      auto t = node(net, "t");
      ReportOptions heur;
      heur.rt_mode = RtMode::Heuristic;
      CHECK(full_report(net, t, 2, 2).min_internal <= full_report(net, t, 2, 2, heur).min_internal);
    }
  }
}

TEST_CASE("subspace completion sampling") {
  auto f2 = Field::from_order(2);
  for (int k0 : {0, 1, 2}) {
    CAPTURE(k0);
    auto s = sample_subspace_completion(f2, 4, k0, 4 - k0, 40000, 17 + k0);
    auto ci = wilson_interval(s.completions, s.trials);
    const double expect = to_double(lemma1_success(2, 4, k0));
    CHECK(ci.low <= expect);
    CHECK(expect <= ci.high);
  }
  auto f3 = Field::from_order(3);
  auto s = sample_subspace_completion(f3, 3, 1, 3, 40000, 5);
  auto ci = wilson_interval(s.completions, s.trials);
  const double expect = to_double(phi(3, 2));
  CHECK(ci.low <= expect);
  CHECK(expect <= ci.high);
  CHECK_THROWS_AS(sample_subspace_completion(f2, 4, 1, 2, 10, 1), std::invalid_argument);
}

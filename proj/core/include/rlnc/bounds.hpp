#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rlnc/flowpaths.hpp"
#include "rlnc/galois.hpp"
#include "rlnc/network.hpp"
#include "rlnc/rational.hpp"

namespace rlnc {

/// prod_{i=1}^{n} (1 - q^{-i}); phi(q, 0) = 1.
Rational phi(std::uint64_t q, int n);

/// Probability that n - k0 uniform vectors from a complement subspace
/// complete a k0-dimensional subspace to the whole n-space. Throws
/// std::invalid_argument for k0 > n.
Rational lemma1_success(std::uint64_t q, int n, int k0);

/// 1 - prod_k phi(q, w - out_k) over the per-cut |CUT^out| profile.
Rational bound_thm1(std::span<const int> cut_out_sizes, std::uint64_t q, int w);

/// 1 - phi(q, w)^{r+1}.
Rational bound_thm2(int r, std::uint64_t q, int w);
Rational bound_cor1(int min_internal, std::uint64_t q, int w);
Rational bound_thm3(int num_internal, std::uint64_t q, int w);

/// 1 / q^{C_t - w + 1}. Throws InfeasibleRate when w > C_t.
Rational bound_thm4_lower(std::uint64_t q, int min_cut, int w);

enum class CutOrder { Canonical, Minimize };

struct ReportOptions {
  RtMode rt_mode = RtMode::Exact;
  std::uint64_t rt_budget = kDefaultRtBudget;
  CutOrder order = CutOrder::Canonical;
  /// Minimization over linear extensions only runs up to this many
  /// path-internal nodes; above it the canonical order is kept.
  int max_order_nodes = 8;
};

struct BoundReport {
  NodeIndex sink = kNone;
  std::uint64_t q = 0;
  int w = 0;
  int min_cut = 0;      // C_t
  int delta = 0;        // C_t - w
  int r = 0;            // internal nodes on the chosen path set
  int min_internal = 0; // R_t
  bool rt_exact = false;
  bool rt_fell_back = false;
  int num_internal = 0; // |J|
  bool order_minimized = false;
  PathSet paths;
  std::vector<NodeIndex> cut_order;
  std::vector<int> cut_out_sizes;
  Rational thm1, thm2, cor1, thm3, thm4_lower;
};

/// All bounds for one sink. Throws InfeasibleRate when w > C_t.
BoundReport full_report(const Network& net, NodeIndex sink, int w, std::uint64_t q,
                        const ReportOptions& options = {});

struct CompletionSample {
  std::uint64_t trials = 0;
  std::uint64_t completions = 0;
};

/// Monte Carlo for the subspace-completion probability: L_0 is spanned by
/// k0 unit vectors, L_1 has dimension l1_dim and together with L_0 spans the
/// whole space. Each trial draws n - k0 uniform vectors from L_1 and checks
/// whether they complete L_0. Requires n - k0 <= l1_dim <= n.
CompletionSample sample_subspace_completion(const FieldPtr& field, int n, int k0,
                                            int l1_dim, std::uint64_t trials,
                                            std::uint64_t seed);

}  // namespace rlnc

#include "rlnc/bounds.hpp"

#include <stdexcept>

#include "rlnc/random.hpp"
#include "rlnc/rlncsim.hpp"

namespace rlnc {

Rational phi(std::uint64_t q, int n) {
  if (q < 2) throw std::invalid_argument("field order must be >= 2");
  if (n < 0) throw std::invalid_argument("phi requires n >= 0");
  Rational product = 1;
  BigInt power = 1;
  for (int i = 1; i <= n; ++i) {
    power *= q;
    product *= Rational(power - 1, power);
  }
  return product;
}

Rational lemma1_success(std::uint64_t q, int n, int k0) {
  if (k0 < 0 || n < 0 || k0 > n)
    throw std::invalid_argument("lemma1 requires 0 <= k0 <= n");
  Rational success = phi(q, n - k0);
  if (n > k0) {
    const Rational failure = 1 - success;
    if (!(Rational(1, q) <= failure && failure < Rational(1, q - 1)))
      throw std::logic_error("subspace completion probability left its bracket");
  }
  return success;
}

Rational bound_thm1(std::span<const int> cut_out_sizes, std::uint64_t q, int w) {
  Rational product = 1;
  for (int out : cut_out_sizes) {
    if (out < 0 || out > w)
      throw std::invalid_argument("cut out-part size must lie in 0..w");
    product *= phi(q, w - out);
  }
  return 1 - product;
}

Rational bound_thm2(int r, std::uint64_t q, int w) {
  if (r < 0) throw std::invalid_argument("internal-node count must be >= 0");
  return 1 - rational_pow(phi(q, w), static_cast<std::uint64_t>(r) + 1);
}

Rational bound_cor1(int min_internal, std::uint64_t q, int w) {
  return bound_thm2(min_internal, q, w);
}

Rational bound_thm3(int num_internal, std::uint64_t q, int w) {
  return bound_thm2(num_internal, q, w);
}

Rational bound_thm4_lower(std::uint64_t q, int min_cut, int w) {
  if (w > min_cut) throw InfeasibleRate(w, min_cut);
  return Rational(1, big_pow(q, static_cast<std::uint64_t>(min_cut - w) + 1));
}

BoundReport full_report(const Network& net, NodeIndex sink, int w, std::uint64_t q,
                        const ReportOptions& options) {
  BoundReport report;
  report.sink = sink;
  report.q = q;
  report.w = w;
  report.min_cut = min_cut(net, sink);
  if (w > report.min_cut) throw InfeasibleRate(w, report.min_cut);
  report.delta = report.min_cut - w;
  report.num_internal = static_cast<int>(net.internal_nodes().size());

  report.paths = disjoint_paths(net, sink, w);
  report.r = report.paths.r();

  auto seq = cut_sequence(net, report.paths);
  report.cut_order = report.paths.internal_nodes;
  report.cut_out_sizes = seq.out_sizes();
  report.thm1 = bound_thm1(report.cut_out_sizes, q, w);

  if (options.order == CutOrder::Minimize && report.r <= options.max_order_nodes) {
    report.order_minimized = true;
    for_each_linear_extension(net, report.paths.internal_nodes,
                              [&](std::span<const NodeIndex> order) {
                                const auto sizes = cut_sequence(net, report.paths, order).out_sizes();
                                Rational value = bound_thm1(sizes, q, w);
                                if (value < report.thm1) {
                                  report.thm1 = std::move(value);
                                  report.cut_out_sizes = sizes;
                                  report.cut_order.assign(order.begin(), order.end());
                                }
                                return true;
                              });
  }

  report.thm2 = bound_thm2(report.r, q, w);
  const auto rt = min_internal_paths(net, sink, w, options.rt_mode, options.rt_budget);
  report.min_internal = rt.paths.r();
  report.rt_exact = rt.exact;
  report.rt_fell_back = rt.fell_back;
  report.cor1 = bound_cor1(report.min_internal, q, w);
  report.thm3 = bound_thm3(report.num_internal, q, w);
  report.thm4_lower = bound_thm4_lower(q, report.min_cut, w);
  return report;
}

CompletionSample sample_subspace_completion(const FieldPtr& field, int n, int k0,
                                            int l1_dim, std::uint64_t trials,
                                            std::uint64_t seed) {
  const int m = n - k0;
  if (k0 < 0 || m < 0) throw std::invalid_argument("requires 0 <= k0 <= n");
  if (l1_dim < m || l1_dim > n)
    throw std::invalid_argument("L_1 dimension must lie in n - k0 .. n");
  const Field& f = *field;

  // Basis of L_1: e_{k0+j} shifted by a random element of L_0, one per
  // missing direction, then e_1 .. e_{l1_dim - m} from inside L_0.
  RandomStream setup = make_stream(seed, ~std::uint64_t{0});
  std::vector<std::vector<Symbol>> basis;
  for (int j = 0; j < m; ++j) {
    std::vector<Symbol> v(n, 0);
    for (int i = 0; i < k0; ++i) v[i] = f.uniform(setup);
    v[k0 + j] = 1;
    basis.push_back(std::move(v));
  }
  for (int j = 0; j < l1_dim - m; ++j) {
    std::vector<Symbol> v(n, 0);
    v[j] = 1;
    basis.push_back(std::move(v));
  }

  CompletionSample sample;
  sample.trials = trials;
  std::vector<Symbol> cells;
  for (std::uint64_t t = 0; t < trials; ++t) {
    RandomStream rng = make_stream(seed, t);
    cells.assign(std::size_t(n) * n, 0);
    for (int i = 0; i < k0; ++i) cells[std::size_t(i) * n + i] = 1;
    for (int row = k0; row < n; ++row) {
      for (const auto& b : basis) {
        const Symbol c = f.uniform(rng);
        if (c == 0) continue;
        for (int i = 0; i < n; ++i)
          cells[std::size_t(row) * n + i] =
              f.add(cells[std::size_t(row) * n + i], f.mul(c, b[i]));
      }
    }
    if (rank_in_place(f, cells, n, n) == n) ++sample.completions;
  }
  return sample;
}

}  // namespace rlnc

#include "rlnc/rlncsim.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace rlnc {
namespace {

std::vector<ChannelIndex> inputs_of(const Network& net, int w, NodeIndex v) {
  if (v != net.source()) return net.in(v);
  std::vector<ChannelIndex> ins(w);
  for (int i = 0; i < w; ++i) ins[i] = net.num_channels() + i;
  return ins;
}

bool same_slots(const std::vector<CodingSlot>& a, const std::vector<CodingSlot>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const CodingSlot& x, const CodingSlot& y) {
                      return x.node == y.node && x.in == y.in && x.out == y.out;
                    });
}

// Accumulates kernel[out] += k * kernel[in] over a run of slots whose
// out-kernels were zeroed beforehand.
void apply_slots(const Field& field, int w, const CodingSlot* slots, std::size_t count,
                 const Symbol* coeffs, Symbol* kernels) {
  for (std::size_t s = 0; s < count; ++s) {
    const Symbol k = coeffs[s];
    if (k == 0) continue;
    const Symbol* src = kernels + std::size_t(slots[s].in) * w;
    Symbol* dst = kernels + std::size_t(slots[s].out) * w;
    for (int j = 0; j < w; ++j)
      if (src[j] != 0) dst[j] = field.add(dst[j], field.mul(k, src[j]));
  }
}

void init_kernels(int num_real, int w, std::vector<Symbol>& kernels) {
  kernels.assign(std::size_t(num_real + w) * w, 0);
  for (int i = 0; i < w; ++i) kernels[std::size_t(num_real + i) * w + i] = 1;
}

int sink_rank_from(const Field& field, const Network& net, int w, NodeIndex sink,
                   const std::vector<Symbol>& kernels, std::vector<Symbol>& scratch) {
  const auto& ins = net.in(sink);
  const int rows = static_cast<int>(ins.size());
  scratch.resize(std::size_t(rows) * w);
  for (int r = 0; r < rows; ++r)
    std::copy_n(kernels.begin() + std::size_t(ins[r]) * w, w,
                scratch.begin() + std::size_t(r) * w);
  // Rank(F_t) = rank of its transpose, which is what scratch holds.
  return rank_in_place(field, scratch, rows, w);
}

}  // namespace

std::vector<CodingSlot> coding_slots(const Network& net, int w) {
  std::vector<CodingSlot> slots;
  for (NodeIndex v : topological_order(net)) {
    const auto ins = inputs_of(net, w, v);
    for (ChannelIndex d : ins)
      for (ChannelIndex e : net.out(v)) slots.push_back({v, d, e});
  }
  return slots;
}

CoefficientAssignment CoefficientAssignment::zeros(const Network& net, int w,
                                                   FieldPtr field) {
  CoefficientAssignment a;
  a.field = std::move(field);
  a.rate = w;
  a.slots = coding_slots(net, w);
  a.values.assign(a.slots.size(), 0);
  return a;
}

CoefficientAssignment CoefficientAssignment::constant(const Network& net, int w,
                                                      FieldPtr field, Symbol value) {
  auto a = zeros(net, w, std::move(field));
  std::fill(a.values.begin(), a.values.end(), value);
  return a;
}

Symbol CoefficientAssignment::get(ChannelIndex in, ChannelIndex out) const {
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (slots[i].in == in && slots[i].out == out) return values[i];
  throw std::out_of_range("channels are not adjacent");
}

void CoefficientAssignment::set(ChannelIndex in, ChannelIndex out, Symbol value) {
  if (value >= field->order()) throw std::invalid_argument("coefficient out of range");
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].in == in && slots[i].out == out) {
      values[i] = value;
      return;
    }
  }
  throw std::out_of_range("channels are not adjacent");
}

namespace {
void check_assignment(const Network& net, int w, const CoefficientAssignment& assign) {
  if (!assign.field) throw IncompleteAssignment("assignment has no field");
  if (assign.rate != w) throw IncompleteAssignment("assignment rate does not match");
  if (!same_slots(assign.slots, coding_slots(net, w)) ||
      assign.values.size() != assign.slots.size())
    throw IncompleteAssignment("assignment does not cover every adjacent channel pair");
}
}  // namespace

KernelState propagate(const Network& net, int w, const CoefficientAssignment& assign) {
  check_assignment(net, w, assign);
  std::vector<Symbol> flat;
  init_kernels(net.num_channels(), w, flat);
  apply_slots(*assign.field, w, assign.slots.data(), assign.slots.size(),
              assign.values.data(), flat.data());
  KernelState ks;
  ks.field = assign.field;
  ks.rate = w;
  const int total = net.num_channels() + w;
  ks.kernels.resize(total);
  for (int c = 0; c < total; ++c)
    ks.kernels[c].assign(flat.begin() + std::size_t(c) * w, flat.begin() + std::size_t(c + 1) * w);
  return ks;
}

std::vector<Symbol> forward_messages(const Network& net, int w,
                                     const CoefficientAssignment& assign,
                                     const std::vector<Symbol>& source_symbols) {
  check_assignment(net, w, assign);
  if (static_cast<int>(source_symbols.size()) != w)
    throw std::invalid_argument("expected w source symbols");
  const Field& f = *assign.field;
  std::vector<Symbol> u(net.num_channels() + w, 0);
  for (int i = 0; i < w; ++i) u[net.num_channels() + i] = source_symbols[i];
  for (std::size_t s = 0; s < assign.slots.size(); ++s) {
    const auto& slot = assign.slots[s];
    u[slot.out] = f.add(u[slot.out], f.mul(assign.values[s], u[slot.in]));
  }
  return u;
}

int rank_in_place(const Field& field, std::vector<Symbol>& cells, int rows, int cols) {
  auto at = [&](int r, int c) -> Symbol& { return cells[std::size_t(r) * cols + c]; };
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = rank;
    while (pivot < rows && at(pivot, col) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank)
      for (int c = col; c < cols; ++c) std::swap(at(pivot, c), at(rank, c));
    const Symbol scale = field.inv(at(rank, col));
    for (int c = col; c < cols; ++c) at(rank, c) = field.mul(at(rank, c), scale);
    for (int r = rank + 1; r < rows; ++r) {
      const Symbol factor = at(r, col);
      if (factor == 0) continue;
      for (int c = col; c < cols; ++c)
        at(r, c) = field.sub(at(r, c), field.mul(factor, at(rank, c)));
    }
    ++rank;
  }
  return rank;
}

int rank_over_field(const Matrix& m) {
  if (m.empty() || m.front().empty()) {
    for (const auto& row : m)
      if (!row.empty()) throw std::invalid_argument("ragged matrix");
    return 0;
  }
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m.front().size());
  const FieldPtr& field = m.front().front().field();
  std::vector<Symbol> cells;
  cells.reserve(std::size_t(rows) * cols);
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != cols) throw std::invalid_argument("ragged matrix");
    for (const auto& x : row) {
      if (!x.field()->same_as(*field))
        throw std::invalid_argument("matrix mixes elements of different fields");
      cells.push_back(x.value());
    }
  }
  return rank_in_place(*field, cells, rows, cols);
}

Matrix decoding_matrix(const KernelState& ks, const Network& net, NodeIndex sink) {
  const auto& ins = net.in(sink);
  Matrix m(ks.rate);
  for (int row = 0; row < ks.rate; ++row)
    for (ChannelIndex c : ins) m[row].emplace_back(ks.field, ks.kernel(c)[row]);
  return m;
}

Simulator::Simulator(const Network& net, int w, FieldPtr field)
    : net_(net), w_(w), field_(std::move(field)), slots_(coding_slots(net, w)),
      sinks_(net.sinks()) {}

void Simulator::draw_and_propagate(RandomStream& rng) {
  init_kernels(net_.num_channels(), w_, kernels_);
  const Field& f = *field_;
  for (const auto& slot : slots_) {
    const Symbol k = f.uniform(rng);
    if (k == 0) continue;
    const Symbol* src = kernels_.data() + std::size_t(slot.in) * w_;
    Symbol* dst = kernels_.data() + std::size_t(slot.out) * w_;
    for (int j = 0; j < w_; ++j)
      if (src[j] != 0) dst[j] = f.add(dst[j], f.mul(k, src[j]));
  }
}

int Simulator::sink_rank(NodeIndex sink) {
  return sink_rank_from(*field_, net_, w_, sink, kernels_, scratch_);
}

std::vector<int> Simulator::run(RandomStream& rng) {
  draw_and_propagate(rng);
  std::vector<int> ranks;
  ranks.reserve(sinks_.size());
  for (NodeIndex t : sinks_) ranks.push_back(sink_rank(t));
  return ranks;
}

int Simulator::run_for(RandomStream& rng, NodeIndex sink) {
  draw_and_propagate(rng);
  return sink_rank(sink);
}

std::vector<int> simulate_once(const Network& net, int w, const FieldPtr& field,
                               RandomStream& trial_rng) {
  Simulator sim(net, w, field);
  return sim.run(trial_rng);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  // Guard the ordering against rounding at p = 0 or 1.
  ci.low = std::min(ci.low, p);
  ci.high = std::max(ci.high, p);
  return ci;
}

FailureEstimate estimate_failure(const Network& net, int w, const FieldPtr& field,
                                 NodeIndex sink, std::uint64_t trials, std::uint64_t seed,
                                 int workers) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  workers = std::max(1, workers);
  std::vector<std::uint64_t> failures(workers, 0);
  auto work = [&](int id) {
    Simulator sim(net, w, field);
    const std::uint64_t begin = trials * id / workers;
    const std::uint64_t end = trials * (id + 1) / workers;
    for (std::uint64_t i = begin; i < end; ++i) {
      RandomStream rng = make_stream(seed, i);
      if (sim.run_for(rng, sink) < w) ++failures[id];
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < workers; ++id) pool.emplace_back(work, id);
    for (auto& th : pool) th.join();
  }
  FailureEstimate est;
  est.trials = trials;
  for (auto f : failures) est.failures += f;
  est.seed = seed;
  est.p_hat = static_cast<double>(est.failures) / static_cast<double>(trials);
  const Interval ci = wilson_interval(est.failures, trials);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  return est;
}

BudgetExceeded::BudgetExceeded(int slots, BigInt assignments, std::uint64_t budget)
    : std::runtime_error("enumeration needs q^N = " + assignments.str() + " assignments (N = " +
                         std::to_string(slots) + "), above the budget of " +
                         std::to_string(budget)),
      slots_(slots),
      assignments_(std::move(assignments)) {}

namespace {

// Mixed-radix walk over the slots that can reach the sink. The last slot is
// the fastest digit, so an increment only recomputes the node groups from
// the most significant changed slot onward.
class Enumerator {
 public:
  Enumerator(const Network& net, int w, const FieldPtr& field, NodeIndex sink,
             std::vector<CodingSlot> slots)
      : net_(net), w_(w), field_(field), sink_(sink), slots_(std::move(slots)) {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (i == 0 || slots_[i].node != slots_[i - 1].node) group_start_.push_back(i);
      group_of_.push_back(group_start_.size() - 1);
    }
    group_start_.push_back(slots_.size());
  }

  std::uint64_t count_failures(std::uint64_t begin, std::uint64_t end) {
    const std::size_t n = slots_.size();
    const Symbol q = field_->order();
    digits_.assign(n, 0);
    std::uint64_t rest = begin;
    for (std::size_t i = n; i-- > 0;) {
      digits_[i] = static_cast<Symbol>(rest % q);
      rest /= q;
    }
    init_kernels(net_.num_channels(), w_, kernels_);
    recompute_from(0);
    std::uint64_t failures = 0;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      if (sink_rank_from(*field_, net_, w_, sink_, kernels_, scratch_) < w_) ++failures;
      if (idx + 1 == end || n == 0) break;
      std::size_t i = n - 1;
      while (digits_[i] == q - 1) {
        digits_[i] = 0;
        --i;
      }
      ++digits_[i];
      recompute_from(group_of_[i]);
    }
    return failures;
  }

 private:
  void recompute_from(std::size_t group) {
    for (std::size_t g = group; g + 1 < group_start_.size(); ++g) {
      const std::size_t b = group_start_[g], e = group_start_[g + 1];
      for (std::size_t s = b; s < e; ++s)
        std::fill_n(kernels_.begin() + std::size_t(slots_[s].out) * w_, w_, 0);
      apply_slots(*field_, w_, slots_.data() + b, e - b, digits_.data() + b, kernels_.data());
    }
  }

  const Network& net_;
  int w_;
  FieldPtr field_;
  NodeIndex sink_;
  std::vector<CodingSlot> slots_;
  std::vector<std::size_t> group_start_;
  std::vector<std::size_t> group_of_;
  std::vector<Symbol> digits_;
  std::vector<Symbol> kernels_;
  std::vector<Symbol> scratch_;
};

}  // namespace

ExactProbability exact_failure(const Network& net, int w, const FieldPtr& field,
                               NodeIndex sink, std::uint64_t budget, int workers) {
  const auto slots = coding_slots(net, w);
  const int n = static_cast<int>(slots.size());
  const std::uint64_t q = field->order();
  ExactProbability result;
  result.slots = n;
  result.assignments = big_pow(q, n);
  if (result.assignments > budget) throw BudgetExceeded(n, result.assignments, budget);

  // Nodes from which the sink is reachable.
  std::vector<char> feeds(net.num_nodes(), 0);
  std::vector<NodeIndex> stack{sink};
  feeds[sink] = 1;
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    for (ChannelIndex c : net.in(v)) {
      const NodeIndex u = net.channel(c).tail;
      if (!feeds[u]) {
        feeds[u] = 1;
        stack.push_back(u);
      }
    }
  }
  std::vector<CodingSlot> relevant;
  for (const auto& slot : slots)
    if (feeds[net.channel(slot.out).head]) relevant.push_back(slot);
  const int unused = n - static_cast<int>(relevant.size());

  std::uint64_t space = 1;
  for (std::size_t i = 0; i < relevant.size(); ++i) space *= q;

  workers = std::max(1, workers);
  std::vector<std::uint64_t> failures(workers, 0);
  auto work = [&](int id) {
    const std::uint64_t begin = space * id / workers;
    const std::uint64_t end = space * (id + 1) / workers;
    if (begin == end) return;
    Enumerator walk(net, w, field, sink, relevant);
    failures[id] = walk.count_failures(begin, end);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < workers; ++id) pool.emplace_back(work, id);
    for (auto& th : pool) th.join();
  }
  BigInt failing = 0;
  for (auto f : failures) failing += f;
  result.failing = failing * big_pow(q, unused);
  result.value = Rational(result.failing, result.assignments);
  return result;
}

}  // namespace rlnc

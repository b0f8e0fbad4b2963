#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rlnc/galois.hpp"
#include "rlnc/network.hpp"
#include "rlnc/random.hpp"
#include "rlnc/rational.hpp"

namespace rlnc {

/// One local coding coefficient k_{d,e}: d enters node, e leaves it.
struct CodingSlot {
  NodeIndex node = kNone;
  ChannelIndex in = kNone;  // may be an imaginary index at the source
  ChannelIndex out = kNone;
};

/// Every adjacent (d, e) pair of the network at rate w, ordered by
/// (topological position of the node, in-channel id, out-channel id).
std::vector<CodingSlot> coding_slots(const Network& net, int w);

/// Values for coding_slots(net, w), positionally aligned.
struct CoefficientAssignment {
  FieldPtr field;
  int rate = 0;
  std::vector<CodingSlot> slots;
  std::vector<Symbol> values;

  static CoefficientAssignment zeros(const Network& net, int w, FieldPtr field);
  static CoefficientAssignment constant(const Network& net, int w, FieldPtr field,
                                        Symbol value);
  template <class Rng>
  static CoefficientAssignment uniform(const Network& net, int w, FieldPtr field, Rng& rng) {
    auto a = zeros(net, w, std::move(field));
    for (auto& v : a.values) v = a.field->uniform(rng);
    return a;
  }

  /// Throws std::out_of_range for a pair that is not adjacent.
  Symbol get(ChannelIndex in, ChannelIndex out) const;
  void set(ChannelIndex in, ChannelIndex out, Symbol value);
};

class IncompleteAssignment : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Global kernels f_e for every real and imaginary channel.
struct KernelState {
  FieldPtr field;
  int rate = 0;
  /// Indexed by channel index (imaginary inputs after the real channels).
  std::vector<std::vector<Symbol>> kernels;

  const std::vector<Symbol>& kernel(ChannelIndex c) const { return kernels.at(c); }
};

/// f_{d_i} = unit vector i; f_e = sum over d in In(tail e) of k_{d,e} f_d.
KernelState propagate(const Network& net, int w, const CoefficientAssignment& assign);

/// Forwards actual source symbols: U_{d_i} = X_i, U_e = sum k_{d,e} U_d.
std::vector<Symbol> forward_messages(const Network& net, int w,
                                     const CoefficientAssignment& assign,
                                     const std::vector<Symbol>& source_symbols);

using Matrix = std::vector<std::vector<FieldElement>>;

/// Gaussian elimination. Throws std::invalid_argument on a ragged matrix or
/// mixed fields.
int rank_over_field(const Matrix& m);

/// Rank of a dense row-major matrix; the buffer is clobbered.
int rank_in_place(const Field& field, std::vector<Symbol>& cells, int rows, int cols);

/// F_t: w rows, one column per channel of In(t) in channel-id order.
Matrix decoding_matrix(const KernelState& ks, const Network& net, NodeIndex sink);

/// Reusable buffers for repeated trials on one network.
class Simulator {
 public:
  Simulator(const Network& net, int w, FieldPtr field);

  int num_slots() const { return static_cast<int>(slots_.size()); }
  const std::vector<NodeIndex>& sinks() const { return sinks_; }

  /// Fresh uniform coefficients, then Rank(F_t) for every sink, in the order
  /// of sinks().
  std::vector<int> run(RandomStream& rng);
  /// Same draws as run(), rank of one sink only.
  int run_for(RandomStream& rng, NodeIndex sink);

 private:
  void draw_and_propagate(RandomStream& rng);
  int sink_rank(NodeIndex sink);

  const Network& net_;
  int w_;
  FieldPtr field_;
  std::vector<CodingSlot> slots_;
  std::vector<NodeIndex> sinks_;
  std::vector<Symbol> kernels_;  // flat, w per channel
  std::vector<Symbol> scratch_;
};

/// Per-sink ranks for one trial; failure at t iff rank < w.
std::vector<int> simulate_once(const Network& net, int w, const FieldPtr& field,
                               RandomStream& trial_rng);

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

inline constexpr double kZ99 = 2.5758293035489004;

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ99);

struct FailureEstimate {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::uint64_t seed = 0;
};

/// Trial i draws from make_stream(seed, i), so the counts do not depend on
/// the number of workers.
FailureEstimate estimate_failure(const Network& net, int w, const FieldPtr& field,
                                 NodeIndex sink, std::uint64_t trials, std::uint64_t seed,
                                 int workers = 1);

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(int slots, BigInt assignments, std::uint64_t budget);
  int slots() const { return slots_; }
  const BigInt& assignments() const { return assignments_; }

 private:
  int slots_;
  BigInt assignments_;
};

struct ExactProbability {
  int slots = 0;          // N
  BigInt assignments;     // q^N
  BigInt failing;         // assignments with Rank(F_t) < w
  Rational value;
};

/// Counts failing assignments over all q^N coefficient choices. Slots that
/// cannot influence F_t are factored out as q^(unused) rather than iterated.
/// Throws BudgetExceeded when q^N > budget.
ExactProbability exact_failure(const Network& net, int w, const FieldPtr& field,
                               NodeIndex sink,
                               std::uint64_t budget = kDefaultEnumerationBudget,
                               int workers = 1);

}  // namespace rlnc

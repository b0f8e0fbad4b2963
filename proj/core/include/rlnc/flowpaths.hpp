#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rlnc/network.hpp"

namespace rlnc {

/// Maximum number of channel-disjoint source-to-sink paths under unit
/// channel capacities. 0 when the sink is unreachable.
int min_cut(const Network& net, NodeIndex sink);

class InfeasibleRate : public std::runtime_error {
 public:
  InfeasibleRate(int requested, int achieved);
  int requested() const { return requested_; }
  int achieved() const { return achieved_; }

 private:
  int requested_;
  int achieved_;
};

struct PathPosition {
  int path = -1;
  int pos = -1;
};

/// w channel-disjoint paths from the source to one sink.
struct PathSet {
  NodeIndex sink = kNone;
  int rate = 0;
  std::vector<std::vector<ChannelIndex>> paths;
  /// Distinct internal nodes on the paths, in network topological order.
  std::vector<NodeIndex> internal_nodes;
  /// (path, position) of every real channel; {-1, -1} when unused.
  std::vector<PathPosition> positions;

  int r() const { return static_cast<int>(internal_nodes.size()); }
};

/// Checks disjointness and chaining, then fills internal_nodes and
/// positions. Throws std::invalid_argument on a malformed set.
PathSet make_path_set(const Network& net, NodeIndex sink,
                      std::vector<std::vector<ChannelIndex>> paths);

/// Augmenting paths in channel-id order, then greedy decomposition taking
/// the smallest unused flow channel at each node. Throws InfeasibleRate
/// when w exceeds the min-cut.
PathSet disjoint_paths(const Network& net, NodeIndex sink, int w);

enum class RtMode { Exact, Heuristic };

inline constexpr std::uint64_t kDefaultRtBudget = 1'000'000;

struct MinInternalResult {
  PathSet paths;
  /// True when paths.r() is proven minimal, i.e. equals R_t.
  bool exact = false;
  /// Exact mode ran out of budget and returned the heuristic answer.
  bool fell_back = false;
  std::uint64_t search_nodes = 0;
};

/// Path set with the fewest distinct internal nodes.
///
/// Heuristic mode runs a min-cost flow charging one unit per internal-node
/// traversal and keeps whichever of that decomposition and disjoint_paths()
/// touches fewer distinct nodes; its r is an upper bound on R_t.
///
/// Exact mode tests candidate internal-node subsets in order of increasing
/// size, each by a max-flow restricted to the subset, and stops at the
/// first feasible one. The heuristic result caps the sizes searched. Every
/// max-flow counts as one search node against the budget.
MinInternalResult min_internal_paths(const Network& net, NodeIndex sink, int w,
                                     RtMode mode,
                                     std::uint64_t budget = kDefaultRtBudget);

/// CUT_{t,0} .. CUT_{t,r+1} for one path set. Slot i of every cut holds the
/// channel of path i, so each cut has exactly w entries.
struct CutSequence {
  /// i_0 = source, i_1 .. i_r the path-internal nodes in processing order.
  std::vector<NodeIndex> nodes;
  std::vector<std::vector<ChannelIndex>> cuts;
  std::vector<std::vector<ChannelIndex>> out_parts;
  std::vector<std::vector<ChannelIndex>> in_parts;

  /// |CUT^out_{t,k}| for k = 0..r.
  std::vector<int> out_sizes() const;
};

/// Cut sequence using the path set's own (topological) internal-node order.
CutSequence cut_sequence(const Network& net, const PathSet& ps);

/// Cut sequence for an explicit ordering of ps.internal_nodes. Throws
/// std::invalid_argument if the order is not a permutation of them or does
/// not respect the paths.
CutSequence cut_sequence(const Network& net, const PathSet& ps,
                         std::span<const NodeIndex> internal_order);

/// Calls visit for every ordering of nodes that is consistent with
/// reachability in net. Stops early when visit returns false.
void for_each_linear_extension(
    const Network& net, std::span<const NodeIndex> nodes,
    const std::function<bool(std::span<const NodeIndex>)>& visit);

}  // namespace rlnc

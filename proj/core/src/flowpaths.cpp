#include "rlnc/flowpaths.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

namespace rlnc {
namespace {

struct Flow {
  int value = 0;
  std::vector<char> on;  // per real channel
};

// Augmenting-path max-flow on unit channels. Node moves are explored in
// ascending channel index, forward arcs before backward ones. allowed, when
// non-empty, masks the nodes the flow may visit.
Flow max_flow(const Network& net, NodeIndex s, NodeIndex t, int limit,
              const std::vector<char>& allowed = {}) {
  Flow flow;
  flow.on.assign(net.num_channels(), 0);
  if (s == kNone || t == kNone) return flow;
  auto usable = [&](NodeIndex v) { return allowed.empty() || allowed[v]; };
  const int n = net.num_nodes();
  std::vector<ChannelIndex> via(n);
  std::vector<char> seen(n);
  while (flow.value < limit) {
    std::fill(seen.begin(), seen.end(), 0);
    std::fill(via.begin(), via.end(), kNone);
    std::queue<NodeIndex> bfs;
    bfs.push(s);
    seen[s] = 1;
    while (!bfs.empty() && !seen[t]) {
      const NodeIndex u = bfs.front();
      bfs.pop();
      for (ChannelIndex c : net.out(u)) {
        const NodeIndex v = net.channel(c).head;
        if (flow.on[c] || seen[v] || !usable(v)) continue;
        seen[v] = 1;
        via[v] = c;
        bfs.push(v);
      }
      for (ChannelIndex c : net.in(u)) {
        const NodeIndex v = net.channel(c).tail;
        if (!flow.on[c] || seen[v] || !usable(v)) continue;
        seen[v] = 1;
        via[v] = c;
        bfs.push(v);
      }
    }
    if (!seen[t]) break;
    for (NodeIndex v = t; v != s;) {
      const ChannelIndex c = via[v];
      if (net.channel(c).head == v) {
        flow.on[c] = 1;
        v = net.channel(c).tail;
      } else {
        flow.on[c] = 0;
        v = net.channel(c).head;
      }
    }
    ++flow.value;
  }
  return flow;
}

std::vector<std::vector<ChannelIndex>> decompose(const Network& net, NodeIndex s,
                                                 NodeIndex t, std::vector<char> on,
                                                 int count) {
  std::vector<std::vector<ChannelIndex>> paths;
  for (int i = 0; i < count; ++i) {
    std::vector<ChannelIndex> path;
    NodeIndex cur = s;
    while (cur != t) {
      const auto& outs = net.out(cur);
      auto it = std::find_if(outs.begin(), outs.end(), [&](ChannelIndex c) { return on[c]; });
      if (it == outs.end()) throw std::logic_error("flow decomposition broke conservation");
      on[*it] = 0;
      path.push_back(*it);
      cur = net.channel(*it).head;
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

// Successive shortest paths (Bellman-Ford on the residual graph), one unit
// per round. Entering an internal node costs 1.
Flow min_cost_flow(const Network& net, NodeIndex s, NodeIndex t, int units) {
  Flow flow;
  flow.on.assign(net.num_channels(), 0);
  const int n = net.num_nodes();
  auto cost = [&](ChannelIndex c) {
    return net.node(net.channel(c).head).role == NodeRole::Internal ? 1 : 0;
  };
  constexpr int kInf = std::numeric_limits<int>::max() / 2;
  std::vector<int> dist(n);
  std::vector<ChannelIndex> via(n);
  while (flow.value < units) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(via.begin(), via.end(), kNone);
    dist[s] = 0;
    for (int round = 0; round < n; ++round) {
      bool changed = false;
      for (ChannelIndex c = 0; c < net.num_channels(); ++c) {
        const auto& ch = net.channel(c);
        if (!flow.on[c]) {
          if (dist[ch.tail] < kInf && dist[ch.tail] + cost(c) < dist[ch.head]) {
            dist[ch.head] = dist[ch.tail] + cost(c);
            via[ch.head] = c;
            changed = true;
          }
        } else if (dist[ch.head] < kInf && dist[ch.head] - cost(c) < dist[ch.tail]) {
          dist[ch.tail] = dist[ch.head] - cost(c);
          via[ch.tail] = c;
          changed = true;
        }
      }
      if (!changed) break;
    }
    if (dist[t] >= kInf) break;
    for (NodeIndex v = t; v != s;) {
      const ChannelIndex c = via[v];
      if (net.channel(c).head == v && !flow.on[c]) {
        flow.on[c] = 1;
        v = net.channel(c).tail;
      } else {
        flow.on[c] = 0;
        v = net.channel(c).head;
      }
    }
    ++flow.value;
  }
  return flow;
}

std::vector<char> reachable(const Network& net, NodeIndex from, bool forward) {
  std::vector<char> seen(net.num_nodes(), 0);
  std::vector<NodeIndex> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const NodeIndex u = stack.back();
    stack.pop_back();
    for (ChannelIndex c : forward ? net.out(u) : net.in(u)) {
      const NodeIndex v = forward ? net.channel(c).head : net.channel(c).tail;
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

InfeasibleRate::InfeasibleRate(int requested, int achieved)
    : std::runtime_error("rate " + std::to_string(requested) +
                         " exceeds the min-cut capacity " + std::to_string(achieved)),
      requested_(requested),
      achieved_(achieved) {}

int min_cut(const Network& net, NodeIndex sink) {
  return max_flow(net, net.source(), sink, std::numeric_limits<int>::max()).value;
}

PathSet make_path_set(const Network& net, NodeIndex sink,
                      std::vector<std::vector<ChannelIndex>> paths) {
  const NodeIndex s = net.source();
  PathSet ps;
  ps.sink = sink;
  ps.rate = static_cast<int>(paths.size());
  ps.positions.assign(net.num_channels(), PathPosition{});
  std::vector<char> on_path(net.num_nodes(), 0);
  for (int i = 0; i < ps.rate; ++i) {
    const auto& path = paths[i];
    if (path.empty()) throw std::invalid_argument("empty path in path set");
    for (int j = 0; j < static_cast<int>(path.size()); ++j) {
      const ChannelIndex c = path[j];
      if (c < 0 || c >= net.num_channels())
        throw std::invalid_argument("path references an unknown channel");
      if (ps.positions[c].path != -1)
        throw std::invalid_argument("channel '" + net.channel(c).id +
                                    "' appears in two paths");
      ps.positions[c] = {i, j};
      const auto& ch = net.channel(c);
      if (j == 0 && ch.tail != s)
        throw std::invalid_argument("path does not start at the source");
      if (j > 0 && net.channel(path[j - 1]).head != ch.tail)
        throw std::invalid_argument("path chain broken at channel '" + ch.id + "'");
      if (j + 1 == static_cast<int>(path.size()) && ch.head != sink)
        throw std::invalid_argument("path does not end at the sink");
      if (j > 0) on_path[ch.tail] = 1;
    }
  }
  for (NodeIndex v : topological_order(net))
    if (on_path[v]) ps.internal_nodes.push_back(v);
  ps.paths = std::move(paths);
  return ps;
}

PathSet disjoint_paths(const Network& net, NodeIndex sink, int w) {
  if (w < 1) throw std::invalid_argument("rate must be >= 1");
  const NodeIndex s = net.source();
  const Flow flow = max_flow(net, s, sink, w);
  if (flow.value < w) throw InfeasibleRate(w, min_cut(net, sink));
  return make_path_set(net, sink, decompose(net, s, sink, flow.on, w));
}

MinInternalResult min_internal_paths(const Network& net, NodeIndex sink, int w,
                                     RtMode mode, std::uint64_t budget) {
  const NodeIndex s = net.source();
  MinInternalResult result;

  PathSet by_cost;
  {
    const Flow flow = min_cost_flow(net, s, sink, w);
    if (flow.value < w) throw InfeasibleRate(w, min_cut(net, sink));
    by_cost = make_path_set(net, sink, decompose(net, s, sink, flow.on, w));
  }
  PathSet plain = disjoint_paths(net, sink, w);
  result.paths = plain.r() < by_cost.r() ? std::move(plain) : std::move(by_cost);
  if (mode == RtMode::Heuristic) return result;

  // Only nodes on some source-to-sink route can matter.
  const auto from_s = reachable(net, s, true);
  const auto to_t = reachable(net, sink, false);
  std::vector<NodeIndex> candidates;
  for (NodeIndex v : topological_order(net))
    if (net.node(v).role == NodeRole::Internal && from_s[v] && to_t[v])
      candidates.push_back(v);

  const int cap = result.paths.r();
  const int k_max = std::min<int>(cap - 1, static_cast<int>(candidates.size()));
  std::vector<char> allowed(net.num_nodes(), 0);
  for (int k = 0; k <= k_max; ++k) {
    // Lexicographic k-combinations of candidate positions.
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    for (;;) {
      if (result.search_nodes >= budget) {
        result.fell_back = true;
        return result;
      }
      ++result.search_nodes;
      std::fill(allowed.begin(), allowed.end(), 0);
      allowed[s] = allowed[sink] = 1;
      for (int i : pick) allowed[candidates[i]] = 1;
      const Flow flow = max_flow(net, s, sink, w, allowed);
      if (flow.value >= w) {
        result.paths = make_path_set(net, sink, decompose(net, s, sink, flow.on, w));
        result.exact = true;
        return result;
      }
      int i = k - 1;
      while (i >= 0 && pick[i] == static_cast<int>(candidates.size()) - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  result.exact = true;
  return result;
}

std::vector<int> CutSequence::out_sizes() const {
  std::vector<int> sizes;
  sizes.reserve(out_parts.size());
  for (const auto& part : out_parts) sizes.push_back(static_cast<int>(part.size()));
  return sizes;
}

CutSequence cut_sequence(const Network& net, const PathSet& ps) {
  return cut_sequence(net, ps, ps.internal_nodes);
}

CutSequence cut_sequence(const Network& net, const PathSet& ps,
                         std::span<const NodeIndex> internal_order) {
  {
    std::vector<NodeIndex> a(internal_order.begin(), internal_order.end());
    std::vector<NodeIndex> b = ps.internal_nodes;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      throw std::invalid_argument("order is not a permutation of the path-internal nodes");
  }
  // Re-validates chaining; throws on a malformed set.
  make_path_set(net, ps.sink, ps.paths);

  const int w = ps.rate;
  const auto inputs = imaginary_inputs(net, w);
  CutSequence seq;
  seq.nodes.push_back(net.source());
  seq.nodes.insert(seq.nodes.end(), internal_order.begin(), internal_order.end());

  std::vector<int> pos(w, -1);  // -1: still on the imaginary input
  std::vector<ChannelIndex> cut(w);
  for (int i = 0; i < w; ++i) cut[i] = inputs.first_index + i;
  auto head_of = [&](ChannelIndex c) {
    return inputs.contains(c) ? net.source() : net.channel(c).head;
  };

  for (NodeIndex node : seq.nodes) {
    seq.cuts.push_back(cut);
    std::vector<ChannelIndex> in_part, out_part;
    for (int i = 0; i < w; ++i) {
      if (head_of(cut[i]) == node) {
        in_part.push_back(cut[i]);
        ++pos[i];
        cut[i] = ps.paths[i][pos[i]];
      } else {
        out_part.push_back(cut[i]);
      }
    }
    seq.in_parts.push_back(std::move(in_part));
    seq.out_parts.push_back(std::move(out_part));
  }
  for (int i = 0; i < w; ++i) {
    if (pos[i] + 1 != static_cast<int>(ps.paths[i].size()))
      throw std::invalid_argument("node order does not respect the paths");
  }
  seq.cuts.push_back(cut);
  return seq;
}

void for_each_linear_extension(
    const Network& net, std::span<const NodeIndex> nodes,
    const std::function<bool(std::span<const NodeIndex>)>& visit) {
  const int k = static_cast<int>(nodes.size());
  // before[i] bitmask: nodes that must precede nodes[i].
  std::vector<std::uint32_t> before(k, 0);
  for (int i = 0; i < k; ++i) {
    const auto down = reachable(net, nodes[i], true);
    for (int j = 0; j < k; ++j)
      if (j != i && down[nodes[j]]) before[j] |= 1u << i;
  }
  std::vector<NodeIndex> order;
  order.reserve(k);
  bool keep_going = true;
  std::function<void(std::uint32_t)> extend = [&](std::uint32_t placed) {
    if (!keep_going) return;
    if (static_cast<int>(order.size()) == k) {
      keep_going = visit(order);
      return;
    }
    for (int i = 0; i < k && keep_going; ++i) {
      if (placed >> i & 1) continue;
      if ((before[i] & placed) != before[i]) continue;
      order.push_back(nodes[i]);
      extend(placed | 1u << i);
      order.pop_back();
    }
  };
  extend(0);
}

}  // namespace rlnc

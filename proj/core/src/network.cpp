#include "rlnc/network.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "rlnc/flowpaths.hpp"
#include "rlnc/random.hpp"

namespace rlnc {

std::string_view to_string(NodeRole role) {
  switch (role) {
    case NodeRole::Source: return "source";
    case NodeRole::Internal: return "internal";
    case NodeRole::Sink: return "sink";
  }
  return "?";
}

std::optional<NodeRole> parse_role(std::string_view text) {
  if (text == "source") return NodeRole::Source;
  if (text == "internal") return NodeRole::Internal;
  if (text == "sink") return NodeRole::Sink;
  return std::nullopt;
}

bool natural_less(std::string_view a, std::string_view b) {
  auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && is_digit(a[ie])) ++ie;
      while (je < b.size() && is_digit(b[je])) ++je;
      std::size_t is = i, js = j;
      while (is + 1 < ie && a[is] == '0') ++is;
      while (js + 1 < je && b[js] == '0') ++js;
      const auto da = a.substr(is, ie - is), db = b.substr(js, je - js);
      if (da.size() != db.size()) return da.size() < db.size();
      if (da != db) return da < db;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.detail << "\n";
  return os.str();
}

Network::Network(std::vector<NodeSpec> nodes, std::vector<ChannelSpec> channels,
                 std::optional<int> rate_hint)
    : rate_hint_(rate_hint) {
  std::stable_sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) {
    return natural_less(a.id, b.id);
  });
  std::stable_sort(channels.begin(), channels.end(),
                   [](const auto& a, const auto& b) { return natural_less(a.id, b.id); });

  for (auto& spec : nodes) {
    if (node_by_id_.count(spec.id)) {
      issues_.push_back({ViolationKind::DuplicateNode, "duplicate node id '" + spec.id + "'"});
      continue;
    }
    node_by_id_.emplace(spec.id, static_cast<NodeIndex>(nodes_.size()));
    nodes_.push_back({std::move(spec.id), spec.role});
  }
  in_.resize(nodes_.size());
  out_.resize(nodes_.size());

  for (auto& spec : channels) {
    if (channel_by_id_.count(spec.id)) {
      issues_.push_back(
          {ViolationKind::DuplicateChannel, "duplicate channel id '" + spec.id + "'"});
      continue;
    }
    Channel ch;
    ch.id = spec.id;
    auto tail = find_node(spec.tail);
    auto head = find_node(spec.head);
    if (!tail || !head) {
      issues_.push_back({ViolationKind::DanglingEndpoint,
                         "channel '" + spec.id + "' references unknown node '" +
                             (tail ? spec.head : spec.tail) + "'"});
    }
    ch.tail = tail.value_or(kNone);
    ch.head = head.value_or(kNone);
    const auto idx = static_cast<ChannelIndex>(channels_.size());
    channel_by_id_.emplace(ch.id, idx);
    if (ch.tail != kNone) out_[ch.tail].push_back(idx);
    if (ch.head != kNone) in_[ch.head].push_back(idx);
    channels_.push_back(std::move(ch));
  }
}

std::optional<NodeIndex> Network::find_node(std::string_view id) const {
  auto it = node_by_id_.find(std::string(id));
  if (it == node_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<ChannelIndex> Network::find_channel(std::string_view id) const {
  auto it = channel_by_id_.find(std::string(id));
  if (it == channel_by_id_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Network::source() const {
  NodeIndex found = kNone;
  for (NodeIndex i = 0; i < num_nodes(); ++i) {
    if (nodes_[i].role != NodeRole::Source) continue;
    if (found != kNone) return kNone;
    found = i;
  }
  return found;
}

std::vector<NodeIndex> Network::sinks() const {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < num_nodes(); ++i)
    if (nodes_[i].role == NodeRole::Sink) out.push_back(i);
  return out;
}

std::vector<NodeIndex> Network::internal_nodes() const {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < num_nodes(); ++i)
    if (nodes_[i].role == NodeRole::Internal) out.push_back(i);
  return out;
}

bool operator==(const Network& a, const Network& b) {
  if (a.rate_hint_ != b.rate_hint_) return false;
  if (a.num_nodes() != b.num_nodes() || a.num_channels() != b.num_channels())
    return false;
  // Both sides are sorted by natural id, so a positional compare suffices.
  for (NodeIndex i = 0; i < a.num_nodes(); ++i)
    if (a.nodes_[i].id != b.nodes_[i].id || a.nodes_[i].role != b.nodes_[i].role)
      return false;
  for (ChannelIndex c = 0; c < a.num_channels(); ++c) {
    const auto& x = a.channels_[c];
    const auto& y = b.channels_[c];
    if (x.id != y.id || x.tail != y.tail || x.head != y.head) return false;
  }
  return true;
}

ImaginaryInputs imaginary_inputs(const Network& net, int rate) {
  if (rate < 1) throw std::invalid_argument("rate must be >= 1");
  ImaginaryInputs inputs;
  inputs.rate = rate;
  inputs.first_index = net.num_channels();
  for (int i = 0; i < rate; ++i) {
    Channel d;
    d.id = "d" + std::to_string(i + 1);
    d.head = net.source();
    d.imaginary = true;
    inputs.channels.push_back(std::move(d));
  }
  return inputs;
}

std::string channel_label(const Network& net, ChannelIndex c) {
  if (c >= 0 && c < net.num_channels()) return net.channel(c).id;
  return "d" + std::to_string(c - net.num_channels() + 1);
}

namespace {

// Returns the node ids along one directed cycle, or empty if acyclic.
std::vector<NodeIndex> find_cycle(const Network& net) {
  const int n = net.num_nodes();
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<NodeIndex> parent(n, kNone);
  for (NodeIndex root = 0; root < n; ++root) {
    if (state[root]) continue;
    std::vector<std::pair<NodeIndex, std::size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto& outs = net.out(u);
      if (next == outs.size()) {
        state[u] = 2;
        stack.pop_back();
        continue;
      }
      const NodeIndex v = net.channel(outs[next++]).head;
      if (v == kNone) continue;
      if (state[v] == 1) {
        std::vector<NodeIndex> cycle{v};
        for (NodeIndex x = u; x != v; x = parent[x]) cycle.push_back(x);
        std::reverse(cycle.begin() + 1, cycle.end());
        return cycle;
      }
      if (state[v] == 0) {
        state[v] = 1;
        parent[v] = u;
        stack.emplace_back(v, 0);
      }
    }
  }
  return {};
}

}  // namespace

ValidationReport validate(const Network& net) {
  ValidationReport report;
  report.violations = net.construction_issues();
  auto add = [&](ViolationKind kind, std::string detail) {
    report.violations.push_back({kind, std::move(detail)});
  };

  int sources = 0;
  for (const auto& node : net.nodes()) sources += node.role == NodeRole::Source;
  if (sources == 0) add(ViolationKind::NoSource, "no source node");
  if (sources > 1) add(ViolationKind::MultipleSources, "more than one source node");
  if (net.sinks().empty()) add(ViolationKind::NoSink, "no sink node");

  for (NodeIndex i = 0; i < net.num_nodes(); ++i) {
    const auto& node = net.node(i);
    if (node.role == NodeRole::Source && !net.in(i).empty())
      add(ViolationKind::SourceHasIncoming,
          "source '" + node.id + "' has incoming channel '" +
              net.channel(net.in(i).front()).id + "'");
    if (node.role == NodeRole::Sink && !net.out(i).empty())
      add(ViolationKind::SinkHasOutgoing,
          "sink '" + node.id + "' has outgoing channel '" +
              net.channel(net.out(i).front()).id + "'");
  }
  for (const auto& ch : net.channels())
    if (ch.tail != kNone && ch.tail == ch.head)
      add(ViolationKind::SelfLoop, "channel '" + ch.id + "' is a self-loop");

  const auto cycle = find_cycle(net);
  if (!cycle.empty()) {
    std::string detail = "cycle:";
    for (NodeIndex v : cycle) detail += " " + net.node(v).id + " ->";
    detail += " " + net.node(cycle.front()).id;
    add(ViolationKind::Cycle, std::move(detail));
  }
  return report;
}

std::vector<NodeIndex> topological_order(const Network& net) {
  const int n = net.num_nodes();
  std::vector<int> indegree(n, 0);
  for (const auto& ch : net.channels())
    if (ch.head != kNone && ch.tail != kNone) ++indegree[ch.head];
  // Node index order is natural id order, so a min-heap on index breaks ties.
  std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
  for (NodeIndex i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(i);
  std::vector<NodeIndex> order;
  order.reserve(n);
  while (!ready.empty()) {
    const NodeIndex u = ready.top();
    ready.pop();
    order.push_back(u);
    for (ChannelIndex c : net.out(u)) {
      const NodeIndex v = net.channel(c).head;
      if (v != kNone && --indegree[v] == 0) ready.push(v);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    std::string detail = "network contains a cycle";
    const auto cycle = find_cycle(net);
    if (!cycle.empty()) {
      detail += ":";
      for (NodeIndex v : cycle) detail += " " + net.node(v).id;
    }
    throw CycleError(detail);
  }
  return order;
}

Network plait(int w, int r) {
  if (w < 1 || r < 0) throw std::invalid_argument("plait requires w >= 1 and r >= 0");
  std::vector<NodeSpec> nodes{{"s", NodeRole::Source}};
  for (int k = 1; k <= r; ++k) nodes.push_back({"i" + std::to_string(k), NodeRole::Internal});
  nodes.push_back({"t", NodeRole::Sink});
  std::vector<ChannelSpec> channels;
  int next = 1;
  for (int k = 0; k <= r; ++k) {
    for (int j = 0; j < w; ++j)
      channels.push_back(
          {"e" + std::to_string(next++), nodes[k].id, nodes[k + 1].id});
  }
  return Network(std::move(nodes), std::move(channels), w);
}

Network butterfly() {
  std::vector<NodeSpec> nodes{
      {"s", NodeRole::Source},    {"u1", NodeRole::Internal}, {"u2", NodeRole::Internal},
      {"b1", NodeRole::Internal}, {"b2", NodeRole::Internal}, {"t1", NodeRole::Sink},
      {"t2", NodeRole::Sink},
  };
  std::vector<ChannelSpec> channels{
      {"e1", "s", "u1"},  {"e2", "s", "u2"},  {"e3", "u1", "b1"},
      {"e4", "u2", "b1"}, {"e5", "b1", "b2"}, {"e6", "u1", "t1"},
      {"e7", "b2", "t1"}, {"e8", "u2", "t2"}, {"e9", "b2", "t2"},
  };
  return Network(std::move(nodes), std::move(channels), 2);
}

Network random_dag(int num_internal, int w, double channel_density, std::uint64_t seed) {
  if (num_internal < 0 || w < 1)
    throw std::invalid_argument("random_dag requires num_internal >= 0 and w >= 1");
  if (!(channel_density > 0.0 && channel_density <= 1.0))
    throw std::invalid_argument("channel density must lie in (0, 1]");

  RandomStream rng(mix64(seed));
  std::vector<NodeSpec> nodes{{"s", NodeRole::Source}};
  for (int k = 1; k <= num_internal; ++k)
    nodes.push_back({"i" + std::to_string(k), NodeRole::Internal});
  nodes.push_back({"t", NodeRole::Sink});

  std::vector<ChannelSpec> channels;
  int next = 1;
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b)
      if (unit_double(rng) < channel_density)
        channels.push_back({"e" + std::to_string(next++), nodes[a].id, nodes[b].id});

  Network net(nodes, channels, w);
  int cut = min_cut(net, *net.find_node("t"));
  while (cut < w) {
    channels.push_back({"e" + std::to_string(next++), "s", "t"});
    ++cut;
  }
  return Network(std::move(nodes), std::move(channels), w);
}

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

InvalidNetwork::InvalidNetwork(ValidationReport report)
    : std::runtime_error("invalid network:\n" + report.to_string()),
      report_(std::move(report)) {}

Network read_network(std::istream& in) {
  struct Token {
    std::string text;
    int column;
  };
  std::vector<NodeSpec> nodes;
  std::vector<ChannelSpec> channels;
  std::vector<int> channel_lines;
  std::map<std::string, int> node_lines, channel_ids;
  std::optional<int> rate;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::vector<Token> tokens;
    for (std::size_t i = 0; i < raw.size();) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      tokens.push_back({raw.substr(i, j - i), static_cast<int>(i) + 1});
      i = j;
    }
    if (tokens.empty()) continue;
    const auto& kw = tokens[0].text;
    if (kw == "node") {
      if (tokens.size() != 3)
        throw ParseError(line_no, tokens[0].column, "expected 'node <id> <role>'");
      auto role = parse_role(tokens[2].text);
      if (!role)
        throw ParseError(line_no, tokens[2].column, "unknown role '" + tokens[2].text + "'");
      if (node_lines.count(tokens[1].text))
        throw ParseError(line_no, tokens[1].column, "duplicate node '" + tokens[1].text + "'");
      node_lines[tokens[1].text] = line_no;
      nodes.push_back({tokens[1].text, *role});
    } else if (kw == "channel") {
      if (tokens.size() != 4)
        throw ParseError(line_no, tokens[0].column,
                         "expected 'channel <id> <tail-id> <head-id>'");
      if (channel_ids.count(tokens[1].text))
        throw ParseError(line_no, tokens[1].column,
                         "duplicate channel '" + tokens[1].text + "'");
      channel_ids[tokens[1].text] = line_no;
      channels.push_back({tokens[1].text, tokens[2].text, tokens[3].text});
      channel_lines.push_back(line_no);
    } else if (kw == "rate") {
      if (tokens.size() != 2)
        throw ParseError(line_no, tokens[0].column, "expected 'rate <w>'");
      try {
        std::size_t used = 0;
        const int w = std::stoi(tokens[1].text, &used);
        if (used != tokens[1].text.size() || w < 1) throw std::invalid_argument("");
        rate = w;
      } catch (const std::exception&) {
        throw ParseError(line_no, tokens[1].column, "rate must be a positive integer");
      }
    } else {
      throw ParseError(line_no, tokens[0].column, "unknown directive '" + kw + "'");
    }
  }

  // Line order is free, so endpoints are resolved after everything is read.
  for (std::size_t i = 0; i < channels.size(); ++i) {
    for (const auto* end : {&channels[i].tail, &channels[i].head}) {
      if (!node_lines.count(*end))
        throw ParseError(channel_lines[i], 1,
                         "channel '" + channels[i].id + "' references unknown node '" +
                             *end + "'");
    }
  }
  const bool has_source = std::any_of(nodes.begin(), nodes.end(), [](const NodeSpec& n) {
    return n.role == NodeRole::Source;
  });
  if (!has_source) throw ParseError(line_no, 1, "no 'node <id> source' line");

  Network net(std::move(nodes), std::move(channels), rate);
  auto report = validate(net);
  if (!report.ok()) throw InvalidNetwork(std::move(report));
  return net;
}

Network parse_network(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_network(in);
}

Network read_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file '" + path + "'");
  return read_network(in);
}

void write_network(std::ostream& out, const Network& net) {
  if (net.rate_hint()) out << "rate " << *net.rate_hint() << "\n";
  std::vector<NodeIndex> order;
  try {
    order = topological_order(net);
  } catch (const CycleError&) {
    order.resize(net.num_nodes());
    std::iota(order.begin(), order.end(), 0);
  }
  for (NodeIndex v : order)
    out << "node " << net.node(v).id << " " << to_string(net.node(v).role) << "\n";
  for (const auto& ch : net.channels()) {
    out << "channel " << ch.id << " " << (ch.tail == kNone ? "?" : net.node(ch.tail).id)
        << " " << (ch.head == kNone ? "?" : net.node(ch.head).id) << "\n";
  }
}

std::string write_network(const Network& net) {
  std::ostringstream os;
  write_network(os, net);
  return os.str();
}

}  // namespace rlnc

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rlnc {

using NodeIndex = int;
using ChannelIndex = int;
inline constexpr int kNone = -1;

enum class NodeRole { Source, Internal, Sink };

std::string_view to_string(NodeRole role);
std::optional<NodeRole> parse_role(std::string_view text);

/// Orders identifiers so that embedded digit runs compare numerically
/// ("e2" < "e10"). Used for every tie-break on node and channel ids.
bool natural_less(std::string_view a, std::string_view b);

struct NodeSpec {
  std::string id;
  NodeRole role;
};

struct ChannelSpec {
  std::string id;
  std::string tail;
  std::string head;
};

struct Node {
  std::string id;
  NodeRole role;
};

/// Unit-capacity channel. Imaginary channels feed source symbols into the
/// source node and have no tail.
struct Channel {
  std::string id;
  NodeIndex tail = kNone;
  NodeIndex head = kNone;
  bool imaginary = false;
};

enum class ViolationKind {
  NoSource,
  MultipleSources,
  NoSink,
  SourceHasIncoming,
  SinkHasOutgoing,
  Cycle,
  DanglingEndpoint,
  SelfLoop,
  DuplicateNode,
  DuplicateChannel,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string to_string() const;
};

/// Acyclic directed multigraph with one source. Nodes and channels are
/// stored in natural id order, so index order doubles as id order.
///
/// A Network can hold an illegal graph (that is what validate() is for);
/// algorithms downstream assume a valid one.
class Network {
 public:
  Network() = default;
  Network(std::vector<NodeSpec> nodes, std::vector<ChannelSpec> channels,
          std::optional<int> rate_hint = std::nullopt);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_channels() const { return static_cast<int>(channels_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Channel>& channels() const { return channels_; }
  const Node& node(NodeIndex i) const { return nodes_.at(i); }
  const Channel& channel(ChannelIndex c) const { return channels_.at(c); }

  std::optional<NodeIndex> find_node(std::string_view id) const;
  std::optional<ChannelIndex> find_channel(std::string_view id) const;

  /// kNone unless exactly one node is tagged source.
  NodeIndex source() const;
  std::vector<NodeIndex> sinks() const;
  std::vector<NodeIndex> internal_nodes() const;

  /// Real channels only, ascending channel index.
  const std::vector<ChannelIndex>& in(NodeIndex n) const { return in_.at(n); }
  const std::vector<ChannelIndex>& out(NodeIndex n) const { return out_.at(n); }

  std::optional<int> rate_hint() const { return rate_hint_; }

  const std::vector<Violation>& construction_issues() const { return issues_; }

  /// Structural equality: same node roles and channel endpoints by id.
  friend bool operator==(const Network& a, const Network& b);

 private:
  std::vector<Node> nodes_;
  std::vector<Channel> channels_;
  std::vector<std::vector<ChannelIndex>> in_;
  std::vector<std::vector<ChannelIndex>> out_;
  std::unordered_map<std::string, NodeIndex> node_by_id_;
  std::unordered_map<std::string, ChannelIndex> channel_by_id_;
  std::optional<int> rate_hint_;
  std::vector<Violation> issues_;
};

/// The w imaginary channels d_1..d_w entering the source. They take the
/// channel indices num_channels() .. num_channels() + w - 1.
struct ImaginaryInputs {
  int rate = 0;
  std::vector<Channel> channels;

  ChannelIndex first_index = 0;
  bool contains(ChannelIndex c) const {
    return c >= first_index && c < first_index + rate;
  }
};

ImaginaryInputs imaginary_inputs(const Network& net, int rate);

/// Display label for a real or imaginary channel index.
std::string channel_label(const Network& net, ChannelIndex c);

ValidationReport validate(const Network& net);

class CycleError : public std::runtime_error {
 public:
  explicit CycleError(const std::string& what) : std::runtime_error(what) {}
};

/// Kahn's algorithm, ties broken by natural node id. Throws CycleError.
std::vector<NodeIndex> topological_order(const Network& net);

// Generators.
Network plait(int w, int r);
Network butterfly();
Network random_dag(int num_internal, int w, double channel_density,
                   std::uint64_t seed);

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class InvalidNetwork : public std::runtime_error {
 public:
  explicit InvalidNetwork(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

Network read_network(std::istream& in);
Network parse_network(std::string_view text);
Network read_network_file(const std::string& path);
void write_network(std::ostream& out, const Network& net);
std::string write_network(const Network& net);

}  // namespace rlnc

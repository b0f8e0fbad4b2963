#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "rlnc/network.hpp"

using namespace rlnc;

namespace {

std::vector<std::string> ids(const Network& net, const std::vector<NodeIndex>& nodes) {
  std::vector<std::string> out;
  for (auto v : nodes) out.push_back(net.node(v).id);
  return out;
}

}  // namespace

TEST_CASE("natural id order") {
  CHECK(natural_less("e2", "e10"));
  CHECK_FALSE(natural_less("e10", "e2"));
  CHECK(natural_less("a", "b"));
  CHECK(natural_less("i9", "i10"));
  CHECK(natural_less("t", "t1"));
  CHECK_FALSE(natural_less("x", "x"));
}

TEST_CASE("validate accepts generator output") {
  CHECK(validate(butterfly()).ok());
  CHECK(validate(plait(3, 4)).ok());
  CHECK(validate(plait(1, 0)).ok());
  for (std::uint64_t seed = 0; seed < 30; ++seed)
    CHECK(validate(random_dag(5, 2, 0.4, seed)).ok());
}

TEST_CASE("validate reports violations") {
  SUBCASE("two-node cycle") {
    Network net({{"s", NodeRole::Source}, {"u", NodeRole::Internal}, {"v", NodeRole::Internal},
                 {"t", NodeRole::Sink}},
                {{"a", "s", "u"}, {"b", "u", "v"}, {"c", "v", "u"}, {"d", "v", "t"}});
    auto report = validate(net);
    CHECK(report.has(ViolationKind::Cycle));
    CHECK(report.to_string().find("u -> v -> u") != std::string::npos);
    CHECK_THROWS_AS(topological_order(net), CycleError);
  }
  SUBCASE("source with an incoming channel") {
    Network net({{"s", NodeRole::Source}, {"u", NodeRole::Internal}, {"t", NodeRole::Sink}},
                {{"a", "s", "u"}, {"b", "u", "t"}, {"c", "u", "s"}});
    auto report = validate(net);
    CHECK(report.has(ViolationKind::SourceHasIncoming));
  }
  SUBCASE("sink with an outgoing channel") {
    Network net({{"s", NodeRole::Source}, {"u", NodeRole::Internal}, {"t", NodeRole::Sink}},
                {{"a", "s", "t"}, {"b", "t", "u"}});
    CHECK(validate(net).has(ViolationKind::SinkHasOutgoing));
  }
  SUBCASE("dangling endpoint and duplicates") {
    Network net({{"s", NodeRole::Source}, {"t", NodeRole::Sink}, {"t", NodeRole::Sink}},
                {{"a", "s", "t"}, {"a", "s", "t"}, {"b", "s", "nowhere"}});
    auto report = validate(net);
    CHECK(report.has(ViolationKind::DanglingEndpoint));
    CHECK(report.has(ViolationKind::DuplicateNode));
    CHECK(report.has(ViolationKind::DuplicateChannel));
  }
  SUBCASE("missing source and sink") {
    Network net({{"u", NodeRole::Internal}}, {});
    auto report = validate(net);
    CHECK(report.has(ViolationKind::NoSource));
    CHECK(report.has(ViolationKind::NoSink));
  }
}

TEST_CASE("topological order") {
  CHECK(ids(plait(2, 1), topological_order(plait(2, 1))) ==
        std::vector<std::string>{"s", "i1", "t"});
  auto b = butterfly();
  auto order = ids(b, topological_order(b));
  CHECK(order.front() == "s");
  CHECK((order.back() == "t1" || order.back() == "t2"));
  CHECK(order == std::vector<std::string>{"s", "u1", "u2", "b1", "b2", "t1", "t2"});
  CHECK(ids(plait(3, 0), topological_order(plait(3, 0))) ==
        std::vector<std::string>{"s", "t"});

  // Every channel runs forward in the order.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto net = random_dag(6, 2, 0.5, seed);
    auto topo = topological_order(net);
    std::vector<int> pos(net.num_nodes());
    for (int i = 0; i < static_cast<int>(topo.size()); ++i) pos[topo[i]] = i;
    for (const auto& ch : net.channels()) CHECK(pos[ch.tail] < pos[ch.head]);
  }
}

TEST_CASE("plait structure") {
  auto p = plait(2, 1);
  CHECK(p.num_nodes() == 3);
  CHECK(p.num_channels() == 4);

  auto single = plait(1, 0);
  CHECK(single.num_nodes() == 2);
  REQUIRE(single.num_channels() == 1);
  CHECK(single.node(single.channel(0).tail).id == "s");
  CHECK(single.node(single.channel(0).head).id == "t");

  auto p32 = plait(3, 2);
  CHECK(p32.num_channels() == 9);
  CHECK(oracle::min_cut(p32, *p32.find_node("t")) == 3);

  for (int w = 1; w <= 3; ++w)
    for (int r = 0; r <= 3; ++r) {
      auto net = plait(w, r);
      CHECK(net.num_channels() == (r + 1) * w);
      CHECK(static_cast<int>(net.internal_nodes().size()) == r);
    }
}

TEST_CASE("butterfly structure") {
  auto b = butterfly();
  CHECK(b.num_nodes() == 7);
  CHECK(b.num_channels() == 9);
  CHECK(b.internal_nodes().size() == 4);
  CHECK(b.sinks().size() == 2);
  CHECK(oracle::min_cut(b, *b.find_node("t1")) == 2);
  CHECK(oracle::min_cut(b, *b.find_node("t2")) == 2);
}

TEST_CASE("random_dag") {
  SUBCASE("full density without internal nodes is parallel s-t channels") {
    auto net = random_dag(0, 3, 1.0, 4);
    CHECK(net.num_nodes() == 2);
    CHECK(net.num_channels() == 3);
    for (const auto& ch : net.channels()) {
      CHECK(net.node(ch.tail).id == "s");
      CHECK(net.node(ch.head).id == "t");
    }
  }
  SUBCASE("deterministic per seed") {
    CHECK(random_dag(5, 2, 0.4, 7) == random_dag(5, 2, 0.4, 7));
    CHECK(write_network(random_dag(5, 2, 0.4, 7)) == write_network(random_dag(5, 2, 0.4, 7)));
  }
  SUBCASE("min-cut reaches the rate") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      auto net = random_dag(4, 3, 0.3, seed);
      CHECK(oracle::min_cut(net, *net.find_node("t")) >= 3);
    }
  }
  CHECK_THROWS_AS(random_dag(3, 2, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_dag(3, 0, 0.5, 1), std::invalid_argument);
}

TEST_CASE("network file round trip") {
  std::vector<Network> nets{butterfly(), plait(2, 3), plait(1, 0)};
  for (std::uint64_t seed = 0; seed < 10; ++seed) nets.push_back(random_dag(5, 2, 0.5, seed));
  for (const auto& net : nets) {
    const auto text = write_network(net);
    const auto back = parse_network(text);
    CHECK(back == net);
    CHECK(write_network(back) == text);
  }
}

TEST_CASE("reader accepts any line order and comments") {
  auto net = parse_network(
      "# tiny network\n"
      "channel c2 a t   # trailing comment\n"
      "channel c1 s a\n"
      "node t sink\n"
      "node a internal\n"
      "\n"
      "node s source\n");
  CHECK(net.num_nodes() == 3);
  CHECK(net.num_channels() == 2);
  CHECK_FALSE(net.rate_hint().has_value());
  CHECK(net.channel(0).id == "c1");
}

TEST_CASE("reader rejections") {
  SUBCASE("unknown node in a channel is a parse error") {
    try {
      parse_network("node s source\nnode t sink\nchannel e1 s x\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("'x'") != std::string::npos);
    }
  }
  SUBCASE("cycle is a validation error listing it") {
    try {
      parse_network(
          "node s source\nnode a internal\nnode b internal\nnode t sink\n"
          "channel e1 s a\nchannel e2 a b\nchannel e3 b a\nchannel e4 b t\n");
      FAIL("expected InvalidNetwork");
    } catch (const InvalidNetwork& e) {
      CHECK(e.report().has(ViolationKind::Cycle));
      CHECK(std::string(e.what()).find("a -> b -> a") != std::string::npos);
    }
  }
  SUBCASE("malformed lines") {
    CHECK_THROWS_AS(parse_network("node s\n"), ParseError);
    CHECK_THROWS_AS(parse_network("node s boss\n"), ParseError);
    CHECK_THROWS_AS(parse_network("edge a b c\n"), ParseError);
    CHECK_THROWS_AS(parse_network("node s source\nrate zero\n"), ParseError);
    CHECK_THROWS_AS(parse_network("node t sink\n"), ParseError);
    CHECK_THROWS_AS(
        parse_network("node s source\nnode t sink\nchannel e s t\nchannel e s t\n"),
        ParseError);
  }
  CHECK_THROWS(read_network_file("/nonexistent/net.txt"));
}

TEST_CASE("imaginary inputs") {
  auto net = butterfly();
  auto in = imaginary_inputs(net, 2);
  CHECK(in.rate == 2);
  CHECK(in.first_index == 9);
  REQUIRE(in.channels.size() == 2);
  CHECK(in.channels[0].imaginary);
  CHECK(in.channels[0].head == net.source());
  CHECK(in.channels[0].tail == kNone);
  CHECK(in.contains(10));
  CHECK_FALSE(in.contains(8));
  CHECK(channel_label(net, 9) == "d1");
  CHECK(channel_label(net, 0) == "e1");
}

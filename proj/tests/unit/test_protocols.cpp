#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "test_support.hpp"
#include "wsn/errors.hpp"
#include "wsn/protocols.hpp"

using namespace wsn;

namespace {

Node make_node(NodeId id, double x, double y, NodeKind kind = NodeKind::Normal, double energy = 0.5) {
  Node n;
  n.id = id;
  n.position = {x, y};
  n.kind = kind;
  n.energy = n.initial_energy = energy;
  n.alive = energy > 0;
  return n;
}

SimConfig bits_config(ProtocolKind kind, std::uint32_t bits) {
  SimConfig c;
  c.protocol = kind;
  c.packet_bits = bits;
  return c;
}

}  // namespace

TEST_CASE("leach threshold") {
  CHECK_REL(leach_threshold(true, 0, 0.1), 0.1);
  CHECK_REL(leach_threshold(true, 5, 0.1), 0.2);
  CHECK(leach_threshold(true, 9, 0.1) == 1.0);
  CHECK_REL(leach_threshold(true, 10, 0.1), 0.1);
  for (std::uint32_t r = 0; r < 25; ++r) {
    CHECK(leach_threshold(false, r, 0.1) == 0.0);
    CHECK(leach_threshold(false, r, 0.37) == 0.0);
  }
  CHECK_THROWS_AS(leach_threshold(true, 0, 0.0), InvalidParameters);
  CHECK_THROWS_AS(leach_threshold(true, 0, 1.0), InvalidParameters);
  CHECK_THROWS_AS(leach_threshold(false, 0, 1.5), InvalidParameters);
}

TEST_CASE("threshold stays a probability for any P") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> p(1e-3, 0.999);
  for (int i = 0; i < 5000; ++i) {
    const double pv = p(gen);
    const auto r = static_cast<std::uint32_t>(gen() % 5000);
    const double t = leach_threshold(true, r, pv);
    CHECK(t >= pv * (1 - 1e-12));
    CHECK(t <= 1.0);
  }
}

TEST_CASE("sep probabilities") {
  for (double m : {0.0, 0.3, 1.0}) {
    const auto s = sep_probabilities(0.1, m, 0.0);
    CHECK_REL(s.normal, 0.1);
    CHECK_REL(s.advanced, 0.1);
  }
  auto s = sep_probabilities(0.1, 0.2, 1.0);
  CHECK_REL(s.normal, 0.1 / 1.2);
  CHECK_REL(s.advanced, 0.2 / 1.2);
  s = sep_probabilities(0.1, 1.0, 1.0);
  CHECK_REL(s.normal, 0.05);
  CHECK_REL(s.advanced, 0.1);

  CHECK_THROWS_AS(sep_probabilities(0.0, 0.1, 1), InvalidParameters);
  CHECK_THROWS_AS(sep_probabilities(0.1, 1.1, 1), InvalidParameters);
  CHECK_THROWS_AS(sep_probabilities(0.1, -0.1, 1), InvalidParameters);
  CHECK_THROWS_AS(sep_probabilities(0.1, 0.1, -1), InvalidParameters);
}

TEST_CASE("sep population mean equals P") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 5000; ++i) {
    const double p = 1e-3 + 0.998 * u(gen), m = u(gen), a = 10 * u(gen);
    const auto s = sep_probabilities(p, m, a);
    CHECK(std::abs((1 - m) * s.normal + m * s.advanced - p) <= 1e-12 * p);
  }
}

TEST_CASE("election edge cases") {
  std::vector<Node> nodes;
  for (NodeId i = 0; i < 20; ++i) nodes.push_back(make_node(i, i, i));
  ElectionState st;
  st.p_normal = st.p_advanced = 0.1;

  SUBCASE("nobody eligible") {
    for (Node& n : nodes) n.in_g = false;
    Rng rng(1);
    CHECK(elect_cluster_heads(nodes, st, rng).empty());
  }
  SUBCASE("last round of the epoch elects every remaining candidate") {
    st.round = 9;
    for (NodeId i = 0; i < 20; i += 3) nodes[i].in_g = false;
    Rng rng(1);
    const auto heads = elect_cluster_heads(nodes, st, rng);
    std::vector<NodeId> expected;
    for (NodeId i = 0; i < 20; ++i)
      if (i % 3 != 0) expected.push_back(i);
    CHECK(heads == expected);
    for (NodeId h : heads) CHECK_FALSE(nodes[h].in_g);
  }
  SUBCASE("same seed, same heads") {
    auto copy = nodes;
    Rng a(42), b(42);
    CHECK(elect_cluster_heads(nodes, st, a) == elect_cluster_heads(copy, st, b));
  }
}

TEST_CASE("election never picks dead, gateway, or ineligible nodes") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Node> nodes;
    for (NodeId i = 0; i < 40; ++i) {
      const auto kind = (gen() % 5 == 0) ? NodeKind::Gateway : NodeKind::Normal;
      Node n = make_node(i, 0, 0, kind, (gen() % 4 == 0) ? 0.0 : 0.5);
      n.in_g = gen() % 3 != 0;
      nodes.push_back(n);
    }
    const auto before = nodes;
    ElectionState st;
    st.round = static_cast<std::uint32_t>(gen() % 10);
    Rng rng(gen());
    for (NodeId h : elect_cluster_heads(nodes, st, rng)) {
      CHECK(before[h].alive);
      CHECK(before[h].in_g);
      CHECK(before[h].kind != NodeKind::Gateway);
    }
  }
}

TEST_CASE("epoch reset restores eligibility per class") {
  std::vector<Node> nodes{make_node(0, 0, 0), make_node(1, 0, 0, NodeKind::Advanced),
                          make_node(2, 0, 0, NodeKind::Gateway), make_node(3, 0, 0, NodeKind::Normal, 0.0)};
  for (Node& n : nodes) n.in_g = false;
  ElectionState st;
  st.p_normal = 0.1;     // epoch 10
  st.p_advanced = 0.25;  // epoch 4
  st.round = 4;
  begin_epoch(nodes, st);
  CHECK_FALSE(nodes[0].in_g);
  CHECK(nodes[1].in_g);
  CHECK_FALSE(nodes[2].in_g);
  CHECK_FALSE(nodes[3].in_g);
  st.round = 20;
  begin_epoch(nodes, st);
  CHECK(nodes[0].in_g);
  CHECK(epoch_length(1.0 / 10.4) == 10);
}

TEST_CASE("member assignment") {
  SUBCASE("single head takes everyone") {
    std::vector<Node> nodes;
    for (NodeId i = 0; i < 6; ++i) nodes.push_back(make_node(i, 10.0 * i, 3));
    const std::vector<NodeId> heads{4};
    const auto topo = assign_members(nodes, heads);
    REQUIRE(topo.clusters.size() == 1);
    CHECK(topo.clusters[0].members == std::vector<NodeId>{0, 1, 2, 3, 5});
    CHECK(topo.direct_to_sink.empty());
  }
  SUBCASE("equidistant member joins the lower head id") {
    std::vector<Node> nodes;
    for (NodeId i = 0; i < 8; ++i) nodes.push_back(make_node(i, 0, 0));
    nodes[0].position = {50, 50};
    nodes[3].position = {40, 50};
    nodes[7].position = {60, 50};
    for (NodeId i : {1u, 2u, 4u, 5u, 6u}) nodes[i].position = {50, 90};
    const std::vector<NodeId> heads{7, 3};
    const auto topo = assign_members(nodes, heads);
    CHECK(topo.membership[0] == 3u);
    CHECK(topo.heads() == std::vector<NodeId>{3, 7});
  }
  SUBCASE("no heads sends everyone direct") {
    std::vector<Node> nodes{make_node(0, 1, 1), make_node(1, 2, 2), make_node(2, 3, 3, NodeKind::Normal, 0.0),
                            make_node(3, 4, 4, NodeKind::Gateway)};
    const auto topo = assign_members(nodes, {});
    CHECK(topo.clusters.empty());
    CHECK(topo.direct_to_sink == std::vector<NodeId>{0, 1});
    CHECK(std::none_of(topo.membership.begin(), topo.membership.end(), [](auto m) { return m.has_value(); }));
  }
  SUBCASE("dead head is a contract violation") {
    std::vector<Node> nodes{make_node(0, 1, 1, NodeKind::Normal, 0.0), make_node(1, 2, 2)};
    const std::vector<NodeId> heads{0};
    CHECK_THROWS_AS(assign_members(nodes, heads), ContractViolation);
  }
}

TEST_CASE("gateway assignment") {
  std::vector<Node> nodes{make_node(0, 10, 50), make_node(1, 90, 50), make_node(2, 25, 50, NodeKind::Gateway, 1.0),
                          make_node(3, 75, 50, NodeKind::Gateway, 1.0)};
  const std::vector<NodeId> heads{0, 1};
  SUBCASE("nearest gateway") {
    const auto map = assign_gateways(nodes, heads);
    REQUIRE(map.size() == 2);
    CHECK(map[0] == std::pair<NodeId, NodeId>{0, 2});
    CHECK(map[1] == std::pair<NodeId, NodeId>{1, 3});
  }
  SUBCASE("one alive gateway serves every head") {
    nodes[3].alive = false;
    nodes[3].energy = 0;
    for (const auto& [h, g] : assign_gateways(nodes, heads)) CHECK(g == 2u);
  }
  SUBCASE("tie goes to the lower gateway id") {
    nodes[0].position = {50, 50};
    const std::vector<NodeId> one{0};
    CHECK(assign_gateways(nodes, one).at(0).second == 2u);
  }
  SUBCASE("no gateway alive") {
    for (NodeId g : {2u, 3u}) {
      nodes[g].alive = false;
      nodes[g].energy = 0;
    }
    CHECK(assign_gateways(nodes, heads).empty());
  }
}

TEST_CASE("roles are exclusive") {
  std::vector<Node> nodes{make_node(0, 0, 0), make_node(1, 1, 0), make_node(2, 2, 0, NodeKind::Gateway, 1.0)};
  const std::vector<NodeId> heads{0};
  auto topo = assign_members(nodes, heads);
  apply_roles(nodes, topo, ProtocolKind::Gateway);
  CHECK(nodes[0].role == Role::Head);
  CHECK(nodes[1].role == Role::Member);
  CHECK(nodes[2].role == Role::GatewayRelay);

  topo.direct_to_sink.push_back(1);
  CHECK_THROWS_AS(apply_roles(nodes, topo, ProtocolKind::Gateway), ContractViolation);
  CHECK_THROWS_AS(apply_roles(nodes, assign_members(nodes, heads), ProtocolKind::Leach), ContractViolation);
}

TEST_CASE("steady state: lone LEACH head") {
  const SimConfig cfg = bits_config(ProtocolKind::Leach, 2000);
  std::vector<Node> nodes{make_node(0, 50, 50)};
  const std::vector<NodeId> heads{0};
  const auto topo = assign_members(nodes, heads);
  apply_roles(nodes, topo, cfg.protocol);
  EnergyLedger ledger(nodes.size());
  CHECK(steady_state_frame(cfg.protocol, topo, nodes, cfg, ledger) == 1);
  CHECK_REL(ledger.spent(0), 1.0e-5 + 1.5e-4);
}

TEST_CASE("steady state: GATEWAY cluster, per event by hand") {
  const SimConfig cfg = bits_config(ProtocolKind::Gateway, 2000);
  // head (50,50); members 10 m away; gateway 20 m from the head, 30 m from the sink
  std::vector<Node> nodes{make_node(0, 50, 50), make_node(1, 40, 50), make_node(2, 60, 50),
                          make_node(3, 50, 70, NodeKind::Gateway, 1.0)};
  const std::vector<NodeId> heads{0};
  auto topo = assign_members(nodes, heads);
  topo.clusters[0].gateway = 3;
  apply_roles(nodes, topo, cfg.protocol);
  EnergyLedger ledger(nodes.size(), true);
  CHECK(steady_state_frame(cfg.protocol, topo, nodes, cfg, ledger) == 1);

  // rx(2000) = 1e-4; tx(2000,10) = 1.02e-4; tx(2000,20) = 1.08e-4; tx(2000,30) = 1.18e-4
  CHECK_REL(ledger.spent(1), 1.02e-4);
  CHECK_REL(ledger.spent(2), 1.02e-4);
  CHECK_REL(ledger.spent(0), 2 * 1e-4 + 3 * 1.08e-4);
  CHECK_REL(ledger.spent(3), 3 * 1e-4 + 3e-5 + 1.18e-4);
  for (const EnergyEvent& e : ledger.events())
    if (e.use == EnergyUse::Aggregation) CHECK(e.node == 3u);
}

TEST_CASE("steady state: dead network is silent") {
  const SimConfig cfg = bits_config(ProtocolKind::Leach, 2000);
  std::vector<Node> nodes{make_node(0, 1, 1, NodeKind::Normal, 0.0), make_node(1, 2, 2, NodeKind::Normal, 0.0)};
  const auto topo = assign_members(nodes, {});
  apply_roles(nodes, topo, cfg.protocol);
  EnergyLedger ledger(nodes.size());
  CHECK(steady_state_frame(cfg.protocol, topo, nodes, cfg, ledger) == 0);
  CHECK(ledger.total_spent() == 0.0);
}

TEST_CASE("steady state: head that dies mid-frame stops forwarding") {
  SimConfig cfg = bits_config(ProtocolKind::Leach, 2000);
  // head can afford exactly one reception
  std::vector<Node> nodes{make_node(0, 50, 50, NodeKind::Normal, 1e-4), make_node(1, 45, 50), make_node(2, 55, 50)};
  const std::vector<NodeId> heads{0};
  const auto topo = assign_members(nodes, heads);
  apply_roles(nodes, topo, cfg.protocol);
  EnergyLedger ledger(nodes.size());
  CHECK(steady_state_frame(cfg.protocol, topo, nodes, cfg, ledger) == 0);
  CHECK_FALSE(nodes[0].alive);
  CHECK_REL(ledger.spent(0), 1e-4);
  CHECK(ledger.spent(2) > 0.0);  // member 2 still transmits into the void
}

TEST_CASE("steady state rejects an inconsistent topology") {
  const SimConfig cfg = bits_config(ProtocolKind::Leach, 2000);
  std::vector<Node> nodes{make_node(0, 0, 0), make_node(1, 1, 1)};
  const std::vector<NodeId> heads{0};
  const auto topo = assign_members(nodes, heads);
  EnergyLedger ledger(nodes.size());
  CHECK_THROWS_AS(steady_state_frame(cfg.protocol, topo, nodes, cfg, ledger), ContractViolation);
}

namespace {

double recompute(const EnergyEvent& e, const RadioParams& radio, double setup_cost) {
  switch (e.use) {
    case EnergyUse::MemberTx:
    case EnergyUse::HeadTx:
    case EnergyUse::GatewayTx:
    case EnergyUse::DirectTx: {
      const double d0 = std::sqrt(radio.eps_fs / radio.eps_mp);
      const double amp = e.distance <= d0 ? radio.eps_fs * std::pow(e.distance, 2)
                                          : radio.eps_mp * std::pow(e.distance, 4);
      return e.bits * (radio.e_elec + amp);
    }
    case EnergyUse::HeadRx:
    case EnergyUse::GatewayRx: return e.bits * radio.e_elec;
    case EnergyUse::Aggregation: return e.bits * e.signals * radio.e_da;
    case EnergyUse::Setup: return setup_cost;
  }
  return -1;
}

}  // namespace

TEST_CASE("random frames: event audit and aggregation placement") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> pos(0, 100), energy(1e-4, 2e-3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto kind = static_cast<ProtocolKind>(trial % 3);
    SimConfig cfg = bits_config(kind, 4000);
    std::vector<Node> nodes;
    const NodeId n = 10 + gen() % 30;
    for (NodeId i = 0; i < n; ++i) {
      const bool gw = kind == ProtocolKind::Gateway && i >= n - 3;
      nodes.push_back(make_node(i, pos(gen), pos(gen), gw ? NodeKind::Gateway : NodeKind::Normal,
                                gen() % 2 ? energy(gen) : 0.5));
    }
    std::vector<NodeId> heads;
    for (const Node& nd : nodes)
      if (nd.kind != NodeKind::Gateway && gen() % 6 == 0) heads.push_back(nd.id);
    auto topo = assign_members(nodes, heads);
    if (kind == ProtocolKind::Gateway) {
      const auto pairs = assign_gateways(nodes, topo.heads());
      for (std::size_t i = 0; i < pairs.size(); ++i) topo.clusters[i].gateway = pairs[i].second;
    }
    apply_roles(nodes, topo, kind);
    std::vector<double> before;
    for (const Node& nd : nodes) before.push_back(nd.energy);

    EnergyLedger ledger(nodes.size(), true);
    const auto delivered = steady_state_frame(kind, topo, nodes, cfg, ledger);

    double event_sum = 0.0;
    std::uint32_t sink_tx = 0;
    std::vector<double> running = before;
    for (const EnergyEvent& e : ledger.events()) {
      CHECK_REL(e.requested, recompute(e, cfg.radio, 0.0));
      event_sum += e.removed;
      const bool is_tx = e.use == EnergyUse::GatewayTx || e.use == EnergyUse::DirectTx || e.use == EnergyUse::HeadTx;
      const bool to_sink = is_tx && e.distance == distance(nodes[e.node].position, cfg.sink);
      if (to_sink && e.removed == e.requested) ++sink_tx;
      if (e.use == EnergyUse::Aggregation && kind == ProtocolKind::Gateway && nodes[e.node].role == Role::Head) {
        // a head only fuses once its gateway is gone
        if (const auto gw = topo.gateway_of(e.node)) CHECK(running[*gw] == 0.0);
      }
      running[e.node] -= e.removed;
      if (running[e.node] <= 0.0) running[e.node] = 0.0;
    }
    CHECK(sink_tx == delivered);
    double diff = 0.0;
    for (const Node& nd : nodes) diff += before[nd.id] - nd.energy;
    CHECK(std::abs(diff - event_sum) < 1e-9);
    CHECK(std::abs(ledger.total_spent() - event_sum) < 1e-9);
  }
}

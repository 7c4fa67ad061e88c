#include "doctest.h"
#include "fixtures.h"

#include "dam/errors.h"
#include "dam/mechanism.h"

using namespace dam;
using dam::testing::id;

TEST_CASE("precondition") {
  const Mechanism m = dam::testing::one_seller();
  const auto& net = m.network;

  SUBCASE("affordable neighbour") {
    CHECK(action_precondition(m, parse_joint_action(net, "sigma:alpha")));
  }
  SUBCASE("budget spent after one round") {
    const Mechanism after = apply_joint_action(m, parse_joint_action(net, "sigma:alpha"));
    CHECK_FALSE(action_precondition(after, parse_joint_action(net, "sigma:gamma")));
  }
  SUBCASE("all skip") {
    CHECK(action_precondition(m, JointAction(net)));
  }
  SUBCASE("non-neighbour") {
    CHECK_FALSE(action_precondition(m, parse_joint_action(net, "sigma:delta")));
  }
  SUBCASE("incentive larger than budget") {
    Mechanism poor = m;
    poor.network.set_budget(id(m, "s"), Rational(4));
    CHECK_FALSE(action_precondition(poor, parse_joint_action(net, "sigma:alpha")));
    CHECK(action_precondition(poor, JointAction(net)));
  }
  SUBCASE("a seller as target is never enabled") {
    JointAction act(net);
    act.assign(net, id(m, "s"), id(m, "s"));
    CHECK_FALSE(action_precondition(m, act));
    CHECK_THROWS_AS(apply_joint_action(m, act), PreconditionViolated);
  }
}

TEST_CASE("update on the one-seller example") {
  const Mechanism m = dam::testing::one_seller();
  const Mechanism after = apply_joint_action(m, parse_joint_action(m.network, "sigma:alpha"));
  const auto& net = after.network;
  CHECK(net.budget(id(m, "s")) == 0);
  CHECK(net.budget(id(m, "a")) == 8);
  CHECK(net.friends(id(m, "s"), id(m, "c")));
  CHECK(net.friends(id(m, "c"), id(m, "s")));
  CHECK(net.edge_count() == m.network.edge_count() + 1);
  for (const char* x : {"b", "c", "d"}) {
    CHECK(net.budget(id(m, x)) == m.network.budget(id(m, x)));
  }
  // the input is untouched
  CHECK(m.network.budget(id(m, "s")) == 5);
  CHECK_FALSE(m.network.friends(id(m, "s"), id(m, "c")));
}

TEST_CASE("update on the two-seller example") {
  const Mechanism m = dam::testing::two_sellers();
  const Mechanism after =
      apply_joint_action(m, parse_joint_action(m.network, "sigma1:delta, sigma2:gamma"));
  const auto& net = after.network;
  CHECK(net.friends(id(m, "s1"), id(m, "e")));
  CHECK(net.friends(id(m, "s2"), id(m, "b")));
  CHECK(net.edge_count() == m.network.edge_count() + 2);
  CHECK(net.budget(id(m, "s1")) == 0);
  CHECK(net.budget(id(m, "s2")) == 0);
  CHECK(net.budget(id(m, "d")) == 6);
  CHECK(net.budget(id(m, "c")) == 6);
}

TEST_CASE("referrals bring only buyer friends") {
  // c already knows s2; s1 winning c must not connect s1 to s2
  const Mechanism m = dam::testing::two_sellers();
  MarketNetwork net = m.network;
  net.add_edge(id(m, "s1"), id(m, "c"));
  const MarketNetwork after = apply_joint_action(net, parse_joint_action(net, "s1:c"));
  CHECK(after.friends(id(m, "s1"), id(m, "b")));
  CHECK_FALSE(after.friends(id(m, "s1"), id(m, "s2")));
  CHECK(validate_network(after).empty());
}

TEST_CASE("all skip is the identity") {
  const Mechanism m = dam::testing::two_sellers();
  CHECK(apply_joint_action(m, JointAction(m.network)) == m);
}

TEST_CASE("ties on the incentive go to the smaller seller id") {
  MarketNetwork net;
  auto s1 = net.add_seller("s1", {"sigma1"}, Rational(2));
  auto s2 = net.add_seller("s2", {"sigma2"}, Rational(2));
  auto b = net.add_buyer("b", {"beta"}, Rational(0), Rational(0));
  auto c = net.add_buyer("c", {"gamma"}, Rational(0), Rational(0));
  net.set_incentive(b, s1, Rational(1));
  net.set_incentive(b, s2, Rational(1));
  net.add_edge(s1, b);
  net.add_edge(s2, b);
  net.add_edge(b, c);
  const MarketNetwork after = apply_joint_action(net, parse_joint_action(net, "s1:b, s2:b"));
  CHECK(after.budget(s1) == 1);
  CHECK(after.budget(s2) == 2);
  CHECK(after.friends(s1, c));
  CHECK_FALSE(after.friends(s2, c));
  CHECK(after.budget(b) == 1);
}

TEST_CASE("ties use the id order, not insertion order") {
  MarketNetwork net;
  auto late = net.add_seller("s2", {"sigma2"}, Rational(1));
  auto early = net.add_seller("s1", {"sigma1"}, Rational(1));
  auto b = net.add_buyer("b", {"beta"}, Rational(0), Rational(0));
  for (auto s : {late, early}) {
    net.set_incentive(b, s, Rational(1));
    net.add_edge(s, b);
  }
  const MarketNetwork after = apply_joint_action(net, parse_joint_action(net, "s1:b, s2:b"));
  CHECK(after.budget(early) == 0);
  CHECK(after.budget(late) == 1);
}

TEST_CASE("the larger incentive wins") {
  MarketNetwork net;
  auto s1 = net.add_seller("s1", {"sigma1"}, Rational(3));
  auto s2 = net.add_seller("s2", {"sigma2"}, Rational(3));
  auto b = net.add_buyer("b", {"beta"}, Rational(0), Rational(0));
  net.set_incentive(b, s1, Rational(1));
  net.set_incentive(b, s2, Rational(5, 2));
  net.add_edge(s1, b);
  net.add_edge(s2, b);
  const MarketNetwork after = apply_joint_action(net, parse_joint_action(net, "s1:b, s2:b"));
  CHECK(after.budget(s1) == 3);
  CHECK(after.budget(s2) == Rational(1, 2));
  CHECK(after.budget(b) == Rational(5, 2));
}

TEST_CASE("a losing seller still needs to afford her offer") {
  MarketNetwork net;
  auto s1 = net.add_seller("s1", {"sigma1"}, Rational(5));
  auto s2 = net.add_seller("s2", {"sigma2"}, Rational(0));
  auto b = net.add_buyer("b", {"beta"}, Rational(0), Rational(0));
  net.set_incentive(b, s1, Rational(2));
  net.set_incentive(b, s2, Rational(1));
  net.add_edge(s1, b);
  net.add_edge(s2, b);
  CHECK_FALSE(action_precondition(net, parse_joint_action(net, "s1:b, s2:b")));
  CHECK(action_precondition(net, parse_joint_action(net, "s1:b")));
}

TEST_CASE("joint action text") {
  const Mechanism m = dam::testing::two_sellers();
  const auto& net = m.network;
  const JointAction act = parse_joint_action(net, "sigma2:c, s1:skip");
  CHECK(act.target_of(net, id(m, "s2")) == id(m, "c"));
  CHECK(act.target_of(net, id(m, "s1")) == std::nullopt);
  CHECK(format_joint_action(net, act) == "s1:skip, s2:c");
  CHECK(parse_joint_action(net, "").all_skip());
  CHECK_THROWS_AS(parse_joint_action(net, "sigma1:omega"), UnknownNominal);
  CHECK_THROWS_AS(parse_joint_action(net, "sigma1:a, s1:b"), Error);
  CHECK_THROWS_AS(parse_joint_action(net, "sigma1:sigma2"), Error);
  CHECK_THROWS_AS(parse_joint_action(net, "alpha:b"), Error);
  CHECK_THROWS_AS(parse_joint_action(net, "sigma1"), Error);
}

#include "doctest.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "capax/model_io.hpp"
#include "generators.hpp"

using namespace capax;
using namespace capax::testing;

namespace {

std::string fixture(const std::string& name) {
  const std::string path = std::string(CAPAX_FIXTURE_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kMinimal = R"({
  "variables": [{"name": "x", "domain": ["0", "1"]}],
  "m_graph": [],
  "m_potentials": [
    {"clique": ["x"],
     "entries": [
       {"event": [{"x": "0"}], "value": 0.3},
       {"event": [{"x": "1"}], "value": 0.2},
       {"event": [{"x": "0"}, {"x": "1"}], "value": 0.5}
     ]}
  ]
})";

ConfigSet cs(std::uint64_t n, std::initializer_list<std::uint64_t> idx) {
  ConfigSet s = ConfigSet::none(n);
  for (const std::uint64_t i : idx) s.insert(i);
  return s;
}

}  // namespace

TEST_CASE("parsing the minimal single-variable document") {
  const Model m = parse_model(kMinimal);
  CHECK(m.space().size() == 1);
  CHECK(m.space().var(0).name == "x");
  CHECK(m.m_tree().node_count() == 1);

  const SetFunction& pot = m.m_tree().potentials[0];
  CHECK(pot.value_at(cs(2, {0})) == doctest::Approx(0.3));
  CHECK(pot.value_at(cs(2, {1})) == doctest::Approx(0.2));
  CHECK(pot.value_at(ConfigSet::all(2)) == doctest::Approx(0.5));

  // The derived commonality side: Q({0})=0.8, Q({1})=0.7, Q(Ω)=0.5.
  const SetFunction& q = m.q_tree().potentials[0];
  CHECK(q.value_at(cs(2, {0})) == doctest::Approx(0.8));
  CHECK(q.value_at(cs(2, {1})) == doctest::Approx(0.7));
  CHECK(q.value_at(ConfigSet::all(2)) == doctest::Approx(0.5));
  CHECK(q.value_at(ConfigSet::none(2)) == doctest::Approx(1.0));
}

TEST_CASE("all fixtures parse and their derived pairs are dual-consistent") {
  const std::vector<std::string> names{"minimal.json", "x_copy.json",
                                       "coin_vacuous_y.json", "y_never_one.json",
                                       "figure1_sensors.json"};
  for (const std::string& name : names) {
    CAPTURE(name);
    const Model m = parse_model(fixture(name));
    const FlatJoint f = assemble_joint(m);  // verify=true throws on bad pairs
    CHECK(f.m_joint.total() == doctest::Approx(1.0));
    CHECK(f.max_dual_gap <= kCompareTol);
  }
}

TEST_CASE("serialization round-trips models exactly") {
  const std::vector<std::string> names{"minimal.json", "x_copy.json",
                                       "coin_vacuous_y.json", "y_never_one.json",
                                       "figure1_sensors.json", "mismatched_pair.json"};
  for (const std::string& name : names) {
    CAPTURE(name);
    const Model m = parse_model(fixture(name));
    const std::string text = serialize_model(m);
    const Model back = parse_model(text);
    CHECK(back == m);
    CHECK(serialize_model(back) == text);
  }
}

TEST_CASE("serialization round-trips generated models exactly") {
  Rng rng(70123);
  for (int it = 0; it < 10; ++it) {
    const GeneratedModel gen = random_markov_model(rng);
    const std::string text = serialize_model(gen.model);
    const Model back = parse_model(text);
    CHECK(serialize_model(back) == text);
  }
}

TEST_CASE("schema errors carry a document path") {
  auto message_of = [](const std::string& doc) {
    try {
      parse_model(doc);
      return std::string("(no error)");
    } catch (const SchemaError& e) {
      return std::string(e.what());
    }
  };

  CHECK(message_of("not json at all").find("not valid JSON") != std::string::npos);
  CHECK(message_of("[]").find("$") != std::string::npos);

  const std::string no_potentials =
      R"({"variables": [{"name": "x", "domain": ["0"]}], "m_graph": []})";
  CHECK(message_of(no_potentials).find("missing key 'm_potentials'") != std::string::npos);

  const std::string empty_domain =
      R"({"variables": [{"name": "x", "domain": []}], "m_graph": [], "m_potentials": []})";
  CHECK(message_of(empty_domain).find("$.variables[0].domain") != std::string::npos);

  const std::string bad_edge = R"({
    "variables": [{"name": "x", "domain": ["0", "1"]}],
    "m_graph": [["x", "zz"]],
    "m_potentials": []
  })";
  const std::string bad_edge_msg = message_of(bad_edge);
  CHECK(bad_edge_msg.find("$.m_graph[0][1]") != std::string::npos);
  CHECK(bad_edge_msg.find("unknown variable 'zz'") != std::string::npos);

  const std::string dup_event = R"({
    "variables": [{"name": "x", "domain": ["0", "1"]}],
    "m_graph": [],
    "m_potentials": [
      {"clique": ["x"],
       "entries": [
         {"event": [{"x": "0"}], "value": 0.5},
         {"event": [{"x": "0"}], "value": 0.5}
       ]}
    ]
  })";
  const std::string dup_msg = message_of(dup_event);
  CHECK(dup_msg.find("duplicate event") != std::string::npos);
  CHECK(dup_msg.find("$.m_potentials[0].entries[1].event") != std::string::npos);

  const std::string negative = R"({
    "variables": [{"name": "x", "domain": ["0", "1"]}],
    "m_graph": [],
    "m_potentials": [
      {"clique": ["x"],
       "entries": [{"event": [{"x": "0"}], "value": -0.25}]}
    ]
  })";
  CHECK(message_of(negative).find("mass entries must be nonnegative") != std::string::npos);

  const std::string mass_on_empty = R"({
    "variables": [{"name": "x", "domain": ["0", "1"]}],
    "m_graph": [],
    "m_potentials": [
      {"clique": ["x"],
       "entries": [{"event": [], "value": 0.5}]}
    ]
  })";
  CHECK(message_of(mass_on_empty).find("empty event carries no mass") != std::string::npos);

  const std::string seps_only = R"({
    "variables": [{"name": "x", "domain": ["0", "1"]}],
    "m_graph": [],
    "m_potentials": [
      {"clique": ["x"],
       "entries": [{"event": [{"x": "0"}, {"x": "1"}], "value": 1.0}]}
    ],
    "q_separators": []
  })";
  CHECK(message_of(seps_only).find("q_separators without q_potentials") !=
        std::string::npos);
}

TEST_CASE("semantic model errors") {
  const std::string unnormalized = R"({
    "variables": [{"name": "x", "domain": ["0", "1"]}],
    "m_graph": [],
    "m_potentials": [
      {"clique": ["x"],
       "entries": [{"event": [{"x": "0"}], "value": 0.25}]}
    ]
  })";
  CHECK_THROWS_AS(parse_model(unnormalized), ModelError);

  // {x,z} is not a clique of the triangulated chain x-y-z.
  const std::string off_tree = R"({
    "variables": [
      {"name": "x", "domain": ["0", "1"]},
      {"name": "y", "domain": ["0", "1"]},
      {"name": "z", "domain": ["0", "1"]}
    ],
    "m_graph": [["x", "y"], ["y", "z"]],
    "m_potentials": [
      {"clique": ["x", "z"],
       "entries": [{"event": [{"x": "0", "z": "0"}], "value": 1.0}]}
    ]
  })";
  CHECK_THROWS_AS(parse_model(off_tree), ModelError);
}

TEST_CASE("an explicitly inconsistent mass/commonality pair parses but fails assembly") {
  const Model m = parse_model(fixture("mismatched_pair.json"));
  CHECK_THROWS_AS(assemble_joint(m), ModelError);
  // Unverified flattening still exposes the two disagreeing descriptions.
  const FlatJoint f = assemble_joint(m, kDefaultJointGuard, false);
  const SetFunction derived =
      commonality_transform(dual_function(inverse_mobius(f.m_joint)));
  CHECK(!tables_close(naive_table(f.q_joint), naive_table(derived)));
}

TEST_CASE("event expressions") {
  const Space s({{"x", {"0", "1"}}, {"y", {"0", "1"}}, {"zloc", {"a", "b", "c"}}});

  const Event single = parse_event(s, "x=0");
  CHECK(single.scope == Scope{{0}});
  CHECK(single.configs == cs(2, {0}));

  const Event padded = parse_event(s, "  zloc = b  ");
  CHECK(padded.scope == Scope{{2}});
  CHECK(padded.configs == cs(3, {1}));

  // Exclusive-or of two binary variables; y is the fast axis.
  const Event xorev = parse_event(s, "x=0&y=1|x=1&y=0");
  CHECK(xorev.scope == Scope{{0, 1}});
  CHECK(xorev.configs == cs(4, {1, 2}));

  // A contradictory conjunction denotes the empty event.
  const Event never = parse_event(s, "x=0&x=1");
  CHECK(never.scope == Scope{{0}});
  CHECK(never.configs.empty());

  // Disjunction covering everything mentioned.
  const Event full = parse_event(s, "x=0|x=1");
  CHECK(full.configs.full());
}

TEST_CASE("event expression errors carry byte positions") {
  const Space s({{"x", {"0", "1"}}, {"y", {"0", "1"}}});
  auto pos_of = [&](std::string_view text) {
    try {
      parse_event(s, text);
      return static_cast<std::size_t>(-1);
    } catch (const ExpressionError& e) {
      return e.position();
    }
  };

  CHECK(pos_of("") == 0);
  CHECK(pos_of("x") == 1);          // expected '=' after 'x'
  CHECK(pos_of("x=") == 2);         // expected a value
  CHECK(pos_of("x=0&") == 4);       // expected a variable name
  CHECK(pos_of("w=0") == 0);        // unknown variable at its own start
  CHECK(pos_of("x=9") == 2);        // unknown value at the value start
  CHECK(pos_of("x=0 ? y=1") == 4);  // unexpected character

  CHECK_THROWS_AS(parse_event(s, "x=0|"), ExpressionError);
  CHECK_THROWS_AS(parse_event(s, "=0"), ExpressionError);
}

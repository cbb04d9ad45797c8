#include "doctest.h"

#include <vector>

#include "capax/event.hpp"
#include "generators.hpp"

using namespace capax;
using capax::testing::Rng;

namespace {

Space binary_xy() {
  return Space({{"x", {"0", "1"}}, {"y", {"0", "1"}}});
}

Event ev(const Space& s, const Scope& scope,
         const std::vector<std::vector<std::uint32_t>>& rows) {
  return event_of(s, scope, rows);
}

}  // namespace

TEST_CASE("space validates variable declarations") {
  CHECK_THROWS_AS(Space(std::vector<Variable>{{"x", {}}}), SchemaError);
  CHECK_THROWS_AS(Space({{"x", {"0"}}, {"x", {"0"}}}), SchemaError);
  CHECK_THROWS_AS(Space({{"x", {"0", "0"}}}), SchemaError);
  CHECK_THROWS_AS(Space(std::vector<Variable>{{"", {"0"}}}), SchemaError);

  const Space s = binary_xy();
  CHECK(s.size() == 2);
  CHECK(s.card(0) == 2);
  CHECK(s.id_of("y") == 1);
  CHECK(!s.find("z").has_value());
  CHECK_THROWS_AS(s.id_of("z"), SchemaError);
  CHECK(s.value_index(0, "1") == 1);
  CHECK(!s.value_index(0, "2").has_value());
}

TEST_CASE("scope algebra") {
  const Scope xy{{0, 1}};
  const Scope yx{{1, 0}};  // sorts to the same thing
  CHECK(xy == yx);
  CHECK_THROWS_AS(Scope({0, 0}), ScopeError);

  const Scope x{{0}};
  const Scope z{{2}};
  CHECK(x.subset_of(xy));
  CHECK(!xy.subset_of(x));
  CHECK(Scope().subset_of(x));
  CHECK(x.unite(z) == Scope{{0, 2}});
  CHECK(xy.intersect(z).empty());
  CHECK(xy.minus(x) == Scope{{1}});
}

TEST_CASE("configuration encoding is mixed-radix, last variable fastest") {
  const Space s({{"x", {"0", "1"}}, {"y", {"a", "b", "c"}}});
  const Scope xy{{0, 1}};
  CHECK(config_count(s, xy) == 6);
  CHECK(config_count(s, Scope()) == 1);
  CHECK(encode_config(s, xy, std::vector<std::uint32_t>{0, 0}) == 0);
  CHECK(encode_config(s, xy, std::vector<std::uint32_t>{0, 2}) == 2);
  CHECK(encode_config(s, xy, std::vector<std::uint32_t>{1, 0}) == 3);
  for (std::uint64_t i = 0; i < 6; ++i) {
    const auto digits = decode_config(s, xy, i);
    CHECK(encode_config(s, xy, digits) == i);
  }
  CHECK_THROWS_AS(encode_config(s, xy, std::vector<std::uint32_t>{0, 3}), ScopeError);
  CHECK_THROWS_AS(encode_config(s, xy, std::vector<std::uint32_t>{0}), ScopeError);
}

TEST_CASE("config sets behave as sets") {
  ConfigSet a = ConfigSet::none(4);
  CHECK(a.empty());
  a.insert(1);
  a.insert(3);
  CHECK(a.count() == 2);
  CHECK(a.contains(3));
  CHECK(!a.contains(0));

  const ConfigSet b = ConfigSet::of(4, std::vector<std::uint64_t>{0, 1});
  CHECK(a.intersect(b) == ConfigSet::single(4, 1));
  CHECK(a.unite(b).count() == 3);
  CHECK(a.complement() == ConfigSet::of(4, std::vector<std::uint64_t>{0, 2}));
  CHECK(b.subset_of(a.unite(b)));
  CHECK(ConfigSet::all(4).full());
  CHECK_THROWS_AS(a.intersect(ConfigSet::none(5)), ScopeError);
  CHECK_THROWS_AS(ConfigSet::single(4, 4), ScopeError);
}

TEST_CASE("projection of events") {
  const Space s = binary_xy();
  const Scope xy{{0, 1}};
  const Scope x{{0}};

  const Event diagonal = ev(s, xy, {{0, 0}, {1, 1}});
  CHECK(project(s, diagonal, x) == full_event(s, x));

  CHECK(project(s, empty_event(s, xy), x) == empty_event(s, x));

  const Event left = ev(s, xy, {{0, 0}, {0, 1}});
  CHECK(project(s, left, x) == ev(s, x, {{0}}));

  CHECK_THROWS_AS(project(s, ev(s, x, {{0}}), xy), ScopeError);
}

TEST_CASE("extension of events") {
  const Space s = binary_xy();
  const Scope xy{{0, 1}};
  const Scope x{{0}};

  CHECK(extend(s, ev(s, x, {{0}}), xy) == ev(s, xy, {{0, 0}, {0, 1}}));
  CHECK(extend(s, full_event(s, x), xy) == full_event(s, xy));
  CHECK_THROWS_AS(extend(s, ev(s, xy, {{0, 0}}), x), ScopeError);
}

TEST_CASE("rectangularization") {
  const Space s = binary_xy();
  const Scope xy{{0, 1}};
  const std::vector<Scope> single_cliques{Scope{{0}}, Scope{{1}}};

  const Event diagonal = ev(s, xy, {{0, 0}, {1, 1}});
  CHECK(rectangularize(s, diagonal, single_cliques) == full_event(s, xy));

  const Event left = ev(s, xy, {{0, 0}, {0, 1}});
  CHECK(rectangularize(s, left, single_cliques) == left);

  CHECK(rectangularize(s, diagonal, {xy}) == diagonal);

  CHECK(rectangularize(s, full_event(s, xy), {}) == full_event(s, xy));
  CHECK_THROWS_AS(rectangularize(s, diagonal, {}), ConfigError);
}

TEST_CASE("empty scope has one configuration and two events") {
  const Space s = binary_xy();
  CHECK(config_count(s, Scope()) == 1);
  CHECK(full_event(s, Scope()).configs == ConfigSet::all(1));
  CHECK(empty_event(s, Scope()).configs == ConfigSet::none(1));
  // Projection of any nonempty event hits the single () configuration.
  CHECK(project(s, ev(s, Scope{{0}}, {{1}}), Scope()) == full_event(s, Scope()));
  CHECK(project(s, empty_event(s, Scope{{0}}), Scope()) == empty_event(s, Scope()));
}

TEST_CASE("projection and extension properties on random events") {
  Rng rng(20240811);
  for (int it = 0; it < 200; ++it) {
    const Space s = capax::testing::random_space(rng, 2, 4, 3, 16);
    std::vector<VarId> all(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) all[i] = static_cast<VarId>(i);
    const Scope full{std::move(all)};

    // Random sub- and mid-scopes a ⊆ b ⊆ full.
    std::vector<VarId> bids, aids;
    for (const VarId v : full.ids())
      if (capax::testing::uniform_int(rng, 0, 1)) bids.push_back(v);
    const Scope b{std::move(bids)};
    for (const VarId v : b.ids())
      if (capax::testing::uniform_int(rng, 0, 1)) aids.push_back(v);
    const Scope a{std::move(aids)};

    const Event e{full, capax::testing::random_configs(rng, config_count(s, full))};
    const Event eb{b, capax::testing::random_configs(rng, config_count(s, b))};

    // extend then project is the identity.
    CHECK(project(s, extend(s, eb, full), b) == eb);
    // project then extend only grows the event.
    const Event grown = extend(s, project(s, e, b), full);
    CHECK(e.configs.subset_of(grown.configs));
    // nested projections compose.
    CHECK(project(s, project(s, e, b), a) == project(s, e, a));
    // complement of a cylinder is the cylinder of the complement.
    CHECK(extend(s, complement(eb), full) == complement(extend(s, eb, full)));

    // projection distributes over union.
    const Event e2{full, capax::testing::random_configs(rng, config_count(s, full))};
    const Event u{full, e.configs.unite(e2.configs)};
    CHECK(project(s, u, b).configs ==
          project(s, e, b).configs.unite(project(s, e2, b).configs));

    // extension distributes over intersection.
    const Event eb2{b, capax::testing::random_configs(rng, config_count(s, b))};
    CHECK(extend(s, Event{b, eb.configs.intersect(eb2.configs)}, full).configs ==
          extend(s, eb, full).configs.intersect(extend(s, eb2, full).configs));
  }
}

TEST_CASE("rectangularization properties on random events") {
  Rng rng(99021);
  for (int it = 0; it < 200; ++it) {
    const Space s = capax::testing::random_space(rng, 2, 4, 3, 16);
    std::vector<VarId> all(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) all[i] = static_cast<VarId>(i);
    const Scope full{std::move(all)};

    // Random clique cover of the scope.
    std::vector<Scope> cliques;
    for (const VarId v : full.ids()) {
      std::vector<VarId> ids{v};
      for (const VarId w : full.ids())
        if (w != v && capax::testing::uniform_int(rng, 0, 2) == 0) ids.push_back(w);
      cliques.push_back(Scope{std::move(ids)});
    }

    const Event e{full, capax::testing::random_configs(rng, config_count(s, full))};
    const Event r = rectangularize(s, e, cliques);
    CHECK(e.configs.subset_of(r.configs));
    CHECK(rectangularize(s, r, cliques) == r);

    // Explicit definition: intersection of the clique cylinders.
    ConfigSet expect = ConfigSet::all(config_count(s, full));
    for (const Scope& c : cliques) {
      const Scope cs = c.intersect(full);
      expect = expect.intersect(extend(s, project(s, e, cs), full).configs);
    }
    CHECK(r.configs == expect);
  }
}

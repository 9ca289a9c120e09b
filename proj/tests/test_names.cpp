#include "pecsim/name.hpp"
#include "pecsim/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace pecsim;

TEST_CASE("parse splits on slashes")
{
  Name n = Name::parse("/pec/svc/annotate");
  REQUIRE(n.components() == std::vector<std::string>{"pec", "svc", "annotate"});
  CHECK(Name::parse("/a").components() == std::vector<std::string>{"a"});
}

TEST_CASE("parse rejects malformed text")
{
  CHECK_THROWS_AS(Name::parse("/a//b"), ParseError);
  CHECK_THROWS_AS(Name::parse(""), ParseError);
  CHECK_THROWS_AS(Name::parse("a/b"), ParseError);
}

TEST_CASE("root name exists only as a routing prefix")
{
  Name root = Name::parse("/");
  CHECK(root.empty());
  CHECK(root.str() == "/");
  CHECK(root.is_prefix_of(Name::parse("/anything/at/all")));
}

TEST_CASE("render is the exact inverse of parse")
{
  // Property: random names survive a render/parse round trip.
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> comps;
    std::size_t len = 1 + rng.next_below(6);
    for (std::size_t i = 0; i < len; ++i) {
      std::string c;
      std::size_t clen = 1 + rng.next_below(8);
      for (std::size_t j = 0; j < clen; ++j)
        c += static_cast<char>('a' + rng.next_below(26));
      comps.push_back(c);
    }
    Name n{comps};
    CHECK(Name::parse(n.str()) == n);
  }
}

TEST_CASE("prefix relation is component-wise")
{
  CHECK(is_prefix_of(Name::parse("/a/b"), Name::parse("/a/b/c")));
  CHECK_FALSE(is_prefix_of(Name::parse("/a/b"), Name::parse("/a/bc")));
  CHECK(is_prefix_of(Name::parse("/a"), Name::parse("/a")));
}

TEST_CASE("prefix relation is reflexive and transitive")
{
  SplitMix64 rng(11);
  auto random_name = [&](std::size_t max_len) {
    std::vector<std::string> comps;
    std::size_t len = 1 + rng.next_below(max_len);
    for (std::size_t i = 0; i < len; ++i)
      comps.push_back(std::string(1, static_cast<char>('a' + rng.next_below(3))));
    return Name{comps};
  };
  for (int trial = 0; trial < 300; ++trial) {
    Name a = random_name(4), b = random_name(4), c = random_name(4);
    CHECK(a.is_prefix_of(a));
    if (a.is_prefix_of(b) && b.is_prefix_of(c))
      CHECK(a.is_prefix_of(c));
    // /x is a prefix of exactly the names starting with component x.
    if (a.size() == 1)
      CHECK(a.is_prefix_of(b) == (b.at(0) == a.at(0)));
  }
}

TEST_CASE("invocation name round trip")
{
  auto inv = make_invocation_name(Name::parse("/pec/svc/annotate"),
                                  Name::parse("/cam/u1/frame9"), 7);
  Name rendered = inv.render();
  auto back = InvocationName::parse(rendered);
  REQUIRE(back.has_value());
  CHECK(back->service == inv.service);
  CHECK(back->data == inv.data);
  CHECK(back->nonce == 7);
}

TEST_CASE("reuse key ignores the nonce")
{
  Name svc = Name::parse("/pec/svc/annotate");
  Name data = Name::parse("/cam/u1/frame9");
  auto a = make_invocation_name(svc, data, 7);
  auto b = make_invocation_name(svc, data, 12345);
  CHECK(reuse_key(a) == reuse_key(b));

  auto other = make_invocation_name(svc, Name::parse("/cam/u2/frame9"), 7);
  CHECK(reuse_key(a) != reuse_key(other));
}

TEST_CASE("thunk names are unique per server counter")
{
  Name svc = Name::parse("/pec/svc/annotate");
  auto t0 = make_thunk_name("es1", svc, 0);
  auto t1 = make_thunk_name("es1", svc, 1);
  auto t0b = make_thunk_name("es2", svc, 0);
  CHECK(t0.render() != t1.render());
  CHECK(t0.render() != t0b.render());

  auto back = ThunkName::parse(t0.render());
  REQUIRE(back.has_value());
  CHECK(*back == t0);
}

TEST_CASE("migration name round trip")
{
  auto imn = make_migration_name("es3", 42);
  auto back = MigrationName::parse(imn.render());
  REQUIRE(back.has_value());
  CHECK(*back == imn);
}

TEST_CASE("thunk and migration namespaces are disjoint")
{
  SplitMix64 rng(23);
  Name svc = Name::parse("/pec/svc/annotate");
  for (int trial = 0; trial < 100; ++trial) {
    auto thunk = make_thunk_name("es" + std::to_string(rng.next_below(9)), svc,
                                 rng.next_below(1000));
    auto imn = make_migration_name("es" + std::to_string(rng.next_below(9)),
                                   rng.next_below(1000));
    CHECK_FALSE(MigrationName::parse(thunk.render()).has_value());
    CHECK_FALSE(ThunkName::parse(imn.render()).has_value());
  }
}

TEST_CASE("generated protocol names all round trip through text")
{
  SplitMix64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto inv = make_invocation_name(Name::parse("/pec/svc/s" + std::to_string(rng.next_below(5))),
                                    Name::parse("/d/u" + std::to_string(rng.next_below(5))),
                                    rng.next());
    Name n = inv.render();
    CHECK(Name::parse(n.str()) == n);
    auto t = make_thunk_name("n" + std::to_string(rng.next_below(5)),
                             inv.service, rng.next_below(100));
    CHECK(Name::parse(t.render().str()) == t.render());
    CHECK(ThunkName::parse(Name::parse(t.render().str())) == t);
  }
}

TEST_CASE("invocation data name may itself contain the marker")
{
  Name svc = Name::parse("/pec/svc/annotate");
  Name data = Name::parse("/weird").appended(names::kDataMarker).appended("x");
  auto inv = make_invocation_name(svc, data, 3);
  auto back = InvocationName::parse(inv.render());
  REQUIRE(back.has_value());
  CHECK(back->service == svc);
  CHECK(back->data == data);
}

TEST_CASE("service names containing the marker are rejected")
{
  Name bad = Name::parse("/pec/svc").appended(names::kDataMarker);
  CHECK_THROWS_AS(make_invocation_name(bad, Name::parse("/d"), 1), ParseError);
}

#include "pecsim/forwarding.hpp"
#include "pecsim/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <deque>
#include <map>

using namespace pecsim;

namespace {

Data make_data(const std::string& name, std::int64_t bytes = 100,
               SimTime freshness = kForever)
{
  return Data{Name::parse(name), bytes, freshness, "p", ""};
}

Interest make_interest(const std::string& name, std::uint64_t nonce = 1)
{
  return Interest{Name::parse(name), nonce, 32, 100};
}

// Brute-force LPM: scan every entry, keep matches, take the longest.
const FibEntry* lpm_oracle(const Fib& fib, const Name& name)
{
  const FibEntry* best = nullptr;
  for (const auto& [prefix, entry] : fib.entries()) {
    if (prefix.is_prefix_of(name) && (!best || prefix.size() > best->prefix.size()))
      best = &entry;
  }
  return best;
}

// Reference LRU with the same freshness and touch rules, replayed op by op.
struct LruOracle {
  std::size_t capacity;
  std::deque<Name> recency; // front = least recent
  std::map<Name, Data> store;
  std::map<Name, SimTime> inserted_at;

  void touch(const Name& n)
  {
    auto it = std::find(recency.begin(), recency.end(), n);
    if (it != recency.end())
      recency.erase(it);
    recency.push_back(n);
  }

  const Data* lookup(const Name& n, SimTime now)
  {
    auto it = store.find(n);
    if (it == store.end())
      return nullptr;
    if (now >= inserted_at[n] + it->second.freshness_us)
      return nullptr;
    touch(n);
    return &it->second;
  }

  void insert(const Data& d, SimTime now)
  {
    if (capacity == 0 || d.freshness_us <= 0)
      return;
    if (!store.count(d.name) && store.size() >= capacity) {
      Name victim = recency.front();
      recency.pop_front();
      store.erase(victim);
      inserted_at.erase(victim);
    }
    store[d.name] = d;
    inserted_at[d.name] = now;
    touch(d.name);
  }
};

} // namespace

TEST_CASE("interest with CS hit answers on the incoming face")
{
  ForwarderState fw;
  Tracer tracer;
  fw.cs.insert(make_data("/a/b"), 0);

  auto actions = on_interest(fw, "n", 3, make_interest("/a/b"), 10, tracer);
  REQUIRE(actions.size() == 1);
  CHECK(actions[0].face == 3);
  CHECK(std::holds_alternative<Data>(actions[0].packet));
  CHECK(fw.pit.size() == 0);
}

TEST_CASE("two interests aggregate into one upstream forward")
{
  ForwarderState fw;
  Tracer tracer;
  fw.fib.add_route(Name::parse("/a"), 9, 1);
  fw.link_faces = {1, 2, 9};

  auto first = on_interest(fw, "n", 1, make_interest("/a/b", 111), 0, tracer);
  REQUIRE(first.size() == 1);
  CHECK(first[0].face == 9);

  auto second = on_interest(fw, "n", 2, make_interest("/a/b", 222), 1, tracer);
  CHECK(second.empty());

  PitEntry* entry = fw.pit.find(Name::parse("/a/b"));
  REQUIRE(entry != nullptr);
  CHECK(entry->in_faces == std::set<FaceId>{1, 2});
}

TEST_CASE("duplicate nonce in the PIT entry is dropped as a loop")
{
  ForwarderState fw;
  Tracer tracer;
  fw.fib.add_route(Name::parse("/a"), 9, 1);
  fw.link_faces = {1, 9};

  on_interest(fw, "n", 1, make_interest("/a/b", 111), 0, tracer);
  auto looped = on_interest(fw, "n", 9, make_interest("/a/b", 111), 1, tracer);
  CHECK(looped.empty());
  PitEntry* entry = fw.pit.find(Name::parse("/a/b"));
  REQUIRE(entry != nullptr);
  CHECK(entry->in_faces == std::set<FaceId>{1});
  CHECK(tracer.records().back().ev == "pit_loop_drop");
}

TEST_CASE("FIB miss nacks back on the incoming face")
{
  ForwarderState fw;
  Tracer tracer;
  auto actions = on_interest(fw, "n", 4, make_interest("/nowhere"), 0, tracer);
  REQUIRE(actions.size() == 1);
  CHECK(actions[0].face == 4);
  REQUIRE(std::holds_alternative<Nack>(actions[0].packet));
  CHECK(std::get<Nack>(actions[0].packet).reason == NackReason::NoRoute);
  CHECK(fw.pit.size() == 0);
}

TEST_CASE("data fans out to every pending face and erases the entry")
{
  ForwarderState fw;
  Tracer tracer;
  fw.fib.add_route(Name::parse("/a"), 9, 1);
  fw.link_faces = {1, 2, 9};
  on_interest(fw, "n", 1, make_interest("/a/b", 111), 0, tracer);
  on_interest(fw, "n", 2, make_interest("/a/b", 222), 0, tracer);

  auto actions = on_data(fw, "n", 9, make_data("/a/b"), 5, tracer);
  REQUIRE(actions.size() == 2);
  std::set<FaceId> out{actions[0].face, actions[1].face};
  CHECK(out == std::set<FaceId>{1, 2});
  CHECK(fw.pit.size() == 0);
  CHECK(fw.cs.contains(Name::parse("/a/b")));
}

TEST_CASE("unsolicited data is dropped without touching the CS")
{
  ForwarderState fw;
  Tracer tracer;
  auto actions = on_data(fw, "n", 9, make_data("/a/b"), 5, tracer);
  CHECK(actions.empty());
  CHECK_FALSE(fw.cs.contains(Name::parse("/a/b")));
}

TEST_CASE("insert at capacity evicts the least recently used entry")
{
  ContentStore cs(2);
  cs.insert(make_data("/x/1"), 0);
  cs.insert(make_data("/x/2"), 1);
  cs.lookup(Name::parse("/x/1"), 2); // /x/2 is now LRU
  cs.insert(make_data("/x/3"), 3);
  CHECK(cs.contains(Name::parse("/x/1")));
  CHECK_FALSE(cs.contains(Name::parse("/x/2")));
  CHECK(cs.contains(Name::parse("/x/3")));
}

TEST_CASE("stale entries never serve hits")
{
  ContentStore cs(4);
  cs.insert(make_data("/x/1", 100, 1000), 0);
  CHECK(cs.lookup(Name::parse("/x/1"), 999) != nullptr);
  CHECK(cs.lookup(Name::parse("/x/1"), 1000) == nullptr);
  // freshness 0 means uncacheable
  cs.insert(make_data("/x/2", 100, 0), 0);
  CHECK_FALSE(cs.contains(Name::parse("/x/2")));
}

TEST_CASE("CS equals a brute-force LRU oracle over random operations")
{
  const std::size_t capacity = 8;
  ContentStore cs(capacity);
  LruOracle oracle{capacity, {}, {}, {}};
  SplitMix64 rng(99);

  for (int op = 0; op < 10'000; ++op) {
    SimTime now = op;
    Name name = Name::parse("/o/" + std::to_string(rng.next_below(24)));
    if (rng.next_below(2) == 0) {
      Data d{name, static_cast<std::int64_t>(rng.next_below(500)), kForever, "p", ""};
      cs.insert(d, now);
      oracle.insert(d, now);
    } else {
      const Data* got = cs.lookup(name, now);
      const Data* expect = oracle.lookup(name, now);
      REQUIRE((got != nullptr) == (expect != nullptr));
      if (got)
        CHECK(got->payload_bytes == expect->payload_bytes);
    }
    REQUIRE(cs.size() == oracle.store.size());
  }

  // Final contents and recency order match exactly.
  auto order = cs.names_by_recency();
  std::vector<Name> expect(oracle.recency.begin(), oracle.recency.end());
  CHECK(order == expect);
}

TEST_CASE("fib lpm picks the longest matching prefix")
{
  Fib fib;
  fib.add_route(Name::parse("/a"), 1, 1);
  fib.add_route(Name::parse("/a/b"), 2, 1);

  Name target = Name::parse("/a/b/c");
  const FibEntry* got = fib.lpm(target);
  const FibEntry* expect = lpm_oracle(fib, target);
  REQUIRE(got != nullptr);
  CHECK(got == expect);
  CHECK(got->prefix == Name::parse("/a/b"));

  CHECK(fib.lpm(Name::parse("/b")) == nullptr);

  Fib with_root;
  with_root.add_route(Name::parse("/"), 0, 1);
  with_root.add_route(Name::parse("/a"), 1, 1);
  const FibEntry* r = with_root.lpm(Name::parse("/a"));
  REQUIRE(r != nullptr);
  CHECK(r->prefix == Name::parse("/a"));
  CHECK(with_root.lpm(Name::parse("/z"))->prefix == Name::parse("/"));
}

TEST_CASE("fib lpm equals the brute-force oracle on random tables")
{
  SplitMix64 rng(12345);
  auto random_name = [&](std::size_t max_len) {
    std::vector<std::string> comps;
    std::size_t len = 1 + rng.next_below(max_len);
    for (std::size_t i = 0; i < len; ++i)
      comps.push_back(std::string(1, static_cast<char>('a' + rng.next_below(4))));
    return Name{comps};
  };

  for (int table = 0; table < 1000; ++table) {
    Fib fib;
    std::size_t entries = 1 + rng.next_below(12);
    for (std::size_t i = 0; i < entries; ++i)
      fib.add_route(random_name(4), static_cast<FaceId>(1 + rng.next_below(6)), 1);
    for (int q = 0; q < 8; ++q) {
      Name target = random_name(5);
      const FibEntry* got = fib.lpm(target);
      const FibEntry* expect = lpm_oracle(fib, target);
      REQUIRE(got == expect);
    }
  }
}

TEST_CASE("strategy forwarding")
{
  FibEntry entry{Name::parse("/a"), {{2, 5}, {3, 5}}};
  CHECK(strategy_forward(entry, Strategy::BestRoute, -1) == std::vector<FaceId>{2});

  FibEntry single{Name::parse("/a"), {{4, 1}}};
  CHECK(strategy_forward(single, Strategy::BestRoute, -1) == std::vector<FaceId>{4});

  FibEntry multi{Name::parse("/a"), {{1, 1}, {2, 1}, {3, 1}}};
  CHECK(strategy_forward(multi, Strategy::Multicast, 2) == std::vector<FaceId>{1, 3});

  std::vector<FaceId> all{1, 2, 3, 4};
  CHECK(strategy_forward(multi, Strategy::Broadcast, 3, all) ==
        std::vector<FaceId>{1, 2, 4});
}

TEST_CASE("strategy table matches by longest prefix with BestRoute default")
{
  StrategyTable table;
  table.set(Name::parse("/pec/discover"), Strategy::Multicast);
  CHECK(table.effective(Name::parse("/pec/discover/d1")) == Strategy::Multicast);
  CHECK(table.effective(Name::parse("/pec/svc/x")) == Strategy::BestRoute);
}

TEST_CASE("pit expiry boundary is inclusive")
{
  ForwarderState fw;
  Tracer tracer;
  fw.pit.create(Name::parse("/a"), 1, 1, 100);
  fw.pit.create(Name::parse("/b"), 1, 1, 101);

  auto erased = expire_pit(fw, "n", 100, tracer);
  REQUIRE(erased.size() == 1);
  CHECK(erased[0] == Name::parse("/a"));
  CHECK(fw.pit.find(Name::parse("/b")) != nullptr);

  ForwarderState empty;
  CHECK(expire_pit(empty, "n", 100, tracer).empty());
}

TEST_CASE("hop limit decrements on forward")
{
  ForwarderState fw;
  Tracer tracer;
  fw.fib.add_route(Name::parse("/a"), 9, 1);
  fw.link_faces = {1, 9};
  Interest i = make_interest("/a/b");
  i.hop_limit = 5;
  auto actions = on_interest(fw, "n", 1, i, 0, tracer);
  REQUIRE(actions.size() == 1);
  CHECK(std::get<Interest>(actions[0].packet).hop_limit == 4);
}

#include <catch2/catch_amalgamated.hpp>

#include "mbnetsim/spectrum.hpp"
#include "support/test_util.hpp"

using namespace mbnetsim;

TEST_CASE("alloc_width appends the guard band once") {
  SpectrumPolicy p;
  p.guard_band_slots = 1;
  CHECK(alloc_width(4, p) == 5);
  p.guard_band_slots = 0;
  CHECK(alloc_width(4, p) == 4);
  p.guard_band_slots = 2;
  CHECK(alloc_width(10, p) == 12);
  CHECK_THROWS_AS(alloc_width(0, p), std::invalid_argument);
}

TEST_CASE("first_fit on empty spectrum starts at slot zero") {
  Network net = testutil::line_network({100.0, 100.0});
  Path path = *shortest_path(net, 0, 2);
  auto r = first_fit(net, path, Band::C, 5);
  REQUIRE(r.has_value());
  CHECK(*r == SlotRange{0, 5});
}

TEST_CASE("first_fit skips slots blocked on any edge of the path") {
  Network net = testutil::line_network({100.0, 100.0});
  Path path = *shortest_path(net, 0, 2);
  // Occupy [0,3) on the second edge only.
  allocate(net, testutil::single_edge_path(net, 1), Band::C, {0, 3}, 77, false);
  auto r = first_fit(net, path, Band::C, 2);
  REQUIRE(r.has_value());
  CHECK(*r == SlotRange{3, 2});
}

TEST_CASE("first_fit rejects widths beyond band capacity") {
  Network net = testutil::line_network({100.0});
  Path path = *shortest_path(net, 0, 1);
  CHECK_FALSE(first_fit(net, path, Band::C, 321).has_value());
  CHECK(first_fit(net, path, Band::C, 320).has_value());
}

TEST_CASE("allocate records the owner on every path edge") {
  Network net = testutil::line_network({100.0, 100.0, 100.0});
  Path path = *shortest_path(net, 0, 3);
  allocate(net, path, Band::L, {10, 4}, 5, false);
  for (EdgeId e : path.edges) {
    for (int slot = 10; slot < 14; ++slot) {
      CHECK(net.occupancy(e, Band::L).owners(slot) == std::vector<LightpathId>{5});
    }
    CHECK(net.occupancy(e, Band::L).occupied_slots() == 4);
  }
}

TEST_CASE("conflicting allocation aborts atomically") {
  Network net = testutil::line_network({100.0, 100.0});
  Path path = *shortest_path(net, 0, 2);
  allocate(net, path, Band::C, {0, 5}, 1, false);
  std::string before = dump_occupancy(net);

  // Second edge already occupied at slot 4: whole allocation must fail.
  Path edge1 = testutil::single_edge_path(net, 1);
  CHECK_THROWS_AS(allocate(net, edge1, Band::C, {4, 3}, 2, false), SpectrumConflict);
  CHECK(dump_occupancy(net) == before);
  CHECK(net.allocations().count(2) == 0);

  SECTION("double allocation by the same owner is rejected") {
    CHECK_THROWS_AS(allocate(net, path, Band::C, {100, 5}, 1, false), SpectrumConflict);
  }
}

TEST_CASE("adjacent ranges coexist since the guard band lives inside the width") {
  Network net = testutil::line_network({100.0});
  Path path = *shortest_path(net, 0, 1);
  allocate(net, path, Band::C, {0, 5}, 1, false);
  allocate(net, path, Band::C, {5, 5}, 2, false);
  const auto& occ = net.occupancy(0, Band::C);
  CHECK(occ.occupied_slots() == 10);
  CHECK(occ.owners(4) == std::vector<LightpathId>{1});
  CHECK(occ.owners(5) == std::vector<LightpathId>{2});
  CHECK(dump_occupancy(net).find("edge 0 C: O0-9 F10-319") != std::string::npos);
}

TEST_CASE("release restores the pre-allocation occupancy") {
  Network net = testutil::line_network({100.0, 100.0});
  Path path = *shortest_path(net, 0, 2);
  std::string before = dump_occupancy(net);
  allocate(net, path, Band::C, {0, 6}, 9, false);
  CHECK(dump_occupancy(net) != before);
  release(net, 9);
  CHECK(dump_occupancy(net) == before);
  CHECK(net.allocations().empty());

  SECTION("releasing an unknown owner is an error") {
    CHECK_THROWS_AS(release(net, 9), SpectrumConflict);
  }
}

TEST_CASE("shared S-band slots survive until the last owner releases") {
  Network net = testutil::line_network({100.0});
  Path path = *shortest_path(net, 0, 1);
  allocate(net, path, Band::S, {10, 3}, 1, true);
  allocate(net, path, Band::S, {10, 3}, 2, true);
  CHECK(net.occupancy(0, Band::S).owners(10) == std::vector<LightpathId>{1, 2});
  CHECK(net.occupancy(0, Band::S).occupied_slots() == 3);

  release(net, 1);
  CHECK(net.occupancy(0, Band::S).owners(10) == std::vector<LightpathId>{2});
  CHECK(net.occupancy(0, Band::S).occupied_slots() == 3);
  release(net, 2);
  CHECK(net.occupancy(0, Band::S).occupied_slots() == 0);

  SECTION("shared allocation outside the S band is rejected") {
    CHECK_THROWS_AS(allocate(net, path, Band::C, {0, 3}, 3, true), std::invalid_argument);
  }
}

TEST_CASE("first_fit matches the exhaustive oracle on random occupancy") {
  std::mt19937_64 rng(4242);
  for (int instance = 0; instance < 100; ++instance) {
    Network net = testutil::line_network({80.0, 80.0, 80.0});
    Path path = *shortest_path(net, 0, 3);
    Band band = kAllBands[rng() % 3];
    // Random scatter of single-edge allocations.
    LightpathId id = 1;
    for (int fill = 0; fill < 40; ++fill) {
      auto edge = static_cast<EdgeId>(rng() % 3);
      int width = 1 + static_cast<int>(rng() % 8);
      int start = static_cast<int>(rng() % static_cast<std::uint64_t>(band_capacity(band) - width));
      Path single = testutil::single_edge_path(net, edge);
      bool free = true;
      for (int s = start; s < start + width; ++s) free &= net.occupancy(edge, band).is_free(s);
      if (free) allocate(net, single, band, {start, width}, id++, false);
    }
    int want_width = 1 + static_cast<int>(rng() % 10);
    auto got = first_fit(net, path, band, want_width);
    auto want = testutil::first_fit_oracle(net, path, band, want_width);
    CHECK(got == want);
  }
}

TEST_CASE("allocation and release conserve occupancy exactly") {
  std::mt19937_64 rng(777);
  Network net = testutil::ring_network(5, 100.0);
  std::string initial = dump_occupancy(net);
  std::vector<LightpathId> live;
  LightpathId next = 1;
  for (int step = 0; step < 500; ++step) {
    bool do_alloc = live.empty() || rng() % 3 != 0;
    if (do_alloc) {
      auto s = static_cast<NodeId>(rng() % 5);
      auto d = static_cast<NodeId>((s + 1 + rng() % 4) % 5);
      Path p = *shortest_path(net, s, d);
      Band band = kWorkingBands[rng() % 2];
      int width = 2 + static_cast<int>(rng() % 6);
      auto range = first_fit(net, p, band, width);
      if (range) {
        allocate(net, p, band, *range, next, false);
        live.push_back(next++);
      }
    } else {
      auto pick = rng() % live.size();
      release(net, live[pick]);
      live.erase(live.begin() + static_cast<long>(pick));
    }
    // No working slot may ever pick up a second owner.
    for (const auto& e : net.edges()) {
      for (Band b : kWorkingBands) {
        const auto& occ = net.occupancy(e.id, b);
        for (int slot = 0; slot < occ.capacity(); ++slot) {
          REQUIRE(occ.owners(slot).size() <= 1);
        }
      }
    }
  }
  for (LightpathId id : live) release(net, id);
  CHECK(dump_occupancy(net) == initial);
}

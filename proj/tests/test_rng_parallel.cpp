#include <catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "geophase/parallel.hpp"
#include "geophase/rng.hpp"

using namespace geophase;

TEST_CASE("Philox4x32-10 known-answer vectors", "[rng]") {
  using B = Philox4x32::block;
  CHECK(Philox4x32(0)(0, 0) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32(~0ull)(~0ull, ~0ull) == B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32(0x299f31d0a4093822ull)(0x0370734413198a2eull, 0x85a308d3243f6a88ull) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniform pairs", "[rng]") {
  const Philox4x32 rng(42);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto u = rng.uniform_pair(static_cast<std::uint64_t>(i), 3);
    CHECK((u[0] > 0.0 && u[0] < 1.0 && u[1] > 0.0 && u[1] < 1.0));
    sum += u[0] + u[1];
  }
  CHECK(std::abs(sum / (2.0 * n) - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / (2.0 * n)));
  CHECK(rng.uniform_pair(1, 2) == rng.uniform_pair(1, 2));
  CHECK(rng.uniform_pair(1, 2) != rng.uniform_pair(2, 1));
}

TEST_CASE("pairwise sum", "[parallel]") {
  std::vector<double> xs(1000);
  std::iota(xs.begin(), xs.end(), 1.0);
  CHECK(pairwise_sum<double>(xs) == 500500.0);
  CHECK(pairwise_sum<double>({}) == 0.0);
  std::vector<double> tiny(1 << 20, 0.1);
  CHECK(std::abs(pairwise_sum<double>(tiny) - 0.1 * (1 << 20)) < 1e-6);
}

TEST_CASE("parallel_for", "[parallel]") {
  SECTION("every index runs once") {
    for (unsigned w : {1u, 3u, 8u, 64u}) {
      std::vector<std::atomic<int>> hits(257);
      parallel_for(hits.size(), w, [&](std::size_t i) { ++hits[i]; });
      for (auto& h : hits) CHECK(h.load() == 1);
    }
  }
  SECTION("exceptions propagate") {
    CHECK_THROWS_AS(parallel_for(100, 4, [](std::size_t i) {
                      if (i == 77) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
  }
  SECTION("empty range") {
    int calls = 0;
    parallel_for(0, 4, [&](std::size_t) { ++calls; });
    CHECK(calls == 0);
  }
}

TEST_CASE("worker count honours GEOPHASE_THREADS", "[parallel]") {
  ::setenv("GEOPHASE_THREADS", "3", 1);
  CHECK(worker_count(0) == 3);
  CHECK(worker_count(8) == 8);
  ::setenv("GEOPHASE_THREADS", "junk", 1);
  CHECK(worker_count(0) >= 1);
  CHECK(worker_count(5) == 5);
  ::unsetenv("GEOPHASE_THREADS");
  CHECK(worker_count(7) == 7);
  CHECK(worker_count(0) >= 1);
}

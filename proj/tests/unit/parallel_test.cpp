// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "finsler/catalog.hpp"
#include "finsler/parallel.hpp"
#include "finsler/validation.hpp"

namespace {

using namespace finsler;

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 4);
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsLowestIndexFailure) {
  try {
    parallel_for(
        100,
        [](std::size_t i) {
          if (i % 10 == 7) throw std::runtime_error(std::to_string(i));
        },
        4);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

TEST(ParallelFor, EmptyRange) {
  EXPECT_NO_THROW(parallel_for(0, [](std::size_t) { throw std::runtime_error("never"); }, 3));
}

TEST(ParallelFor, ReportsIndependentOfWorkerCount) {
  const auto s = catalog::funk(3);
  ValidationOptions one, many;
  one.workers = 1;
  many.workers = 3;
  EXPECT_EQ(validate_structure(s, 120, one).to_json().dump(), validate_structure(s, 120, many).to_json().dump());
}

}  // namespace

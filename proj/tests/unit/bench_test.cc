#include <gtest/gtest.h>

#include <cmath>

#include "elsm/bench.h"
#include "test_support.h"

namespace elsm {
namespace {

CoreConfig bench_config() {
  CoreConfig c;
  c.max_levels = 5;
  c.l0_capacity = 8192;
  c.growth_factor = 4;
  return c;
}

BenchMetrics run(const WorkloadSpec& spec, bool with_oracle = true) {
  test::TempDir dir;
  auto o = test::open_core(dir.path(), bench_config());
  ShadowModel model;
  return run_bench(*o.core, spec, with_oracle ? &model : nullptr);
}

TEST(Bench, MixedWorkloadAgreesWithOracle) {
  auto spec = parse_workload_spec("records=1000,ops=3000,read=0.5,scan=0.1,delete=0.05,value_len=32,seed=4");
  auto m = run(spec);
  EXPECT_FALSE(m.aborted) << m.abort_reason;
  EXPECT_EQ(m.ops, 4000u);
  EXPECT_GT(m.oracle_checked, 1500u);
  EXPECT_EQ(m.oracle_mismatches, 0u);
  EXPECT_EQ(m.verification_failures, 0u);
  EXPECT_GT(m.flushes, 0u);
  EXPECT_GT(m.proved_gets, 0u);
  EXPECT_GT(m.bytes_verified, 0u);
  EXPECT_EQ(m.per_op.at("load").count, 1000u);
  EXPECT_LE(m.per_op.at("get").mean_us, m.per_op.at("get").p95_us * 20);
}

TEST(Bench, StoreMetricsAreDeterministic) {
  auto spec = parse_workload_spec("records=500,ops=1000,read=0.7,value_len=16,seed=8");
  auto a = run(spec, false), b = run(spec, false);
  EXPECT_EQ(a.proved_gets, b.proved_gets);
  EXPECT_DOUBLE_EQ(a.mean_proof_bytes, b.mean_proof_bytes);
  EXPECT_DOUBLE_EQ(a.mean_level_entries, b.mean_level_entries);
  EXPECT_EQ(a.flushes, b.flushes);
  EXPECT_EQ(a.compactions, b.compactions);
}

TEST(Bench, RecentKeysStopEarlier) {
  auto uniform = run(parse_workload_spec("records=4000,ops=2000,read=1,dist=uniform,value_len=16,seed=2"), false);
  auto latest = run(parse_workload_spec("records=4000,ops=2000,read=1,dist=latest,value_len=16,seed=2"), false);
  ASSERT_GT(uniform.proved_gets, 0u);
  ASSERT_GT(latest.proved_gets, 0u);
  EXPECT_LT(latest.mean_level_entries, uniform.mean_level_entries);
}

TEST(Bench, ProofSizeGrowsLogarithmically) {
  double prev = 0;
  for (int records : {256, 1024, 4096}) {
    auto m = run(parse_workload_spec("records=" + std::to_string(records) +
                                     ",ops=1000,read=1,dist=uniform,value_len=16,seed=6"),
                 false);
    ASSERT_GT(m.proved_gets, 0u);
    // Per level entry at most two paths (absence brackets) of ceil(log2 n) + 1.
    double per_entry = m.mean_proof_hashes / m.mean_level_entries;
    EXPECT_LE(per_entry, 2.0 * (std::ceil(std::log2(records)) + 1)) << records;
    if (prev > 0) {
      EXPECT_GT(m.mean_proof_hashes, prev);
    }
    prev = m.mean_proof_hashes;
  }
}

TEST(Bench, OutputFormats) {
  auto m = run(parse_workload_spec("records=50,ops=50,read=0.5,value_len=8"), false);
  auto text = format_text(m);
  EXPECT_NE(text.find("ops 100\n"), std::string::npos);
  EXPECT_NE(text.find("oracle_mismatches 0\n"), std::string::npos);
  auto json = format_json(m);
  EXPECT_EQ(json.front(), '{');
  EXPECT_NE(json.find("\"proved_gets\""), std::string::npos);
}

}  // namespace
}  // namespace elsm

#include <gtest/gtest.h>

#include "elsm/adversary.h"
#include "elsm/errors.h"
#include "test_support.h"

namespace elsm {
namespace {

using test::TempDir;

struct Attacked {
  std::shared_ptr<FileStore> files;
  std::shared_ptr<AdversarialStore> adv;
  std::shared_ptr<CounterDevice> counter;
  std::unique_ptr<TrustedCore> core;
};

Attacked open_attacked(const std::filesystem::path& dir, const CoreConfig& cfg) {
  Attacked a;
  a.files = FileStore::open(dir / "untrusted", {cfg.max_levels, false});
  a.adv = std::make_shared<AdversarialStore>(a.files);
  a.counter = std::make_shared<CounterDevice>(dir / "counter.bin");
  a.core = TrustedCore::open(a.adv, a.counter, cfg);
  return a;
}

Attacked example_store(const std::filesystem::path& dir) {
  auto a = open_attacked(dir, test::example_config());
  a.core->bulk_load(test::example_levels());
  return a;
}

RejectReason reject_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const VerificationFailed& e) {
    return e.reason();
  }
  ADD_FAILURE() << "no verification failure";
  return RejectReason::kMalformedProof;
}

TEST(Adversary, NamesRoundTrip) {
  EXPECT_EQ(all_attack_kinds().size(), 9u);
  for (auto k : all_attack_kinds()) EXPECT_EQ(parse_attack_kind(to_string(k)), k);
  EXPECT_EQ(parse_attack_kind("Identity"), AttackKind::kIdentity);
  EXPECT_FALSE(parse_attack_kind("Nope"));
  EXPECT_EQ(expected_verdict(AttackKind::kWalTruncateTail), ExpectedVerdict::kWindowedLoss);
  EXPECT_EQ(expected_verdict(AttackKind::kRollbackSnapshot), ExpectedVerdict::kRollbackDetected);
  EXPECT_EQ(expected_verdict(AttackKind::kWalTamper), ExpectedVerdict::kWalMismatch);
}

TEST(Adversary, IdentityChangesNothing) {
  TempDir dir;
  auto a = example_store(dir.path());
  a.adv->inject({AttackKind::kIdentity, std::nullopt, 1});
  EXPECT_EQ(a.core->get("Z").record->value, "z7");
  EXPECT_EQ(a.core->scan("A", "Z").records.size(), 4u);
  EXPECT_EQ(a.adv->mutations(), 0u);
}

TEST(Adversary, StaleResultOnZ) {
  TempDir dir;
  auto a = example_store(dir.path());
  a.adv->inject({AttackKind::kStaleResult, std::string("Z"), 1});
  EXPECT_EQ(reject_of([&] { a.core->get("Z"); }), RejectReason::kStaleResult);
  a.adv->clear();
  EXPECT_EQ(a.core->get("Z").record->value, "z7");
}

TEST(Adversary, TamperedValueBreaksTheRoot) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    TempDir dir;
    auto a = example_store(dir.path());
    const auto& t = a.adv->inject({AttackKind::kTamperValue, std::string("T"), seed});
    ASSERT_TRUE(t.key && t.level);
    EXPECT_EQ(reject_of([&] { a.core->get(*t.key, t.ts_q); }), RejectReason::kRootMismatch) << t.detail;
  }
}

TEST(Adversary, PointAttacksAreCaught) {
  for (auto kind : {AttackKind::kOmitRecord, AttackKind::kDropLevelEntry, AttackKind::kCrossLevelRootReplay,
                    AttackKind::kForgeRangeGap}) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      TempDir dir;
      auto a = example_store(dir.path());
      const auto& t = a.adv->inject({kind, std::nullopt, seed});
      ASSERT_TRUE(t.key);
      EXPECT_THROW(
          {
            if (t.use_scan) {
              a.core->scan(*t.key, *t.end_key, t.ts_q);
            } else {
              a.core->get(*t.key, t.ts_q);
            }
          },
          VerificationFailed)
          << to_string(kind) << " " << t.detail;
    }
  }
}

TEST(Adversary, UnknownTargetIsUnresolvable) {
  TempDir dir;
  auto a = example_store(dir.path());
  EXPECT_THROW(a.adv->inject({AttackKind::kStaleResult, std::string("Y"), 1}), SelectorUnresolvable);
  EXPECT_THROW(a.adv->inject({AttackKind::kWalTamper, std::nullopt, 1}), SelectorUnresolvable);
}

TEST(Adversary, WalTamperIsAWalMismatch) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    TempDir dir;
    auto cfg = test::small_config(3);
    {
      auto a = open_attacked(dir.path(), cfg);
      for (int i = 0; i < 8; ++i) a.core->put(Key("k" + std::to_string(i)), "value");
      a.adv->inject({AttackKind::kWalTamper, std::nullopt, seed});
    }
    EXPECT_THROW(open_attacked(dir.path(), cfg), WalMismatch) << seed;
  }
}

TEST(Adversary, RollbackSnapshotIsDetected) {
  TempDir dir;
  auto cfg = test::small_config(3);
  {
    auto a = open_attacked(dir.path(), cfg);
    a.core->put("a", "1");
    a.core->bind_counter();
    a.adv->inject({AttackKind::kRollbackSnapshot, std::nullopt, 1});
    a.core->put("a", "2");
    a.core->bind_counter();
    a.adv->apply_rollback();
  }
  auto a = open_attacked(dir.path(), cfg);
  EXPECT_TRUE(a.core->audit_rollback().rollback);
}

TEST(Adversary, SmallCampaignBehavesAsDocumented) {
  TempDir dir;
  auto cfg = default_campaign(dir.path(), 4, 3);
  auto report = run_campaign(cfg);
  EXPECT_EQ(report.rows.size(), 10u);
  for (const auto& row : report.rows) {
    EXPECT_TRUE(row.as_expected()) << to_string(row.kind);
    EXPECT_EQ(row.false_accepts, 0u);
  }
  EXPECT_TRUE(report.all_as_expected());
  auto text = format_report(report);
  EXPECT_EQ(text.substr(0, 5), "kind ");
}

}  // namespace
}  // namespace elsm

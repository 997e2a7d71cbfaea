// elsm: command-line front end for an authenticated store directory.
//
//   <store>/elsm.conf            configuration (see cli_util.h)
//   <store>/LOCK                 held while a command runs
//   <store>/untrusted/           runs, WAL, sealed state
//   <store>/trusted/counter.bin  monotonic counter
//
// Output is "name=value" lines with percent-encoded values. Exit codes:
// 0 ok, 1 usage, 2 I/O, 3 verification failure, 4 rollback detected.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "cli_util.h"
#include "elsm/adversary.h"
#include "elsm/bench.h"
#include "elsm/errors.h"
#include "elsm/file_store.h"
#include "elsm/run_file.h"
#include "elsm/trusted_core.h"

namespace fs = std::filesystem;
using namespace elsm;
using cli::pct_encode;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kVerify = 3, kRollback = 4 };

struct UsageError : Error {
  using Error::Error;
};

class StoreLock {
 public:
  explicit StoreLock(const fs::path& dir) {
    fd_ = ::open((dir / "LOCK").c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw IoError("cannot open " + (dir / "LOCK").string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      throw IoError("store " + dir.string() + " is in use by another process");
    }
  }
  ~StoreLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  StoreLock(const StoreLock&) = delete;
  StoreLock& operator=(const StoreLock&) = delete;

 private:
  int fd_ = -1;
};

struct Session {
  fs::path dir;
  CoreConfig config;
  std::unique_ptr<StoreLock> lock;
  std::shared_ptr<FileStore> files;
  std::shared_ptr<AdversarialStore> adversary;
  std::unique_ptr<TrustedCore> core;
};

fs::path config_path(const fs::path& dir) { return dir / "elsm.conf"; }

CoreConfig load_config(const fs::path& dir) {
  if (!fs::exists(config_path(dir))) throw UsageError("no store at " + dir.string() + " (run init first)");
  return cli::parse_config(read_file(config_path(dir)));
}

Session open_session(const fs::path& dir) {
  Session s;
  s.dir = dir;
  s.config = load_config(dir);
  s.lock = std::make_unique<StoreLock>(dir);
  s.files = FileStore::open(dir / "untrusted", StoreOptions{s.config.max_levels, false});
  s.adversary = std::make_shared<AdversarialStore>(s.files);
  s.core = TrustedCore::open(s.adversary, std::make_shared<CounterDevice>(dir / "trusted" / "counter.bin"), s.config);
  return s;
}

void print_stats(const ReadStats& st) {
  std::cout << "proof_entries=" << st.level_entries << '\n'
            << "proof_hashes=" << st.hashes << '\n'
            << "proof_bytes=" << st.proof_bytes << '\n';
}

void print_record_fields(const Record& r) {
  std::cout << "value=" << pct_encode(r.value) << '\n' << "ts=" << r.ts.value << '\n';
}

void print_status(TrustedCore& core) {
  std::cout << "global_ts=" << core.global_ts().value << '\n'
            << "wal_len=" << core.wal_len() << '\n'
            << "wal_digest=" << core.wal_digest().hex() << '\n'
            << "buffer_bytes=" << core.buffer_bytes() << '\n';
  auto roots = core.roots();
  auto bytes = core.level_bytes();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    std::cout << "level." << i + 1 << ".root=" << roots[i].hex() << '\n'
              << "level." << i + 1 << ".bytes=" << bytes[i] << '\n';
  }
  std::cout << "state_hash=" << core.current_state_hash().hex() << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"Authenticated LSM key-value store"};
  app.require_subcommand(1);
  std::string store_dir;
  app.add_option("--store", store_dir, "Store directory")->required();

  // init
  auto* init = app.add_subcommand("init", "Create a new store");
  CoreConfig init_cfg;
  std::string retention = "all";
  init->add_option("--levels", init_cfg.max_levels, "Number of untrusted levels")->check(CLI::Range(2, 64));
  init->add_option("--l0-capacity", init_cfg.l0_capacity, "Write buffer size in bytes")->check(CLI::PositiveNumber);
  init->add_option("--growth", init_cfg.growth_factor, "Level size ratio")->check(CLI::Range(2, 1000));
  init->add_option("--base-size", init_cfg.base_size, "Level 1 size limit (default: l0 capacity)");
  init->add_option("--bind-interval", init_cfg.bind_interval, "Writes between counter binds (0 = manual)");
  init->add_option("--retention", retention, "all | latest")->check(CLI::IsMember({"all", "latest"}));
  init->add_option("--seal-key", init_cfg.seal_key, "Key for the sealed state MAC");
  bool no_auto_compact = false;
  init->add_flag("--no-auto-compact", no_auto_compact, "Only compact on request");

  auto* put = app.add_subcommand("put", "Write a value");
  std::string key, value, key2;
  put->add_option("key", key)->required();
  put->add_option("value", value)->required();

  auto* del = app.add_subcommand("del", "Delete a key");
  del->add_option("key", key)->required();

  auto* get = app.add_subcommand("get", "Verified point read");
  std::optional<std::uint64_t> ts;
  std::string attack_name;
  std::uint64_t seed = 1;
  get->add_option("key", key)->required();
  get->add_option("--ts", ts, "Read as of this timestamp");
  get->add_option("--attack", attack_name, "Serve the read through this attack");
  get->add_option("--seed", seed, "Attack seed");

  auto* scan = app.add_subcommand("scan", "Verified range read");
  scan->add_option("k1", key)->required();
  scan->add_option("k2", key2)->required();
  scan->add_option("--ts", ts, "Read as of this timestamp");

  auto* flush = app.add_subcommand("flush", "Merge the write buffer into level 1");
  auto* compact = app.add_subcommand("compact", "Merge level i into level i+1");
  std::uint16_t level = 0;
  compact->add_option("level", level)->required();

  auto* bench = app.add_subcommand("bench", "Run a YCSB-style workload against the store");
  std::string spec_text;
  std::string json_out;
  bench->add_option("--spec", spec_text, "records=N,ops=N,read=R,dist=uniform|zipfian|latest,seed=S,...");
  bench->add_option("--json", json_out, "Also write a JSON summary here");
  bool bench_check = false;
  bench->add_flag("--check", bench_check, "Compare every read with a reference model");

  auto* attack = app.add_subcommand("attack", "Run an attack campaign in a scratch copy");
  std::string kind_name = "all";
  std::uint64_t trials = 100;
  attack->add_option("--kind", kind_name, "Attack kind, or 'all'");
  attack->add_option("--trials", trials, "Targets per kind");
  attack->add_option("--seed", seed, "Campaign seed");

  auto* audit = app.add_subcommand("audit", "Check the store against the monotonic counter");
  auto* bind = app.add_subcommand("bind", "Bind the current state to the monotonic counter");
  auto* fsck = app.add_subcommand("fsck", "Rebuild every level tree and compare with the sealed roots");
  auto* status = app.add_subcommand("status", "Print trusted state");
  auto* load = app.add_subcommand("load", "Install level contents into an empty store");
  std::string load_file;
  load->add_option("file", load_file)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const fs::path dir = store_dir;

  if (init->parsed()) {
    if (fs::exists(config_path(dir))) throw UsageError("store already initialized at " + dir.string());
    init_cfg.retention = retention == "all" ? Retention::kAllVersions : Retention::kLatestOnly;
    init_cfg.auto_compact = !no_auto_compact;
    fs::create_directories(dir / "trusted");
    write_file_atomic(config_path(dir), cli::format_config(init_cfg), true);
    Session s = open_session(dir);
    std::cout << "initialized=" << pct_encode(dir.string()) << '\n';
    print_status(*s.core);
    return kOk;
  }

  if (attack->parsed()) {
    load_config(dir);  // only to insist on an initialized store
    CampaignConfig cfg = default_campaign(dir / "campaign", trials, seed);
    if (kind_name != "all") {
      auto k = parse_attack_kind(kind_name);
      if (!k) throw UsageError("unknown attack kind '" + kind_name + "'");
      cfg.kinds = {*k};
    }
    StoreLock lock(dir);
    CampaignReport report = run_campaign(cfg);
    fs::remove_all(cfg.work_dir);
    std::cout << format_report(report);
    return report.all_as_expected() ? kOk : kVerify;
  }

  Session s = open_session(dir);
  TrustedCore& core = *s.core;

  if (put->parsed()) {
    std::cout << "ts=" << core.put(Key(key), value).value << '\n';
  } else if (del->parsed()) {
    std::cout << "ts=" << core.del(Key(key)).value << '\n';
  } else if (get->parsed()) {
    Timestamp ts_q = ts ? Timestamp{*ts} : Timestamp::latest();
    if (!attack_name.empty()) {
      auto k = parse_attack_kind(attack_name);
      if (!k) throw UsageError("unknown attack kind '" + attack_name + "'");
      if (*k == AttackKind::kWalTamper || *k == AttackKind::kRollbackSnapshot || *k == AttackKind::kWalTruncateTail ||
          *k == AttackKind::kForgeRangeGap) {
        throw UsageError(attack_name + " does not apply to a point read; use the attack command");
      }
      const ResolvedTarget& t = s.adversary->inject(Attack{*k, key, seed});
      if (!ts) ts_q = t.ts_q;
      std::cout << "attack=" << attack_name << '\n' << "target=" << pct_encode(t.detail) << '\n';
    }
    GetResult r = core.get(Key(key), ts_q);
    std::cout << "key=" << pct_encode(key) << '\n' << "found=" << (r.record ? 1 : 0) << '\n';
    if (r.record) print_record_fields(*r.record);
    if (r.tombstone) std::cout << "tombstone=1\n";
    std::cout << "level=" << (r.hit_level ? r.hit_level->index : 0) << '\n';
    print_stats(r.stats);
  } else if (scan->parsed()) {
    Timestamp ts_q = ts ? Timestamp{*ts} : Timestamp::latest();
    ScanResult r = core.scan(Key(key), Key(key2), ts_q);
    std::cout << "count=" << r.records.size() << '\n';
    for (const auto& rec : r.records) {
      std::cout << "record=" << pct_encode(rec.key.bytes()) << ' ' << rec.ts.value << ' ' << pct_encode(rec.value)
                << '\n';
    }
    print_stats(r.stats);
  } else if (flush->parsed()) {
    core.flush();
    print_status(core);
  } else if (compact->parsed()) {
    core.compact(LevelId{level});
    print_status(core);
  } else if (bench->parsed()) {
    WorkloadSpec spec = parse_workload_spec(spec_text);
    ShadowModel oracle;
    BenchMetrics m = run_bench(core, spec, bench_check ? &oracle : nullptr);
    std::cout << format_text(m);
    if (!json_out.empty()) write_file_atomic(json_out, format_json(m) + "\n", false);
    if (m.verification_failures || m.oracle_mismatches) return kVerify;
    if (m.aborted) return kIo;
  } else if (audit->parsed()) {
    AuditReport a = core.audit_rollback();
    std::cout << "rollback=" << (a.rollback ? 1 : 0) << '\n' << "detail=" << pct_encode(a.detail) << '\n';
    return a.rollback ? kRollback : kOk;
  } else if (bind->parsed()) {
    core.bind_counter();
    std::cout << "counter=" << core.sealed_state().binding.value << '\n'
              << "state_hash=" << core.sealed_state().binding.hash.hex() << '\n';
  } else if (fsck->parsed()) {
    bool ok = true;
    for (const auto& f : core.fsck()) {
      std::cout << "level=" << f.level.index << " records=" << f.records << " expected=" << f.expected.hex()
                << " actual=" << f.actual.hex() << " ok=" << (f.ok() ? 1 : 0);
      if (!f.error.empty()) std::cout << " error=" << pct_encode(f.error);
      std::cout << '\n';
      ok = ok && f.ok();
    }
    return ok ? kOk : kVerify;
  } else if (status->parsed()) {
    print_status(core);
  } else if (load->parsed()) {
    core.bulk_load(cli::parse_load_file(read_file(load_file), s.config.max_levels));
    print_status(core);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const VerificationFailed& e) {
    std::cerr << "elsm: " << e.what() << '\n';
    std::cout << "error=verification_failed\nlevel=" << e.level().index << "\nreason=" << to_string(e.reason())
              << '\n';
    return kVerify;
  } catch (const WalMismatch& e) {
    std::cerr << "elsm: WAL mismatch: " << e.what() << '\n';
    std::cout << "error=wal_mismatch\n";
    return kVerify;
  } catch (const SealTampered& e) {
    std::cerr << "elsm: sealed state tampered: " << e.what() << '\n';
    std::cout << "error=seal_tampered\n";
    return kVerify;
  } catch (const IoError& e) {
    std::cerr << "elsm: " << e.what() << '\n';
    return kIo;
  } catch (const CounterIoError& e) {
    std::cerr << "elsm: " << e.what() << '\n';
    return kIo;
  } catch (const CorruptContainer& e) {
    std::cerr << "elsm: corrupt run file: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    // Usage-type problems: bad arguments, preconditions, unresolvable targets.
    std::cerr << "elsm: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "elsm: " << e.what() << '\n';
    return kIo;
  }
}

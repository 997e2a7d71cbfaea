#include "elsm/workload.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "elsm/errors.h"

namespace elsm {

namespace {

constexpr std::uint64_t kKeySpace = std::uint64_t{1} << 48;  // 12 hex digits

std::uint64_t fnv1a64(std::uint64_t v) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex12(std::uint64_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%012llx", static_cast<unsigned long long>(v & (kKeySpace - 1)));
  return buf;
}

template <typename T>
T parse_number(std::string_view field, std::string_view text) {
  T v{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw InvalidSpec("bad value for " + std::string(field) + ": '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::kUniform: return "uniform";
    case Distribution::kZipfian: return "zipfian";
    case Distribution::kLatest: return "latest";
  }
  return "?";
}

std::string_view to_string(Op::Kind k) {
  switch (k) {
    case Op::Kind::kPut: return "put";
    case Op::Kind::kDelete: return "delete";
    case Op::Kind::kGet: return "get";
    case Op::Kind::kScan: return "scan";
  }
  return "?";
}

void validate(const WorkloadSpec& s) {
  if (s.record_count == 0) throw InvalidSpec("records must be positive");
  if (s.key_len < 16 || s.key_len > 1024) throw InvalidSpec("key_len must be in [16, 1024]");
  if (s.value_len > (1u << 20)) throw InvalidSpec("value_len must be at most 1 MiB");
  for (double r : {s.read_ratio, s.scan_ratio, s.delete_ratio}) {
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidSpec("ratios must be in [0, 1]");
  }
  if (s.read_ratio + s.scan_ratio + s.delete_ratio > 1.0 + 1e-9) throw InvalidSpec("ratios sum above 1");
  if (s.scan_length == 0) throw InvalidSpec("scan_len must be positive");
}

WorkloadSpec parse_workload_spec(std::string_view text) {
  WorkloadSpec s;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view() : text.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidSpec("expected key=value, got '" + std::string(item) + "'");
    std::string_view k = item.substr(0, eq);
    std::string_view v = item.substr(eq + 1);
    if (k == "records") {
      s.record_count = parse_number<std::uint64_t>(k, v);
    } else if (k == "ops") {
      s.op_count = parse_number<std::uint64_t>(k, v);
    } else if (k == "key_len") {
      s.key_len = parse_number<std::size_t>(k, v);
    } else if (k == "value_len") {
      s.value_len = parse_number<std::size_t>(k, v);
    } else if (k == "read") {
      s.read_ratio = parse_number<double>(k, v);
    } else if (k == "scan") {
      s.scan_ratio = parse_number<double>(k, v);
    } else if (k == "delete") {
      s.delete_ratio = parse_number<double>(k, v);
    } else if (k == "seed") {
      s.seed = parse_number<std::uint64_t>(k, v);
    } else if (k == "scan_len") {
      s.scan_length = parse_number<std::uint32_t>(k, v);
    } else if (k == "dist") {
      if (v == "uniform") {
        s.distribution = Distribution::kUniform;
      } else if (v == "zipfian") {
        s.distribution = Distribution::kZipfian;
      } else if (v == "latest") {
        s.distribution = Distribution::kLatest;
      } else {
        throw InvalidSpec("unknown distribution '" + std::string(v) + "'");
      }
    } else {
      throw InvalidSpec("unknown workload field '" + std::string(k) + "'");
    }
  }
  validate(s);
  return s;
}

std::string to_string(const WorkloadSpec& s) {
  std::ostringstream o;
  o << "records=" << s.record_count << ",ops=" << s.op_count << ",key_len=" << s.key_len
    << ",value_len=" << s.value_len << ",read=" << s.read_ratio << ",scan=" << s.scan_ratio
    << ",delete=" << s.delete_ratio << ",dist=" << to_string(s.distribution) << ",seed=" << s.seed
    << ",scan_len=" << s.scan_length;
  return o.str();
}

std::string make_key(std::uint64_t index, std::size_t key_len) {
  std::string k = "user" + hex12(fnv1a64(index));
  if (k.size() < key_len) k.append(key_len - k.size(), '0');
  return k;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection sampling to avoid modulo bias.
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// ---- zipfian ----

double ZipfianGenerator::zeta(std::uint64_t n, double theta) {
  double sum = 0;
  for (std::uint64_t i = 1; i <= n; ++i) sum += 1.0 / std::pow(static_cast<double>(i), theta);
  return sum;
}

ZipfianGenerator::ZipfianGenerator(std::uint64_t n, double theta)
    : n_(n), theta_(theta), zetan_(zeta(n, theta)), alpha_(1.0 / (1.0 - theta)), eta_(0),
      half_pow_theta_(std::pow(0.5, theta)) {
  if (n == 0) throw InvalidSpec("zipfian needs at least one item");
  if (!(theta > 0 && theta < 1)) throw InvalidSpec("zipfian theta must be in (0, 1)");
  if (n > 2) {
    double zeta2 = zeta(2, theta);
    eta_ = (1 - std::pow(2.0 / static_cast<double>(n), 1 - theta)) / (1 - zeta2 / zetan_);
  }
}

std::uint64_t ZipfianGenerator::next(std::mt19937_64& rng) const {
  double u = uniform01(rng);
  double uz = u * zetan_;
  if (n_ == 1 || uz < 1.0) return 0;
  if (n_ == 2 || uz < 1.0 + half_pow_theta_) return 1;
  auto r = static_cast<std::uint64_t>(static_cast<double>(n_) * std::pow(eta_ * u - eta_ + 1, alpha_));
  return r < n_ ? r : n_ - 1;
}

double ZipfianGenerator::probability(std::uint64_t rank) const {
  return 1.0 / (std::pow(static_cast<double>(rank + 1), theta_) * zetan_);
}

// ---- generator ----

WorkloadGenerator::WorkloadGenerator(WorkloadSpec spec) : spec_(spec), rng_(spec.seed) {
  validate(spec_);
  if (spec_.distribution != Distribution::kUniform) zipf_.emplace(spec_.record_count, 0.99);
}

std::uint64_t WorkloadGenerator::pick_index() {
  switch (spec_.distribution) {
    case Distribution::kUniform: return uniform_below(rng_, spec_.record_count);
    case Distribution::kZipfian: return zipf_->next(rng_);
    case Distribution::kLatest: return spec_.record_count - 1 - zipf_->next(rng_);
  }
  return 0;
}

std::string WorkloadGenerator::make_value() {
  std::string v(spec_.value_len, 'a');
  for (auto& c : v) c = static_cast<char>('a' + uniform_below(rng_, 26));
  return v;
}

std::string WorkloadGenerator::scan_end(const std::string& start) const {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(start.data() + 4, start.data() + 16, x, 16);
  if (ec != std::errc() || p != start.data() + 16) return start;
  std::uint64_t span = std::max<std::uint64_t>(1, kKeySpace / spec_.record_count * spec_.scan_length);
  std::uint64_t end = x + span < kKeySpace ? x + span : kKeySpace - 1;
  std::string k = "user" + hex12(end);
  if (k.size() < spec_.key_len) k.append(spec_.key_len - k.size(), '0');
  return k;
}

std::optional<Op> WorkloadGenerator::next() {
  const std::uint64_t i = emitted_;
  if (i >= spec_.record_count + spec_.op_count) return std::nullopt;
  ++emitted_;
  Op op;
  if (i < spec_.record_count) {
    op.kind = Op::Kind::kPut;
    op.key = make_key(i, spec_.key_len);
    op.value = make_value();
    op.load_phase = true;
    return op;
  }
  double u = uniform01(rng_);
  op.key = make_key(pick_index(), spec_.key_len);
  if (u < spec_.read_ratio) {
    op.kind = Op::Kind::kGet;
  } else if (u < spec_.read_ratio + spec_.scan_ratio) {
    op.kind = Op::Kind::kScan;
    op.end_key = scan_end(op.key);
  } else if (u < spec_.read_ratio + spec_.scan_ratio + spec_.delete_ratio) {
    op.kind = Op::Kind::kDelete;
  } else {
    op.kind = Op::Kind::kPut;
    op.value = make_value();
  }
  return op;
}

}  // namespace elsm

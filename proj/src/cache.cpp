#include "summatoria/cache.hpp"

#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>

#include "summatoria/error.hpp"

namespace summatoria::cache {

namespace {

constexpr char kMagic[4] = {'S', 'U', 'M', 'F'};

template <class T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  static_assert(std::is_integral_v<T>);
  auto u = static_cast<std::make_unsigned_t<T>>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double value) {
  put_le(out, std::bit_cast<std::uint64_t>(value));
}

template <class T>
T get_le(const std::uint8_t* p) {
  std::make_unsigned_t<T> u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    u |= static_cast<std::make_unsigned_t<T>>(p[i]) << (8 * i);
  return static_cast<T>(u);
}

std::vector<std::uint8_t> with_header(FunctionKind kind, std::uint8_t payload_tag,
                                      std::uint64_t lo, std::uint64_t hi,
                                      const std::vector<std::uint8_t>& payload) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + payload.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_le(out, kVersion);
  out.push_back(static_cast<std::uint8_t>(kind));
  out.push_back(payload_tag);
  put_le(out, lo);
  put_le(out, hi);
  put_le(out, fnv1a64(payload));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

[[noreturn]] void integrity(const std::string& field, const std::string& detail) {
  throw Error(ErrorCode::Integrity, "cache integrity error in field '" + field + "': " + detail);
}

[[noreturn]] void corruption(const std::string& detail) {
  throw Error(ErrorCode::Corruption, "cache corruption: " + detail);
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint8_t> encode(const ValueTable& table) {
  std::vector<std::uint8_t> payload;
  if (is_integer_kind(table.kind())) {
    const auto v = table.ints();
    payload.reserve(v.size());
    for (std::int8_t x : v) payload.push_back(static_cast<std::uint8_t>(x));
  } else {
    const auto v = table.reals();
    payload.reserve(v.size() * 8);
    for (double x : v) put_f64(payload, x);
  }
  return with_header(table.kind(), kPayloadTable, table.lo(), table.hi(), payload);
}

std::vector<std::uint8_t> encode(const SummatorySeries& series) {
  if (series.synthetic()) throw_domain("synthetic series cannot be cached: no kind tag");
  const auto cps = series.checkpoints();
  if (cps.empty()) throw_domain("series without checkpoints cannot be cached");
  std::vector<std::uint8_t> payload;
  payload.reserve(cps.size() * 16);
  for (const auto& c : cps) {
    put_le(payload, c.n);
    if (const auto* s = std::get_if<std::int64_t>(&c.sum))
      put_le(payload, *s);
    else
      put_f64(payload, std::get<double>(c.sum));
  }
  return with_header(*series.kind(), kPayloadSeries, cps.front().n, series.limit(), payload);
}

Artifact decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize)
    integrity("header", "file holds " + std::to_string(bytes.size()) + " bytes, header needs " +
                            std::to_string(kHeaderSize));
  const std::uint8_t* h = bytes.data();
  if (std::memcmp(h, kMagic, 4) != 0) integrity("magic", "expected \"SUMF\"");
  if (const auto v = get_le<std::uint32_t>(h + 4); v != kVersion)
    integrity("version", "unsupported version " + std::to_string(v));
  const auto kind = kind_from_tag(h[8]);
  if (!kind) integrity("kind_tag", "unknown kind tag " + std::to_string(h[8]));
  const std::uint8_t payload_tag = h[9];
  if (payload_tag != kPayloadTable && payload_tag != kPayloadSeries)
    integrity("payload_tag", "unknown payload tag " + std::to_string(payload_tag));
  const auto lo = get_le<std::uint64_t>(h + 10);
  const auto hi = get_le<std::uint64_t>(h + 18);
  const auto checksum = get_le<std::uint64_t>(h + 26);
  const auto payload = bytes.subspan(kHeaderSize);
  if (fnv1a64(payload) != checksum) integrity("checksum", "payload checksum mismatch");

  try {
    if (payload_tag == kPayloadTable) {
      if (lo == 0 || hi < lo) corruption("table bounds lo=" + std::to_string(lo) + " hi=" + std::to_string(hi));
      const std::uint64_t len = hi - lo + 1;
      const std::size_t width = is_integer_kind(*kind) ? 1 : 8;
      if (payload.size() / width != len || payload.size() % width != 0)
        corruption("table payload of " + std::to_string(payload.size()) +
                   " bytes does not match [lo, hi]");
      if (width == 1) {
        std::vector<std::int8_t> v(len);
        std::memcpy(v.data(), payload.data(), len);
        return ValueTable::make(*kind, lo, std::move(v));
      }
      std::vector<double> v(len);
      for (std::size_t i = 0; i < len; ++i)
        v[i] = std::bit_cast<double>(get_le<std::uint64_t>(payload.data() + 8 * i));
      return ValueTable::make(*kind, lo, std::move(v));
    }

    if (payload.empty() || payload.size() % 16 != 0)
      corruption("series payload of " + std::to_string(payload.size()) + " bytes");
    const std::size_t count = payload.size() / 16;
    std::vector<Checkpoint> cps;
    cps.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint8_t* p = payload.data() + 16 * i;
      Checkpoint c;
      c.n = get_le<std::uint64_t>(p);
      if (is_integer_kind(*kind))
        c.sum = get_le<std::int64_t>(p + 8);
      else
        c.sum = std::bit_cast<double>(get_le<std::uint64_t>(p + 8));
      cps.push_back(std::move(c));
    }
    if (cps.front().n != lo) corruption("header lo does not match the first checkpoint");
    return SummatorySeries::make(*kind, hi, std::move(cps));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Domain) corruption(e.what());
    throw;
  }
}

namespace {

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace

void save(const std::filesystem::path& path, const ValueTable& table) {
  write_file(path, encode(table));
}

void save(const std::filesystem::path& path, const SummatorySeries& series) {
  write_file(path, encode(series));
}

Artifact load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "read failed for " + path.string());
  return decode(bytes);
}

std::filesystem::path default_directory() {
  if (const char* env = std::getenv("SUMMATORIA_CACHE"); env && *env) return env;
  return ".summatoria-cache";
}

std::filesystem::path table_path(const std::filesystem::path& dir, FunctionKind kind,
                                 std::uint64_t lo, std::uint64_t hi) {
  return dir / (std::string(kind_name(kind)) + "-table-" + std::to_string(lo) + "-" +
                std::to_string(hi) + ".sumf");
}

ValueTable table_through_cache(const std::filesystem::path& dir, FunctionKind kind,
                               std::uint64_t lo, std::uint64_t hi, const ComputeConfig& cfg,
                               const Warn& warn) {
  const auto path = table_path(dir, kind, lo, hi);
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      auto artifact = load(path);
      if (auto* t = std::get_if<ValueTable>(&artifact);
          t && t->kind() == kind && t->lo() == lo && t->hi() == hi)
        return std::move(*t);
      if (warn) warn("cache file " + path.string() + " holds a different artifact; recomputing");
    } catch (const Error& e) {
      if (warn) warn("ignoring cache file " + path.string() + ": " + e.what());
    }
  }
  ValueTable table = sieve_values(kind, lo, hi, cfg);
  try {
    std::filesystem::create_directories(dir);
    save(path, table);
  } catch (const std::exception& e) {
    if (warn) warn(std::string("could not write cache file: ") + e.what());
  }
  return table;
}

}  // namespace summatoria::cache

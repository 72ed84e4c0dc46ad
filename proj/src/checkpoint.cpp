#include "mmsim/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

namespace mmsim {

namespace {

constexpr char kMagic[8] = {'M', 'M', 'S', 'I', 'M', 'C', 'K', 'P'};

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out.insert(out.end(), b, b + n);
  }
  void u8(std::uint8_t v) { out.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b, std::size_t end) : buf(b), limit(end) {}

  const std::uint8_t* take(std::size_t n) {
    if (limit - pos < n) throw DataError("checkpoint: truncated file");
    const std::uint8_t* p = buf.data() + pos;
    pos += n;
    return p;
  }
  std::uint8_t u8() { return *take(1); }
  std::uint32_t u32() {
    const auto* p = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const auto* p = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }

  const std::vector<std::uint8_t>& buf;
  std::size_t limit;
  std::size_t pos{0};
};

}  // namespace

const char* mode_name(TrainingMode m) noexcept { return m == TrainingMode::Impact ? "impact" : "backtest"; }

TrainingMode parse_mode(const std::string& s) {
  if (s == "impact") return TrainingMode::Impact;
  if (s == "backtest") return TrainingMode::Backtest;
  throw ConfigError("mode must be 'impact' or 'backtest', got '" + s + "'");
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ck) {
  const Population& pop = ck.population;
  const std::size_t n_actions = pop.members.empty() ? 0 : pop.members.front().size();
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kCheckpointVersion);
  w.u8(static_cast<std::uint8_t>(ck.mode));
  w.u64(ck.config_hash);
  w.u64(ck.market_seed);
  w.u64(ck.ga_seed);
  w.u64(ck.ga_stream_position);
  w.u64(pop.generation);
  w.u64(pop.members.size());
  w.u64(n_actions);
  for (const Gene& g : pop.members) {
    if (g.size() != n_actions) throw DataError("checkpoint: genes of unequal length");
    for (Action a : g.actions) w.u8(static_cast<std::uint8_t>(a));
  }
  for (std::size_t i = 0; i < pop.members.size(); ++i) {
    const auto& f = i < pop.fitness.size() ? pop.fitness[i] : std::nullopt;
    w.u8(f ? 1 : 0);
    w.f64(f.value_or(0.0));
  }
  w.u64(ck.history.size());
  for (const GenerationStats& s : ck.history) {
    w.u64(s.generation);
    w.f64(s.best);
    w.f64(s.mean);
    w.f64(s.median);
    w.f64(s.elapsed);
  }
  w.u64(fnv1a(w.out.data(), w.out.size()));
  return std::move(w.out);
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < sizeof kMagic + 4 + 8) throw DataError("checkpoint: truncated file");
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) throw DataError("checkpoint: bad magic");
  const std::size_t body = bytes.size() - 8;
  Reader trailer(bytes, bytes.size());
  trailer.pos = body;
  if (trailer.u64() != fnv1a(bytes.data(), body)) throw DataError("checkpoint: checksum mismatch");

  Reader r(bytes, body);
  r.take(sizeof kMagic);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw DataError("checkpoint: format version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kCheckpointVersion) + ")");
  }
  Checkpoint ck;
  const std::uint8_t mode = r.u8();
  if (mode > 1) throw DataError("checkpoint: unknown training mode");
  ck.mode = static_cast<TrainingMode>(mode);
  ck.config_hash = r.u64();
  ck.market_seed = r.u64();
  ck.ga_seed = r.u64();
  ck.ga_stream_position = r.u64();
  ck.population.generation = r.u64();
  const std::uint64_t members = r.u64();
  const std::uint64_t n_actions = r.u64();
  if (n_actions != 0 && members > body / n_actions) throw DataError("checkpoint: truncated file");
  ck.population.members.reserve(members);
  for (std::uint64_t i = 0; i < members; ++i) {
    const std::uint8_t* p = r.take(n_actions);
    Gene g(n_actions, Action::None);
    for (std::uint64_t k = 0; k < n_actions; ++k) {
      if (p[k] > 2) throw DataError("checkpoint: invalid action code");
      g[k] = static_cast<Action>(p[k]);
    }
    ck.population.members.push_back(std::move(g));
  }
  ck.population.fitness.resize(members);
  for (std::uint64_t i = 0; i < members; ++i) {
    const bool present = r.u8() != 0;
    const double f = r.f64();
    if (present) ck.population.fitness[i] = f;
  }
  const std::uint64_t rows = r.u64();
  if (rows > body / 40) throw DataError("checkpoint: truncated file");
  for (std::uint64_t i = 0; i < rows; ++i) {
    GenerationStats s;
    s.generation = r.u64();
    s.best = r.f64();
    s.mean = r.f64();
    s.median = r.f64();
    s.elapsed = r.f64();
    ck.history.push_back(s);
  }
  if (r.pos != body) throw DataError("checkpoint: trailing bytes");
  return ck;
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  const auto bytes = encode_checkpoint(ck);
  // Written beside the target and renamed into place.
  const std::string tmp = path + ".tmp";
  if (const auto dir = std::filesystem::path(path).parent_path(); !dir.empty()) {
    std::filesystem::create_directories(dir);
  }
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write checkpoint " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed writing checkpoint " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace mmsim

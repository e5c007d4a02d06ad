#include "aegan/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "aegan/errors.hpp"

namespace aegan {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little endian");

namespace {

constexpr char kMagic[8] = {'A', 'E', 'G', 'A', 'N', 'C', 'K', 'P'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void pod(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void str(const std::string& s) {
    pod(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void params(const ParameterSet& p) {
    pod(p.initialization_seed);
    pod(static_cast<std::uint32_t>(p.tensors.size()));
    for (const auto& t : p.tensors) {
      str(t.name);
      pod(static_cast<std::uint32_t>(t.value.rank()));
      for (std::size_t d : t.value.shape()) pod(static_cast<std::uint64_t>(d));
      out_.write(reinterpret_cast<const char*>(t.value.data()),
                 static_cast<std::streamsize>(t.value.size() * sizeof(double)));
    }
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  template <typename T>
  T pod() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) fail("truncated file");
    return v;
  }
  std::string str() {
    const auto n = pod<std::uint32_t>();
    if (n > (1u << 26)) fail("string length out of range");
    std::string s(n, '\0');
    in_.read(s.data(), n);
    if (!in_) fail("truncated file");
    return s;
  }
  ParameterSet params() {
    ParameterSet p;
    p.initialization_seed = pod<std::uint64_t>();
    const auto count = pod<std::uint32_t>();
    for (std::uint32_t i = 0; i < count; ++i) {
      std::string name = str();
      const auto rank = pod<std::uint32_t>();
      if (rank > 8) fail("tensor rank out of range");
      Shape shape;
      for (std::uint32_t d = 0; d < rank; ++d) shape.push_back(static_cast<std::size_t>(pod<std::uint64_t>()));
      if (element_count(shape) > (std::size_t{1} << 30)) fail("tensor too large");
      Tensor t(shape);
      in_.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
      if (!in_) fail("truncated file");
      p.tensors.push_back({std::move(name), std::move(t)});
    }
    return p;
  }
  [[noreturn]] void fail(const std::string& why) {
    throw DataError("malformed checkpoint " + path_ + ": " + why);
  }

 private:
  std::istream& in_;
  std::string path_;
};

}  // namespace

void save_checkpoint(const TrainingState& state, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write checkpoint " + tmp.string());
    Writer w(out);
    out.write(kMagic, sizeof(kMagic));
    w.pod(kCheckpointVersion);
    w.pod(config_hash(state.config));
    w.pod(state.step);
    w.str(to_config_text(state.config));
    std::ostringstream rng;
    rng << state.rng;
    w.str(rng.str());

    std::uint32_t active = 0;
    for (NetworkRole role : kAllRoles) active += state.optimizer(role).has_value() ? 1 : 0;
    w.pod(active);
    for (NetworkRole role : kAllRoles) {
      const auto& opt = state.optimizer(role);
      if (!opt) continue;
      w.pod(static_cast<std::uint8_t>(role));
      w.params(state.model.get(role).parameters());
      w.pod(opt->steps_taken());
      w.pod(static_cast<std::uint32_t>(opt->slots().size()));
      for (const auto& slot : opt->slots()) w.params(slot);
    }
    if (!out) throw DataError("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

TrainingState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read checkpoint " + path.string());
  Reader r(in, path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0) r.fail("bad magic");
  const auto version = r.pod<std::uint32_t>();
  if (version != kCheckpointVersion) r.fail("unsupported version " + std::to_string(version));
  const auto hash = r.pod<std::uint64_t>();
  const auto step = r.pod<std::uint64_t>();
  RunConfig config;
  try {
    config = parse_config(r.str());
  } catch (const ConfigError& e) {
    r.fail(std::string("embedded config: ") + e.what());
  }
  if (config_hash(config) != hash) r.fail("config hash mismatch");

  TrainingState state = initialize_training(config);
  state.step = step;
  std::istringstream rng(r.str());
  rng >> state.rng;
  if (!rng) r.fail("bad rng state");

  const auto count = r.pod<std::uint32_t>();
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto role_byte = r.pod<std::uint8_t>();
    if (role_byte > 3) r.fail("bad network role");
    const auto role = static_cast<NetworkRole>(role_byte);
    ParameterSet params = r.params();
    Network& net = state.model.get(role);
    try {
      net = Network(net.spec(), std::move(params));
    } catch (const ShapeError& e) {
      r.fail(e.what());
    }
    const auto opt_steps = r.pod<std::uint64_t>();
    const auto slots = r.pod<std::uint32_t>();
    std::vector<ParameterSet> slot_values;
    for (std::uint32_t s = 0; s < slots; ++s) slot_values.push_back(r.params());
    auto& opt = state.optimizer(role);
    if (!opt) r.fail("network " + std::string(to_string(role)) + " is inactive in this mode");
    try {
      opt->restore(opt_steps, std::move(slot_values));
    } catch (const ShapeError& e) {
      r.fail(e.what());
    }
  }
  return state;
}

}  // namespace aegan

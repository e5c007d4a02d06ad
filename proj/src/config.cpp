#include "aegan/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "aegan/errors.hpp"

namespace aegan {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && line[i] == '#') return line.substr(0, i);
  }
  return line;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string unquote(std::string_view key, std::string_view raw) {
  raw = trim(raw);
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    return std::string(raw.substr(1, raw.size() - 2));
  }
  if (raw.find_first_of("\"[]") != std::string_view::npos) {
    throw ConfigError(std::string(key) + ": malformed string value '" + std::string(raw) + "'");
  }
  return std::string(raw);
}

double to_double(std::string_view key, std::string_view raw) {
  raw = trim(raw);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc() || ptr != raw.data() + raw.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(raw) + "'");
  }
  return v;
}

std::uint64_t to_uint(std::string_view key, std::string_view raw) {
  raw = trim(raw);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc() || ptr != raw.data() + raw.size()) {
    throw ConfigError(std::string(key) + ": expected a nonnegative integer, got '" +
                      std::string(raw) + "'");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view raw) {
  raw = trim(raw);
  if (raw == "true") return true;
  if (raw == "false") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(raw) + "'");
}

std::vector<std::size_t> to_width_list(std::string_view key, std::string_view raw) {
  raw = trim(raw);
  if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') {
    throw ConfigError(std::string(key) + ": expected a list like [64, 64], got '" +
                      std::string(raw) + "'");
  }
  std::vector<std::size_t> out;
  std::string_view body = trim(raw.substr(1, raw.size() - 2));
  while (!body.empty()) {
    const auto comma = body.find(',');
    out.push_back(static_cast<std::size_t>(to_uint(key, body.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    body = trim(body.substr(comma + 1));
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ptr);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::string fmt_string(std::string_view s) { return "\"" + std::string(s) + "\""; }

std::string fmt_list(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

struct Binding {
  std::string_view section;
  std::string_view key;
  bool trajectory;  // participates in config_hash
  std::function<void(RunConfig&, std::string_view name, std::string_view raw)> set;
  std::function<std::string(const RunConfig&)> get;

  std::string dotted() const { return std::string(section) + "." + std::string(key); }
};

template <typename Member>
Binding number_binding(std::string_view section, std::string_view key, bool trajectory,
                       Member member) {
  return {section, key, trajectory,
          [member](RunConfig& c, std::string_view name, std::string_view raw) {
            auto& field = member(c);
            using T = std::remove_reference_t<decltype(field)>;
            if constexpr (std::is_floating_point_v<T>) {
              field = to_double(name, raw);
            } else {
              field = static_cast<T>(to_uint(name, raw));
            }
          },
          [member](const RunConfig& c) {
            auto& field = member(const_cast<RunConfig&>(c));
            using T = std::remove_reference_t<decltype(field)>;
            if constexpr (std::is_floating_point_v<T>) {
              return fmt_double(field);
            } else {
              return std::to_string(field);
            }
          }};
}

template <typename Member>
Binding widths_binding(std::string_view section, std::string_view key, Member member) {
  return {section, key, true,
          [member](RunConfig& c, std::string_view name, std::string_view raw) {
            member(c) = to_width_list(name, raw);
          },
          [member](const RunConfig& c) { return fmt_list(member(const_cast<RunConfig&>(c))); }};
}

template <typename Member, typename Parse>
Binding enum_binding(std::string_view section, std::string_view key, Member member, Parse parse) {
  return {section, key, true,
          [member, parse](RunConfig& c, std::string_view name, std::string_view raw) {
            member(c) = parse(unquote(name, raw));
          },
          [member](const RunConfig& c) {
            return fmt_string(to_string(member(const_cast<RunConfig&>(c))));
          }};
}

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = [] {
    std::vector<Binding> b;
    // [model]
    b.push_back(enum_binding("model", "family", [](RunConfig& c) -> auto& { return c.model.family; },
                             parse_architecture_family));
    b.push_back(number_binding("model", "latent_dim", true,
                               [](RunConfig& c) -> auto& { return c.model.latent_dim; }));
    b.push_back(widths_binding("model", "generator_widths",
                               [](RunConfig& c) -> auto& { return c.model.generator_widths; }));
    b.push_back(widths_binding("model", "encoder_widths",
                               [](RunConfig& c) -> auto& { return c.model.encoder_widths; }));
    b.push_back(widths_binding("model", "sample_discriminator_widths", [](RunConfig& c) -> auto& {
      return c.model.sample_discriminator_widths;
    }));
    b.push_back(widths_binding("model", "latent_discriminator_widths", [](RunConfig& c) -> auto& {
      return c.model.latent_discriminator_widths;
    }));
    b.push_back(number_binding("model", "leaky_slope", true,
                               [](RunConfig& c) -> auto& { return c.model.leaky_slope; }));
    // [training]
    b.push_back(enum_binding("training", "mode", [](RunConfig& c) -> auto& { return c.training.mode; },
                             parse_training_mode));
    b.push_back(number_binding("training", "batch_size", true,
                               [](RunConfig& c) -> auto& { return c.training.batch_size; }));
    b.push_back(number_binding("training", "total_steps", false,
                               [](RunConfig& c) -> auto& { return c.training.total_steps; }));
    b.push_back(number_binding("training", "lambda_rx", true, [](RunConfig& c) -> auto& {
      return c.training.recon_weights.lambda_rx;
    }));
    b.push_back(number_binding("training", "lambda_rz", true, [](RunConfig& c) -> auto& {
      return c.training.recon_weights.lambda_rz;
    }));
    b.push_back(enum_binding("training", "latent_norm",
                             [](RunConfig& c) -> auto& { return c.training.latent_norm; },
                             parse_latent_norm));
    b.push_back(number_binding("training", "learning_rate_g_e", true,
                               [](RunConfig& c) -> auto& { return c.training.learning_rate_g_e; }));
    b.push_back(number_binding("training", "learning_rate_d", true,
                               [](RunConfig& c) -> auto& { return c.training.learning_rate_d; }));
    b.push_back(enum_binding("training", "optimizer",
                             [](RunConfig& c) -> auto& { return c.training.optimizer; },
                             parse_optimizer_kind));
    b.push_back(number_binding("training", "beta1", true,
                               [](RunConfig& c) -> auto& { return c.training.beta1; }));
    b.push_back(number_binding("training", "beta2", true,
                               [](RunConfig& c) -> auto& { return c.training.beta2; }));
    b.push_back(number_binding("training", "momentum", true,
                               [](RunConfig& c) -> auto& { return c.training.momentum; }));
    b.push_back(enum_binding("training", "generator_loss",
                             [](RunConfig& c) -> auto& { return c.training.generator_loss_variant; },
                             parse_generator_loss_variant));
    b.push_back(number_binding("training", "discriminator_steps", true,
                               [](RunConfig& c) -> auto& { return c.training.discriminator_steps; }));
    b.push_back(number_binding("training", "seed", true,
                               [](RunConfig& c) -> auto& { return c.training.seed; }));
    b.push_back(number_binding("training", "checkpoint_every", false,
                               [](RunConfig& c) -> auto& { return c.training.checkpoint_every; }));
    b.push_back(number_binding("training", "log_every", false,
                               [](RunConfig& c) -> auto& { return c.training.log_every; }));
    // [data]
    b.push_back(enum_binding("data", "source", [](RunConfig& c) -> auto& { return c.data.source; },
                             parse_data_source));
    b.push_back(number_binding("data", "n_modes", true,
                               [](RunConfig& c) -> auto& { return c.data.mixture.n_modes; }));
    b.push_back(number_binding("data", "radius", true,
                               [](RunConfig& c) -> auto& { return c.data.mixture.radius; }));
    b.push_back(number_binding("data", "mode_std", true,
                               [](RunConfig& c) -> auto& { return c.data.mixture.mode_std; }));
    b.push_back(number_binding("data", "samples_per_mode", true,
                               [](RunConfig& c) -> auto& { return c.data.mixture.samples_per_mode; }));
    b.push_back(number_binding("data", "seed", true, [](RunConfig& c) -> auto& { return c.data.seed; }));
    b.push_back({"data", "image_dir", true,
                 [](RunConfig& c, std::string_view name, std::string_view raw) {
                   c.data.image_dir = unquote(name, raw);
                 },
                 [](const RunConfig& c) { return fmt_string(c.data.image_dir.string()); }});
    b.push_back(number_binding("data", "height", true,
                               [](RunConfig& c) -> auto& { return c.data.resolution.height; }));
    b.push_back(number_binding("data", "width", true,
                               [](RunConfig& c) -> auto& { return c.data.resolution.width; }));
    b.push_back({"data", "mirror", true,
                 [](RunConfig& c, std::string_view name, std::string_view raw) {
                   c.data.mirror = to_bool(name, raw);
                 },
                 [](const RunConfig& c) { return std::string(c.data.mirror ? "true" : "false"); }});
    return b;
  }();
  return table;
}

const Binding& find_binding(std::string_view dotted) {
  const auto& table = bindings();
  for (const auto& b : table) {
    if (b.dotted() == dotted) return b;
  }
  const Binding* best = &table.front();
  std::size_t best_distance = SIZE_MAX;
  for (const auto& b : table) {
    const std::size_t d = edit_distance(dotted, b.dotted());
    if (d < best_distance) {
      best_distance = d;
      best = &b;
    }
  }
  throw ConfigError("unknown config key '" + std::string(dotted) + "'; did you mean '" +
                    best->dotted() + "'?");
}

}  // namespace

std::string_view to_string(TrainingMode mode) {
  switch (mode) {
    case TrainingMode::aegan: return "aegan";
    case TrainingMode::gan: return "gan";
    case TrainingMode::aae: return "aae";
  }
  return "?";
}

std::string_view to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::sgd: return "sgd";
    case OptimizerKind::momentum: return "momentum";
    case OptimizerKind::adaptive_moment: return "adaptive_moment";
  }
  return "?";
}

std::string_view to_string(DataSource source) {
  return source == DataSource::mixture ? "mixture" : "images";
}

TrainingMode parse_training_mode(std::string_view text) {
  for (auto m : {TrainingMode::aegan, TrainingMode::gan, TrainingMode::aae}) {
    if (to_string(m) == text) return m;
  }
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected aegan, gan or aae)");
}

OptimizerKind parse_optimizer_kind(std::string_view text) {
  for (auto k : {OptimizerKind::sgd, OptimizerKind::momentum, OptimizerKind::adaptive_moment}) {
    if (to_string(k) == text) return k;
  }
  throw ConfigError("unknown optimizer '" + std::string(text) + "'");
}

DataSource parse_data_source(std::string_view text) {
  if (text == "mixture") return DataSource::mixture;
  if (text == "images") return DataSource::images;
  throw ConfigError("unknown data source '" + std::string(text) + "'");
}

void validate(const RunConfig& c) {
  const auto& t = c.training;
  if (c.model.latent_dim == 0) throw ConfigError("model.latent_dim must be positive");
  if (t.batch_size == 0) throw ConfigError("training.batch_size must be positive");
  validate(t.recon_weights);
  if (!(t.learning_rate_g_e > 0.0)) throw ConfigError("training.learning_rate_g_e must be positive");
  if (!(t.learning_rate_d > 0.0)) throw ConfigError("training.learning_rate_d must be positive");
  if (!(t.beta1 >= 0.0 && t.beta1 < 1.0)) throw ConfigError("training.beta1 must lie in [0, 1)");
  if (!(t.beta2 >= 0.0 && t.beta2 < 1.0)) throw ConfigError("training.beta2 must lie in [0, 1)");
  if (!(t.momentum >= 0.0 && t.momentum < 1.0)) throw ConfigError("training.momentum must lie in [0, 1)");
  if (t.discriminator_steps == 0) throw ConfigError("training.discriminator_steps must be positive");
  if (t.checkpoint_every == 0) throw ConfigError("training.checkpoint_every must be positive");
  if (t.log_every == 0) throw ConfigError("training.log_every must be positive");
  if (c.data.source == DataSource::mixture) {
    validate(c.data.mixture);
    if (c.model.family != ArchitectureFamily::dense) {
      throw ConfigError("model.family must be dense for 2D mixture data");
    }
  } else {
    if (c.data.resolution.height == 0 || c.data.resolution.width == 0) {
      throw ConfigError("data.height and data.width must be positive");
    }
    if (c.model.family != ArchitectureFamily::convolutional) {
      throw ConfigError("model.family must be convolutional for image data");
    }
  }
  for (auto role : {NetworkRole::generator, NetworkRole::encoder, NetworkRole::sample_discriminator,
                    NetworkRole::latent_discriminator}) {
    validate(network_spec(c, role));
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw_line;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string_view line = trim(strip_comment(raw_line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "model" && section != "training" && section != "data" && section != "run") {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section +
                          "] (expected model, training or data)");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    if (section == "run") continue;
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key outside of a section");
    }
    const std::string dotted = section + "." + std::string(trim(line.substr(0, eq)));
    const Binding& b = find_binding(dotted);
    b.set(config, dotted, trim(line.substr(eq + 1)));
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_override(RunConfig& config, std::string_view dotted_key, std::string_view value) {
  const Binding& b = find_binding(dotted_key);
  b.set(config, dotted_key, value);
}

std::string to_config_text(const RunConfig& config) {
  std::string out;
  std::string_view section;
  for (const auto& b : bindings()) {
    if (b.section != section) {
      if (!out.empty()) out += '\n';
      out += "[" + std::string(b.section) + "]\n";
      section = b.section;
    }
    out += std::string(b.key) + " = " + b.get(config) + "\n";
  }
  return out;
}

std::uint64_t config_hash(const RunConfig& config) {
  std::string text;
  for (const auto& b : bindings()) {
    if (b.trajectory) text += b.dotted() + "=" + b.get(config) + "\n";
  }
  return fnv1a(std::as_bytes(std::span(text.data(), text.size())));
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& b : bindings()) keys.push_back(b.dotted());
  return keys;
}

Shape sample_shape(const DataConfig& data) {
  if (data.source == DataSource::mixture) return {2};
  return {data.resolution.height, data.resolution.width, 3};
}

ValueRange value_range(const DataConfig& data) {
  if (data.source == DataSource::mixture) return mixture_value_range(data.mixture);
  return {-1.0, 1.0};
}

NetworkSpec network_spec(const RunConfig& config, NetworkRole role) {
  const ModelConfig& m = config.model;
  const Shape sample = sample_shape(config.data);
  const std::size_t sample_dim = element_count(sample);

  NetworkSpec spec;
  spec.role = role;
  spec.output_activation = required_output_activation(role);
  spec.leaky_slope = m.leaky_slope;
  spec.latent_dim = m.latent_dim;

  auto dense_chain = [](std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out) {
    std::vector<std::size_t> widths{in};
    widths.insert(widths.end(), hidden.begin(), hidden.end());
    widths.push_back(out);
    return widths;
  };

  if (role == NetworkRole::latent_discriminator) {
    spec.family = ArchitectureFamily::dense;
    spec.layer_widths = dense_chain(m.latent_dim, m.latent_discriminator_widths, 1);
    return spec;
  }

  spec.family = m.family;
  if (role == NetworkRole::generator) spec.output_scale = value_range(config.data).half_width();

  const std::vector<std::size_t>& hidden = role == NetworkRole::generator ? m.generator_widths
                                           : role == NetworkRole::encoder ? m.encoder_widths
                                                                          : m.sample_discriminator_widths;
  if (m.family == ArchitectureFamily::convolutional) {
    spec.layer_widths = hidden;
    if (sample.size() == 3) spec.image = {sample[0], sample[1], sample[2]};
    return spec;
  }
  switch (role) {
    case NetworkRole::generator:
      spec.layer_widths = dense_chain(m.latent_dim, hidden, sample_dim);
      break;
    case NetworkRole::encoder:
      spec.layer_widths = dense_chain(sample_dim, hidden, m.latent_dim);
      break;
    default:
      spec.layer_widths = dense_chain(sample_dim, hidden, 1);
      break;
  }
  return spec;
}

}  // namespace aegan

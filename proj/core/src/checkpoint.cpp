// Copyright 2026 The bitbit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bitbit/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>
#include <type_traits>

namespace bitbit {

namespace {

constexpr std::string_view kMagic = "bitbit-checkpoint";

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void scalar(std::string_view key, T v) {
    out_ << key << ' ' << format(v) << '\n';
  }

  template <typename T>
  void list(std::string_view key, const std::vector<T>& values) {
    out_ << key << ' ' << values.size();
    for (const T& v : values) {
      out_ << ' ' << format(v);
    }
    out_ << '\n';
  }

  void raw(std::string_view line) { out_ << line << '\n'; }

  template <typename T>
  static std::string format(T v) {
    if constexpr (std::is_floating_point_v<T>) {
      return real(v);
    } else if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else {
      return std::to_string(v);
    }
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Tokens of the next line after checking its leading key.
  std::vector<std::string_view> expect(std::string_view key) {
    next();
    if (tokens_.empty() || tokens_[0] != key) {
      fail("expected '" + std::string(key) + "', found '" +
           (tokens_.empty() ? std::string() : std::string(tokens_[0])) + "'");
    }
    return {tokens_.begin() + 1, tokens_.end()};
  }

  /// Tokens of the next line, no key.
  std::vector<std::string_view> bare() {
    next();
    return tokens_;
  }

  template <typename T>
  T scalar(std::string_view key) {
    const auto t = expect(key);
    if (t.size() != 1) {
      fail("'" + std::string(key) + "' takes one value");
    }
    return parse<T>(t[0]);
  }

  template <typename T>
  std::vector<T> list(std::string_view key) {
    const auto t = expect(key);
    if (t.empty()) {
      fail("'" + std::string(key) + "' is missing its count");
    }
    const auto n = parse<std::size_t>(t[0]);
    if (t.size() != n + 1) {
      fail("'" + std::string(key) + "' declares " + std::to_string(n) + " values, has " +
           std::to_string(t.size() - 1));
    }
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 1; i < t.size(); ++i) {
      out.push_back(parse<T>(t[i]));
    }
    return out;
  }

  template <typename T>
  T parse(std::string_view token) {
    T v{};
    const char* first = token.data();
    const char* last = token.data() + token.size();
    std::from_chars_result r{};
    if constexpr (std::is_floating_point_v<T>) {
      r = std::from_chars(first, last, v, std::chars_format::general);
    } else {
      r = std::from_chars(first, last, v);
    }
    if (r.ec != std::errc() || r.ptr != last) {
      fail("cannot parse '" + std::string(token) + "'");
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& what,
                         CheckpointError::Kind kind = CheckpointError::Kind::Schema) const {
    throw CheckpointError(kind, line_no_, what);
  }

  std::size_t line_number() const { return line_no_; }

 private:
  void next() {
    if (!std::getline(in_, line_)) {
      ++line_no_;
      fail("unexpected end of file");
    }
    ++line_no_;
    tokens_.clear();
    std::string_view rest(line_);
    while (!rest.empty()) {
      const auto start = rest.find_first_not_of(' ');
      if (start == std::string_view::npos) {
        break;
      }
      rest.remove_prefix(start);
      const auto end = rest.find(' ');
      tokens_.push_back(rest.substr(0, end));
      rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
    }
  }

  std::istream& in_;
  std::string line_;
  std::vector<std::string_view> tokens_;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string to_string(EvalMode mode) { return mode == EvalMode::Exact ? "exact" : "sampled"; }

std::string to_string(ShotBudget budget) {
  return budget == ShotBudget::PerSample ? "per-sample" : "per-batch";
}

EvalMode parse_eval_mode(const std::string& text) {
  if (text == "exact") return EvalMode::Exact;
  if (text == "sampled") return EvalMode::Sampled;
  throw std::invalid_argument("unknown evaluation mode '" + text + "'");
}

ShotBudget parse_shot_budget(const std::string& text) {
  if (text == "per-sample") return ShotBudget::PerSample;
  if (text == "per-batch") return ShotBudget::PerBatch;
  throw std::invalid_argument("unknown shot budget '" + text + "'");
}

void write_checkpoint(std::ostream& out, const Checkpoint& c) {
  if (c.params.size() != c.topology.parameter_count()) {
    throw CheckpointError(CheckpointError::Kind::ParamLength, 0,
                          "parameter vector does not match topology");
  }
  Writer w(out);
  w.raw(kMagic);
  w.scalar("format_version", kCheckpointFormatVersion);
  w.scalar("n_y", c.n_y);
  w.list("class_labels", c.class_labels);
  w.scalar("seeds", c.seeds.size());
  for (const auto& [name, value] : c.seeds) {
    w.raw("seed " + name + " " + std::to_string(value));
  }

  const PcaModel& pca = c.encoder.pca;
  w.scalar("encoder.n_bins", c.encoder.n_bins);
  w.list("encoder.mean", pca.mean);
  w.raw("encoder.components " + std::to_string(pca.components.rows()) + " " +
        std::to_string(pca.components.cols()));
  for (std::size_t r = 0; r < pca.components.rows(); ++r) {
    const auto row = pca.components.row(r);
    w.list("row", std::vector<double>(row.begin(), row.end()));
  }
  w.list("encoder.explained_variance", pca.explained_variance);
  w.list("encoder.min", pca.min);
  w.list("encoder.max", pca.max);
  w.list("encoder.scores", c.encoder.scores);
  w.list("allocation.bits", c.allocation.bits);
  w.list("allocation.grant_order", c.allocation.grant_order);

  w.scalar("topology.n_x", c.topology.n_x());
  w.scalar("topology.n_y", c.topology.n_y());
  w.list("topology.layer_sizes", c.topology.layer_sizes());
  w.scalar("topology.nodes", c.topology.nodes().size());
  for (const Node& n : c.topology.nodes()) {
    w.raw("node " + std::to_string(n.layer) + " " + std::to_string(n.qubit_a) + " " +
          std::to_string(n.qubit_b));
  }
  w.list("params", c.params.values);

  const TrainConfig& cfg = c.config;
  w.scalar("config.batch_size", cfg.batch_size);
  w.scalar("config.ks_threshold", cfg.ks_threshold);
  w.scalar("config.initial_shots", cfg.initial_shots);
  w.scalar("config.shots_increment", cfg.shots_increment);
  w.scalar("config.sweeps_per_size", cfg.sweeps_per_size);
  w.scalar("config.mode", to_string(cfg.mode));
  w.scalar("config.budget", to_string(cfg.budget));
  w.scalar("config.shuffle_order", cfg.shuffle_order ? 1 : 0);
  w.scalar("config.seed", cfg.seed);
  w.scalar("config.threads", cfg.threads);
  w.scalar("config.test_every", cfg.test_every);

  w.scalar("history", c.history.size());
  for (const HistoryEntry& h : c.history) {
    w.raw("row " + std::to_string(h.update) + " " + std::to_string(h.n_qubits) + " " +
          std::to_string(h.coordinate) + " " + real(h.batch_loss) + " " + real(h.test_loss) +
          " " + real(h.test_accuracy) + " " + std::to_string(h.shots) + " " +
          std::to_string(h.batch_size) + " " + real(h.amplitude));
  }
  w.raw("end");
}

Checkpoint read_checkpoint(std::istream& in) {
  Reader r(in);
  const auto magic = r.bare();
  if (magic.size() != 1 || magic[0] != kMagic) {
    r.fail("not a bitbit checkpoint");
  }
  const int version = r.scalar<int>("format_version");
  if (version != kCheckpointFormatVersion) {
    r.fail("format version " + std::to_string(version) + " is not supported (expected " +
               std::to_string(kCheckpointFormatVersion) + ")",
           CheckpointError::Kind::VersionMismatch);
  }

  Checkpoint c;
  c.n_y = r.scalar<std::size_t>("n_y");
  c.class_labels = r.list<int>("class_labels");
  const auto n_seeds = r.scalar<std::size_t>("seeds");
  for (std::size_t i = 0; i < n_seeds; ++i) {
    const auto t = r.expect("seed");
    if (t.size() != 2) {
      r.fail("seed lines are 'seed <name> <value>'");
    }
    c.seeds[std::string(t[0])] = r.parse<std::uint64_t>(t[1]);
  }

  PcaModel& pca = c.encoder.pca;
  c.encoder.n_bins = r.scalar<std::size_t>("encoder.n_bins");
  pca.mean = r.list<double>("encoder.mean");
  const auto shape = r.expect("encoder.components");
  if (shape.size() != 2) {
    r.fail("'encoder.components' takes rows and cols");
  }
  const auto rows = r.parse<std::size_t>(shape[0]);
  const auto cols = r.parse<std::size_t>(shape[1]);
  if (cols != pca.mean.size()) {
    r.fail("component width does not match the mean");
  }
  pca.components = Matrix(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto row = r.list<double>("row");
    if (row.size() != cols) {
      r.fail("component row has the wrong width");
    }
    std::copy(row.begin(), row.end(), pca.components.row(i).begin());
  }
  pca.explained_variance = r.list<double>("encoder.explained_variance");
  pca.min = r.list<double>("encoder.min");
  pca.max = r.list<double>("encoder.max");
  c.encoder.scores = r.list<double>("encoder.scores");
  if (pca.explained_variance.size() != rows || pca.min.size() != rows ||
      pca.max.size() != rows || c.encoder.scores.size() != rows) {
    r.fail("encoder vectors do not match the number of components");
  }
  c.allocation.bits = r.list<std::size_t>("allocation.bits");
  c.allocation.grant_order = r.list<std::size_t>("allocation.grant_order");
  if (c.allocation.bits.size() != rows) {
    r.fail("allocation does not match the number of components");
  }
  std::vector<std::size_t> counted(rows, 0);
  for (std::size_t g : c.allocation.grant_order) {
    if (g >= rows) {
      r.fail("grant order names a missing dimension");
    }
    ++counted[g];
  }
  if (counted != c.allocation.bits) {
    r.fail("grant order does not add up to the bit allocation");
  }

  const auto n_x = r.scalar<std::size_t>("topology.n_x");
  const auto topo_n_y = r.scalar<std::size_t>("topology.n_y");
  if (topo_n_y != c.n_y || n_x != c.allocation.total()) {
    r.fail("topology does not match the encoding");
  }
  const auto layer_sizes = r.list<std::size_t>("topology.layer_sizes");
  const auto n_nodes = r.scalar<std::size_t>("topology.nodes");
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const auto t = r.expect("node");
    if (t.size() != 3) {
      r.fail("node lines are 'node <layer> <a> <b>'");
    }
    nodes.push_back({r.parse<std::size_t>(t[0]), r.parse<std::size_t>(t[1]),
                     r.parse<std::size_t>(t[2])});
  }
  try {
    c.topology = build_topology(n_x, c.n_y);
  } catch (const std::exception& e) {
    r.fail(std::string("invalid topology: ") + e.what());
  }
  if (c.topology.layer_sizes() != layer_sizes || c.topology.nodes() != nodes) {
    r.fail("stored topology differs from the net built for these sizes");
  }

  c.params.values = r.list<double>("params");
  if (c.params.size() != c.topology.parameter_count()) {
    r.fail("parameter vector has " + std::to_string(c.params.size()) + " entries, topology has " +
               std::to_string(c.topology.parameter_count()),
           CheckpointError::Kind::ParamLength);
  }

  TrainConfig& cfg = c.config;
  cfg.batch_size = r.scalar<std::size_t>("config.batch_size");
  cfg.ks_threshold = r.scalar<double>("config.ks_threshold");
  cfg.initial_shots = r.scalar<std::uint64_t>("config.initial_shots");
  cfg.shots_increment = r.scalar<std::uint64_t>("config.shots_increment");
  cfg.sweeps_per_size = r.scalar<std::size_t>("config.sweeps_per_size");
  try {
    cfg.mode = parse_eval_mode(std::string(r.expect("config.mode").at(0)));
    cfg.budget = parse_shot_budget(std::string(r.expect("config.budget").at(0)));
  } catch (const std::out_of_range&) {
    r.fail("missing config value");
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  const int shuffle = r.scalar<int>("config.shuffle_order");
  if (shuffle != 0 && shuffle != 1) {
    r.fail("config.shuffle_order must be 0 or 1");
  }
  cfg.shuffle_order = shuffle == 1;
  cfg.seed = r.scalar<std::uint64_t>("config.seed");
  cfg.threads = r.scalar<std::size_t>("config.threads");
  cfg.test_every = r.scalar<std::size_t>("config.test_every");

  const auto n_history = r.scalar<std::size_t>("history");
  c.history.reserve(n_history);
  for (std::size_t i = 0; i < n_history; ++i) {
    const auto t = r.expect("row");
    if (t.size() != 9) {
      r.fail("history rows have 9 fields");
    }
    HistoryEntry h;
    h.update = r.parse<std::size_t>(t[0]);
    h.n_qubits = r.parse<std::size_t>(t[1]);
    h.coordinate = r.parse<long>(t[2]);
    h.batch_loss = r.parse<double>(t[3]);
    h.test_loss = r.parse<double>(t[4]);
    h.test_accuracy = r.parse<double>(t[5]);
    h.shots = r.parse<std::uint64_t>(t[6]);
    h.batch_size = r.parse<std::size_t>(t[7]);
    h.amplitude = r.parse<double>(t[8]);
    c.history.push_back(h);
  }
  const auto end = r.bare();
  if (end.size() != 1 || end[0] != "end") {
    r.fail("expected 'end'");
  }
  std::string trailing;
  if (in >> trailing) {
    r.fail("trailing content after 'end'");
  }
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ostringstream buffer;
  write_checkpoint(buffer, checkpoint);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw CheckpointError(CheckpointError::Kind::Io, 0, "cannot write " + path.string());
  }
  out << buffer.str();
  if (!out) {
    throw CheckpointError(CheckpointError::Kind::Io, 0, "write failed for " + path.string());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CheckpointError(CheckpointError::Kind::Io, 0, "cannot open " + path.string());
  }
  return read_checkpoint(in);
}

}  // namespace bitbit

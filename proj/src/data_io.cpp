#include "cns/data_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <string>
#include <string_view>

#include "cns/errors.hpp"

namespace cns {

std::vector<std::size_t> sample_minibatch(std::size_t n, std::size_t b, Rng& rng) {
  std::vector<std::size_t> out(b);
  sample_minibatch_into(n, out, rng);
  return out;
}

void sample_minibatch_into(std::size_t n, std::vector<std::size_t>& out, Rng& rng) {
  detail::require(!out.empty() && out.size() <= n, "mini-batch size must lie in [1, n]");
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (auto& i : out) i = pick(rng);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) noexcept {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size();
}

using LineSource = std::function<bool(std::string&)>;

LibsvmData parse_lines(const LineSource& next, const LibsvmOptions& opts) {
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::vector<double> labels;
  std::vector<std::size_t> line_of_row;
  std::size_t dim_seen = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (next(raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::size_t pos = 0;
    auto next_token = [&]() -> std::string_view {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      const auto start = pos;
      while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
      return line.substr(start, pos - start);
    };

    double label = 0.0;
    const auto label_tok = next_token();
    if (!parse_double(label_tok, label))
      throw ParseError("malformed label '" + std::string(label_tok) + "'", line_no);

    std::uint64_t prev = 0;
    for (auto tok = next_token(); !tok.empty(); tok = next_token()) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw ParseError("expected idx:val, got '" + std::string(tok) + "'", line_no);
      std::uint64_t idx = 0;
      const auto idx_tok = tok.substr(0, colon);
      const auto [p, ec] = std::from_chars(idx_tok.data(), idx_tok.data() + idx_tok.size(), idx);
      if (ec != std::errc() || p != idx_tok.data() + idx_tok.size() || idx == 0 ||
          idx > std::numeric_limits<std::uint32_t>::max())
        throw ParseError("invalid feature index '" + std::string(idx_tok) + "'", line_no);
      if (idx <= prev) throw ParseError("feature indices must be strictly ascending", line_no);
      prev = idx;
      double val = 0.0;
      if (!parse_double(tok.substr(colon + 1), val))
        throw ParseError("invalid feature value in '" + std::string(tok) + "'", line_no);
      indices.push_back(static_cast<std::uint32_t>(idx - 1));
      values.push_back(val);
      dim_seen = std::max<std::size_t>(dim_seen, idx);
    }
    row_ptr.push_back(indices.size());
    labels.push_back(label);
    line_of_row.push_back(line_no);
  }
  if (labels.empty()) throw ParseError("no samples found", line_no);
  if (opts.dim != 0 && opts.dim < dim_seen)
    throw ParseError("dimension override " + std::to_string(opts.dim) +
                         " is smaller than the largest index " + std::to_string(dim_seen),
                     line_no);

  bool remapped = false;
  if (opts.task == Task::Classification) {
    const bool binary01 = std::all_of(labels.begin(), labels.end(),
                                      [](double y) { return y == 0.0 || y == 1.0; }) &&
                          std::find(labels.begin(), labels.end(), 0.0) != labels.end();
    if (binary01 && opts.map_binary_labels) {
      for (auto& y : labels) y = y == 0.0 ? -1.0 : 1.0;
      remapped = true;
      std::clog << "cns: mapped {0,1} class labels to {-1,+1}\n";
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] != 1.0 && labels[i] != -1.0)
        throw ParseError("classification label must be +1 or -1", line_of_row[i]);
  }
  const auto dim = opts.dim != 0 ? opts.dim : dim_seen;
  return {SparseDataset(dim, std::move(row_ptr), std::move(indices), std::move(values),
                        std::move(labels), opts.task),
          remapped};
}

void append_number(std::string& out, double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, p);
}

}  // namespace

LibsvmData parse_libsvm(std::istream& in, const LibsvmOptions& opts) {
  return parse_lines([&in](std::string& line) { return static_cast<bool>(std::getline(in, line)); },
                     opts);
}

LibsvmData load_libsvm(const std::filesystem::path& path, const LibsvmOptions& opts) {
  // gzopen reads uncompressed files transparently.
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw std::runtime_error("cannot open " + path.string());
  struct Closer {
    gzFile f;
    ~Closer() { gzclose(f); }
  } closer{f};
  char buf[1 << 16];
  auto next = [&](std::string& line) {
    line.clear();
    while (gzgets(f, buf, sizeof buf) != nullptr) {
      line.append(buf);
      if (!line.empty() && line.back() == '\n') return true;
    }
    return !line.empty();
  };
  return parse_lines(next, opts);
}

void write_libsvm(const SparseDataset& data, std::ostream& out) {
  std::string line;
  for (std::size_t i = 0; i < data.n(); ++i) {
    line.clear();
    if (data.task() == Task::Classification)
      line += data.label(i) > 0 ? "+1" : "-1";
    else
      append_number(line, data.label(i));
    const auto r = data.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) {
      line += ' ';
      line += std::to_string(r.indices[k] + 1);
      line += ':';
      append_number(line, r.values[k]);
    }
    line += '\n';
    out << line;
  }
}

void save_libsvm(const SparseDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_libsvm(data, out);
}

}  // namespace cns

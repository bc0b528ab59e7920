#include "clusmat/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace clusmat::io {

namespace {

constexpr std::array<char, 4> kMagic = {'B', 'M', '0', '1'};

std::size_t parse_count(std::string_view token, const char* what) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    throw ParseError(std::string("invalid ") + what + ": '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> buf{};
  for (std::size_t b = 0; b < 4; ++b) buf[b] = static_cast<char>((v >> (8 * b)) & 0xFFU);
  out.write(buf.data(), buf.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf{};
  for (std::size_t b = 0; b < 8; ++b) buf[b] = static_cast<char>((v >> (8 * b)) & 0xFFU);
  out.write(buf.data(), buf.size());
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> buf{};
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) throw ParseError("truncated binary input");
  std::uint32_t v = 0;
  for (std::size_t b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(buf[b]) << (8 * b);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> buf{};
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) throw ParseError("truncated binary input");
  std::uint64_t v = 0;
  for (std::size_t b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(buf[b]) << (8 * b);
  return v;
}

BitMatrix read_bm(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header line");
  const auto space = line.find(' ');
  if (space == std::string::npos) throw ParseError("header must be 'p q'");
  const std::size_t p = parse_count(std::string_view(line).substr(0, space), "row count");
  const std::size_t q = parse_count(std::string_view(line).substr(space + 1), "column count");
  if (p == 0 || q == 0) throw ParseError("matrix dimensions must be positive");

  BitMatrixBuilder builder(p, q);
  for (std::size_t i = 0; i < p; ++i) {
    if (!std::getline(in, line)) throw ParseError("expected " + std::to_string(p) + " rows, got " + std::to_string(i));
    if (line.size() != q) {
      throw ParseError("row " + std::to_string(i) + " has " + std::to_string(line.size()) + " characters, expected " +
                       std::to_string(q));
    }
    for (std::size_t j = 0; j < q; ++j) {
      const char c = line[j];
      if (c == '1') {
        builder.set(i, j);
      } else if (c != '0') {
        throw ParseError("row " + std::to_string(i) + ": unexpected character '" + std::string(1, c) + "'");
      }
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty()) throw ParseError("trailing data after last row");
  }
  return std::move(builder).build();
}

void write_bm(std::ostream& out, const BitMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  std::string line(m.cols(), '0');
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const BitRow row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) line[j] = row[j] ? '1' : '0';
    out << line << '\n';
  }
}

BitMatrix read_bmb(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw ParseError("bad .bmb magic");
  const std::uint64_t p = get_u64(in);
  const std::uint64_t q = get_u64(in);
  if (p == 0 || q == 0) throw ParseError("matrix dimensions must be positive");
  const std::size_t stride = words_for(q);
  std::vector<Word> words(p * stride);
  for (auto& w : words) w = get_u64(in);
  for (std::size_t i = 0; i < p; ++i) {
    if ((words[i * stride + stride - 1] & ~tail_mask(q)) != 0) throw ParseError("nonzero padding bits in .bmb");
  }
  return BitMatrix::from_words(p, q, std::move(words));
}

void write_bmb(std::ostream& out, const BitMatrix& m) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  for (const Word w : m.words()) put_u64(out, w);
}

BitMatrix load_matrix(const std::filesystem::path& path) {
  const bool binary = path.extension() == ".bmb";
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return binary ? read_bmb(in) : read_bm(in);
}

void save_matrix(const std::filesystem::path& path, const BitMatrix& m) {
  const bool binary = path.extension() == ".bmb";
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (binary) {
    write_bmb(out, m);
  } else {
    write_bm(out, m);
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_csv(std::ostream& out, const IntMatrix& m) {
  std::string line;
  std::array<char, 16> buf{};
  for (std::size_t i = 0; i < m.rows(); ++i) {
    line.clear();
    const auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j != 0) line.push_back(',');
      const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), row[j]);
      line.append(buf.data(), ptr);
    }
    line.push_back('\n');
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

IntMatrix read_csv(std::istream& in) {
  std::vector<std::vector<std::uint32_t>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::uint32_t> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const auto token = std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      row.push_back(static_cast<std::uint32_t>(parse_count(token, "csv entry")));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("ragged csv");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty csv");
  IntMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

std::uint64_t digest(const BitMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (std::size_t b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFFU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(m.rows());
  mix(m.cols());
  for (const Word w : m.words()) mix(w);
  return h;
}

}  // namespace clusmat::io

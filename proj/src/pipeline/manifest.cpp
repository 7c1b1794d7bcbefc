#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "spk/error.hpp"
#include "spk/pipeline.hpp"

namespace spk::pipeline {

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot hash '" + path.string() + "'");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[static_cast<std::size_t>(i)]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void Manifest::add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }

void Manifest::add(std::string key, double value) { add(std::move(key), format_number(value)); }

void Manifest::add_file(const std::filesystem::path& root, const std::filesystem::path& relpath) {
  add("hash." + relpath.generic_string(), file_hash(root / relpath));
}

void Manifest::append(const Manifest& other, const std::string& prefix) {
  for (const auto& [k, v] : other.entries_) {
    if (k.rfind("hash.", 0) == 0) {
      add("hash." + prefix + "/" + k.substr(5), v);
    } else {
      add(prefix + "." + k, v);
    }
  }
}

std::optional<std::string> Manifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::map<std::string, std::string> Manifest::hashes() const {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : entries_) {
    if (k.rfind("hash.", 0) == 0) out[k] = v;
  }
  return out;
}

void Manifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write manifest '" + path.string() + "'");
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
  if (!out) throw Error(ErrorCode::Io, "short write to manifest '" + path.string() + "'");
}

Manifest Manifest::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read manifest '" + path.string() + "'");
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    m.add(line.substr(0, eq), line.substr(eq + 3));
  }
  return m;
}

}  // namespace spk::pipeline

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "topochain/errors.hpp"

namespace topochain {

/// Fixed numeric formatting for every emitted file: 17 significant digits,
/// '.' decimal, no locale dependence. Identical inputs give identical bytes.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string format_number(int x) { return std::to_string(x); }
inline std::string format_number(std::size_t x) { return std::to_string(x); }

/// Cell value of a CSV row.
using CsvCell = std::variant<double, int, std::size_t, std::string>;

/// Comma-separated, header row, LF line endings.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header) {
    append_row(header.begin(), header.end());
  }

  void row(const std::vector<CsvCell>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      std::visit(
          [&](const auto& v) {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::string>)
              line += v;
            else
              line += format_number(v);
          },
          cells[i]);
    }
    out_ += line;
    out_ += '\n';
  }

  const std::string& str() const { return out_; }

 private:
  template <class It>
  void append_row(It begin, It end) {
    for (It it = begin; it != end; ++it) {
      if (it != begin) out_ += ',';
      out_ += *it;
    }
    out_ += '\n';
  }

  std::string out_;
};

/// Minimal ordered JSON writer for the flat summary documents.
class JsonBuilder {
 public:
  JsonBuilder& field(std::string_view key, double v) {
    return raw(key, format_number(v));
  }
  JsonBuilder& field(std::string_view key, int v) { return raw(key, std::to_string(v)); }
  JsonBuilder& field(std::string_view key, std::size_t v) {
    return raw(key, std::to_string(v));
  }
  JsonBuilder& field(std::string_view key, bool v) {
    return raw(key, v ? "true" : "false");
  }
  JsonBuilder& field(std::string_view key, const std::string& v) {
    return raw(key, "\"" + v + "\"");
  }
  JsonBuilder& field(std::string_view key, const std::vector<double>& xs) {
    std::string arr = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) arr += ',';
      arr += format_number(xs[i]);
    }
    arr += ']';
    return raw(key, arr);
  }
  JsonBuilder& field(std::string_view key, const std::vector<std::size_t>& xs) {
    std::string arr = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) arr += ',';
      arr += std::to_string(xs[i]);
    }
    arr += ']';
    return raw(key, arr);
  }

  std::string str() const { return "{" + body_ + "}\n"; }

 private:
  JsonBuilder& raw(std::string_view key, std::string_view value) {
    if (!body_.empty()) body_ += ',';
    body_ += '"';
    body_ += key;
    body_ += "\":";
    body_ += value;
    return *this;
  }

  std::string body_;
};

/// Writes to a temporary sibling then renames: a failed run never leaves a
/// partial output file behind.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  try {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!dir.empty()) fs::create_directories(dir);
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(std::random_device{}());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("atomic_write: cannot open " + tmp.string());
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      if (!out) throw IoError("atomic_write: short write to " + tmp.string());
    }
    fs::rename(tmp, path);
  } catch (const fs::filesystem_error& e) {
    throw IoError(std::string("atomic_write: ") + e.what());
  }
}

}  // namespace topochain

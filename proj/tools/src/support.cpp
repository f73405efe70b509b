#include "support.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "fluidbound/common.hpp"

namespace fluidbound::cli {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) row += ',';
    row += cells[i];
  }
  return row;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw IoError("short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename temp file onto " + path);
  }
}

std::string fnv1a64_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + path + " for hashing");
  }
  std::uint64_t hash = 14695981039346656037ULL;
  constexpr std::uint64_t kPrime = 1099511628211ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= kPrime;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(hash));
  return hex;
}

namespace {

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_pairs(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file " + path);
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string entry = trimmed(line);
    if (entry.empty() || entry[0] == '#') continue;
    const auto eq = entry.find('=');
    std::string key = eq == std::string::npos ? "" : trimmed(entry.substr(0, eq));
    if (key.empty()) {
      throw InvalidArgumentError("config file " + path + " line " +
                                 std::to_string(line_no) +
                                 ": expected key=value");
    }
    if (key == "config") {
      throw InvalidArgumentError("config file " + path + " line " +
                                 std::to_string(line_no) +
                                 ": nested config keys are not allowed");
    }
    pairs.emplace_back(std::move(key), trimmed(entry.substr(eq + 1)));
  }
  return pairs;
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["tool_version"] = kVersion;
  j["parameters"] = parameters;
  j["wall_time_seconds"] = wall_seconds;
  auto outputs = nlohmann::json::array();
  for (const auto& path : output_paths) {
    outputs.push_back({{"path", path}, {"fnv1a64", fnv1a64_file_hex(path)}});
  }
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

void write_manifest_sidecar(const RunManifest& manifest,
                            const std::string& out_path) {
  write_text_atomic(out_path + ".manifest.json", manifest.to_json());
}

int resolve_threads(int requested) {
  if (requested > 0) {
    return requested;
  }
  if (const char* env = std::getenv("FLUIDBOUND_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) {
      return parsed;
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (n <= 0) {
    return;
  }
  const int workers = std::min(std::max(threads, 1), n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) {
        return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back(body);
  }
  for (auto& t : pool) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

}  // namespace fluidbound::cli

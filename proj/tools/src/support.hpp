#ifndef FLUIDBOUND_TOOLS_SUPPORT_HPP
#define FLUIDBOUND_TOOLS_SUPPORT_HPP

// Shared plumbing for the command line tool: fixed-width numeric formatting,
// atomic file writes, FNV-1a content hashing, run manifests, and a small
// thread-pool helper for embarrassingly parallel sweeps.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fluidbound::cli {

// Shortest round-trippable decimal form, capped at 17 significant digits.
std::string format17(double v);

// Comma-joined CSV row; cells must already be escaped-free plain tokens.
std::string csv_join(const std::vector<std::string>& cells);

// Write content to path via a temp file in the same directory plus rename.
// Throws IoError on any filesystem failure.
void write_text_atomic(const std::string& path, const std::string& content);

// FNV-1a 64-bit hash of a file's bytes, as a 16-digit lowercase hex string.
// Throws IoError if the file cannot be read.
std::string fnv1a64_file_hex(const std::string& path);

// Parse a plain key=value config file, in file order. Blank lines and lines
// starting with '#' are skipped; keys and values are trimmed. Throws IoError
// if the file cannot be opened and InvalidArgumentError on malformed lines
// or on a nested "config" key.
std::vector<std::pair<std::string, std::string>> read_config_pairs(
    const std::string& path);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::vector<std::string> output_paths;  // hashed at serialization time
  double wall_seconds = 0.0;

  std::string to_json() const;
};

// Serialize the manifest next to the primary output as <out>.manifest.json.
void write_manifest_sidecar(const RunManifest& manifest,
                            const std::string& out_path);

// Resolve a thread count: explicit request, else FLUIDBOUND_THREADS, else
// hardware concurrency; always at least 1.
int resolve_threads(int requested);

// Run fn(i) for i in [0, n) on up to `threads` workers. Exceptions from
// workers are rethrown on the caller thread (first one wins).
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace fluidbound::cli

#endif  // FLUIDBOUND_TOOLS_SUPPORT_HPP

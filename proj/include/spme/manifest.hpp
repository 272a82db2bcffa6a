#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spme {

std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex_u64(std::uint64_t x);
std::string now_iso8601();

struct ArtifactEntry {
  std::string path;  // relative to the output directory
  std::uint64_t bytes = 0;
  std::string hash;  // fnv1a64, hex
};

// Stamp of one run: resolved configuration, seed, timestamps, and a content
// hash of every emitted data file. Re-running the recorded configuration and
// seed reproduces the data files byte for byte.
struct RunManifest {
  std::string tool = "spmelab";
  std::string version = "0.1.0";
  std::string command;
  std::string config_text;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string started;
  std::string finished;
  std::vector<ArtifactEntry> artifacts;

  void add_artifact(const std::string& out_dir, const std::string& name);
  std::string to_json() const;
  void write(const std::string& out_dir) const;  // <out_dir>/manifest.json
};

}  // namespace spme

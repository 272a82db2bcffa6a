#include "spme/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "spme/format.hpp"

namespace spme {

std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("fnv1a64_file: cannot open " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::string hex_u64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void RunManifest::add_artifact(const std::string& out_dir, const std::string& name) {
  const std::string full = out_dir + "/" + name;
  std::ifstream in(full, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("manifest: missing artifact " + full);
  ArtifactEntry e;
  e.path = name;
  e.bytes = static_cast<std::uint64_t>(in.tellg());
  e.hash = hex_u64(fnv1a64_file(full));
  artifacts.push_back(std::move(e));
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = tool;
  j["version"] = version;
  j["command"] = command;
  j["config"] = config_text;
  j["seed"] = seed;
  j["workers"] = workers;
  j["started"] = started;
  j["finished"] = finished;
  j["artifacts"] = nlohmann::json::array();
  for (const auto& a : artifacts)
    j["artifacts"].push_back({{"path", a.path}, {"bytes", a.bytes}, {"fnv1a64", a.hash}});
  return j.dump(2);
}

void RunManifest::write(const std::string& out_dir) const {
  std::ofstream out(out_dir + "/manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("manifest: cannot write to " + out_dir);
  out << to_json() << "\n";
}

}  // namespace spme
